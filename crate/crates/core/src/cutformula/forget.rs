//! Forgetful resolution and paramodulation: each step replaces two clauses
//! by one consequence of them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::evalidity::{Atom, Clause, GroundCnf, Literal};
use crate::syntax::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Res,
    Para,
}

/// `C ∧ ⋀_{i ∉ {j,k}} Cᵢ` together with the inference that produced `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForgetStep {
    pub result: GroundCnf,
    pub rule: Rule,
    pub clause: Clause,
}

/// All propositional resolvents of `c1` and `c2`.
pub fn resolvents(c1: &Clause, c2: &Clause) -> Vec<Clause> {
    let mut out = Vec::new();
    for l in c1 {
        let nl = l.negated();
        if c2.contains(&nl) {
            let mut r: Clause = c1.iter().filter(|x| *x != l).cloned().collect();
            r.extend(c2.iter().filter(|x| **x != nl).cloned());
            out.push(r);
        }
    }
    out
}

/// Every term obtained from `t` by replacing exactly one occurrence of `from` by `to`.
fn rewrite_once(t: &Term, from: &Term, to: &Term, out: &mut Vec<Term>) {
    if t == from {
        out.push(to.clone());
    }
    if let Term::App(f, args) = t {
        for (i, a) in args.iter().enumerate() {
            let mut inner = Vec::new();
            rewrite_once(a, from, to, &mut inner);
            for r in inner {
                let mut new_args = args.clone();
                new_args[i] = r;
                out.push(Term::App(f.clone(), new_args));
            }
        }
    }
}

fn rewrite_atom(a: &Atom, from: &Term, to: &Term) -> Vec<Atom> {
    match a {
        Atom::Eq(l, r) => {
            let mut out = Vec::new();
            let mut ls = Vec::new();
            rewrite_once(l, from, to, &mut ls);
            out.extend(ls.into_iter().map(|x| Atom::Eq(x, r.clone())));
            let mut rs = Vec::new();
            rewrite_once(r, from, to, &mut rs);
            out.extend(rs.into_iter().map(|x| Atom::Eq(l.clone(), x)));
            out
        }
        Atom::Pred(p, args) => {
            let mut out = Vec::new();
            for (i, t) in args.iter().enumerate() {
                let mut ts = Vec::new();
                rewrite_once(t, from, to, &mut ts);
                for x in ts {
                    let mut new_args = args.clone();
                    new_args[i] = x;
                    out.push(Atom::Pred(p.clone(), new_args));
                }
            }
            out
        }
    }
}

/// Paramodulants from `src` into `dst`: a positive equation of `src`, in
/// either orientation, rewrites one occurrence inside one literal of `dst`.
fn paramodulants_into(src: &Clause, dst: &Clause, out: &mut Vec<Clause>) {
    for eq in src {
        let Atom::Eq(s, t) = &eq.atom else { continue };
        if !eq.positive || s == t {
            continue;
        }
        let rest: Vec<&Literal> = src.iter().filter(|x| *x != eq).collect();
        for (from, to) in [(s, t), (t, s)] {
            for lit in dst {
                for atom in rewrite_atom(&lit.atom, from, to) {
                    let mut c: Clause = rest.iter().map(|x| (*x).clone()).collect();
                    c.extend(dst.iter().filter(|x| *x != lit).cloned());
                    c.insert(Literal { atom, positive: lit.positive });
                    out.push(c);
                }
            }
        }
    }
}

/// Ground paramodulants of `c1` and `c2` in both directions.
pub fn paramodulants(c1: &Clause, c2: &Clause) -> Vec<Clause> {
    let mut out = Vec::new();
    paramodulants_into(c1, c2, &mut out);
    paramodulants_into(c2, c1, &mut out);
    out
}

/// A positive `t = t` makes a clause valid modulo equality.
fn is_e_trivial(c: &Clause) -> bool {
    c.iter().any(|l| l.positive && matches!(&l.atom, Atom::Eq(s, t) if s == t))
}

/// Successors of `f` under forgetful inference, deduplicated by result and
/// in a deterministic order. Paramodulation is used only when `equality` is set.
pub fn forget_steps(f: &GroundCnf, equality: bool) -> Vec<ForgetStep> {
    let clauses: Vec<&Clause> = f.clauses().iter().collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for j in 0..clauses.len() {
        for k in j + 1..clauses.len() {
            let (cj, ck) = (clauses[j], clauses[k]);
            let mut produced: Vec<(Rule, Clause)> = resolvents(cj, ck).into_iter().map(|c| (Rule::Res, c)).collect();
            if equality {
                produced.extend(paramodulants(cj, ck).into_iter().map(|c| (Rule::Para, c)));
            }
            for (rule, c) in produced {
                let mut rest: Vec<Clause> = clauses.iter().enumerate().filter(|(i, _)| *i != j && *i != k).map(|(_, c)| (*c).clone()).collect();
                if !(equality && is_e_trivial(&c)) {
                    rest.push(c.clone());
                }
                let result = GroundCnf::new(rest);
                if seen.insert(result.clone()) {
                    out.push(ForgetStep { result, rule, clause: c });
                }
            }
        }
    }
    out
}

/// `forget(F)` as a set of clause sets.
pub fn forget(f: &GroundCnf) -> BTreeSet<GroundCnf> {
    forget_steps(f, true).into_iter().map(|s| s.result).collect()
}
