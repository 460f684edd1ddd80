//! Rule-by-rule checking of [`LKProof`]s.

use std::fmt;

use super::{Inference, LKProof, ProofNode};
use crate::evalidity::{EufOracle, Oracle};
use crate::syntax::{Formula, Quantifier, Sequent, Substitution, Term};

/// The first failing node, as a path of premise indices from the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckFailure {
    pub path: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.path.iter().map(usize::to_string).collect();
        write!(f, "at [{}]: {}", p.join("."), self.reason)
    }
}

pub fn check_proof(p: &LKProof) -> bool {
    check_proof_with(p, &EufOracle::default()).is_ok()
}

pub fn check_proof_with(p: &LKProof, oracle: &dyn Oracle) -> Result<(), CheckFailure> {
    let mut path = Vec::new();
    check_node(&p.root, oracle, &mut path)
}

fn check_node(n: &ProofNode, oracle: &dyn Oracle, path: &mut Vec<usize>) -> Result<(), CheckFailure> {
    if let Err(reason) = check_inference(n, oracle) {
        return Err(CheckFailure { path: path.clone(), reason });
    }
    for (i, p) in n.premises.iter().enumerate() {
        path.push(i);
        check_node(p, oracle, path)?;
        path.pop();
    }
    Ok(())
}

fn remove_one(v: &[Formula], f: &Formula) -> Option<Vec<Formula>> {
    let i = v.iter().position(|x| x == f)?;
    let mut out = v.to_vec();
    out.remove(i);
    Some(out)
}

fn same(a: &[Formula], b: &[Formula]) -> bool {
    Sequent::new(a.to_vec(), Vec::new()).same_multiset(&Sequent::new(b.to_vec(), Vec::new()))
}

fn plus(v: &[Formula], f: &Formula) -> Vec<Formula> {
    let mut out = v.to_vec();
    out.push(f.clone());
    out
}

fn premises<const N: usize>(n: &ProofNode) -> Result<[&Sequent; N], String> {
    if n.premises.len() != N {
        return Err(format!("expected {N} premises, found {}", n.premises.len()));
    }
    Ok(std::array::from_fn(|i| &n.premises[i].conclusion))
}

/// The matrix instance `F[x̄\t̄]` of a block `Qx̄.F`.
fn block_instance(principal: &Formula, q: Quantifier, tuple: &[Term]) -> Result<Formula, String> {
    match principal {
        Formula::Quant(q2, vars, body) if *q2 == q && vars.len() == tuple.len() => {
            Ok(body.apply(&Substitution::from_pairs(vars, tuple)))
        }
        _ => Err(format!("`{principal}` is not a block of {} matching {}-tuples", if q == Quantifier::Forall { "∀" } else { "∃" }, tuple.len())),
    }
}

fn check_inference(n: &ProofNode, oracle: &dyn Oracle) -> Result<(), String> {
    let c = &n.conclusion;
    match &n.inference {
        Inference::Axiom => {
            premises::<0>(n)?;
            let ok = match (c.ante.as_slice(), c.succ.as_slice()) {
                ([a], [b]) => a == b,
                ([], [Formula::Eq(l, r)]) => l == r,
                _ => false,
            };
            ok.then_some(()).ok_or_else(|| format!("`{c}` is not an axiom"))
        }
        Inference::OracleLeaf { .. } => {
            premises::<0>(n)?;
            if !c.is_quantifier_free() {
                return Err(format!("leaf `{c}` is not quantifier-free"));
            }
            oracle.check(c).is_valid().then_some(()).ok_or_else(|| format!("leaf `{c}` is not valid"))
        }
        Inference::ForallLeft { principal, tuple } => {
            let [p] = premises::<1>(n)?;
            let inst = block_instance(principal, Quantifier::Forall, tuple)?;
            let rest = remove_one(&c.ante, principal).ok_or("principal formula missing from the antecedent")?;
            (same(&p.ante, &plus(&rest, &inst)) && same(&p.succ, &c.succ)).then_some(()).ok_or_else(|| "premise does not match ∀:l".into())
        }
        Inference::ExistsRight { principal, tuple } => {
            let [p] = premises::<1>(n)?;
            let inst = block_instance(principal, Quantifier::Exists, tuple)?;
            let rest = remove_one(&c.succ, principal).ok_or("principal formula missing from the succedent")?;
            (same(&p.succ, &plus(&rest, &inst)) && same(&p.ante, &c.ante)).then_some(()).ok_or_else(|| "premise does not match ∃:r".into())
        }
        Inference::ForallRight { principal, eigenvars } => {
            let [p] = premises::<1>(n)?;
            let mut distinct = eigenvars.clone();
            distinct.sort();
            distinct.dedup();
            if distinct.len() != eigenvars.len() {
                return Err("eigenvariables are not distinct".into());
            }
            let free = c.free_vars();
            if let Some(v) = eigenvars.iter().find(|v| free.contains(*v)) {
                return Err(format!("eigenvariable {v} occurs in the conclusion"));
            }
            let vars: Vec<Term> = eigenvars.iter().map(|v| Term::Var(v.clone())).collect();
            let inst = block_instance(principal, Quantifier::Forall, &vars)?;
            let rest = remove_one(&c.succ, principal).ok_or("principal formula missing from the succedent")?;
            (same(&p.succ, &plus(&rest, &inst)) && same(&p.ante, &c.ante)).then_some(()).ok_or_else(|| "premise does not match ∀:r".into())
        }
        Inference::Cut { formula } => {
            let [l, r] = premises::<2>(n)?;
            let l_succ = remove_one(&l.succ, formula).ok_or("cut formula missing from the left premise")?;
            let r_ante = remove_one(&r.ante, formula).ok_or("cut formula missing from the right premise")?;
            let ante: Vec<Formula> = l.ante.iter().chain(&r_ante).cloned().collect();
            let succ: Vec<Formula> = l_succ.iter().chain(&r.succ).cloned().collect();
            (same(&c.ante, &ante) && same(&c.succ, &succ)).then_some(()).ok_or_else(|| "conclusion does not match the cut".into())
        }
        Inference::ContractionLeft { formula } => {
            let [p] = premises::<1>(n)?;
            let ok = c.ante.contains(formula) && same(&p.ante, &plus(&c.ante, formula)) && same(&p.succ, &c.succ);
            ok.then_some(()).ok_or_else(|| "premise does not match c:l".into())
        }
        Inference::ContractionRight { formula } => {
            let [p] = premises::<1>(n)?;
            let ok = c.succ.contains(formula) && same(&p.succ, &plus(&c.succ, formula)) && same(&p.ante, &c.ante);
            ok.then_some(()).ok_or_else(|| "premise does not match c:r".into())
        }
        Inference::WeakeningLeft { formula } => {
            let [p] = premises::<1>(n)?;
            (same(&c.ante, &plus(&p.ante, formula)) && same(&p.succ, &c.succ)).then_some(()).ok_or_else(|| "premise does not match w:l".into())
        }
        Inference::WeakeningRight { formula } => {
            let [p] = premises::<1>(n)?;
            (same(&c.succ, &plus(&p.succ, formula)) && same(&p.ante, &c.ante)).then_some(()).ok_or_else(|| "premise does not match w:r".into())
        }
    }
}
