//! Validity of ground sequents by enumerating truth assignments and
//! checking each against congruence saturation of a relation matrix.

use std::collections::BTreeSet;

use cutintro::syntax::{Formula, Sequent, Symbol, Term};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    Pred(Symbol, Vec<Term>),
    Eq(Term, Term),
}

fn atoms(f: &Formula, out: &mut BTreeSet<Atom>) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Pred(p, args) => {
            out.insert(Atom::Pred(p.clone(), args.clone()));
        }
        Formula::Eq(l, r) => {
            out.insert(Atom::Eq(l.clone(), r.clone()));
        }
        Formula::Not(a) => atoms(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Imp(a, b) => {
            atoms(a, out);
            atoms(b, out);
        }
        Formula::Quant(..) => panic!("quantified formula in a ground sequent"),
    }
}

fn eval(f: &Formula, val: &dyn Fn(&Atom) -> bool) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Pred(p, args) => val(&Atom::Pred(p.clone(), args.clone())),
        Formula::Eq(l, r) => val(&Atom::Eq(l.clone(), r.clone())),
        Formula::Not(a) => !eval(a, val),
        Formula::And(a, b) => eval(a, val) && eval(b, val),
        Formula::Or(a, b) => eval(a, val) || eval(b, val),
        Formula::Imp(a, b) => !eval(a, val) || eval(b, val),
        Formula::Quant(..) => unreachable!(),
    }
}

fn subterms(t: &Term, out: &mut BTreeSet<Term>) {
    out.insert(t.clone());
    if let Term::App(_, args) = t {
        for a in args {
            subterms(a, out);
        }
    }
}

/// Whether the literals fixed by `assign` have a model with equality.
#[allow(clippy::needless_range_loop)]
fn consistent(list: &[Atom], assign: &[bool]) -> bool {
    let mut terms = BTreeSet::new();
    for a in list {
        match a {
            Atom::Pred(_, args) => args.iter().for_each(|t| subterms(t, &mut terms)),
            Atom::Eq(l, r) => {
                subterms(l, &mut terms);
                subterms(r, &mut terms);
            }
        }
    }
    let terms: Vec<Term> = terms.into_iter().collect();
    let idx = |t: &Term| terms.binary_search(t).unwrap();
    let n = terms.len();
    let mut eq = vec![vec![false; n]; n];
    for (i, row) in eq.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, &v) in list.iter().zip(assign) {
        if let (Atom::Eq(l, r), true) = (a, v) {
            let (i, j) = (idx(l), idx(r));
            eq[i][j] = true;
            eq[j][i] = true;
        }
    }
    loop {
        for k in 0..n {
            for i in 0..n {
                if eq[i][k] {
                    for j in 0..n {
                        if eq[k][j] {
                            eq[i][j] = true;
                        }
                    }
                }
            }
        }
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if eq[i][j] {
                    continue;
                }
                if let (Term::App(f, xs), Term::App(g, ys)) = (&terms[i], &terms[j]) {
                    if f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| eq[idx(x)][idx(y)]) {
                        eq[i][j] = true;
                        eq[j][i] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    for (a, &v) in list.iter().zip(assign) {
        if let (Atom::Eq(l, r), false) = (a, v) {
            if eq[idx(l)][idx(r)] {
                return false;
            }
        }
    }
    for (a, &va) in list.iter().zip(assign) {
        for (b, &vb) in list.iter().zip(assign) {
            if let (Atom::Pred(p, xs), Atom::Pred(q, ys), true, false) = (a, b, va, vb) {
                if p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| eq[idx(x)][idx(y)]) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn brute_force_valid(s: &Sequent) -> bool {
    let mut set = BTreeSet::new();
    for f in s.ante.iter().chain(&s.succ) {
        atoms(f, &mut set);
    }
    let list: Vec<Atom> = set.into_iter().collect();
    assert!(list.len() <= 16, "too many atoms for enumeration");
    for bits in 0u32..1 << list.len() {
        let assign: Vec<bool> = (0..list.len()).map(|i| bits >> i & 1 == 1).collect();
        let val = |a: &Atom| assign[list.binary_search(a).unwrap()];
        let falsifies = s.ante.iter().all(|f| eval(f, &val)) && !s.succ.iter().any(|f| eval(f, &val));
        if falsifies && consistent(&list, &assign) {
            return false;
        }
    }
    true
}
