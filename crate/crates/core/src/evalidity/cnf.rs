//! Clause-form views of quantifier-free formulas over their own atoms.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Formula, Substitution, Symbol, Term};

/// Default cap on the number of literals produced by [`to_cnf`].
pub const DEFAULT_CNF_LITERAL_CAP: usize = 10_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Atom {
    Pred(Symbol, Vec<Term>),
    Eq(Term, Term),
}

impl Atom {
    pub fn to_formula(&self) -> Formula {
        match self {
            Atom::Pred(p, args) => Formula::Pred(p.clone(), args.clone()),
            Atom::Eq(l, r) => Formula::Eq(l.clone(), r.clone()),
        }
    }

    pub fn apply(&self, sigma: &Substitution) -> Atom {
        match self {
            Atom::Pred(p, args) => Atom::Pred(p.clone(), args.iter().map(|t| t.apply(sigma)).collect()),
            Atom::Eq(l, r) => Atom::Eq(l.apply(sigma), r.apply(sigma)),
        }
    }

    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Pred(_, args) => args.iter().collect(),
            Atom::Eq(l, r) => vec![l, r],
        }
    }

    pub fn contains_alpha(&self) -> bool {
        self.terms().into_iter().any(Term::contains_alpha)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { atom, positive: true }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { atom, positive: false }
    }

    pub fn negated(&self) -> Self {
        Literal { atom: self.atom.clone(), positive: !self.positive }
    }

    pub fn to_formula(&self) -> Formula {
        let a = self.atom.to_formula();
        if self.positive {
            a
        } else {
            Formula::not(a)
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type Clause = BTreeSet<Literal>;

pub fn is_tautological(c: &Clause) -> bool {
    c.iter().any(|l| l.positive && c.contains(&l.negated()))
}

pub fn clause_to_formula(c: &Clause) -> Formula {
    Formula::disj(c.iter().map(Literal::to_formula))
}

pub fn clause_contains_alpha(c: &Clause) -> bool {
    c.iter().any(|l| l.atom.contains_alpha())
}

/// A set of clauses, free of duplicates and of tautological clauses.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroundCnf {
    clauses: BTreeSet<Clause>,
}

impl GroundCnf {
    /// Builds a CNF, dropping tautological clauses.
    pub fn new(clauses: impl IntoIterator<Item = Clause>) -> Self {
        GroundCnf { clauses: clauses.into_iter().filter(|c| !is_tautological(c)).collect() }
    }

    /// Additionally drops every clause that is a strict superset of another.
    pub fn without_subsumed(&self) -> Self {
        let keep = self
            .clauses
            .iter()
            .filter(|c| !self.clauses.iter().any(|d| d != *c && d.is_subset(c)))
            .cloned()
            .collect();
        GroundCnf { clauses: keep }
    }

    pub fn clauses(&self) -> &BTreeSet<Clause> {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(BTreeSet::len).sum()
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.clauses.iter().flatten().map(|l| l.atom.clone()).collect()
    }

    /// The conjunction of the clauses as disjunctions, in clause order.
    pub fn to_formula(&self) -> Formula {
        Formula::conj(self.clauses.iter().map(clause_to_formula))
    }

    pub fn apply(&self, sigma: &Substitution) -> GroundCnf {
        GroundCnf::new(
            self.clauses
                .iter()
                .map(|c| c.iter().map(|l| Literal { atom: l.atom.apply(sigma), positive: l.positive }).collect()),
        )
    }
}

impl fmt::Display for GroundCnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

impl fmt::Debug for GroundCnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.clauses.iter()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("clause form exceeds {limit} literals")]
    TooLarge { limit: usize },
    #[error("formula is not quantifier-free")]
    Quantified,
}

/// Negation normal form over atoms, with the constants eliminated where possible.
#[derive(Clone, Debug)]
pub(crate) enum Nnf {
    True,
    False,
    Lit(Literal),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

pub(crate) fn nnf(f: &Formula, positive: bool) -> Result<Nnf, CnfError> {
    Ok(match f {
        Formula::True => {
            if positive {
                Nnf::True
            } else {
                Nnf::False
            }
        }
        Formula::False => {
            if positive {
                Nnf::False
            } else {
                Nnf::True
            }
        }
        Formula::Pred(p, args) => Nnf::Lit(Literal { atom: Atom::Pred(p.clone(), args.clone()), positive }),
        Formula::Eq(l, r) => Nnf::Lit(Literal { atom: Atom::Eq(l.clone(), r.clone()), positive }),
        Formula::Not(a) => nnf(a, !positive)?,
        Formula::And(a, b) => {
            let parts = vec![nnf(a, positive)?, nnf(b, positive)?];
            if positive {
                mk_and(parts)
            } else {
                mk_or(parts)
            }
        }
        Formula::Or(a, b) => {
            let parts = vec![nnf(a, positive)?, nnf(b, positive)?];
            if positive {
                mk_or(parts)
            } else {
                mk_and(parts)
            }
        }
        Formula::Imp(a, b) => {
            let parts = vec![nnf(a, !positive)?, nnf(b, positive)?];
            if positive {
                mk_or(parts)
            } else {
                mk_and(parts)
            }
        }
        Formula::Quant(..) => return Err(CnfError::Quantified),
    })
}

pub(crate) fn mk_and(parts: Vec<Nnf>) -> Nnf {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Nnf::True => {}
            Nnf::False => return Nnf::False,
            Nnf::And(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Nnf::True,
        1 => out.pop().unwrap(),
        _ => Nnf::And(out),
    }
}

pub(crate) fn mk_or(parts: Vec<Nnf>) -> Nnf {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Nnf::False => {}
            Nnf::True => return Nnf::True,
            Nnf::Or(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Nnf::False,
        1 => out.pop().unwrap(),
        _ => Nnf::Or(out),
    }
}

fn distribute(n: &Nnf, cap: usize) -> Result<Vec<Clause>, CnfError> {
    let clauses = match n {
        Nnf::True => Vec::new(),
        Nnf::False => vec![Clause::new()],
        Nnf::Lit(l) => vec![Clause::from([l.clone()])],
        Nnf::And(parts) => {
            let mut out = Vec::new();
            for p in parts {
                out.extend(distribute(p, cap)?);
            }
            out
        }
        Nnf::Or(parts) => {
            let mut acc: Vec<Clause> = vec![Clause::new()];
            for p in parts {
                let sub = distribute(p, cap)?;
                let mut next = Vec::with_capacity(acc.len() * sub.len());
                for a in &acc {
                    for s in &sub {
                        let mut c = a.clone();
                        c.extend(s.iter().cloned());
                        if !is_tautological(&c) {
                            next.push(c);
                        }
                    }
                }
                if next.iter().map(BTreeSet::len).sum::<usize>() > cap {
                    return Err(CnfError::TooLarge { limit: cap });
                }
                acc = next;
            }
            acc
        }
    };
    if clauses.iter().map(BTreeSet::len).sum::<usize>() > cap {
        return Err(CnfError::TooLarge { limit: cap });
    }
    Ok(clauses)
}

/// Clause form by negation normal form and distribution, with subsumed
/// clauses removed. The atoms of the result are atoms of `f`.
pub fn to_cnf(f: &Formula) -> Result<GroundCnf, CnfError> {
    to_cnf_capped(f, DEFAULT_CNF_LITERAL_CAP)
}

pub fn to_cnf_capped(f: &Formula, cap: usize) -> Result<GroundCnf, CnfError> {
    let n = nnf(f, true)?;
    Ok(GroundCnf::new(distribute(&n, cap)?).without_subsumed())
}
