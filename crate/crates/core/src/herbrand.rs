//! Herbrand structures, Herbrand sequents, and the single-term-set encoding.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Sequent, Sigma1Sequent, Symbol, Term};

/// Instance tuples `H₁ … H_q`, one set per formula of the end-sequent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HerbrandStructure {
    sets: Vec<BTreeSet<Vec<Term>>>,
}

impl HerbrandStructure {
    pub fn new(sets: Vec<BTreeSet<Vec<Term>>>) -> Self {
        HerbrandStructure { sets }
    }

    pub fn empty(q: usize) -> Self {
        HerbrandStructure { sets: vec![BTreeSet::new(); q] }
    }

    pub fn q(&self) -> usize {
        self.sets.len()
    }

    /// `H_i`, 1-based.
    pub fn get(&self, i: usize) -> &BTreeSet<Vec<Term>> {
        &self.sets[i - 1]
    }

    pub fn insert(&mut self, i: usize, tuple: Vec<Term>) -> bool {
        self.sets[i - 1].insert(tuple)
    }

    /// `Σ|H_i|`.
    pub fn size(&self) -> usize {
        self.sets.iter().map(BTreeSet::len).sum()
    }

    /// True when every formula is instantiated at most once.
    pub fn is_trivial(&self) -> bool {
        self.sets.iter().all(|s| s.len() <= 1)
    }
}

/// A set of ground terms whose heads are the reserved symbols `#f<i>`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TermSet {
    terms: BTreeSet<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermSetError {
    #[error("term `{0}` is not headed by a reserved formula symbol")]
    ForeignHead(Term),
    #[error("term `{0}` refers to formula {1}, but the structure has only {2}")]
    IndexOutOfRange(Term, usize, usize),
}

impl TermSet {
    pub fn new(terms: impl IntoIterator<Item = Term>) -> Self {
        TermSet { terms: terms.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Term> {
        self.terms.iter()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.terms.contains(t)
    }

    pub fn terms(&self) -> &BTreeSet<Term> {
        &self.terms
    }

    /// Formula index of a term, if its head is reserved.
    pub fn origin(t: &Term) -> Option<usize> {
        t.head().and_then(Symbol::reserved_index)
    }
}

/// `T = { f_i(t̄) | t̄ ∈ H_i, k_i > 0 }`.
pub fn encode_termset(h: &HerbrandStructure) -> TermSet {
    let mut terms = BTreeSet::new();
    for i in 1..=h.q() {
        let head = Symbol::reserved_head(i);
        for tuple in h.get(i) {
            if !tuple.is_empty() {
                terms.insert(Term::App(head.clone(), tuple.clone()));
            }
        }
    }
    TermSet { terms }
}

/// Inverse of [`encode_termset`] for a structure with `q` formulas.
pub fn decode_termset(t: &TermSet, q: usize) -> Result<HerbrandStructure, TermSetError> {
    let mut h = HerbrandStructure::empty(q);
    for term in t.iter() {
        let i = TermSet::origin(term).ok_or_else(|| TermSetError::ForeignHead(term.clone()))?;
        if i == 0 || i > q {
            return Err(TermSetError::IndexOutOfRange(term.clone(), i, q));
        }
        h.insert(i, term.args().to_vec());
    }
    Ok(h)
}

/// The quantifier-free instance sequent `𝓕₁ ∪ … ∪ 𝓕ₚ ⊢ 𝓕ₚ₊₁ ∪ … ∪ 𝓕_q`.
///
/// Formulas without a quantifier block contribute themselves; the others
/// contribute one instance per tuple of `H_i`.
pub fn herbrand_sequent(s: &Sigma1Sequent, h: &HerbrandStructure) -> Sequent {
    let mut seq = Sequent::default();
    for i in 1..=s.q() {
        let pf = s.formula(i);
        let side = if i <= s.p() { &mut seq.ante } else { &mut seq.succ };
        if pf.arity() == 0 {
            side.push(pf.matrix.clone());
        } else {
            side.extend(h.get(i).iter().map(|t| pf.instance(t)));
        }
    }
    seq
}
