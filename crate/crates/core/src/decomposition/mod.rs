//! Decompositions `U ∘ W` of term sets and of Herbrand structures.

mod delta;
mod fold;
mod table;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use delta::{delta_g, SimpleDecomposition};
pub use fold::{fold_delta_table, fold_delta_table_until};
pub use table::{build_delta_table, restrict_ci1, DeltaTable, TableOptions, DEFAULT_TERMSET_LIMIT};

use crate::herbrand::{HerbrandStructure, TermSet, TermSetError};
use crate::syntax::{Substitution, Symbol, Term, Tuple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("term set has {size} terms; subset enumeration is limited to {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("decomposition search exceeded its deadline")]
    Timeout,
}

/// `u[α1\w₁, …, αm\wm]`.
pub fn instantiate(u: &Term, row: &[Term]) -> Term {
    let vars: Vec<Symbol> = (1..=row.len()).map(Symbol::alpha).collect();
    u.apply(&Substitution::from_pairs(&vars, row))
}

fn alpha_index(v: &Symbol) -> Option<usize> {
    v.as_str().strip_prefix(crate::syntax::ALPHA_PREFIX)?.parse().ok()
}

/// True if every variable of `u` is one of `α1 … αm`.
fn vars_within(u: &Term, m: usize) -> bool {
    u.vars().iter().all(|v| alpha_index(v).is_some_and(|i| (1..=m).contains(&i)))
}

/// A decomposition of a term set over `α1 … αm`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decomposition {
    pub u: BTreeSet<Term>,
    pub w: BTreeSet<Vec<Term>>,
    pub m: usize,
}

impl Decomposition {
    /// `U = T`, `W = {()}`.
    pub fn trivial(t: &TermSet) -> Self {
        Decomposition { u: t.terms().clone(), w: BTreeSet::from([Vec::new()]), m: 0 }
    }

    pub fn size(&self) -> usize {
        self.u.len() + self.w.len()
    }

    pub fn expand(&self) -> BTreeSet<Term> {
        self.u.iter().flat_map(|u| self.w.iter().map(move |row| instantiate(u, row))).collect()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let us: Vec<String> = self.u.iter().map(Term::to_string).collect();
        let ws: Vec<String> = self.w.iter().map(|r| format!("({})", r.iter().map(Term::to_string).collect::<Vec<_>>().join(","))).collect();
        write!(f, "{{{}}} ∘ {{{}}}", us.join(", "), ws.join(", "))
    }
}

impl fmt::Debug for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Checks that `d` generates exactly `t`, with ground rows of arity `m`.
pub fn validate_decomposition(d: &Decomposition, t: &TermSet) -> bool {
    d.w.iter().all(|row| row.len() == d.m && row.iter().all(Term::is_ground))
        && d.u.iter().all(|u| vars_within(u, d.m))
        && d.expand() == *t.terms()
}

/// `(U₁, …, U_q) ∘ W` with `H_j = U_j ∘ W`. `U_j` holds `k_j`-tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureDecomposition {
    pub u: Vec<BTreeSet<Vec<Term>>>,
    pub w: BTreeSet<Vec<Term>>,
    pub m: usize,
}

impl StructureDecomposition {
    pub fn q(&self) -> usize {
        self.u.len()
    }

    /// `U_j`, 1-based.
    pub fn get(&self, j: usize) -> &BTreeSet<Vec<Term>> {
        &self.u[j - 1]
    }

    pub fn u_size(&self) -> usize {
        self.u.iter().map(BTreeSet::len).sum()
    }

    pub fn size(&self) -> usize {
        self.u_size() + self.w.len()
    }

    pub fn u_sizes(&self) -> Vec<usize> {
        self.u.iter().map(BTreeSet::len).collect()
    }

    pub fn expand(&self) -> HerbrandStructure {
        let sets = self
            .u
            .iter()
            .map(|uj| {
                uj.iter()
                    .flat_map(|tuple| self.w.iter().map(move |row| tuple.iter().map(|t| instantiate(t, row)).collect()))
                    .collect()
            })
            .collect();
        HerbrandStructure::new(sets)
    }

    /// The JSON block of the run report: `u` per formula index, `w` rows, `size`.
    pub fn to_json(&self) -> DecompositionJson {
        let u = self
            .u
            .iter()
            .enumerate()
            .filter(|(_, uj)| !uj.is_empty())
            .map(|(j, uj)| ((j + 1).to_string(), uj.iter().map(|t| Tuple(t).to_string()).collect()))
            .collect();
        let w = self.w.iter().map(|r| format!("({})", r.iter().map(Term::to_string).collect::<Vec<_>>().join(","))).collect();
        DecompositionJson { u, w, m: self.m, size: self.size(), u_sizes: self.u_sizes(), w_size: self.w.len() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub u: BTreeMap<String, Vec<String>>,
    pub w: Vec<String>,
    pub m: usize,
    pub size: usize,
    pub u_sizes: Vec<usize>,
    pub w_size: usize,
}

/// Splits `U` by reserved head: `U_j = { ū | #fj(ū) ∈ U }`.
pub fn to_structure_decomposition(d: &Decomposition, q: usize) -> Result<StructureDecomposition, TermSetError> {
    let mut u = vec![BTreeSet::new(); q];
    for t in &d.u {
        let j = TermSet::origin(t).ok_or_else(|| TermSetError::ForeignHead(t.clone()))?;
        if j == 0 || j > q {
            return Err(TermSetError::IndexOutOfRange(t.clone(), j, q));
        }
        u[j - 1].insert(t.args().to_vec());
    }
    Ok(StructureDecomposition { u, w: d.w.clone(), m: d.m })
}
