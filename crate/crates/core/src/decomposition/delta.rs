//! The generalized Δ-vector: a least general simple decomposition of a term list.

use serde::{Deserialize, Serialize};

use crate::syntax::Term;

/// `{u} ∘ W` for an ordered list `t₁ … tₙ`: row `i` of `W` instantiates
/// `u` to `tᵢ`.
///
/// Variables are `α1 … αm`, numbered by first occurrence in `u`; no column
/// is constant and no two columns are equal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleDecomposition {
    pub u: Term,
    /// `columns[j][i]` is the value of `α(j+1)` in row `i`.
    pub columns: Vec<Vec<Term>>,
    n: usize,
}

impl SimpleDecomposition {
    pub fn m(&self) -> usize {
        self.columns.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The `n` rows of arity `m`, in input order.
    pub fn rows(&self) -> Vec<Vec<Term>> {
        (0..self.n).map(|i| self.columns.iter().map(|c| c[i].clone()).collect()).collect()
    }

    /// `u[ᾱ\w̄ᵢ]` for every row.
    pub fn expand(&self) -> Vec<Term> {
        self.rows().iter().map(|row| super::instantiate(&self.u, row)).collect()
    }
}

fn generalize(ts: &[&Term], columns: &mut Vec<Vec<Term>>) -> Term {
    let first = ts[0];
    if ts.iter().all(|t| *t == first) {
        return first.clone();
    }
    if let Term::App(f, args) = first {
        let same_head = ts[1..].iter().all(|t| matches!(t, Term::App(g, a) if g == f && a.len() == args.len()));
        if same_head {
            let children = (0..args.len())
                .map(|j| {
                    let col: Vec<&Term> = ts.iter().map(|t| &t.args()[j]).collect();
                    generalize(&col, columns)
                })
                .collect();
            return Term::App(f.clone(), children);
        }
    }
    // Equal columns share a variable, so merging happens on creation.
    let col: Vec<Term> = ts.iter().map(|t| (*t).clone()).collect();
    let j = match columns.iter().position(|c| *c == col) {
        Some(j) => j,
        None => {
            columns.push(col);
            columns.len() - 1
        }
    };
    Term::alpha(j + 1)
}

/// Δ_G of a nonempty list of ground terms.
///
/// Variables are created in left-to-right order, so creation order is
/// first-occurrence order in `u`.
pub fn delta_g(ts: &[Term]) -> SimpleDecomposition {
    assert!(!ts.is_empty(), "delta_g needs at least one term");
    let refs: Vec<&Term> = ts.iter().collect();
    let mut columns = Vec::new();
    let u = generalize(&refs, &mut columns);
    SimpleDecomposition { u, columns, n: ts.len() }
}
