//! Schematic extended Herbrand sequents and the solution check.

use std::fmt;

use thiserror::Error;

use crate::decomposition::{instantiate, StructureDecomposition};
use crate::evalidity::{Oracle, Validity};
use crate::syntax::{Formula, Sequent, Sigma1Sequent, Substitution, Symbol, Term, Tuple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EhsError {
    #[error("decomposition covers {found} formulas, the end-sequent has {expected}")]
    FormulaCount { expected: usize, found: usize },
    #[error("formula {index} takes {expected}-tuples, decomposition has a {found}-tuple")]
    TupleArity { index: usize, expected: usize, found: usize },
    #[error("formula {index} has no quantifier block but the decomposition instantiates it")]
    Unquantified { index: usize },
    #[error("row {row} of W has arity {found}, expected {expected}")]
    RowArity { row: String, expected: usize, found: usize },
    #[error("row {0} of W contains a grammar variable")]
    AlphaInRow(String),
}

/// One instance `F_i[x̄\ū]` of the end-sequent, with `ū = ()` for formulas
/// without a quantifier block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub formula: usize,
    pub tuple: Vec<Term>,
    pub instance: Formula,
}

impl Instance {
    /// True if the instance does not mention `ᾱ`.
    pub fn is_ground(&self) -> bool {
        !self.instance.free_vars().iter().any(Symbol::is_alpha)
    }
}

/// `X(ᾱ) → ⋀ X(w̄ᵢ), Γ ⊢ Δ`.
#[derive(Clone, Debug)]
pub struct SchematicEhs {
    pub base: Sigma1Sequent,
    pub decomposition: StructureDecomposition,
    /// `α1 … αm`.
    pub vars: Vec<Symbol>,
    pub w: Vec<Vec<Term>>,
    /// `Γ`, in formula order.
    pub gamma: Vec<Instance>,
    /// `Δ`, in formula order.
    pub delta: Vec<Instance>,
}

pub fn build_schematic_ehs(s: &Sigma1Sequent, d: &StructureDecomposition) -> Result<SchematicEhs, EhsError> {
    if d.q() != s.q() {
        return Err(EhsError::FormulaCount { expected: s.q(), found: d.q() });
    }
    for row in &d.w {
        if row.len() != d.m {
            return Err(EhsError::RowArity { row: Tuple(row).to_string(), expected: d.m, found: row.len() });
        }
        if row.iter().any(Term::contains_alpha) {
            return Err(EhsError::AlphaInRow(Tuple(row).to_string()));
        }
    }
    let mut gamma = Vec::new();
    let mut delta = Vec::new();
    for i in 1..=s.q() {
        let pf = s.formula(i);
        let side = if i <= s.p() { &mut gamma } else { &mut delta };
        if pf.arity() == 0 {
            if !d.get(i).is_empty() {
                return Err(EhsError::Unquantified { index: i });
            }
            side.push(Instance { formula: i, tuple: Vec::new(), instance: pf.matrix.clone() });
            continue;
        }
        for tuple in d.get(i) {
            if tuple.len() != pf.arity() {
                return Err(EhsError::TupleArity { index: i, expected: pf.arity(), found: tuple.len() });
            }
            side.push(Instance { formula: i, tuple: tuple.clone(), instance: pf.instance(tuple) });
        }
    }
    Ok(SchematicEhs {
        base: s.clone(),
        decomposition: d.clone(),
        vars: (1..=d.m).map(Symbol::alpha).collect(),
        w: d.w.iter().cloned().collect(),
        gamma,
        delta,
    })
}

impl SchematicEhs {
    /// `k + Σ|U_i|`.
    pub fn size(&self) -> usize {
        self.w.len() + self.decomposition.u_size()
    }

    pub fn k(&self) -> usize {
        self.w.len()
    }

    pub fn gamma_formulas(&self) -> Vec<Formula> {
        self.gamma.iter().map(|i| i.instance.clone()).collect()
    }

    pub fn delta_formulas(&self) -> Vec<Formula> {
        self.delta.iter().map(|i| i.instance.clone()).collect()
    }

    pub fn has_equality(&self) -> bool {
        self.base.has_equality()
    }

    /// `A[ᾱ\w̄]`.
    pub fn at_row(&self, a: &Formula, row: &[Term]) -> Formula {
        a.apply(&Substitution::from_pairs(&self.vars, row))
    }

    /// `⋀ᵢ A[ᾱ\w̄ᵢ]`; `$true` when `W` is empty.
    pub fn conj_rows(&self, a: &Formula) -> Formula {
        Formula::conj(self.w.iter().map(|row| self.at_row(a, row)))
    }

    /// `S~[X\λᾱ.A]`.
    pub fn instantiate(&self, a: &Formula) -> Sequent {
        let mut ante = vec![Formula::imp(a.clone(), self.conj_rows(a))];
        ante.extend(self.gamma_formulas());
        Sequent::new(ante, self.delta_formulas())
    }

    /// The `α`-free part `Γ₀ ⊢ Δ₀` of the context.
    pub fn ground_context(&self) -> (Vec<Formula>, Vec<Formula>) {
        let pick = |xs: &[Instance]| xs.iter().filter(|i| i.is_ground()).map(|i| i.instance.clone()).collect();
        (pick(&self.gamma), pick(&self.delta))
    }

    /// `A[ᾱ\w̄₁], …, A[ᾱ\w̄ₖ], Γ₀ ⊢ Δ₀`: the premise used on the right of the cut.
    pub fn right_sequent(&self, a: &Formula) -> Sequent {
        let (g0, d0) = self.ground_context();
        let mut ante: Vec<Formula> = self.w.iter().map(|row| self.at_row(a, row)).collect();
        ante.extend(g0);
        Sequent::new(ante, d0)
    }

    /// `Γ ⊢ Δ, A`: the premise used on the left of the cut.
    pub fn left_sequent(&self, a: &Formula) -> Sequent {
        let mut succ = self.delta_formulas();
        succ.push(a.clone());
        Sequent::new(self.gamma_formulas(), succ)
    }

    /// The instance rows `ū[ᾱ\w̄]` of formula `i`, as in the expanded structure.
    pub fn expanded(&self, i: usize) -> Vec<Vec<Term>> {
        self.decomposition
            .get(i)
            .iter()
            .flat_map(|tuple| self.w.iter().map(move |row| tuple.iter().map(|t| instantiate(t, row)).collect()))
            .collect()
    }
}

impl fmt::Display for SchematicEhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs: Vec<String> = self.vars.iter().map(Symbol::to_string).collect();
        let rows: Vec<String> = self.w.iter().map(|r| format!("X({})", r.iter().map(Term::to_string).collect::<Vec<_>>().join(","))).collect();
        let rhs = if rows.is_empty() { "$true".to_string() } else { rows.join(" & ") };
        write!(f, "X({}) -> {}", xs.join(","), rhs)?;
        for i in &self.gamma {
            write!(f, ", {}", i.instance)?;
        }
        write!(f, " ⊢ ")?;
        let ds: Vec<String> = self.delta.iter().map(|i| i.instance.to_string()).collect();
        write!(f, "{}", ds.join(", "))
    }
}

/// Decides whether `λᾱ.A` solves `e`: the instantiated sequent must be a
/// quasi-tautology (a tautology for a propositional oracle).
pub fn check_solution(e: &SchematicEhs, a: &Formula, oracle: &dyn Oracle) -> Validity {
    oracle.check(&e.instantiate(a))
}
