//! Cut formulas: the schematic extended Herbrand sequent, its canonical
//! solution, and smaller solutions found by forgetful inference.

mod ehs;
pub mod forget;
mod sf;

use serde::{Deserialize, Serialize};

pub use ehs::{build_schematic_ehs, check_solution, EhsError, Instance, SchematicEhs};
pub use forget::{forget, forget_steps, ForgetStep, Rule};
pub use sf::{sf_improve, SfOptions, SfResult, TraceStep, DEFAULT_SF_NODE_CAP};

use crate::evalidity::{to_cnf, CnfError, GroundCnf};
use crate::syntax::Formula;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Provenance {
    Canonical,
    /// Node id in the improvement trace.
    Sf { node: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionCandidate {
    pub formula: Formula,
    pub cnf: GroundCnf,
    pub provenance: Provenance,
}

/// `C = ⋀Γ ∧ ¬⋁Δ`; the negated disjunct is omitted when `Δ` is empty.
pub fn canonical_formula(e: &SchematicEhs) -> Formula {
    let gamma = Formula::conj(e.gamma_formulas());
    if e.delta.is_empty() {
        return gamma;
    }
    let neg = Formula::not(Formula::disj(e.delta_formulas()));
    if e.gamma.is_empty() {
        neg
    } else {
        Formula::and(gamma, neg)
    }
}

pub fn canonical_solution(e: &SchematicEhs) -> Result<SolutionCandidate, CnfError> {
    let formula = canonical_formula(e);
    let cnf = to_cnf(&formula)?;
    Ok(SolutionCandidate { formula, cnf, provenance: Provenance::Canonical })
}

/// Smallest formula, ties broken by printed form.
pub fn select_best(cands: &[SolutionCandidate]) -> Option<&SolutionCandidate> {
    cands.iter().min_by_key(|c| (c.formula.size(), c.formula.to_string()))
}
