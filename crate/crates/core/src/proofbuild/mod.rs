//! LK proofs with a single universal cut, their checker, and proof metrics.

mod build;
mod check;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Formula, Sequent, Symbol, Term, Tuple};

pub use build::{build_cut_free_proof, build_proof_with_cut};
pub use check::{check_proof, check_proof_with, CheckFailure};

/// The inference at a proof node. Quantifier rules act on whole blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Inference {
    /// `A ⊢ A` or `⊢ t = t`.
    Axiom,
    /// A quantifier-free sequent delegated to the validity oracle.
    OracleLeaf { certified: bool },
    /// `F[x̄\t̄], Γ ⊢ Δ` over `∀x̄.F, Γ ⊢ Δ`.
    ForallLeft { principal: Formula, tuple: Vec<Term> },
    /// `Γ ⊢ Δ, F[x̄\t̄]` over `Γ ⊢ Δ, ∃x̄.F`.
    ExistsRight { principal: Formula, tuple: Vec<Term> },
    /// `Γ ⊢ Δ, F[x̄\ᾱ]` over `Γ ⊢ Δ, ∀x̄.F`; `ᾱ` must not occur in the conclusion.
    ForallRight { principal: Formula, eigenvars: Vec<Symbol> },
    Cut { formula: Formula },
    ContractionLeft { formula: Formula },
    ContractionRight { formula: Formula },
    WeakeningLeft { formula: Formula },
    WeakeningRight { formula: Formula },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofNode {
    pub conclusion: Sequent,
    #[serde(flatten)]
    pub inference: Inference,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<ProofNode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LKProof {
    pub root: ProofNode,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofMetrics {
    /// Number of inferences, leaves included.
    pub length: usize,
    /// Number of `∀:l` and `∃:r` block introductions.
    pub comq: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("the formula is not a solution of the schematic sequent")]
    NotASolution,
    #[error("the decomposition has no rows, so the cut would have no instances")]
    EmptyW,
    #[error("the cut's right premise `{0}` is not valid")]
    RightPremise(String),
    #[error("the cut's left premise `{0}` is not valid")]
    LeftPremise(String),
    #[error("eigenvariable {0} occurs in the conclusion of the ∀:r inference")]
    Eigenvariable(String),
    #[error("the Herbrand sequent `{0}` is not valid")]
    HerbrandSequent(String),
}

impl ProofNode {
    pub fn leaf(conclusion: Sequent, inference: Inference) -> Self {
        ProofNode { conclusion, inference, premises: Vec::new() }
    }

    pub fn for_each(&self, f: &mut impl FnMut(&ProofNode)) {
        f(self);
        for p in &self.premises {
            p.for_each(f);
        }
    }

    fn fmt_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        write!(f, "{:width$}", "", width = 2 * depth)?;
        match &self.inference {
            Inference::Axiom => write!(f, "ax")?,
            Inference::OracleLeaf { certified } => write!(f, "leaf{}", if *certified { "" } else { "?" })?,
            Inference::ForallLeft { principal, tuple } => write!(f, "∀:l {principal} {}", Tuple(tuple))?,
            Inference::ExistsRight { principal, tuple } => write!(f, "∃:r {principal} {}", Tuple(tuple))?,
            Inference::ForallRight { principal, eigenvars } => {
                let vs: Vec<&str> = eigenvars.iter().map(Symbol::as_str).collect();
                write!(f, "∀:r {principal} [{}]", vs.join(","))?
            }
            Inference::Cut { formula } => write!(f, "cut {formula}")?,
            Inference::ContractionLeft { formula } => write!(f, "c:l {formula}")?,
            Inference::ContractionRight { formula } => write!(f, "c:r {formula}")?,
            Inference::WeakeningLeft { formula } => write!(f, "w:l {formula}")?,
            Inference::WeakeningRight { formula } => write!(f, "w:r {formula}")?,
        }
        writeln!(f, " :: {}", self.conclusion)?;
        for p in &self.premises {
            p.fmt_indented(f, depth + 1)?;
        }
        Ok(())
    }
}

impl LKProof {
    pub fn metrics(&self) -> ProofMetrics {
        metrics(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("proofs serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// One line per inference, root first, premises indented by two spaces:
/// `<tag> <details> :: <conclusion>`.
impl fmt::Display for LKProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt_indented(f, 0)
    }
}

pub fn metrics(p: &LKProof) -> ProofMetrics {
    let mut m = ProofMetrics::default();
    p.root.for_each(&mut |n| {
        m.length += 1;
        if matches!(n.inference, Inference::ForallLeft { .. } | Inference::ExistsRight { .. }) {
            m.comq += 1;
        }
    });
    m
}
