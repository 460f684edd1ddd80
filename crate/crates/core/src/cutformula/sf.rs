//! The solution-improvement search over forgetful consequences.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::ehs::SchematicEhs;
use super::forget::{forget_steps, Rule};
use super::{Provenance, SolutionCandidate};
use crate::evalidity::{clause_contains_alpha, GroundCnf, Oracle, Validity};

pub const DEFAULT_SF_NODE_CAP: usize = 10_000;

#[derive(Clone, Debug)]
pub struct SfOptions {
    pub node_cap: usize,
    /// Use paramodulation; unset for equality-free inputs.
    pub equality: bool,
    pub deadline: Option<Instant>,
}

impl Default for SfOptions {
    fn default() -> Self {
        SfOptions { node_cap: DEFAULT_SF_NODE_CAP, equality: true, deadline: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub parent: usize,
    pub child: usize,
    pub rule: String,
    pub clause: String,
}

#[derive(Clone, Debug, Default)]
pub struct SfResult {
    pub candidates: Vec<SolutionCandidate>,
    pub trace: Vec<TraceStep>,
    /// Node cap or deadline reached; `candidates` is what was found so far.
    pub truncated: bool,
    pub nodes: usize,
    /// Guard checks the oracle could not decide.
    pub unknown: usize,
}

struct Search<'a> {
    e: &'a SchematicEhs,
    oracle: &'a dyn Oracle,
    opts: &'a SfOptions,
    visited: BTreeSet<GroundCnf>,
    emitted: BTreeSet<GroundCnf>,
    out: SfResult,
}

impl Search<'_> {
    /// `B[ᾱ\w̄₁], …, B[ᾱ\w̄ₖ], Γ₀ ⊢ Δ₀`.
    fn guard(&mut self, b: &GroundCnf) -> bool {
        match self.oracle.check(&self.e.right_sequent(&b.to_formula())) {
            Validity::Valid => true,
            Validity::Invalid => false,
            Validity::Unknown => {
                self.out.unknown += 1;
                false
            }
        }
    }

    fn out_of_budget(&mut self) -> bool {
        if self.out.nodes >= self.opts.node_cap || self.opts.deadline.is_some_and(|d| Instant::now() > d) {
            self.out.truncated = true;
        }
        self.out.truncated
    }

    fn expand(&mut self, cnf: GroundCnf) {
        if self.out_of_budget() {
            return;
        }
        let id = self.out.nodes;
        self.out.nodes += 1;
        let pruned = GroundCnf::new(cnf.clauses().iter().filter(|c| clause_contains_alpha(c)).cloned());
        // Pruning keeps the left premise valid; the right one is rechecked.
        let cur = if pruned != cnf && self.guard(&pruned) {
            self.out.trace.push(TraceStep { parent: id, child: id, rule: "prune".into(), clause: String::new() });
            pruned
        } else {
            cnf
        };
        self.visited.insert(cur.clone());
        if self.emitted.insert(cur.clone()) {
            self.out.candidates.push(SolutionCandidate { formula: cur.to_formula(), cnf: cur.clone(), provenance: Provenance::Sf { node: id } });
        }
        for step in forget_steps(&cur, self.opts.equality) {
            if self.out_of_budget() {
                return;
            }
            if !self.visited.insert(step.result.clone()) || !self.guard(&step.result) {
                continue;
            }
            let rule = match step.rule {
                Rule::Res => "res",
                Rule::Para => "para",
            };
            let clause = crate::evalidity::clause_to_formula(&step.clause).to_string();
            self.out.trace.push(TraceStep { parent: id, child: self.out.nodes, rule: rule.into(), clause });
            self.expand(step.result);
        }
    }
}

/// Depth-first search from the clause form of a solution `a`. Each visited
/// clause set is expanded at most once.
pub fn sf_improve(e: &SchematicEhs, a: &SolutionCandidate, oracle: &dyn Oracle, opts: &SfOptions) -> SfResult {
    let mut s = Search { e, oracle, opts, visited: BTreeSet::new(), emitted: BTreeSet::new(), out: SfResult::default() };
    s.expand(a.cnf.clone());
    s.out
}
