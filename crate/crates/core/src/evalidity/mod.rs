//! Validity of quantifier-free sequents in first-order logic with equality
//! (quasi-tautologies), plus a purely propositional mode.
//!
//! A sequent is valid iff the conjunction of its antecedent with the
//! negations of its succedent has no model. Free variables, including the
//! grammar variables `αi`, are frozen to fresh constants before the check.

pub mod cnf;
pub mod smt;
mod solver;

use std::io::Write as _;
use std::process::Command;

use serde::{Deserialize, Serialize};

pub use cnf::{clause_contains_alpha, clause_to_formula, to_cnf, to_cnf_capped, Atom, Clause, CnfError, GroundCnf, Literal};
pub use smt::export_smt2;

use crate::syntax::{Formula, Sequent};

/// Default search budget (DPLL nodes) per query.
pub const DEFAULT_STEP_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Validity {
    Valid,
    Invalid,
    /// The resource limit was hit before a decision.
    Unknown,
}

impl Validity {
    pub fn is_valid(self) -> bool {
        self == Validity::Valid
    }
}

/// Anything that can decide validity of a quantifier-free sequent.
pub trait Oracle: Sync {
    fn check(&self, s: &Sequent) -> Validity;

    /// Whether the oracle reasons modulo equality.
    fn equality(&self) -> bool {
        true
    }
}

/// The built-in decision procedure.
#[derive(Clone, Debug)]
pub struct EufOracle {
    pub step_cap: usize,
    /// When unset, equations are opaque atoms (tautology checking).
    pub equality: bool,
}

impl Default for EufOracle {
    fn default() -> Self {
        EufOracle { step_cap: DEFAULT_STEP_CAP, equality: true }
    }
}

impl EufOracle {
    pub fn propositional() -> Self {
        EufOracle { equality: false, ..Self::default() }
    }

    pub fn with_step_cap(mut self, cap: usize) -> Self {
        self.step_cap = cap;
        self
    }
}

impl Oracle for EufOracle {
    fn check(&self, s: &Sequent) -> Validity {
        let mut assertions: Vec<Formula> = s.ante.clone();
        assertions.extend(s.succ.iter().cloned().map(Formula::not));
        let Some(problem) = solver::Problem::new(&assertions, self.equality) else {
            return Validity::Unknown;
        };
        match problem.satisfiable(self.step_cap) {
            Ok(true) => Validity::Invalid,
            Ok(false) => Validity::Valid,
            Err(solver::Exhausted) => Validity::Unknown,
        }
    }

    fn equality(&self) -> bool {
        self.equality
    }
}

/// Delegates to an external SMT solver. The command template is run through
/// `sh -c` with `{}` replaced by the path of the exported script; the first
/// line of standard output must be `sat` or `unsat`.
#[derive(Clone, Debug)]
pub struct ExternalOracle {
    pub template: String,
}

impl ExternalOracle {
    pub fn new(template: impl Into<String>) -> Self {
        ExternalOracle { template: template.into() }
    }

    pub fn run(&self, script: &str) -> std::io::Result<Validity> {
        let mut file = tempfile::Builder::new().suffix(".smt2").tempfile()?;
        file.write_all(script.as_bytes())?;
        file.flush()?;
        let path = file.path().to_string_lossy().into_owned();
        let cmd = if self.template.contains("{}") {
            self.template.replace("{}", &path)
        } else {
            format!("{} {}", self.template, path)
        };
        let out = Command::new("sh").arg("-c").arg(&cmd).output()?;
        let stdout = String::from_utf8_lossy(&out.stdout);
        Ok(match stdout.lines().map(str::trim).find(|l| !l.is_empty()) {
            Some("unsat") => Validity::Valid,
            Some("sat") => Validity::Invalid,
            _ => Validity::Unknown,
        })
    }
}

impl Oracle for ExternalOracle {
    fn check(&self, s: &Sequent) -> Validity {
        if !s.is_quantifier_free() {
            return Validity::Unknown;
        }
        self.run(&export_smt2(s)).unwrap_or(Validity::Unknown)
    }
}

/// Validity modulo equality with the default budget.
pub fn is_quasi_tautology(s: &Sequent) -> Validity {
    EufOracle::default().check(s)
}

/// Propositional validity; equations are opaque atoms.
pub fn is_tautology(s: &Sequent) -> Validity {
    EufOracle::propositional().check(s)
}
