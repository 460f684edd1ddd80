//! Fixtures shared by unit tests.

use crate::decomposition::{to_structure_decomposition, Decomposition, StructureDecomposition};
use crate::herbrand::HerbrandStructure;
use crate::parse::parse_input;
use crate::syntax::{Sigma1Sequent, Term};

pub const RUNNING_EXAMPLE: &str = include_str!("../data/running_example.cis");

pub fn running_example() -> (Sigma1Sequent, HerbrandStructure) {
    parse_input(RUNNING_EXAMPLE).expect("running example parses")
}

pub fn structure(d: &Decomposition) -> StructureDecomposition {
    to_structure_decomposition(d, 4).expect("reserved heads")
}

pub fn a() -> Term {
    Term::constant("a")
}

pub fn s(n: usize, t: Term) -> Term {
    Term::iterate("s", n, t)
}

pub fn f(n: usize, t: Term) -> Term {
    Term::iterate("f", n, t)
}
