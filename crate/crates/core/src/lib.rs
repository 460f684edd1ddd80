//! Cut introduction for Σ1-sequents: term-set decomposition, cut-formula
//! computation, and proof construction.

pub mod cutformula;
pub mod decomposition;
pub mod evalidity;
pub mod herbrand;
pub mod parse;
pub mod pipeline;
pub mod proofbuild;
pub mod syntax;

#[cfg(test)]
mod testutil;
