//! Independent oracles and generators shared by the integration suites.
#![allow(dead_code)]

pub mod euf;
pub mod gen;
pub mod grammar;
