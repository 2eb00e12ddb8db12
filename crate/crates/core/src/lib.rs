//! Propositional entailment toolkit: formula syntax, exact and sampling
//! entailment deciders, bias-controlled dataset generation, statistical
//! auditing, and possible-world neural models.

pub mod cli;
pub mod error;
pub mod generation;
pub mod logic;
pub mod neural;
pub mod seed;
pub mod semantics;
pub mod validation;

pub use error::{Error, Result};
