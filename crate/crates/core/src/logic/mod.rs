//! Formula representation, surface syntax, syntactic metrics, canonical forms
//! and variable permutations.

mod canon;
mod formula;
mod metrics;
mod parse;
mod permute;

pub use canon::{canonicalize, canonicalize_sequent, CanonicalForm};
pub use formula::{Formula, Op, Var, VarSet, ALPHABET};
pub use metrics::{metrics, FormulaMetrics};
pub use parse::parse;
pub use permute::{apply_permutation, VarPermutation};
