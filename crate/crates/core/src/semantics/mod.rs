//! Truth-value semantics, model counting, CNF conversion, SAT solving and
//! entailment deciders.

mod assignment;
mod cnf;
mod decide;
mod dpll;
pub mod oracle;
mod sweep;
mod truth;

pub use assignment::{evaluate, Assignment};
pub use cnf::{to_cnf, ClauseSet, Lit};
pub use decide::{classify, entails, mc_countermodel, satisfiable, Classification};
pub use dpll::{solve, Model, SatResult};
pub use oracle::{EntailmentOracle, OracleConfig, OracleRegistry};
pub use sweep::{
    countermodel_fraction, detection_rates, expected_detection_rate, DetectionRate, SWEEP_SAMPLES,
};
pub use truth::{count_sat, entails_bruteforce, slot_layout, Program, ENUMERATION_LIMIT};
