//! Dataset auditing: split statistics, per-class χ² homogeneity tests,
//! requirement reports, and one-sided probes.

mod chi2;
mod probe;
mod report;
mod stats;

pub use chi2::{chi_squared, critical_value, ChiSquaredTest, Histogram};
pub use probe::{formula_groups, probe_one_sided, PROBE_MIN_SIZE};
pub use report::{requirements_report, RequirementsReport, DOCUMENTED_GAPS};
pub use stats::{
    class_stats, class_stats_at, new_variables, split_stats, Side, SplitStats, StatReport, StatRow,
    Statistic, DEFAULT_ALPHA,
};
