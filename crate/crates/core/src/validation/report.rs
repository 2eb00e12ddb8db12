use serde::{Deserialize, Serialize};

use crate::generation::Dataset;
use crate::validation::{class_stats_at, StatReport};

/// Statistics whose class difference is inherent to the 4-tuple
/// construction and reported without failing the check.
pub const DOCUMENTED_GAPS: [&str; 1] = ["new-vars"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RequirementsReport {
    pub alpha: f64,
    /// `|D⁺| == |D⁻|`.
    pub balanced: bool,
    pub stats: StatReport,
    /// Statistics whose χ² exceeds the critical value.
    pub failures: Vec<String>,
    /// Violations of known, documented gaps.
    pub documented: Vec<String>,
    pub passed: bool,
}

impl RequirementsReport {
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "class balance: {} positives, {} negatives ({})\n",
            self.stats.positives,
            self.stats.negatives,
            if self.balanced { "ok" } else { "VIOLATION" }
        );
        out.push_str(&self.stats.to_table());
        for gap in &self.documented {
            out.push_str(&format!("documented gap: {gap}\n"));
        }
        out.push_str(if self.passed {
            "requirements: PASS\n"
        } else {
            "requirements: FAIL\n"
        });
        out
    }
}

/// Checks exact class balance and χ² homogeneity of every statistic at
/// significance `alpha`.
pub fn requirements_report(d: &Dataset, alpha: f64) -> RequirementsReport {
    let stats = class_stats_at(d, alpha);
    let balanced = stats.positives == stats.negatives;
    let mut failures = Vec::new();
    let mut documented = Vec::new();
    for row in stats.rows.iter().filter(|r| r.violation) {
        if DOCUMENTED_GAPS.contains(&row.statistic.as_str()) {
            documented.push(row.label());
        } else {
            failures.push(row.label());
        }
    }
    RequirementsReport {
        alpha,
        passed: balanced && failures.is_empty(),
        balanced,
        stats,
        failures,
        documented,
    }
}
