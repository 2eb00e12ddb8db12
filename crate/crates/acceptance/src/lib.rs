//! Reporting helpers for the acceptance run: one PASS/FAIL line per
//! criterion and a non-zero exit when any criterion fails.

use std::time::{Duration, Instant};

pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

/// `|value − target| ≤ tol`.
pub fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISS"
    }
}

pub struct Report {
    filters: Vec<String>,
    results: Vec<(String, bool)>,
}

impl Report {
    /// Positional arguments select criteria by substring, as with the
    /// default test harness.
    pub fn from_args() -> Self {
        let filters = std::env::args()
            .skip(1)
            .filter(|a| !a.starts_with('-'))
            .collect();
        Report {
            filters,
            results: Vec::new(),
        }
    }

    pub fn run(&mut self, id: &str, title: &str, check: impl FnOnce() -> Outcome) {
        if !self.filters.is_empty() && !self.filters.iter().any(|f| id.contains(f.as_str())) {
            return;
        }
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        println!(
            "{} {id} {title} [{}]: {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            seconds(took),
            outcome.detail
        );
        self.results.push((id.to_string(), outcome.passed));
    }

    /// Prints the summary and exits with status 1 if anything failed.
    pub fn finish(self) {
        let failed: Vec<&str> = self
            .results
            .iter()
            .filter(|r| !r.1)
            .map(|r| r.0.as_str())
            .collect();
        println!(
            "acceptance: {} passed, {} failed{}",
            self.results.len() - failed.len(),
            failed.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!(" ({})", failed.join(", "))
            }
        );
        if !failed.is_empty() {
            std::process::exit(1);
        }
    }
}

fn seconds(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}
