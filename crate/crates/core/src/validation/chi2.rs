use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Counts of one integer-valued statistic, one bin per observed value.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    bins: BTreeMap<u64, u64>,
    total: u64,
}

impl Histogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_values(values: impl IntoIterator<Item = u64>) -> Self {
        let mut h = Histogram::new();
        for v in values {
            h.add(v);
        }
        h
    }

    pub fn from_counts(counts: &[(u64, u64)]) -> Self {
        let mut h = Histogram::new();
        for &(value, count) in counts {
            h.add_count(value, count);
        }
        h
    }

    pub fn add(&mut self, value: u64) {
        self.add_count(value, 1);
    }

    pub fn add_count(&mut self, value: u64, count: u64) {
        if count > 0 {
            *self.bins.entry(value).or_default() += count;
            self.total += count;
        }
    }

    pub fn count(&self, value: u64) -> u64 {
        self.bins.get(&value).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn mean(&self) -> Option<f64> {
        if self.total == 0 {
            return None;
        }
        let sum: f64 = self.bins.iter().map(|(&v, &c)| v as f64 * c as f64).sum();
        Some(sum / self.total as f64)
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (&v, &c) in &other.bins {
            self.add_count(v, c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.bins.iter().map(|(&v, &c)| (v, c))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquaredTest {
    pub statistic: f64,
    pub df: usize,
}

impl ChiSquaredTest {
    /// Whether the statistic exceeds the critical value at `alpha`.
    pub fn rejects(&self, alpha: f64) -> bool {
        self.df > 0 && self.statistic > critical_value(self.df, alpha)
    }
}

/// Two-sample homogeneity statistic over the union of bins. Expected counts
/// come from pooled proportions; bins empty in both samples are skipped.
pub fn chi_squared(pos: &Histogram, neg: &Histogram) -> Result<ChiSquaredTest> {
    if pos.is_empty() || neg.is_empty() {
        return Err(Error::Degenerate(
            "chi-squared needs two non-empty histograms".into(),
        ));
    }
    let (n1, n2) = (pos.total as f64, neg.total as f64);
    let n = n1 + n2;
    let mut values: Vec<u64> = pos.bins.keys().chain(neg.bins.keys()).copied().collect();
    values.sort_unstable();
    values.dedup();
    let mut statistic = 0.0;
    for &v in &values {
        let (o1, o2) = (pos.count(v) as f64, neg.count(v) as f64);
        let column = o1 + o2;
        let (e1, e2) = (n1 * column / n, n2 * column / n);
        statistic += (o1 - e1).powi(2) / e1 + (o2 - e2).powi(2) / e2;
    }
    Ok(ChiSquaredTest {
        statistic,
        df: values.len().saturating_sub(1),
    })
}

/// Upper-tail critical value of the χ² distribution with `df` degrees of
/// freedom at significance `alpha`.
pub fn critical_value(df: usize, alpha: f64) -> f64 {
    if df == 0 {
        return 0.0;
    }
    ChiSquared::new(df as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(1.0 - alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Textbook R×C Pearson statistic, written independently over a dense
    /// table.
    fn pearson(table: &[Vec<f64>]) -> f64 {
        let rows: Vec<f64> = table.iter().map(|r| r.iter().sum()).collect();
        let cols: Vec<f64> = (0..table[0].len())
            .map(|j| table.iter().map(|r| r[j]).sum())
            .collect();
        let n: f64 = rows.iter().sum();
        let mut x = 0.0;
        for (i, r) in table.iter().enumerate() {
            for (j, &o) in r.iter().enumerate() {
                let e = rows[i] * cols[j] / n;
                if e > 0.0 {
                    x += (o - e) * (o - e) / e;
                }
            }
        }
        x
    }

    #[test]
    fn disjoint_support() {
        let a = Histogram::from_counts(&[(0, 10), (1, 0)]);
        let b = Histogram::from_counts(&[(0, 0), (1, 10)]);
        let t = chi_squared(&a, &b).unwrap();
        assert_eq!(t.df, 1);
        assert!((t.statistic - 20.0).abs() < 1e-12);
        assert!((pearson(&[vec![10.0, 0.0], vec![0.0, 10.0]]) - 20.0).abs() < 1e-12);
    }

    #[test]
    fn matches_dense_oracle() {
        let a = Histogram::from_counts(&[(1, 12), (2, 30), (5, 7)]);
        let b = Histogram::from_counts(&[(1, 20), (3, 4), (5, 9)]);
        let t = chi_squared(&a, &b).unwrap();
        let oracle = pearson(&[vec![12.0, 30.0, 0.0, 7.0], vec![20.0, 0.0, 4.0, 9.0]]);
        assert!((t.statistic - oracle).abs() < 1e-9);
        assert_eq!(t.df, 3);
    }

    #[test]
    fn identical_and_proportional() {
        let a = Histogram::from_counts(&[(3, 5), (4, 8)]);
        assert_eq!(chi_squared(&a, &a).unwrap().statistic, 0.0);
        let b = Histogram::from_counts(&[(3, 10), (4, 16)]);
        assert!(chi_squared(&a, &b).unwrap().statistic.abs() < 1e-12);
    }

    #[test]
    fn empty_is_degenerate() {
        let a = Histogram::from_values([1, 2]);
        assert!(chi_squared(&a, &Histogram::new()).is_err());
    }

    #[test]
    fn critical_values() {
        assert!((critical_value(1, 0.01) - 6.634897).abs() < 1e-5);
        assert!((critical_value(10, 0.05) - 18.307038).abs() < 1e-5);
        assert_eq!(critical_value(0, 0.01), 0.0);
    }

    #[test]
    fn histogram_basics() {
        let mut h = Histogram::from_values([1, 1, 4]);
        assert_eq!(h.total(), 3);
        assert_eq!(h.mean(), Some(2.0));
        h.merge(&Histogram::from_values([4]));
        assert_eq!(h.count(4), 2);
        assert_eq!(Histogram::new().mean(), None);
    }
}
