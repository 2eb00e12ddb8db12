use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::logic::Formula;
use crate::seed::derive_seed;
use crate::semantics::{count_sat, mc_countermodel};

/// Sample counts of the countermodel sweep.
pub const SWEEP_SAMPLES: [usize; 4] = [32, 64, 128, 256];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectionRate {
    pub samples: usize,
    pub detected: usize,
    pub pairs: usize,
}

impl DetectionRate {
    pub fn rate(&self) -> f64 {
        if self.pairs == 0 {
            0.0
        } else {
            self.detected as f64 / self.pairs as f64
        }
    }
}

/// Fraction of pairs for which `mc_countermodel` finds a countermodel, for
/// each sample count. Pair `i` is sampled from a generator seeded with
/// `derive_seed(seed, i)` for every count, so smaller sweeps draw a prefix of
/// the assignments of larger ones and the rates are non-decreasing.
pub fn detection_rates(
    pairs: &[(Formula, Formula)],
    samples: &[usize],
    seed: u64,
) -> Vec<DetectionRate> {
    samples
        .iter()
        .map(|&m| {
            let detected = pairs
                .iter()
                .enumerate()
                .filter(|(i, (a, b))| {
                    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, *i as u64));
                    mc_countermodel(a, b, m, &mut rng)
                })
                .count();
            DetectionRate {
                samples: m,
                detected,
                pairs: pairs.len(),
            }
        })
        .collect()
}

/// Share of assignments over `vars(A) ∪ vars(B)` that make `A` true and `B`
/// false, by enumeration.
pub fn countermodel_fraction(premise: &Formula, conclusion: &Formula) -> Result<f64> {
    let witness = Formula::and(premise.clone(), Formula::not(conclusion.clone()));
    let n = witness.vars().len();
    Ok(count_sat(&witness)? as f64 / 2f64.powi(n as i32))
}

/// Probability that `m` uniform draws hit a countermodel, averaged over pairs.
pub fn expected_detection_rate(fractions: &[f64], m: usize) -> f64 {
    if fractions.is_empty() {
        return 0.0;
    }
    let total: f64 = fractions
        .iter()
        .map(|c| 1.0 - (1.0 - c).powi(m as i32))
        .sum();
    total / fractions.len() as f64
}
