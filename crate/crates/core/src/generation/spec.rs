use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::ALPHABET;

/// Inclusive integer range, written `lo:hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntRange {
    pub lo: usize,
    pub hi: usize,
}

impl IntRange {
    pub fn new(lo: usize, hi: usize) -> Self {
        IntRange { lo, hi }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        rng.random_range(self.lo..=self.hi)
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

impl FromStr for IntRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("range {s:?} is not of the form lo:hi"));
        let (lo, hi) = match s.split_once(':') {
            Some((lo, hi)) => (lo.trim(), hi.trim()),
            None => (s.trim(), s.trim()),
        };
        let lo = lo.parse().map_err(|_| bad())?;
        let hi = hi.parse().map_err(|_| bad())?;
        Ok(IntRange { lo, hi })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenLimits {
    /// Raw draws allowed per accepted pair.
    pub pair_attempts: usize,
    /// Edit rounds allowed per mutation.
    pub mutation_rounds: usize,
    /// Candidate pairs scanned for a partner before a pool is abandoned.
    pub match_window: usize,
}

impl Default for GenLimits {
    fn default() -> Self {
        GenLimits {
            pair_attempts: 100_000,
            mutation_rounds: 1_000,
            match_window: 64,
        }
    }
}

/// Parameters of one generated split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub name: String,
    /// Number of sequents requested.
    pub size: usize,
    /// Variable-pool size, drawn uniformly.
    pub vars: IntRange,
    /// Operators per formula, drawn uniformly.
    pub ops: IntRange,
    /// Name of a registered generation mechanism.
    pub mechanism: String,
    pub seed: u64,
    #[serde(default)]
    pub limits: GenLimits,
}

impl SplitSpec {
    pub fn new(
        name: &str,
        size: usize,
        vars: IntRange,
        ops: IntRange,
        mechanism: &str,
        seed: u64,
    ) -> Self {
        SplitSpec {
            name: name.to_string(),
            size,
            vars,
            ops,
            mechanism: mechanism.to_string(),
            seed,
            limits: GenLimits::default(),
        }
    }

    /// Train / validation / easy-test parameters.
    pub fn train_like(size: usize, seed: u64) -> Self {
        Self::new(
            "train",
            size,
            IntRange::new(1, 10),
            IntRange::new(1, 10),
            "quad",
            seed,
        )
    }

    pub fn hard_like(size: usize, seed: u64) -> Self {
        Self::new(
            "hard",
            size,
            IntRange::new(5, 10),
            IntRange::new(15, 20),
            "quad",
            seed,
        )
    }

    pub fn big_like(size: usize, seed: u64) -> Self {
        Self::new(
            "big",
            size,
            IntRange::new(1, 20),
            IntRange::new(10, 30),
            "quad",
            seed,
        )
    }

    pub fn massive_like(size: usize, seed: u64) -> Self {
        Self::new(
            "massive",
            size,
            IntRange::new(20, 26),
            IntRange::new(20, 30),
            "mutate",
            seed,
        )
    }

    pub fn preset(name: &str, size: usize, seed: u64) -> Option<Self> {
        Some(match name {
            "train" | "easy" => Self::train_like(size, seed),
            "hard" => Self::hard_like(size, seed),
            "big" => Self::big_like(size, seed),
            "massive" => Self::massive_like(size, seed),
            _ => return None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.vars.lo == 0 || self.vars.lo > self.vars.hi {
            return bad(format!(
                "variable range {} must be non-empty and start at 1 or more",
                self.vars
            ));
        }
        if self.vars.hi > ALPHABET {
            return bad(format!("variable range {} exceeds {ALPHABET}", self.vars));
        }
        if self.ops.lo > self.ops.hi {
            return bad(format!("operator range {} is empty", self.ops));
        }
        if self.limits.match_window == 0 || self.limits.pair_attempts == 0 {
            return bad("attempt limits must be positive".into());
        }
        Ok(())
    }
}
