//! Interchangeable entailment deciders, selectable by name.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::logic::Formula;
use crate::seed::hash_bytes;
use crate::semantics::{entails, entails_bruteforce, mc_countermodel};

pub trait EntailmentOracle: Send + Sync {
    fn name(&self) -> &str;

    /// Whether the oracle is exact; sampling oracles may accept non-entailments.
    fn is_exact(&self) -> bool {
        true
    }

    fn entails(&self, premise: &Formula, conclusion: &Formula) -> Result<bool>;
}

pub struct DpllOracle;

impl EntailmentOracle for DpllOracle {
    fn name(&self) -> &str {
        "dpll"
    }

    fn entails(&self, premise: &Formula, conclusion: &Formula) -> Result<bool> {
        Ok(entails(premise, conclusion))
    }
}

pub struct TruthTableOracle;

impl EntailmentOracle for TruthTableOracle {
    fn name(&self) -> &str {
        "truth-table"
    }

    fn entails(&self, premise: &Formula, conclusion: &Formula) -> Result<bool> {
        entails_bruteforce(premise, conclusion)
    }
}

/// Accepts entailment unless a sampled assignment refutes it. Sampling is
/// seeded per pair so repeated queries give the same answer.
pub struct MonteCarloOracle {
    pub samples: usize,
    pub seed: u64,
}

impl EntailmentOracle for MonteCarloOracle {
    fn name(&self) -> &str {
        "monte-carlo"
    }

    fn is_exact(&self) -> bool {
        false
    }

    fn entails(&self, premise: &Formula, conclusion: &Formula) -> Result<bool> {
        let key = format!("{premise}\t{conclusion}");
        let mut rng = ChaCha8Rng::seed_from_u64(hash_bytes(self.seed, key.as_bytes()));
        Ok(!mc_countermodel(
            premise,
            conclusion,
            self.samples,
            &mut rng,
        ))
    }
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            samples: 256,
            seed: 0,
        }
    }
}

type OracleFactory = Box<dyn Fn(&OracleConfig) -> Box<dyn EntailmentOracle> + Send + Sync>;

pub struct OracleRegistry {
    factories: BTreeMap<String, OracleFactory>,
}

impl OracleRegistry {
    pub fn empty() -> Self {
        OracleRegistry {
            factories: BTreeMap::new(),
        }
    }

    pub fn register(
        &mut self,
        name: &str,
        factory: impl Fn(&OracleConfig) -> Box<dyn EntailmentOracle> + Send + Sync + 'static,
    ) {
        self.factories.insert(name.to_string(), Box::new(factory));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn create(&self, name: &str, config: &OracleConfig) -> Result<Box<dyn EntailmentOracle>> {
        let factory = self
            .factories
            .get(name)
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "oracle",
                name: name.to_string(),
                available: self.names().collect::<Vec<_>>().join(", "),
            })?;
        Ok(factory(config))
    }
}

impl Default for OracleRegistry {
    fn default() -> Self {
        let mut reg = OracleRegistry::empty();
        reg.register("dpll", |_| Box::new(DpllOracle));
        reg.register("truth-table", |_| Box::new(TruthTableOracle));
        reg.register("monte-carlo", |c| {
            Box::new(MonteCarloOracle {
                samples: c.samples,
                seed: c.seed,
            })
        });
        reg
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;

    #[test]
    fn registry_resolves_all() {
        let reg = OracleRegistry::default();
        let (a, b) = (parse("p&q").unwrap(), parse("q").unwrap());
        let (c, d) = (parse("q|r").unwrap(), parse("r").unwrap());
        for name in reg.names().collect::<Vec<_>>() {
            let oracle = reg.create(name, &OracleConfig::default()).unwrap();
            assert_eq!(oracle.name(), name);
            assert!(oracle.entails(&a, &b).unwrap());
            assert!(!oracle.entails(&c, &d).unwrap());
        }
    }

    #[test]
    fn unknown_name() {
        let err = OracleRegistry::default()
            .create("minisat", &OracleConfig::default())
            .err()
            .unwrap();
        assert!(err.to_string().contains("dpll"));
    }
}
