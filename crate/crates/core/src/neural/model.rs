use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generation::Sequent;
use crate::logic::Formula;
use crate::neural::{BowModel, ParamSet, PwNet, TreeNet};

/// Which sides of a sequent a bag-of-words model reads.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sides {
    #[default]
    Both,
    Premise,
    Conclusion,
}

impl fmt::Display for Sides {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sides::Both => "both",
            Sides::Premise => "premise",
            Sides::Conclusion => "conclusion",
        })
    }
}

impl FromStr for Sides {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "both" => Ok(Sides::Both),
            "premise" | "a" | "A" => Ok(Sides::Premise),
            "conclusion" | "b" | "B" => Ok(Sides::Conclusion),
            _ => Err(Error::UnknownStrategy {
                kind: "side",
                name: s.to_string(),
                available: "both, premise, conclusion".into(),
            }),
        }
    }
}

/// Everything needed to rebuild a model's architecture.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub kind: String,
    /// Embedding width.
    pub d: usize,
    /// World-vector width.
    pub k: usize,
    /// Number of worlds.
    pub worlds: usize,
    pub world_seed: u64,
    pub init_seed: u64,
    /// Hidden width of perceptron heads.
    pub hidden: usize,
    #[serde(default)]
    pub sides: Sides,
}

impl ModelConfig {
    pub fn new(kind: &str) -> Self {
        ModelConfig {
            kind: kind.to_string(),
            d: 32,
            k: 16,
            worlds: 64,
            world_seed: 0,
            init_seed: 0,
            hidden: 32,
            sides: Sides::Both,
        }
    }
}

/// A differentiable classifier of sequents.
pub trait EntailmentModel: Send + Sync {
    fn config(&self) -> &ModelConfig;

    fn params(&self) -> &ParamSet;

    fn params_mut(&mut self) -> &mut ParamSet;

    /// Probability that the premise entails the conclusion.
    fn predict(&self, premise: &Formula, conclusion: &Formula) -> f64;

    /// Cross-entropy loss of one sequent; its gradient is added to `grads`.
    fn accumulate_gradient(&self, s: &Sequent, grads: &mut ParamSet) -> f64;

    /// Cross-entropy loss of one sequent.
    fn loss(&self, s: &Sequent) -> f64 {
        let p = self.predict(&s.premise, &s.conclusion);
        -if s.label { p.ln() } else { (1.0 - p).ln() }
    }

    fn classify(&self, premise: &Formula, conclusion: &Formula) -> bool {
        self.predict(premise, conclusion) > 0.5
    }
}

pub type ModelFactory = Arc<dyn Fn(&ModelConfig) -> Box<dyn EntailmentModel> + Send + Sync>;

#[derive(Clone)]
pub struct ModelRegistry {
    factories: BTreeMap<String, ModelFactory>,
}

impl ModelRegistry {
    pub fn empty() -> Self {
        ModelRegistry {
            factories: BTreeMap::new(),
        }
    }

    pub fn register(
        &mut self,
        name: &str,
        factory: impl Fn(&ModelConfig) -> Box<dyn EntailmentModel> + Send + Sync + 'static,
    ) {
        self.factories.insert(name.to_string(), Arc::new(factory));
    }

    pub fn names(&self) -> Vec<String> {
        self.factories.keys().cloned().collect()
    }

    /// Builds the model named by `config.kind`.
    pub fn create(&self, config: &ModelConfig) -> Result<Box<dyn EntailmentModel>> {
        match self.factories.get(&config.kind) {
            Some(f) => Ok(f(config)),
            None => Err(Error::UnknownStrategy {
                kind: "model",
                name: config.kind.clone(),
                available: self.names().join(", "),
            }),
        }
    }
}

impl Default for ModelRegistry {
    fn default() -> Self {
        let mut r = ModelRegistry::empty();
        r.register("pwnet", |c| Box::new(PwNet::new(c.clone())));
        r.register("treenet", |c| Box::new(TreeNet::new(c.clone())));
        r.register("bow-linear", |c| Box::new(BowModel::linear(c.clone())));
        r.register("bow-mlp", |c| Box::new(BowModel::mlp(c.clone())));
        r
    }
}
