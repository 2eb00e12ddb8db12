use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::neural::{EntailmentModel, ModelConfig, ModelRegistry, TensorRecord};

pub const CHECKPOINT_VERSION: u32 = 1;

/// JSON dump of a model: its configuration (including the world seed) and
/// every parameter tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub config: ModelConfig,
    pub tensors: Vec<TensorRecord>,
}

impl Checkpoint {
    pub fn capture(model: &dyn EntailmentModel) -> Self {
        Checkpoint {
            version: CHECKPOINT_VERSION,
            config: model.config().clone(),
            tensors: model.params().to_records(),
        }
    }

    pub fn restore(&self, registry: &ModelRegistry) -> Result<Box<dyn EntailmentModel>> {
        if self.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported version {}",
                self.version
            )));
        }
        let mut model = registry.create(&self.config)?;
        model
            .params_mut()
            .load_records(&self.tensors)
            .map_err(Error::Checkpoint)?;
        Ok(model)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;

    #[test]
    fn round_trip_preserves_predictions() {
        let registry = ModelRegistry::default();
        let config = ModelConfig {
            d: 4,
            k: 3,
            worlds: 5,
            world_seed: 8,
            ..ModelConfig::new("pwnet")
        };
        let model = registry.create(&config).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        Checkpoint::capture(model.as_ref()).save(&path).unwrap();
        let restored = Checkpoint::load(&path).unwrap().restore(&registry).unwrap();
        let (a, b) = (parse("p&q").unwrap(), parse("q|r").unwrap());
        assert_eq!(model.predict(&a, &b), restored.predict(&a, &b));
    }

    #[test]
    fn version_checked() {
        let registry = ModelRegistry::default();
        let model = registry.create(&ModelConfig::new("bow-linear")).unwrap();
        let mut c = Checkpoint::capture(model.as_ref());
        c.version = 99;
        assert!(matches!(c.restore(&registry), Err(Error::Checkpoint(_))));
    }
}
