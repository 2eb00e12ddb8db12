use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generation::{augment, Sequent};
use crate::neural::{Adam, AdamConfig, EntailmentModel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    /// Upper bound on passes over the training set.
    pub epochs: usize,
    pub batch_size: usize,
    pub adam: AdamConfig,
    /// Rename variables with a fresh random permutation per example.
    pub augment: bool,
    /// Epochs without validation improvement before stopping.
    pub patience: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 50,
            batch_size: 32,
            adam: AdamConfig::default(),
            augment: true,
            patience: 5,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub epoch: usize,
    pub split: String,
    pub accuracy: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub trace: Vec<TracePoint>,
    pub epochs_run: usize,
    pub best_epoch: usize,
    pub best_valid_accuracy: f64,
    pub final_train_loss: f64,
}

pub fn accuracy(model: &dyn EntailmentModel, data: &[Sequent]) -> f64 {
    if data.is_empty() {
        return 0.0;
    }
    let correct = data
        .iter()
        .filter(|s| model.classify(&s.premise, &s.conclusion) == s.label)
        .count();
    correct as f64 / data.len() as f64
}

/// Minibatch training with Adam. After every epoch the validation accuracy
/// is recorded; training stops after `patience` epochs without improvement
/// and the best parameters seen are restored.
pub fn train(
    model: &mut dyn EntailmentModel,
    train: &[Sequent],
    valid: &[Sequent],
    config: &TrainConfig,
) -> Result<TrainReport> {
    if train.is_empty() || valid.is_empty() {
        return Err(Error::Degenerate(
            "training and validation sets must be non-empty".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut adam = Adam::new(model.params(), config.adam);
    let mut grads = model.params().zeros_like();
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut report = TrainReport::default();
    let mut best = model.params().clone();
    report.best_valid_accuracy = -1.0;
    let mut stale = 0;
    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        let mut total_loss = 0.0;
        let mut correct = 0usize;
        for batch in order.chunks(config.batch_size.max(1)) {
            grads.fill_zero();
            for &i in batch {
                let example = if config.augment {
                    augment(&train[i], &mut rng)
                } else {
                    train[i].clone()
                };
                let loss = model.accumulate_gradient(&example, &mut grads);
                if !loss.is_finite() {
                    return Err(Error::Diverged { epoch });
                }
                // P > 0.5 on the true label exactly when the loss is below ln 2
                if loss < std::f64::consts::LN_2 {
                    correct += 1;
                }
                total_loss += loss;
            }
            grads.scale(1.0 / batch.len() as f64);
            adam.step(model.params_mut(), &grads);
        }
        if !model.params().all_finite() {
            return Err(Error::Diverged { epoch });
        }
        let valid_acc = accuracy(model, valid);
        report.trace.push(TracePoint {
            epoch,
            split: "train".into(),
            accuracy: correct as f64 / train.len() as f64,
        });
        report.trace.push(TracePoint {
            epoch,
            split: "valid".into(),
            accuracy: valid_acc,
        });
        report.epochs_run = epoch;
        report.final_train_loss = total_loss / train.len() as f64;
        log::info!(
            "epoch {epoch}: loss {:.4}, train acc {:.4}, valid acc {valid_acc:.4}",
            report.final_train_loss,
            correct as f64 / train.len() as f64
        );
        if valid_acc > report.best_valid_accuracy {
            report.best_valid_accuracy = valid_acc;
            report.best_epoch = epoch;
            best = model.params().clone();
            stale = 0;
        } else {
            stale += 1;
            if stale >= config.patience {
                break;
            }
        }
    }
    *model.params_mut() = best;
    Ok(report)
}

/// `epoch,split,accuracy` rows with a header.
pub fn write_trace_csv<W: Write>(trace: &[TracePoint], mut w: W) -> Result<()> {
    writeln!(w, "epoch,split,accuracy")?;
    for p in trace {
        writeln!(w, "{},{},{:.6}", p.epoch, p.split, p.accuracy)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generation::{build_split, BuildOptions, SplitSpec};
    use crate::neural::{ModelConfig, ModelRegistry};

    #[test]
    fn memorizes_small_set() {
        let data = build_split(&SplitSpec::train_like(100, 21), BuildOptions::default())
            .unwrap()
            .sequents;
        let config = ModelConfig {
            d: 16,
            hidden: 32,
            ..ModelConfig::new("treenet")
        };
        let mut model = ModelRegistry::default().create(&config).unwrap();
        let tc = TrainConfig {
            epochs: 300,
            batch_size: 10,
            adam: AdamConfig {
                lr: 1e-2,
                ..AdamConfig::default()
            },
            augment: false,
            patience: 300,
            seed: 1,
        };
        let report = train(model.as_mut(), &data, &data, &tc).unwrap();
        assert!(report.best_valid_accuracy >= 0.99, "{report:?}");
        assert_eq!(accuracy(model.as_ref(), &data), report.best_valid_accuracy);
    }

    #[test]
    fn divergence_reported() {
        let data = build_split(&SplitSpec::train_like(8, 2), BuildOptions::default())
            .unwrap()
            .sequents;
        let mut model = ModelRegistry::default()
            .create(&ModelConfig::new("bow-linear"))
            .unwrap();
        let tc = TrainConfig {
            adam: AdamConfig {
                lr: f64::INFINITY,
                ..AdamConfig::default()
            },
            ..TrainConfig::default()
        };
        assert!(matches!(
            train(model.as_mut(), &data, &data, &tc),
            Err(Error::Diverged { epoch: 1 })
        ));
    }

    #[test]
    fn trace_csv() {
        let mut out = Vec::new();
        let trace = vec![TracePoint {
            epoch: 1,
            split: "valid".into(),
            accuracy: 0.5,
        }];
        write_trace_csv(&trace, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "epoch,split,accuracy\n1,valid,0.500000\n"
        );
    }
}
