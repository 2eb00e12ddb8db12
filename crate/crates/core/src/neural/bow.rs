//! Bag-of-words baselines: a formula is the mean embedding of the tokens of
//! its printed form, parentheses included.

use ndarray::{concatenate, s, Array2, Axis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::generation::Sequent;
use crate::logic::{Formula, ALPHABET};
use crate::neural::ops::{bce_from_logit, sigmoid};
use crate::neural::{EntailmentModel, ModelConfig, ParamId, ParamSet, Sides};

/// Letters, the four connectives, and both parentheses.
pub const VOCAB: usize = ALPHABET + 6;

pub fn token_index(c: char) -> Option<usize> {
    match c {
        'a'..='z' => Some(c as usize - 'a' as usize),
        '~' => Some(ALPHABET),
        '&' => Some(ALPHABET + 1),
        '|' => Some(ALPHABET + 2),
        '>' => Some(ALPHABET + 3),
        '(' => Some(ALPHABET + 4),
        ')' => Some(ALPHABET + 5),
        _ => None,
    }
}

/// Token frequencies of the canonical printing, as a `VOCAB × 1` column.
pub fn bag(f: &Formula) -> Array2<f64> {
    let text = f.print();
    let mut counts = Array2::zeros((VOCAB, 1));
    let mut total = 0.0;
    for c in text.chars() {
        counts[[
            token_index(c).expect("printer emits only vocabulary tokens"),
            0,
        ]] += 1.0;
        total += 1.0;
    }
    counts / total
}

#[derive(Clone, Debug)]
enum Head {
    Linear {
        w: ParamId,
        b: ParamId,
    },
    Mlp {
        w1: ParamId,
        b1: ParamId,
        w2: ParamId,
        b2: ParamId,
    },
}

#[derive(Clone, Debug)]
pub struct BowModel {
    config: ModelConfig,
    params: ParamSet,
    embed: ParamId,
    head: Head,
}

impl BowModel {
    fn build(config: ModelConfig, mlp: bool) -> Self {
        let d = config.d;
        let width = if config.sides == Sides::Both {
            2 * d
        } else {
            d
        };
        let mut rng = ChaCha8Rng::seed_from_u64(config.init_seed);
        let mut params = ParamSet::new();
        let embed = params.add_gaussian("embed", d, VOCAB, 1, &mut rng);
        let head = if mlp {
            let h = config.hidden;
            Head::Mlp {
                w1: params.add_gaussian("w1", h, width, width, &mut rng),
                b1: params.add_zeros("b1", h, 1),
                w2: params.add_gaussian("w2", 1, h, h, &mut rng),
                b2: params.add_zeros("b2", 1, 1),
            }
        } else {
            Head::Linear {
                w: params.add_gaussian("w", 1, width, width, &mut rng),
                b: params.add_zeros("b", 1, 1),
            }
        };
        BowModel {
            config,
            params,
            embed,
            head,
        }
    }

    pub fn linear(config: ModelConfig) -> Self {
        Self::build(config, false)
    }

    pub fn mlp(config: ModelConfig) -> Self {
        Self::build(config, true)
    }

    /// Mean token embedding `g(X)`.
    pub fn embed(&self, f: &Formula) -> Array2<f64> {
        self.params.get(self.embed).dot(&bag(f))
    }

    fn bags(&self, a: &Formula, b: &Formula) -> Vec<Array2<f64>> {
        match self.config.sides {
            Sides::Both => vec![bag(a), bag(b)],
            Sides::Premise => vec![bag(a)],
            Sides::Conclusion => vec![bag(b)],
        }
    }

    fn input(&self, bags: &[Array2<f64>]) -> Array2<f64> {
        let e = self.params.get(self.embed);
        let parts: Vec<Array2<f64>> = bags.iter().map(|c| e.dot(c)).collect();
        let views: Vec<_> = parts.iter().map(|p| p.view()).collect();
        concatenate(Axis(0), &views).unwrap()
    }

    fn logit(&self, x: &Array2<f64>) -> (Option<Array2<f64>>, f64) {
        let p = &self.params;
        match self.head {
            Head::Linear { w, b } => (None, p.get(w).dot(x)[[0, 0]] + p.get(b)[[0, 0]]),
            Head::Mlp { w1, b1, w2, b2 } => {
                let t = (p.get(w1).dot(x) + p.get(b1)).mapv(f64::tanh);
                let z = p.get(w2).dot(&t)[[0, 0]] + p.get(b2)[[0, 0]];
                (Some(t), z)
            }
        }
    }
}

impl EntailmentModel for BowModel {
    fn config(&self) -> &ModelConfig {
        &self.config
    }

    fn params(&self) -> &ParamSet {
        &self.params
    }

    fn params_mut(&mut self) -> &mut ParamSet {
        &mut self.params
    }

    fn predict(&self, a: &Formula, b: &Formula) -> f64 {
        sigmoid(self.logit(&self.input(&self.bags(a, b))).1)
    }

    fn accumulate_gradient(&self, s: &Sequent, grads: &mut ParamSet) -> f64 {
        let bags = self.bags(&s.premise, &s.conclusion);
        let x = self.input(&bags);
        let (hidden, z) = self.logit(&x);
        let (loss, dz) = bce_from_logit(z, s.label);
        let dx = match (&self.head, hidden) {
            (Head::Linear { w, b }, _) => {
                grads.get_mut(*w).scaled_add(dz, &x.t());
                grads.get_mut(*b)[[0, 0]] += dz;
                self.params.get(*w).t().to_owned() * dz
            }
            (Head::Mlp { w1, b1, w2, b2 }, Some(t)) => {
                grads.get_mut(*w2).scaled_add(dz, &t.t());
                grads.get_mut(*b2)[[0, 0]] += dz;
                let du = self.params.get(*w2).t().to_owned() * dz * &t.mapv(|t| 1.0 - t * t);
                *grads.get_mut(*w1) += &du.dot(&x.t());
                *grads.get_mut(*b1) += &du;
                self.params.get(*w1).t().dot(&du)
            }
            (Head::Mlp { .. }, None) => unreachable!(),
        };
        let d = self.config.d;
        for (i, c) in bags.iter().enumerate() {
            let part = dx.slice(s![i * d..(i + 1) * d, ..]);
            ndarray::linalg::general_mat_mul(1.0, &part, &c.t(), 1.0, grads.get_mut(self.embed));
        }
        loss
    }
}
