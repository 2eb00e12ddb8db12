use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::generation::{Dataset, Sequent};
use crate::neural::{accuracy, train, AdamConfig, BowModel, ModelConfig, Sides, TrainConfig};

pub const PROBE_MIN_SIZE: usize = 1000;

/// Groups sequents that share a formula. On quad data each group is one
/// 4-tuple, so splitting by group keeps tuples on one side of the split.
pub fn formula_groups(sequents: &[Sequent]) -> Vec<Vec<usize>> {
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut ids: HashMap<&crate::logic::Formula, usize> = HashMap::new();
    let mut parent: Vec<usize> = Vec::new();
    let mut node = |f, parent: &mut Vec<usize>| {
        *ids.entry(f).or_insert_with(|| {
            parent.push(parent.len());
            parent.len() - 1
        })
    };
    let mut edges = Vec::with_capacity(sequents.len());
    for s in sequents {
        let a = node(&s.premise, &mut parent);
        let b = node(&s.conclusion, &mut parent);
        edges.push(a);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for (i, &a) in edges.iter().enumerate() {
        let root = find(&mut parent, a);
        let g = *slot.entry(root).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups
}

/// Held-out accuracy of a linear bag-of-words classifier that sees only one
/// side of each sequent. Groups of sequents sharing a formula are shuffled
/// and about 20% of the sequents are held out; of the rest a tenth is used
/// for early stopping.
pub fn probe_one_sided(d: &Dataset, side: Sides, seed: u64) -> Result<f64> {
    if d.len() < PROBE_MIN_SIZE {
        return Err(Error::Degenerate(format!(
            "probe needs at least {PROBE_MIN_SIZE} sequents, got {}",
            d.len()
        )));
    }
    if side == Sides::Both {
        return Err(Error::Degenerate(
            "a one-sided probe must read a single side".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut groups = formula_groups(&d.sequents);
    groups.shuffle(&mut rng);
    let mut order = groups.into_iter().flatten().map(|i| d.sequents[i].clone());
    let held_out: Vec<Sequent> = order.by_ref().take(d.len() / 5).collect();
    let mut data: Vec<Sequent> = order.collect();
    let early = data.split_off(data.len() * 9 / 10);
    let config = ModelConfig {
        d: 16,
        init_seed: seed,
        sides: side,
        ..ModelConfig::new("bow-linear")
    };
    let mut model = BowModel::linear(config);
    let tc = TrainConfig {
        epochs: 30,
        batch_size: 32,
        adam: AdamConfig {
            lr: 1e-2,
            ..AdamConfig::default()
        },
        augment: false,
        patience: 3,
        seed,
    };
    train(&mut model, &data, &early, &tc)?;
    Ok(accuracy(&model, &held_out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generation::QuadTuple;
    use crate::logic::parse;

    #[test]
    fn constant_data_is_learned() {
        let s = Sequent::decide(parse("p&q").unwrap(), parse("q").unwrap());
        let d = Dataset::new(vec![s; 1000]);
        assert_eq!(probe_one_sided(&d, Sides::Premise, 0).unwrap(), 1.0);
    }

    #[test]
    fn quad_members_share_a_group() {
        let q = |a1: &str, b1: &str, a2: &str, b2: &str| {
            QuadTuple {
                a1: parse(a1).unwrap(),
                b1: parse(b1).unwrap(),
                a2: parse(a2).unwrap(),
                b2: parse(b2).unwrap(),
            }
            .to_sequents()
        };
        let mut seqs = q("p", "p|q", "q&r", "r").to_vec();
        seqs.extend(q("s", "s|t", "t&u", "u"));
        let mut groups = formula_groups(&seqs);
        groups.iter_mut().for_each(|g| g.sort());
        assert_eq!(groups, vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]]);
    }

    #[test]
    fn small_or_two_sided_rejected() {
        let s = Sequent::decide(parse("p").unwrap(), parse("p").unwrap());
        assert!(probe_one_sided(&Dataset::new(vec![s.clone(); 10]), Sides::Premise, 0).is_err());
        assert!(probe_one_sided(&Dataset::new(vec![s; 1000]), Sides::Both, 0).is_err());
    }
}
