//! Split construction: mechanisms, their registry, and the task fan-out.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generation::mutate::mutate_to_nonentailed;
use crate::generation::quad::{find_partner, Pair};
use crate::generation::sampler::{
    is_useful_entailment, sample_non_entailing_pair, sample_pair_where, sample_pool,
};
use crate::generation::{Dataset, Provenance, QuadTuple, Sequent, SplitSpec};
use crate::logic::canonicalize_sequent;
use crate::seed::derive_seed;
use crate::semantics::entails;

/// Counters gathered while generating; merged across tasks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GenStats {
    /// Raw formula pairs drawn by the rejection sampler.
    pub raw_draws: u64,
    /// Pairs that passed the rejection condition.
    pub accepted_pairs: u64,
    pub quads: u64,
    /// Variable pools dropped after their candidate window filled up.
    pub abandoned_pools: u64,
    /// Number of mutation rounds needed, keyed by round count.
    pub mutation_edits: BTreeMap<usize, u64>,
}

impl GenStats {
    pub fn acceptance_rate(&self) -> f64 {
        if self.raw_draws == 0 {
            0.0
        } else {
            self.accepted_pairs as f64 / self.raw_draws as f64
        }
    }

    pub fn merge(&mut self, other: &GenStats) {
        self.raw_draws += other.raw_draws;
        self.accepted_pairs += other.accepted_pairs;
        self.quads += other.quads;
        self.abandoned_pools += other.abandoned_pools;
        for (k, v) in &other.mutation_edits {
            *self.mutation_edits.entry(*k).or_default() += v;
        }
    }

    fn record_draw(&mut self, attempts: usize) {
        self.raw_draws += attempts as u64;
        self.accepted_pairs += 1;
    }
}

/// A way of producing labelled sequents in fixed-size units.
pub trait Mechanism: Send + Sync {
    fn name(&self) -> &'static str;

    /// Sequents emitted per call of [`Mechanism::generate_unit`].
    fn unit(&self) -> usize;

    fn generate_unit(
        &self,
        spec: &SplitSpec,
        rng: &mut ChaCha8Rng,
        stats: &mut GenStats,
    ) -> Result<Vec<Sequent>>;
}

/// Balanced 4-tuples: entailing pairs drawn over a shared pool are matched
/// against earlier candidates from the same pool.
pub struct QuadMechanism;

impl QuadMechanism {
    pub fn generate_quad(
        &self,
        spec: &SplitSpec,
        rng: &mut ChaCha8Rng,
        stats: &mut GenStats,
    ) -> Result<QuadTuple> {
        let limits = spec.limits;
        loop {
            let pool = sample_pool(spec.vars.sample(rng), rng);
            let mut candidates: Vec<Pair> = Vec::new();
            while candidates.len() < limits.match_window {
                let draw = sample_pair_where(
                    spec.ops,
                    &pool,
                    limits.pair_attempts,
                    rng,
                    "sampling an entailing pair",
                    is_useful_entailment,
                )?;
                stats.record_draw(draw.attempts);
                let pair = (draw.premise, draw.conclusion);
                if let Some(i) = find_partner(&candidates, &pair, limits.match_window) {
                    let (a1, b1) = candidates.swap_remove(i);
                    stats.quads += 1;
                    return Ok(QuadTuple {
                        a1,
                        b1,
                        a2: pair.0,
                        b2: pair.1,
                    });
                }
                candidates.push(pair);
            }
            stats.abandoned_pools += 1;
        }
    }
}

impl Mechanism for QuadMechanism {
    fn name(&self) -> &'static str {
        "quad"
    }

    fn unit(&self) -> usize {
        4
    }

    fn generate_unit(
        &self,
        spec: &SplitSpec,
        rng: &mut ChaCha8Rng,
        stats: &mut GenStats,
    ) -> Result<Vec<Sequent>> {
        Ok(self.generate_quad(spec, rng, stats)?.to_sequents().to_vec())
    }
}

/// `(A, B, 1)` and `(A, B*, 0)` where `B*` is a local mutation of `B`.
pub struct MutateMechanism;

impl Mechanism for MutateMechanism {
    fn name(&self) -> &'static str {
        "mutate"
    }

    fn unit(&self) -> usize {
        2
    }

    fn generate_unit(
        &self,
        spec: &SplitSpec,
        rng: &mut ChaCha8Rng,
        stats: &mut GenStats,
    ) -> Result<Vec<Sequent>> {
        let pool = sample_pool(spec.vars.sample(rng), rng);
        let draw = sample_pair_where(
            spec.ops,
            &pool,
            spec.limits.pair_attempts,
            rng,
            "sampling an entailing pair",
            is_useful_entailment,
        )?;
        stats.record_draw(draw.attempts);
        let m = mutate_to_nonentailed(
            &draw.premise,
            &draw.conclusion,
            &pool,
            spec.limits.mutation_rounds,
            rng,
        )?;
        *stats.mutation_edits.entry(m.edits).or_default() += 1;
        Ok(vec![
            Sequent::trusted(draw.premise.clone(), draw.conclusion, true),
            Sequent::trusted(draw.premise, m.formula, false),
        ])
    }
}

/// Independently sampled positives and negatives, each pair over its own
/// pool. Reproduces the superficial biases that quad tuples remove.
pub struct NaiveMechanism;

impl Mechanism for NaiveMechanism {
    fn name(&self) -> &'static str {
        "naive"
    }

    fn unit(&self) -> usize {
        2
    }

    fn generate_unit(
        &self,
        spec: &SplitSpec,
        rng: &mut ChaCha8Rng,
        stats: &mut GenStats,
    ) -> Result<Vec<Sequent>> {
        let attempts = spec.limits.pair_attempts;
        let pool = sample_pool(spec.vars.sample(rng), rng);
        let pos = sample_pair_where(
            spec.ops,
            &pool,
            attempts,
            rng,
            "sampling an entailing pair",
            entails,
        )?;
        stats.record_draw(pos.attempts);
        let pool = sample_pool(spec.vars.sample(rng), rng);
        let neg = sample_non_entailing_pair(spec.ops, &pool, attempts, rng)?;
        stats.record_draw(neg.attempts);
        Ok(vec![
            Sequent::trusted(pos.premise, pos.conclusion, true),
            Sequent::trusted(neg.premise, neg.conclusion, false),
        ])
    }
}

pub type MechanismFactory = Arc<dyn Fn() -> Box<dyn Mechanism> + Send + Sync>;

#[derive(Clone)]
pub struct MechanismRegistry {
    factories: BTreeMap<String, MechanismFactory>,
}

impl MechanismRegistry {
    pub fn empty() -> Self {
        MechanismRegistry {
            factories: BTreeMap::new(),
        }
    }

    pub fn register(
        &mut self,
        name: &str,
        factory: impl Fn() -> Box<dyn Mechanism> + Send + Sync + 'static,
    ) {
        self.factories.insert(name.to_string(), Arc::new(factory));
    }

    pub fn names(&self) -> Vec<String> {
        self.factories.keys().cloned().collect()
    }

    pub fn create(&self, name: &str) -> Result<Box<dyn Mechanism>> {
        match self.factories.get(name) {
            Some(f) => Ok(f()),
            None => Err(Error::UnknownStrategy {
                kind: "mechanism",
                name: name.to_string(),
                available: self.names().join(", "),
            }),
        }
    }
}

impl Default for MechanismRegistry {
    fn default() -> Self {
        let mut r = MechanismRegistry::empty();
        r.register("quad", || Box::new(QuadMechanism));
        r.register("mutate", || Box::new(MutateMechanism));
        r.register("naive", || Box::new(NaiveMechanism));
        r
    }
}

/// Units handled by one seeded task. Fixed so that output does not depend on
/// the worker count.
pub const TASK_UNITS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    /// Worker threads; 1 runs every task on the calling thread.
    pub jobs: usize,
    /// Sort the output by canonical form and text.
    pub sort: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            jobs: 1,
            sort: false,
        }
    }
}

fn run_task(
    mechanism: &dyn Mechanism,
    spec: &SplitSpec,
    task: usize,
    units: usize,
) -> Result<(Vec<Sequent>, GenStats)> {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, task as u64));
    let mut stats = GenStats::default();
    let mut out = Vec::with_capacity(units * mechanism.unit());
    for _ in 0..units {
        out.extend(mechanism.generate_unit(spec, &mut rng, &mut stats)?);
    }
    Ok((out, stats))
}

/// Sort key that makes parallel and sequential output byte-identical.
pub fn sort_sequents(sequents: &mut [Sequent]) {
    sequents.sort_by_cached_key(|s| {
        (
            canonicalize_sequent(&s.premise, &s.conclusion),
            s.to_string(),
        )
    });
}

/// Builds a split with the registered mechanism named in `spec`. The size is
/// rounded up to a whole number of mechanism units.
pub fn build_split_with(
    registry: &MechanismRegistry,
    spec: &SplitSpec,
    opts: BuildOptions,
) -> Result<Dataset> {
    spec.validate()?;
    let mechanism = registry.create(&spec.mechanism)?;
    let total_units = spec.size.div_ceil(mechanism.unit());
    let tasks: Vec<(usize, usize)> = (0..total_units.div_ceil(TASK_UNITS))
        .map(|t| (t, TASK_UNITS.min(total_units - t * TASK_UNITS)))
        .collect();
    let mech = mechanism.as_ref();
    let results: Vec<Result<(Vec<Sequent>, GenStats)>> = if opts.jobs <= 1 {
        tasks
            .iter()
            .map(|&(t, n)| run_task(mech, spec, t, n))
            .collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::InvalidSpec(format!("cannot start {} workers: {e}", opts.jobs)))?;
        pool.install(|| {
            tasks
                .par_iter()
                .map(|&(t, n)| run_task(mech, spec, t, n))
                .collect()
        })
    };
    let mut sequents = Vec::with_capacity(total_units * mechanism.unit());
    let mut stats = GenStats::default();
    for r in results {
        let (s, st) = r?;
        sequents.extend(s);
        stats.merge(&st);
    }
    for s in &sequents {
        s.verify()?;
    }
    if opts.sort {
        sort_sequents(&mut sequents);
    }
    log::info!(
        "{}: {} sequents, pair acceptance {:.4}, {} abandoned pools",
        spec.name,
        sequents.len(),
        stats.acceptance_rate(),
        stats.abandoned_pools
    );
    Ok(Dataset {
        sequents,
        provenance: Some(Provenance::new(spec.clone(), stats)),
    })
}

pub fn build_split(spec: &SplitSpec, opts: BuildOptions) -> Result<Dataset> {
    build_split_with(&MechanismRegistry::default(), spec, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generation::IntRange;

    fn small(mechanism: &str, size: usize, seed: u64) -> SplitSpec {
        SplitSpec::new(
            "t",
            size,
            IntRange::new(1, 5),
            IntRange::new(1, 5),
            mechanism,
            seed,
        )
    }

    #[test]
    fn quad_split_is_balanced_and_correct() {
        let d = build_split(&small("quad", 200, 1), BuildOptions::default()).unwrap();
        assert_eq!(d.sequents.len(), 200);
        assert_eq!(d.sequents.iter().filter(|s| s.label).count(), 100);
        for chunk in d.sequents.chunks(4) {
            let q = QuadTuple {
                a1: chunk[0].premise.clone(),
                b1: chunk[0].conclusion.clone(),
                a2: chunk[1].premise.clone(),
                b2: chunk[1].conclusion.clone(),
            };
            assert!(q.is_valid());
        }
    }

    #[test]
    fn size_rounds_up_to_units() {
        let d = build_split(&small("quad", 5, 2), BuildOptions::default()).unwrap();
        assert_eq!(d.sequents.len(), 8);
        let d = build_split(&small("mutate", 5, 2), BuildOptions::default()).unwrap();
        assert_eq!(d.sequents.len(), 6);
    }

    #[test]
    fn mutate_shares_premises() {
        let d = build_split(&small("mutate", 40, 3), BuildOptions::default()).unwrap();
        for pair in d.sequents.chunks(2) {
            assert_eq!(pair[0].premise, pair[1].premise);
            assert!(pair[0].label && !pair[1].label);
        }
        let stats = &d.provenance.unwrap().stats;
        assert_eq!(stats.mutation_edits.values().sum::<u64>(), 20);
    }

    #[test]
    fn jobs_do_not_change_output() {
        let spec = small("quad", 300, 4);
        let one = build_split(
            &spec,
            BuildOptions {
                jobs: 1,
                sort: false,
            },
        )
        .unwrap();
        let four = build_split(
            &spec,
            BuildOptions {
                jobs: 4,
                sort: false,
            },
        )
        .unwrap();
        assert_eq!(one.sequents, four.sequents);
        let sorted = build_split(
            &spec,
            BuildOptions {
                jobs: 3,
                sort: true,
            },
        )
        .unwrap();
        let mut expected = one.sequents.clone();
        sort_sequents(&mut expected);
        assert_eq!(sorted.sequents, expected);
    }

    #[test]
    fn unknown_mechanism() {
        let err = build_split(&small("telepathy", 4, 0), BuildOptions::default()).unwrap_err();
        assert!(matches!(err, Error::UnknownStrategy { .. }));
    }
}
