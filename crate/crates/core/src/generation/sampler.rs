//! Random formulas with an exact operator budget.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::generation::IntRange;
use crate::logic::{Formula, Op, Var, ALPHABET};
use crate::semantics::{entails, satisfiable};

/// Draws `size` distinct variables.
pub fn sample_pool<R: Rng + ?Sized>(size: usize, rng: &mut R) -> Vec<Var> {
    let mut pool: Vec<Var> = index::sample(rng, ALPHABET, size)
        .into_iter()
        .map(|i| Var::new(i).unwrap())
        .collect();
    pool.sort();
    pool
}

/// A formula with exactly `num_ops` connectives over `pool`. Each node picks
/// its connective uniformly; binary nodes split the remaining budget
/// uniformly between their children.
pub fn sample_formula<R: Rng + ?Sized>(num_ops: usize, pool: &[Var], rng: &mut R) -> Formula {
    assert!(!pool.is_empty(), "variable pool must be non-empty");
    if num_ops == 0 {
        return Formula::Var(pool[rng.random_range(0..pool.len())]);
    }
    let op = Op::ALL[rng.random_range(0..4)];
    let rest = num_ops - 1;
    match op {
        Op::Not => Formula::not(sample_formula(rest, pool, rng)),
        _ => {
            let left = rng.random_range(0..=rest);
            let l = sample_formula(left, pool, rng);
            let r = sample_formula(rest - left, pool, rng);
            Formula::binary(op, l, r)
        }
    }
}

/// An accepted pair plus the number of raw draws it took.
#[derive(Clone, Debug)]
pub struct PairDraw {
    pub premise: Formula,
    pub conclusion: Formula,
    pub attempts: usize,
}

/// Rejection-samples independent formulas until `accept` holds.
pub fn sample_pair_where<R: Rng + ?Sized>(
    ops: IntRange,
    pool: &[Var],
    max_attempts: usize,
    rng: &mut R,
    what: &'static str,
    accept: impl Fn(&Formula, &Formula) -> bool,
) -> Result<PairDraw> {
    for attempts in 1..=max_attempts {
        let premise = sample_formula(ops.sample(rng), pool, rng);
        let conclusion = sample_formula(ops.sample(rng), pool, rng);
        if accept(&premise, &conclusion) {
            return Ok(PairDraw {
                premise,
                conclusion,
                attempts,
            });
        }
    }
    Err(Error::BudgetExhausted {
        what,
        budget: max_attempts,
    })
}

/// `A ⊨ B` with `A` satisfiable and `B` not valid; pairs failing the latter
/// two conditions can never take part in a 4-tuple.
pub fn is_useful_entailment(premise: &Formula, conclusion: &Formula) -> bool {
    entails(premise, conclusion)
        && satisfiable(premise)
        && satisfiable(&Formula::not(conclusion.clone()))
}

pub fn sample_entailing_pair<R: Rng + ?Sized>(
    ops: IntRange,
    pool: &[Var],
    max_attempts: usize,
    rng: &mut R,
) -> Result<PairDraw> {
    sample_pair_where(
        ops,
        pool,
        max_attempts,
        rng,
        "sampling an entailing pair",
        is_useful_entailment,
    )
}

pub fn sample_non_entailing_pair<R: Rng + ?Sized>(
    ops: IntRange,
    pool: &[Var],
    max_attempts: usize,
    rng: &mut R,
) -> Result<PairDraw> {
    sample_pair_where(
        ops,
        pool,
        max_attempts,
        rng,
        "sampling a non-entailing pair",
        |a, b| !entails(a, b),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::metrics;
    use crate::semantics::{classify, Classification};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_ops_is_leaf() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pool = sample_pool(3, &mut rng);
        for _ in 0..50 {
            match sample_formula(0, &pool, &mut rng) {
                Formula::Var(v) => assert!(pool.contains(&v)),
                other => panic!("expected leaf, got {other}"),
            }
        }
    }

    #[test]
    fn one_op_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pool = sample_pool(4, &mut rng);
        let mut seen = [false; 4];
        for _ in 0..200 {
            let f = sample_formula(1, &pool, &mut rng);
            assert_eq!(f.depth(), 1);
            seen[f.op().unwrap().index()] = true;
        }
        assert_eq!(seen, [true; 4]);
    }

    #[test]
    fn exact_operator_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..10_000 {
            let n = trial % 31;
            let pool = sample_pool(1 + trial % 26, &mut rng);
            let f = sample_formula(n, &pool, &mut rng);
            let m = metrics(&f);
            assert_eq!(m.op_total, n);
            assert!(m.vars.iter().all(|v| pool.contains(&v)));
        }
    }

    #[test]
    fn pool_is_distinct() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pool = sample_pool(26, &mut rng);
        assert_eq!(pool, Var::all().collect::<Vec<_>>());
    }

    #[test]
    fn entailing_pairs_are_useful() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let pool = sample_pool(rng.random_range(1..=6), &mut rng);
            let d = sample_entailing_pair(IntRange::new(1, 6), &pool, 100_000, &mut rng).unwrap();
            assert!(entails(&d.premise, &d.conclusion));
            assert_ne!(classify(&d.premise), Classification::Contradiction);
            assert_ne!(classify(&d.conclusion), Classification::Tautology);
        }
    }

    #[test]
    fn budget_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let pool = sample_pool(2, &mut rng);
        let err = sample_pair_where(
            IntRange::new(1, 2),
            &pool,
            10,
            &mut rng,
            "testing",
            |_, _| false,
        )
        .unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted { budget: 10, .. }));
    }
}
