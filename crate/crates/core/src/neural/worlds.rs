use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Fixed random world vectors, stored one world per column (`k × n`).
#[derive(Clone, Debug, PartialEq)]
pub struct WorldSet {
    pub seed: u64,
    matrix: Array2<f64>,
}

impl WorldSet {
    pub fn from_matrix(seed: u64, matrix: Array2<f64>) -> Self {
        assert!(
            matrix.nrows() >= 1 && matrix.ncols() >= 1,
            "world set must be non-empty"
        );
        WorldSet { seed, matrix }
    }

    pub fn count(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn width(&self) -> usize {
        self.matrix.nrows()
    }

    /// `k × n`, world `i` in column `i`.
    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }
}

/// `n` worlds of width `k`, entries i.i.d. Uniform(−1, 1).
pub fn sample_worlds(n: usize, k: usize, seed: u64) -> WorldSet {
    assert!(
        n >= 1 && k >= 1,
        "need at least one world of width at least one"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut matrix = Array2::zeros((k, n));
    for i in 0..n {
        for j in 0..k {
            matrix[[j, i]] = rng.random_range(-1.0..1.0);
        }
    }
    WorldSet { seed, matrix }
}
