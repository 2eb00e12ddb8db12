use ndarray::Array2;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Index of a tensor inside a [`ParamSet`].
pub type ParamId = usize;

/// Named dense tensors. Gradients and optimizer moments use a `ParamSet`
/// of the same layout.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParamSet {
    names: Vec<String>,
    tensors: Vec<Array2<f64>>,
}

impl ParamSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, name: impl Into<String>, value: Array2<f64>) -> ParamId {
        self.names.push(name.into());
        self.tensors.push(value);
        self.tensors.len() - 1
    }

    /// Adds a `rows × cols` tensor with entries `N(0, 1/fan_in)`.
    pub fn add_gaussian<R: Rng + ?Sized>(
        &mut self,
        name: impl Into<String>,
        rows: usize,
        cols: usize,
        fan_in: usize,
        rng: &mut R,
    ) -> ParamId {
        let normal = Normal::new(0.0, 1.0 / (fan_in.max(1) as f64).sqrt()).unwrap();
        let value = Array2::from_shape_simple_fn((rows, cols), || normal.sample(rng));
        self.add(name, value)
    }

    pub fn add_zeros(&mut self, name: impl Into<String>, rows: usize, cols: usize) -> ParamId {
        self.add(name, Array2::zeros((rows, cols)))
    }

    pub fn get(&self, id: ParamId) -> &Array2<f64> {
        &self.tensors[id]
    }

    pub fn get_mut(&mut self, id: ParamId) -> &mut Array2<f64> {
        &mut self.tensors[id]
    }

    pub fn name(&self, id: ParamId) -> &str {
        &self.names[id]
    }

    pub fn find(&self, name: &str) -> Option<ParamId> {
        self.names.iter().position(|n| n == name)
    }

    /// Number of tensors.
    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    /// Total number of scalar parameters.
    pub fn count(&self) -> usize {
        self.tensors.iter().map(|t| t.len()).sum()
    }

    pub fn zeros_like(&self) -> ParamSet {
        ParamSet {
            names: self.names.clone(),
            tensors: self
                .tensors
                .iter()
                .map(|t| Array2::zeros(t.raw_dim()))
                .collect(),
        }
    }

    pub fn fill_zero(&mut self) {
        for t in &mut self.tensors {
            t.fill(0.0);
        }
    }

    pub fn scale(&mut self, factor: f64) {
        for t in &mut self.tensors {
            *t *= factor;
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &ParamSet, factor: f64) {
        for (a, b) in self.tensors.iter_mut().zip(&other.tensors) {
            a.scaled_add(factor, b);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Array2<f64>)> {
        self.names.iter().map(String::as_str).zip(&self.tensors)
    }

    pub fn tensors_mut(&mut self) -> impl Iterator<Item = &mut Array2<f64>> {
        self.tensors.iter_mut()
    }

    pub fn all_finite(&self) -> bool {
        self.tensors.iter().all(|t| t.iter().all(|x| x.is_finite()))
    }

    /// Scalar at flat position `index` across all tensors in order.
    pub fn flat_mut(&mut self, mut index: usize) -> &mut f64 {
        for t in &mut self.tensors {
            if index < t.len() {
                let cols = t.ncols();
                return &mut t[[index / cols, index % cols]];
            }
            index -= t.len();
        }
        panic!("flat index out of range");
    }

    pub fn flat(&self, mut index: usize) -> f64 {
        for t in &self.tensors {
            if index < t.len() {
                return t[[index / t.ncols(), index % t.ncols()]];
            }
            index -= t.len();
        }
        panic!("flat index out of range");
    }

    pub fn to_records(&self) -> Vec<TensorRecord> {
        self.iter()
            .map(|(name, t)| TensorRecord {
                name: name.to_string(),
                rows: t.nrows(),
                cols: t.ncols(),
                data: t.iter().copied().collect(),
            })
            .collect()
    }

    /// Overwrites tensors from records; names and shapes must match.
    pub fn load_records(&mut self, records: &[TensorRecord]) -> Result<(), String> {
        if records.len() != self.len() {
            return Err(format!(
                "expected {} tensors, found {}",
                self.len(),
                records.len()
            ));
        }
        for (i, r) in records.iter().enumerate() {
            if r.name != self.names[i] {
                return Err(format!(
                    "tensor {i} is {:?}, expected {:?}",
                    r.name, self.names[i]
                ));
            }
            let t = Array2::from_shape_vec((r.rows, r.cols), r.data.clone())
                .map_err(|e| e.to_string())?;
            if t.raw_dim() != self.tensors[i].raw_dim() {
                return Err(format!(
                    "tensor {:?} has shape {}x{}",
                    r.name, r.rows, r.cols
                ));
            }
            self.tensors[i] = t;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorRecord {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn layout_and_flat_access() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut p = ParamSet::new();
        let a = p.add_gaussian("a", 2, 3, 3, &mut rng);
        let b = p.add_zeros("b", 4, 1);
        assert_eq!(p.count(), 10);
        *p.flat_mut(7) = 5.0;
        assert_eq!(p.get(b)[[1, 0]], 5.0);
        assert_eq!(p.flat(4), p.get(a)[[1, 1]]);
        let mut g = p.zeros_like();
        g.add_scaled(&p, 2.0);
        assert_eq!(g.get(b)[[1, 0]], 10.0);
        assert_eq!(p.find("b"), Some(b));
    }

    #[test]
    fn records_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut p = ParamSet::new();
        p.add_gaussian("w", 3, 2, 2, &mut rng);
        let recs = p.to_records();
        let mut q = p.zeros_like();
        q.load_records(&recs).unwrap();
        assert_eq!(p, q);
        let mut bad = recs.clone();
        bad[0].rows = 2;
        bad[0].cols = 3;
        assert!(q.load_records(&bad).is_err());
    }

    #[test]
    fn gaussian_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut p = ParamSet::new();
        let id = p.add_gaussian("w", 200, 100, 100, &mut rng);
        let var = p.get(id).iter().map(|x| x * x).sum::<f64>() / 20_000.0;
        assert!((var - 0.01).abs() < 0.001, "{var}");
    }
}
