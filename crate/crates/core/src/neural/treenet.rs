//! Tree-structured encoder built from a gated residual cell, with a
//! perceptron head over the two formula encodings.

use ndarray::{concatenate, s, Array2, Axis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::generation::Sequent;
use crate::logic::{Formula, Op, ALPHABET};
use crate::neural::ops::{
    bce_from_logit, flatten, normalize_backward, normalize_columns, sigmoid, FlatNode,
};
use crate::neural::{EntailmentModel, ModelConfig, ParamId, ParamSet};

/// Weights of one cell: `h = W₁x + W₂σ(W₃x + b₃) + b₁`, output `h/‖h‖`.
#[derive(Clone, Copy)]
pub struct CellWeights<'a> {
    pub w1: &'a Array2<f64>,
    pub w2: &'a Array2<f64>,
    pub w3: &'a Array2<f64>,
    pub b1: &'a Array2<f64>,
    pub b3: &'a Array2<f64>,
}

/// Forward activations kept for the backward pass.
#[derive(Clone, Debug)]
pub struct CellCache {
    pub x: Array2<f64>,
    /// `σ(W₃x + b₃)`.
    pub gate: Array2<f64>,
    pub h: Array2<f64>,
    pub norms: Vec<f64>,
    pub p: Array2<f64>,
}

#[derive(Clone, Debug)]
pub struct CellGrads {
    pub w1: Array2<f64>,
    pub w2: Array2<f64>,
    pub w3: Array2<f64>,
    pub b1: Array2<f64>,
    pub b3: Array2<f64>,
    pub x: Array2<f64>,
}

/// Applies the cell to each column of `x`.
pub fn treenet_cell(w: CellWeights<'_>, x: Array2<f64>) -> CellCache {
    let gate = (w.w3.dot(&x) + w.b3).mapv(sigmoid);
    let h = w.w1.dot(&x) + w.w2.dot(&gate) + w.b1;
    let (p, norms) = normalize_columns(&h);
    CellCache {
        x,
        gate,
        h,
        norms,
        p,
    }
}

pub fn treenet_cell_backward(w: CellWeights<'_>, cache: &CellCache, dp: &Array2<f64>) -> CellGrads {
    let dh = normalize_backward(&cache.h, &cache.norms, dp);
    let dgate = w.w2.t().dot(&dh);
    let du = dgate * &cache.gate * &cache.gate.mapv(|g| 1.0 - g);
    let x = w.w1.t().dot(&dh) + w.w3.t().dot(&du);
    CellGrads {
        w1: dh.dot(&cache.x.t()),
        w2: dh.dot(&cache.gate.t()),
        w3: du.dot(&cache.x.t()),
        b1: dh.sum_axis(Axis(1)).insert_axis(Axis(1)),
        b3: du.sum_axis(Axis(1)).insert_axis(Axis(1)),
        x,
    }
}

#[derive(Clone, Copy, Debug)]
struct CellIds {
    w1: ParamId,
    w2: ParamId,
    w3: ParamId,
    b1: ParamId,
    b3: ParamId,
}

#[derive(Clone, Debug)]
struct Ids {
    leaf: [ParamId; ALPHABET],
    cells: [CellIds; 4],
    wh: ParamId,
    bh: ParamId,
    wo: ParamId,
    bo: ParamId,
}

enum NodeCache {
    Leaf(usize),
    Cell(Box<CellCache>),
}

impl NodeCache {
    fn output<'a>(&'a self, params: &'a ParamSet, ids: &Ids) -> &'a Array2<f64> {
        match self {
            NodeCache::Leaf(v) => params.get(ids.leaf[*v]),
            NodeCache::Cell(c) => &c.p,
        }
    }
}

/// `P(A ⊨ B) = σ(w_o · tanh(W_h · concat(enc(A), enc(B)) + b_h) + b_o)`.
#[derive(Clone, Debug)]
pub struct TreeNet {
    config: ModelConfig,
    params: ParamSet,
    ids: Ids,
}

impl TreeNet {
    pub fn new(config: ModelConfig) -> Self {
        let (d, hidden) = (config.d, config.hidden);
        let mut rng = ChaCha8Rng::seed_from_u64(config.init_seed);
        let mut params = ParamSet::new();
        let leaf = std::array::from_fn(|i| {
            params.add_gaussian(
                format!("leaf.{}", (b'a' + i as u8) as char),
                d,
                1,
                d,
                &mut rng,
            )
        });
        let cells = std::array::from_fn(|i| {
            let op = Op::ALL[i];
            let width = op.arity() * d;
            let name = op.name();
            CellIds {
                w1: params.add_gaussian(format!("w1.{name}"), d, width, width, &mut rng),
                w2: params.add_gaussian(format!("w2.{name}"), d, d, d, &mut rng),
                w3: params.add_gaussian(format!("w3.{name}"), d, width, width, &mut rng),
                b1: params.add_zeros(format!("b1.{name}"), d, 1),
                b3: params.add_zeros(format!("b3.{name}"), d, 1),
            }
        });
        let wh = params.add_gaussian("wh", hidden, 2 * d, 2 * d, &mut rng);
        let bh = params.add_zeros("bh", hidden, 1);
        let wo = params.add_gaussian("wo", 1, hidden, hidden, &mut rng);
        let bo = params.add_zeros("bo", 1, 1);
        TreeNet {
            config,
            params,
            ids: Ids {
                leaf,
                cells,
                wh,
                bh,
                wo,
                bo,
            },
        }
    }

    fn weights(&self, op: Op) -> CellWeights<'_> {
        let c = self.ids.cells[op.index()];
        CellWeights {
            w1: self.params.get(c.w1),
            w2: self.params.get(c.w2),
            w3: self.params.get(c.w3),
            b1: self.params.get(c.b1),
            b3: self.params.get(c.b3),
        }
    }

    fn encode(&self, f: &Formula) -> (Vec<FlatNode>, Vec<NodeCache>) {
        let nodes = flatten(f);
        let mut caches: Vec<NodeCache> = Vec::with_capacity(nodes.len());
        for &node in &nodes {
            let cache = match node {
                FlatNode::Leaf(v) => NodeCache::Leaf(v.index()),
                FlatNode::Unary(c) => {
                    let x = caches[c].output(&self.params, &self.ids).clone();
                    NodeCache::Cell(Box::new(treenet_cell(self.weights(Op::Not), x)))
                }
                FlatNode::Binary(op, l, r) => {
                    let x = concatenate![
                        Axis(0),
                        caches[l].output(&self.params, &self.ids).view(),
                        caches[r].output(&self.params, &self.ids).view()
                    ];
                    NodeCache::Cell(Box::new(treenet_cell(self.weights(op), x)))
                }
            };
            caches.push(cache);
        }
        (nodes, caches)
    }

    /// Encoding of a formula: the root cell output, or the leaf embedding.
    pub fn embed(&self, f: &Formula) -> Array2<f64> {
        let (_, caches) = self.encode(f);
        caches
            .last()
            .unwrap()
            .output(&self.params, &self.ids)
            .clone()
    }

    fn head(&self, x: &Array2<f64>) -> (Array2<f64>, f64) {
        let t =
            (self.params.get(self.ids.wh).dot(x) + self.params.get(self.ids.bh)).mapv(f64::tanh);
        let z = self.params.get(self.ids.wo).dot(&t)[[0, 0]] + self.params.get(self.ids.bo)[[0, 0]];
        (t, z)
    }

    fn backward_tree(
        &self,
        nodes: &[FlatNode],
        caches: &[NodeCache],
        d_root: Array2<f64>,
        grads: &mut ParamSet,
    ) {
        let d = self.config.d;
        let mut dp: Vec<Option<Array2<f64>>> = vec![None; nodes.len()];
        *dp.last_mut().unwrap() = Some(d_root);
        for i in (0..nodes.len()).rev() {
            let Some(dpi) = dp[i].take() else { continue };
            let (op, children) = match nodes[i] {
                FlatNode::Leaf(v) => {
                    *grads.get_mut(self.ids.leaf[v.index()]) += &dpi;
                    continue;
                }
                FlatNode::Unary(c) => (Op::Not, vec![c]),
                FlatNode::Binary(op, l, r) => (op, vec![l, r]),
            };
            let NodeCache::Cell(cache) = &caches[i] else {
                unreachable!()
            };
            let g = treenet_cell_backward(self.weights(op), cache, &dpi);
            let ids = self.ids.cells[op.index()];
            *grads.get_mut(ids.w1) += &g.w1;
            *grads.get_mut(ids.w2) += &g.w2;
            *grads.get_mut(ids.w3) += &g.w3;
            *grads.get_mut(ids.b1) += &g.b1;
            *grads.get_mut(ids.b3) += &g.b3;
            for (slot, &c) in children.iter().enumerate() {
                let part = g.x.slice(s![slot * d..(slot + 1) * d, ..]).to_owned();
                match &mut dp[c] {
                    Some(acc) => *acc += &part,
                    empty => *empty = Some(part),
                }
            }
        }
    }
}

impl EntailmentModel for TreeNet {
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
        let x = concatenate![Axis(0), self.embed(a).view(), self.embed(b).view()];
        sigmoid(self.head(&x).1)
    }

    fn accumulate_gradient(&self, s: &Sequent, grads: &mut ParamSet) -> f64 {
        let d = self.config.d;
        let (na, ca) = self.encode(&s.premise);
        let (nb, cb) = self.encode(&s.conclusion);
        let x = concatenate![
            Axis(0),
            ca.last().unwrap().output(&self.params, &self.ids).view(),
            cb.last().unwrap().output(&self.params, &self.ids).view()
        ];
        let (t, z) = self.head(&x);
        let (loss, dz) = bce_from_logit(z, s.label);
        grads.get_mut(self.ids.bo)[[0, 0]] += dz;
        grads.get_mut(self.ids.wo).scaled_add(dz, &t.t());
        let dt = self.params.get(self.ids.wo).t().to_owned() * dz;
        let du = dt * &t.mapv(|t| 1.0 - t * t);
        *grads.get_mut(self.ids.bh) += &du;
        *grads.get_mut(self.ids.wh) += &du.dot(&x.t());
        let dx = self.params.get(self.ids.wh).t().dot(&du);
        self.backward_tree(&na, &ca, dx.slice(s![..d, ..]).to_owned(), grads);
        self.backward_tree(&nb, &cb, dx.slice(s![d.., ..]).to_owned(), grads);
        loss
    }
}
