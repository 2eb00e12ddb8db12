//! PossibleWorldNet: formulas are evaluated in every random world by a learned
//! vector-valued satisfaction function, and the per-world verdicts multiply.

use ndarray::{s, Array2, Axis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::generation::Sequent;
use crate::logic::{Formula, Op, ALPHABET};
use crate::neural::ops::{
    bce_from_log_prob, flatten, log_sigmoid, normalize_backward, normalize_columns, sigmoid,
    FlatNode,
};
use crate::neural::{sample_worlds, EntailmentModel, ModelConfig, ParamId, ParamSet, WorldSet};

#[derive(Clone, Debug)]
struct Ids {
    w4: [ParamId; ALPHABET],
    w1: [ParamId; 4],
    b1: [ParamId; 4],
    wf: ParamId,
    bf: ParamId,
}

/// Activations of one node across all worlds (`d × n`).
struct NodeState {
    node: FlatNode,
    h: Array2<f64>,
    norms: Vec<f64>,
    p: Array2<f64>,
}

#[derive(Clone, Debug)]
pub struct PwNet {
    config: ModelConfig,
    params: ParamSet,
    worlds: WorldSet,
    ids: Ids,
}

impl PwNet {
    pub fn new(config: ModelConfig) -> Self {
        let worlds = sample_worlds(config.worlds, config.k, config.world_seed);
        Self::with_worlds(config, worlds)
    }

    pub fn with_worlds(config: ModelConfig, worlds: WorldSet) -> Self {
        let (d, k) = (config.d, config.k);
        assert_eq!(worlds.width(), k, "world width must equal k");
        let mut rng = ChaCha8Rng::seed_from_u64(config.init_seed);
        let mut params = ParamSet::new();
        let w4 = std::array::from_fn(|i| {
            let name = format!("w4.{}", (b'a' + i as u8) as char);
            params.add_gaussian(name, d, k, k, &mut rng)
        });
        let w1 = std::array::from_fn(|i| {
            let op = Op::ALL[i];
            let fan = op.arity() * d;
            params.add_gaussian(format!("w1.{}", op.name()), d, fan, fan, &mut rng)
        });
        let b1 =
            std::array::from_fn(|i| params.add_zeros(format!("b1.{}", Op::ALL[i].name()), d, 1));
        let wf = params.add_gaussian("wf", 1, 2 * d, 2 * d, &mut rng);
        // start every factor at 2^(-1/n) so the initial product is 1/2
        let n = worlds.count() as f64;
        let f0 = 0.5f64.powf(1.0 / n);
        let bf = params.add("bf", Array2::from_elem((1, 1), (f0 / (1.0 - f0)).ln()));
        PwNet {
            config,
            params,
            worlds,
            ids: Ids { w4, w1, b1, wf, bf },
        }
    }

    pub fn worlds(&self) -> &WorldSet {
        &self.worlds
    }

    fn encode(&self, f: &Formula, worlds: &Array2<f64>) -> Vec<NodeState> {
        let d = self.config.d;
        let mut states: Vec<NodeState> = Vec::with_capacity(f.len());
        for node in flatten(f) {
            let h = match node {
                FlatNode::Leaf(v) => self.params.get(self.ids.w4[v.index()]).dot(worlds),
                FlatNode::Unary(c) => {
                    let i = Op::Not.index();
                    self.params.get(self.ids.w1[i]).dot(&states[c].p)
                        + self.params.get(self.ids.b1[i])
                }
                FlatNode::Binary(op, l, r) => {
                    let w = self.params.get(self.ids.w1[op.index()]);
                    let mut h = w.slice(s![.., ..d]).dot(&states[l].p);
                    h += &w.slice(s![.., d..]).dot(&states[r].p);
                    h + self.params.get(self.ids.b1[op.index()])
                }
            };
            let (p, norms) = normalize_columns(&h);
            states.push(NodeState { node, h, norms, p });
        }
        states
    }

    /// Satisfaction vectors of `f` in every world, one column per world.
    pub fn sat3_all(&self, f: &Formula) -> Array2<f64> {
        self.encode(f, self.worlds.matrix()).pop().unwrap().p
    }

    /// Satisfaction vector of `f` in a single world `w` (length `k`).
    pub fn sat3(&self, w: &[f64], f: &Formula) -> Vec<f64> {
        let world = Array2::from_shape_vec((w.len(), 1), w.to_vec()).expect("world vector");
        self.encode(f, &world)
            .pop()
            .unwrap()
            .p
            .into_iter()
            .collect()
    }

    fn logits(&self, pa: &Array2<f64>, pb: &Array2<f64>) -> Vec<f64> {
        let d = self.config.d;
        let wf = self.params.get(self.ids.wf);
        let bf = self.params.get(self.ids.bf)[[0, 0]];
        let z = wf.slice(s![.., ..d]).dot(pa) + wf.slice(s![.., d..]).dot(pb);
        z.iter().map(|z| z + bf).collect()
    }

    /// Per-world verdicts `fᵢ = σ(W_f · concat(sat₃(wᵢ,A), sat₃(wᵢ,B)) + b_f)`.
    pub fn factors(&self, a: &Formula, b: &Formula) -> Vec<f64> {
        self.logits(&self.sat3_all(a), &self.sat3_all(b))
            .into_iter()
            .map(sigmoid)
            .collect()
    }

    /// `ln P(A ⊨ B) = Σᵢ ln fᵢ`, summed left to right.
    pub fn log_prob(&self, a: &Formula, b: &Formula) -> f64 {
        self.logits(&self.sat3_all(a), &self.sat3_all(b))
            .into_iter()
            .map(log_sigmoid)
            .sum()
    }

    fn backward_tree(&self, states: &[NodeState], d_root: Array2<f64>, grads: &mut ParamSet) {
        let d = self.config.d;
        let mut dp: Vec<Option<Array2<f64>>> = vec![None; states.len()];
        *dp.last_mut().unwrap() = Some(d_root);
        for i in (0..states.len()).rev() {
            let Some(dpi) = dp[i].take() else { continue };
            let st = &states[i];
            let dh = normalize_backward(&st.h, &st.norms, &dpi);
            let mut push = |j: usize, g: Array2<f64>| match &mut dp[j] {
                Some(acc) => *acc += &g,
                slot => *slot = Some(g),
            };
            match st.node {
                FlatNode::Leaf(v) => {
                    let g = grads.get_mut(self.ids.w4[v.index()]);
                    ndarray::linalg::general_mat_mul(1.0, &dh, &self.worlds.matrix().t(), 1.0, g);
                }
                FlatNode::Unary(c) => {
                    let k = Op::Not.index();
                    let w = self.params.get(self.ids.w1[k]);
                    ndarray::linalg::general_mat_mul(
                        1.0,
                        &dh,
                        &states[c].p.t(),
                        1.0,
                        grads.get_mut(self.ids.w1[k]),
                    );
                    *grads.get_mut(self.ids.b1[k]) += &dh.sum_axis(Axis(1)).insert_axis(Axis(1));
                    push(c, w.t().dot(&dh));
                }
                FlatNode::Binary(op, l, r) => {
                    let k = op.index();
                    let w = self.params.get(self.ids.w1[k]);
                    {
                        let g = grads.get_mut(self.ids.w1[k]);
                        let mut gl = g.slice_mut(s![.., ..d]);
                        ndarray::linalg::general_mat_mul(1.0, &dh, &states[l].p.t(), 1.0, &mut gl);
                        let mut gr = g.slice_mut(s![.., d..]);
                        ndarray::linalg::general_mat_mul(1.0, &dh, &states[r].p.t(), 1.0, &mut gr);
                    }
                    *grads.get_mut(self.ids.b1[k]) += &dh.sum_axis(Axis(1)).insert_axis(Axis(1));
                    push(l, w.slice(s![.., ..d]).t().dot(&dh));
                    push(r, w.slice(s![.., d..]).t().dot(&dh));
                }
            }
        }
    }

    /// Cross-entropy loss of `P(A ⊨ B)` against `label`, adding exact
    /// gradients for every parameter into `grads`.
    pub fn backward(&self, a: &Formula, b: &Formula, label: bool, grads: &mut ParamSet) -> f64 {
        let d = self.config.d;
        let worlds = self.worlds.matrix();
        let sa = self.encode(a, worlds);
        let sb = self.encode(b, worlds);
        let pa = &sa.last().unwrap().p;
        let pb = &sb.last().unwrap().p;
        let z = self.logits(pa, pb);
        let log_p: f64 = z.iter().copied().map(log_sigmoid).sum();
        let (loss, dlog_p) = bce_from_log_prob(log_p, label);
        // d ln σ(z)/dz = σ(−z)
        let dz = Array2::from_shape_vec(
            (1, z.len()),
            z.iter().map(|&z| dlog_p * sigmoid(-z)).collect(),
        )
        .unwrap();
        {
            let g = grads.get_mut(self.ids.wf);
            let mut ga = g.slice_mut(s![.., ..d]);
            ndarray::linalg::general_mat_mul(1.0, &dz, &pa.t(), 1.0, &mut ga);
            let mut gb = g.slice_mut(s![.., d..]);
            ndarray::linalg::general_mat_mul(1.0, &dz, &pb.t(), 1.0, &mut gb);
        }
        grads.get_mut(self.ids.bf)[[0, 0]] += dz.sum();
        let wf = self.params.get(self.ids.wf);
        let dpa = wf.slice(s![.., ..d]).t().dot(&dz);
        let dpb = wf.slice(s![.., d..]).t().dot(&dz);
        self.backward_tree(&sa, dpa, grads);
        self.backward_tree(&sb, dpb, grads);
        loss
    }
}

impl EntailmentModel for PwNet {
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
        self.log_prob(a, b).exp()
    }

    fn accumulate_gradient(&self, s: &Sequent, grads: &mut ParamSet) -> f64 {
        self.backward(&s.premise, &s.conclusion, s.label, grads)
    }

    fn loss(&self, s: &Sequent) -> f64 {
        bce_from_log_prob(self.log_prob(&s.premise, &s.conclusion), s.label).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;
    use crate::neural::gradcheck::max_relative_error;

    fn small(n: usize) -> ModelConfig {
        ModelConfig {
            d: 4,
            k: 3,
            worlds: n,
            world_seed: 11,
            init_seed: 12,
            ..ModelConfig::new("pwnet")
        }
    }

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    /// Straight-line scalar evaluator used as an oracle.
    fn naive_sat3(net: &PwNet, w: &[f64], f: &Formula) -> Vec<f64> {
        let d = net.config.d;
        let get = |name: &str| net.params.get(net.params.find(name).unwrap()).clone();
        let norm = |h: Vec<f64>| {
            let r = h.iter().map(|x| x * x).sum::<f64>().sqrt();
            h.into_iter().map(|x| x / (r + 1e-8)).collect::<Vec<_>>()
        };
        let affine = |w: &Array2<f64>, b: &Array2<f64>, x: &[f64]| {
            (0..d)
                .map(|i| b[[i, 0]] + (0..x.len()).map(|j| w[[i, j]] * x[j]).sum::<f64>())
                .collect::<Vec<_>>()
        };
        match f {
            Formula::Var(v) => {
                let m = get(&format!("w4.{v}"));
                norm(
                    (0..d)
                        .map(|i| (0..w.len()).map(|j| m[[i, j]] * w[j]).sum())
                        .collect(),
                )
            }
            Formula::Not(c) => norm(affine(
                &get("w1.not"),
                &get("b1.not"),
                &naive_sat3(net, w, c),
            )),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                let name = f.op().unwrap().name();
                let mut x = naive_sat3(net, w, l);
                x.extend(naive_sat3(net, w, r));
                norm(affine(
                    &get(&format!("w1.{name}")),
                    &get(&format!("b1.{name}")),
                    &x,
                ))
            }
        }
    }

    #[test]
    fn sat3_matches_straight_line_evaluator() {
        let net = PwNet::new(small(3));
        for text in ["p", "~p", "p&q", "(p>~q)|(r&p)"] {
            let formula = f(text);
            let all = net.sat3_all(&formula);
            for i in 0..3 {
                let w: Vec<f64> = net.worlds.matrix().column(i).to_vec();
                let expected = naive_sat3(&net, &w, &formula);
                let got = net.sat3(&w, &formula);
                for j in 0..4 {
                    assert!((got[j] - expected[j]).abs() < 1e-12);
                    assert!((all[[j, i]] - expected[j]).abs() < 1e-12);
                }
                let norm: f64 = got.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((norm - 1.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn identity_leaf_projection() {
        let mut net = PwNet::new(ModelConfig {
            d: 4,
            k: 2,
            ..small(1)
        });
        let id = net.params.find("w4.p").unwrap();
        let w4 = net.params.get_mut(id);
        w4.fill(0.0);
        w4[[0, 0]] = 1.0;
        w4[[1, 1]] = 1.0;
        let out = net.sat3(&[1.0, 0.0], &f("p"));
        assert!((out[0] - 1.0).abs() < 1e-7);
        assert_eq!(&out[1..], &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn zero_predictor_starts_at_even_odds() {
        for n in [1, 3, 8] {
            let mut net = PwNet::new(small(n));
            let (wf, bf) = (net.ids.wf, net.ids.bf);
            net.params.get_mut(wf).fill(0.0);
            let p = net.predict(&f("p&q"), &f("q"));
            assert!((p - 0.5).abs() < 1e-12);
            net.params.get_mut(bf).fill(0.0);
            let p = net.predict(&f("p&q"), &f("q"));
            assert!((p - 0.5f64.powi(n as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn single_world_is_single_factor() {
        let net = PwNet::new(small(1));
        let (a, b) = (f("p|~q"), f("q>p"));
        let factors = net.factors(&a, &b);
        assert_eq!(factors.len(), 1);
        assert!((net.predict(&a, &b) - factors[0]).abs() < 1e-15);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut net = PwNet::new(small(2));
        let s = Sequent::decide(f("(p&q)>~r"), f("~(p|r)&q"));
        let err = max_relative_error(&mut net, &s, 1e-5);
        assert!(err < 1e-4, "{err}");
    }

    #[test]
    fn absent_variable_has_zero_gradient() {
        let net = PwNet::new(small(2));
        let mut grads = net.params.zeros_like();
        net.backward(&f("p&q"), &f("q"), true, &mut grads);
        assert!(grads.get(net.ids.w4[25]).iter().all(|&g| g == 0.0));
        assert!(grads.get(net.ids.w4[15]).iter().any(|&g| g != 0.0));
    }

    #[test]
    fn bias_gradient_single_world() {
        // one world: P = σ(z), BCE gradient in b_f is σ(z) − y
        let net = PwNet::new(small(1));
        let (a, b) = (f("p"), f("p|q"));
        let p = net.predict(&a, &b);
        for label in [true, false] {
            let mut grads = net.params.zeros_like();
            net.backward(&a, &b, label, &mut grads);
            let expected = p - if label { 1.0 } else { 0.0 };
            assert!((grads.get(net.ids.bf)[[0, 0]] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn parameter_count_independent_of_worlds() {
        let c4 = PwNet::new(ModelConfig {
            worlds: 4,
            ..ModelConfig::new("pwnet")
        })
        .params
        .count();
        let c256 = PwNet::new(ModelConfig {
            worlds: 256,
            ..ModelConfig::new("pwnet")
        })
        .params
        .count();
        assert_eq!(c4, c256);
    }
}
