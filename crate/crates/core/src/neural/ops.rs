//! Shared numeric pieces: column normalization, losses, tree flattening.

use ndarray::{Array2, Axis};

use crate::logic::{Formula, Op, Var};

/// Added to every norm before dividing.
pub const NORM_EPS: f64 = 1e-8;

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + eˣ)` without overflow.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

pub fn log_sigmoid(x: f64) -> f64 {
    -softplus(-x)
}

/// Binary cross-entropy of `σ(z)` against `y`, with its derivative in `z`.
pub fn bce_from_logit(z: f64, y: bool) -> (f64, f64) {
    let t = if y { 1.0 } else { 0.0 };
    (softplus(z) - t * z, sigmoid(z) - t)
}

/// `ln(1 − eˡ)` for `l ≤ 0`.
fn log1m_exp(l: f64) -> f64 {
    if l > -std::f64::consts::LN_2 {
        (-l.exp_m1()).ln()
    } else {
        (-l.exp()).ln_1p()
    }
}

/// Binary cross-entropy of `P = eˡ` against `y`, with its derivative in `l`.
pub fn bce_from_log_prob(l: f64, y: bool) -> (f64, f64) {
    if y {
        (-l, -1.0)
    } else {
        // d/dl −ln(1 − eˡ) = eˡ / (1 − eˡ) = 1 / (e⁻ˡ − 1)
        (-log1m_exp(l), 1.0 / (-l).exp_m1())
    }
}

/// Normalizes every column: `p = h / (‖h‖ + ε)`. Returns `p` and the norms.
pub fn normalize_columns(h: &Array2<f64>) -> (Array2<f64>, Vec<f64>) {
    let norms: Vec<f64> = h.axis_iter(Axis(1)).map(|c| c.dot(&c).sqrt()).collect();
    let mut p = h.clone();
    for (mut col, &r) in p.axis_iter_mut(Axis(1)).zip(&norms) {
        col /= r + NORM_EPS;
    }
    (p, norms)
}

/// Gradient through [`normalize_columns`]:
/// `dh = dp/s − h (h·dp) / (r s²)` with `s = r + ε`.
pub fn normalize_backward(h: &Array2<f64>, norms: &[f64], dp: &Array2<f64>) -> Array2<f64> {
    let mut dh = dp.clone();
    for (i, mut col) in dh.axis_iter_mut(Axis(1)).enumerate() {
        let r = norms[i];
        let s = r + NORM_EPS;
        let hc = h.column(i);
        let proj = if r > 0.0 {
            hc.dot(&dp.column(i)) / (r * s * s)
        } else {
            0.0
        };
        col /= s;
        col.scaled_add(-proj, &hc);
    }
    dh
}

/// One node of a formula in post-order; children precede parents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlatNode {
    Leaf(Var),
    Unary(usize),
    Binary(Op, usize, usize),
}

/// Post-order node list; the root is last.
pub fn flatten(f: &Formula) -> Vec<FlatNode> {
    fn go(f: &Formula, out: &mut Vec<FlatNode>) -> usize {
        let node = match f {
            Formula::Var(v) => FlatNode::Leaf(*v),
            Formula::Not(c) => FlatNode::Unary(go(c, out)),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                let l = go(l, out);
                let r = go(r, out);
                FlatNode::Binary(f.op().unwrap(), l, r)
            }
        };
        out.push(node);
        out.len() - 1
    }
    let mut out = Vec::with_capacity(f.len());
    go(f, &mut out);
    out
}
