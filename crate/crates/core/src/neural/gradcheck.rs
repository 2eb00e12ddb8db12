//! Central finite-difference checks of analytic gradients.

use ndarray::Array2;

use crate::generation::Sequent;
use crate::neural::{treenet_cell, treenet_cell_backward, CellWeights, EntailmentModel};

/// `|a − n| / max(|a|, |n|, 10⁻⁶)`; the floor keeps near-zero gradients from
/// amplifying rounding noise.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-6)
}

/// Central difference of `loss` in coordinate `x[i]`.
pub fn central_difference(
    x: &mut [f64],
    i: usize,
    step: f64,
    mut loss: impl FnMut(&[f64]) -> f64,
) -> f64 {
    let saved = x[i];
    x[i] = saved + step;
    let up = loss(x);
    x[i] = saved - step;
    let down = loss(x);
    x[i] = saved;
    (up - down) / (2.0 * step)
}

/// Largest relative error between the model's gradient and central
/// differences, over every scalar parameter.
pub fn max_relative_error(model: &mut dyn EntailmentModel, s: &Sequent, step: f64) -> f64 {
    let mut grads = model.params().zeros_like();
    model.accumulate_gradient(s, &mut grads);
    let mut worst: f64 = 0.0;
    for i in 0..grads.count() {
        let saved = model.params().flat(i);
        *model.params_mut().flat_mut(i) = saved + step;
        let up = model.loss(s);
        *model.params_mut().flat_mut(i) = saved - step;
        let down = model.loss(s);
        *model.params_mut().flat_mut(i) = saved;
        let numeric = (up - down) / (2.0 * step);
        worst = worst.max(relative_error(grads.flat(i), numeric));
    }
    worst
}

/// Cell inputs in the order `w1, w2, w3, b1, b3, x`.
pub type CellInputs = [Array2<f64>; 6];

fn cell_weights(m: &CellInputs) -> CellWeights<'_> {
    CellWeights {
        w1: &m[0],
        w2: &m[1],
        w3: &m[2],
        b1: &m[3],
        b3: &m[4],
    }
}

/// Checks the cell backward pass on the scalar `Σ dp ⊙ cell(x)`, over every
/// weight, bias and input coordinate.
pub fn cell_max_relative_error(inputs: &CellInputs, dp: &Array2<f64>, step: f64) -> f64 {
    let cache = treenet_cell(cell_weights(inputs), inputs[5].clone());
    let g = treenet_cell_backward(cell_weights(inputs), &cache, dp);
    let analytic = [g.w1, g.w2, g.w3, g.b1, g.b3, g.x];
    let mut m = inputs.clone();
    let mut worst: f64 = 0.0;
    for t in 0..m.len() {
        for (i, a) in analytic[t].iter().enumerate() {
            let (r, c) = (i / m[t].ncols(), i % m[t].ncols());
            let saved = m[t][[r, c]];
            let eval = |v: f64, m: &mut CellInputs| {
                m[t][[r, c]] = v;
                (&treenet_cell(cell_weights(m), m[5].clone()).p * dp).sum()
            };
            let up = eval(saved + step, &mut m);
            let down = eval(saved - step, &mut m);
            m[t][[r, c]] = saved;
            worst = worst.max(relative_error(*a, (up - down) / (2.0 * step)));
        }
    }
    worst
}
