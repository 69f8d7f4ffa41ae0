//! Forward and backward passes.
//!
//! Gradients treat every complex parameter as a (re, im) pair. For a layer
//! output `y` with upstream gradient `G = ∂L/∂Re y + j ∂L/∂Im y`, a tap `g`
//! entering as `g* w` receives `w G*`, and a tap entering as `g* w*` receives
//! `w* G*`.

use num_complex::Complex;

use super::{CnnParams, ConvMode, LabeledSignal};
use crate::error::{Error, Result};
use crate::filters::{apply_filter_sequence, SlmfWeights, WlmfWeights};
use crate::scalar::Real;

/// Per-channel valid convolution, `N − L + 1` samples each.
pub fn conv_forward<T: Real>(x: &[Complex<T>], params: &CnnParams<T>) -> Result<Vec<Vec<Complex<T>>>> {
    let l = params.filter_len();
    if x.len() < l {
        return Err(Error::DimensionMismatch {
            expected: l,
            found: x.len(),
        });
    }
    (0..params.channels())
        .map(|c| match params.mode {
            ConvMode::Strict => apply_filter_sequence(
                x,
                &SlmfWeights {
                    f: params.g1[c].clone(),
                    alpha: T::one(),
                },
            ),
            ConvMode::Widely => apply_filter_sequence(
                x,
                &WlmfWeights {
                    f1: params.g1[c].clone(),
                    f2: params.g2[c].clone(),
                    beta: T::one(),
                },
            ),
        })
        .collect()
}

/// `ReLU(Re z + b_r) + j ReLU(Im z + b_i)` elementwise.
pub fn split_relu<T: Real>(y: &[Complex<T>], b_r: T, b_i: T) -> Vec<Complex<T>> {
    y.iter()
        .map(|z| Complex::new((z.re + b_r).max(T::zero()), (z.im + b_i).max(T::zero())))
        .collect()
}

/// Element of largest modulus and its index; the first one wins ties.
pub fn max_modulus_pool<T: Real>(y: &[Complex<T>]) -> Result<(Complex<T>, usize)> {
    let mut best = *y.first().ok_or(Error::EmptyInput)?;
    let mut idx = 0;
    let mut best_mod = best.norm_sqr();
    for (i, z) in y.iter().enumerate().skip(1) {
        let m = z.norm_sqr();
        if m > best_mod {
            best = *z;
            best_mod = m;
            idx = i;
        }
    }
    Ok((best, idx))
}

fn features<T: Real>(pooled: &[Complex<T>]) -> Vec<T> {
    pooled.iter().map(|z| z.re).chain(pooled.iter().map(|z| z.im)).collect()
}

fn softmax<T: Real>(logits: [T; 2]) -> [T; 2] {
    let m = logits[0].max(logits[1]);
    let e = [(logits[0] - m).exp(), (logits[1] - m).exp()];
    let s = e[0] + e[1];
    [e[0] / s, e[1] / s]
}

/// Class probabilities from the pooled channel values.
pub fn head_forward<T: Real>(pooled: &[Complex<T>], params: &CnnParams<T>) -> Result<[T; 2]> {
    Ok(softmax(logits(&features(pooled), params)?))
}

fn logits<T: Real>(f: &[T], params: &CnnParams<T>) -> Result<[T; 2]> {
    if f.len() != params.w_fc[0].len() {
        return Err(Error::DimensionMismatch {
            expected: params.w_fc[0].len(),
            found: f.len(),
        });
    }
    let mut out = params.b_fc;
    for (o, row) in out.iter_mut().zip(&params.w_fc) {
        *o += row.iter().zip(f).map(|(&w, &v)| w * v).sum::<T>();
    }
    Ok(out)
}

/// Intermediate values of one forward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardPass<T: Real> {
    pub conv: Vec<Vec<Complex<T>>>,
    pub activated: Vec<Vec<Complex<T>>>,
    pub pooled: Vec<(Complex<T>, usize)>,
    pub logits: [T; 2],
    pub probabilities: [T; 2],
}

pub fn forward<T: Real>(x: &[Complex<T>], params: &CnnParams<T>) -> Result<ForwardPass<T>> {
    let conv = conv_forward(x, params)?;
    let activated: Vec<_> = conv
        .iter()
        .enumerate()
        .map(|(c, y)| split_relu(y, params.b_r[c], params.b_i[c]))
        .collect();
    let pooled = activated
        .iter()
        .map(|a| max_modulus_pool(a))
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<_> = pooled.iter().map(|p| p.0).collect();
    let logits = logits(&features(&values), params)?;
    Ok(ForwardPass {
        conv,
        activated,
        pooled,
        logits,
        probabilities: softmax(logits),
    })
}

/// `−Σ tₖ log pₖ`, computed from the logits.
pub fn cross_entropy<T: Real>(pass: &ForwardPass<T>, t: &[T; 2]) -> T {
    let m = pass.logits[0].max(pass.logits[1]);
    let lse = m + ((pass.logits[0] - m).exp() + (pass.logits[1] - m).exp()).ln();
    t.iter().zip(&pass.logits).map(|(&tk, &z)| tk * (lse - z)).sum()
}

/// Distance to the nearest non-differentiable point: ReLU hinges of every
/// convolution sample and the modulus gap between the pooled element and the
/// runner-up in each channel.
pub fn kink_margin<T: Real>(pass: &ForwardPass<T>, params: &CnnParams<T>) -> T {
    let mut margin = T::infinity();
    for (c, y) in pass.conv.iter().enumerate() {
        for z in y {
            margin = margin.min((z.re + params.b_r[c]).abs()).min((z.im + params.b_i[c]).abs());
        }
        let (best, idx) = pass.pooled[c];
        let top = best.norm();
        if top > T::zero() {
            for (i, a) in pass.activated[c].iter().enumerate() {
                if i != idx {
                    margin = margin.min(top - a.norm());
                }
            }
        }
    }
    margin
}

/// Gradient of the cross-entropy loss, in the shape of the parameters.
pub fn backward<T: Real>(sample: &LabeledSignal<T>, params: &CnnParams<T>) -> Result<(CnnParams<T>, ForwardPass<T>)> {
    let pass = forward(&sample.x, params)?;
    let grad = backward_from(&sample.x, &sample.t, params, &pass);
    Ok((grad, pass))
}

fn backward_from<T: Real>(x: &[Complex<T>], t: &[T; 2], params: &CnnParams<T>, pass: &ForwardPass<T>) -> CnnParams<T> {
    let ch = params.channels();
    let l = params.filter_len();
    let mut grad = CnnParams::zeros(params.mode, ch, l);
    let values: Vec<_> = pass.pooled.iter().map(|p| p.0).collect();
    let feats = features(&values);
    let dz = [pass.probabilities[0] - t[0], pass.probabilities[1] - t[1]];
    for k in 0..2 {
        grad.b_fc[k] = dz[k];
        for (g, &f) in grad.w_fc[k].iter_mut().zip(&feats) {
            *g = dz[k] * f;
        }
    }
    for c in 0..ch {
        let d_re = dz[0] * params.w_fc[0][c] + dz[1] * params.w_fc[1][c];
        let d_im = dz[0] * params.w_fc[0][ch + c] + dz[1] * params.w_fc[1][ch + c];
        let idx = pass.pooled[c].1;
        let y = pass.conv[c][idx];
        let g_re = if y.re + params.b_r[c] > T::zero() { d_re } else { T::zero() };
        let g_im = if y.im + params.b_i[c] > T::zero() { d_im } else { T::zero() };
        grad.b_r[c] = g_re;
        grad.b_i[c] = g_im;
        let upstream_c = Complex::new(g_re, -g_im);
        // Output sample idx sees the newest-first window ending at idx + L − 1.
        let end = idx + l - 1;
        for k in 0..l {
            let w = x[end - k];
            grad.g1[c][k] = w * upstream_c;
            if params.mode == ConvMode::Widely {
                grad.g2[c][k] = w.conj() * upstream_c;
            }
        }
    }
    grad
}
