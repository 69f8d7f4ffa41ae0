//! A minimal complex-valued CNN: one convolutional layer (strictly or widely
//! linear), split ReLU, max-modulus pooling per channel and a real SoftMax head.
//!
//! The convolution layer is the matched filter of [`crate::filters`] applied
//! along the signal, so a trained channel can be read as a detector template.

mod data;
mod layers;
mod train;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use data::{make_dataset, make_dataset_with, DatasetOptions, LabeledSignal, PATTERNS};
pub use layers::{
    backward, conv_forward, cross_entropy, forward, head_forward, kink_margin, max_modulus_pool, split_relu,
    ForwardPass,
};
pub use train::{evaluate, first_sustained, train, TraceRow, TrainOutcome};

/// Strictly linear (`gᴴ w`) or widely linear (`g₁ᴴ w + g₂ᴴ w*`) convolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConvMode {
    Strict,
    Widely,
}

impl ConvMode {
    pub fn label(self) -> &'static str {
        match self {
            ConvMode::Strict => "SL",
            ConvMode::Widely => "WL",
        }
    }
}

impl fmt::Display for ConvMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ConvMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sl" | "strict" => Ok(ConvMode::Strict),
            "wl" | "widely" => Ok(ConvMode::Widely),
            other => Err(Error::InvalidParameter(format!("unknown convolution mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CnnConfig {
    pub input_len: usize,
    pub channels: usize,
    pub filter_len: usize,
    pub mode: ConvMode,
    pub learning_rate: f64,
    pub epochs: usize,
    pub realizations_per_epoch: usize,
    /// Standard deviation of the random initial weights.
    pub init_scale: f64,
    /// Size of the held-out batch scored along training.
    pub eval_size: usize,
    /// Held-out evaluation every this many SGD steps.
    pub eval_every: usize,
    pub data: DatasetOptions,
}

impl Default for CnnConfig {
    fn default() -> Self {
        Self {
            input_len: 8,
            channels: 3,
            filter_len: 3,
            mode: ConvMode::Strict,
            learning_rate: 0.05,
            epochs: 10,
            realizations_per_epoch: 200,
            init_scale: 0.5,
            eval_size: 100,
            eval_every: 1,
            data: DatasetOptions::default(),
        }
    }
}

impl CnnConfig {
    pub fn with_mode(&self, mode: ConvMode) -> Self {
        Self { mode, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.channels == 0 || self.filter_len == 0 {
            return Err(Error::InvalidParameter("channels and filter_len must be at least 1".into()));
        }
        if self.filter_len > self.input_len {
            return Err(Error::InvalidParameter(format!(
                "filter_len {} exceeds input_len {}",
                self.filter_len, self.input_len
            )));
        }
        if self.input_len < PATTERNS[0].len() {
            return Err(Error::InvalidParameter(format!(
                "input_len {} cannot hold a length-{} pattern",
                self.input_len,
                PATTERNS[0].len()
            )));
        }
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("learning_rate {} is invalid", self.learning_rate)));
        }
        if !(self.init_scale >= 0.0 && self.init_scale.is_finite()) {
            return Err(Error::InvalidParameter(format!("init_scale {} is invalid", self.init_scale)));
        }
        if self.eval_size == 0 || self.eval_every == 0 {
            return Err(Error::InvalidParameter("eval_size and eval_every must be at least 1".into()));
        }
        self.data.validate()
    }

    pub fn iterations(&self) -> usize {
        self.epochs * self.realizations_per_epoch
    }
}

/// Network parameters. The same shape doubles as a gradient record.
#[derive(Debug, Clone, PartialEq)]
pub struct CnnParams<T: Real> {
    pub mode: ConvMode,
    /// `g` (strict mode) or `g₁` per channel.
    pub g1: Vec<Vec<Complex<T>>>,
    /// `g₂` per channel; empty in strict mode.
    pub g2: Vec<Vec<Complex<T>>>,
    pub b_r: Vec<T>,
    pub b_i: Vec<T>,
    /// `2 × 2·channels`, acting on `(Re p₀, …, Re p_{C−1}, Im p₀, …, Im p_{C−1})`.
    pub w_fc: [Vec<T>; 2],
    pub b_fc: [T; 2],
}

impl<T: Real> CnnParams<T> {
    pub fn zeros(mode: ConvMode, channels: usize, filter_len: usize) -> Self {
        let taps = vec![vec![Complex::new(T::zero(), T::zero()); filter_len]; channels];
        Self {
            mode,
            g1: taps.clone(),
            g2: if mode == ConvMode::Widely { taps } else { Vec::new() },
            b_r: vec![T::zero(); channels],
            b_i: vec![T::zero(); channels],
            w_fc: [vec![T::zero(); 2 * channels], vec![T::zero(); 2 * channels]],
            b_fc: [T::zero(); 2],
        }
    }

    /// Gaussian weights with standard deviation `scale`, zero biases.
    ///
    /// Draws are made in the order g₁, head, g₂, so both modes share `g₁` and
    /// the head for the same generator state.
    pub fn random<R: Rng + ?Sized>(mode: ConvMode, channels: usize, filter_len: usize, scale: T, rng: &mut R) -> Self {
        let mut p = Self::zeros(mode, channels, filter_len);
        let mut normal = || -> T { T::lit(rng.sample::<f64, _>(StandardNormal)) * scale };
        let half = T::lit(std::f64::consts::FRAC_1_SQRT_2);
        for tap in p.g1.iter_mut().flatten() {
            *tap = Complex::new(normal() * half, normal() * half);
        }
        for row in p.w_fc.iter_mut() {
            for w in row.iter_mut() {
                *w = normal();
            }
        }
        for tap in p.g2.iter_mut().flatten() {
            *tap = Complex::new(normal() * half, normal() * half);
        }
        p
    }

    pub fn channels(&self) -> usize {
        self.g1.len()
    }

    pub fn filter_len(&self) -> usize {
        self.g1.first().map_or(0, Vec::len)
    }

    /// Complex convolution taps, counted as complex numbers.
    pub fn conv_param_count(&self) -> usize {
        self.g1.iter().chain(&self.g2).map(Vec::len).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let c = self.channels();
        let l = self.filter_len();
        if c == 0 || l == 0 {
            return Err(Error::InvalidShape { rows: c, cols: l });
        }
        let expected_g2 = if self.mode == ConvMode::Widely { c } else { 0 };
        if self.g2.len() != expected_g2 {
            return Err(Error::DimensionMismatch {
                expected: expected_g2,
                found: self.g2.len(),
            });
        }
        for g in self.g1.iter().chain(&self.g2) {
            if g.len() != l {
                return Err(Error::DimensionMismatch { expected: l, found: g.len() });
            }
        }
        for v in [&self.b_r, &self.b_i] {
            if v.len() != c {
                return Err(Error::DimensionMismatch { expected: c, found: v.len() });
            }
        }
        for row in &self.w_fc {
            if row.len() != 2 * c {
                return Err(Error::DimensionMismatch {
                    expected: 2 * c,
                    found: row.len(),
                });
            }
        }
        if !self.real_values().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("cnn parameters"));
        }
        Ok(())
    }

    /// Every real degree of freedom, complex taps split as (re, im).
    pub fn real_values(&self) -> impl Iterator<Item = T> + '_ {
        let taps = self.g1.iter().chain(&self.g2).flatten().flat_map(|z| [z.re, z.im]);
        taps.chain(self.b_r.iter().copied())
            .chain(self.b_i.iter().copied())
            .chain(self.w_fc.iter().flatten().copied())
            .chain(self.b_fc.iter().copied())
    }

    pub fn real_values_mut(&mut self) -> Vec<&mut T> {
        let mut out = Vec::new();
        for z in self.g1.iter_mut().chain(self.g2.iter_mut()).flatten() {
            let Complex { re, im } = z;
            out.push(re);
            out.push(im);
        }
        out.extend(self.b_r.iter_mut());
        out.extend(self.b_i.iter_mut());
        out.extend(self.w_fc.iter_mut().flatten());
        out.extend(self.b_fc.iter_mut());
        out
    }

    /// `self ← self − step · grad`.
    pub fn descend(&mut self, grad: &Self, step: T) {
        let g: Vec<T> = grad.real_values().collect();
        for (p, d) in self.real_values_mut().into_iter().zip(g) {
            *p -= step * d;
        }
    }

    /// Copy of a strict network as a widely linear one with `g₂ = 0`.
    pub fn widen(&self) -> Self {
        let mut out = self.clone();
        if self.mode == ConvMode::Strict {
            out.mode = ConvMode::Widely;
            out.g2 = vec![vec![Complex::new(T::zero(), T::zero()); self.filter_len()]; self.channels()];
        }
        out
    }
}
