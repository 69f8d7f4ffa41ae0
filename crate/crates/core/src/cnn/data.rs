//! Two-pattern identification data set.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::vec_norm;
use crate::noise::trial_rng;
use crate::scalar::Real;

/// Pattern 1 and Pattern 2 as `(re, im)` pairs, in time order.
pub const PATTERNS: [[(f64, f64); 3]; 2] = [
    [(-0.5, -1.0), (1.0, -1.0), (-0.5, -1.0)],
    [(1.0, 1.0), (1.0, 1.0), (1.0, 1.0)],
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DatasetOptions {
    /// Upper end of the uniform `[0, a]` law of the real and imaginary noise parts.
    pub uniform_amplitude: f64,
    /// Standard deviation `E|n|² = σ²` of the added circular Gaussian noise.
    pub gaussian_std: f64,
}

impl Default for DatasetOptions {
    fn default() -> Self {
        Self {
            uniform_amplitude: 0.3,
            gaussian_std: 0.05,
        }
    }
}

impl DatasetOptions {
    pub fn noiseless() -> Self {
        Self {
            uniform_amplitude: 0.0,
            gaussian_std: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.uniform_amplitude >= 0.0 && self.gaussian_std >= 0.0)
            || !self.uniform_amplitude.is_finite()
            || !self.gaussian_std.is_finite()
        {
            return Err(Error::InvalidParameter("noise amplitudes must be finite and nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSignal<T: Real> {
    /// Unit-energy input, oldest sample first.
    pub x: Vec<Complex<T>>,
    /// One-hot target.
    pub t: [T; 2],
    /// 0 for Pattern 1, 1 for Pattern 2.
    pub class: usize,
    /// Index of the first pattern sample.
    pub start: usize,
}

pub fn make_dataset<T: Real>(count: usize, seed: u64) -> Result<Vec<LabeledSignal<T>>> {
    make_dataset_with(count, 8, &DatasetOptions::default(), &mut trial_rng(seed, 0))
}

pub fn make_dataset_with<T: Real, R: Rng + ?Sized>(
    count: usize,
    input_len: usize,
    opts: &DatasetOptions,
    rng: &mut R,
) -> Result<Vec<LabeledSignal<T>>> {
    if count == 0 {
        return Err(Error::EmptyInput);
    }
    opts.validate()?;
    let plen = PATTERNS[0].len();
    if input_len < plen {
        return Err(Error::InsufficientSamples {
            needed: plen,
            got: input_len,
        });
    }
    let classes: Vec<usize> = (0..count).map(|_| rng.random_range(0..2)).collect();
    let gauss_sd = opts.gaussian_std * std::f64::consts::FRAC_1_SQRT_2;
    classes
        .into_iter()
        .map(|class| {
            let start = rng.random_range(0..=input_len - plen);
            let mut x: Vec<Complex<f64>> = (0..input_len)
                .map(|_| {
                    Complex::new(
                        rng.random::<f64>() * opts.uniform_amplitude,
                        rng.random::<f64>() * opts.uniform_amplitude,
                    )
                })
                .collect();
            for (k, &(re, im)) in PATTERNS[class].iter().enumerate() {
                x[start + k] += Complex::new(re, im);
            }
            for v in x.iter_mut() {
                let a: f64 = rng.sample(StandardNormal);
                let b: f64 = rng.sample(StandardNormal);
                *v += Complex::new(a * gauss_sd, b * gauss_sd);
            }
            let norm = vec_norm(&x);
            let mut t = [T::zero(); 2];
            t[class] = T::one();
            Ok(LabeledSignal {
                x: x.iter().map(|z| Complex::new(T::lit(z.re / norm), T::lit(z.im / norm))).collect(),
                t,
                class,
                start,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_energy_and_one_hot() {
        let data = make_dataset::<f64>(500, 3).unwrap();
        for s in &data {
            let e: f64 = s.x.iter().map(|z| z.norm_sqr()).sum();
            assert!((e - 1.0).abs() <= 1e-10);
            assert_eq!(s.t[s.class], 1.0);
            assert_eq!(s.t[1 - s.class], 0.0);
            assert!(s.start <= 5);
        }
    }

    #[test]
    fn noiseless_window_is_the_pattern() {
        let data = make_dataset_with::<f64, _>(50, 8, &DatasetOptions::noiseless(), &mut trial_rng(9, 0)).unwrap();
        for s in &data {
            let pat = PATTERNS[s.class];
            let scale: f64 = pat.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
            for (i, z) in s.x.iter().enumerate() {
                let k = i.wrapping_sub(s.start);
                let want = if k < 3 {
                    Complex::new(pat[k].0, pat[k].1) / scale
                } else {
                    Complex::new(0.0, 0.0)
                };
                assert!((z - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(make_dataset::<f64>(20, 5).unwrap(), make_dataset::<f64>(20, 5).unwrap());
        assert_ne!(make_dataset::<f64>(20, 5).unwrap(), make_dataset::<f64>(20, 6).unwrap());
    }

    #[test]
    fn rejects_empty() {
        assert_eq!(make_dataset::<f64>(0, 1), Err(Error::EmptyInput));
    }
}
