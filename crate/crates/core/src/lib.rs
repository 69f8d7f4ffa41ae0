//! Strictly linear and widely linear matched filtering for improper complex
//! noise, the AUT-based analysis of the widely linear SNR gain, and a small
//! complex-valued CNN whose convolution layers act as matched filters.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below are what the experiment harness uses.

pub mod cnn;
pub mod error;
pub mod filters;
pub mod impropriety;
pub mod linalg;
pub mod noise;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub use num_complex::Complex;

pub type C64 = Complex<f64>;
pub type C32 = Complex<f32>;
pub type Matrix64 = linalg::ComplexMatrix<f64>;
pub type Matrix32 = linalg::ComplexMatrix<f32>;
pub type CovariancePair64 = noise::CovariancePair<f64>;
pub type NoiseModel64 = noise::NoiseModel<f64>;
pub type AutDecomposition64 = impropriety::AutDecomposition<f64>;
pub type CnnParams64 = cnn::CnnParams<f64>;
