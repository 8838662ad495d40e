//! Sampling, denoising and posterior inference for locally anisotropic
//! Gaussian random fields, with exact linear denoisers standing in for
//! trained networks so every stage can be validated against closed forms.

pub mod error;
pub mod grf;
pub mod rng;

pub use error::{Error, Result};
