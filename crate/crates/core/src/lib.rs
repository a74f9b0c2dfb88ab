//! Accuracy and diversity metrics for sets of image captions.
//!
//! Accuracy is CIDEr agreement with human references. Diversity is read off
//! the spectrum of a pairwise caption kernel: with singular values
//! `σᵢ = √λᵢ` of an `m × m` kernel, `div = -log_m(σ₁ / Σσᵢ)`, which is 0 when
//! all captions are the same and 1 when they are mutually orthogonal. Two
//! kernels are provided: the bag-of-words dot product (LSA) and CIDEr
//! (Self-CIDEr). The mBLEU-mix baseline, F-measure, rank correlations and
//! plotting exports complete the toolkit.

pub mod analysis;
pub mod diversity;
pub mod error;
pub mod evaluation;
pub mod similarity;
pub mod text;

pub use error::{Error, Result};
