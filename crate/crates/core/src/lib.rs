//! Partial-Fourier MR k-space extrapolation.
//!
//! Synthesizes spin-echo k-space from a digital phantom, reconstructs
//! images from 2-D partial k-space with baseline methods (zero-fill,
//! conjugate synthesis, homodyne, POCS) and model-based extrapolation
//! (iterated linear prediction with subspace projection, per-row
//! least-squares FIR filters), and measures the results.

// `!(x > 0.0)` style checks deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fir;
pub mod kspace;
pub mod lp;
pub mod metrics;
pub mod nlm;
pub mod recon;
pub mod sim;
pub mod subspace;

pub use error::{Error, Result};
