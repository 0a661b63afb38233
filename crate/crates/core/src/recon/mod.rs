//! Partial-Fourier reconstructions.

mod baseline;
mod extrapolated;
mod homodyne;
mod method;

pub use baseline::{
    conjugate_synthesis_recon, pocs_recon, pocs_recon_traced, zero_fill_recon, PocsParams,
    PocsTrace,
};
pub use extrapolated::{lp_recon, LpVariant};
pub use homodyne::{
    homodyne_recon, low_resolution_phase, merge_weighted, merging_ramp, merging_weight,
};
pub use method::{reconstruct, Method, ReconOptions};

use crate::kspace::{ComplexGrid, RealImage};

/// Reconstructed image with the k-space it was formed from.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconResult {
    pub image: RealImage,
    pub kspace_filled: ComplexGrid,
    /// Iterations run; 0 for direct methods.
    pub iterations: usize,
}
