use super::homodyne::homodyne_recon;
use super::ReconResult;
use crate::error::Result;
use crate::kspace::{
    apply_mask, frequency_weight, inverse_frequency_weight, AcquisitionMask, ComplexGrid,
    GeometryParams,
};
use crate::lp::{extrapolate, LpMode};
use crate::subspace::{compensate, compensation_order};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpVariant {
    Iterated,
    Fixed,
    /// Iterated prediction followed by subspace compensation.
    Projected,
}

/// Linear-prediction reconstruction: extrapolate `steps` phase-encode lines
/// in the frequency-weighted domain, undo the weighting, then run homodyne
/// with the widened symmetric band `q + steps`.
pub fn lp_recon(
    partial: &ComplexGrid,
    mask: &AcquisitionMask,
    steps: usize,
    geom: &GeometryParams,
    variant: LpVariant,
) -> Result<ReconResult> {
    let acquired = apply_mask(partial, mask)?;
    let weighted = frequency_weight(&acquired, geom);
    let mode = match variant {
        LpVariant::Fixed => LpMode::Fixed,
        LpVariant::Iterated | LpVariant::Projected => LpMode::Iterated,
    };
    let mut ext = extrapolate(&weighted, mask, steps, mode)?;
    if variant == LpVariant::Projected {
        ext = compensate(&ext, mask, steps, compensation_order(mask.q(), steps))?;
    }
    let k = inverse_frequency_weight(&ext, geom, &acquired)?;
    homodyne_recon(&k, &mask.with_q(mask.q() + steps)?)
}
