use super::homodyne::{homodyne_recon, low_resolution_phase, phase_corrected_real, with_phase};
use super::ReconResult;
use crate::error::{Error, Result};
use crate::kspace::{
    apply_mask, conjugate_reflect, to_image, to_kspace, AcquisitionMask, ComplexGrid, RealImage,
};

fn magnitude_recon(kspace_filled: ComplexGrid) -> ReconResult {
    ReconResult {
        image: to_image(&kspace_filled).magnitude(),
        kspace_filled,
        iterations: 0,
    }
}

/// Magnitude of the zero-filled inverse transform.
pub fn zero_fill_recon(partial: &ComplexGrid, mask: &AcquisitionMask) -> Result<ReconResult> {
    Ok(magnitude_recon(apply_mask(partial, mask)?))
}

/// Missing samples filled from conjugate mirrors, magnitude image.
pub fn conjugate_synthesis_recon(
    partial: &ComplexGrid,
    mask: &AcquisitionMask,
) -> Result<ReconResult> {
    Ok(magnitude_recon(conjugate_reflect(partial, mask)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PocsParams {
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for PocsParams {
    fn default() -> Self {
        Self {
            max_iters: 20,
            tol: 1e-4,
        }
    }
}

/// POCS output with the relative image change of every iteration.
#[derive(Debug, Clone)]
pub struct PocsTrace {
    pub result: ReconResult,
    pub changes: Vec<f64>,
}

fn replace_acquired(k: &mut ComplexGrid, partial: &ComplexGrid, mask: &AcquisitionMask) {
    for r in 0..k.ny() {
        if !mask.row_acquired(r) {
            continue;
        }
        for c in 0..k.nx() {
            if mask.acquired_at(r, c) {
                *k.at_mut(r, c) = partial.at(r, c);
            }
        }
    }
}

fn image_distance(a: &RealImage, b: &RealImage) -> f64 {
    a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// POCS starting from the homodyne image, alternating the phase constraint
/// `max(Re(x·e^{-jφ}), 0)·e^{jφ}` with replacement of acquired samples.
pub fn pocs_recon_traced(
    partial: &ComplexGrid,
    mask: &AcquisitionMask,
    params: PocsParams,
) -> Result<PocsTrace> {
    if !(params.tol > 0.0) {
        return Err(Error::param(format!(
            "POCS tolerance must be positive, got {}",
            params.tol
        )));
    }
    let start = homodyne_recon(partial, mask)?;
    if params.max_iters == 0 {
        return Ok(PocsTrace {
            result: start,
            changes: Vec::new(),
        });
    }
    let phase = low_resolution_phase(partial, mask)?;
    let mut image = start.image;
    let mut changes = Vec::new();
    let mut k = start.kspace_filled;
    replace_acquired(&mut k, partial, mask);
    for _ in 0..params.max_iters {
        let next = phase_corrected_real(&to_image(&k), &phase);
        let norm = image.data().iter().map(|v| v * v).sum::<f64>().sqrt();
        let change = image_distance(&next, &image) / norm.max(f64::MIN_POSITIVE);
        changes.push(change);
        image = next;
        k = to_kspace(&with_phase(&image, &phase, partial));
        replace_acquired(&mut k, partial, mask);
        if change < params.tol {
            break;
        }
    }
    let iterations = changes.len();
    Ok(PocsTrace {
        result: ReconResult {
            image: phase_corrected_real(&to_image(&k), &phase),
            kspace_filled: k,
            iterations,
        },
        changes,
    })
}

pub fn pocs_recon(
    partial: &ComplexGrid,
    mask: &AcquisitionMask,
    max_iters: usize,
    tol: f64,
) -> Result<ReconResult> {
    pocs_recon_traced(partial, mask, PocsParams { max_iters, tol }).map(|t| t.result)
}
