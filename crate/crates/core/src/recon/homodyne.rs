use std::f64::consts::PI;

use num_complex::Complex64;

use super::ReconResult;
use crate::error::{Error, Result};
use crate::kspace::{apply_mask, to_image, to_kspace, AcquisitionMask, ComplexGrid, RealImage};

/// Merging-filter ramp along one axis: 0 below `-q`, linear `1 + i/q` over
/// the symmetric band, 2 above `q`. A complete axis uses 1 throughout.
pub fn merging_ramp(i: isize, q: usize, complete: bool) -> f64 {
    if complete {
        return 1.0;
    }
    let q = q as isize;
    if i > q {
        2.0
    } else if i < -q {
        0.0
    } else {
        1.0 + i as f64 / q as f64
    }
}

/// 2-D merging weight at `(k, n)`.
///
/// The separable product of the axis ramps over-weights samples whose
/// mirror is missing in only one axis, so the product is renormalized
/// against its mirror: `W(p) + W(-p) = 2` wherever either is acquired off
/// the band edges.
pub fn merging_weight(mask: &AcquisitionMask, k: isize, n: isize) -> f64 {
    let (pk, pn) = (mask.phase_encode_complete(), mask.readout_complete());
    let w = merging_ramp(k, mask.q(), pk) * merging_ramp(n, mask.m(), pn);
    let w_mirror = merging_ramp(-k, mask.q(), pk) * merging_ramp(-n, mask.m(), pn);
    let total = w + w_mirror;
    if total == 0.0 {
        0.0
    } else {
        2.0 * w / total
    }
}

fn check_symmetric_band(mask: &AcquisitionMask) -> Result<()> {
    if mask.q() == 0 && !mask.phase_encode_complete() {
        return Err(Error::param(
            "homodyne needs q >= 1 fractional phase-encode lines",
        ));
    }
    if mask.m() == 0 && !mask.readout_complete() {
        return Err(Error::param(
            "homodyne needs m >= 1 fractional readout samples",
        ));
    }
    Ok(())
}

fn raised_cosine(i: isize, half: usize) -> f64 {
    if i.unsigned_abs() > half {
        0.0
    } else {
        0.5 * (1.0 + (PI * i as f64 / (half + 1) as f64).cos())
    }
}

/// Phase of the low-resolution image from the symmetric band
/// `|k| <= q, |n| <= m`, apodized by a separable raised cosine.
pub fn low_resolution_phase(partial: &ComplexGrid, mask: &AcquisitionMask) -> Result<Vec<f64>> {
    mask.check_grid(partial)?;
    check_symmetric_band(mask)?;
    let mut windowed = partial.zeros_like();
    for r in 0..partial.ny() {
        let wk = raised_cosine(partial.k_of(r), mask.q());
        if wk == 0.0 || !mask.row_acquired(r) {
            continue;
        }
        for c in 0..partial.nx() {
            let wn = raised_cosine(partial.n_of(c), mask.m());
            if wn != 0.0 && mask.acquired_at(r, c) {
                *windowed.at_mut(r, c) = partial.at(r, c) * (wk * wn);
            }
        }
    }
    Ok(to_image(&windowed).data().iter().map(|z| z.arg()).collect())
}

/// Merging-filter weighted k-space.
pub fn merge_weighted(partial: &ComplexGrid, mask: &AcquisitionMask) -> Result<ComplexGrid> {
    let mut out = apply_mask(partial, mask)?;
    for r in 0..out.ny() {
        let k = out.k_of(r);
        for c in 0..out.nx() {
            let w = merging_weight(mask, k, out.n_of(c));
            *out.at_mut(r, c) *= w;
        }
    }
    Ok(out)
}

/// `max(Re(x·e^{-jφ}), 0)` per pixel.
pub(crate) fn phase_corrected_real(image: &ComplexGrid, phase: &[f64]) -> RealImage {
    let data = image
        .data()
        .iter()
        .zip(phase)
        .map(|(z, &p)| (z * Complex64::from_polar(1.0, -p)).re.max(0.0))
        .collect();
    RealImage::new(image.ny(), image.nx(), data).expect("image shape")
}

/// Re-attach the phase to a real image.
pub(crate) fn with_phase(image: &RealImage, phase: &[f64], like: &ComplexGrid) -> ComplexGrid {
    let data = image
        .data()
        .iter()
        .zip(phase)
        .map(|(&v, &p)| Complex64::from_polar(v, p))
        .collect();
    like.with_data(data).expect("image shape")
}

/// Homodyne reconstruction: merging-filter weighting, low-resolution phase
/// removal, real part with negatives clipped.
///
/// `kspace_filled` is the transform of the phase-restored output image.
pub fn homodyne_recon(partial: &ComplexGrid, mask: &AcquisitionMask) -> Result<ReconResult> {
    let phase = low_resolution_phase(partial, mask)?;
    let merged = to_image(&merge_weighted(partial, mask)?);
    let image = phase_corrected_real(&merged, &phase);
    let kspace_filled = to_kspace(&with_phase(&image, &phase, partial));
    Ok(ReconResult {
        image,
        kspace_filled,
        iterations: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_plus_mirror_is_two() {
        for q in 1..6 {
            for i in -10..=10 {
                let s = merging_ramp(i, q, false) + merging_ramp(-i, q, false);
                assert!((s - 2.0).abs() < 1e-15, "q={q} i={i}");
            }
        }
        assert_eq!(merging_ramp(-7, 3, true), 1.0);
    }

    #[test]
    fn weight_plus_mirror_is_two() {
        let g = ComplexGrid::zeros(16, 16);
        let mask = AcquisitionMask::new(&g, 3, 2).unwrap();
        for k in -7..=7isize {
            for n in -7..=7isize {
                let w = merging_weight(&mask, k, n) + merging_weight(&mask, -k, -n);
                // band-edge samples at k = -q or n = -m carry zero ramp weight
                let edge = k.abs() == 3 || n.abs() == 2;
                if (mask.acquired(k, n) || mask.acquired(-k, -n)) && !edge {
                    assert!((w - 2.0).abs() < 1e-15, "({k}, {n})");
                }
                if !mask.acquired(k, n) {
                    assert_eq!(merging_weight(&mask, k, n), 0.0);
                }
            }
        }
    }

    #[test]
    fn needs_symmetric_band() {
        let g = ComplexGrid::zeros(16, 16);
        assert!(homodyne_recon(&g, &AcquisitionMask::new(&g, 0, 3).unwrap()).is_err());
        assert!(homodyne_recon(&g, &AcquisitionMask::new(&g, 3, 0).unwrap()).is_err());
        assert!(homodyne_recon(&g, &AcquisitionMask::new(&g, 8, 0).unwrap()).is_err());
        assert!(homodyne_recon(&g, &AcquisitionMask::new(&g, 8, 8).unwrap()).is_ok());
    }
}
