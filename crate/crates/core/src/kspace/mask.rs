use num_complex::Complex64;

use super::grid::ComplexGrid;
use crate::error::{Error, Result};

/// Acquired/missing map of a 2-D partial k-space.
///
/// A sample at physical `(k, n)` is acquired iff `k >= -q` and `n >= -m`:
/// `q` fractional lines are kept on the negative phase-encode side and `m`
/// fractional samples of the dephasing lobe before the echo center.
/// `q == center_k` (or `m == center_n`) means that axis is fully covered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AcquisitionMask {
    ny: usize,
    nx: usize,
    center_k: usize,
    center_n: usize,
    q: usize,
    m: usize,
}

impl AcquisitionMask {
    pub fn new(grid: &ComplexGrid, q: usize, m: usize) -> Result<Self> {
        if q > grid.center_k() {
            return Err(Error::param(format!(
                "q = {q} exceeds the {} negative phase-encode lines",
                grid.center_k()
            )));
        }
        if m > grid.center_n() {
            return Err(Error::param(format!(
                "m = {m} exceeds the {} dephasing-lobe samples",
                grid.center_n()
            )));
        }
        Ok(Self {
            ny: grid.ny(),
            nx: grid.nx(),
            center_k: grid.center_k(),
            center_n: grid.center_n(),
            q,
            m,
        })
    }

    /// Full-coverage sentinel (`q = center_k`, `m = center_n`).
    pub fn complete(grid: &ComplexGrid) -> Self {
        Self::new(grid, grid.center_k(), grid.center_n()).expect("sentinel is in range")
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn phase_encode_complete(&self) -> bool {
        self.q == self.center_k
    }

    pub fn readout_complete(&self) -> bool {
        self.m == self.center_n
    }

    pub fn is_complete(&self) -> bool {
        self.phase_encode_complete() && self.readout_complete()
    }

    /// Same mask with a different `q`.
    pub fn with_q(&self, q: usize) -> Result<Self> {
        if q > self.center_k {
            return Err(Error::param(format!("q = {q} exceeds {}", self.center_k)));
        }
        Ok(Self { q, ..*self })
    }

    /// Same mask with a different `m`.
    pub fn with_m(&self, m: usize) -> Result<Self> {
        if m > self.center_n {
            return Err(Error::param(format!("m = {m} exceeds {}", self.center_n)));
        }
        Ok(Self { m, ..*self })
    }

    pub fn acquired(&self, k: isize, n: isize) -> bool {
        k >= -(self.q as isize) && n >= -(self.m as isize)
    }

    pub fn acquired_at(&self, row: usize, col: usize) -> bool {
        row + self.q >= self.center_k && col + self.m >= self.center_n
    }

    pub fn row_acquired(&self, row: usize) -> bool {
        row + self.q >= self.center_k
    }

    pub fn col_acquired(&self, col: usize) -> bool {
        col + self.m >= self.center_n
    }

    pub fn acquired_count(&self) -> usize {
        let rows = self.ny - (self.center_k - self.q);
        let cols = self.nx - (self.center_n - self.m);
        rows * cols
    }

    pub fn check_grid(&self, grid: &ComplexGrid) -> Result<()> {
        if grid.ny() == self.ny
            && grid.nx() == self.nx
            && grid.center_k() == self.center_k
            && grid.center_n() == self.center_n
        {
            Ok(())
        } else {
            Err(Error::shape(
                format!(
                    "{}x{} mask centered at ({}, {})",
                    self.ny, self.nx, self.center_k, self.center_n
                ),
                grid.describe(),
            ))
        }
    }
}

/// Zero every sample the mask marks missing.
pub fn apply_mask(grid: &ComplexGrid, mask: &AcquisitionMask) -> Result<ComplexGrid> {
    mask.check_grid(grid)?;
    let mut out = grid.clone();
    for r in 0..grid.ny() {
        for c in 0..grid.nx() {
            if !mask.acquired_at(r, c) {
                *out.at_mut(r, c) = Complex64::new(0.0, 0.0);
            }
        }
    }
    Ok(out)
}

/// Fill missing samples from the conjugate of their acquired mirror
/// `(-k, -n)`. Samples whose mirror is also missing stay zero.
pub fn conjugate_reflect(grid: &ComplexGrid, mask: &AcquisitionMask) -> Result<ComplexGrid> {
    mask.check_grid(grid)?;
    let mut out = apply_mask(grid, mask)?;
    for r in 0..grid.ny() {
        let mr = grid.mirror_row(r);
        for c in 0..grid.nx() {
            if mask.acquired_at(r, c) {
                continue;
            }
            let mc = grid.mirror_col(c);
            if mask.acquired_at(mr, mc) {
                *out.at_mut(r, c) = grid.at(mr, mc).conj();
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kspace::{to_kspace, RealImage};

    fn ones(n: usize) -> ComplexGrid {
        ComplexGrid::from_vec(n, n, vec![Complex64::new(1.0, 0.0); n * n]).unwrap()
    }

    #[test]
    fn complete_mask_is_identity() {
        let g = ones(8);
        let mask = AcquisitionMask::complete(&g);
        assert!(mask.is_complete());
        assert_eq!(apply_mask(&g, &mask).unwrap(), g);
    }

    #[test]
    fn q0_m0_keeps_nonnegative_quadrant() {
        let g = ones(9);
        let mask = AcquisitionMask::new(&g, 0, 0).unwrap();
        let out = apply_mask(&g, &mask).unwrap();
        let kept: usize = out.data().iter().filter(|v| v.re == 1.0).count();
        assert_eq!(kept, 25);
        assert_eq!(mask.acquired_count(), 25);
        for r in 0..9 {
            for c in 0..9 {
                let want = r >= 4 && c >= 4;
                assert_eq!(out.at(r, c).re == 1.0, want);
            }
        }
    }

    #[test]
    fn region_count_255() {
        let g = ComplexGrid::zeros(255, 255);
        assert_eq!(
            AcquisitionMask::new(&g, 10, 45).unwrap().acquired_count(),
            138 * 173
        );
    }

    #[test]
    fn masking_is_idempotent() {
        let g = ones(9);
        let mask = AcquisitionMask::new(&g, 2, 1).unwrap();
        let once = apply_mask(&g, &mask).unwrap();
        assert_eq!(apply_mask(&once, &mask).unwrap(), once);
    }

    #[test]
    fn rejects_out_of_range_counts() {
        let g = ones(8);
        assert!(AcquisitionMask::new(&g, 5, 0).is_err());
        assert!(AcquisitionMask::new(&g, 0, 5).is_err());
        let other = ones(9);
        let mask = AcquisitionMask::new(&g, 1, 1).unwrap();
        assert!(apply_mask(&other, &mask).is_err());
    }

    #[test]
    fn reflect_real_sample() {
        let mut g = ComplexGrid::zeros(9, 9);
        g.set(2, 1, Complex64::new(3.0, 0.0)).unwrap();
        let mask = AcquisitionMask::new(&g, 0, 0).unwrap();
        let out = conjugate_reflect(&g, &mask).unwrap();
        assert_eq!(out.get(-2, -1).unwrap(), Complex64::new(3.0, -0.0));
    }

    #[test]
    fn reflect_complete_is_noop() {
        let g = ones(8);
        let out = conjugate_reflect(&g, &AcquisitionMask::complete(&g)).unwrap();
        assert_eq!(out, g);
    }

    #[test]
    fn reflect_recovers_real_image_half() {
        let img = RealImage::from_fn(11, 11, |r, c| ((r * 7 + c * 3) % 5) as f64);
        let full = to_kspace(&ComplexGrid::from_real(&img));
        let mask = AcquisitionMask::new(&full, 0, full.center_n()).unwrap();
        let rebuilt = conjugate_reflect(&full, &mask).unwrap();
        assert!(rebuilt.max_abs_diff(&full) < 1e-10);
    }
}
