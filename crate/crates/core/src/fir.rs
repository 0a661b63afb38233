//! Per-row least-squares FIR filters that synthesize the missing readout
//! lobe in the intermediate (phase-encode transformed) space.
//!
//! Rows are indexed internally by the reversed readout index `p = -n`, so
//! acquired samples are `p <= m` and the filter runs towards larger `p`:
//! `ψ(p) = -Σ_{i=1..Q} a_i·ψ(i - p)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kspace::{
    dft_cols_centered, dft_rows_centered, AcquisitionMask, ComplexGrid, Direction, RealImage,
};
use crate::nlm::{nlm_denoise, NlmParams};
use crate::recon::{homodyne_recon, ReconResult};

/// One row `ψ(y, n)`, `n = -center_n ..= nx-1-center_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntermediateRow {
    values: Vec<Complex64>,
    center: usize,
}

impl IntermediateRow {
    pub fn new(values: Vec<Complex64>, center: usize) -> Result<Self> {
        if center >= values.len() {
            return Err(Error::param(format!(
                "row center {center} outside length {}",
                values.len()
            )));
        }
        Ok(Self { values, center })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn center(&self) -> usize {
        self.center
    }

    /// Sample at readout index `n`.
    pub fn at(&self, n: isize) -> Complex64 {
        self.values[(n + self.center as isize) as usize]
    }

    /// Largest `|p|` with both `ψ(p)` and `ψ(-p)` on the row, plus one.
    pub fn half_len(&self) -> usize {
        self.center.min(self.values.len() - 1 - self.center) + 1
    }

    fn p(&self, p: isize) -> Complex64 {
        self.at(-p)
    }

    fn set_p(&mut self, p: isize, v: Complex64) {
        self.values[(self.center as isize - p) as usize] = v;
    }
}

/// Stacked least-squares system `Ψ + Λ·a ≈ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LsSystem {
    pub rhs: Vec<Complex64>,
    /// Row-major, `rhs.len()` rows by `order` columns.
    pub matrix: Vec<Vec<Complex64>>,
}

impl LsSystem {
    pub fn order(&self) -> usize {
        self.matrix.first().map_or(0, Vec::len)
    }

    pub fn residual(&self, a: &[Complex64]) -> f64 {
        self.rhs
            .iter()
            .zip(&self.matrix)
            .map(|(psi, row)| {
                let s: Complex64 = row.iter().zip(a).map(|(l, x)| l * x).sum();
                (psi + s).norm_sqr()
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Upper block: `Ψ = ψ(p)` for `p = Q..H-1` against reflected lags
/// `ψ(i-p)` (Toeplitz). Lower block: `Ψ = ψ*(r)` for `r = 0..H-Q-1`
/// against `ψ*(-(r+i))` (Hankel), the same recursion read through
/// conjugate symmetry.
pub fn build_ls_system(row: &IntermediateRow, order: usize) -> Result<LsSystem> {
    let h = row.half_len();
    if order == 0 || order >= h {
        return Err(Error::param(format!(
            "FIR order {order} must lie in 1..{h} for a row of length {}",
            row.len()
        )));
    }
    let (q, h) = (order as isize, h as isize);
    let mut rhs = Vec::with_capacity(2 * (h - q) as usize);
    let mut matrix = Vec::with_capacity(rhs.capacity());
    for p in q..h {
        rhs.push(row.p(p));
        matrix.push((1..=q).map(|i| row.p(i - p)).collect());
    }
    for r in 0..h - q {
        rhs.push(row.p(r).conj());
        matrix.push((1..=q).map(|i| row.p(-(r + i)).conj()).collect());
    }
    Ok(LsSystem { rhs, matrix })
}

/// Minimum-norm least-squares `a` minimizing `‖Ψ + Λa‖`, via SVD.
pub fn solve_fir(system: &LsSystem) -> Result<(Vec<Complex64>, f64)> {
    let (rows, cols) = (system.rhs.len(), system.order());
    if rows == 0 || cols == 0 || rows < cols {
        return Err(Error::param(format!(
            "FIR system of {rows} equations in {cols} unknowns"
        )));
    }
    let lambda = DMatrix::from_fn(rows, cols, |r, c| system.matrix[r][c]);
    let psi = DVector::from_iterator(rows, system.rhs.iter().map(|z| -z));
    let svd = lambda.svd(true, true);
    let smax = svd.singular_values.max();
    if !(smax > 0.0) {
        return Ok((
            vec![Complex64::new(0.0, 0.0); cols],
            system.residual(&vec![Complex64::new(0.0, 0.0); cols]),
        ));
    }
    let eps = smax * f64::EPSILON * rows.max(cols) as f64;
    let a = svd
        .solve(&psi, eps)
        .map_err(|e| Error::Numerical(format!("FIR solve failed: {e}")))?;
    let a: Vec<Complex64> = a.iter().copied().collect();
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical("non-finite FIR coefficients".into()));
    }
    let res = system.residual(&a);
    Ok((a, res))
}

/// Synthesize `n = -(m+1), -(m+2), ...` by running the recursion towards
/// larger `p`. Acquired samples `n >= -m` are untouched.
pub fn apply_fir_fill(
    row_partial: &IntermediateRow,
    coeffs: &[Complex64],
    m: usize,
) -> Result<IntermediateRow> {
    let cn = row_partial.center();
    if m >= cn {
        return Ok(row_partial.clone());
    }
    if coeffs.is_empty() || coeffs.len() > 2 * m + 1 {
        return Err(Error::param(format!(
            "{} FIR taps need at least one and at most 2m+1 = {}",
            coeffs.len(),
            2 * m + 1
        )));
    }
    let mut out = row_partial.clone();
    // an unpaired Nyquist sample has no mirror to filter and stays as given
    let last = row_partial.half_len() as isize - 1;
    for p in m as isize + 1..=last {
        let v: Complex64 = coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * out.p(i as isize + 1 - p))
            .sum();
        out.set_p(p, -v);
    }
    Ok(out)
}

/// Per-row filters from model rows.
#[derive(Debug, Clone, PartialEq)]
pub struct FirBank {
    pub order: usize,
    pub coeffs: Vec<Vec<Complex64>>,
    pub residuals: Vec<f64>,
}

impl FirBank {
    pub fn n_rows(&self) -> usize {
        self.coeffs.len()
    }

    pub fn estimate(model_rows: &[IntermediateRow], order: usize) -> Result<Self> {
        let fitted: Vec<(Vec<Complex64>, f64)> = model_rows
            .par_iter()
            .map(|row| solve_fir(&build_ls_system(row, order)?))
            .collect::<Result<_>>()?;
        let (coeffs, residuals) = fitted.into_iter().unzip();
        Ok(Self {
            order,
            coeffs,
            residuals,
        })
    }
}

/// Default FIR order for `m` fractional readout samples.
pub fn default_order(m: usize) -> usize {
    m / 3
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FirParams {
    /// `None` uses [`default_order`].
    pub order: Option<usize>,
    pub nlm: NlmParams,
}

fn rows_of(grid: &ComplexGrid) -> Vec<IntermediateRow> {
    (0..grid.ny())
        .map(|r| IntermediateRow {
            values: grid.row(r).to_vec(),
            center: grid.center_n(),
        })
        .collect()
}

/// Model rows: readout-axis transform of each row of the model image.
pub fn model_rows(image: &RealImage) -> Vec<IntermediateRow> {
    rows_of(&dft_rows_centered(
        &ComplexGrid::from_real(image),
        Direction::Forward,
    ))
}

/// Filter-bank reconstruction of readout-truncated data.
///
/// The homodyne image seeds a denoised model whose row transforms train one
/// filter per image row. The partial data are taken to the intermediate
/// space by the phase-encode inverse transform, the missing readout lobe is
/// synthesized row by row, and the filled samples at acquired phase-encode
/// lines complete the readout axis before a final homodyne pass over the
/// remaining phase-encode asymmetry.
pub fn fir_recon(
    partial: &ComplexGrid,
    mask: &AcquisitionMask,
    params: &FirParams,
) -> Result<ReconResult> {
    mask.check_grid(partial)?;
    if mask.readout_complete() {
        return homodyne_recon(partial, mask);
    }
    let order = params.order.unwrap_or_else(|| default_order(mask.m()));
    if order == 0 || order > 2 * mask.m() + 1 {
        return Err(Error::param(format!(
            "FIR order {order} must lie in 1..={} for m = {}",
            2 * mask.m() + 1,
            mask.m()
        )));
    }
    let seed = homodyne_recon(partial, mask)?.image;
    let nlm = params.nlm;
    let denoised = nlm_denoise(&seed, nlm.t, nlm.f, nlm.strength_for(&seed))?;
    let bank = FirBank::estimate(&model_rows(&denoised), order)?;

    let inter = dft_cols_centered(partial, Direction::Inverse);
    let filled_rows: Vec<Vec<Complex64>> = rows_of(&inter)
        .par_iter()
        .zip(&bank.coeffs)
        .map(|(row, a)| Ok(apply_fir_fill(row, a, mask.m())?.into_values()))
        .collect::<Result<_>>()?;
    let filled_inter = inter.with_data(filled_rows.concat())?;
    let synth = dft_cols_centered(&filled_inter, Direction::Forward);

    let mut k = partial.clone();
    for r in 0..k.ny() {
        if !mask.row_acquired(r) {
            continue;
        }
        for c in 0..k.nx() {
            if !mask.col_acquired(c) {
                *k.at_mut(r, c) = synth.at(r, c);
            }
        }
    }
    homodyne_recon(&k, &mask.with_m(k.center_n())?)
}
