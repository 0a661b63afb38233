//! Projection of extrapolated lines onto the signal subspace spanned by
//! shifted windows of the positive phase-encode data.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kspace::{AcquisitionMask, ComplexGrid};

/// Relative threshold below which a Gram–Schmidt direction is dropped.
pub const RANK_EPS: f64 = 1e-12;
const REORTHO_EPS: f64 = 1e-8;

fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Positive-side samples `k = 1..=k_max` of column `col`, ascending in `k`.
fn positive_side(weighted: &ComplexGrid, col: usize) -> Vec<Complex64> {
    let ck = weighted.center_k();
    (ck + 1..weighted.ny())
        .map(|r| weighted.at(r, col))
        .collect()
}

/// Windowed prediction matrix of column `col`, returned column by column
/// for `i = L, L-1, ..., 0`. Column `i` is the length-`K-L` window of the
/// positive-side sequence starting at offset `L-i`.
pub fn build_prediction_matrix(
    weighted: &ComplexGrid,
    col: usize,
    order: usize,
) -> Result<Vec<Vec<Complex64>>> {
    if col >= weighted.nx() {
        return Err(Error::param(format!(
            "column {col} outside a grid of width {}",
            weighted.nx()
        )));
    }
    windows(&positive_side(weighted, col), order)
}

fn windows(seq: &[Complex64], order: usize) -> Result<Vec<Vec<Complex64>>> {
    let k = seq.len();
    if order + 1 > k {
        return Err(Error::param(format!(
            "order {order} needs more than {k} positive phase-encode lines"
        )));
    }
    let len = k - order;
    Ok((0..=order)
        .map(|off| seq[off..off + len].to_vec())
        .collect())
}

/// `S = V·B` with orthogonal (unnormalized) `V` and unit upper-triangular `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    pub basis_vectors: Vec<Vec<Complex64>>,
    /// Row-major; `coeff_matrix[i][j]` is the weight of `v_i` in column `j`.
    pub coeff_matrix: Vec<Vec<Complex64>>,
    pub norms: Vec<f64>,
    /// Directions dropped as numerically rank-deficient.
    pub deficient: Vec<bool>,
}

impl SubspaceBasis {
    pub fn len(&self) -> usize {
        self.basis_vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis_vectors.is_empty()
    }

    pub fn vector_len(&self) -> usize {
        self.basis_vectors.first().map_or(0, Vec::len)
    }

    pub fn rank(&self) -> usize {
        self.deficient.iter().filter(|d| !**d).count()
    }

    /// `V·B`, the reconstructed input columns.
    pub fn reconstruct(&self) -> Vec<Vec<Complex64>> {
        let len = self.vector_len();
        (0..self.len())
            .map(|j| {
                let mut col = vec![Complex64::new(0.0, 0.0); len];
                for i in 0..=j {
                    let b = self.coeff_matrix[i][j];
                    for (c, v) in col.iter_mut().zip(&self.basis_vectors[i]) {
                        *c += b * v;
                    }
                }
                col
            })
            .collect()
    }
}

/// Classical Gram–Schmidt without normalization, with one
/// re-orthogonalization sweep for columns that lose orthogonality.
pub fn gram_schmidt(columns: &[Vec<Complex64>]) -> Result<SubspaceBasis> {
    let Some(first) = columns.first() else {
        return Err(Error::param("Gram-Schmidt needs at least one column"));
    };
    let len = first.len();
    if columns.iter().any(|c| c.len() != len) {
        return Err(Error::param("Gram-Schmidt columns differ in length"));
    }
    let n = columns.len();
    let zero = Complex64::new(0.0, 0.0);
    let mut v: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut b = vec![vec![zero; n]; n];
    let mut theta: Vec<f64> = Vec::with_capacity(n);
    let mut max_theta: f64 = 0.0;

    for (j, s) in columns.iter().enumerate() {
        b[j][j] = Complex64::new(1.0, 0.0);
        let scale = max_theta.max(norm_sqr(s));
        let usable = |t: f64| t > RANK_EPS * scale;
        // classical: all coefficients from the original column
        let coeffs: Vec<Complex64> = (0..j)
            .map(|i| {
                if usable(theta[i]) {
                    inner(&v[i], s) / theta[i]
                } else {
                    zero
                }
            })
            .collect();
        let mut w = s.clone();
        for (i, c) in coeffs.iter().enumerate() {
            b[i][j] = *c;
            for (x, y) in w.iter_mut().zip(&v[i]) {
                *x -= c * y;
            }
        }
        let drift = (0..j)
            .filter(|&i| usable(theta[i]))
            .map(|i| inner(&v[i], &w).norm())
            .fold(0.0, f64::max);
        if drift > REORTHO_EPS * scale {
            let fix: Vec<Complex64> = (0..j)
                .map(|i| {
                    if usable(theta[i]) {
                        inner(&v[i], &w) / theta[i]
                    } else {
                        zero
                    }
                })
                .collect();
            for (i, c) in fix.iter().enumerate() {
                b[i][j] += c;
                for (x, y) in w.iter_mut().zip(&v[i]) {
                    *x -= c * y;
                }
            }
        }
        let t = norm_sqr(&w);
        max_theta = max_theta.max(t);
        theta.push(t);
        v.push(w);
    }
    let deficient = theta.iter().map(|&t| !(t > RANK_EPS * max_theta)).collect();
    Ok(SubspaceBasis {
        basis_vectors: v,
        coeff_matrix: b,
        norms: theta,
        deficient,
    })
}

/// Least-squares projection of `x` onto the span of the basis.
pub fn project(x: &[Complex64], basis: &SubspaceBasis) -> Result<Vec<Complex64>> {
    if x.len() != basis.vector_len() {
        return Err(Error::shape(
            format!("vector of length {}", basis.vector_len()),
            format!("length {}", x.len()),
        ));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); x.len()];
    for ((v, &t), &d) in basis
        .basis_vectors
        .iter()
        .zip(&basis.norms)
        .zip(&basis.deficient)
    {
        if d {
            continue;
        }
        let c = inner(v, x) / t;
        for (o, y) in out.iter_mut().zip(v) {
            *o += c * y;
        }
    }
    Ok(out)
}

/// Order used to compensate after `steps` predicted lines.
pub fn compensation_order(q: usize, steps: usize) -> usize {
    (q + steps) / 2
}

/// Replace the `steps` predicted lines of every column by their projection
/// onto that column's positive-side subspace. The projected vector is the
/// ascending-`k` window starting at `k = -(q+steps)` with the basis
/// vector length.
pub fn compensate(
    weighted_extrapolated: &ComplexGrid,
    mask: &AcquisitionMask,
    steps: usize,
    order: usize,
) -> Result<ComplexGrid> {
    mask.check_grid(weighted_extrapolated)?;
    if steps == 0 {
        return Ok(weighted_extrapolated.clone());
    }
    let g = weighted_extrapolated;
    let ck = g.center_k();
    let q = mask.q();
    if q + steps > ck {
        return Err(Error::param(format!(
            "{steps} predicted lines exceed the {} missing lines",
            ck - q
        )));
    }
    let start_row = ck - q - steps;
    let fixed: Vec<Option<Vec<Complex64>>> = (0..g.nx())
        .into_par_iter()
        .map(|c| {
            let cols = build_prediction_matrix(g, c, order)?;
            let len = cols[0].len();
            if start_row + len > g.ny() {
                return Err(Error::param("projection window overruns the grid"));
            }
            if norm_sqr(&cols.concat()) == 0.0 {
                return Ok(None);
            }
            let basis = gram_schmidt(&cols)?;
            let x: Vec<Complex64> = (start_row..start_row + len).map(|r| g.at(r, c)).collect();
            Ok(Some(project(&x, &basis)?))
        })
        .collect::<Result<_>>()?;
    let mut out = g.clone();
    for (c, proj) in fixed.iter().enumerate() {
        let Some(p) = proj else { continue };
        for (i, &v) in p.iter().take(steps).enumerate() {
            *out.at_mut(start_row + i, c) = v;
        }
    }
    Ok(out)
}

/// Squared error of a prediction by the law of cosines, for the raw and
/// compensated predictions.
pub fn compensation_errors(
    s_true: &[Complex64],
    s_pred: &[Complex64],
    s_comp: &[Complex64],
) -> Result<(f64, f64)> {
    if s_pred.len() != s_true.len() || s_comp.len() != s_true.len() {
        return Err(Error::param("compensation vectors differ in length"));
    }
    let err = |s: &[Complex64]| -> Result<f64> {
        let (a, b) = (norm_sqr(s_true).sqrt(), norm_sqr(s).sqrt());
        if a == 0.0 || b == 0.0 {
            return Err(Error::Degenerate(
                "zero-norm vector in compensation error".into(),
            ));
        }
        let cos = inner(s_true, s).re / (a * b);
        Ok(a * a + b * b - 2.0 * a * b * cos)
    };
    Ok((err(s_pred)?, err(s_comp)?))
}
