//! Unitary, centered discrete Fourier transforms.
//!
//! The zero-frequency sample sits at the grid's `center_k` / `center_n`
//! index in both domains. Forward transforms use `exp(-j...)`, inverse
//! transforms `exp(+j...)`, and both scale by `1/sqrt(len)` so norms are
//! preserved.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::grid::ComplexGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    pub fn from_inverse_flag(inverse: bool) -> Self {
        if inverse {
            Direction::Inverse
        } else {
            Direction::Forward
        }
    }
}

fn plan(len: usize, dir: Direction) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    match dir {
        Direction::Forward => planner.plan_fft_forward(len),
        Direction::Inverse => planner.plan_fft_inverse(len),
    }
}

fn centered_in_place(fft: &dyn Fft<f64>, buf: &mut [Complex64], center: usize, scale: f64) {
    buf.rotate_left(center);
    fft.process(buf);
    buf.rotate_right(center);
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Centered unitary transform of a single sequence whose zero index is `center`.
pub fn dft1_centered(values: &[Complex64], center: usize, dir: Direction) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    if buf.is_empty() {
        return buf;
    }
    let fft = plan(buf.len(), dir);
    let scale = 1.0 / (buf.len() as f64).sqrt();
    centered_in_place(fft.as_ref(), &mut buf, center, scale);
    buf
}

fn transform_rows(grid: &mut ComplexGrid, dir: Direction) {
    let nx = grid.nx();
    let center = grid.center_n();
    let fft = plan(nx, dir);
    let scale = 1.0 / (nx as f64).sqrt();
    grid.data_mut()
        .par_chunks_mut(nx)
        .for_each(|row| centered_in_place(fft.as_ref(), row, center, scale));
}

fn transform_cols(grid: &mut ComplexGrid, dir: Direction) {
    let (ny, nx) = (grid.ny(), grid.nx());
    let center = grid.center_k();
    let fft = plan(ny, dir);
    let scale = 1.0 / (ny as f64).sqrt();
    let mut cols: Vec<Vec<Complex64>> = (0..nx).map(|c| grid.column(c)).collect();
    cols.par_iter_mut()
        .for_each(|col| centered_in_place(fft.as_ref(), col, center, scale));
    for (c, col) in cols.iter().enumerate() {
        grid.set_column(c, col);
    }
}

/// 2-D centered unitary DFT.
pub fn dft2_centered(grid: &ComplexGrid, dir: Direction) -> ComplexGrid {
    let mut out = grid.clone();
    transform_rows(&mut out, dir);
    transform_cols(&mut out, dir);
    out
}

/// 1-D centered unitary DFT of every row (along the readout / `x` axis).
pub fn dft_rows_centered(grid: &ComplexGrid, dir: Direction) -> ComplexGrid {
    let mut out = grid.clone();
    transform_rows(&mut out, dir);
    out
}

/// 1-D centered unitary DFT of every column (along the phase-encode / `y` axis).
pub fn dft_cols_centered(grid: &ComplexGrid, dir: Direction) -> ComplexGrid {
    let mut out = grid.clone();
    transform_cols(&mut out, dir);
    out
}

/// Image to k-space.
pub fn to_kspace(image: &ComplexGrid) -> ComplexGrid {
    dft2_centered(image, Direction::Forward)
}

/// K-space to image.
pub fn to_image(kspace: &ComplexGrid) -> ComplexGrid {
    dft2_centered(kspace, Direction::Inverse)
}
