use std::f64::consts::PI;

use num_complex::Complex64;

use super::grid::ComplexGrid;
use crate::error::{Error, Result};

/// Field of view and sampling interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryParams {
    fov_x: f64,
    fov_y: f64,
    delta_t: f64,
}

impl GeometryParams {
    /// `fov_x`, `fov_y` are half-widths in cm, `delta_t` the sampling interval in ms.
    pub fn new(fov_x: f64, fov_y: f64, delta_t: f64) -> Result<Self> {
        for (name, v) in [("fov_x", fov_x), ("fov_y", fov_y), ("delta_t", delta_t)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            fov_x,
            fov_y,
            delta_t,
        })
    }

    pub fn fov_x(&self) -> f64 {
        self.fov_x
    }

    pub fn fov_y(&self) -> f64 {
        self.fov_y
    }

    pub fn delta_t(&self) -> f64 {
        self.delta_t
    }

    /// Phase-encode spatial-frequency step, 1/(2·fov_y) per cm.
    pub fn delta_v(&self) -> f64 {
        1.0 / (2.0 * self.fov_y)
    }
}

impl Default for GeometryParams {
    fn default() -> Self {
        Self {
            fov_x: 12.0,
            fov_y: 12.0,
            delta_t: 0.032,
        }
    }
}

fn weight(k: isize, geom: &GeometryParams) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * k as f64 * geom.delta_v())
}

/// Multiply each phase-encode line by `j·2π·k·Δv` (transform of the
/// `y`-derivative). The `k = 0` line becomes zero.
pub fn frequency_weight(grid: &ComplexGrid, geom: &GeometryParams) -> ComplexGrid {
    let mut out = grid.clone();
    for r in 0..grid.ny() {
        let w = weight(grid.k_of(r), geom);
        for v in out.row_mut(r) {
            *v *= w;
        }
    }
    out
}

/// Undo [`frequency_weight`]. The singular `k = 0` line is copied from
/// `preserve_dc_from`.
pub fn inverse_frequency_weight(
    grid: &ComplexGrid,
    geom: &GeometryParams,
    preserve_dc_from: &ComplexGrid,
) -> Result<ComplexGrid> {
    grid.check_shape(preserve_dc_from)?;
    let mut out = grid.clone();
    for r in 0..grid.ny() {
        let k = grid.k_of(r);
        if k == 0 {
            out.row_mut(r).copy_from_slice(preserve_dc_from.row(r));
            continue;
        }
        let w = weight(k, geom);
        for v in out.row_mut(r) {
            *v /= w;
        }
    }
    Ok(out)
}
