use num_complex::Complex64;

use crate::error::{Error, Result};

/// Index of the zero-frequency sample for an axis of length `len`.
///
/// Even lengths put the center at `len / 2`, odd lengths at `(len - 1) / 2`;
/// both are `len / 2` in integer arithmetic.
pub fn default_center(len: usize) -> usize {
    len / 2
}

/// A 2-D array of complex samples, rows indexed by phase-encode step `k` and
/// columns by readout sample `n`.
///
/// Storage is row-major. Physical indices are offsets from the center
/// sample: `k = row - center_k`, `n = col - center_n`. The same centered
/// indexing is used for image-domain grids (`y`, `x` offsets).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid {
    ny: usize,
    nx: usize,
    center_k: usize,
    center_n: usize,
    data: Vec<Complex64>,
}

impl ComplexGrid {
    pub fn new(
        ny: usize,
        nx: usize,
        center_k: usize,
        center_n: usize,
        data: Vec<Complex64>,
    ) -> Result<Self> {
        if ny == 0 || nx == 0 {
            return Err(Error::param("grid dimensions must be non-zero"));
        }
        if data.len() != ny * nx {
            return Err(Error::shape(format!("{} samples", ny * nx), data.len()));
        }
        if center_k >= ny || center_n >= nx {
            return Err(Error::param(format!(
                "center ({center_k}, {center_n}) outside {ny}x{nx} grid"
            )));
        }
        Ok(Self {
            ny,
            nx,
            center_k,
            center_n,
            data,
        })
    }

    /// All-zero grid with default (centered) origin.
    pub fn zeros(ny: usize, nx: usize) -> Self {
        assert!(ny > 0 && nx > 0, "grid dimensions must be non-zero");
        Self {
            ny,
            nx,
            center_k: default_center(ny),
            center_n: default_center(nx),
            data: vec![Complex64::new(0.0, 0.0); ny * nx],
        }
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            data: vec![Complex64::new(0.0, 0.0); self.data.len()],
            ..*self
        }
    }

    /// Build a grid from row-major data using the default centers.
    pub fn from_vec(ny: usize, nx: usize, data: Vec<Complex64>) -> Result<Self> {
        Self::new(ny, nx, default_center(ny), default_center(nx), data)
    }

    /// Real image embedded as a complex grid with zero imaginary parts.
    pub fn from_real(image: &RealImage) -> Self {
        Self {
            ny: image.ny(),
            nx: image.nx(),
            center_k: default_center(image.ny()),
            center_n: default_center(image.nx()),
            data: image
                .data()
                .iter()
                .map(|&v| Complex64::new(v, 0.0))
                .collect(),
        }
    }

    pub fn with_data(&self, data: Vec<Complex64>) -> Result<Self> {
        Self::new(self.ny, self.nx, self.center_k, self.center_n, data)
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn center_k(&self) -> usize {
        self.center_k
    }

    pub fn center_n(&self) -> usize {
        self.center_n
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn k_min(&self) -> isize {
        -(self.center_k as isize)
    }

    pub fn k_max(&self) -> isize {
        (self.ny - 1 - self.center_k) as isize
    }

    pub fn n_min(&self) -> isize {
        -(self.center_n as isize)
    }

    pub fn n_max(&self) -> isize {
        (self.nx - 1 - self.center_n) as isize
    }

    pub fn k_of(&self, row: usize) -> isize {
        row as isize - self.center_k as isize
    }

    pub fn n_of(&self, col: usize) -> isize {
        col as isize - self.center_n as isize
    }

    pub fn row_of(&self, k: isize) -> Option<usize> {
        let r = k + self.center_k as isize;
        (0..self.ny as isize).contains(&r).then_some(r as usize)
    }

    pub fn col_of(&self, n: isize) -> Option<usize> {
        let c = n + self.center_n as isize;
        (0..self.nx as isize).contains(&c).then_some(c as usize)
    }

    /// Row holding the mirror line `-k`, wrapped periodically so that the
    /// unpaired edge line of an even-length axis is its own mirror.
    pub fn mirror_row(&self, row: usize) -> usize {
        mirror_index(row, self.center_k, self.ny)
    }

    pub fn mirror_col(&self, col: usize) -> usize {
        mirror_index(col, self.center_n, self.nx)
    }

    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.nx + col]
    }

    pub fn at_mut(&mut self, row: usize, col: usize) -> &mut Complex64 {
        &mut self.data[row * self.nx + col]
    }

    /// Sample at physical indices; `None` outside the grid.
    pub fn get(&self, k: isize, n: isize) -> Option<Complex64> {
        Some(self.at(self.row_of(k)?, self.col_of(n)?))
    }

    pub fn set(&mut self, k: isize, n: isize, value: Complex64) -> Result<()> {
        match (self.row_of(k), self.col_of(n)) {
            (Some(r), Some(c)) => {
                *self.at_mut(r, c) = value;
                Ok(())
            }
            _ => Err(Error::param(format!("index ({k}, {n}) outside grid"))),
        }
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.data[row * self.nx..(row + 1) * self.nx]
    }

    pub fn row_mut(&mut self, row: usize) -> &mut [Complex64] {
        &mut self.data[row * self.nx..(row + 1) * self.nx]
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.ny).map(|r| self.at(r, col)).collect()
    }

    pub fn set_column(&mut self, col: usize, values: &[Complex64]) {
        debug_assert_eq!(values.len(), self.ny);
        for (r, v) in values.iter().enumerate() {
            *self.at_mut(r, col) = *v;
        }
    }

    pub fn same_shape(&self, other: &ComplexGrid) -> bool {
        self.ny == other.ny
            && self.nx == other.nx
            && self.center_k == other.center_k
            && self.center_n == other.center_n
    }

    pub fn check_shape(&self, other: &ComplexGrid) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::shape(self.describe(), other.describe()))
        }
    }

    pub fn describe(&self) -> String {
        format!(
            "{}x{} grid centered at ({}, {})",
            self.ny, self.nx, self.center_k, self.center_n
        )
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn magnitude(&self) -> RealImage {
        RealImage::new(
            self.ny,
            self.nx,
            self.data.iter().map(|v| v.norm()).collect(),
        )
        .expect("shape preserved")
    }

    pub fn real_part(&self) -> RealImage {
        RealImage::new(self.ny, self.nx, self.data.iter().map(|v| v.re).collect())
            .expect("shape preserved")
    }

    pub fn max_abs_diff(&self, other: &ComplexGrid) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn mirror_index(idx: usize, center: usize, len: usize) -> usize {
    let len = len as isize;
    let phys = idx as isize - center as isize;
    (((-phys + center as isize) % len + len) % len) as usize
}

/// Real-valued image, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealImage {
    ny: usize,
    nx: usize,
    data: Vec<f64>,
}

impl RealImage {
    pub fn new(ny: usize, nx: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != ny * nx {
            return Err(Error::shape(format!("{} pixels", ny * nx), data.len()));
        }
        Ok(Self { ny, nx, data })
    }

    pub fn zeros(ny: usize, nx: usize) -> Self {
        Self {
            ny,
            nx,
            data: vec![0.0; ny * nx],
        }
    }

    pub fn from_fn(ny: usize, nx: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(ny * nx);
        for r in 0..ny {
            for c in 0..nx {
                data.push(f(r, c));
            }
        }
        Self { ny, nx, data }
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.nx + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: f64) {
        self.data[row * self.nx + col] = v;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.nx..(row + 1) * self.nx]
    }

    pub fn same_shape(&self, other: &RealImage) -> bool {
        self.ny == other.ny && self.nx == other.nx
    }

    pub fn check_shape(&self, other: &RealImage) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::shape(
                format!("{}x{} image", self.ny, self.nx),
                format!("{}x{} image", other.ny, other.nx),
            ))
        }
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> RealImage {
        RealImage {
            ny: self.ny,
            nx: self.nx,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> RealImage {
        self.map(|v| v * s)
    }
}
