use crate::error::{Error, Result};
use crate::kspace::default_center;
use crate::metrics::RoiSpec;

/// Relaxation parameters of one tissue at 1.5 T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tissue {
    pub rho: f64,
    pub t1_ms: f64,
    pub t2_ms: f64,
}

pub const WHITE_MATTER: Tissue = Tissue {
    rho: 0.65,
    t1_ms: 650.0,
    t2_ms: 80.0,
};

pub const GRAY_MATTER: Tissue = Tissue {
    rho: 0.8,
    t1_ms: 950.0,
    t2_ms: 100.0,
};

pub const CSF: Tissue = Tissue {
    rho: 0.9,
    t1_ms: 4000.0,
    t2_ms: 2000.0,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TissueClass {
    Background,
    WhiteMatter,
    GrayMatter,
    Csf,
}

impl TissueClass {
    pub fn params(self) -> Option<Tissue> {
        match self {
            TissueClass::Background => None,
            TissueClass::WhiteMatter => Some(WHITE_MATTER),
            TissueClass::GrayMatter => Some(GRAY_MATTER),
            TissueClass::Csf => Some(CSF),
        }
    }
}

/// Proton-density map of one relaxation class.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationClass {
    pub t1_ms: f64,
    pub t2_ms: f64,
    /// Per-voxel density contributed by this class, row-major `n × n`.
    pub density: Vec<f64>,
}

/// Per-voxel proton density and relaxation times on an `n × n` grid.
///
/// Voxels may hold several tissues (partial volume). `rho` is the summed
/// density; `t1_ms`/`t2_ms` belong to the voxel's dominant class and are
/// zero in background voxels.
#[derive(Debug, Clone, PartialEq)]
pub struct TissueMap {
    n: usize,
    rho: Vec<f64>,
    t1_ms: Vec<f64>,
    t2_ms: Vec<f64>,
    classes: Vec<RelaxationClass>,
}

impl TissueMap {
    /// Single-tissue voxels from per-voxel arrays.
    pub fn new(n: usize, rho: Vec<f64>, t1_ms: Vec<f64>, t2_ms: Vec<f64>) -> Result<Self> {
        let len = n * n;
        if rho.len() != len || t1_ms.len() != len || t2_ms.len() != len {
            return Err(Error::shape(
                format!("{len} voxels"),
                "mismatched tissue arrays",
            ));
        }
        let mut classes: Vec<RelaxationClass> = Vec::new();
        for i in 0..len {
            if rho[i] == 0.0 {
                continue;
            }
            let (t1, t2) = (t1_ms[i], t2_ms[i]);
            let idx = match classes.iter().position(|c| c.t1_ms == t1 && c.t2_ms == t2) {
                Some(idx) => idx,
                None => {
                    classes.push(RelaxationClass {
                        t1_ms: t1,
                        t2_ms: t2,
                        density: vec![0.0; len],
                    });
                    classes.len() - 1
                }
            };
            classes[idx].density[i] = rho[i];
        }
        Self::from_classes(n, classes)
    }

    /// Partial-volume map from per-class density maps.
    pub fn from_classes(n: usize, classes: Vec<RelaxationClass>) -> Result<Self> {
        let len = n * n;
        for c in &classes {
            if c.density.len() != len {
                return Err(Error::shape(
                    format!("{len} voxels"),
                    c.density.len().to_string(),
                ));
            }
            if !(c.t2_ms > 0.0 && c.t1_ms >= c.t2_ms) {
                return Err(Error::param(format!(
                    "need T1 >= T2 > 0, got T1={} T2={}",
                    c.t1_ms, c.t2_ms
                )));
            }
            if let Some(v) = c.density.iter().find(|v| !(**v >= 0.0)) {
                return Err(Error::param(format!("negative density {v}")));
            }
        }
        let mut rho = vec![0.0; len];
        let mut t1_ms = vec![0.0; len];
        let mut t2_ms = vec![0.0; len];
        for i in 0..len {
            let mut best = 0.0;
            for c in &classes {
                let d = c.density[i];
                rho[i] += d;
                if d > best {
                    best = d;
                    t1_ms[i] = c.t1_ms;
                    t2_ms[i] = c.t2_ms;
                }
            }
            if rho[i] > 1.0 + 1e-12 {
                return Err(Error::param(format!(
                    "voxel {i}: rho {} outside [0, 1]",
                    rho[i]
                )));
            }
        }
        Ok(Self {
            n,
            rho,
            t1_ms,
            t2_ms,
            classes,
        })
    }

    /// All-background map.
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            rho: vec![0.0; n * n],
            t1_ms: vec![0.0; n * n],
            t2_ms: vec![0.0; n * n],
            classes: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn t1_ms(&self) -> &[f64] {
        &self.t1_ms
    }

    pub fn t2_ms(&self) -> &[f64] {
        &self.t2_ms
    }

    pub fn classes(&self) -> &[RelaxationClass] {
        &self.classes
    }

    pub fn voxel(&self, row: usize, col: usize) -> Tissue {
        let i = row * self.n + col;
        Tissue {
            rho: self.rho[i],
            t1_ms: self.t1_ms[i],
            t2_ms: self.t2_ms[i],
        }
    }
}

/// Layout of the concentric-ellipse brain phantom.
///
/// Semi-axes are fractions of the half-width, `(x, y)`. From the center
/// outward: CSF core, gray-matter ring, white-matter ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhantomGeometry {
    pub n: usize,
    pub csf: (f64, f64),
    pub gray: (f64, f64),
    pub white: (f64, f64),
}

impl PhantomGeometry {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            csf: (0.18, 0.25),
            gray: (0.42, 0.52),
            white: (0.70, 0.85),
        }
    }

    /// Tissue at voxel center `(row, col)`.
    pub fn classify(&self, row: usize, col: usize) -> TissueClass {
        self.classify_point(row as f64, col as f64)
    }

    /// Tissue at a fractional grid position.
    pub fn classify_point(&self, y: f64, x: f64) -> TissueClass {
        let c = default_center(self.n) as f64;
        let half = self.n as f64 / 2.0;
        let (u, v) = ((x - c) / half, (y - c) / half);
        let inside = |(ax, ay): (f64, f64)| (u / ax).powi(2) + (v / ay).powi(2) <= 1.0;
        if inside(self.csf) {
            TissueClass::Csf
        } else if inside(self.gray) {
            TissueClass::GrayMatter
        } else if inside(self.white) {
            TissueClass::WhiteMatter
        } else {
            TissueClass::Background
        }
    }

    fn band_squares(&self, inner: f64, outer: f64, label: &str) -> RoiSpec {
        let c = default_center(self.n) as isize;
        let half = self.n as f64 / 2.0;
        let mid = ((inner + outer) / 2.0 * half).round() as isize;
        let h = (self.n / 64).max(1) as isize;
        let mut pixels = Vec::new();
        for side in [-1isize, 1] {
            let cc = c + side * mid;
            for dr in -h..=h {
                for dc in -h..=h {
                    pixels.push(((c + dr) as usize, (cc + dc) as usize));
                }
            }
        }
        RoiSpec::new(label, pixels, self.n, self.n).expect("ROI inside phantom")
    }

    /// Gray-matter ROI: two squares centered in the ring along the x axis.
    pub fn gray_roi(&self) -> RoiSpec {
        self.band_squares(self.csf.0, self.gray.0, "gray_matter")
    }

    pub fn white_roi(&self) -> RoiSpec {
        self.band_squares(self.gray.0, self.white.0, "white_matter")
    }

    /// Background noise ROI: the four corner blocks.
    pub fn noise_roi(&self) -> RoiSpec {
        let s = (self.n / 16).max(2);
        let mut pixels = Vec::new();
        for r0 in [0, self.n - s] {
            for c0 in [0, self.n - s] {
                for r in r0..r0 + s {
                    for c in c0..c0 + s {
                        pixels.push((r, c));
                    }
                }
            }
        }
        RoiSpec::new("background", pixels, self.n, self.n).expect("corner ROI")
    }
}

/// Sub-samples per voxel side when rasterizing the phantom.
const SUPERSAMPLE: usize = 8;

/// Concentric-ellipse brain phantom with 1.5 T tissue parameters.
///
/// Boundary voxels carry partial volumes of the tissues they straddle,
/// estimated on a `SUPERSAMPLE²` sub-grid.
pub fn brain_phantom(n: usize) -> Result<TissueMap> {
    if n < 32 {
        return Err(Error::param(format!("phantom needs n >= 32, got {n}")));
    }
    let geom = PhantomGeometry::new(n);
    let tissues = [
        (TissueClass::WhiteMatter, WHITE_MATTER),
        (TissueClass::GrayMatter, GRAY_MATTER),
        (TissueClass::Csf, CSF),
    ];
    let mut classes: Vec<RelaxationClass> = tissues
        .iter()
        .map(|(_, t)| RelaxationClass {
            t1_ms: t.t1_ms,
            t2_ms: t.t2_ms,
            density: vec![0.0; n * n],
        })
        .collect();
    let step = 1.0 / SUPERSAMPLE as f64;
    let total = (SUPERSAMPLE * SUPERSAMPLE) as f64;
    for r in 0..n {
        for c in 0..n {
            let mut counts = [0usize; 3];
            for i in 0..SUPERSAMPLE {
                for j in 0..SUPERSAMPLE {
                    let y = r as f64 - 0.5 + (i as f64 + 0.5) * step;
                    let x = c as f64 - 0.5 + (j as f64 + 0.5) * step;
                    let class = geom.classify_point(y, x);
                    if let Some(idx) = tissues.iter().position(|(k, _)| *k == class) {
                        counts[idx] += 1;
                    }
                }
            }
            for (idx, &count) in counts.iter().enumerate() {
                if count > 0 {
                    classes[idx].density[r * n + c] = tissues[idx].1.rho * count as f64 / total;
                }
            }
        }
    }
    TissueMap::from_classes(n, classes)
}
