//! Image-quality measurements: CNR over ROIs, Canny edge-map error, RMSE.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::kspace::RealImage;

/// Named set of pixel coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoiSpec {
    label: String,
    pixels: Vec<(usize, usize)>,
}

impl RoiSpec {
    /// Duplicate pixels are merged. Fails on an empty set or an index outside
    /// `ny × nx`.
    pub fn new(label: &str, mut pixels: Vec<(usize, usize)>, ny: usize, nx: usize) -> Result<Self> {
        pixels.sort_unstable();
        pixels.dedup();
        if pixels.is_empty() {
            return Err(Error::param(format!("ROI '{label}' is empty")));
        }
        if let Some(&(r, c)) = pixels.iter().find(|&&(r, c)| r >= ny || c >= nx) {
            return Err(Error::param(format!(
                "ROI '{label}' pixel ({r}, {c}) outside {ny}x{nx}"
            )));
        }
        Ok(Self {
            label: label.to_string(),
            pixels,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn pixels(&self) -> &[(usize, usize)] {
        &self.pixels
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    fn overlaps(&self, other: &RoiSpec) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.pixels.len() && j < other.pixels.len() {
            match self.pixels[i].cmp(&other.pixels[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    fn values<'a>(&'a self, image: &'a RealImage) -> impl Iterator<Item = f64> + 'a {
        self.pixels.iter().map(move |&(r, c)| image.get(r, c))
    }

    pub fn mean(&self, image: &RealImage) -> f64 {
        self.values(image).sum::<f64>() / self.len() as f64
    }

    /// Unbiased standard deviation; `None` for a single pixel.
    pub fn std_dev(&self, image: &RealImage) -> Option<f64> {
        if self.len() < 2 {
            return None;
        }
        let mean = self.mean(image);
        let ss: f64 = self.values(image).map(|v| (v - mean).powi(2)).sum();
        Some((ss / (self.len() - 1) as f64).sqrt())
    }
}

/// Parse `label row col` lines into ROIs, in order of first appearance.
/// Blank lines and `#` comments are skipped.
pub fn parse_roi_text(text: &str, ny: usize, nx: usize) -> Result<Vec<RoiSpec>> {
    let mut groups: Vec<(String, Vec<(usize, usize)>)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Format(format!("ROI line {}: expected 'label row col'", lineno + 1));
        if fields.len() != 3 {
            return Err(bad());
        }
        let r: usize = fields[1].parse().map_err(|_| bad())?;
        let c: usize = fields[2].parse().map_err(|_| bad())?;
        match groups.iter_mut().find(|(l, _)| l == fields[0]) {
            Some((_, px)) => px.push((r, c)),
            None => groups.push((fields[0].to_string(), vec![(r, c)])),
        }
    }
    groups
        .into_iter()
        .map(|(label, px)| RoiSpec::new(&label, px, ny, nx))
        .collect()
}

fn check_roi(image: &RealImage, roi: &RoiSpec) -> Result<()> {
    match roi
        .pixels()
        .iter()
        .find(|&&(r, c)| r >= image.ny() || c >= image.nx())
    {
        Some(&(r, c)) => Err(Error::param(format!(
            "ROI '{}' pixel ({r}, {c}) outside {}x{} image",
            roi.label(),
            image.ny(),
            image.nx()
        ))),
        None => Ok(()),
    }
}

/// Contrast-to-noise ratio `(mean(a) - mean(b)) / std(noise)`.
pub fn cnr(
    image: &RealImage,
    roi_a: &RoiSpec,
    roi_b: &RoiSpec,
    roi_noise: &RoiSpec,
) -> Result<f64> {
    for roi in [roi_a, roi_b, roi_noise] {
        check_roi(image, roi)?;
    }
    if roi_a.overlaps(roi_b) || roi_a.overlaps(roi_noise) || roi_b.overlaps(roi_noise) {
        return Err(Error::param("CNR ROIs must be disjoint"));
    }
    let sd = roi_noise
        .std_dev(image)
        .ok_or_else(|| Error::param("noise ROI needs at least two pixels"))?;
    if !(sd > 0.0) {
        return Err(Error::Degenerate(
            "zero noise variance in background ROI".into(),
        ));
    }
    Ok((roi_a.mean(image) - roi_b.mean(image)) / sd)
}

/// Canny detector settings. Thresholds are fractions of the maximum
/// gradient magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CannyParams {
    pub sigma: f64,
    pub low: f64,
    pub high: f64,
}

impl Default for CannyParams {
    fn default() -> Self {
        Self {
            sigma: 1.4,
            low: 0.1,
            high: 0.25,
        }
    }
}

impl CannyParams {
    fn validate(&self) -> Result<()> {
        if !(self.low > 0.0 && self.low < self.high) {
            return Err(Error::param(format!(
                "Canny thresholds need 0 < low < high, got {} and {}",
                self.low, self.high
            )));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::param(format!(
                "Canny sigma must be positive, got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

/// Binary edge map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    ny: usize,
    nx: usize,
    edges: Vec<bool>,
}

impl EdgeMap {
    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.edges[r * self.nx + c]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.edges
    }

    pub fn count(&self) -> usize {
        self.edges.iter().filter(|&&e| e).count()
    }
}

pub(crate) fn reflect(i: isize, n: usize) -> usize {
    let n = n as isize;
    let period = 2 * n;
    let mut j = i.rem_euclid(period);
    if j >= n {
        j = period - 1 - j;
    }
    j as usize
}

fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as isize;
    let raw: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

/// Separable Gaussian blur with symmetric boundary reflection.
fn gaussian_blur(image: &RealImage, sigma: f64) -> RealImage {
    let (ny, nx) = (image.ny(), image.nx());
    let kernel = gaussian_kernel(sigma);
    let radius = (kernel.len() / 2) as isize;
    let horiz = RealImage::from_fn(ny, nx, |r, c| {
        kernel
            .iter()
            .enumerate()
            .map(|(i, w)| w * image.get(r, reflect(c as isize + i as isize - radius, nx)))
            .sum()
    });
    RealImage::from_fn(ny, nx, |r, c| {
        kernel
            .iter()
            .enumerate()
            .map(|(i, w)| w * horiz.get(reflect(r as isize + i as isize - radius, ny), c))
            .sum()
    })
}

/// Canny edge detection: Gaussian smoothing, Sobel gradients,
/// four-direction non-maximum suppression, 8-connected hysteresis.
pub fn canny_edges(image: &RealImage, params: &CannyParams) -> Result<EdgeMap> {
    params.validate()?;
    let (ny, nx) = (image.ny(), image.nx());
    let smooth = gaussian_blur(image, params.sigma);
    let px = |r: isize, c: isize| {
        let r = r.clamp(0, ny as isize - 1) as usize;
        let c = c.clamp(0, nx as isize - 1) as usize;
        smooth.get(r, c)
    };
    let mut gx = vec![0.0; ny * nx];
    let mut gy = vec![0.0; ny * nx];
    let mut mag = vec![0.0; ny * nx];
    for r in 0..ny as isize {
        for c in 0..nx as isize {
            let dx = (px(r - 1, c + 1) + 2.0 * px(r, c + 1) + px(r + 1, c + 1))
                - (px(r - 1, c - 1) + 2.0 * px(r, c - 1) + px(r + 1, c - 1));
            let dy = (px(r + 1, c - 1) + 2.0 * px(r + 1, c) + px(r + 1, c + 1))
                - (px(r - 1, c - 1) + 2.0 * px(r - 1, c) + px(r - 1, c + 1));
            let i = r as usize * nx + c as usize;
            gx[i] = dx;
            gy[i] = dy;
            mag[i] = dx.hypot(dy);
        }
    }
    let max = mag.iter().copied().fold(0.0, f64::max);
    let mut edges = vec![false; ny * nx];
    if max <= 0.0 {
        return Ok(EdgeMap { ny, nx, edges });
    }

    let at = |r: isize, c: isize| {
        if r < 0 || c < 0 || r >= ny as isize || c >= nx as isize {
            0.0
        } else {
            mag[r as usize * nx + c as usize]
        }
    };
    let mut thin = vec![0.0; ny * nx];
    for r in 0..ny as isize {
        for c in 0..nx as isize {
            let i = r as usize * nx + c as usize;
            let m = mag[i];
            if m == 0.0 {
                continue;
            }
            let angle = gy[i].atan2(gx[i]).to_degrees().rem_euclid(180.0);
            let (dr, dc) = if !(22.5..157.5).contains(&angle) {
                (0, 1)
            } else if angle < 67.5 {
                (1, 1)
            } else if angle < 112.5 {
                (1, 0)
            } else {
                (1, -1)
            };
            if m >= at(r - dr, c - dc) && m > at(r + dr, c + dc) {
                thin[i] = m;
            }
        }
    }

    let (low, high) = (params.low * max, params.high * max);
    let mut queue = VecDeque::new();
    for (i, &m) in thin.iter().enumerate() {
        if m >= high {
            edges[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        let (r, c) = ((i / nx) as isize, (i % nx) as isize);
        for dr in -1..=1 {
            for dc in -1..=1 {
                let (rr, cc) = (r + dr, c + dc);
                if rr < 0 || cc < 0 || rr >= ny as isize || cc >= nx as isize {
                    continue;
                }
                let j = rr as usize * nx + cc as usize;
                if !edges[j] && thin[j] >= low {
                    edges[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    Ok(EdgeMap { ny, nx, edges })
}

/// Percentage of reference edge pixels disagreeing with the reconstruction:
/// `100·|E(recon) xor E(ref)| / max(1, |E(ref)|)`.
pub fn edge_error_percent(
    recon: &RealImage,
    reference: &RealImage,
    params: &CannyParams,
) -> Result<f64> {
    recon.check_shape(reference)?;
    let a = canny_edges(recon, params)?;
    let b = canny_edges(reference, params)?;
    let diff = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .filter(|(x, y)| x != y)
        .count();
    Ok(100.0 * diff as f64 / b.count().max(1) as f64)
}

/// Root-mean-square difference, optionally relative to the RMS of `b`.
pub fn rmse(a: &RealImage, b: &RealImage, normalize: bool) -> Result<f64> {
    a.check_shape(b)?;
    let n = a.data().len() as f64;
    let mse: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        / n;
    let value = mse.sqrt();
    if !normalize {
        return Ok(value);
    }
    let rms_b = (b.data().iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    if rms_b == 0.0 {
        return Err(Error::Degenerate("normalizing by an all-zero image".into()));
    }
    Ok(value / rms_b)
}
