//! Non-local means denoising.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kspace::RealImage;
use crate::metrics::reflect;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NlmParams {
    /// Search window radius.
    pub t: usize,
    /// Patch radius.
    pub f: usize,
    /// Filtering strength; `None` uses a tenth of the image's dynamic range.
    pub h: Option<f64>,
}

impl Default for NlmParams {
    fn default() -> Self {
        Self {
            t: 5,
            f: 1,
            h: None,
        }
    }
}

impl NlmParams {
    pub fn strength_for(&self, image: &RealImage) -> f64 {
        self.h.unwrap_or(0.1 * (image.max() - image.min()))
    }
}

/// Each pixel becomes the average of its `(2t+1)²` search window weighted
/// by `exp(-‖P(p) - P(q)‖² / h²)` over `(2f+1)²` patches. Out-of-range
/// pixels are mirrored.
pub fn nlm_denoise(image: &RealImage, t: usize, f: usize, h: f64) -> Result<RealImage> {
    if f < 1 || t < f {
        return Err(Error::param(format!(
            "NLM radii need t >= f >= 1, got t={t} f={f}"
        )));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::param(format!(
            "NLM strength must be positive, got {h}"
        )));
    }
    let (ny, nx) = (image.ny(), image.nx());
    let pad = (t + f) as isize;
    let (py, px) = (ny + 2 * pad as usize, nx + 2 * pad as usize);
    let padded: Vec<f64> = (0..py)
        .flat_map(|r| {
            let rr = reflect(r as isize - pad, ny);
            (0..px).map(move |c| (rr, reflect(c as isize - pad, nx)))
        })
        .map(|(r, c)| image.get(r, c))
        .collect();
    let at = |r: isize, c: isize| padded[(r + pad) as usize * px + (c + pad) as usize];
    let (t, f) = (t as isize, f as isize);
    let inv_h2 = 1.0 / (h * h);

    let data: Vec<f64> = (0..ny)
        .into_par_iter()
        .flat_map_iter(|r| {
            let r = r as isize;
            (0..nx as isize).map(move |c| {
                let (mut num, mut den) = (0.0, 0.0);
                for dy in -t..=t {
                    for dx in -t..=t {
                        let mut d2 = 0.0;
                        for py in -f..=f {
                            for px in -f..=f {
                                let d = at(r + py, c + px) - at(r + dy + py, c + dx + px);
                                d2 += d * d;
                            }
                        }
                        let w = (-d2 * inv_h2).exp();
                        num += w * at(r + dy, c + dx);
                        den += w;
                    }
                }
                num / den
            })
        })
        .collect();
    RealImage::new(ny, nx, data)
}
