use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::bloch::{lorentzian_ensemble, propagate_towards, rf_rotate, MagnetizationState};
use super::tissue::TissueMap;
use crate::error::{Error, Result};
use crate::kspace::{apply_mask, default_center, AcquisitionMask, ComplexGrid};

/// Proton gyromagnetic ratio, rad/s/T.
pub const GAMMA: f64 = 2.675_221_900e8;

/// Spin-echo acquisition parameters.
///
/// `gx`/`gy` of `None` pick amplitudes that map the field of view onto the
/// grid exactly, with `gy = gx / λ`. `bandwidth_hz` of `None` uses `1/Δt`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceParams {
    pub te_ms: f64,
    pub trep_ms: f64,
    pub alpha_deg: f64,
    pub lambda_samples: usize,
    pub gx: Option<f64>,
    pub gy: Option<f64>,
    pub delta_t_ms: f64,
    pub bandwidth_hz: Option<f64>,
    pub n_spins: usize,
    /// Field-of-view half-width, cm.
    pub fov_cm: f64,
    /// Unrecorded repetitions played before the first line.
    pub dummy_scans: usize,
}

impl Default for SequenceParams {
    fn default() -> Self {
        Self {
            te_ms: 100.0,
            trep_ms: 1500.0,
            alpha_deg: 90.0,
            lambda_samples: 16,
            gx: None,
            gy: None,
            delta_t_ms: 0.032,
            bandwidth_hz: None,
            n_spins: 31,
            fov_cm: 12.0,
            dummy_scans: 4,
        }
    }
}

impl SequenceParams {
    /// Readout gradient, T/cm.
    pub fn gx(&self) -> f64 {
        self.gx
            .unwrap_or_else(|| 2.0 * PI * 1e3 / (GAMMA * 2.0 * self.fov_cm * self.delta_t_ms))
    }

    /// Phase-encode gradient, T/cm.
    pub fn gy(&self) -> f64 {
        self.gy
            .unwrap_or_else(|| self.gx() / self.lambda_samples as f64)
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz.unwrap_or(1e3 / self.delta_t_ms)
    }

    /// Check timing against a readout of `nx` samples centered at `center_n`.
    pub fn validate(&self, nx: usize, center_n: usize) -> Result<()> {
        let positive = [
            ("te_ms", self.te_ms),
            ("trep_ms", self.trep_ms),
            ("delta_t_ms", self.delta_t_ms),
            ("fov_cm", self.fov_cm),
            ("gx", self.gx()),
            ("gy", self.gy()),
            ("bandwidth_hz", self.bandwidth_hz()),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(format!("{name} must be positive, got {v}")));
            }
        }
        if self.te_ms >= self.trep_ms {
            return Err(Error::param(format!(
                "TE {} ms must be shorter than Trep {} ms",
                self.te_ms, self.trep_ms
            )));
        }
        if self.lambda_samples == 0 {
            return Err(Error::param("phase-encode pulse needs at least one sample"));
        }
        let readout_start = self.te_ms - center_n as f64 * self.delta_t_ms;
        let pe_end = self.te_ms / 2.0 + self.lambda_samples as f64 * self.delta_t_ms;
        if pe_end > readout_start {
            return Err(Error::param(format!(
                "phase-encode pulse ends at {pe_end} ms, after readout start {readout_start} ms"
            )));
        }
        let readout_end = self.te_ms + (nx - center_n) as f64 * self.delta_t_ms;
        if readout_end > self.trep_ms {
            return Err(Error::param(format!(
                "readout ends at {readout_end} ms, after Trep {} ms",
                self.trep_ms
            )));
        }
        Ok(())
    }
}

/// Phase-encode lines in acquisition order: `k_max` down to 0, then the
/// negative lines `-1, -2, …`.
pub fn reverse_centric_order(ny: usize, center_k: usize) -> Vec<isize> {
    let k_max = (ny - 1 - center_k) as isize;
    let mut order: Vec<isize> = (0..=k_max).rev().collect();
    order.extend((1..=center_k as isize).map(|k| -k));
    order
}

/// Ensemble-summed transverse signal per unit proton density for one
/// relaxation class, indexed `[line row][sample column]`, before spatial
/// encoding.
fn relaxation_signal(
    t1_ms: f64,
    t2_ms: f64,
    seq: &SequenceParams,
    ny: usize,
    nx: usize,
    center_k: usize,
    center_n: usize,
) -> Result<Vec<Vec<Complex64>>> {
    let ens = lorentzian_ensemble(t2_ms, seq.n_spins, seq.bandwidth_hz())?;
    let order = reverse_centric_order(ny, center_k);
    let dt = seq.delta_t_ms;
    let half_te = seq.te_ms / 2.0;
    let pe = seq.lambda_samples as f64 * dt;
    let gap = seq.te_ms - center_n as f64 * dt - half_te - pe;
    let tail = seq.trep_ms - seq.te_ms - (nx - center_n) as f64 * dt;

    let mut out = vec![vec![Complex64::new(0.0, 0.0); nx]; ny];
    for (&omega, &weight) in ens.omegas.iter().zip(&ens.weights) {
        let m0 = weight;
        let phase = |t: f64| omega * t / 1e3;
        let mut m = MagnetizationState::longitudinal(m0);
        for tr in 0..seq.dummy_scans + order.len() {
            m = rf_rotate(m, seq.alpha_deg);
            m = propagate_towards(m, m0, half_te, t1_ms, t2_ms, phase(half_te))?;
            m = rf_rotate(m, 180.0);
            m = propagate_towards(m, m0, pe, t1_ms, t2_ms, phase(pe))?;
            m = propagate_towards(m, m0, gap, t1_ms, t2_ms, phase(gap))?;
            let row = tr
                .checked_sub(seq.dummy_scans)
                .map(|i| (order[i] + center_k as isize) as usize);
            #[allow(clippy::needless_range_loop)]
            for c in 0..nx {
                if let Some(r) = row {
                    out[r][c] += Complex64::new(m.mx, m.my);
                }
                m = propagate_towards(m, m0, dt, t1_ms, t2_ms, phase(dt))?;
            }
            m = propagate_towards(m, m0, tail, t1_ms, t2_ms, phase(tail))?;
            m.mx = 0.0;
            m.my = 0.0;
        }
    }
    Ok(out)
}

/// Encoding phase per pixel step and axis: `w(r)·T/10³` with `w = -γ·G·r`.
fn encoding_phases(n: usize, gradient: f64, duration_ms: f64, fov_cm: f64) -> Vec<f64> {
    let c = default_center(n) as f64;
    let pixel = 2.0 * fov_cm / n as f64;
    (0..n)
        .map(|i| -GAMMA * gradient * (i as f64 - c) * pixel * duration_ms / 1e3)
        .collect()
}

/// Spin-echo k-space of `tissue`, lines acquired in reverse-centric order.
///
/// Each relaxation class is simulated spin by spin through every repetition
/// (RF, refocusing pulse, phase-encode pulse, readout, ideal spoiling); the
/// gradient phases are then applied as closed-form rotations and summed over
/// voxels. Noise is i.i.d. Gaussian on both quadratures.
pub fn simulate_spin_echo(
    tissue: &TissueMap,
    seq: &SequenceParams,
    noise_std: f64,
    rng_seed: u64,
) -> Result<ComplexGrid> {
    let n = tissue.n();
    if n == 0 {
        return Err(Error::param("empty tissue map"));
    }
    if !(noise_std >= 0.0 && noise_std.is_finite()) {
        return Err(Error::param(format!(
            "noise_std must be non-negative, got {noise_std}"
        )));
    }
    let (ny, nx) = (n, n);
    let (ck, cn) = (default_center(ny), default_center(nx));
    seq.validate(nx, cn)?;

    let theta_x = encoding_phases(nx, seq.gx(), seq.delta_t_ms, seq.fov_cm);
    let theta_y = encoding_phases(
        ny,
        seq.gy(),
        seq.lambda_samples as f64 * seq.delta_t_ms,
        seq.fov_cm,
    );
    let ks: Vec<f64> = (0..ny).map(|r| r as f64 - ck as f64).collect();
    let ns: Vec<f64> = (0..nx).map(|c| c as f64 - cn as f64).collect();

    let mut data = vec![Complex64::new(0.0, 0.0); ny * nx];
    for class in tissue.classes() {
        let rho = &class.density;
        let signal = relaxation_signal(class.t1_ms, class.t2_ms, seq, ny, nx, ck, cn)?;
        // readout encoding: b[y][n] = Σ_x ρ(x, y)·e^{j·n·θx(x)}
        let b: Vec<Vec<Complex64>> = (0..ny)
            .into_par_iter()
            .map(|y| {
                let line = &rho[y * nx..(y + 1) * nx];
                ns.iter()
                    .map(|&nn| {
                        line.iter()
                            .zip(&theta_x)
                            .filter(|(r, _)| **r != 0.0)
                            .map(|(&r, &t)| Complex64::from_polar(r, nn * t))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        data.par_chunks_mut(nx).enumerate().for_each(|(row, out)| {
            let k = ks[row];
            let rot: Vec<Complex64> = theta_y
                .iter()
                .map(|&t| Complex64::from_polar(1.0, k * t))
                .collect();
            for (c, v) in out.iter_mut().enumerate() {
                let p: Complex64 = (0..ny).map(|y| rot[y] * b[y][c]).sum();
                *v += signal[row][c] * p;
            }
        });
    }

    if noise_std > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let normal = Normal::new(0.0, noise_std).map_err(|e| Error::param(e.to_string()))?;
        for v in &mut data {
            *v += Complex64::new(normal.sample(&mut rng), normal.sample(&mut rng));
        }
    }
    ComplexGrid::new(ny, nx, ck, cn, data)
}

/// Keep lines `k >= -q` and samples `n >= -m`; zero the rest.
pub fn truncate_acquisition(
    full: &ComplexGrid,
    q: usize,
    m: usize,
) -> Result<(ComplexGrid, AcquisitionMask)> {
    let mask = AcquisitionMask::new(full, q, m)?;
    Ok((apply_mask(full, &mask)?, mask))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_reverse_centric() {
        assert_eq!(reverse_centric_order(5, 2), vec![2, 1, 0, -1, -2]);
        assert_eq!(reverse_centric_order(4, 2), vec![1, 0, -1, -2]);
    }

    #[test]
    fn default_gradients() {
        let s = SequenceParams::default();
        let per_pixel = GAMMA * s.gx() * (2.0 * s.fov_cm / 64.0) * s.delta_t_ms / 1e3;
        assert!((per_pixel - 2.0 * PI / 64.0).abs() < 1e-12);
        assert!((s.gy() * 16.0 - s.gx()).abs() < 1e-18);
        assert_eq!(s.bandwidth_hz(), 31250.0);
    }

    #[test]
    fn timing_validation() {
        let s = SequenceParams::default();
        assert!(s.validate(255, 127).is_ok());
        let bad = SequenceParams {
            te_ms: 2000.0,
            ..s.clone()
        };
        assert!(bad.validate(64, 32).is_err());
        let short = SequenceParams { te_ms: 4.0, ..s };
        assert!(short.validate(255, 127).is_err());
    }

    #[test]
    fn truncate_sentinel_and_counts() {
        let g = ComplexGrid::from_vec(255, 255, vec![Complex64::new(1.0, 1.0); 255 * 255]).unwrap();
        let (same, mask) = truncate_acquisition(&g, 127, 127).unwrap();
        assert!(mask.is_complete());
        assert_eq!(same, g);
        let (part, mask) = truncate_acquisition(&g, 10, 45).unwrap();
        assert_eq!(mask.acquired_count(), 138 * 173);
        let kept = part.data().iter().filter(|v| v.norm() > 0.0).count();
        assert_eq!(kept, 138 * 173);
        assert!(truncate_acquisition(&g, 128, 0).is_err());
    }
}
