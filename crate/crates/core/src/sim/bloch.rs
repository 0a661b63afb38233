//! Bloch-equation primitives: RF rotation, relaxation with precession, and
//! the discretized Lorentzian off-resonance ensemble.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Magnetization of one spin.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MagnetizationState {
    pub mx: f64,
    pub my: f64,
    pub mz: f64,
}

impl MagnetizationState {
    pub fn new(mx: f64, my: f64, mz: f64) -> Self {
        Self { mx, my, mz }
    }

    pub fn longitudinal(mz: f64) -> Self {
        Self {
            mx: 0.0,
            my: 0.0,
            mz,
        }
    }

    pub fn transverse_magnitude(&self) -> f64 {
        self.mx.hypot(self.my)
    }

    pub fn norm(&self) -> f64 {
        (self.mx * self.mx + self.my * self.my + self.mz * self.mz).sqrt()
    }
}

/// Rotation by an `alpha_deg` RF pulse about the y axis.
pub fn rf_rotate(m: MagnetizationState, alpha_deg: f64) -> MagnetizationState {
    let (s, c) = alpha_deg.to_radians().sin_cos();
    MagnetizationState {
        mx: c * m.mx + s * m.mz,
        my: m.my,
        mz: -s * m.mx + c * m.mz,
    }
}

/// Equilibrium magnetization of one spin: proton density times its
/// spectral weight.
pub fn init_magnetization(rho: f64, weight: f64) -> f64 {
    rho * weight
}

/// Relaxation and precession over `t_ms`.
///
/// Applies `A(t)·m + B(t)` with `A = diag(E2, E2, E1)·Rz(phi)` and
/// `B = (0, 0, 1 - E1)`. The equilibrium term is per unit magnetization;
/// [`propagate_towards`] scales it for spins with a smaller `M_org`.
pub fn propagate(
    m: MagnetizationState,
    t_ms: f64,
    t1_ms: f64,
    t2_ms: f64,
    phi_rad: f64,
) -> Result<MagnetizationState> {
    propagate_towards(m, 1.0, t_ms, t1_ms, t2_ms, phi_rad)
}

/// [`propagate`] with longitudinal recovery towards `m0` instead of 1.
pub fn propagate_towards(
    m: MagnetizationState,
    m0: f64,
    t_ms: f64,
    t1_ms: f64,
    t2_ms: f64,
    phi_rad: f64,
) -> Result<MagnetizationState> {
    if !(t_ms >= 0.0) {
        return Err(Error::param(format!("negative propagation time {t_ms} ms")));
    }
    if !(t1_ms > 0.0 && t2_ms > 0.0) {
        return Err(Error::param("relaxation times must be positive"));
    }
    let e1 = (-t_ms / t1_ms).exp();
    let e2 = (-t_ms / t2_ms).exp();
    let (s, c) = phi_rad.sin_cos();
    Ok(MagnetizationState {
        mx: e2 * (c * m.mx - s * m.my),
        my: e2 * (s * m.mx + c * m.my),
        mz: e1 * m.mz + m0 * (1.0 - e1),
    })
}

/// Discretized off-resonance spectrum of the spins inside one voxel.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinEnsemble {
    /// Off-resonance frequencies, rad/s.
    pub omegas: Vec<f64>,
    /// Spectral amplitudes `H(ω_i)·Δω`, summing to one.
    pub weights: Vec<f64>,
}

impl SpinEnsemble {
    pub fn n_f(&self) -> usize {
        self.omegas.len()
    }
}

/// Lorentzian ensemble with `T2' = 0.3·T2`, frequencies spread uniformly
/// over `[-πF, πF]` rad/s.
pub fn lorentzian_ensemble(t2_ms: f64, n_f: usize, bandwidth_hz: f64) -> Result<SpinEnsemble> {
    if n_f < 3 {
        return Err(Error::param(format!("need at least 3 spins, got {n_f}")));
    }
    if n_f.is_multiple_of(2) {
        return Err(Error::param(format!("spin count must be odd, got {n_f}")));
    }
    if !(bandwidth_hz > 0.0) {
        return Err(Error::param("bandwidth must be positive"));
    }
    if !(t2_ms > 0.0) {
        return Err(Error::param("T2 must be positive"));
    }
    let t2_prime_s = 0.3 * t2_ms * 1e-3;
    let half_width = 1.0 / t2_prime_s;
    let w_max = PI * bandwidth_hz;
    let half = (n_f / 2) as f64;
    let omegas: Vec<f64> = (0..n_f).map(|i| (i as f64 - half) / half * w_max).collect();
    let raw: Vec<f64> = omegas
        .iter()
        .map(|w| half_width / (half_width * half_width + w * w))
        .collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|v| v / total).collect();
    Ok(SpinEnsemble { omegas, weights })
}
