#![allow(dead_code)]

use kspace_extrap::kspace::{to_image, to_kspace, ComplexGrid, RealImage};
use kspace_extrap::sim::{brain_phantom, simulate_spin_echo, SequenceParams};

/// Simulated full k-space and the magnitude image of its noiseless
/// counterpart.
pub fn simulated(n: usize, noise_std: f64, seed: u64) -> (ComplexGrid, RealImage) {
    let tissue = brain_phantom(n).unwrap();
    let seq = SequenceParams::default();
    let clean = simulate_spin_echo(&tissue, &seq, 0.0, seed).unwrap();
    let truth = to_image(&clean).magnitude();
    if noise_std == 0.0 {
        return (clean, truth);
    }
    let noisy = simulate_spin_echo(&tissue, &seq, noise_std, seed).unwrap();
    (noisy, truth)
}

/// Exactly conjugate-symmetric k-space of the proton-density map.
pub fn real_phantom(n: usize) -> (ComplexGrid, RealImage) {
    let tissue = brain_phantom(n).unwrap();
    let img = RealImage::new(n, n, tissue.rho().to_vec()).unwrap();
    (to_kspace(&ComplexGrid::from_real(&img)), img)
}

pub fn relative_rmse(a: &RealImage, b: &RealImage) -> f64 {
    kspace_extrap::metrics::rmse(a, b, true).unwrap()
}
