use kspace_extrap::kspace::{to_image, ComplexGrid, RealImage};
use kspace_extrap::metrics::rmse;
use kspace_extrap::sim::{
    brain_phantom, propagate, simulate_spin_echo, MagnetizationState, SequenceParams, TissueMap,
};
use proptest::prelude::*;

/// Closed-form steady-state echo amplitude of a 90/180 spin echo with ideal
/// spoiling, per unit density.
fn echo_amplitude(seq: &SequenceParams, t1: f64, t2: f64) -> f64 {
    let e1h = (-seq.te_ms / 2.0 / t1).exp();
    let e1r = (-(seq.trep_ms - seq.te_ms / 2.0) / t1).exp();
    let ca = seq.alpha_deg.to_radians().cos();
    let mz = (1.0 - e1r - (1.0 - e1h) * e1r) / (1.0 + ca * e1h * e1r);
    -seq.alpha_deg.to_radians().sin() * mz * (-seq.te_ms / t2).exp()
}

fn contrast_map(tissue: &TissueMap, seq: &SequenceParams) -> RealImage {
    let n = tissue.n();
    RealImage::from_fn(n, n, |r, c| {
        let v = tissue.voxel(r, c);
        if v.rho == 0.0 {
            0.0
        } else {
            (v.rho * echo_amplitude(seq, v.t1_ms, v.t2_ms)).abs()
        }
    })
}

fn conjugate_asymmetry(g: &ComplexGrid) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..g.ny() {
        for c in 0..g.nx() {
            let d = g.at(r, c) - g.at(g.mirror_row(r), g.mirror_col(c)).conj();
            worst = worst.max(d.norm());
        }
    }
    worst / g.max_abs()
}

#[test]
fn noiseless_kspace_is_conjugate_symmetric() {
    let tissue = brain_phantom(64).unwrap();
    let s = simulate_spin_echo(&tissue, &SequenceParams::default(), 0.0, 0).unwrap();
    let asym = conjugate_asymmetry(&s);
    assert!(asym < 1e-3, "relative asymmetry {asym}");
}

#[test]
fn reconstruction_matches_contrast_map() {
    let tissue = brain_phantom(64).unwrap();
    let seq = SequenceParams::default();
    let s = simulate_spin_echo(&tissue, &seq, 0.0, 0).unwrap();
    let img = to_image(&s).magnitude().scaled(1.0 / 64.0);
    let nrmse = rmse(&img, &contrast_map(&tissue, &seq), true).unwrap();
    assert!(nrmse < 0.1, "NRMSE {nrmse}");
}

#[test]
fn echo_sign_is_negative() {
    let tissue = brain_phantom(64).unwrap();
    let s = simulate_spin_echo(&tissue, &SequenceParams::default(), 0.0, 0).unwrap();
    let img = to_image(&s);
    assert!(img.at(32, 32).re < 0.0);
}

#[test]
fn empty_phantom_gives_zero_kspace() {
    let tissue = TissueMap::zeros(32);
    let s = simulate_spin_echo(&tissue, &SequenceParams::default(), 0.0, 0).unwrap();
    assert!(s.data().iter().all(|v| v.norm() == 0.0));
}

#[test]
fn deterministic_given_seed() {
    let tissue = brain_phantom(32).unwrap();
    let seq = SequenceParams::default();
    let a = simulate_spin_echo(&tissue, &seq, 0.01, 7).unwrap();
    let b = simulate_spin_echo(&tissue, &seq, 0.01, 7).unwrap();
    let c = simulate_spin_echo(&tissue, &seq, 0.01, 8).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn spin_count_convergence() {
    let tissue = brain_phantom(32).unwrap();
    let seq = SequenceParams::default();
    let a = simulate_spin_echo(&tissue, &seq, 0.0, 0).unwrap();
    let doubled = SequenceParams {
        n_spins: 2 * seq.n_spins + 1,
        ..seq
    };
    let b = simulate_spin_echo(&tissue, &doubled, 0.0, 0).unwrap();
    let diff = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    assert!(
        diff / a.norm() < 0.01,
        "relative change {}",
        diff / a.norm()
    );
}

#[test]
fn noise_has_requested_spread() {
    let tissue = TissueMap::zeros(64);
    let s = simulate_spin_echo(&tissue, &SequenceParams::default(), 0.5, 3).unwrap();
    let n = s.data().len() as f64;
    let var_re = s.data().iter().map(|v| v.re * v.re).sum::<f64>() / n;
    let var_im = s.data().iter().map(|v| v.im * v.im).sum::<f64>() / n;
    assert!((var_re.sqrt() - 0.5).abs() < 0.02);
    assert!((var_im.sqrt() - 0.5).abs() < 0.02);
}

#[test]
fn inconsistent_timing_rejected() {
    let tissue = brain_phantom(32).unwrap();
    let seq = SequenceParams {
        trep_ms: 50.0,
        ..SequenceParams::default()
    };
    assert!(simulate_spin_echo(&tissue, &seq, 0.0, 0).is_err());
    assert!(simulate_spin_echo(&tissue, &SequenceParams::default(), -1.0, 0).is_err());
}

proptest! {
    #[test]
    fn relaxation_never_grows_transverse(
        mx in -1.0f64..1.0, my in -1.0f64..1.0, mz in -1.0f64..1.0,
        steps in proptest::collection::vec((0.0f64..50.0, -10.0f64..10.0), 1..20),
        t2 in 10.0f64..500.0, extra in 0.0f64..2000.0,
    ) {
        let t1 = t2 + extra;
        let mut m = MagnetizationState::new(mx, my, mz);
        for (t, phi) in steps {
            let next = propagate(m, t, t1, t2, phi).unwrap();
            prop_assert!(next.transverse_magnitude() <= m.transverse_magnitude() + 1e-15);
            m = next;
        }
    }
}
