mod common;

use common::{real_phantom, relative_rmse, simulated};
use kspace_extrap::kspace::{to_image, to_kspace, AcquisitionMask, ComplexGrid, RealImage};
use kspace_extrap::metrics::{edge_error_percent, rmse, CannyParams};
use kspace_extrap::recon::{
    conjugate_synthesis_recon, homodyne_recon, pocs_recon, pocs_recon_traced, zero_fill_recon,
    PocsParams,
};
use kspace_extrap::sim::truncate_acquisition;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn all_methods_exact_on_complete_symmetric_data() {
    let (k, img) = real_phantom(64);
    let mask = AcquisitionMask::complete(&k);
    let full = to_image(&k).magnitude();
    assert!(relative_rmse(&full, &img) < 1e-12);
    for (name, out) in [
        ("zerofill", zero_fill_recon(&k, &mask).unwrap()),
        ("conjsym", conjugate_synthesis_recon(&k, &mask).unwrap()),
        ("homodyne", homodyne_recon(&k, &mask).unwrap()),
        ("pocs", pocs_recon(&k, &mask, 20, 1e-4).unwrap()),
    ] {
        let e = relative_rmse(&out.image, &full);
        assert!(e < 1e-6, "{name}: {e}");
    }
}

#[test]
fn zero_partial_gives_zero_image() {
    let k = ComplexGrid::zeros(32, 32);
    let mask = AcquisitionMask::new(&k, 4, 4).unwrap();
    assert!(zero_fill_recon(&k, &mask)
        .unwrap()
        .image
        .data()
        .iter()
        .all(|&v| v == 0.0));
}

#[test]
fn conjugate_synthesis_recovers_symmetric_half() {
    // odd size: no self-mirrored Nyquist line
    let (k, img) = real_phantom(65);
    for (q, m) in [(6, 32), (32, 10)] {
        let (partial, mask) = truncate_acquisition(&k, q, m).unwrap();
        let out = conjugate_synthesis_recon(&partial, &mask).unwrap();
        assert!(relative_rmse(&out.image, &img) < 1e-6, "q={q} m={m}");
    }
}

#[test]
fn conjugate_synthesis_equals_zero_fill_when_complete() {
    let (k, _) = simulated(32, 0.0, 0);
    let mask = AcquisitionMask::complete(&k);
    let a = conjugate_synthesis_recon(&k, &mask).unwrap();
    let b = zero_fill_recon(&k, &mask).unwrap();
    assert_eq!(a.image, b.image);
}

#[test]
fn homodyne_beats_zero_fill() {
    let (k, truth) = simulated(64, 0.0, 0);
    let (partial, mask) = truncate_acquisition(&k, 8, 16).unwrap();
    let zf = rmse(
        &zero_fill_recon(&partial, &mask).unwrap().image,
        &truth,
        false,
    )
    .unwrap();
    let hd = rmse(
        &homodyne_recon(&partial, &mask).unwrap().image,
        &truth,
        false,
    )
    .unwrap();
    assert!(zf > hd, "zero-fill {zf} vs homodyne {hd}");
}

/// Smooth random phase applied in the image domain.
fn with_smooth_phase(k: &ComplexGrid, seed: u64) -> ComplexGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b, c) = (
        rng.random_range(-1.5..1.5),
        rng.random_range(-1.5..1.5),
        rng.random_range(-1.0..1.0),
    );
    let img = to_image(k);
    let n = k.ny() as f64;
    let mut out = img.clone();
    for r in 0..k.ny() {
        for col in 0..k.nx() {
            let (y, x) = (r as f64 / n - 0.5, col as f64 / n - 0.5);
            *out.at_mut(r, col) *= Complex64::from_polar(1.0, a * x + b * y + c * x * y);
        }
    }
    to_kspace(&out)
}

#[test]
fn conjugate_synthesis_suffers_from_phase() {
    let (k, truth) = simulated(128, 0.0, 0);
    let p = CannyParams::default();
    for seed in 0..3 {
        let phased = with_smooth_phase(&k, seed);
        let (partial, mask) = truncate_acquisition(&phased, 16, 21).unwrap();
        let cs = conjugate_synthesis_recon(&partial, &mask).unwrap();
        let hd = homodyne_recon(&partial, &mask).unwrap();
        let e_cs = edge_error_percent(&cs.image, &truth, &p).unwrap();
        let e_hd = edge_error_percent(&hd.image, &truth, &p).unwrap();
        assert!(e_cs > e_hd, "seed {seed}: conjsym {e_cs} homodyne {e_hd}");
    }
}

#[test]
fn homodyne_ignores_global_phase() {
    let (k, _) = simulated(64, 0.0, 0);
    let (partial, mask) = truncate_acquisition(&k, 8, 12).unwrap();
    let base = homodyne_recon(&partial, &mask).unwrap();
    for theta in [0.4, 2.0, -2.9] {
        let rotated = partial
            .with_data(
                partial
                    .data()
                    .iter()
                    .map(|z| z * Complex64::from_polar(1.0, theta))
                    .collect(),
            )
            .unwrap();
        let out = homodyne_recon(&rotated, &mask).unwrap();
        assert!(
            relative_rmse(&out.image, &base.image) < 1e-6,
            "theta {theta}"
        );
    }
}

#[test]
fn homodyne_edge_error_falls_with_q() {
    let (k, truth) = simulated(255, 0.0, 0);
    let p = CannyParams::default();
    let errs: Vec<f64> = [10, 30, 90]
        .iter()
        .map(|&q| {
            let (partial, mask) = truncate_acquisition(&k, q, 45).unwrap();
            edge_error_percent(&homodyne_recon(&partial, &mask).unwrap().image, &truth, &p).unwrap()
        })
        .collect();
    assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
}

#[test]
fn pocs_zero_iterations_is_homodyne() {
    let (k, _) = simulated(64, 0.0, 0);
    let (partial, mask) = truncate_acquisition(&k, 8, 12).unwrap();
    let hd = homodyne_recon(&partial, &mask).unwrap();
    let out = pocs_recon(&partial, &mask, 0, 1e-4).unwrap();
    assert_eq!(out, hd);
    assert!(pocs_recon(&partial, &mask, 5, 0.0).is_err());
}

#[test]
fn pocs_changes_shrink_and_data_is_kept() {
    let (k, truth) = simulated(64, 0.2, 4);
    let (partial, mask) = truncate_acquisition(&k, 6, 10).unwrap();
    let trace = pocs_recon_traced(
        &partial,
        &mask,
        PocsParams {
            max_iters: 15,
            tol: 1e-12,
        },
    )
    .unwrap();
    assert_eq!(trace.changes.len(), 15);
    for w in trace.changes.windows(2) {
        assert!(w[1] <= w[0] * (1.0 + 1e-9), "{:?}", trace.changes);
    }
    let out = &trace.result;
    for r in 0..k.ny() {
        for c in 0..k.nx() {
            if mask.acquired_at(r, c) {
                assert_eq!(out.kspace_filled.at(r, c), partial.at(r, c));
            }
        }
    }
    let hd = homodyne_recon(&partial, &mask).unwrap();
    let e_pocs = rmse(&out.image, &truth, false).unwrap();
    let e_hd = rmse(&hd.image, &truth, false).unwrap();
    assert!(e_pocs <= e_hd * 1.05, "pocs {e_pocs} homodyne {e_hd}");
}

#[test]
fn shape_mismatch_is_rejected() {
    let k = ComplexGrid::zeros(32, 32);
    let other = ComplexGrid::zeros(16, 16);
    let mask = AcquisitionMask::new(&other, 2, 2).unwrap();
    assert!(zero_fill_recon(&k, &mask).is_err());
    assert!(conjugate_synthesis_recon(&k, &mask).is_err());
    assert!(homodyne_recon(&k, &mask).is_err());
    let _ = RealImage::zeros(1, 1);
}
