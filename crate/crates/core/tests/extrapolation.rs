mod common;

use common::simulated;
use kspace_extrap::kspace::{frequency_weight, AcquisitionMask, ComplexGrid, GeometryParams};
use kspace_extrap::lp::{extrapolate, iterated_extrapolate, LpMode};
use kspace_extrap::recon::{homodyne_recon, lp_recon, LpVariant};
use kspace_extrap::sim::truncate_acquisition;
use kspace_extrap::subspace::{compensate, compensation_errors, compensation_order};
use num_complex::Complex64;

#[test]
fn predicted_lines_are_populated_at_255() {
    let (k, _) = simulated(255, 0.0, 0);
    let (partial, mask) = truncate_acquisition(&k, 35, 45).unwrap();
    let w = frequency_weight(&partial, &GeometryParams::default());
    let out = iterated_extrapolate(&w, &mask, 30).unwrap();
    for kk in -65..=-36isize {
        let r = out.row_of(kk).unwrap();
        assert!(out.row(r).iter().any(|z| z.norm() > 0.0), "k = {kk}");
    }
    for kk in [-127isize, -66] {
        let r = out.row_of(kk).unwrap();
        assert!(out.row(r).iter().all(|z| z.norm() == 0.0));
    }
    for r in 0..out.ny() {
        if mask.row_acquired(r) {
            assert_eq!(out.row(r), w.row(r));
        }
    }
}

#[test]
fn fixed_and_iterated_differ_but_keep_data() {
    let (k, _) = simulated(64, 0.0, 0);
    let (partial, mask) = truncate_acquisition(&k, 8, 12).unwrap();
    let w = frequency_weight(&partial, &GeometryParams::default());
    let a = extrapolate(&w, &mask, 6, LpMode::Iterated).unwrap();
    let b = extrapolate(&w, &mask, 6, LpMode::Fixed).unwrap();
    assert_ne!(a, b);
    for r in 0..w.ny() {
        if mask.row_acquired(r) {
            assert_eq!(a.row(r), b.row(r));
        }
    }
}

#[test]
fn zero_steps_reduce_to_homodyne() {
    let (k, _) = simulated(64, 0.0, 0);
    let (partial, mask) = truncate_acquisition(&k, 8, 12).unwrap();
    let hd = homodyne_recon(&partial, &mask).unwrap();
    for v in [LpVariant::Iterated, LpVariant::Fixed, LpVariant::Projected] {
        let out = lp_recon(&partial, &mask, 0, &GeometryParams::default(), v).unwrap();
        let diff = out
            .image
            .data()
            .iter()
            .zip(hd.image.data())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-9 * hd.image.max(), "{v:?}: {diff}");
    }
}

#[test]
fn lp_recon_rejects_excess_steps() {
    let (k, _) = simulated(32, 0.0, 0);
    let (partial, mask) = truncate_acquisition(&k, 8, 6).unwrap();
    let geom = GeometryParams::default();
    assert!(lp_recon(&partial, &mask, 9, &geom, LpVariant::Iterated).is_err());
    assert!(lp_recon(&partial, &mask, 8, &geom, LpVariant::Projected).is_ok());
}

#[test]
fn compensation_leaves_acquired_lines() {
    let (k, _) = simulated(64, 0.0, 0);
    let (partial, mask) = truncate_acquisition(&k, 10, 12).unwrap();
    let w = frequency_weight(&partial, &GeometryParams::default());
    let ext = iterated_extrapolate(&w, &mask, 8).unwrap();
    let comp = compensate(&ext, &mask, 8, compensation_order(10, 8)).unwrap();
    let ck = k.center_k();
    for r in 0..k.ny() {
        let predicted = (ck - 18..ck - 10).contains(&r);
        if !predicted {
            assert_eq!(comp.row(r), ext.row(r), "row {r}");
        }
    }
    assert_ne!(comp, ext);
}

#[test]
fn compensation_errors_on_simulated_column() {
    let (k, _) = simulated(64, 0.0, 0);
    let w = frequency_weight(&k, &GeometryParams::default());
    let col = k.center_n() + 3;
    let truth: Vec<Complex64> = (10..20).map(|r| w.at(r, col)).collect();
    let scaled: Vec<Complex64> = truth.iter().map(|z| z * 0.3).collect();
    let (before, after) = compensation_errors(&truth, &scaled, &truth).unwrap();
    let norm2: f64 = truth.iter().map(|z| z.norm_sqr()).sum();
    assert!((before - 0.49 * norm2).abs() < 1e-9 * norm2);
    assert!(after.abs() < 1e-9 * norm2);
}

#[test]
fn shape_checks() {
    let g = ComplexGrid::zeros(32, 32);
    let other = AcquisitionMask::new(&ComplexGrid::zeros(16, 16), 2, 2).unwrap();
    assert!(iterated_extrapolate(&g, &other, 1).is_err());
    assert!(compensate(&g, &other, 1, 1).is_err());
}
