use std::path::Path;
use std::process::{Command, Output};

use kspace_extrap::kspace::{io, ComplexGrid};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kspace-extrap"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn simulate(dir: &Path, n: &str) {
    ok(
        dir,
        &[
            "simulate",
            "--n",
            n,
            "--out-kspace",
            "full.cks",
            "--out-truth",
            "truth.cks",
        ],
    );
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn zerofill_on_complete_data_matches_truth() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    simulate(d, "64");
    let complete = ["--q", "32", "--m", "32"];
    let mut recon = vec!["recon", "--input", "full.cks", "--method", "zerofill"];
    recon.extend(complete);
    recon.extend(["--out-image", "zf.cks", "--out-kspace", "zf_k.cks"]);
    ok(d, &recon);
    let mut metrics = vec![
        "metrics",
        "--image",
        "zf.cks",
        "--truth",
        "truth.cks",
        "--method",
        "zerofill",
    ];
    metrics.extend(complete);
    metrics.extend(["--out", "zf.csv"]);
    ok(d, &metrics);
    let text = std::fs::read_to_string(d.join("zf.csv")).unwrap();
    assert!(text.starts_with("method,q,m,rmse,cnr,edge_error\n"));
    let row = &csv_rows(&d.join("zf.csv"))[0];
    assert_eq!(&row[..3], ["zerofill", "32", "32"]);
    assert!(row[3].parse::<f64>().unwrap() < 1e-3);
    for f in ["zf.cks", "zf_k.cks", "zf.csv", "full.cks", "truth.cks"] {
        let meta = std::fs::read_to_string(d.join(format!("{f}.meta"))).unwrap();
        assert!(meta.contains("command = "), "{f}");
    }
    let meta = std::fs::read_to_string(d.join("zf.cks.meta")).unwrap();
    assert!(meta.contains("method = zerofill\n") && meta.contains("q = 32\n"));
}

#[test]
fn compare_sweep_row_counts() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    simulate(d, "255");
    ok(
        d,
        &[
            "compare",
            "--input",
            "full.cks",
            "--truth",
            "truth.cks",
            "--methods",
            "homodyne,fir",
            "--q-list",
            "10,30,90",
            "--m",
            "45",
            "--out-dir",
            "cmp",
        ],
    );
    for (file, metric) in [
        ("edge_error.csv", "edge_error_percent"),
        ("cnr.csv", "cnr"),
        ("rmse.csv", "rmse"),
    ] {
        let path = d.join("cmp").join(file);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("q,method,metric,value\n"));
        let rows = csv_rows(&path);
        assert_eq!(rows.len(), 6, "{file}");
        for r in &rows {
            assert_eq!(r[2], metric);
            let digits = r[3].split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(digits.len(), 17);
        }
    }
}

#[test]
fn runs_are_byte_identical() {
    let outputs: Vec<Vec<Vec<u8>>> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let d = dir.path();
            ok(
                d,
                &[
                    "simulate",
                    "--n",
                    "64",
                    "--noise-std",
                    "0.2",
                    "--seed",
                    "11",
                    "--out-kspace",
                    "full.cks",
                    "--out-truth",
                    "truth.cks",
                ],
            );
            ok(
                d,
                &[
                    "mask", "--input", "full.cks", "--q", "6", "--m", "10", "--out", "part.cks",
                ],
            );
            ok(
                d,
                &[
                    "recon",
                    "--input",
                    "part.cks",
                    "--method",
                    "fir",
                    "--q",
                    "6",
                    "--m",
                    "10",
                    "--out-image",
                    "fir.cks",
                ],
            );
            ["full.cks", "part.cks", "fir.cks", "fir.cks.meta"]
                .iter()
                .map(|f| std::fs::read(d.join(f)).unwrap())
                .collect()
        })
        .collect();
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn config_file_supplies_settings_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    simulate(d, "64");
    std::fs::write(
        d.join("run.cfg"),
        "# lp sweep\ninput = full.cks\nmethod = lp-proj\nq = 8\nm = 12\nsteps = 4\nout-image = a.cks\n",
    )
    .unwrap();
    ok(d, &["--config", "run.cfg", "recon"]);
    ok(
        d,
        &[
            "recon",
            "--config",
            "run.cfg",
            "--steps",
            "6",
            "--out-image",
            "b.cks",
        ],
    );
    let a = std::fs::read_to_string(d.join("a.cks.meta")).unwrap();
    let b = std::fs::read_to_string(d.join("b.cks.meta")).unwrap();
    assert!(a.contains("steps = 4\n") && b.contains("steps = 6\n"));
    assert!(b.contains("method = lp-proj\n"));
    assert_ne!(
        std::fs::read(d.join("a.cks")).unwrap(),
        std::fs::read(d.join("b.cks")).unwrap()
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    simulate(d, "64");
    let code = |args: &[&str]| {
        let out = run(d, args);
        let stderr = String::from_utf8_lossy(&out.stderr).into_owned();
        assert_eq!(stderr.trim_end().lines().count(), 1, "{stderr}");
        out.status.code().unwrap()
    };
    assert_eq!(code(&["recon", "--no-such-flag"]), 1);
    assert_eq!(
        code(&[
            "recon",
            "--input",
            "full.cks",
            "--q",
            "4",
            "--m",
            "4",
            "--out-image",
            "x.cks"
        ]),
        1
    );
    assert_eq!(
        code(&[
            "recon",
            "--input",
            "full.cks",
            "--method",
            "homodyne",
            "--q",
            "90",
            "--m",
            "4",
            "--out-image",
            "x.cks"
        ]),
        1
    );
    assert_eq!(
        code(&[
            "recon",
            "--input",
            "full.cks",
            "--method",
            "homodyne",
            "--q",
            "4",
            "--m",
            "4",
            "--out-image",
            "full.cks"
        ]),
        1
    );
    std::fs::write(d.join("bad.cfg"), "colour = red\n").unwrap();
    assert_eq!(code(&["--config", "bad.cfg", "recon"]), 1);
    assert_eq!(
        code(&[
            "recon",
            "--input",
            "missing.cks",
            "--method",
            "homodyne",
            "--q",
            "4",
            "--m",
            "4",
            "--out-image",
            "x.cks"
        ]),
        2
    );
    std::fs::write(d.join("junk.cks"), b"not a grid").unwrap();
    assert_eq!(
        code(&[
            "recon",
            "--input",
            "junk.cks",
            "--method",
            "homodyne",
            "--q",
            "4",
            "--m",
            "4",
            "--out-image",
            "x.cks"
        ]),
        2
    );
    io::save(&ComplexGrid::zeros(64, 64), d.join("flat.cks")).unwrap();
    assert_eq!(
        code(&[
            "metrics",
            "--image",
            "flat.cks",
            "--truth",
            "truth.cks",
            "--method",
            "none",
            "--q",
            "4",
            "--m",
            "4",
            "--out",
            "f.csv"
        ]),
        3
    );
    assert!(!d.join("f.csv").exists());
}
