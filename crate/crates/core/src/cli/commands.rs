use std::path::{Path, PathBuf};

use kspace_extrap::fir::FirParams;
use kspace_extrap::kspace::{
    apply_mask, to_image, AcquisitionMask, ComplexGrid, GeometryParams, RealImage,
};
use kspace_extrap::metrics::{cnr, edge_error_percent, parse_roi_text, rmse, CannyParams, RoiSpec};
use kspace_extrap::nlm::NlmParams;
use kspace_extrap::recon::{reconstruct, Method, PocsParams, ReconOptions};
use kspace_extrap::sim::{
    brain_phantom, simulate_spin_echo, truncate_acquisition, PhantomGeometry, SequenceParams,
};
use rayon::prelude::*;

use super::config::{ConfigFile, List, Resolver};
use super::error::{CliError, CliResult};
use super::output::{fmt_num, read_grid, Outputs};
use super::{CompareArgs, MaskArgs, MethodArgs, MetricsArgs, ReconArgs, SimulateArgs};

fn as_string(p: Option<PathBuf>) -> Option<String> {
    p.map(|p| p.to_string_lossy().into_owned())
}

fn req_path(r: &mut Resolver, key: &str, flag: Option<PathBuf>) -> CliResult<PathBuf> {
    r.req::<String>(key, as_string(flag)).map(PathBuf::from)
}

fn opt_path(r: &mut Resolver, key: &str, flag: Option<PathBuf>) -> CliResult<Option<PathBuf>> {
    Ok(r.opt::<String>(key, as_string(flag))?.map(PathBuf::from))
}

/// Reject outputs that would overwrite an input or each other.
fn distinct(inputs: &[&Path], outputs: &[&Path]) -> CliResult<()> {
    for (i, o) in outputs.iter().enumerate() {
        if inputs.contains(o) || outputs[..i].contains(o) {
            return Err(CliError::config(format!(
                "output path {} collides with another path",
                o.display()
            )));
        }
    }
    Ok(())
}

pub fn simulate(a: SimulateArgs, file: &ConfigFile) -> CliResult<()> {
    let mut r = Resolver::new(file);
    let n = r.or("n", a.n, 128usize)?;
    let noise = r.or("noise-std", a.noise_std, 0.0f64)?;
    let seed = r.or("seed", a.seed, 0u64)?;
    let d = SequenceParams::default();
    let seq = SequenceParams {
        te_ms: r.or("te-ms", a.te_ms, d.te_ms)?,
        trep_ms: r.or("tr-ms", a.tr_ms, d.trep_ms)?,
        alpha_deg: r.or("alpha-deg", a.alpha_deg, d.alpha_deg)?,
        n_spins: r.or("n-spins", a.n_spins, d.n_spins)?,
        bandwidth_hz: r.opt("bandwidth-hz", a.bandwidth_hz)?,
        fov_cm: r.or("fov-cm", a.fov_cm, d.fov_cm)?,
        delta_t_ms: r.or("delta-t-ms", a.delta_t_ms, d.delta_t_ms)?,
        ..d
    };
    let out_k = req_path(&mut r, "out-kspace", a.out_kspace)?;
    let out_t = req_path(&mut r, "out-truth", a.out_truth)?;
    distinct(&[], &[&out_k, &out_t])?;

    let tissue = brain_phantom(n)?;
    let clean = simulate_spin_echo(&tissue, &seq, 0.0, seed)?;
    let truth = to_image(&clean).magnitude();
    let full = if noise > 0.0 {
        simulate_spin_echo(&tissue, &seq, noise, seed)?
    } else {
        clean
    };
    let out = Outputs::new("simulate", r.into_settings());
    out.grid(&out_k, "full k-space", &full)?;
    out.image(&out_t, "noiseless truth image", &truth)
}

pub fn mask(a: MaskArgs, file: &ConfigFile) -> CliResult<()> {
    let mut r = Resolver::new(file);
    let input = req_path(&mut r, "input", a.input)?;
    let q = r.req("q", a.q)?;
    let m = r.req("m", a.m)?;
    let out_p = req_path(&mut r, "out", a.out)?;
    distinct(&[&input], &[&out_p])?;

    let full = read_grid(&input)?;
    let (partial, _) = truncate_acquisition(&full, q, m)?;
    Outputs::new("mask", r.into_settings()).grid(&out_p, "partial k-space", &partial)
}

fn recon_options(r: &mut Resolver, p: MethodArgs) -> CliResult<ReconOptions> {
    let dg = GeometryParams::default();
    let fov = r.or("fov-cm", p.fov_cm, dg.fov_x())?;
    let dt = r.or("delta-t-ms", p.delta_t_ms, dg.delta_t())?;
    let dn = NlmParams::default();
    let dp = PocsParams::default();
    Ok(ReconOptions {
        steps: r.or("steps", p.steps, 0usize)?,
        geometry: GeometryParams::new(fov, fov, dt)?,
        pocs: PocsParams {
            max_iters: r.or("pocs-iters", p.pocs_iters, dp.max_iters)?,
            tol: r.or("pocs-tol", p.pocs_tol, dp.tol)?,
        },
        fir: FirParams {
            order: r.opt("fir-order", p.fir_order)?,
            nlm: NlmParams {
                t: r.or("nlm-t", p.nlm_t, dn.t)?,
                f: r.or("nlm-f", p.nlm_f, dn.f)?,
                h: r.opt("nlm-h", p.nlm_h)?,
            },
        },
    })
}

pub fn recon(a: ReconArgs, file: &ConfigFile) -> CliResult<()> {
    let mut r = Resolver::new(file);
    let input = req_path(&mut r, "input", a.input)?;
    let method: Method = r.req("method", a.method)?;
    let q = r.req("q", a.q)?;
    let m = r.req("m", a.m)?;
    let opts = recon_options(&mut r, a.params)?;
    let out_i = req_path(&mut r, "out-image", a.out_image)?;
    let out_k = opt_path(&mut r, "out-kspace", a.out_kspace)?;
    let mut outs = vec![out_i.as_path()];
    outs.extend(out_k.as_deref());
    distinct(&[&input], &outs)?;

    let grid = read_grid(&input)?;
    let mask = AcquisitionMask::new(&grid, q, m)?;
    let partial = apply_mask(&grid, &mask)?;
    let result = reconstruct(method, &partial, &mask, &opts)?;
    r.record("iterations", result.iterations);
    let out = Outputs::new("recon", r.into_settings());
    out.image(&out_i, "reconstructed image", &result.image)?;
    if let Some(p) = out_k {
        out.grid(&p, "filled k-space", &result.kspace_filled)?;
    }
    Ok(())
}

struct Scores {
    rmse: f64,
    cnr: f64,
    edge_error: f64,
}

/// The ROI file supplies, in order, the two contrast ROIs and the noise ROI.
/// Without one the phantom's gray, white and background ROIs are used.
fn load_rois(path: Option<&Path>, ny: usize, nx: usize) -> CliResult<[RoiSpec; 3]> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            let rois = parse_roi_text(&text, ny, nx)?;
            <[RoiSpec; 3]>::try_from(rois).map_err(|v| {
                CliError::config(format!(
                    "ROI file needs exactly 3 labels, found {}",
                    v.len()
                ))
            })
        }
        None if ny == nx && ny >= 32 => {
            let g = PhantomGeometry::new(ny);
            Ok([g.gray_roi(), g.white_roi(), g.noise_roi()])
        }
        None => Err(CliError::config(format!(
            "default ROIs need a square phantom image, got {ny}x{nx}; pass --roi"
        ))),
    }
}

fn score(image: &RealImage, truth: &RealImage, rois: &[RoiSpec; 3]) -> CliResult<Scores> {
    Ok(Scores {
        rmse: rmse(image, truth, true)?,
        cnr: cnr(image, &rois[0], &rois[1], &rois[2])?,
        edge_error: edge_error_percent(image, truth, &CannyParams::default())?,
    })
}

fn read_image(path: &Path) -> CliResult<RealImage> {
    Ok(read_grid(path)?.real_part())
}

pub fn metrics(a: MetricsArgs, file: &ConfigFile) -> CliResult<()> {
    let mut r = Resolver::new(file);
    let image_p = req_path(&mut r, "image", a.image)?;
    let truth_p = req_path(&mut r, "truth", a.truth)?;
    let method: String = r.req("method", a.method)?;
    let q: usize = r.req("q", a.q)?;
    let m: usize = r.req("m", a.m)?;
    let roi_p = opt_path(&mut r, "roi", a.roi)?;
    let out_p = req_path(&mut r, "out", a.out)?;
    let mut ins = vec![image_p.as_path(), truth_p.as_path()];
    ins.extend(roi_p.as_deref());
    distinct(&ins, &[&out_p])?;

    let image = read_image(&image_p)?;
    let truth = read_image(&truth_p)?;
    let rois = load_rois(roi_p.as_deref(), truth.ny(), truth.nx())?;
    let s = score(&image, &truth, &rois)?;
    let csv = format!(
        "method,q,m,rmse,cnr,edge_error\n{method},{q},{m},{},{},{}\n",
        fmt_num(s.rmse),
        fmt_num(s.cnr),
        fmt_num(s.edge_error)
    );
    Outputs::new("metrics", r.into_settings()).write(&out_p, "metrics csv", csv.as_bytes())
}

/// Output file name and metric label for each compare CSV.
const COMPARE_FILES: [(&str, &str); 3] = [
    ("edge_error.csv", "edge_error_percent"),
    ("cnr.csv", "cnr"),
    ("rmse.csv", "rmse"),
];

pub fn compare(a: CompareArgs, file: &ConfigFile) -> CliResult<()> {
    let mut r = Resolver::new(file);
    let input = req_path(&mut r, "input", a.input)?;
    let truth_p = req_path(&mut r, "truth", a.truth)?;
    let methods: List<Method> = r.req("methods", a.methods)?;
    let qs: List<usize> = r.req("q-list", a.q_list)?;
    let m: usize = r.req("m", a.m)?;
    let opts = recon_options(&mut r, a.params)?;
    let roi_p = opt_path(&mut r, "roi", a.roi)?;
    let dir = req_path(&mut r, "out-dir", a.out_dir)?;

    let full: ComplexGrid = read_grid(&input)?;
    let truth = read_image(&truth_p)?;
    let rois = load_rois(roi_p.as_deref(), truth.ny(), truth.nx())?;
    let cells: Vec<(usize, Method)> =
        qs.0.iter()
            .flat_map(|&q| methods.0.iter().map(move |&me| (q, me)))
            .collect();
    let scores = cells
        .par_iter()
        .map(|&(q, method)| {
            let (partial, mask) = truncate_acquisition(&full, q, m)?;
            let result = reconstruct(method, &partial, &mask, &opts)?;
            score(&result.image, &truth, &rois)
        })
        .collect::<CliResult<Vec<Scores>>>()?;

    std::fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let out = Outputs::new("compare", r.into_settings());
    for (i, (name, metric)) in COMPARE_FILES.iter().enumerate() {
        let mut csv = String::from("q,method,metric,value\n");
        for (&(q, method), s) in cells.iter().zip(&scores) {
            let v = [s.edge_error, s.cnr, s.rmse][i];
            csv.push_str(&format!("{q},{method},{metric},{}\n", fmt_num(v)));
        }
        out.write(&dir.join(name), &format!("{metric} sweep"), csv.as_bytes())?;
    }
    Ok(())
}
