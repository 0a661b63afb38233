//! C ABI over `kspace_extrap`.
//!
//! Grids and images are opaque heap handles created by `kx_*_new`/`kx_*_read`
//! style constructors and released with the matching `*_free`. Every fallible
//! call returns a [`KxStatus`]; on failure `kx_last_error` holds a message for
//! the calling thread until its next failing call.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use kspace_extrap::kspace::{io, ComplexGrid, RealImage};
use kspace_extrap::kspace::{to_image, AcquisitionMask};
use kspace_extrap::metrics::{edge_error_percent, rmse, CannyParams};
use kspace_extrap::recon::{reconstruct, Method, ReconOptions};
use kspace_extrap::sim::{brain_phantom, simulate_spin_echo, truncate_acquisition, SequenceParams};
use kspace_extrap::Error;

use num_complex::Complex64;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ShapeMismatch = 3,
    Degenerate = 4,
    Numerical = 5,
    Format = 6,
    Io = 7,
    Panic = 8,
}

/// Complex k-space grid.
pub struct KxGrid(ComplexGrid);

/// Real image.
pub struct KxImage(RealImage);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> KxStatus {
    match e {
        Error::ShapeMismatch { .. } => KxStatus::ShapeMismatch,
        Error::InvalidParameter(_) => KxStatus::InvalidArgument,
        Error::Degenerate(_) => KxStatus::Degenerate,
        Error::Numerical(_) => KxStatus::Numerical,
        Error::Format(_) => KxStatus::Format,
        Error::Io(_) => KxStatus::Io,
    }
}

struct Fail(KxStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(KxStatus::NullPointer, format!("{what} is null"))
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> KxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KxStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            KxStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(KxStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message of the calling thread's most recent failure; empty if none.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn kx_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn kx_status_name(status: KxStatus) -> *const c_char {
    let s: &'static CStr = match status {
        KxStatus::Ok => c"ok",
        KxStatus::NullPointer => c"null pointer",
        KxStatus::InvalidArgument => c"invalid argument",
        KxStatus::ShapeMismatch => c"shape mismatch",
        KxStatus::Degenerate => c"degenerate",
        KxStatus::Numerical => c"numerical failure",
        KxStatus::Format => c"format error",
        KxStatus::Io => c"i/o error",
        KxStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// Zero grid with centered indexing.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kx_grid_new(ny: usize, nx: usize, out: *mut *mut KxGrid) -> KxStatus {
    guard(|| {
        if ny == 0 || nx == 0 {
            return Err(Fail(KxStatus::InvalidArgument, "empty grid".into()));
        }
        write_out(out, boxed(KxGrid(ComplexGrid::zeros(ny, nx))), "out")
    })
}

/// Grid from `ny*nx` row-major real and imaginary parts. `im` may be null
/// for a real grid.
///
/// # Safety
/// `re` (and `im` if non-null) must point to `ny*nx` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kx_grid_from_parts(
    ny: usize,
    nx: usize,
    re: *const f64,
    im: *const f64,
    out: *mut *mut KxGrid,
) -> KxStatus {
    guard(|| {
        if re.is_null() {
            return Err(null("re"));
        }
        let len = ny
            .checked_mul(nx)
            .ok_or_else(|| Fail(KxStatus::InvalidArgument, "size overflow".into()))?;
        let re = std::slice::from_raw_parts(re, len);
        let data = if im.is_null() {
            re.iter().map(|&r| Complex64::new(r, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, len);
            re.iter()
                .zip(im)
                .map(|(&r, &i)| Complex64::new(r, i))
                .collect()
        };
        let g = ComplexGrid::from_vec(ny, nx, data)?;
        write_out(out, boxed(KxGrid(g)), "out")
    })
}

/// # Safety
/// `grid` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn kx_grid_free(grid: *mut KxGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Duplicate a grid.
///
/// # Safety
/// `grid` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kx_grid_clone(grid: *const KxGrid, out: *mut *mut KxGrid) -> KxStatus {
    guard(|| {
        let g = borrow(grid, "grid")?;
        write_out(out, boxed(KxGrid(g.0.clone())), "out")
    })
}

/// Dimensions and center indices. Any output pointer may be null.
///
/// # Safety
/// `grid` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn kx_grid_dims(
    grid: *const KxGrid,
    ny: *mut usize,
    nx: *mut usize,
    center_k: *mut usize,
    center_n: *mut usize,
) -> KxStatus {
    guard(|| {
        let g = &borrow(grid, "grid")?.0;
        for (p, v) in [
            (ny, g.ny()),
            (nx, g.nx()),
            (center_k, g.center_k()),
            (center_n, g.center_n()),
        ] {
            if !p.is_null() {
                p.write(v);
            }
        }
        Ok(())
    })
}

/// Copy samples into caller buffers of `len == ny*nx` doubles each.
///
/// # Safety
/// `re` and `im` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn kx_grid_copy_data(
    grid: *const KxGrid,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> KxStatus {
    guard(|| {
        let g = &borrow(grid, "grid")?.0;
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        if len != g.data().len() {
            return Err(Fail(
                KxStatus::ShapeMismatch,
                format!("buffer length {len}, grid has {}", g.data().len()),
            ));
        }
        let (re, im) = (
            std::slice::from_raw_parts_mut(re, len),
            std::slice::from_raw_parts_mut(im, len),
        );
        for ((r, i), z) in re.iter_mut().zip(im.iter_mut()).zip(g.data()) {
            *r = z.re;
            *i = z.im;
        }
        Ok(())
    })
}

/// Read a CKS1 file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kx_grid_read(path: *const c_char, out: *mut *mut KxGrid) -> KxStatus {
    guard(|| {
        let g = io::load(c_str(path, "path")?)?;
        write_out(out, boxed(KxGrid(g)), "out")
    })
}

/// Write a CKS1 file.
///
/// # Safety
/// `grid` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn kx_grid_write(grid: *const KxGrid, path: *const c_char) -> KxStatus {
    guard(|| {
        let g = borrow(grid, "grid")?;
        io::save(&g.0, c_str(path, "path")?)?;
        Ok(())
    })
}

/// # Safety
/// `image` must come from this library and not be used afterwards; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn kx_image_free(image: *mut KxImage) {
    if !image.is_null() {
        drop(Box::from_raw(image));
    }
}

/// Image from `ny*nx` row-major values.
///
/// # Safety
/// `data` must point to `ny*nx` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kx_image_from_data(
    ny: usize,
    nx: usize,
    data: *const f64,
    out: *mut *mut KxImage,
) -> KxStatus {
    guard(|| {
        if data.is_null() {
            return Err(null("data"));
        }
        let len = ny
            .checked_mul(nx)
            .ok_or_else(|| Fail(KxStatus::InvalidArgument, "size overflow".into()))?;
        let v = std::slice::from_raw_parts(data, len).to_vec();
        write_out(out, boxed(KxImage(RealImage::new(ny, nx, v)?)), "out")
    })
}

/// # Safety
/// `image` must be a live handle; outputs may be null.
#[no_mangle]
pub unsafe extern "C" fn kx_image_dims(
    image: *const KxImage,
    ny: *mut usize,
    nx: *mut usize,
) -> KxStatus {
    guard(|| {
        let img = &borrow(image, "image")?.0;
        for (p, v) in [(ny, img.ny()), (nx, img.nx())] {
            if !p.is_null() {
                p.write(v);
            }
        }
        Ok(())
    })
}

/// # Safety
/// `data` must be writable for `len == ny*nx` doubles.
#[no_mangle]
pub unsafe extern "C" fn kx_image_copy_data(
    image: *const KxImage,
    data: *mut f64,
    len: usize,
) -> KxStatus {
    guard(|| {
        let img = &borrow(image, "image")?.0;
        if data.is_null() {
            return Err(null("data"));
        }
        if len != img.data().len() {
            return Err(Fail(
                KxStatus::ShapeMismatch,
                format!("buffer length {len}, image has {}", img.data().len()),
            ));
        }
        std::slice::from_raw_parts_mut(data, len).copy_from_slice(img.data());
        Ok(())
    })
}

/// Simulate `n`×`n` spin-echo k-space of the brain phantom with default
/// sequence parameters. `out_truth` (nullable) receives the noiseless
/// magnitude image.
///
/// # Safety
/// `out_kspace` must be writable; `out_truth` writable or null.
#[no_mangle]
pub unsafe extern "C" fn kx_simulate(
    n: usize,
    noise_std: f64,
    seed: u64,
    out_kspace: *mut *mut KxGrid,
    out_truth: *mut *mut KxImage,
) -> KxStatus {
    guard(|| {
        if out_kspace.is_null() {
            return Err(null("out_kspace"));
        }
        let tissue = brain_phantom(n)?;
        let seq = SequenceParams::default();
        let clean = simulate_spin_echo(&tissue, &seq, 0.0, seed)?;
        let truth = to_image(&clean).magnitude();
        let k = if noise_std > 0.0 {
            simulate_spin_echo(&tissue, &seq, noise_std, seed)?
        } else {
            clean
        };
        out_kspace.write(boxed(KxGrid(k)));
        if !out_truth.is_null() {
            out_truth.write(boxed(KxImage(truth)));
        }
        Ok(())
    })
}

/// Keep lines `k >= -q` and samples `n >= -m`, zeroing the rest.
///
/// # Safety
/// `full` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kx_truncate(
    full: *const KxGrid,
    q: usize,
    m: usize,
    out: *mut *mut KxGrid,
) -> KxStatus {
    guard(|| {
        let (p, _) = truncate_acquisition(&borrow(full, "full")?.0, q, m)?;
        write_out(out, boxed(KxGrid(p)), "out")
    })
}

/// Reconstruct with the named method (`zerofill`, `conjsym`, `homodyne`,
/// `pocs`, `lp`, `lp-fixed`, `lp-proj`, `fir`) and default parameters;
/// `steps` is used by the linear-prediction methods. `out_kspace` may be null.
///
/// # Safety
/// `partial` must be a live handle, `method` a NUL-terminated string,
/// `out_image` writable, `out_kspace` writable or null.
#[no_mangle]
pub unsafe extern "C" fn kx_recon(
    partial: *const KxGrid,
    q: usize,
    m: usize,
    method: *const c_char,
    steps: usize,
    out_image: *mut *mut KxImage,
    out_kspace: *mut *mut KxGrid,
) -> KxStatus {
    guard(|| {
        let g = &borrow(partial, "partial")?.0;
        let method: Method = c_str(method, "method")?.parse()?;
        if out_image.is_null() {
            return Err(null("out_image"));
        }
        let mask = AcquisitionMask::new(g, q, m)?;
        let opts = ReconOptions {
            steps,
            ..ReconOptions::default()
        };
        let r = reconstruct(method, g, &mask, &opts)?;
        out_image.write(boxed(KxImage(r.image)));
        if !out_kspace.is_null() {
            out_kspace.write(boxed(KxGrid(r.kspace_filled)));
        }
        Ok(())
    })
}

/// RMS difference; relative to the RMS of `b` when `normalize` is true.
///
/// # Safety
/// `a`, `b` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kx_rmse(
    a: *const KxImage,
    b: *const KxImage,
    normalize: bool,
    out: *mut f64,
) -> KxStatus {
    guard(|| {
        let v = rmse(&borrow(a, "a")?.0, &borrow(b, "b")?.0, normalize)?;
        write_out(out, v, "out")
    })
}

/// Percentage of reference Canny edge pixels that differ, default detector.
///
/// # Safety
/// `recon`, `reference` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn kx_edge_error_percent(
    recon: *const KxImage,
    reference: *const KxImage,
    out: *mut f64,
) -> KxStatus {
    guard(|| {
        let v = edge_error_percent(
            &borrow(recon, "recon")?.0,
            &borrow(reference, "reference")?.0,
            &CannyParams::default(),
        )?;
        write_out(out, v, "out")
    })
}
