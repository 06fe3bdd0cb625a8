//! C ABI for `sphw`.
//!
//! Every fallible function returns an [`SphwStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and
//! can be copied out with [`sphw_last_error_message`]. Objects cross the
//! boundary as opaque handles owned by the caller, who releases them with
//! the matching `_free` function. Panics never unwind into C; they are
//! reported as `SPHW_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use sphw::benchmarks::{run_droplet, run_shocktube, DropletConfig, Experiment, ShockTubeConfig};
use sphw::integrator::SnapshotSeries;
use sphw::kernels::Dimension;
use sphw::transport::{convergence_rates, wasserstein1, DiscreteMeasure};
use sphw::vector::Vec2;
use sphw::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SphwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Numeric = 4,
    Io = 5,
    Panic = 6,
}

/// A discrete probability measure on the line or the plane.
pub struct SphwMeasure(DiscreteMeasure);

/// Snapshot series of a finished experiment run.
pub struct SphwSeries(SnapshotSeries);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> SphwStatus {
    match err {
        Error::Domain(_) | Error::Transport(_) => SphwStatus::Domain,
        Error::Numeric { .. } | Error::Integration { .. } => SphwStatus::Numeric,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) | Error::Toml(_) | Error::Format(_) => SphwStatus::Io,
        _ => SphwStatus::InvalidArgument,
    }
}

enum Failure {
    Null(&'static str),
    Invalid(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> SphwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            SphwStatus::Ok
        }
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer: {what}"));
            SphwStatus::NullPointer
        }
        Ok(Err(Failure::Invalid(msg))) => {
            set_error(msg);
            SphwStatus::InvalidArgument
        }
        Ok(Err(Failure::Lib(e))) => {
            let status = status_of(&e);
            set_error(e.to_string());
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            SphwStatus::Panic
        }
    }
}

fn non_null<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    // SAFETY: callers pass pointers obtained from this library or valid
    // C objects; null is rejected here.
    unsafe { p.as_ref() }.ok_or(Failure::Null(what))
}

fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    // SAFETY: as above, for a writable location.
    unsafe { p.as_mut() }.ok_or(Failure::Null(what))
}

fn array<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    // SAFETY: the caller guarantees `len` readable elements at `p`.
    Ok(unsafe { slice::from_raw_parts(p, len) })
}

fn dimension(dim: u32) -> Result<Dimension, Failure> {
    match dim {
        1 => Ok(Dimension::One),
        2 => Ok(Dimension::Two),
        d => Err(Failure::Invalid(format!("dimension must be 1 or 2, got {d}"))),
    }
}

/// Copies the last error message of the calling thread into `buf`
/// (NUL-terminated, truncated to `len - 1` bytes) and returns the full
/// message length in bytes, excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sphw_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            // SAFETY: `n < len` bytes fit in the caller's buffer.
            unsafe {
                ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
        }
        msg.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sphw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a measure from `n` points (`dim` coordinates each, row-major)
/// and `n` weights summing to one.
///
/// # Safety
/// `points` must hold `n * dim` doubles, `weights` `n` doubles, and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn sphw_measure_new(
    points: *const f64,
    weights: *const f64,
    n: usize,
    dim: u32,
    out_measure: *mut *mut SphwMeasure,
) -> SphwStatus {
    guard(|| {
        let slot = out(out_measure, "out_measure")?;
        *slot = ptr::null_mut();
        let d = dimension(dim)?;
        let stride = dim as usize;
        let coords = array(points, n.checked_mul(stride).ok_or(Failure::Invalid("size overflow".into()))?, "points")?;
        let w = array(weights, n, "weights")?;
        let pts = coords
            .chunks_exact(stride)
            .map(|c| match d {
                Dimension::One => Vec2::new(c[0], 0.0),
                Dimension::Two => Vec2::new(c[0], c[1]),
            })
            .collect();
        let measure = DiscreteMeasure::new(pts, w.to_vec())?;
        *slot = Box::into_raw(Box::new(SphwMeasure(measure)));
        Ok(())
    })
}

/// # Safety
/// `measure` must be null or a handle from [`sphw_measure_new`] not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn sphw_measure_free(measure: *mut SphwMeasure) {
    if !measure.is_null() {
        // SAFETY: the handle was created by Box::into_raw.
        drop(unsafe { Box::from_raw(measure) });
    }
}

/// Exact 1-Wasserstein distance between two measures.
///
/// # Safety
/// Handles must be live; `out_distance` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sphw_wasserstein1(
    mu: *const SphwMeasure,
    nu: *const SphwMeasure,
    out_distance: *mut f64,
) -> SphwStatus {
    guard(|| {
        let slot = out(out_distance, "out_distance")?;
        let (mu, nu) = (non_null(mu, "mu")?, non_null(nu, "nu")?);
        *slot = wasserstein1(&mu.0, &nu.0)?.distance;
        Ok(())
    })
}

/// Empirical rates `C` from `n_m` sup-distances and `n_m + 1` increasing
/// resolutions. Writes `n_m - 1` values; an undefined rate is NaN.
///
/// # Safety
/// `m` must hold `n_m` doubles, `n` `n_m + 1` sizes and `out_rates`
/// `n_m - 1` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn sphw_convergence_rates(
    m: *const f64,
    n_m: usize,
    n: *const usize,
    out_rates: *mut f64,
) -> SphwStatus {
    guard(|| {
        if n_m < 2 {
            return Err(Failure::Invalid("need at least two distances".into()));
        }
        let m = array(m, n_m, "m")?;
        let n = array(n, n_m + 1, "n")?;
        if out_rates.is_null() {
            return Err(Failure::Null("out_rates"));
        }
        let rates = convergence_rates(m, n)?;
        // SAFETY: the caller provides n_m - 1 writable doubles.
        let dst = unsafe { slice::from_raw_parts_mut(out_rates, rates.len()) };
        for (d, r) in dst.iter_mut().zip(rates) {
            *d = r.unwrap_or(f64::NAN);
        }
        Ok(())
    })
}

/// Runs an experiment (`"droplet"` or `"shocktube"`) at resolution `level`
/// (lattice size or particle count). `config_toml` may be null or a TOML
/// table overriding fields of the experiment configuration.
///
/// # Safety
/// Strings must be NUL-terminated; `out_series` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sphw_run_experiment(
    experiment: *const c_char,
    level: usize,
    config_toml: *const c_char,
    out_series: *mut *mut SphwSeries,
) -> SphwStatus {
    guard(|| {
        let slot = out(out_series, "out_series")?;
        *slot = ptr::null_mut();
        if experiment.is_null() {
            return Err(Failure::Null("experiment"));
        }
        // SAFETY: non-null, NUL-terminated per the contract.
        let name = unsafe { CStr::from_ptr(experiment) }
            .to_str()
            .map_err(|e| Failure::Invalid(e.to_string()))?;
        let overrides = if config_toml.is_null() {
            ""
        } else {
            // SAFETY: as above.
            unsafe { CStr::from_ptr(config_toml) }
                .to_str()
                .map_err(|e| Failure::Invalid(e.to_string()))?
        };
        let series = match name.parse::<Experiment>()? {
            Experiment::Droplet => {
                let mut cfg: DropletConfig = toml::from_str(overrides).map_err(Error::from)?;
                cfg.sites_per_diameter =
                    u32::try_from(level).map_err(|_| Failure::Invalid(format!("lattice size {level} out of range")))?;
                run_droplet(&cfg)?.series
            }
            Experiment::Shocktube => {
                let mut cfg: ShockTubeConfig = toml::from_str(overrides).map_err(Error::from)?;
                cfg.n = level;
                run_shocktube(&cfg)?
            }
        };
        *slot = Box::into_raw(Box::new(SphwSeries(series)));
        Ok(())
    })
}

/// # Safety
/// `series` must be null or a live handle from [`sphw_run_experiment`].
#[no_mangle]
pub unsafe extern "C" fn sphw_series_free(series: *mut SphwSeries) {
    if !series.is_null() {
        // SAFETY: the handle was created by Box::into_raw.
        drop(unsafe { Box::from_raw(series) });
    }
}

/// Number of snapshots and particles per snapshot.
///
/// # Safety
/// `series` must be live; out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn sphw_series_shape(
    series: *const SphwSeries,
    out_snapshots: *mut usize,
    out_particles: *mut usize,
) -> SphwStatus {
    guard(|| {
        let s = &non_null(series, "series")?.0;
        *out(out_snapshots, "out_snapshots")? = s.len();
        *out(out_particles, "out_particles")? = s.snapshots.first().map_or(0, |sn| sn.state.len());
        Ok(())
    })
}

/// Time of snapshot `k` and its particle data: positions and velocities as
/// `(x, y)` pairs (`y = 0` in 1D), then masses and densities. Each buffer
/// may be null to skip it; non-null buffers must hold `2 N` respectively
/// `N` doubles.
///
/// # Safety
/// `series` must be live and buffers sized as described.
#[no_mangle]
pub unsafe extern "C" fn sphw_series_snapshot(
    series: *const SphwSeries,
    k: usize,
    out_time: *mut f64,
    positions: *mut f64,
    velocities: *mut f64,
    masses: *mut f64,
    densities: *mut f64,
) -> SphwStatus {
    guard(|| {
        let s = &non_null(series, "series")?.0;
        let snap = s
            .snapshots
            .get(k)
            .ok_or_else(|| Failure::Invalid(format!("snapshot {k} of {}", s.len())))?;
        *out(out_time, "out_time")? = snap.time;
        let st = &snap.state;
        let n = st.len();
        let pairs = |dst: *mut f64, src: &[Vec2]| {
            if !dst.is_null() {
                // SAFETY: the caller provides 2 N writable doubles.
                let d = unsafe { slice::from_raw_parts_mut(dst, 2 * n) };
                for (c, v) in d.chunks_exact_mut(2).zip(src) {
                    c[0] = v.x;
                    c[1] = v.y;
                }
            }
        };
        let scalars = |dst: *mut f64, src: &[f64]| {
            if !dst.is_null() {
                // SAFETY: the caller provides N writable doubles.
                unsafe { slice::from_raw_parts_mut(dst, n) }.copy_from_slice(src);
            }
        };
        pairs(positions, &st.positions);
        pairs(velocities, &st.velocities);
        scalars(masses, &st.masses);
        scalars(densities, &st.densities);
        Ok(())
    })
}

/// 1-Wasserstein distance between snapshot `k` of two series, with the
/// normalized particle masses as weights.
///
/// # Safety
/// Handles must be live; `out_distance` writable.
#[no_mangle]
pub unsafe extern "C" fn sphw_series_distance(
    a: *const SphwSeries,
    b: *const SphwSeries,
    k: usize,
    out_distance: *mut f64,
) -> SphwStatus {
    guard(|| {
        let slot = out(out_distance, "out_distance")?;
        let (a, b) = (&non_null(a, "a")?.0, &non_null(b, "b")?.0);
        fn pick(s: &SnapshotSeries, k: usize) -> Result<&sphw::integrator::Snapshot, Failure> {
            s.snapshots
                .get(k)
                .ok_or_else(|| Failure::Invalid(format!("snapshot {k} of {}", s.len())))
        }
        let (sa, sb) = (pick(a, k)?, pick(b, k)?);
        let mu = DiscreteMeasure::from_state(&sa.state)?;
        let nu = DiscreteMeasure::from_state(&sb.state)?;
        *slot = wasserstein1(&mu, &nu)?.distance;
        Ok(())
    })
}
