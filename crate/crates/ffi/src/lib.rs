//! C ABI over `sphere-bpp`.
//!
//! Objects are opaque handles created by `sbpp_*_new`/`sbpp_*_from_*` and
//! released with the matching `sbpp_*_free`. Every fallible call returns an
//! [`SbppStatus`]; on failure a description is available from
//! [`sbpp_last_error_message`] on the same thread. Observers are encoded as a
//! shell number: `0` for the Earth surface, `i >= 1` for a point of shell `i`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sphere_bpp::{
    constellation, montecarlo, validation, ConstellationSpec, DistanceDistribution, EmpiricalCdf,
    Error, ObservationPoint, SamplerKind, SimulationConfig,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbppStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidConfig = 3,
    UnknownPreset = 4,
    ShellIndexOutOfRange = 5,
    BeyondVisibility = 6,
    ZeroVisibility = 7,
    Internal = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbppSampler {
    Colatitude = 0,
    Area = 1,
}

impl From<SbppSampler> for SamplerKind {
    fn from(s: SbppSampler) -> Self {
        match s {
            SbppSampler::Colatitude => SamplerKind::ColatitudeUniform,
            SbppSampler::Area => SamplerKind::AreaUniform,
        }
    }
}

/// Validated constellation description.
pub struct SbppConstellation(ConstellationSpec);

/// Closed-form distance distribution for one constellation and observer.
pub struct SbppDistribution(DistanceDistribution);

/// Result of a Monte-Carlo run.
pub struct SbppEmpirical(EmpiricalCdf);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

fn status_of(e: &Error) -> SbppStatus {
    match e {
        Error::UnknownPreset { .. } => SbppStatus::UnknownPreset,
        Error::ShellIndexOutOfRange { .. } => SbppStatus::ShellIndexOutOfRange,
        Error::BeyondVisibility { .. } => SbppStatus::BeyondVisibility,
        Error::ZeroVisibility => SbppStatus::ZeroVisibility,
        Error::Internal(_) => SbppStatus::Internal,
        Error::InvalidEarthRadius(_)
        | Error::InvalidAltitude(_)
        | Error::TooManySatellites { .. }
        | Error::NoShells
        | Error::EmptyObserverShell(_)
        | Error::MissingObserverPoint
        | Error::Config(_) => SbppStatus::InvalidConfig,
        _ => SbppStatus::InvalidArgument,
    }
}

struct Failure(SbppStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SbppStatus::NullPointer, format!("{what} is NULL"))
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> SbppStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            SbppStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside sphere-bpp");
            SbppStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(SbppStatus::InvalidArgument, format!("{what}: {e}")))
}

fn observer(shell: u32) -> ObservationPoint {
    match shell {
        0 => ObservationPoint::EarthSurface,
        i => ObservationPoint::OnShell(i as usize),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sbpp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failed call on this thread, or an empty string.
/// The pointer stays valid until the next `sbpp_*` call on the same thread.
#[no_mangle]
pub extern "C" fn sbpp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Parses a JSON constellation description.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sbpp_constellation_from_json(
    json: *const c_char,
    out: *mut *mut SbppConstellation,
) -> SbppStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let spec = constellation::parse_config(text.as_bytes())?;
        write_out(out, Box::into_raw(Box::new(SbppConstellation(spec))), "out")
    })
}

/// Looks up a built-in constellation by name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sbpp_constellation_from_preset(
    name: *const c_char,
    out: *mut *mut SbppConstellation,
) -> SbppStatus {
    guard(|| {
        let spec = constellation::preset(read_str(name, "name")?)?;
        write_out(out, Box::into_raw(Box::new(SbppConstellation(spec))), "out")
    })
}

/// Number of shells, or 0 for a NULL handle.
///
/// # Safety
/// `c` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sbpp_constellation_num_shells(c: *const SbppConstellation) -> usize {
    c.as_ref().map_or(0, |c| c.0.num_shells())
}

/// # Safety
/// `c` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sbpp_constellation_free(c: *mut SbppConstellation) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Builds the closed-form distribution seen by `observer_shell` (0 = Earth).
///
/// # Safety
/// `c` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sbpp_distribution_new(
    c: *const SbppConstellation,
    observer_shell: u32,
    out: *mut *mut SbppDistribution,
) -> SbppStatus {
    guard(|| {
        let c = as_ref(c, "constellation")?;
        let dist = DistanceDistribution::new(&c.0, observer(observer_shell))?;
        write_out(out, Box::into_raw(Box::new(SbppDistribution(dist))), "out")
    })
}

/// # Safety
/// `d` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sbpp_distribution_free(d: *mut SbppDistribution) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// `P(D < d)`.
///
/// # Safety
/// `dist` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sbpp_distribution_cdf(
    dist: *const SbppDistribution,
    d: f64,
    out: *mut f64,
) -> SbppStatus {
    guard(|| {
        let v = as_ref(dist, "distribution")?.0.cdf(d)?;
        write_out(out, v, "out")
    })
}

/// `P(D_k >= d)` for shell `shell` (1-based).
///
/// # Safety
/// `dist` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sbpp_distribution_shell_ccdf(
    dist: *const SbppDistribution,
    shell: u32,
    d: f64,
    out: *mut f64,
) -> SbppStatus {
    guard(|| {
        let shells = as_ref(dist, "distribution")?.0.shells();
        let k = shell as usize;
        let s = k
            .checked_sub(1)
            .and_then(|i| shells.get(i))
            .ok_or(Error::ShellIndexOutOfRange { index: k, count: shells.len() })?;
        write_out(out, s.ccdf(d)?, "out")
    })
}

/// Probability that at least one point is in line of sight.
///
/// # Safety
/// `dist` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sbpp_distribution_visibility(
    dist: *const SbppDistribution,
    out: *mut f64,
) -> SbppStatus {
    guard(|| {
        let v = as_ref(dist, "distribution")?.0.visibility_probability();
        write_out(out, v, "out")
    })
}

/// Smallest `d` with `P(D < d) >= q`.
///
/// # Safety
/// `dist` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sbpp_distribution_quantile(
    dist: *const SbppDistribution,
    q: f64,
    out: *mut f64,
) -> SbppStatus {
    guard(|| {
        let v = as_ref(dist, "distribution")?.0.quantile(q)?;
        write_out(out, v, "out")
    })
}

/// Mean distance given that some point is visible.
///
/// # Safety
/// `dist` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sbpp_distribution_conditional_mean(
    dist: *const SbppDistribution,
    out: *mut f64,
) -> SbppStatus {
    guard(|| {
        let v = as_ref(dist, "distribution")?.0.conditional_mean()?;
        write_out(out, v, "out")
    })
}

/// Runs `trials` Monte-Carlo trials. Output depends only on the arguments.
///
/// # Safety
/// `c` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sbpp_run_experiment(
    c: *const SbppConstellation,
    observer_shell: u32,
    trials: u64,
    seed: u64,
    sampler: SbppSampler,
    out: *mut *mut SbppEmpirical,
) -> SbppStatus {
    guard(|| {
        let c = as_ref(c, "constellation")?;
        let sim = SimulationConfig::new(trials, seed, sampler.into())?;
        let emp = montecarlo::run_experiment(&c.0, observer(observer_shell), &sim)?;
        write_out(out, Box::into_raw(Box::new(SbppEmpirical(emp))), "out")
    })
}

/// Fraction of trials with a visible point at distance `<= d`.
///
/// # Safety
/// `e` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sbpp_empirical_eval(
    e: *const SbppEmpirical,
    d: f64,
    out: *mut f64,
) -> SbppStatus {
    guard(|| {
        let v = as_ref(e, "empirical")?.0.eval(d);
        write_out(out, v, "out")
    })
}

/// Total trials and trials with no visible point.
///
/// # Safety
/// `e` must be a live handle; both outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbpp_empirical_counts(
    e: *const SbppEmpirical,
    n_total: *mut u64,
    n_infinite: *mut u64,
) -> SbppStatus {
    guard(|| {
        let e = &as_ref(e, "empirical")?.0;
        write_out(n_total, e.n_total(), "n_total")?;
        write_out(n_infinite, e.n_infinite(), "n_infinite")
    })
}

/// # Safety
/// `e` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sbpp_empirical_free(e: *mut SbppEmpirical) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// Kolmogorov–Smirnov distance between a simulation and a closed form.
///
/// # Safety
/// Handles must be live; `statistic` and `pass` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sbpp_ks_compare(
    e: *const SbppEmpirical,
    dist: *const SbppDistribution,
    threshold: f64,
    statistic: *mut f64,
    pass: *mut bool,
) -> SbppStatus {
    guard(|| {
        let e = as_ref(e, "empirical")?;
        let dist = as_ref(dist, "distribution")?;
        let report = validation::ks_against(&e.0, &dist.0, threshold)?;
        write_out(statistic, report.statistic, "statistic")?;
        write_out(pass, report.pass, "pass")
    })
}
