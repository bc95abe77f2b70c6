//! C ABI for `ggauss`.
//!
//! Conventions:
//! * every fallible function returns a [`GgStatus`]; on failure a message is
//!   available from [`gg_last_error_message`] on the same thread;
//! * objects are opaque handles created by `gg_*_new` and released by the
//!   matching `gg_*_free` (passing NULL to a free function is a no-op);
//! * strings returned through `char **` are owned by the caller and must be
//!   released with [`gg_string_free`];
//! * exact rationals cross the boundary as `"p/q"` strings, counts as decimal
//!   strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ggauss::moments::{mu_b_moments, PairingTable};
use ggauss::pairings::{
    catalan, pairing_count, riordan_connected, statistic_distribution, total_singletons_closed_form, EnumerationCap,
};
use ggauss::permgroup::{big_h, check_positive_definite, isolated_fixed_points};
use ggauss::randmat::{run_mc, EntryDistribution, McConfig};
use ggauss::scalar::{parse_rational, Scalar};
use ggauss::{CumulantSequence, Error, MomentSequence, PairPartition, WeightSpec};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    CapExceeded = 3,
    SizeLimit = 4,
    Mismatch = 5,
    NoConvergence = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GgSequence {
    Pairings = 0,
    Catalan = 1,
    Connected = 2,
    Singletons = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GgWeight {
    /// t = 1; the parameter is ignored.
    Constant = 0,
    /// q^cr
    CrossingPower = 1,
    /// s^(n - cc)
    ComponentPower = 2,
    /// b^H
    NonSingletonPower = 3,
    /// beta^h
    SingletonPower = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GgDistribution {
    Rademacher = 0,
    Gaussian = 1,
}

/// Kernels on S(n) for [`gg_perm_check_pd`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GgKernel {
    /// h_n(sigma)
    IsolatedFixedPoints = 0,
    /// param^h_n(sigma)
    PowerOfIsolated = 1,
    /// exp(-param * H(sigma))
    ExpNonSingleton = 2,
}

/// Statistics of a pairing.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GgChordStats {
    pub crossings: u32,
    pub singletons: u32,
    pub components: u32,
    pub non_singletons: u32,
}

/// Opaque pair partition.
pub struct GgPairing(PairPartition);

/// Opaque table of exact moments and free cumulants of one weight.
pub struct GgMoments {
    moments: MomentSequence<num_rational::BigRational>,
    cumulants: CumulantSequence<num_rational::BigRational>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> GgStatus {
    match e {
        Error::CapExceeded { .. } => GgStatus::CapExceeded,
        Error::SizeLimit { .. } => GgStatus::SizeLimit,
        Error::InvalidArgument(_) => GgStatus::InvalidArgument,
        Error::Mismatch { .. } => GgStatus::Mismatch,
        Error::NoConvergence { .. } => GgStatus::NoConvergence,
    }
}

enum Fail {
    Status(GgStatus, String),
    Lib(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn null() -> Fail {
    Fail::Status(GgStatus::NullPointer, "null pointer argument".into())
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            GgStatus::Ok
        }
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            GgStatus::Panic
        }
    }
}

fn cap(allow_large: bool) -> EnumerationCap {
    if allow_large {
        EnumerationCap::extended()
    } else {
        EnumerationCap::default()
    }
}

unsafe fn out_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail::Status(GgStatus::InvalidArgument, "string contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn in_str<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Status(GgStatus::InvalidArgument, "string is not UTF-8".into()))
}

unsafe fn weight_spec(kind: GgWeight, param: *const c_char) -> Result<WeightSpec<num_rational::BigRational>, Fail> {
    let p = || -> Result<_, Fail> { Ok(parse_rational(in_str(param)?)?) };
    Ok(match kind {
        GgWeight::Constant => WeightSpec::Constant1,
        GgWeight::CrossingPower => WeightSpec::CrossingPower(p()?),
        GgWeight::ComponentPower => WeightSpec::ComponentPower(p()?),
        GgWeight::NonSingletonPower => WeightSpec::SingletonHPower(p()?),
        GgWeight::SingletonPower => WeightSpec::SingletonCountPower(p()?),
    })
}

/// Message for the most recent failure on this thread, or "" after a success.
/// The pointer stays valid until the next `gg_*` call on the same thread.
#[no_mangle]
pub extern "C" fn gg_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be NULL or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a pairing from `npairs` blocks given as `2 * npairs` point labels
/// `a1, b1, a2, b2, ...` covering `1..=2*npairs`.
///
/// # Safety
/// `pairs` must point to `2 * npairs` readable values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gg_pairing_new(pairs: *const u32, npairs: usize, out: *mut *mut GgPairing) -> GgStatus {
    guard(|| {
        if out.is_null() || (pairs.is_null() && npairs > 0) {
            return Err(null());
        }
        let flat = if npairs == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(pairs, 2 * npairs)
        };
        let p = PairPartition::new(flat.chunks_exact(2).map(|c| (c[0], c[1])))?;
        *out = Box::into_raw(Box::new(GgPairing(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must be NULL or a handle from `gg_pairing_new`/`gg_pairing_rotate` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gg_pairing_free(p: *mut GgPairing) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of blocks.
///
/// # Safety
/// `p` must be a live handle or NULL (returns 0).
#[no_mangle]
pub unsafe extern "C" fn gg_pairing_size(p: *const GgPairing) -> usize {
    p.as_ref().map_or(0, |p| p.0.n())
}

/// Writes the canonical blocks as `a1, b1, a2, b2, ...` (sorted by opener).
///
/// # Safety
/// `buf` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn gg_pairing_blocks(p: *const GgPairing, buf: *mut u32, len: usize) -> GgStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(null)?;
        let need = 2 * p.0.n();
        if len < need {
            return Err(Fail::Status(
                GgStatus::BufferTooSmall,
                format!("need {need} slots, got {len}"),
            ));
        }
        if need > 0 && buf.is_null() {
            return Err(null());
        }
        for (i, &(a, b)) in p.0.blocks().iter().enumerate() {
            *buf.add(2 * i) = a;
            *buf.add(2 * i + 1) = b;
        }
        Ok(())
    })
}

/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gg_pairing_stats(p: *const GgPairing, out: *mut GgChordStats) -> GgStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(null)?;
        let out = out.as_mut().ok_or_else(null)?;
        let s = p.0.statistics();
        *out = GgChordStats {
            crossings: s.cr,
            singletons: s.h,
            components: s.cc,
            non_singletons: s.big_h,
        };
        Ok(())
    })
}

/// Cyclic rotation `k -> k + 1 (mod 2n)`; the result is a new handle.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gg_pairing_rotate(p: *const GgPairing, out: *mut *mut GgPairing) -> GgStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        *out = Box::into_raw(Box::new(GgPairing(p.0.rotate())));
        Ok(())
    })
}

/// Terms `1..=max` of a counting sequence as a comma-separated decimal
/// string. Values within the enumeration cap are cross-checked by
/// brute force; disagreement returns `Mismatch`.
///
/// # Safety
/// `out` must be writable; free the result with `gg_string_free`.
#[no_mangle]
pub unsafe extern "C" fn gg_sequence(
    which: GgSequence,
    max: usize,
    allow_large: bool,
    out: *mut *mut c_char,
) -> GgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        if max == 0 {
            return Err(Fail::Lib(Error::InvalidArgument("max must be at least 1".into())));
        }
        let cap = cap(allow_large);
        let connected = riordan_connected(max);
        let mut terms = Vec::with_capacity(max);
        for n in 1..=max {
            let v = match which {
                GgSequence::Pairings => pairing_count(n),
                GgSequence::Catalan => catalan(n),
                GgSequence::Connected => connected[n - 1].clone(),
                GgSequence::Singletons => total_singletons_closed_form(n),
            };
            if n <= cap.max_n() {
                let d = statistic_distribution(n, cap)?;
                let e = match which {
                    GgSequence::Pairings => d.total(),
                    GgSequence::Catalan => d.noncrossing(),
                    GgSequence::Connected => d.connected(),
                    GgSequence::Singletons => d.total_singletons(),
                };
                if e != v {
                    return Err(Fail::Lib(Error::Mismatch {
                        context: format!("sequence term n = {n}"),
                        left: v.to_string(),
                        right: e.to_string(),
                    }));
                }
            }
            terms.push(v.to_string());
        }
        out_string(out, terms.join(","))
    })
}

/// Exact moments `m_2 .. m_2N` and free cumulants of a weight.
/// `param` is an integer, decimal or `p/q` string (ignored for `Constant`).
///
/// # Safety
/// `param` must be NULL or NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gg_moments_new(
    weight: GgWeight,
    param: *const c_char,
    order: usize,
    allow_large: bool,
    out: *mut *mut GgMoments,
) -> GgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        if order == 0 {
            return Err(Fail::Lib(Error::InvalidArgument("order must be at least 1".into())));
        }
        let spec = weight_spec(weight, param)?;
        let table = PairingTable::new(order, cap(allow_large))?;
        *out = Box::into_raw(Box::new(GgMoments {
            moments: table.moments(&spec),
            cumulants: table.connected_cumulants(&spec),
        }));
        Ok(())
    })
}

/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gg_moments_free(m: *mut GgMoments) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Largest half-order `N` held by the table (0 for NULL).
///
/// # Safety
/// `m` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gg_moments_order(m: *const GgMoments) -> usize {
    m.as_ref().map_or(0, |m| m.moments.order())
}

unsafe fn moment_entry(
    m: *const GgMoments,
    n: usize,
    cumulant: bool,
    f: impl FnOnce(&num_rational::BigRational) -> Result<(), Fail>,
) -> GgStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(null)?;
        if n == 0 || n > m.moments.order() {
            return Err(Fail::Lib(Error::InvalidArgument(format!(
                "half-order {n} outside 1..={}",
                m.moments.order()
            ))));
        }
        f(if cumulant { m.cumulants.get(n) } else { m.moments.get(n) })
    })
}

/// `m_{2n}` as an exact `"p/q"` string.
///
/// # Safety
/// `m` live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gg_moments_moment(m: *const GgMoments, n: usize, out: *mut *mut c_char) -> GgStatus {
    moment_entry(m, n, false, |v| {
        if out.is_null() {
            return Err(null());
        }
        out_string(out, v.render())
    })
}

/// `m_{2n}` rounded to a double.
///
/// # Safety
/// `m` live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gg_moments_moment_f64(m: *const GgMoments, n: usize, out: *mut f64) -> GgStatus {
    moment_entry(m, n, false, |v| {
        *out.as_mut().ok_or_else(null)? = Scalar::to_f64(v);
        Ok(())
    })
}

/// Free cumulant `r_{2n}` as an exact `"p/q"` string.
///
/// # Safety
/// `m` live handle, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gg_moments_cumulant(m: *const GgMoments, n: usize, out: *mut *mut c_char) -> GgStatus {
    moment_entry(m, n, true, |v| {
        if out.is_null() {
            return Err(null());
        }
        out_string(out, v.render())
    })
}

/// Moments `m_2 .. m_2N` of `D_sqrt(b) mu ⊞ D_sqrt(1-b) gamma_0`, where `mu`
/// has the given weight, as comma-separated `"p/q"` strings. Both
/// computation routes must agree, otherwise `Mismatch` is returned.
///
/// # Safety
/// `param` and `b` NUL-terminated (param may be NULL for `Constant`); `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gg_mu_b_moments(
    weight: GgWeight,
    param: *const c_char,
    b: *const c_char,
    order: usize,
    out: *mut *mut c_char,
) -> GgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let spec = weight_spec(weight, param)?;
        let b = parse_rational(in_str(b)?)?;
        let r = mu_b_moments(&spec, &b, order, EnumerationCap::default())?;
        out_string(out, r.path_a.rendered().join(","))
    })
}

/// Monte Carlo spectral moments of `n x n` Markov matrices scaled by
/// `1/sqrt(n)`. Writes `kmax` entries (k = 1..kmax) into each of `means`,
/// `stderrs` and `targets`.
///
/// # Safety
/// each output buffer must hold `kmax` doubles.
#[no_mangle]
pub unsafe extern "C" fn gg_markov_mc(
    n: usize,
    trials: usize,
    kmax: usize,
    dist: GgDistribution,
    seed: u64,
    means: *mut f64,
    stderrs: *mut f64,
    targets: *mut f64,
) -> GgStatus {
    guard(|| {
        if means.is_null() || stderrs.is_null() || targets.is_null() {
            return Err(null());
        }
        let cfg = McConfig {
            n,
            trials,
            kmax,
            dist: match dist {
                GgDistribution::Rademacher => EntryDistribution::Rademacher,
                GgDistribution::Gaussian => EntryDistribution::Gaussian,
            },
            seed,
        };
        cfg.validate()?;
        let rep = run_mc(&cfg, EnumerationCap::default())?;
        for (i, e) in rep.moments.iter().enumerate() {
            *means.add(i) = e.mean;
            *stderrs.add(i) = e.stderr;
            *targets.add(i) = e.target;
        }
        Ok(())
    })
}

/// Positive semidefiniteness of the Gram matrix `[f(sigma^-1 tau)]` over
/// `S(n)`, `n <= 5`. `*psd` is set to 1 or 0 and `*min_eigenvalue` to the
/// smallest eigenvalue.
///
/// # Safety
/// `psd` and `min_eigenvalue` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gg_perm_check_pd(
    n: usize,
    kernel: GgKernel,
    param: f64,
    tol: f64,
    psd: *mut i32,
    min_eigenvalue: *mut f64,
) -> GgStatus {
    guard(|| {
        let psd = psd.as_mut().ok_or_else(null)?;
        let min_eigenvalue = min_eigenvalue.as_mut().ok_or_else(null)?;
        if tol.is_nan() || tol <= 0.0 || !param.is_finite() {
            return Err(Fail::Lib(Error::InvalidArgument(
                "tol must be positive and param finite".into(),
            )));
        }
        let rep = match kernel {
            GgKernel::IsolatedFixedPoints => check_positive_definite(n, |s| isolated_fixed_points(s) as f64, tol)?,
            GgKernel::PowerOfIsolated => {
                check_positive_definite(n, |s| param.powi(isolated_fixed_points(s) as i32), tol)?
            }
            GgKernel::ExpNonSingleton => check_positive_definite(n, |s| (-param * big_h(s) as f64).exp(), tol)?,
        };
        *psd = i32::from(rep.psd);
        *min_eigenvalue = rep.min_eigenvalue;
        Ok(())
    })
}
