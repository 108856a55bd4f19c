//! C interface to xwigner.
//!
//! Configurations and fields are opaque handles owned by the caller and
//! released with the matching `*_free` function. Every call returns an
//! [`XwStatus`]; on failure a message is available from
//! [`xw_last_error`] on the same thread until the next failing call.
//! All physical quantities are SI.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use xwigner::crosswigner::{
    cw_free_params, cw_screen_params, cw_slits_params, default_axes, eval_cw_free, eval_cw_screen,
    eval_cw_slits, gouy_delta_free, gouy_delta_slit, PhaseSpaceField, Provenance,
};
use xwigner::io::{save_field, Format};
use xwigner::states::PhysicalConfig;
use xwigner::Error;

/// Result codes; the numeric values match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XwStatus {
    Ok = 0,
    NullPointer = 1,
    Config = 2,
    Numerical = 3,
    Io = 4,
    Panic = 5,
}

/// Physical parameters of a run.
pub struct XwConfig(PhysicalConfig);

/// Complex samples on an (x, k) grid.
pub struct XwField(PhaseSpaceField);

/// Which closed form [`xw_field_new`] evaluates.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XwKind {
    /// Freely evolved state against the initial state at time t.
    Free = 0,
    /// The two slit paths against each other at the screen.
    Slits = 1,
    /// Screen state against the initial state.
    Screen = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> XwStatus {
    match e.exit_code() {
        2 => XwStatus::Config,
        3 => XwStatus::Numerical,
        _ => XwStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (XwStatus, String)>) -> XwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => XwStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside xwigner".into());
            XwStatus::Panic
        }
    }
}

fn lib(e: Error) -> (XwStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (XwStatus, String) {
    (XwStatus::NullPointer, format!("{what} is null"))
}

/// Message of the last failed call on this thread, or NULL.
///
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn xw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Neutron defaults: m = 1.67e-27 kg, σ₀ = β = 7.8 µm, d = 100 µm,
/// t = τ = 50 ms, γ = 0.
#[no_mangle]
pub extern "C" fn xw_config_new() -> *mut XwConfig {
    Box::into_raw(Box::new(XwConfig(PhysicalConfig::neutron())))
}

/// # Safety
/// `cfg` must come from [`xw_config_new`] and not be used afterwards.
/// NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn xw_config_free(cfg: *mut XwConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Set one parameter by name: mass, hbar, sigma0, gamma, beta, d, t, tau.
/// The whole configuration is validated after the change; an invalid value
/// is rejected and the previous one kept.
///
/// # Safety
/// `cfg` must be a live handle and `key` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn xw_config_set(cfg: *mut XwConfig, key: *const c_char, value: f64) -> XwStatus {
    guard(|| {
        let cfg = cfg.as_mut().ok_or_else(|| null("cfg"))?;
        if key.is_null() {
            return Err(null("key"));
        }
        let key = CStr::from_ptr(key).to_str().map_err(|_| (XwStatus::Config, "key is not utf-8".to_string()))?;
        let mut c = cfg.0;
        match key {
            "mass" => c.mass = value,
            "hbar" => c.hbar = value,
            "sigma0" => c.sigma0 = value,
            "gamma" => c.gamma = value,
            "beta" => c.beta = value,
            "d" => c.d = value,
            "t" => c.t = value,
            "tau" => c.tau = value,
            other => return Err((XwStatus::Config, format!("unknown parameter '{other}'"))),
        }
        c.validate().map_err(lib)?;
        cfg.0 = c;
        Ok(())
    })
}

/// Evaluate a closed-form cross-Wigner on the default nx × nk grid.
/// `gouy = false` drops the Gouy phase difference.
///
/// # Safety
/// `cfg` must be a live handle and `out` a writable pointer. On success
/// `*out` receives a handle to release with [`xw_field_free`].
#[no_mangle]
pub unsafe extern "C" fn xw_field_new(
    cfg: *const XwConfig,
    kind: XwKind,
    nx: u32,
    nk: u32,
    gouy: bool,
    out: *mut *mut XwField,
) -> XwStatus {
    guard(|| {
        let cfg = &cfg.as_ref().ok_or_else(|| null("cfg"))?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        let (xa, ka) = default_axes(cfg, nx as usize, nk as usize).map_err(lib)?;
        let field = match kind {
            XwKind::Free => {
                let p = cw_free_params(cfg, cfg.t).map_err(lib)?;
                let p = if gouy { p } else { p.without_gouy() };
                PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| eval_cw_free(&p, x, k))
            }
            XwKind::Slits => {
                let p = cw_slits_params(cfg).map_err(lib)?;
                PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| eval_cw_slits(&p, x, k))
            }
            XwKind::Screen => {
                let p = cw_screen_params(cfg).map_err(lib)?;
                let p = if gouy { p } else { p.without_gouy() };
                PhaseSpaceField::from_fn(xa, ka, Provenance::Analytic, |x, k| eval_cw_screen(&p, x, k))
            }
        };
        *out = Box::into_raw(Box::new(XwField(field)));
        Ok(())
    })
}

/// # Safety
/// `field` must come from [`xw_field_new`] and not be used afterwards.
/// NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn xw_field_free(field: *mut XwField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// # Safety
/// `field` must be a live handle; `nx` and `nk` writable.
#[no_mangle]
pub unsafe extern "C" fn xw_field_dims(field: *const XwField, nx: *mut u32, nk: *mut u32) -> XwStatus {
    guard(|| {
        let f = &field.as_ref().ok_or_else(|| null("field"))?.0;
        if nx.is_null() || nk.is_null() {
            return Err(null("dims"));
        }
        *nx = f.nx() as u32;
        *nk = f.nk() as u32;
        Ok(())
    })
}

/// Copy the axes into `x` (nx values, m) and `k` (nk values, 1/m).
///
/// # Safety
/// `x` and `k` must hold at least nx and nk doubles.
#[no_mangle]
pub unsafe extern "C" fn xw_field_axes(field: *const XwField, x: *mut f64, k: *mut f64) -> XwStatus {
    guard(|| {
        let f = &field.as_ref().ok_or_else(|| null("field"))?.0;
        if x.is_null() || k.is_null() {
            return Err(null("axis buffer"));
        }
        for (i, v) in f.x_axis.values().into_iter().enumerate() {
            *x.add(i) = v;
        }
        for (j, v) in f.k_axis.values().into_iter().enumerate() {
            *k.add(j) = v;
        }
        Ok(())
    })
}

/// Copy the samples, x-major, into `re` and `im` of length `len`, which must
/// equal nx·nk.
///
/// # Safety
/// `re` and `im` must each hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn xw_field_values(field: *const XwField, re: *mut f64, im: *mut f64, len: usize) -> XwStatus {
    guard(|| {
        let f = &field.as_ref().ok_or_else(|| null("field"))?.0;
        if re.is_null() || im.is_null() {
            return Err(null("value buffer"));
        }
        if len != f.values.len() {
            return Err((XwStatus::Config, format!("buffer length {len}, field has {}", f.values.len())));
        }
        for (i, v) in f.values.iter().enumerate() {
            *re.add(i) = v.re;
            *im.add(i) = v.im;
        }
        Ok(())
    })
}

/// Write the field as CSV (`binary = false`) or XWIG1 binary.
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn xw_field_save(field: *const XwField, path: *const c_char, binary: bool) -> XwStatus {
    guard(|| {
        let f = &field.as_ref().ok_or_else(|| null("field"))?.0;
        if path.is_null() {
            return Err(null("path"));
        }
        let p = CStr::from_ptr(path).to_str().map_err(|_| (XwStatus::Io, "path is not utf-8".to_string()))?;
        let fmt = if binary { Format::Bin } else { Format::Csv };
        save_field(Path::new(p), f, fmt, &[]).map_err(lib)
    })
}

/// Gouy phase difference Δμ of free evolution for a time `t` seconds.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xw_gouy_delta_free(cfg: *const XwConfig, t: f64, out: *mut f64) -> XwStatus {
    guard(|| {
        let cfg = &cfg.as_ref().ok_or_else(|| null("cfg"))?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = gouy_delta_free(cfg, t).map_err(lib)?;
        Ok(())
    })
}

/// Gouy phase difference Δμ′ after the slits, at the configured t and τ.
///
/// # Safety
/// `cfg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn xw_gouy_delta_slit(cfg: *const XwConfig, out: *mut f64) -> XwStatus {
    guard(|| {
        let cfg = &cfg.as_ref().ok_or_else(|| null("cfg"))?.0;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = gouy_delta_slit(cfg).map_err(lib)?;
        Ok(())
    })
}
