//! C ABI for `dwcat`.
//!
//! Every entry point returns a [`DwcatStatus`] (or a plain value for the
//! infallible helpers) and never unwinds across the boundary. On failure a
//! description is stored per thread and can be read back with
//! [`dwcat_last_error_message`].
//!
//! A [`DwcatModel`] is an opaque handle created by [`dwcat_model_new`] and
//! released with [`dwcat_model_free`]. It owns the parameters, the solved
//! ground state and a cached beam splitter.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dwcat::interferometer::{perturbative_parity, Interferometer, Mixture, RowFlag, ScanRow};
use dwcat::model::{
    chi_value, ground_and_gap, interaction_for_chi, GroundSolution, ModelParams, Sector,
};
use dwcat::spinalg::{cat_state, StateVector};
use dwcat::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DwcatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Eigensolver failure or another numerical breakdown.
    Numerical = 3,
    BufferTooSmall = 4,
    /// A Rust panic was caught at the boundary.
    Panic = 5,
}

pub const DWCAT_SECTOR_NONE: i32 = -1;
pub const DWCAT_SECTOR_SYMMETRIC: i32 = 0;
pub const DWCAT_SECTOR_ANTISYMMETRIC: i32 = 1;

pub const DWCAT_STATE_GROUND: i32 = 0;
pub const DWCAT_STATE_CAT: i32 = 1;
pub const DWCAT_STATE_THERMAL: i32 = 2;

pub const DWCAT_FLAG_OK: i32 = 0;
pub const DWCAT_FLAG_LIMIT: i32 = 1;
pub const DWCAT_FLAG_SINGULAR: i32 = 2;

/// Opaque model handle.
pub struct DwcatModel {
    params: ModelParams,
    ground: GroundSolution,
    ifo: Interferometer,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DwcatGround {
    pub e0: f64,
    pub e1: f64,
    pub gap: f64,
    /// `J^2 / (N U^2)`; `INFINITY` when `U = 0`.
    pub chi: f64,
    pub ground_sector: i32,
    pub excited_sector: i32,
    /// Nonzero when the gap is below the resolvable relative floor.
    pub underflow: i32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DwcatScanRow {
    pub theta: f64,
    pub parity: f64,
    pub sigma_parity: f64,
    pub parity_deriv: f64,
    /// `INFINITY` for singular rows.
    pub sigma_theta: f64,
    pub precision_norm: f64,
    pub flag: i32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DwcatGapRow {
    pub n: usize,
    pub chi: f64,
    pub u: f64,
    pub e0: f64,
    pub e1: f64,
    pub gap: f64,
    pub underflow: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_for(e: &Error) -> DwcatStatus {
    match e {
        Error::Domain(_) | Error::InvalidInput(_) | Error::DimensionMismatch { .. } => {
            DwcatStatus::InvalidArgument
        }
        Error::NoConvergence { .. } | Error::Numerical(_) | Error::Io(_) => DwcatStatus::Numerical,
    }
}

enum Failure {
    Status(DwcatStatus, String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn null(what: &str) -> Failure {
    Failure::Status(DwcatStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DwcatStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DwcatStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_for(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_last_error(msg);
            s
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(format!("panic: {msg}"));
            DwcatStatus::Panic
        }
    }
}

fn sector_code(s: Option<Sector>) -> i32 {
    match s {
        None => DWCAT_SECTOR_NONE,
        Some(Sector::Symmetric) => DWCAT_SECTOR_SYMMETRIC,
        Some(Sector::Antisymmetric) => DWCAT_SECTOR_ANTISYMMETRIC,
    }
}

fn flag_code(f: RowFlag) -> i32 {
    match f {
        RowFlag::Ok => DWCAT_FLAG_OK,
        RowFlag::Limit => DWCAT_FLAG_LIMIT,
        RowFlag::Singular => DWCAT_FLAG_SINGULAR,
    }
}

impl From<&ScanRow> for DwcatScanRow {
    fn from(r: &ScanRow) -> Self {
        Self {
            theta: r.theta,
            parity: r.parity,
            sigma_parity: r.sigma_parity,
            parity_deriv: r.parity_deriv,
            sigma_theta: r.sigma_theta.unwrap_or(f64::INFINITY),
            precision_norm: r.precision_norm,
            flag: flag_code(r.flag),
        }
    }
}

unsafe fn model_ref<'a>(model: *const DwcatModel) -> Result<&'a DwcatModel, Failure> {
    // SAFETY: the caller passes a handle from `dwcat_model_new` or null.
    unsafe { model.as_ref() }.ok_or_else(|| null("model"))
}

/// Builds a model and solves for its ground state. On success `*out` owns a
/// new handle.
///
/// # Safety
/// `out` must be null or valid for one pointer write.
#[no_mangle]
pub unsafe extern "C" fn dwcat_model_new(
    n: usize,
    j: f64,
    u: f64,
    eps: f64,
    out: *mut *mut DwcatModel,
) -> DwcatStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let params = ModelParams::new(n, j, u, eps)?;
        let ground = ground_and_gap(&params)?;
        let ifo = Interferometer::new(n)?;
        let handle = Box::into_raw(Box::new(DwcatModel {
            params,
            ground,
            ifo,
        }));
        // SAFETY: checked non-null above; the caller guarantees validity.
        unsafe { *out = handle };
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle from [`dwcat_model_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn dwcat_model_free(model: *mut DwcatModel) {
    if !model.is_null() {
        // SAFETY: ownership returns to Rust exactly once, per the contract above.
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Hilbert-space dimension `N + 1`, or 0 for a null handle.
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dwcat_model_dim(model: *const DwcatModel) -> usize {
    // SAFETY: forwarded caller contract.
    unsafe { model.as_ref() }.map_or(0, |m| m.params.n + 1)
}

/// # Safety
/// `model` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dwcat_model_ground(
    model: *const DwcatModel,
    out: *mut DwcatGround,
) -> DwcatStatus {
    guard(|| {
        let m = unsafe { model_ref(model)? };
        if out.is_null() {
            return Err(null("out"));
        }
        let g = &m.ground;
        let summary = DwcatGround {
            e0: g.e0,
            e1: g.e1,
            gap: g.gap,
            chi: dwcat::model::chi(&m.params),
            ground_sector: sector_code(g.ground_sector),
            excited_sector: sector_code(g.excited_sector),
            underflow: i32::from(g.underflow()),
        };
        // SAFETY: checked non-null; caller guarantees validity.
        unsafe { out.write(summary) };
        Ok(())
    })
}

/// Copies the amplitudes of the ground (`level = 0`) or first excited
/// (`level = 1`) state into `re` and `im`, each of length `len >= N + 1`.
///
/// # Safety
/// `re` and `im` must be valid for `len` writes each.
#[no_mangle]
pub unsafe extern "C" fn dwcat_model_amplitudes(
    model: *const DwcatModel,
    level: u32,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> DwcatStatus {
    guard(|| {
        let m = unsafe { model_ref(model)? };
        if re.is_null() || im.is_null() {
            return Err(null("amplitude buffer"));
        }
        let state = match level {
            0 => &m.ground.psi0,
            1 => &m.ground.psi1,
            _ => {
                return Err(Failure::Status(
                    DwcatStatus::InvalidArgument,
                    format!("level {level} not in {{0, 1}}"),
                ))
            }
        };
        let dim = state.dim();
        if len < dim {
            return Err(Failure::Status(
                DwcatStatus::BufferTooSmall,
                format!("need {dim} slots, got {len}"),
            ));
        }
        // SAFETY: both buffers hold at least `dim` elements per the contract.
        let (re, im) = unsafe {
            (
                std::slice::from_raw_parts_mut(re, dim),
                std::slice::from_raw_parts_mut(im, dim),
            )
        };
        for (k, z) in state.amplitudes().iter().enumerate() {
            re[k] = z.re;
            im[k] = z.im;
        }
        Ok(())
    })
}

/// Runs the interferometer at each phase in `thetas[0..len]`, writing one row
/// per phase into `rows`. `state` is one of the `DWCAT_STATE_*` constants;
/// `phi` is the relative phase of the cat state and is otherwise ignored.
///
/// # Safety
/// `thetas` must be readable and `rows` writable for `len` elements.
#[no_mangle]
pub unsafe extern "C" fn dwcat_scan_parity(
    model: *const DwcatModel,
    state: i32,
    phi: f64,
    thetas: *const f64,
    len: usize,
    rows: *mut DwcatScanRow,
) -> DwcatStatus {
    guard(|| {
        let m = unsafe { model_ref(model)? };
        if len == 0 {
            return Ok(());
        }
        if thetas.is_null() || rows.is_null() {
            return Err(null("scan buffer"));
        }
        // SAFETY: caller guarantees `len` readable elements.
        let thetas = unsafe { std::slice::from_raw_parts(thetas, len) };
        let n = m.params.n;
        let scanned = match state {
            DWCAT_STATE_GROUND => m.ifo.scan(&m.ground.psi0, thetas)?,
            DWCAT_STATE_CAT => m.ifo.scan(&cat_state(n, phi)?, thetas)?,
            DWCAT_STATE_THERMAL => m.ifo.scan_mixture(&Mixture::thermal_cat_pair(n)?, thetas)?,
            other => {
                return Err(Failure::Status(
                    DwcatStatus::InvalidArgument,
                    format!("unknown state selector {other}"),
                ))
            }
        };
        // SAFETY: caller guarantees `len` writable elements.
        let out = unsafe { std::slice::from_raw_parts_mut(rows, len) };
        for (slot, row) in out.iter_mut().zip(&scanned) {
            *slot = row.into();
        }
        Ok(())
    })
}

/// Parity signal of an arbitrary input state given as `N + 1` amplitudes.
///
/// # Safety
/// `re` and `im` must be readable for `len` elements; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dwcat_state_parity(
    model: *const DwcatModel,
    re: *const f64,
    im: *const f64,
    len: usize,
    theta: f64,
    out: *mut f64,
) -> DwcatStatus {
    guard(|| {
        let m = unsafe { model_ref(model)? };
        if re.is_null() || im.is_null() || out.is_null() {
            return Err(null("buffer"));
        }
        // SAFETY: caller guarantees `len` readable elements in each buffer.
        let (re, im) = unsafe {
            (
                std::slice::from_raw_parts(re, len),
                std::slice::from_raw_parts(im, len),
            )
        };
        let amps = re
            .iter()
            .zip(im)
            .map(|(&a, &b)| dwcat::Complex64::new(a, b))
            .collect();
        let psi = StateVector::from_amplitudes(m.params.n, amps)?;
        let p = m.ifo.parity_signal(&psi, theta)?;
        unsafe { out.write(p) };
        Ok(())
    })
}

/// `J^2 / (N U^2)`; `INFINITY` when `U = 0` and `NAN` for `N = 0`.
#[no_mangle]
pub extern "C" fn dwcat_chi(n: usize, j: f64, u: f64) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    chi_value(n, j, u)
}

/// Parity signal of the ideal cat state, `cos[N (theta + pi/2)]`.
#[no_mangle]
pub extern "C" fn dwcat_analytic_cat_parity(n: usize, theta: f64) -> f64 {
    dwcat::interferometer::analytic_cat_parity(n, theta)
}

/// Second-order small-`J` parity formula for the model's parameters.
///
/// # Safety
/// `model` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dwcat_perturbative_parity(
    model: *const DwcatModel,
    theta: f64,
    out: *mut f64,
) -> DwcatStatus {
    guard(|| {
        let m = unsafe { model_ref(model)? };
        if out.is_null() {
            return Err(null("out"));
        }
        let p = perturbative_parity(&m.params, theta)?;
        unsafe { out.write(p) };
        Ok(())
    })
}

/// One gap-scan row at attractive `U = -|J| / sqrt(N chi)`; pass
/// `INFINITY` for `chi` to get `U = 0`.
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dwcat_gap_row(
    n: usize,
    j: f64,
    chi: f64,
    out: *mut DwcatGapRow,
) -> DwcatStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let u = interaction_for_chi(n, j, chi)?;
        let g = ground_and_gap(&ModelParams::new(n, j, u, 0.0)?)?;
        let row = DwcatGapRow {
            n,
            chi,
            u,
            e0: g.e0,
            e1: g.e1,
            gap: g.gap,
            underflow: i32::from(g.underflow()),
        };
        unsafe { out.write(row) };
        Ok(())
    })
}

/// Copies the calling thread's last error message, NUL terminated and
/// truncated to fit, into `buf`. Returns the full length including the NUL,
/// or 0 if no error has been recorded. Pass a null `buf` to query the length.
///
/// # Safety
/// `buf` must be null or writable for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn dwcat_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let k = bytes.len().min(len) - 1;
            // SAFETY: `k + 1 <= len` bytes are written.
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, k);
                *buf.add(k) = 0;
            }
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn dwcat_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
