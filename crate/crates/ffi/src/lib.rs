//! C ABI for the disk-harmonic transform, the selective bispectrum and its
//! inversion.
//!
//! Objects cross the boundary as opaque handles that the caller owns and must
//! release with the matching `*_free`. Every fallible call returns a
//! [`DiskbspStatus`]; on failure the message is kept per thread and can be
//! fetched with [`diskbsp_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use diskbsp::bispectrum::{
    full_count, invert_selective, selective_bispectrum, SelectiveBispectrum,
};
use diskbsp::harmonics::{build_plan, HarmonicPlan, Truncation};
use diskbsp::transform::{dht_inverse, forward, rotate_coeffs, Backend, DHCoefficients, ImageGrid};
use diskbsp::Error;
use num_complex::Complex64;

pub const DISKBSP_BACKEND_DIRECT: u32 = 0;
pub const DISKBSP_BACKEND_FAST: u32 = 1;
/// Returned by [`diskbsp_last_error_order`] when the last failure was not tied to one order.
pub const DISKBSP_NO_ORDER: i32 = i32::MIN;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiskbspStatus {
    Ok = 0,
    InvalidArgument = 1,
    Degenerate = 2,
    Parse = 3,
    Range = 4,
    Io = 5,
    NullPointer = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiskbspComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for DiskbspComplex {
    fn from(c: Complex64) -> Self {
        DiskbspComplex { re: c.re, im: c.im }
    }
}

impl From<DiskbspComplex> for Complex64 {
    fn from(c: DiskbspComplex) -> Self {
        Complex64::new(c.re, c.im)
    }
}

pub struct DiskbspPlan(Arc<HarmonicPlan>);
pub struct DiskbspCoeffs(DHCoefficients);
pub struct DiskbspSelective(SelectiveBispectrum);

struct LastError {
    message: CString,
    order: i32,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn set_error(message: String, order: i32) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(LastError { message, order }));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(DiskbspStatus, String, i32);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::InvalidArgument(_) => {
                Failure(DiskbspStatus::InvalidArgument, msg, DISKBSP_NO_ORDER)
            }
            Error::Degenerate { order, .. } => Failure(
                DiskbspStatus::Degenerate,
                msg,
                order.unwrap_or(DISKBSP_NO_ORDER),
            ),
            Error::Parse { .. } | Error::Serde(_) | Error::Csv(_) => {
                Failure(DiskbspStatus::Parse, msg, DISKBSP_NO_ORDER)
            }
            Error::Range { .. } => Failure(DiskbspStatus::Range, msg, DISKBSP_NO_ORDER),
            Error::Io { .. } => Failure(DiskbspStatus::Io, msg, DISKBSP_NO_ORDER),
        }
    }
}

fn fail(status: DiskbspStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into(), DISKBSP_NO_ORDER)
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DiskbspStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            clear_error();
            DiskbspStatus::Ok
        }
        Ok(Err(Failure(status, msg, order))) => {
            set_error(msg, order);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"), DISKBSP_NO_ORDER);
            DiskbspStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| fail(DiskbspStatus::NullPointer, format!("{what} is null")))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(DiskbspStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(
    p: *mut T,
    len: usize,
    needed: usize,
    what: &str,
) -> Result<&'a mut [T], Failure> {
    if len < needed {
        return Err(fail(
            DiskbspStatus::BufferTooSmall,
            format!("{what} holds {len} elements, {needed} needed"),
        ));
    }
    if p.is_null() {
        return Err(fail(DiskbspStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts_mut(p, needed))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(
            DiskbspStatus::NullPointer,
            "output handle pointer is null",
        ));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Copy the last error message of this thread into `buf` (NUL terminated,
/// truncated to `len`). Returns the full message length without the NUL, or 0
/// when the last call succeeded.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match &*e.borrow() {
        None => {
            if !buf.is_null() && len > 0 {
                *buf = 0;
            }
            0
        }
        Some(err) => {
            let bytes = err.message.as_bytes();
            if !buf.is_null() && len > 0 {
                let n = bytes.len().min(len - 1);
                std::ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                *buf.add(n) = 0;
            }
            bytes.len()
        }
    })
}

/// Angular order named by the last degenerate-input failure, or
/// [`DISKBSP_NO_ORDER`].
#[no_mangle]
pub extern "C" fn diskbsp_last_error_order() -> i32 {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(DISKBSP_NO_ORDER, |e| e.order))
}

/// Build a plan for `size`×`size` images. A positive `bandlimit_factor`
/// selects the bandlimit rule, anything else the pixel-count rule.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_plan_new(
    size: usize,
    bandlimit_factor: f64,
    out: *mut *mut DiskbspPlan,
) -> DiskbspStatus {
    guard(|| {
        let truncation = if bandlimit_factor > 0.0 {
            Truncation::Bandlimit {
                factor: bandlimit_factor,
            }
        } else {
            Truncation::PixelCount
        };
        let plan = build_plan(size, truncation)?;
        put(out, DiskbspPlan(plan))
    })
}

/// # Safety
/// `plan` must be null or a handle from [`diskbsp_plan_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_plan_free(plan: *mut DiskbspPlan) {
    if !plan.is_null() {
        drop(Box::from_raw(plan));
    }
}

/// Number of coefficients m, or 0 for a null handle.
///
/// # Safety
/// `plan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_plan_len(plan: *const DiskbspPlan) -> usize {
    plan.as_ref().map_or(0, |p| p.0.len())
}

/// # Safety
/// `plan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_plan_size(plan: *const DiskbspPlan) -> usize {
    plan.as_ref().map_or(0, |p| p.0.size())
}

/// # Safety
/// `plan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_plan_max_order(plan: *const DiskbspPlan) -> i32 {
    plan.as_ref().map_or(-1, |p| p.0.max_order())
}

/// # Safety
/// `plan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_plan_selective_len(plan: *const DiskbspPlan) -> usize {
    plan.as_ref().map_or(0, |p| p.0.selective_len())
}

/// # Safety
/// `plan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_plan_full_count(plan: *const DiskbspPlan) -> u64 {
    plan.as_ref().map_or(0, |p| full_count(&p.0))
}

/// Forward transform of a row-major `size*size` image.
///
/// # Safety
/// `pixels` must point to `len` doubles; `plan` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_dht_forward(
    plan: *const DiskbspPlan,
    pixels: *const f64,
    len: usize,
    backend: u32,
    out: *mut *mut DiskbspCoeffs,
) -> DiskbspStatus {
    guard(|| {
        let plan = get(plan, "plan")?;
        let backend = match backend {
            DISKBSP_BACKEND_DIRECT => Backend::Direct,
            DISKBSP_BACKEND_FAST => Backend::Fast,
            other => {
                return Err(fail(
                    DiskbspStatus::InvalidArgument,
                    format!("unknown backend {other}"),
                ))
            }
        };
        let image = ImageGrid::from_vec(plan.0.size(), slice(pixels, len, "pixels")?.to_vec())?;
        put(out, DiskbspCoeffs(forward(&image, &plan.0, backend)?))
    })
}

/// Synthesize the image of `coeffs` into `out_pixels` (`size*size` doubles).
///
/// # Safety
/// `coeffs` must be live and `out_pixels` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_dht_inverse(
    coeffs: *const DiskbspCoeffs,
    out_pixels: *mut f64,
    len: usize,
) -> DiskbspStatus {
    guard(|| {
        let c = &get(coeffs, "coeffs")?.0;
        let size = c.plan().size();
        let dst = slice_mut(out_pixels, len, size * size, "out_pixels")?;
        let image = dht_inverse(c, c.plan())?;
        dst.copy_from_slice(image.pixels());
        Ok(())
    })
}

/// Wrap `len` coefficient values (in plan order) into a handle.
///
/// # Safety
/// `values` must point to `len` elements; `plan` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_coeffs_new(
    plan: *const DiskbspPlan,
    values: *const DiskbspComplex,
    len: usize,
    out: *mut *mut DiskbspCoeffs,
) -> DiskbspStatus {
    guard(|| {
        let plan = get(plan, "plan")?;
        let values = slice(values, len, "values")?
            .iter()
            .map(|&v| v.into())
            .collect();
        put(
            out,
            DiskbspCoeffs(DHCoefficients::new(plan.0.clone(), values)?),
        )
    })
}

/// # Safety
/// `coeffs` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_coeffs_len(coeffs: *const DiskbspCoeffs) -> usize {
    coeffs.as_ref().map_or(0, |c| c.0.len())
}

/// Copy the coefficient values into `out` (at least `diskbsp_coeffs_len`).
///
/// # Safety
/// `coeffs` must be live and `out` must hold `len` elements.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_coeffs_copy(
    coeffs: *const DiskbspCoeffs,
    out: *mut DiskbspComplex,
    len: usize,
) -> DiskbspStatus {
    guard(|| {
        let c = &get(coeffs, "coeffs")?.0;
        let dst = slice_mut(out, len, c.len(), "out")?;
        for (d, &v) in dst.iter_mut().zip(c.values()) {
            *d = v.into();
        }
        Ok(())
    })
}

/// Coefficients of the image rotated by `phi` radians.
///
/// # Safety
/// `coeffs` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_coeffs_rotate(
    coeffs: *const DiskbspCoeffs,
    phi: f64,
    out: *mut *mut DiskbspCoeffs,
) -> DiskbspStatus {
    guard(|| {
        let c = &get(coeffs, "coeffs")?.0;
        if !phi.is_finite() {
            return Err(fail(DiskbspStatus::InvalidArgument, "angle must be finite"));
        }
        put(out, DiskbspCoeffs(rotate_coeffs(c, phi)))
    })
}

/// # Safety
/// `coeffs` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_coeffs_free(coeffs: *mut DiskbspCoeffs) {
    if !coeffs.is_null() {
        drop(Box::from_raw(coeffs));
    }
}

/// # Safety
/// `coeffs` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_selective_bispectrum(
    coeffs: *const DiskbspCoeffs,
    out: *mut *mut DiskbspSelective,
) -> DiskbspStatus {
    guard(|| {
        let c = &get(coeffs, "coeffs")?.0;
        put(out, DiskbspSelective(selective_bispectrum(c)))
    })
}

/// Wrap `len` selective entries (in label order) into a handle.
///
/// # Safety
/// `values` must point to `len` elements; `plan` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_selective_new(
    plan: *const DiskbspPlan,
    values: *const DiskbspComplex,
    len: usize,
    out: *mut *mut DiskbspSelective,
) -> DiskbspStatus {
    guard(|| {
        let plan = get(plan, "plan")?;
        let values = slice(values, len, "values")?
            .iter()
            .map(|&v| v.into())
            .collect();
        put(
            out,
            DiskbspSelective(SelectiveBispectrum::from_values(plan.0.clone(), values)?),
        )
    })
}

/// # Safety
/// `bsp` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_selective_len(bsp: *const DiskbspSelective) -> usize {
    bsp.as_ref().map_or(0, |b| b.0.len())
}

/// # Safety
/// `bsp` must be live and `out` must hold `len` elements.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_selective_copy(
    bsp: *const DiskbspSelective,
    out: *mut DiskbspComplex,
    len: usize,
) -> DiskbspStatus {
    use diskbsp::bispectrum::Bispectrum;
    guard(|| {
        let b = &get(bsp, "bispectrum")?.0;
        let dst = slice_mut(out, len, b.len(), "out")?;
        for (d, &v) in dst.iter_mut().zip(b.values()) {
            *d = v.into();
        }
        Ok(())
    })
}

/// Recover coefficients (up to rotation) from a selective bispectrum.
/// Returns `DISKBSP_STATUS_DEGENERATE` when a first-root coefficient vanishes;
/// [`diskbsp_last_error_order`] then names the order.
///
/// # Safety
/// `bsp` must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_invert_selective(
    bsp: *const DiskbspSelective,
    out: *mut *mut DiskbspCoeffs,
) -> DiskbspStatus {
    guard(|| {
        let b = &get(bsp, "bispectrum")?.0;
        put(out, DiskbspCoeffs(invert_selective(b)?))
    })
}

/// # Safety
/// `bsp` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn diskbsp_selective_free(bsp: *mut DiskbspSelective) {
    if !bsp.is_null() {
        drop(Box::from_raw(bsp));
    }
}
