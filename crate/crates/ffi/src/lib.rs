//! C interface to `polar-kernels`.
//!
//! Kernels live behind an opaque [`PkKernel`] handle created by one of the
//! `pk_kernel_*` constructors and released with [`pk_kernel_free`]. Every
//! fallible call returns a [`PkStatus`]; on failure the message is kept per
//! thread and can be read with [`pk_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use polar_kernels::kernel::{known_kernel, Kernel};
use polar_kernels::lpbound::optimal_lp_sequence;
use polar_kernels::Error;

/// Opaque kernel handle.
pub struct PkKernel {
    inner: Kernel,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    /// The output buffer is too small; the required size was still written.
    BufferTooSmall = 4,
    Io = 5,
    /// A Rust panic was caught at the boundary.
    Internal = 6,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> PkStatus {
    match e {
        Error::Parse { .. } => PkStatus::Parse,
        Error::Io(_) => PkStatus::Io,
        _ => PkStatus::InvalidArgument,
    }
}

/// Runs `f`, recording any error or panic message.
fn guard(f: impl FnOnce() -> Result<(), (PkStatus, String)>) -> PkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PkStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            PkStatus::Internal
        }
    }
}

fn lib<T>(r: polar_kernels::Result<T>) -> Result<T, (PkStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (PkStatus, String) {
    (PkStatus::NullPointer, format!("{what} is null"))
}

unsafe fn store(out: *mut *mut PkKernel, kernel: Kernel) -> Result<(), (PkStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(PkKernel { inner: kernel }));
    Ok(())
}

unsafe fn borrow<'a>(k: *const PkKernel) -> Result<&'a Kernel, (PkStatus, String)> {
    k.as_ref().map(|k| &k.inner).ok_or_else(|| null("kernel"))
}

/// The last error message on this thread, or NULL. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Kernel #`index` (1..=4) of the shipped decompositions.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pk_kernel_known(index: u32, out: *mut *mut PkKernel) -> PkStatus {
    guard(|| store(out, lib(known_kernel(index as usize))?))
}

/// The 2×2 kernel (u_1, u_2) ↦ (u_1 ⊕ u_2, u_2).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pk_kernel_arikan(out: *mut *mut PkKernel) -> PkStatus {
    guard(|| store(out, Kernel::arikan()))
}

/// A kernel from its table: `table[u]` is the image of input `u`, with u_1
/// and x_1 in the least significant bits. `len` must be 2^length.
///
/// # Safety
/// `table` must point to `len` readable values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pk_kernel_from_table(
    length: u32,
    table: *const u32,
    len: usize,
    out: *mut *mut PkKernel,
) -> PkStatus {
    guard(|| {
        if table.is_null() {
            return Err(null("table"));
        }
        let values = std::slice::from_raw_parts(table, len).to_vec();
        store(out, lib(Kernel::from_table(length as usize, values))?)
    })
}

/// A kernel from its text form (coset-sum structure or hex table).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pk_kernel_from_text(text: *const c_char, out: *mut *mut PkKernel) -> PkStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (PkStatus::Parse, "text is not UTF-8".to_string()))?;
        store(out, lib(Kernel::from_text(s))?)
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `kernel` must come from a `pk_kernel_*` constructor and not be used again.
#[no_mangle]
pub unsafe extern "C" fn pk_kernel_free(kernel: *mut PkKernel) {
    if !kernel.is_null() {
        drop(Box::from_raw(kernel));
    }
}

/// ℓ, or 0 for NULL.
///
/// # Safety
/// `kernel` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pk_kernel_length(kernel: *const PkKernel) -> u32 {
    kernel.as_ref().map_or(0, |k| k.inner.length() as u32)
}

/// g(u).
///
/// # Safety
/// `kernel` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pk_kernel_apply(kernel: *const PkKernel, u: u32, out: *mut u32) -> PkStatus {
    guard(|| {
        let k = borrow(kernel)?;
        if out.is_null() {
            return Err(null("out"));
        }
        if u >> k.length() != 0 {
            return Err((PkStatus::InvalidArgument, format!("input {u:#x} has more than {} bits", k.length())));
        }
        *out = k.apply(u);
        Ok(())
    })
}

/// Writes D^{(1)}..D^{(ℓ)} to `out` and ℓ to `written`. Returns
/// `BufferTooSmall` (with `written` set) when `capacity` < ℓ.
///
/// # Safety
/// `kernel` must be a live handle, `out` valid for `capacity` writes and
/// `written` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn pk_kernel_partial_distances(
    kernel: *const PkKernel,
    out: *mut u32,
    capacity: usize,
    written: *mut usize,
) -> PkStatus {
    guard(|| {
        let k = borrow(kernel)?;
        if written.is_null() {
            return Err(null("written"));
        }
        *written = k.length();
        copy_out(k.partial_distances().values(), out, capacity)
    })
}

unsafe fn copy_out(values: &[u32], out: *mut u32, capacity: usize) -> Result<(), (PkStatus, String)> {
    if capacity < values.len() {
        return Err((PkStatus::BufferTooSmall, format!("need room for {} values", values.len())));
    }
    if out.is_null() {
        return Err(null("out"));
    }
    ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    Ok(())
}

/// E(g) = (1/ℓ) Σ log_ℓ D^{(i)}.
///
/// # Safety
/// `kernel` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pk_kernel_exponent(kernel: *const PkKernel, out: *mut f64) -> PkStatus {
    guard(|| {
        let k = borrow(kernel)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = k.exponent();
        Ok(())
    })
}

/// The kernel's text form as a new string; release it with
/// [`pk_string_free`].
///
/// # Safety
/// `kernel` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pk_kernel_to_text(kernel: *const PkKernel, out: *mut *mut c_char) -> PkStatus {
    guard(|| {
        let k = borrow(kernel)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CString::new(k.to_text()).map_err(|e| (PkStatus::Internal, e.to_string()))?;
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from [`pk_kernel_to_text`] and not be used again. NULL is
/// ignored.
#[no_mangle]
pub unsafe extern "C" fn pk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The LP-optimal partial-distance sequence for dimension `length`
/// (2..=16) and its exponent. Sequence handling matches
/// [`pk_kernel_partial_distances`].
///
/// # Safety
/// `sequence` must be valid for `capacity` writes; `written` and `exponent`
/// for one write each.
#[no_mangle]
pub unsafe extern "C" fn pk_lp_bound(
    length: u32,
    sequence: *mut u32,
    capacity: usize,
    written: *mut usize,
    exponent: *mut f64,
) -> PkStatus {
    guard(|| {
        if written.is_null() || exponent.is_null() {
            return Err(null("output"));
        }
        let r = lib(optimal_lp_sequence(length as usize))?;
        *written = r.sequence.length();
        *exponent = r.exponent;
        copy_out(r.sequence.values(), sequence, capacity)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn last_error() -> String {
        let p = pk_last_error();
        assert!(!p.is_null());
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }

    #[test]
    fn known_kernel_round_trip() {
        unsafe {
            let mut k = ptr::null_mut();
            assert_eq!(pk_kernel_known(1, &mut k), PkStatus::Ok);
            assert_eq!(pk_kernel_length(k), 16);
            let mut d = [0u32; 16];
            let mut n = 0;
            assert_eq!(pk_kernel_partial_distances(k, d.as_mut_ptr(), d.len(), &mut n), PkStatus::Ok);
            assert_eq!(n, 16);
            assert_eq!(d, [1, 2, 2, 2, 2, 4, 4, 4, 6, 6, 6, 8, 8, 8, 8, 16]);
            let mut e = 0.0;
            assert_eq!(pk_kernel_exponent(k, &mut e), PkStatus::Ok);
            assert!((e - 0.52742).abs() < 5e-5);

            let mut text = ptr::null_mut();
            assert_eq!(pk_kernel_to_text(k, &mut text), PkStatus::Ok);
            let mut back = ptr::null_mut();
            assert_eq!(pk_kernel_from_text(text, &mut back), PkStatus::Ok);
            for u in [0u32, 1, 0x1234, 0xffff] {
                let (mut a, mut b) = (0, 0);
                pk_kernel_apply(k, u, &mut a);
                pk_kernel_apply(back, u, &mut b);
                assert_eq!(a, b);
            }
            pk_string_free(text);
            pk_kernel_free(back);
            pk_kernel_free(k);
        }
    }

    #[test]
    fn table_kernels_and_errors() {
        unsafe {
            let mut k = ptr::null_mut();
            let table = [0u32, 3, 2, 1];
            assert_eq!(pk_kernel_from_table(2, table.as_ptr(), 4, &mut k), PkStatus::Ok);
            let mut x = 0;
            assert_eq!(pk_kernel_apply(k, 1, &mut x), PkStatus::Ok);
            assert_eq!(x, 3);
            assert_eq!(pk_kernel_apply(k, 4, &mut x), PkStatus::InvalidArgument);
            assert!(last_error().contains("more than 2 bits"));
            let mut d = [0u32; 1];
            let mut n = 0;
            assert_eq!(pk_kernel_partial_distances(k, d.as_mut_ptr(), 1, &mut n), PkStatus::BufferTooSmall);
            assert_eq!(n, 2);
            pk_kernel_free(k);

            let bad = [0u32, 0, 1, 2];
            let mut k2 = ptr::null_mut();
            assert_eq!(pk_kernel_from_table(2, bad.as_ptr(), 4, &mut k2), PkStatus::InvalidArgument);
            assert!(k2.is_null());
            assert!(last_error().contains("bijection"));
            assert_eq!(pk_kernel_known(7, &mut k2), PkStatus::InvalidArgument);
            assert_eq!(pk_kernel_apply(ptr::null(), 0, &mut x), PkStatus::NullPointer);
            assert_eq!(pk_kernel_length(ptr::null()), 0);
            let garbage = CString::new("kernel length=4\nwhat\n").unwrap();
            assert_eq!(pk_kernel_from_text(garbage.as_ptr(), &mut k2), PkStatus::Parse);
            pk_kernel_free(ptr::null_mut());
        }
    }

    #[test]
    fn arikan_and_lp_bound() {
        unsafe {
            let mut k = ptr::null_mut();
            assert_eq!(pk_kernel_arikan(&mut k), PkStatus::Ok);
            let mut e = 0.0;
            pk_kernel_exponent(k, &mut e);
            assert_eq!(e, 0.5);
            pk_kernel_free(k);

            let mut seq = [0u32; 4];
            let (mut n, mut be) = (0, 0.0);
            assert_eq!(pk_lp_bound(4, seq.as_mut_ptr(), 4, &mut n, &mut be), PkStatus::Ok);
            assert_eq!((seq, n, be), ([1, 2, 2, 4], 4, 0.5));
            assert_eq!(pk_lp_bound(40, seq.as_mut_ptr(), 4, &mut n, &mut be), PkStatus::InvalidArgument);
        }
    }
}
