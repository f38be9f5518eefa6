//! C ABI over the kernels.
//!
//! Input arrays are borrowed in place (no copies) as long as they are
//! contiguous `f64` / `usize` buffers. Output of the sparse product is
//! handed back as three heap buffers owned by this library; release them
//! with [`tenkern_ttv_result_free`].
//!
//! All functions return a [`TkStatus`] code and never unwind across the
//! boundary.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use crate::dense::{dot_unchecked, matvec_unchecked};
use crate::error::Error;
use crate::sparse::{ttv, ttv_parts_unchecked, IndexMatrix, SparseCooTensor, TtvRawResult};
use crate::DenseVector;

#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TkStatus {
    Ok = 0,
    NullPointer = 1,
    Dimension = 2,
    Mode = 3,
    UnsupportedOrder = 4,
    InvalidTensor = 5,
    Panic = 6,
}

impl From<&Error> for TkStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Dimension { .. } => TkStatus::Dimension,
            Error::Mode { .. } => TkStatus::Mode,
            Error::UnsupportedOrder { .. } => TkStatus::UnsupportedOrder,
            _ => TkStatus::InvalidTensor,
        }
    }
}

/// The `(new_subs, new_vals, new_shape)` triple of a sparse product.
///
/// `subs` holds `nnz * (order)` indices row-major, `vals` holds `nnz`
/// values and `shape` holds `order` sizes, where `order` is the order of
/// the result (input order minus one).
#[repr(C)]
#[derive(Debug)]
pub struct TkTtvResult {
    pub subs: *mut usize,
    pub vals: *mut f64,
    pub shape: *mut usize,
    pub nnz: usize,
    pub order: usize,
}

impl TkTtvResult {
    pub const fn empty() -> Self {
        Self {
            subs: ptr::null_mut(),
            vals: ptr::null_mut(),
            shape: ptr::null_mut(),
            nnz: 0,
            order: 0,
        }
    }
}

fn leak<T>(v: Vec<T>) -> *mut T {
    Box::into_raw(v.into_boxed_slice()) as *mut T
}

/// # Safety
///
/// `p` must come from [`leak`] with exactly `len` elements, or be null.
unsafe fn reclaim<T>(p: *mut T, len: usize) {
    if !p.is_null() {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(p, len)));
    }
}

/// Borrow `len` elements; a null pointer is allowed only when `len == 0`.
unsafe fn borrow<'a, T>(p: *const T, len: usize) -> Option<&'a [T]> {
    if len == 0 {
        Some(&[])
    } else if p.is_null() {
        None
    } else {
        Some(slice::from_raw_parts(p, len))
    }
}

fn guarded(f: impl FnOnce() -> TkStatus) -> TkStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(TkStatus::Panic)
}

/// Dot product of two length-`len` arrays.
///
/// # Safety
///
/// `x` and `y` must point to `len` readable doubles; `out` to one writable
/// double.
#[no_mangle]
pub unsafe extern "C" fn tenkern_dot(
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> TkStatus {
    guarded(|| {
        let (Some(x), Some(y)) = (borrow(x, len), borrow(y, len)) else {
            return TkStatus::NullPointer;
        };
        if out.is_null() {
            return TkStatus::NullPointer;
        }
        *out = dot_unchecked(x, y);
        TkStatus::Ok
    })
}

/// Row-major `rows x cols` matrix times a length-`cols` vector, written to
/// `out` (length `rows`).
///
/// # Safety
///
/// `a` must hold `rows * cols` doubles, `x` `cols` doubles and `out` room
/// for `rows` doubles.
#[no_mangle]
pub unsafe extern "C" fn tenkern_matvec(
    a: *const f64,
    rows: usize,
    cols: usize,
    x: *const f64,
    out: *mut f64,
) -> TkStatus {
    guarded(|| {
        let Some(len) = rows.checked_mul(cols) else {
            return TkStatus::Dimension;
        };
        let (Some(a), Some(x)) = (borrow(a, len), borrow(x, cols)) else {
            return TkStatus::NullPointer;
        };
        if rows > 0 && out.is_null() {
            return TkStatus::NullPointer;
        }
        let y = matvec_unchecked(a, rows, cols, x);
        if rows > 0 {
            ptr::copy_nonoverlapping(y.as_ptr(), out, rows);
        }
        TkStatus::Ok
    })
}

/// Sparse tensor-times-vector along the 0-based `mode`.
///
/// With `checked` set, the input triple is verified to be canonical and in
/// bounds and the arguments are validated. Without it the buffers are used
/// in place and must already satisfy those conditions.
///
/// # Safety
///
/// `subs` must hold `nnz * order` indices, `vals` `nnz` doubles, `shape`
/// `order` sizes and `x` `x_len` doubles; `out` must be writable. On success
/// `out` owns buffers that must be released with
/// [`tenkern_ttv_result_free`].
#[no_mangle]
pub unsafe extern "C" fn tenkern_ttv(
    subs: *const usize,
    vals: *const f64,
    nnz: usize,
    shape: *const usize,
    order: usize,
    x: *const f64,
    x_len: usize,
    mode: usize,
    checked: bool,
    out: *mut TkTtvResult,
) -> TkStatus {
    guarded(|| {
        if out.is_null() {
            return TkStatus::NullPointer;
        }
        let Some(width) = nnz.checked_mul(order) else {
            return TkStatus::Dimension;
        };
        let (Some(subs), Some(vals), Some(shape), Some(x)) = (
            borrow(subs, width),
            borrow(vals, nnz),
            borrow(shape, order),
            borrow(x, x_len),
        ) else {
            return TkStatus::NullPointer;
        };

        let result: TtvRawResult = if checked {
            let tensor = IndexMatrix::new(nnz, order, subs.to_vec()).and_then(|m| {
                SparseCooTensor::from_canonical_parts(shape.to_vec(), m, vals.to_vec())
            });
            match tensor.and_then(|t| ttv(&t, &DenseVector::new(x.to_vec()), mode)) {
                Ok(r) => r,
                Err(e) => return TkStatus::from(&e),
            }
        } else {
            ttv_parts_unchecked(subs, vals, shape, x, mode)
        };

        let nnz_out = result.nnz();
        let order_out = result.new_shape.len();
        let (s, v, sh) = result.into_flat();
        *out = TkTtvResult {
            subs: leak(s),
            vals: leak(v),
            shape: leak(sh),
            nnz: nnz_out,
            order: order_out,
        };
        TkStatus::Ok
    })
}

/// Releases the buffers of a [`TkTtvResult`] and resets it to empty.
///
/// # Safety
///
/// `res` must be null or point to a result filled by [`tenkern_ttv`] that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn tenkern_ttv_result_free(res: *mut TkTtvResult) {
    if let Some(r) = res.as_mut() {
        reclaim(r.subs, r.nnz * r.order);
        reclaim(r.vals, r.nnz);
        reclaim(r.shape, r.order);
        *r = TkTtvResult::empty();
    }
}
