//! Loop-based tensor kernels and a reproducible benchmark harness.
//!
//! Three kernels are provided: the vector dot product, the dense row-major
//! matrix-vector product and the sparse COO tensor-times-vector product. The
//! [`bench`] module times them with a warm-up call followed by repeated
//! trials and writes raw and summarized results as CSV. [`ffi`] exposes the
//! kernels through a C ABI for host-language bindings.

pub mod bench;
pub mod cli;
pub mod dense;
pub mod error;
pub mod ffi;
pub mod sparse;
pub mod synthetic;
pub mod verify;

pub use dense::{dot, matvec, DenseMatrix, DenseVector};
pub use error::{Error, Result};
pub use sparse::{ttv, IndexMatrix, SparseCooTensor, TtvRawResult};
