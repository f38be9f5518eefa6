//! Coordinate-format (COO) sparse tensors and the mode-k tensor-times-vector
//! product.
//!
//! A [`SparseCooTensor`] is always held in canonical form: index rows are
//! unique and sorted lexicographically, and no stored value is `0.0`. Modes
//! are 0-based throughout the library.

mod dense_array;
mod helpers;
mod ttv;

pub use dense_array::{densify, densify_with_cap, DenseArray, DEFAULT_DENSIFY_CAP};
pub use helpers::{set_difference, unique_rows_accumulate};
pub use ttv::{ttv, ttv_parts_unchecked, ttv_unchecked, TtvRawResult};

use crate::error::{Error, Result};

/// Row-major matrix of indices, `nrows x ncols`.
///
/// The row count is stored explicitly so that zero-width matrices still know
/// how many rows they have.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndexMatrix {
    data: Vec<usize>,
    nrows: usize,
    ncols: usize,
}

impl IndexMatrix {
    pub fn new(nrows: usize, ncols: usize, data: Vec<usize>) -> Result<Self> {
        if nrows.checked_mul(ncols) != Some(data.len()) {
            return Err(Error::Dimension {
                what: "index matrix buffer length vs nrows*ncols",
                left: data.len(),
                right: nrows.saturating_mul(ncols),
            });
        }
        Ok(Self { data, nrows, ncols })
    }

    pub(crate) fn from_raw(nrows: usize, ncols: usize, data: Vec<usize>) -> Self {
        debug_assert_eq!(nrows * ncols, data.len());
        Self { data, nrows, ncols }
    }

    pub fn empty(ncols: usize) -> Self {
        Self {
            data: Vec::new(),
            nrows: 0,
            ncols,
        }
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::Dimension {
                what: "ragged index rows",
                left: bad.len(),
                right: ncols,
            });
        }
        Ok(Self::from_raw(rows.len(), ncols, rows.concat()))
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[usize] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        (0..self.nrows).map(move |i| self.row(i))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        self.rows().map(<[usize]>::to_vec).collect()
    }
}

/// d-way sparse tensor in canonical COO form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCooTensor {
    subs: IndexMatrix,
    vals: Vec<f64>,
    shape: Vec<usize>,
}

impl SparseCooTensor {
    /// Builds a tensor from arbitrary COO triples.
    ///
    /// Rows are sorted, duplicate index rows are summed and entries equal to
    /// `0.0` after summation are dropped.
    pub fn new(shape: Vec<usize>, subs: IndexMatrix, vals: Vec<f64>) -> Result<Self> {
        check_layout(&shape, &subs, &vals)?;
        let (subs, vals) = unique_rows_accumulate(&subs, &vals);
        let (subs, vals) = drop_zeros(subs, vals);
        Ok(Self { subs, vals, shape })
    }

    /// Builds a tensor from triples that must already be canonical. Nothing is
    /// reordered; any violation is reported as an integrity error.
    pub fn from_canonical_parts(
        shape: Vec<usize>,
        subs: IndexMatrix,
        vals: Vec<f64>,
    ) -> Result<Self> {
        check_layout(&shape, &subs, &vals)?;
        check_canonical(&subs, &vals)?;
        Ok(Self { subs, vals, shape })
    }

    /// Wraps triples without any validation. The caller guarantees canonical
    /// form and index bounds; the unchecked kernels rely on both.
    pub fn from_parts_unchecked(shape: Vec<usize>, subs: IndexMatrix, vals: Vec<f64>) -> Self {
        Self { subs, vals, shape }
    }

    pub fn empty(shape: Vec<usize>) -> Result<Self> {
        let d = shape.len();
        Self::from_canonical_parts(shape, IndexMatrix::empty(d), Vec::new())
    }

    /// Number of modes `d`.
    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn subs(&self) -> &IndexMatrix {
        &self.subs
    }

    pub fn vals(&self) -> &[f64] {
        &self.vals
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = (&[usize], f64)> + '_ {
        self.subs.rows().zip(self.vals.iter().copied())
    }

    pub fn into_parts(self) -> (IndexMatrix, Vec<f64>, Vec<usize>) {
        (self.subs, self.vals, self.shape)
    }

    /// Re-checks every canonical-form invariant.
    pub fn validate(&self) -> Result<()> {
        check_layout(&self.shape, &self.subs, &self.vals)?;
        check_canonical(&self.subs, &self.vals)
    }
}

fn check_layout(shape: &[usize], subs: &IndexMatrix, vals: &[f64]) -> Result<()> {
    if shape.is_empty() {
        return Err(Error::InvalidTensor("shape must have at least one mode".into()));
    }
    if let Some(m) = shape.iter().position(|&n| n == 0) {
        return Err(Error::InvalidTensor(format!("mode {m} has size 0")));
    }
    if subs.ncols() != shape.len() {
        return Err(Error::Dimension {
            what: "index width vs tensor order",
            left: subs.ncols(),
            right: shape.len(),
        });
    }
    if subs.nrows() != vals.len() {
        return Err(Error::Dimension {
            what: "index row count vs value count",
            left: subs.nrows(),
            right: vals.len(),
        });
    }
    for (r, row) in subs.rows().enumerate() {
        if let Some((m, &i)) = row.iter().enumerate().find(|&(m, &i)| i >= shape[m]) {
            return Err(Error::InvalidTensor(format!(
                "entry {r}: index {i} out of bounds for mode {m} of size {}",
                shape[m]
            )));
        }
    }
    Ok(())
}

fn check_canonical(subs: &IndexMatrix, vals: &[f64]) -> Result<()> {
    for r in 1..subs.nrows() {
        if subs.row(r - 1) >= subs.row(r) {
            return Err(Error::Integrity(format!(
                "index rows {} and {r} are not strictly increasing",
                r - 1
            )));
        }
    }
    if let Some(r) = vals.iter().position(|&v| v == 0.0) {
        return Err(Error::Integrity(format!("entry {r} stores an explicit zero")));
    }
    Ok(())
}

pub(crate) fn drop_zeros(subs: IndexMatrix, vals: Vec<f64>) -> (IndexMatrix, Vec<f64>) {
    if !vals.contains(&0.0) {
        return (subs, vals);
    }
    let width = subs.ncols();
    let mut keep_subs = Vec::with_capacity(subs.as_slice().len());
    let mut keep_vals = Vec::with_capacity(vals.len());
    for (row, v) in subs.rows().zip(vals) {
        if v != 0.0 {
            keep_subs.extend_from_slice(row);
            keep_vals.push(v);
        }
    }
    let n = keep_vals.len();
    (IndexMatrix::from_raw(n, width, keep_subs), keep_vals)
}
