//! Loop-based dense kernels: vector dot product and row-major matrix-vector
//! product.
//!
//! Every reduction here is a single scalar accumulator starting at `0.0` and
//! walking the operands left to right. No pairwise summation, no fused
//! multiply-add, no blocking. Another implementation that follows the same
//! order over the same bytes produces bitwise-identical results.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DenseVector {
    data: Vec<f64>,
}

impl DenseVector {
    pub fn new(data: Vec<f64>) -> Self {
        Self { data }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            data: vec![0.0; len],
        }
    }

    /// Standard basis vector `e_index` of length `len`.
    pub fn basis(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.data[index] = 1.0;
        v
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }
}

impl From<Vec<f64>> for DenseVector {
    fn from(data: Vec<f64>) -> Self {
        Self::new(data)
    }
}

impl AsRef<[f64]> for DenseVector {
    fn as_ref(&self) -> &[f64] {
        &self.data
    }
}

/// Row-major `rows x cols` matrix. Element `(i, j)` lives at `i * cols + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Config(format!(
                "matrix shape must be positive, got {rows}x{cols}"
            )));
        }
        let expected = rows.checked_mul(cols).ok_or(Error::Dimension {
            what: "matrix element count overflows",
            left: rows,
            right: cols,
        })?;
        if data.len() != expected {
            return Err(Error::Dimension {
                what: "matrix data length vs rows*cols",
                left: data.len(),
                right: expected,
            });
        }
        Ok(Self { data, rows, cols })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::Dimension {
                    what: "ragged matrix rows",
                    left: row.len(),
                    right: cols,
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self::new(n, n, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// `sum_i x[i] * y[i]` with the fixed left-to-right order.
pub fn dot(x: &DenseVector, y: &DenseVector) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            what: "dot operand lengths",
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(dot_unchecked(x.as_slice(), y.as_slice()))
}

/// Dot product over raw slices. Iterates over the shorter of the two when the
/// lengths differ; callers are expected to have checked them.
#[inline]
pub fn dot_unchecked(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (a, b) in x.iter().zip(y) {
        acc += a * b;
    }
    acc
}

/// Matrix-vector product: outer loop over rows, inner loop over columns.
pub fn matvec(a: &DenseMatrix, x: &DenseVector) -> Result<DenseVector> {
    if a.cols() != x.len() {
        return Err(Error::Dimension {
            what: "matrix cols vs vector length",
            left: a.cols(),
            right: x.len(),
        });
    }
    Ok(DenseVector::new(matvec_unchecked(
        a.as_slice(),
        a.rows(),
        a.cols(),
        x.as_slice(),
    )))
}

/// Matrix-vector product over a raw row-major buffer.
///
/// `a` must hold at least `rows * cols` elements and `x` at least `cols`.
pub fn matvec_unchecked(a: &[f64], rows: usize, cols: usize, x: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(rows);
    for i in 0..rows {
        let row = &a[i * cols..(i + 1) * cols];
        let mut acc = 0.0;
        for j in 0..cols {
            acc += row[j] * x[j];
        }
        out.push(acc);
    }
    out
}
