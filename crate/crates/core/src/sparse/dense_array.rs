use super::{IndexMatrix, SparseCooTensor};
use crate::error::{Error, Result};

/// Default element cap for [`densify`].
pub const DEFAULT_DENSIFY_CAP: u64 = 1_000_000;

/// Dense d-way array, row-major (last mode varies fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseArray {
    shape: Vec<usize>,
    data: Vec<f64>,
}

impl DenseArray {
    pub fn zeros(shape: Vec<usize>) -> Self {
        let len = shape.iter().product();
        Self {
            shape,
            data: vec![0.0; len],
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn offset(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.shape.len());
        index
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.data[self.offset(index)]
    }

    pub fn set(&mut self, index: &[usize], value: f64) {
        let off = self.offset(index);
        self.data[off] = value;
    }

    /// Canonical sparse view of the nonzero elements. Row-major traversal
    /// already visits indices in lexicographic order.
    pub fn to_sparse(&self) -> Result<SparseCooTensor> {
        let d = self.shape.len();
        let mut subs = Vec::new();
        let mut vals = Vec::new();
        let mut index = vec![0usize; d];
        for &v in &self.data {
            if v != 0.0 {
                subs.extend_from_slice(&index);
                vals.push(v);
            }
            // odometer increment
            for m in (0..d).rev() {
                index[m] += 1;
                if index[m] < self.shape[m] {
                    break;
                }
                index[m] = 0;
            }
        }
        let n = vals.len();
        SparseCooTensor::from_canonical_parts(
            self.shape.clone(),
            IndexMatrix::new(n, d, subs)?,
            vals,
        )
    }
}

pub fn densify(a: &SparseCooTensor) -> Result<DenseArray> {
    densify_with_cap(a, DEFAULT_DENSIFY_CAP)
}

/// Expands `a` into a dense array, refusing shapes with more than `cap`
/// elements.
pub fn densify_with_cap(a: &SparseCooTensor, cap: u64) -> Result<DenseArray> {
    let total = a
        .shape()
        .iter()
        .try_fold(1u64, |acc, &n| acc.checked_mul(n as u64))
        .unwrap_or(u64::MAX);
    if total > cap {
        return Err(Error::Size {
            descriptor: format!("dense array of shape {:?}", a.shape()),
            requested: total,
            cap,
        });
    }
    let mut out = DenseArray::zeros(a.shape().to_vec());
    for (index, v) in a.iter() {
        out.set(index, v);
    }
    Ok(out)
}
