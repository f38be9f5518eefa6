use super::{drop_zeros, set_difference, unique_rows_accumulate, IndexMatrix, SparseCooTensor};
use crate::dense::DenseVector;
use crate::error::{Error, Result};

/// Output of [`ttv`]: the `(new_subs, new_vals, new_shape)` triple.
///
/// This is the exchange format handed across language boundaries; the
/// receiving side rebuilds its own sparse tensor object from it. Canonical
/// form is guaranteed by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TtvRawResult {
    pub new_subs: IndexMatrix,
    pub new_vals: Vec<f64>,
    pub new_shape: Vec<usize>,
}

impl TtvRawResult {
    pub fn nnz(&self) -> usize {
        self.new_vals.len()
    }

    pub fn into_tensor(self) -> SparseCooTensor {
        SparseCooTensor::from_parts_unchecked(self.new_shape, self.new_subs, self.new_vals)
    }

    /// Flat buffers: row-major `nnz x (d-1)` indices, values, shape.
    pub fn into_flat(self) -> (Vec<usize>, Vec<f64>, Vec<usize>) {
        (self.new_subs.into_vec(), self.new_vals, self.new_shape)
    }
}

/// Mode-`k` tensor-times-vector product (`k` is 0-based).
///
/// Contracts mode `k` of `a` against `x`, producing an order `d-1` sparse
/// tensor. Requires `d >= 2`, `k < d` and `x.len() == a.shape()[k]`.
pub fn ttv(a: &SparseCooTensor, x: &DenseVector, k: usize) -> Result<TtvRawResult> {
    let d = a.order();
    if d < 2 {
        return Err(Error::UnsupportedOrder {
            order: d,
            reason: "tensor-times-vector needs at least two modes",
        });
    }
    if k >= d {
        return Err(Error::Mode { mode: k, order: d });
    }
    if x.len() != a.shape()[k] {
        return Err(Error::Dimension {
            what: "vector length vs contracted mode size",
            left: x.len(),
            right: a.shape()[k],
        });
    }
    Ok(ttv_unchecked(a, x.as_slice(), k))
}

/// [`ttv`] without argument validation, for timed regions.
///
/// # Panics
///
/// Out-of-range `k` or a short `x` panic on indexing rather than returning an
/// error.
pub fn ttv_unchecked(a: &SparseCooTensor, x: &[f64], k: usize) -> TtvRawResult {
    ttv_parts_unchecked(a.subs().as_slice(), a.vals(), a.shape(), x, k)
}

/// Tensor-times-vector over borrowed COO buffers.
///
/// `subs` is the row-major `nnz x d` index buffer with `d = shape.len()`.
/// The buffers must describe a canonical tensor; nothing is checked.
pub fn ttv_parts_unchecked(
    subs: &[usize],
    vals: &[f64],
    shape: &[usize],
    x: &[f64],
    k: usize,
) -> TtvRawResult {
    let d = shape.len();
    let all_modes: Vec<usize> = (0..d).collect();
    let kept = set_difference(&all_modes, &[k]);
    let width = kept.len();
    let nnz = vals.len();

    // scale each stored value and project its index onto the kept modes
    let mut keys = Vec::with_capacity(nnz * width);
    let mut weights = Vec::with_capacity(nnz);
    for (row, v) in subs.chunks_exact(d).zip(vals) {
        weights.push(v * x[row[k]]);
        keys.extend(kept.iter().map(|&m| row[m]));
    }
    let keys = IndexMatrix::from_raw(nnz, width, keys);

    let (new_subs, new_vals) = unique_rows_accumulate(&keys, &weights);
    let (new_subs, new_vals) = drop_zeros(new_subs, new_vals);
    let new_shape = kept.iter().map(|&m| shape[m]).collect();

    TtvRawResult {
        new_subs,
        new_vals,
        new_shape,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparse::densify;
    use proptest::prelude::*;

    fn tensor(shape: &[usize], entries: &[(&[usize], f64)]) -> SparseCooTensor {
        let subs =
            IndexMatrix::from_rows(&entries.iter().map(|e| e.0.to_vec()).collect::<Vec<_>>())
                .unwrap();
        let subs = if entries.is_empty() {
            IndexMatrix::empty(shape.len())
        } else {
            subs
        };
        SparseCooTensor::new(shape.to_vec(), subs, entries.iter().map(|e| e.1).collect())
            .unwrap()
    }

    #[test]
    fn two_entries_collapse_along_mode_one() {
        let a = tensor(&[2, 2, 2], &[(&[0, 0, 0], 2.0), (&[0, 1, 0], 3.0)]);
        let out = ttv(&a, &DenseVector::new(vec![10.0, 100.0]), 1).unwrap();
        assert_eq!(out.new_shape, vec![2, 2]);
        assert_eq!(out.new_subs.to_rows(), vec![vec![0, 0]]);
        assert_eq!(out.new_vals, vec![320.0]);
    }

    #[test]
    fn zero_vector_annihilates() {
        let a = tensor(&[3, 4, 5], &[(&[0, 1, 2], 1.0), (&[2, 3, 4], 7.0)]);
        for k in 0..3 {
            let out = ttv(&a, &DenseVector::zeros(a.shape()[k]), k).unwrap();
            assert_eq!(out.nnz(), 0);
            let mut expected = a.shape().to_vec();
            expected.remove(k);
            assert_eq!(out.new_shape, expected);
        }
    }

    #[test]
    fn cancelling_entries_are_eliminated() {
        let a = tensor(&[3, 3, 3], &[(&[0, 0, 0], 1.0), (&[0, 2, 0], -1.0)]);
        let out = ttv(&a, &DenseVector::new(vec![1.0; 3]), 1).unwrap();
        assert_eq!(out.nnz(), 0);
        assert_eq!(out.new_shape, vec![3, 3]);
    }

    #[test]
    fn order_two_gives_sparse_vector() {
        let a = tensor(&[2, 3], &[(&[0, 2], 2.0), (&[1, 0], 5.0)]);
        let out = ttv(&a, &DenseVector::new(vec![1.0, 2.0, 3.0]), 1).unwrap();
        assert_eq!(out.new_shape, vec![2]);
        assert_eq!(out.new_subs.to_rows(), vec![vec![0], vec![1]]);
        assert_eq!(out.new_vals, vec![6.0, 5.0]);
    }

    #[test]
    fn validation_errors() {
        let a = tensor(&[2, 3, 4], &[(&[0, 0, 0], 1.0)]);
        assert!(matches!(
            ttv(&a, &DenseVector::zeros(3), 3),
            Err(Error::Mode { mode: 3, order: 3 })
        ));
        assert!(matches!(
            ttv(&a, &DenseVector::zeros(4), 1),
            Err(Error::Dimension { left: 4, right: 3, .. })
        ));
        let v = tensor(&[4], &[(&[1], 1.0)]);
        assert!(matches!(
            ttv(&v, &DenseVector::zeros(4), 0),
            Err(Error::UnsupportedOrder { order: 1, .. })
        ));
    }

    fn small_tensor() -> impl Strategy<Value = SparseCooTensor> {
        prop::collection::vec(1usize..5, 2..5).prop_flat_map(|shape| {
            let entry = (
                shape.iter().map(|&n| 0..n).collect::<Vec<_>>(),
                prop_oneof![(-4i32..5).prop_map(f64::from), -1.0f64..1.0],
            );
            prop::collection::vec(entry, 0..30).prop_map(move |entries| {
                let d = shape.len();
                let subs: Vec<usize> = entries.iter().flat_map(|e| e.0.clone()).collect();
                let vals = entries.iter().map(|e| e.1).collect();
                SparseCooTensor::new(
                    shape.clone(),
                    IndexMatrix::new(entries.len(), d, subs).unwrap(),
                    vals,
                )
                .unwrap()
            })
        })
    }

    fn tensor_vec_mode() -> impl Strategy<Value = (SparseCooTensor, Vec<f64>, Vec<f64>, usize)> {
        small_tensor().prop_flat_map(|a| {
            let d = a.order();
            (Just(a), 0..d).prop_flat_map(|(a, k)| {
                let n = a.shape()[k];
                let elem = prop_oneof![(-3i32..4).prop_map(f64::from), -2.0f64..2.0];
                (
                    Just(a),
                    prop::collection::vec(elem.clone(), n),
                    prop::collection::vec(elem, n),
                    Just(k),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn output_is_canonical_and_not_larger((a, x, _, k) in tensor_vec_mode()) {
            let out = ttv(&a, &DenseVector::new(x), k).unwrap();
            prop_assert!(out.nnz() <= a.nnz());
            prop_assert_eq!(out.new_shape.len(), a.order() - 1);
            let mut expected_shape = a.shape().to_vec();
            expected_shape.remove(k);
            prop_assert_eq!(&out.new_shape, &expected_shape);
            out.into_tensor().validate().unwrap();
        }

        #[test]
        fn linear_in_vector(
            (a, x, y, k) in tensor_vec_mode(),
            alpha in -3.0f64..3.0,
            beta in -3.0f64..3.0,
        ) {
            let combo: Vec<f64> = x.iter().zip(&y).map(|(p, q)| alpha * p + beta * q).collect();
            let lhs = densify(&ttv(&a, &DenseVector::new(combo), k).unwrap().into_tensor()).unwrap();
            let tx = densify(&ttv(&a, &DenseVector::new(x), k).unwrap().into_tensor()).unwrap();
            let ty = densify(&ttv(&a, &DenseVector::new(y), k).unwrap().into_tensor()).unwrap();
            let scale = 1.0 + a.vals().iter().fold(0.0f64, |m, v| m.max(v.abs())) * 12.0 * a.shape()[k] as f64;
            for i in 0..lhs.data().len() {
                let rhs = alpha * tx.data()[i] + beta * ty.data()[i];
                prop_assert!((lhs.data()[i] - rhs).abs() <= 1e-10 * scale,
                    "entry {}: {} vs {}", i, lhs.data()[i], rhs);
            }
        }
    }
}
