//! Array primitives the sparse kernel is assembled from: index-set
//! difference and group-by-row summation.

use super::IndexMatrix;

/// Elements of `universe` that do not occur in `remove`, in their original
/// order. Entries of `remove` that are not in `universe` are ignored.
pub fn set_difference(universe: &[usize], remove: &[usize]) -> Vec<usize> {
    let mut remove = remove.to_vec();
    remove.sort_unstable();
    universe
        .iter()
        .copied()
        .filter(|u| remove.binary_search(u).is_err())
        .collect()
}

/// Groups identical rows of `keys` and sums the aligned `weights`.
///
/// Returns the distinct rows in lexicographic order together with one sum
/// per row. Inside a group the weights are added in ascending original-row
/// order, starting from the first weight of the group, so the result is
/// reproducible bit for bit.
///
/// # Panics
///
/// If `keys.nrows() != weights.len()`.
pub fn unique_rows_accumulate(keys: &IndexMatrix, weights: &[f64]) -> (IndexMatrix, Vec<f64>) {
    assert_eq!(
        keys.nrows(),
        weights.len(),
        "key row count must match weight count"
    );
    let n = keys.nrows();
    let width = keys.ncols();

    let mut order: Vec<usize> = (0..n).collect();
    let presorted = (1..n).all(|i| keys.row(i - 1) <= keys.row(i));
    if !presorted {
        // stable: equal rows keep ascending original index
        order.sort_by(|&i, &j| keys.row(i).cmp(keys.row(j)));
    }

    let mut out_keys = Vec::new();
    let mut out_vals = Vec::new();
    let mut groups = 0;
    let mut iter = order.into_iter();
    if let Some(first) = iter.next() {
        let mut current = keys.row(first);
        let mut acc = weights[first];
        for idx in iter {
            let row = keys.row(idx);
            if row == current {
                acc += weights[idx];
            } else {
                out_keys.extend_from_slice(current);
                out_vals.push(acc);
                groups += 1;
                current = row;
                acc = weights[idx];
            }
        }
        out_keys.extend_from_slice(current);
        out_vals.push(acc);
        groups += 1;
    }

    (IndexMatrix::from_raw(groups, width, out_keys), out_vals)
}
