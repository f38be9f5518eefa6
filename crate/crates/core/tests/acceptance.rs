//! Acceptance criteria. Each test prints one PASS/FAIL line; run with
//! `cargo test -p tenkern --test acceptance -- --nocapture --test-threads=1`
//! to see them in order.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use tenkern::bench::{read_records, write_records};
use tenkern::sparse::ttv;
use tenkern::synthetic::{gen_sparse3, generator, uniform_f64, GenSpec, Generator};
use tenkern::{dot, matvec, DenseMatrix, DenseVector, IndexMatrix, SparseCooTensor};

fn criterion(name: &str, budget: Option<Duration>, check: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let result = match (result, budget) {
        (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:?}, budget {b:?}")),
        (r, _) => r,
    };
    match result {
        Ok(detail) => println!("[PASS] {name}: {detail} ({:.3}s)", elapsed.as_secs_f64()),
        Err(detail) => {
            println!("[FAIL] {name}: {detail}");
            panic!("acceptance criterion failed: {name}: {detail}");
        }
    }
}

fn signed_vec(rng: &mut Generator, n: usize) -> Vec<f64> {
    (0..n).map(|_| 2.0 * uniform_f64(rng) - 1.0).collect()
}

/// Brute force: place entries in a flat dense buffer, contract mode `k` by
/// walking every (i, j, l), keep nonzero results keyed by the remaining pair.
fn dense_ttv_oracle(t: &SparseCooTensor, x: &[f64], k: usize) -> BTreeMap<(usize, usize), f64> {
    let [n0, n1, n2] = [t.shape()[0], t.shape()[1], t.shape()[2]];
    let mut dense = vec![0.0f64; n0 * n1 * n2];
    for r in 0..t.nnz() {
        let s = t.subs().row(r);
        dense[(s[0] * n1 + s[1]) * n2 + s[2]] = t.vals()[r];
    }
    let mut out: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for i in 0..n0 {
        for j in 0..n1 {
            for l in 0..n2 {
                let idx = [i, j, l];
                let key = match k {
                    0 => (j, l),
                    1 => (i, l),
                    _ => (i, j),
                };
                *out.entry(key).or_insert(0.0) += dense[(i * n1 + j) * n2 + l] * x[idx[k]];
            }
        }
    }
    out.retain(|_, v| *v != 0.0);
    out
}

fn check_canonical(shape: &[usize], subs: &IndexMatrix, vals: &[f64]) -> Result<(), String> {
    if subs.nrows() != vals.len() || subs.ncols() != shape.len() {
        return Err("layout mismatch".into());
    }
    for r in 0..subs.nrows() {
        let row = subs.row(r);
        if row.iter().zip(shape).any(|(i, n)| i >= n) {
            return Err(format!("row {r} out of bounds"));
        }
        if r > 0 && subs.row(r - 1) >= row {
            return Err(format!("rows {} and {r} not strictly increasing", r - 1));
        }
        if vals[r] == 0.0 {
            return Err(format!("explicit zero at {r}"));
        }
    }
    Ok(())
}

#[test]
fn ttv_oracle_equivalence() {
    criterion("TTV oracle equivalence", Some(Duration::from_secs(10)), || {
        let mut rng = generator(0xacce);
        let mut entries = 0;
        for case in 0..50 {
            let dims = [
                rng.random_range(5..=20),
                rng.random_range(5..=20),
                rng.random_range(5..=20),
            ];
            let t = gen_sparse3(&GenSpec::sparse3(rng.random(), dims, 0.05))
                .map_err(|e| e.to_string())?;
            let max_val = t.vals().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            for k in 0..3 {
                let x = signed_vec(&mut rng, dims[k]);
                let max_x = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let tol = 1e-12 * (1.0 + max_val * max_x * dims[k] as f64);
                let got = ttv(&t, &DenseVector::new(x.clone()), k).map_err(|e| e.to_string())?;
                let expected = dense_ttv_oracle(&t, &x, k);
                if got.nnz() != expected.len() {
                    return Err(format!(
                        "case {case} mode {k}: {} entries vs oracle {}",
                        got.nnz(),
                        expected.len()
                    ));
                }
                for (r, ((i, j), want)) in expected.iter().enumerate() {
                    if got.new_subs.row(r) != [*i, *j] {
                        return Err(format!("case {case} mode {k}: index set differs at {r}"));
                    }
                    let have = got.new_vals[r];
                    if (have - want).abs() > tol {
                        return Err(format!("case {case} mode {k}: {have} vs {want}"));
                    }
                }
                entries += got.nnz();
            }
        }
        Ok(format!("50 tensors x 3 modes, {entries} entries"))
    });
}

#[test]
fn dense_kernel_bitwise_oracle() {
    criterion("Dense kernel bitwise oracle", Some(Duration::from_secs(5)), || {
        let mut rng = generator(0xde05e);
        for case in 0..100 {
            let rows = rng.random_range(1..=64usize);
            let cols = rng.random_range(1..=64usize);
            let a = signed_vec(&mut rng, rows * cols);
            let x = signed_vec(&mut rng, cols);
            let y = signed_vec(&mut rng, cols);

            let m = DenseMatrix::new(rows, cols, a.clone()).map_err(|e| e.to_string())?;
            let got = matvec(&m, &DenseVector::new(x.clone())).map_err(|e| e.to_string())?;
            for i in 0..rows {
                let mut acc = 0.0f64;
                for j in 0..cols {
                    acc += a[i * cols + j] * x[j];
                }
                if got.as_slice()[i].to_bits() != acc.to_bits() {
                    return Err(format!("matvec case {case} row {i}"));
                }
            }

            let mut acc = 0.0f64;
            for j in 0..cols {
                acc += x[j] * y[j];
            }
            let d = dot(&DenseVector::new(x), &DenseVector::new(y)).map_err(|e| e.to_string())?;
            if d.to_bits() != acc.to_bits() {
                return Err(format!("dot case {case}: {d} vs {acc}"));
            }
        }
        Ok("100 cases".into())
    });
}

#[test]
fn canonical_form_invariants() {
    criterion("Canonical-form invariants", Some(Duration::from_secs(30)), || {
        let mut rng = generator(0xca4);
        let mut products = 0;
        for case in 0..1000 {
            let dims = [
                rng.random_range(1..=15usize),
                rng.random_range(1..=15usize),
                rng.random_range(1..=15usize),
            ];
            let total = (dims[0] * dims[1] * dims[2]) as f64;
            let density = rng.random_range((1.0 / total).min(1.0)..=1.0);
            let t = gen_sparse3(&GenSpec::sparse3(rng.random(), dims, density))
                .map_err(|e| format!("case {case}: {e}"))?;
            check_canonical(t.shape(), t.subs(), t.vals()).map_err(|e| format!("case {case}: {e}"))?;
            for k in 0..3 {
                // small integers make exact cancellation likely
                let x: Vec<f64> = (0..dims[k]).map(|_| rng.random_range(-2i32..=2) as f64).collect();
                let out = ttv(&t, &DenseVector::new(x), k).map_err(|e| e.to_string())?;
                check_canonical(&out.new_shape, &out.new_subs, &out.new_vals)
                    .map_err(|e| format!("case {case} mode {k}: {e}"))?;
                products += 1;
            }
        }
        Ok(format!("1000 tensors, {products} products"))
    });
}

#[test]
fn exact_nonzero_count() {
    criterion("gen_sparse3 exact density", None, || {
        let t = gen_sparse3(&GenSpec::sparse3(2024, [100, 100, 100], 0.01))
            .map_err(|e| e.to_string())?;
        if t.nnz() != 10_000 {
            return Err(format!("{} nonzeros", t.nnz()));
        }
        if !t.vals().iter().all(|v| (0.0..1.0).contains(v)) {
            return Err("value outside [0, 1)".into());
        }
        Ok("10000 nonzeros, values in [0, 1)".into())
    });
}

#[test]
fn bench_schedule_thirty_trials() {
    criterion("Bench schedule", None, || {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let out = dir.path().join("r.csv");
        let status = Command::new(env!("CARGO_BIN_EXE_tenkern"))
            .args(["bench", "--experiment", "dot", "--sizes", "1000", "--trials", "30", "--out"])
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("exit status {status}"));
        }
        let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
        let records = read_records(&out).map_err(|e| e.to_string())?;
        let mut per_impl: BTreeMap<&str, Vec<_>> = BTreeMap::new();
        for r in &records {
            per_impl.entry(&r.implementation).or_default().push(r);
        }
        for (imp, recs) in &per_impl {
            if recs.len() != 31 {
                return Err(format!("{imp}: {} records", recs.len()));
            }
            let warm: Vec<_> = recs.iter().filter(|r| r.is_warmup).collect();
            if warm.len() != 1 || warm[0].trial != 0 {
                return Err(format!("{imp}: warm-up records {warm:?}"));
            }
            let trials: Vec<usize> = recs.iter().filter(|r| !r.is_warmup).map(|r| r.trial).collect();
            if trials != (1..=30).collect::<Vec<_>>() {
                return Err(format!("{imp}: trial indices {trials:?}"));
            }
        }
        // lossless: re-serializing the parsed records reproduces the file
        let again = dir.path().join("again.csv");
        write_records(&again, &records).map_err(|e| e.to_string())?;
        if std::fs::read_to_string(&again).map_err(|e| e.to_string())? != text {
            return Err("CSV round trip is not byte-identical".into());
        }
        if read_records(&again).map_err(|e| e.to_string())? != records {
            return Err("CSV round trip changed values".into());
        }
        Ok(format!("{} implementation(s) x 31 records", per_impl.len()))
    });
}

#[test]
fn zero_elimination_path() {
    criterion("Zero-elimination path", None, || {
        let t = SparseCooTensor::new(
            vec![3, 3, 3],
            IndexMatrix::from_rows(&[vec![0, 0, 0], vec![0, 2, 0]]).map_err(|e| e.to_string())?,
            vec![1.0, -1.0],
        )
        .map_err(|e| e.to_string())?;
        let out = ttv(&t, &DenseVector::new(vec![1.0; 3]), 1).map_err(|e| e.to_string())?;
        if out.nnz() != 0 {
            return Err(format!("nnz_out = {}", out.nnz()));
        }
        Ok("nnz_out == 0".into())
    });
}
