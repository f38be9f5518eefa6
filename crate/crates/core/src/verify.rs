//! Randomized self-checks run by `tenkern verify`.
//!
//! Every suite compares a kernel against a separately written reference
//! (plain nested loops, or contraction over a densified tensor) on operands
//! drawn from a seeded generator.

use rand::Rng;

use crate::bench::{run_experiment, summarize, Experiment, ExperimentConfig, NATIVE_LOOP};
use crate::dense::{dot, matvec, DenseMatrix, DenseVector};
use crate::sparse::{densify, ttv, DenseArray, IndexMatrix, SparseCooTensor};
use crate::synthetic::{gen_sparse3, generator, uniform_f64, GenSpec, Generator};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn from_result(name: &'static str, r: Result<String, String>) -> Self {
        match r {
            Ok(detail) => Self {
                name,
                passed: true,
                detail,
            },
            Err(detail) => Self {
                name,
                passed: false,
                detail,
            },
        }
    }
}

pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    vec![
        CheckOutcome::from_result("dense-oracle", dense_oracle(seed, 100)),
        CheckOutcome::from_result("ttv-oracle", ttv_oracle(seed, 50)),
        CheckOutcome::from_result("canonical-form", canonical_forms(seed, 1000)),
        CheckOutcome::from_result("zero-elimination", zero_elimination()),
        CheckOutcome::from_result("exact-density", exact_density(seed)),
        CheckOutcome::from_result("bench-schedule", bench_schedule(seed)),
    ]
}

fn random_vec(rng: &mut Generator, len: usize) -> Vec<f64> {
    (0..len).map(|_| 2.0 * uniform_f64(rng) - 1.0).collect()
}

/// Dot and matvec against textbook loops, bit for bit.
pub fn dense_oracle(seed: u64, cases: usize) -> Result<String, String> {
    let mut rng = generator(seed ^ 0xd0);
    for case in 0..cases {
        let rows = rng.random_range(1..=64);
        let cols = rng.random_range(1..=64);
        let a = random_vec(&mut rng, rows * cols);
        let x = random_vec(&mut rng, cols);

        let mut expected = vec![0.0f64; rows];
        for (i, out) in expected.iter_mut().enumerate() {
            let mut s = 0.0;
            for j in 0..cols {
                s += a[i * cols + j] * x[j];
            }
            *out = s;
        }
        let m = DenseMatrix::new(rows, cols, a).map_err(|e| e.to_string())?;
        let xv = DenseVector::new(x);
        let got = matvec(&m, &xv).map_err(|e| e.to_string())?;
        if got.as_slice().iter().zip(&expected).any(|(g, e)| g.to_bits() != e.to_bits()) {
            return Err(format!("matvec mismatch in case {case} ({rows}x{cols})"));
        }

        let y = random_vec(&mut rng, cols);
        let mut s = 0.0;
        for j in 0..cols {
            s += xv.as_slice()[j] * y[j];
        }
        let d = dot(&xv, &DenseVector::new(y)).map_err(|e| e.to_string())?;
        if d.to_bits() != s.to_bits() {
            return Err(format!("dot mismatch in case {case}: {d} vs {s}"));
        }
    }
    Ok(format!("{cases} cases bitwise equal"))
}

/// Contracts mode `k` of a dense array by direct summation.
pub fn dense_contract(a: &DenseArray, x: &[f64], k: usize) -> DenseArray {
    let shape = a.shape();
    let mut out_shape = shape.to_vec();
    out_shape.remove(k);
    let mut out = DenseArray::zeros(out_shape);
    let d = shape.len();
    let mut index = vec![0usize; d];
    let mut reduced = Vec::with_capacity(d - 1);
    for &v in a.data() {
        reduced.clear();
        reduced.extend(index.iter().enumerate().filter(|&(m, _)| m != k).map(|(_, &i)| i));
        let current = out.get(&reduced);
        out.set(&reduced, current + v * x[index[k]]);
        for m in (0..d).rev() {
            index[m] += 1;
            if index[m] < shape[m] {
                break;
            }
            index[m] = 0;
        }
    }
    out
}

/// Sparse TTV against densify-contract-sparsify on random third-order
/// tensors, all three modes.
pub fn ttv_oracle(seed: u64, cases: usize) -> Result<String, String> {
    let mut rng = generator(seed ^ 0x77);
    let mut compared = 0usize;
    for case in 0..cases {
        let dims = [
            rng.random_range(5..=20),
            rng.random_range(5..=20),
            rng.random_range(5..=20),
        ];
        let a = gen_sparse3(&GenSpec::sparse3(rng.random(), dims, 0.05))
            .map_err(|e| e.to_string())?;
        let dense = densify(&a).map_err(|e| e.to_string())?;
        let max_val = a.vals().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for k in 0..3 {
            let x = random_vec(&mut rng, dims[k]);
            let max_x = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let tol = 1e-12 * (1.0 + max_val * max_x * dims[k] as f64);
            let got = ttv(&a, &DenseVector::new(x.clone()), k)
                .map_err(|e| e.to_string())?
                .into_tensor();
            let expected = dense_contract(&dense, &x, k)
                .to_sparse()
                .map_err(|e| e.to_string())?;
            if got.subs() != expected.subs() {
                return Err(format!("index set mismatch: case {case}, mode {k}"));
            }
            for (g, e) in got.vals().iter().zip(expected.vals()) {
                if (g - e).abs() > tol {
                    return Err(format!("value {g} vs {e} (tol {tol:e}): case {case}, mode {k}"));
                }
            }
            compared += got.nnz();
        }
    }
    Ok(format!("{cases} tensors x 3 modes, {compared} entries compared"))
}

/// Generated tensors and the TTV outputs derived from them keep canonical
/// form.
pub fn canonical_forms(seed: u64, cases: usize) -> Result<String, String> {
    let mut rng = generator(seed ^ 0xca);
    for case in 0..cases {
        let dims = [
            rng.random_range(1..=12),
            rng.random_range(1..=12),
            rng.random_range(1..=12),
        ];
        let total = (dims[0] * dims[1] * dims[2]) as f64;
        let density = rng.random_range((1.0 / total).min(1.0)..=1.0);
        let a = gen_sparse3(&GenSpec::sparse3(rng.random(), dims, density))
            .map_err(|e| format!("case {case}: {e}"))?;
        a.validate().map_err(|e| format!("case {case}: {e}"))?;
        for k in 0..3 {
            let x: Vec<f64> = (0..dims[k]).map(|_| rng.random_range(-2i32..=2) as f64).collect();
            let out = ttv(&a, &DenseVector::new(x), k).map_err(|e| e.to_string())?;
            if out.nnz() > a.nnz() {
                return Err(format!("case {case}: output larger than input"));
            }
            out.into_tensor()
                .validate()
                .map_err(|e| format!("case {case}, mode {k}: {e}"))?;
        }
    }
    Ok(format!("{cases} tensors and {} products", 3 * cases))
}

pub fn zero_elimination() -> Result<String, String> {
    let a = SparseCooTensor::new(
        vec![3, 3, 3],
        IndexMatrix::from_rows(&[vec![0, 0, 0], vec![0, 2, 0]]).map_err(|e| e.to_string())?,
        vec![1.0, -1.0],
    )
    .map_err(|e| e.to_string())?;
    let out = ttv(&a, &DenseVector::new(vec![1.0; 3]), 1).map_err(|e| e.to_string())?;
    if out.nnz() == 0 {
        Ok("cancelling entries removed".into())
    } else {
        Err(format!("expected no nonzeros, got {}", out.nnz()))
    }
}

pub fn exact_density(seed: u64) -> Result<String, String> {
    let t = gen_sparse3(&GenSpec::sparse3(seed, [100, 100, 100], 0.01))
        .map_err(|e| e.to_string())?;
    if t.nnz() != 10_000 {
        return Err(format!("expected 10000 nonzeros, got {}", t.nnz()));
    }
    if !t.vals().iter().all(|v| (0.0..1.0).contains(v)) {
        return Err("value outside [0, 1)".into());
    }
    Ok("10000 nonzeros".into())
}

pub fn bench_schedule(seed: u64) -> Result<String, String> {
    let cfg = ExperimentConfig::new(Experiment::Dot)
        .with_sizes(vec![1000])
        .with_trials(3)
        .with_seed(seed);
    let records = run_experiment(&cfg, &[NATIVE_LOOP]).map_err(|e| e.to_string())?;
    let warmups = records.iter().filter(|r| r.is_warmup).count();
    if records.len() != 4 || warmups != 1 {
        return Err(format!("{} records, {warmups} warm-ups", records.len()));
    }
    let mut buf = Vec::new();
    crate::bench::write_records_to(&mut buf, &records).map_err(|e| e.to_string())?;
    let back = crate::bench::read_records_from(buf.as_slice(), std::path::Path::new("<memory>"))
        .map_err(|e| e.to_string())?;
    if back != records {
        return Err("CSV round trip changed the records".into());
    }
    let summary = summarize(&records).map_err(|e| e.to_string())?;
    if summary.len() != 1 || summary[0].n != 3 {
        return Err("summary does not cover exactly the 3 timed trials".into());
    }
    Ok("4 records, CSV round trip exact".into())
}
