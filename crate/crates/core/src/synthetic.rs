//! Seeded generation of benchmark operands.
//!
//! All randomness comes from xoshiro256++ seeded through SplitMix64
//! (`seed_from_u64`). Floats are drawn as `(next_u64 >> 11) * 2^-53`, which
//! is uniform on `[0, 1)` with 53 bits of precision and easy to reproduce in
//! any language with 64-bit integers.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use crate::dense::{DenseMatrix, DenseVector};
use crate::error::{Error, Result};
use crate::sparse::{IndexMatrix, SparseCooTensor};

/// Identifier written next to generated data so that consumers can tell
/// which stream produced it.
pub const GENERATOR: &str = "xoshiro256++/splitmix64-seed/u53-float";

pub type Generator = Xoshiro256PlusPlus;

pub fn generator(seed: u64) -> Generator {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

#[inline]
pub fn uniform_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    Vector,
    Matrix,
    Sparse3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub seed: u64,
    pub kind: GenKind,
    pub dims: Vec<usize>,
    /// Fraction of stored elements; only read for `Sparse3`.
    pub density: f64,
}

impl GenSpec {
    pub fn vector(seed: u64, len: usize) -> Self {
        Self {
            seed,
            kind: GenKind::Vector,
            dims: vec![len],
            density: 1.0,
        }
    }

    pub fn matrix(seed: u64, rows: usize, cols: usize) -> Self {
        Self {
            seed,
            kind: GenKind::Matrix,
            dims: vec![rows, cols],
            density: 1.0,
        }
    }

    pub fn sparse3(seed: u64, dims: [usize; 3], density: f64) -> Self {
        Self {
            seed,
            kind: GenKind::Sparse3,
            dims: dims.to_vec(),
            density,
        }
    }

    /// Number of stored nonzeros a `Sparse3` spec produces:
    /// `round(density * n1 * n2 * n3)`.
    pub fn sparse_nnz(&self) -> u64 {
        (self.density * self.element_count() as f64).round() as u64
    }

    pub fn element_count(&self) -> u64 {
        self.dims.iter().map(|&n| n as u64).product()
    }

    fn expect(&self, kind: GenKind, arity: usize) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Config(format!(
                "generator spec is {:?}, expected {kind:?}",
                self.kind
            )));
        }
        if self.dims.len() != arity {
            return Err(Error::Config(format!(
                "{kind:?} spec needs {arity} dims, got {:?}",
                self.dims
            )));
        }
        Ok(())
    }
}

pub fn gen_vector(spec: &GenSpec) -> Result<DenseVector> {
    spec.expect(GenKind::Vector, 1)?;
    let mut rng = generator(spec.seed);
    Ok(DenseVector::new(fill(&mut rng, spec.dims[0])))
}

pub fn gen_matrix(spec: &GenSpec) -> Result<DenseMatrix> {
    spec.expect(GenKind::Matrix, 2)?;
    let (rows, cols) = (spec.dims[0], spec.dims[1]);
    let mut rng = generator(spec.seed);
    DenseMatrix::new(rows, cols, fill(&mut rng, rows * cols))
}

/// Random third-order tensor with exactly `spec.sparse_nnz()` nonzeros at
/// distinct, uniformly chosen positions and values uniform on `(0, 1)`.
pub fn gen_sparse3(spec: &GenSpec) -> Result<SparseCooTensor> {
    spec.expect(GenKind::Sparse3, 3)?;
    if spec.dims.contains(&0) {
        return Err(Error::DegenerateSpec(format!(
            "dims must be positive, got {:?}",
            spec.dims
        )));
    }
    if !(spec.density > 0.0 && spec.density <= 1.0) {
        return Err(Error::DegenerateSpec(format!(
            "density must lie in (0, 1], got {}",
            spec.density
        )));
    }
    let total = spec.element_count();
    let nnz = spec.sparse_nnz();
    if nnz == 0 {
        return Err(Error::DegenerateSpec(format!(
            "density {} over {total} elements rounds to zero nonzeros",
            spec.density
        )));
    }

    let mut rng = generator(spec.seed);
    let linear = sample_distinct(&mut rng, total, nnz);

    let (n2, n3) = (spec.dims[1] as u64, spec.dims[2] as u64);
    let mut subs = Vec::with_capacity(linear.len() * 3);
    let mut vals = Vec::with_capacity(linear.len());
    for &l in &linear {
        subs.push((l / (n2 * n3)) as usize);
        subs.push(((l / n3) % n2) as usize);
        subs.push((l % n3) as usize);
        // an exact 0.0 cannot be stored
        let mut v = uniform_f64(&mut rng);
        while v == 0.0 {
            v = uniform_f64(&mut rng);
        }
        vals.push(v);
    }
    let n = vals.len();
    // sorted linear offsets are lexicographically sorted triples
    Ok(SparseCooTensor::from_parts_unchecked(
        spec.dims.clone(),
        IndexMatrix::new(n, 3, subs)?,
        vals,
    ))
}

fn fill(rng: &mut Generator, len: usize) -> Vec<f64> {
    (0..len).map(|_| uniform_f64(rng)).collect()
}

/// Sorted sample of `count` distinct values from `0..total`, uniform over all
/// subsets of that size.
///
/// Candidates are drawn in batches of the number still missing; repeats and
/// values already chosen are rejected and redrawn in the next batch. Above
/// half density the complement is sampled instead.
fn sample_distinct(rng: &mut Generator, total: u64, count: u64) -> Vec<u64> {
    debug_assert!(count <= total);
    if count.saturating_mul(2) > total {
        let excluded = sample_distinct(rng, total, total - count);
        let mut out = Vec::with_capacity(count as usize);
        let mut skip = excluded.iter().peekable();
        for l in 0..total {
            if skip.peek() == Some(&&l) {
                skip.next();
            } else {
                out.push(l);
            }
        }
        return out;
    }

    let mut chosen: Vec<u64> = Vec::with_capacity(count as usize);
    while (chosen.len() as u64) < count {
        let missing = count - chosen.len() as u64;
        let mut batch: Vec<u64> = (0..missing).map(|_| rng.random_range(0..total)).collect();
        batch.sort_unstable();
        batch.dedup();
        batch.retain(|c| chosen.binary_search(c).is_err());
        chosen.extend(batch);
        chosen.sort_unstable();
    }
    chosen
}

/// Operand payload of a generated file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Operand {
    Vector {
        shape: [usize; 1],
        data: Vec<f64>,
    },
    /// Row-major data.
    Matrix {
        shape: [usize; 2],
        data: Vec<f64>,
    },
    /// 0-based index triples in canonical order.
    Sparse3 {
        shape: [usize; 3],
        subs: Vec<[usize; 3]>,
        vals: Vec<f64>,
    },
}

/// JSON document written by `tenkern gen`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperandFile {
    pub generator: String,
    pub seed: u64,
    #[serde(flatten)]
    pub operand: Operand,
}

impl OperandFile {
    pub fn generate(spec: &GenSpec) -> Result<Self> {
        let operand = match spec.kind {
            GenKind::Vector => {
                let v = gen_vector(spec)?;
                Operand::Vector {
                    shape: [v.len()],
                    data: v.into_vec(),
                }
            }
            GenKind::Matrix => {
                let m = gen_matrix(spec)?;
                Operand::Matrix {
                    shape: [m.rows(), m.cols()],
                    data: m.as_slice().to_vec(),
                }
            }
            GenKind::Sparse3 => {
                let t = gen_sparse3(spec)?;
                Operand::Sparse3 {
                    shape: [t.shape()[0], t.shape()[1], t.shape()[2]],
                    subs: t.subs().rows().map(|r| [r[0], r[1], r[2]]).collect(),
                    vals: t.vals().to_vec(),
                }
            }
        };
        Ok(Self {
            generator: GENERATOR.to_string(),
            seed: spec.seed,
            operand,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        serde_json::to_writer(&mut w, self).map_err(|e| Error::io(path, e.into()))?;
        w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })
    }

    /// Rebuilds the sparse tensor, checking canonical form.
    pub fn to_sparse(&self) -> Result<SparseCooTensor> {
        match &self.operand {
            Operand::Sparse3 { shape, subs, vals } => SparseCooTensor::from_canonical_parts(
                shape.to_vec(),
                IndexMatrix::new(subs.len(), 3, subs.concat())?,
                vals.clone(),
            ),
            _ => Err(Error::Config("operand is not a sparse tensor".into())),
        }
    }
}
