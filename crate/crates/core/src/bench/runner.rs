use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, SizeDescriptor, TTV_ORDER};
use super::timing::time_with_output;
use crate::dense::{self, DenseMatrix, DenseVector};
use crate::error::{Error, Result};
use crate::sparse::{self, SparseCooTensor, TtvRawResult};
use crate::synthetic::{gen_matrix, gen_sparse3, gen_vector, GenSpec};

pub const NATIVE_LOOP: &str = "native-loop";

/// One timed call.
///
/// The warm-up call of each group is stored with `trial == 0` and
/// `is_warmup == true`; timed trials are numbered from 1. `seed` is the
/// experiment seed that all operands of the run are derived from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub experiment: String,
    pub implementation: String,
    pub size: String,
    pub trial: usize,
    pub is_warmup: bool,
    pub elapsed_s: f64,
    pub seed: u64,
}

/// A set of kernels benchmarked under one label.
pub trait Implementation {
    fn label(&self) -> &str;
    fn dot(&self, x: &DenseVector, y: &DenseVector) -> Result<f64>;
    fn matvec(&self, a: &DenseMatrix, x: &DenseVector) -> Result<DenseVector>;
    /// `k` is 0-based.
    fn ttv(&self, a: &SparseCooTensor, x: &DenseVector, k: usize) -> Result<TtvRawResult>;
}

/// The loop kernels of this crate, with or without argument validation.
#[derive(Debug, Clone, Copy)]
pub struct NativeLoop {
    pub checked: bool,
}

impl Implementation for NativeLoop {
    fn label(&self) -> &str {
        NATIVE_LOOP
    }

    fn dot(&self, x: &DenseVector, y: &DenseVector) -> Result<f64> {
        if self.checked {
            dense::dot(x, y)
        } else {
            Ok(dense::dot_unchecked(x.as_slice(), y.as_slice()))
        }
    }

    fn matvec(&self, a: &DenseMatrix, x: &DenseVector) -> Result<DenseVector> {
        if self.checked {
            dense::matvec(a, x)
        } else {
            Ok(DenseVector::new(dense::matvec_unchecked(
                a.as_slice(),
                a.rows(),
                a.cols(),
                x.as_slice(),
            )))
        }
    }

    fn ttv(&self, a: &SparseCooTensor, x: &DenseVector, k: usize) -> Result<TtvRawResult> {
        if self.checked {
            sparse::ttv(a, x, k)
        } else {
            Ok(sparse::ttv_unchecked(a, x.as_slice(), k))
        }
    }
}

/// Label-to-implementation lookup used by [`run_experiment_with`].
#[derive(Default)]
pub struct Registry {
    impls: Vec<Box<dyn Implementation>>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry holding only [`NativeLoop`].
    pub fn native(checked: bool) -> Self {
        let mut r = Self::new();
        r.register(Box::new(NativeLoop { checked }));
        r
    }

    /// Adds an implementation, replacing any earlier one with the same label.
    pub fn register(&mut self, imp: Box<dyn Implementation>) {
        self.impls.retain(|i| i.label() != imp.label());
        self.impls.push(imp);
    }

    pub fn labels(&self) -> Vec<&str> {
        self.impls.iter().map(|i| i.label()).collect()
    }

    pub fn resolve(&self, label: &str) -> Result<&dyn Implementation> {
        self.impls
            .iter()
            .find(|i| i.label() == label)
            .map(|b| b.as_ref())
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown implementation '{label}' (available: {})",
                    self.labels().join(", ")
                ))
            })
    }
}

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one operand: `role` distinguishes operands within a call. Trial 0
/// is the warm-up call. Shared (per-size) operands use `trial == u64::MAX`.
pub fn operand_seed(base: u64, size_index: usize, trial: u64, role: u64) -> u64 {
    mix(mix(mix(base ^ mix(size_index as u64)) ^ trial) ^ role)
}

const SHARED: u64 = u64::MAX;

enum Operands {
    Dot(DenseVector, DenseVector),
    Matvec(DenseMatrix, DenseVector),
    Ttv(SparseCooTensor, DenseVector),
}

fn generate(cfg: &ExperimentConfig, size_index: usize, desc: SizeDescriptor, trial: u64) -> Result<Operands> {
    let seed = |role| operand_seed(cfg.seed, size_index, trial, role);
    match desc {
        SizeDescriptor::Vector { len } => Ok(Operands::Dot(
            gen_vector(&GenSpec::vector(seed(0), len))?,
            gen_vector(&GenSpec::vector(seed(1), len))?,
        )),
        SizeDescriptor::Matrix { rows, cols } => Ok(Operands::Matvec(
            gen_matrix(&GenSpec::matrix(seed(0), rows, cols))?,
            gen_vector(&GenSpec::vector(seed(1), cols))?,
        )),
        SizeDescriptor::Cube { n, density, .. } => Ok(Operands::Ttv(
            gen_sparse3(&GenSpec::sparse3(seed(0), [n; TTV_ORDER], density))?,
            gen_vector(&GenSpec::vector(seed(1), n))?,
        )),
    }
}

fn run_kernel(imp: &dyn Implementation, ops: &Operands, mode: usize) -> Result<f64> {
    let (elapsed, ok) = match ops {
        Operands::Dot(x, y) => {
            let (t, r) = time_with_output(|| imp.dot(x, y));
            (t, r.map(drop))
        }
        Operands::Matvec(a, x) => {
            let (t, r) = time_with_output(|| imp.matvec(a, x));
            (t, r.map(drop))
        }
        Operands::Ttv(a, x) => {
            let (t, r) = time_with_output(|| imp.ttv(a, x, mode - 1));
            (t, r.map(drop))
        }
    };
    ok.map(|()| elapsed)
}

/// Runs `cfg` for every label using the crate's own kernels.
pub fn run_experiment(cfg: &ExperimentConfig, labels: &[&str]) -> Result<Vec<BenchRecord>> {
    run_experiment_with(cfg, &Registry::native(!cfg.unchecked), labels)
}

/// Runs the benchmark schedule.
///
/// Sizes are visited in order; at each size every implementation runs one
/// warm-up call followed by `n_trials` timed calls before the next
/// implementation starts. All implementations see the same operands.
/// Operand generation always happens outside the timed region.
pub fn run_experiment_with(
    cfg: &ExperimentConfig,
    registry: &Registry,
    labels: &[&str],
) -> Result<Vec<BenchRecord>> {
    cfg.validate()?;
    if labels.is_empty() {
        return Err(Error::Config("no implementation requested".into()));
    }
    let impls = labels
        .iter()
        .map(|l| registry.resolve(l))
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::with_capacity(cfg.sizes.len() * impls.len() * (cfg.n_trials + 1));
    for (size_index, desc) in cfg.descriptors().into_iter().enumerate() {
        let shared = if cfg.fresh_data_per_trial {
            None
        } else {
            Some(generate(cfg, size_index, desc, SHARED)?)
        };
        let size = desc.to_string();
        for imp in &impls {
            for trial in 0..=cfg.n_trials {
                let fresh;
                let ops = match &shared {
                    Some(ops) => ops,
                    None => {
                        fresh = generate(cfg, size_index, desc, trial as u64)?;
                        &fresh
                    }
                };
                let elapsed_s = run_kernel(*imp, ops, cfg.mode)?;
                records.push(BenchRecord {
                    experiment: cfg.experiment.label().to_string(),
                    implementation: imp.label().to_string(),
                    size: size.clone(),
                    trial,
                    is_warmup: trial == 0,
                    elapsed_s,
                    seed: cfg.seed,
                });
            }
        }
    }
    Ok(records)
}
