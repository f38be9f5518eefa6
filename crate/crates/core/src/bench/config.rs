use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Order of the sparse tensors used by the TTV experiment.
pub const TTV_ORDER: usize = 3;

/// Size of the dimension held fixed in the `matvec_rows` and `matvec_cols`
/// sweeps.
pub const MATVEC_FIXED_DIM: usize = 100;

pub const DEFAULT_TRIALS: usize = 30;
pub const DEFAULT_DENSITY: f64 = 0.01;
/// 1-based mode for TTV.
pub const DEFAULT_MODE: usize = 2;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_MEMORY_CAP_BYTES: u64 = 8 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Dot,
    MatvecRows,
    MatvecCols,
    MatvecSquare,
    Ttv,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::Dot,
        Experiment::MatvecRows,
        Experiment::MatvecCols,
        Experiment::MatvecSquare,
        Experiment::Ttv,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Experiment::Dot => "dot",
            Experiment::MatvecRows => "matvec_rows",
            Experiment::MatvecCols => "matvec_cols",
            Experiment::MatvecSquare => "matvec_square",
            Experiment::Ttv => "ttv",
        }
    }

    /// Default size sweep. For the matvec experiments the listed value is the
    /// varying dimension; see [`ExperimentConfig::size_of`].
    pub fn default_sizes(self) -> Vec<usize> {
        match self {
            Experiment::Dot => (3..=8).map(|e| 10usize.pow(e)).collect(),
            Experiment::MatvecRows | Experiment::MatvecCols => {
                (2..=6).map(|e| 10usize.pow(e)).collect()
            }
            Experiment::MatvecSquare => (2..=4).map(|e| 10usize.pow(e)).collect(),
            Experiment::Ttv => (1..=12).map(|i| 100 * i).collect(),
        }
    }

    /// Dense kernels get new operands every trial; the sparse tensor is
    /// generated once per size and shared by all trials.
    pub fn fresh_data_per_trial(self) -> bool {
        self != Experiment::Ttv
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.label() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment '{s}'")))
    }
}

/// Concrete operand shape for one point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SizeDescriptor {
    Vector { len: usize },
    Matrix { rows: usize, cols: usize },
    /// Cubic sparse tensor contracted along the 1-based `mode`.
    Cube { n: usize, density: f64, mode: usize },
}

impl SizeDescriptor {
    /// Rough peak bytes needed for operands, intermediates and output.
    pub fn operand_bytes(&self) -> u64 {
        let f = std::mem::size_of::<f64>() as u64;
        match *self {
            SizeDescriptor::Vector { len } => 2 * len as u64 * f,
            SizeDescriptor::Matrix { rows, cols } => {
                let (r, c) = (rows as u64, cols as u64);
                r.saturating_mul(c).saturating_add(r + c).saturating_mul(f)
            }
            SizeDescriptor::Cube { n, density, .. } => {
                let total = (n as u64).saturating_pow(TTV_ORDER as u32);
                let nnz = (density * total as f64).round() as u64;
                // input triples + values, projected keys, weights, sort
                // permutation and the output triple
                nnz.saturating_mul(12 * 8).saturating_add(n as u64 * f)
            }
        }
    }
}

impl fmt::Display for SizeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SizeDescriptor::Vector { len } => write!(f, "{len}"),
            SizeDescriptor::Matrix { rows, cols } => write!(f, "{rows}x{cols}"),
            SizeDescriptor::Cube { n, density, mode } => {
                write!(f, "{n}x{n}x{n};density={density};k={mode}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub sizes: Vec<usize>,
    pub n_trials: usize,
    /// TTV only.
    pub density: f64,
    /// TTV only, 1-based.
    pub mode: usize,
    pub seed: u64,
    pub fresh_data_per_trial: bool,
    /// Call the unvalidated kernel entry points inside the timed region.
    pub unchecked: bool,
    pub memory_cap_bytes: u64,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            sizes: experiment.default_sizes(),
            n_trials: DEFAULT_TRIALS,
            density: DEFAULT_DENSITY,
            mode: DEFAULT_MODE,
            seed: DEFAULT_SEED,
            fresh_data_per_trial: experiment.fresh_data_per_trial(),
            unchecked: false,
            memory_cap_bytes: DEFAULT_MEMORY_CAP_BYTES,
        }
    }

    pub fn with_sizes(mut self, sizes: Vec<usize>) -> Self {
        self.sizes = sizes;
        self
    }

    pub fn with_trials(mut self, n_trials: usize) -> Self {
        self.n_trials = n_trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: usize) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_density(mut self, density: f64) -> Self {
        self.density = density;
        self
    }

    pub fn size_of(&self, size: usize) -> SizeDescriptor {
        match self.experiment {
            Experiment::Dot => SizeDescriptor::Vector { len: size },
            Experiment::MatvecRows => SizeDescriptor::Matrix {
                rows: size,
                cols: MATVEC_FIXED_DIM,
            },
            Experiment::MatvecCols => SizeDescriptor::Matrix {
                rows: MATVEC_FIXED_DIM,
                cols: size,
            },
            Experiment::MatvecSquare => SizeDescriptor::Matrix {
                rows: size,
                cols: size,
            },
            Experiment::Ttv => SizeDescriptor::Cube {
                n: size,
                density: self.density,
                mode: self.mode,
            },
        }
    }

    pub fn descriptors(&self) -> Vec<SizeDescriptor> {
        self.sizes.iter().map(|&s| self.size_of(s)).collect()
    }

    /// Checks everything that can be checked before any data is generated,
    /// including the memory guard.
    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::Config("trial count must be at least 1".into()));
        }
        if self.sizes.is_empty() {
            return Err(Error::Config("size list is empty".into()));
        }
        if let Some(&bad) = self.sizes.iter().find(|&&s| s == 0) {
            return Err(Error::Config(format!("size {bad} must be positive")));
        }
        if self.experiment == Experiment::Ttv {
            if self.mode == 0 || self.mode > TTV_ORDER {
                return Err(Error::Mode {
                    mode: self.mode,
                    order: TTV_ORDER,
                });
            }
            if !(self.density > 0.0 && self.density <= 1.0) {
                return Err(Error::Config(format!(
                    "density must lie in (0, 1], got {}",
                    self.density
                )));
            }
        }
        for desc in self.descriptors() {
            let bytes = desc.operand_bytes();
            if bytes > self.memory_cap_bytes {
                return Err(Error::Size {
                    descriptor: desc.to_string(),
                    requested: bytes,
                    cap: self.memory_cap_bytes,
                });
            }
        }
        Ok(())
    }
}
