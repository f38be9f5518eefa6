//! Benchmark schedule, timing, aggregation and CSV output.

mod config;
mod report;
mod runner;
mod summary;
mod timing;

pub use config::{
    Experiment, ExperimentConfig, SizeDescriptor, DEFAULT_DENSITY, DEFAULT_MEMORY_CAP_BYTES,
    DEFAULT_MODE, DEFAULT_SEED, DEFAULT_TRIALS, MATVEC_FIXED_DIM, TTV_ORDER,
};
pub use report::{
    format_f64, read_records, read_records_from, read_summaries, write_records,
    write_records_to, write_summaries, write_summaries_to, RECORD_HEADER, SUMMARY_HEADER,
};
pub use runner::{
    operand_seed, run_experiment, run_experiment_with, BenchRecord, Implementation, NativeLoop,
    Registry, NATIVE_LOOP,
};
pub use summary::{summarize, Summary};
pub use timing::{time_once, time_with_output};
