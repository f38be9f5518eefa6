//! CSV output for raw records and summaries.
//!
//! Floats are written in scientific notation with 17 significant digits,
//! which is enough for every `f64` to parse back to the same bits.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::runner::BenchRecord;
use super::summary::Summary;
use crate::error::{Error, Result};

pub const RECORD_HEADER: [&str; 7] = [
    "experiment",
    "implementation",
    "size",
    "trial",
    "is_warmup",
    "elapsed_s",
    "seed",
];

pub const SUMMARY_HEADER: [&str; 6] = ["experiment", "implementation", "size", "n", "mean_s", "sd_s"];

pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_records_to<W: Write>(out: W, records: &[BenchRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RECORD_HEADER)?;
    for r in records {
        w.write_record([
            r.experiment.as_str(),
            r.implementation.as_str(),
            r.size.as_str(),
            &r.trial.to_string(),
            if r.is_warmup { "true" } else { "false" },
            &format_f64(r.elapsed_s),
            &r.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summaries_to<W: Write>(out: W, summaries: &[Summary]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SUMMARY_HEADER)?;
    for s in summaries {
        w.write_record([
            s.experiment.as_str(),
            s.implementation.as_str(),
            s.size.as_str(),
            &s.n.to_string(),
            &format_f64(s.mean_s),
            &format_f64(s.sd_s),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_records(path: &Path, records: &[BenchRecord]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_records_to(BufWriter::new(file), records).map_err(csv_err(path))
}

pub fn write_summaries(path: &Path, summaries: &[Summary]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_summaries_to(BufWriter::new(file), summaries).map_err(csv_err(path))
}

fn check_header(path: &Path, got: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    if got.iter().ne(expected.iter().copied()) {
        return Err(Error::Format {
            path: path.to_path_buf(),
            reason: format!("unexpected header {got:?}"),
        });
    }
    Ok(())
}

pub fn read_records_from<R: Read>(input: R, path: &Path) -> Result<Vec<BenchRecord>> {
    let mut r = csv::Reader::from_reader(input);
    check_header(path, r.headers().map_err(csv_err(path))?, &RECORD_HEADER)?;
    r.deserialize().map(|row| row.map_err(csv_err(path))).collect()
}

pub fn read_records(path: &Path) -> Result<Vec<BenchRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_records_from(file, path)
}

/// Reads a summary CSV. `sd_defined` is reconstructed from `n`.
pub fn read_summaries(path: &Path) -> Result<Vec<Summary>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    check_header(path, r.headers().map_err(csv_err(path))?, &SUMMARY_HEADER)?;
    let mut out = Vec::new();
    for row in r.records() {
        let row = row.map_err(csv_err(path))?;
        let field = |i: usize| row.get(i).unwrap_or_default();
        let bad = |what: &str| Error::Format {
            path: path.to_path_buf(),
            reason: format!("bad {what} in line {:?}", row.position().map(|p| p.line())),
        };
        let n: usize = field(3).parse().map_err(|_| bad("n"))?;
        out.push(Summary {
            experiment: field(0).to_string(),
            implementation: field(1).to_string(),
            size: field(2).to_string(),
            n,
            mean_s: field(4).parse().map_err(|_| bad("mean_s"))?,
            sd_s: field(5).parse().map_err(|_| bad("sd_s"))?,
            sd_defined: n > 1,
        });
    }
    Ok(out)
}
