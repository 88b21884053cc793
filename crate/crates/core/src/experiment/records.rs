use std::cmp::Ordering;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diffusion::Protocol;
use crate::error::{Error, Result};
use crate::seeding::Method;

pub const RECORD_HEADER: [&str; 11] = [
    "network",
    "method",
    "protocol",
    "mu",
    "s",
    "repetition",
    "seed_count",
    "gain",
    "diffusion_length",
    "truncated",
    "rng_seed",
];

/// Outcome of one grid cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub network: String,
    pub method: Method,
    pub protocol: Protocol,
    pub mu: f64,
    pub s: f64,
    pub repetition: usize,
    pub seed_count: usize,
    pub gain: f64,
    pub diffusion_length: usize,
    pub truncated: bool,
    pub rng_seed: u64,
}

impl ExperimentRecord {
    /// Order on the unique key `(network, method, protocol, mu, s, repetition)`.
    pub fn key_cmp(&self, other: &Self) -> Ordering {
        self.network
            .cmp(&other.network)
            .then(self.method.cmp(&other.method))
            .then(self.protocol.cmp(&other.protocol))
            .then(self.mu.total_cmp(&other.mu))
            .then(self.s.total_cmp(&other.s))
            .then(self.repetition.cmp(&other.repetition))
    }
}

pub fn canonical_sort(records: &mut [ExperimentRecord]) {
    records.sort_by(ExperimentRecord::key_cmp);
}

pub fn write_records<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(RECORD_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<ExperimentRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?.clone();
    if header.iter().ne(RECORD_HEADER) {
        return Err(Error::Format(format!(
            "unexpected results header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    rd.deserialize()
        .map(|row| row.map_err(|e| Error::Format(e.to_string())))
        .collect()
}

pub fn persist(records: &[ExperimentRecord], path: &Path) -> Result<()> {
    write_records(records, std::io::BufWriter::new(std::fs::File::create(path)?))
}

pub fn load_records(path: &Path) -> Result<Vec<ExperimentRecord>> {
    read_records(std::io::BufReader::new(std::fs::File::open(path)?))
}
