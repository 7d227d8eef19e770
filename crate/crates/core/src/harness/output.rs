//! CSV output, run metadata and per-round aggregation.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;

use crate::harness::data::RNG_ID;
use crate::harness::run::RegretRecord;
use crate::harness::spec::ExperimentSpec;

pub const CSV_HEADER: &str = "experiment,algorithm,trial,round,value";

/// Writes the records with the fixed header. Values use the shortest
/// round-trip representation, so identical runs produce identical bytes.
pub fn write_csv<W: Write>(records: &[RegretRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.experiment, r.algorithm, r.trial, r.round, r.value
        )?;
    }
    out.flush()
}

#[derive(Debug, Serialize)]
struct Failure<'a> {
    algorithm: &'a str,
    trial: usize,
    round: usize,
    message: &'a str,
}

#[derive(Debug, Serialize)]
struct Metadata<'a> {
    spec: &'a ExperimentSpec,
    library_version: &'static str,
    rng: &'static str,
    records: usize,
    failures: Vec<Failure<'a>>,
}

/// Sidecar JSON with the spec, library version, generator id and the list of
/// numeric failures.
pub fn write_metadata<W: Write>(
    spec: &ExperimentSpec,
    records: &[RegretRecord],
    out: W,
) -> io::Result<()> {
    let failures = records
        .iter()
        .filter_map(|r| {
            r.failure.as_deref().map(|message| Failure {
                algorithm: &r.algorithm,
                trial: r.trial,
                round: r.round,
                message,
            })
        })
        .collect();
    let meta = Metadata {
        spec,
        library_version: env!("CARGO_PKG_VERSION"),
        rng: RNG_ID,
        records: records.len(),
        failures,
    };
    serde_json::to_writer_pretty(out, &meta).map_err(io::Error::other)
}

/// Single-pass mean and (sample) variance.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        if self.n == 0 {
            f64::NAN
        } else {
            self.mean
        }
    }

    /// Sample standard deviation (`n - 1` denominator); zero for one sample.
    pub fn std(&self) -> f64 {
        match self.n {
            0 => f64::NAN,
            1 => 0.0,
            n => (self.m2 / (n - 1) as f64).sqrt(),
        }
    }
}

impl FromIterator<f64> for Welford {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut w = Welford::default();
        iter.into_iter().for_each(|x| w.push(x));
        w
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundSummary {
    pub algorithm: String,
    pub round: usize,
    pub mean: f64,
    pub std: f64,
    pub trials: usize,
}

/// Mean and standard deviation over trials, per algorithm and round. Failed
/// (NaN) values are skipped.
pub fn aggregate(records: &[RegretRecord]) -> Vec<RoundSummary> {
    let mut order: Vec<&str> = Vec::new();
    let mut acc: BTreeMap<(usize, usize), Welford> = BTreeMap::new();
    for r in records {
        let ai = match order.iter().position(|a| *a == r.algorithm) {
            Some(i) => i,
            None => {
                order.push(&r.algorithm);
                order.len() - 1
            }
        };
        if r.value.is_finite() {
            acc.entry((ai, r.round)).or_default().push(r.value);
        }
    }
    acc.into_iter()
        .map(|((ai, round), w)| RoundSummary {
            algorithm: order[ai].to_string(),
            round,
            mean: w.mean(),
            std: w.std(),
            trials: w.count(),
        })
        .collect()
}

/// Mean and standard deviation over trials of the last-round value of
/// `algorithm`.
pub fn final_round_stats(records: &[RegretRecord], algorithm: &str) -> Option<(f64, f64)> {
    let last = records
        .iter()
        .filter(|r| r.algorithm == algorithm)
        .map(|r| r.round)
        .max()?;
    let w: Welford = records
        .iter()
        .filter(|r| r.algorithm == algorithm && r.round == last && r.value.is_finite())
        .map(|r| r.value)
        .collect();
    (w.count() > 0).then(|| (w.mean(), w.std()))
}
