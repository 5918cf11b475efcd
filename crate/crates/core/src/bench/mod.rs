//! Run configuration, reports and the benchmark harness.

mod report;
mod sweep;

use std::fmt;
use std::fs::File;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::constraints::ConstraintSet;
use crate::db::{generate_baskets, parse_transactions, BasketSpec, InputFormat, TemporalDatabase};
use crate::error::{Error, Result};
use crate::mining::{self, MiningOutcome, MiningParams};

pub use report::{MiningReport, OutputFormat, SCHEMA_VERSION};
pub use sweep::{compare, sweep, CompareRow, CrossCheck, Dimension, SweepRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Sequential,
    Interleaved,
    Pcar,
    Cbcar,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Sequential,
        Algorithm::Interleaved,
        Algorithm::Pcar,
        Algorithm::Cbcar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Sequential => "sequential",
            Algorithm::Interleaved => "interleaved",
            Algorithm::Pcar => "pcar",
            Algorithm::Cbcar => "cbcar",
        }
    }

    /// `pcar`/`cbcar` mine at a single cycle length; the others scan a range.
    pub fn is_partitioned(self) -> bool {
        matches!(self, Algorithm::Pcar | Algorithm::Cbcar)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::arg("algorithm", format!("unknown algorithm `{s}`")))
    }
}

/// Where transactions come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSource {
    File(PathBuf),
    /// Generated with [`generate_baskets`]; the run's `seed` replaces the
    /// seed inside the `BasketSpec`.
    Synthetic(BasketSpec),
}

/// Everything needed to reproduce one mining run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub input: DataSource,
    pub format: InputFormat,
    pub units_per_group: u32,
    pub algorithm: Algorithm,
    pub params: MiningParams,
    pub constraints: ConstraintSet,
    pub out_format: OutputFormat,
    pub seed: u64,
    /// Timed repetitions; the report carries the median.
    pub repeat: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: DataSource::Synthetic(BasketSpec::default()),
            format: InputFormat::Fimi,
            units_per_group: 1,
            algorithm: Algorithm::Cbcar,
            params: MiningParams::default(),
            constraints: ConstraintSet::default(),
            out_format: OutputFormat::Json,
            seed: 0,
            repeat: 1,
        }
    }
}

impl RunConfig {
    /// Checks everything that can be checked without reading the input.
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.units_per_group == 0 {
            return Err(Error::arg("units-per-group", "must be positive"));
        }
        if self.repeat == 0 {
            return Err(Error::arg("repeat", "must be positive"));
        }
        if self.algorithm != Algorithm::Cbcar && !self.constraints.is_empty() {
            return Err(Error::arg(
                "algorithm",
                format!("{} does not take constraints (--prm/--cl/--agg); use cbcar", self.algorithm),
            ));
        }
        Ok(())
    }

    /// Reads or generates the database.
    pub fn load(&self) -> Result<TemporalDatabase> {
        if self.units_per_group == 0 {
            return Err(Error::arg("units-per-group", "must be positive"));
        }
        match &self.input {
            DataSource::File(path) => {
                let file = File::open(path)
                    .map_err(|e| Error::arg("input", format!("{}: {e}", path.display())))?;
                parse_transactions(file, self.format, self.units_per_group)
            }
            DataSource::Synthetic(spec) => generate_baskets(&BasketSpec {
                seed: self.seed,
                ..spec.clone()
            }),
        }
    }

    fn same_dataset(&self, other: &RunConfig) -> bool {
        let source = match (&self.input, &other.input) {
            (DataSource::Synthetic(a), DataSource::Synthetic(b)) => a == b && self.seed == other.seed,
            (a, b) => a == b,
        };
        source && self.format == other.format && self.units_per_group == other.units_per_group
    }
}

/// Runs one algorithm.
pub fn mine(
    algorithm: Algorithm,
    db: &TemporalDatabase,
    params: &MiningParams,
    constraints: &ConstraintSet,
) -> Result<MiningOutcome> {
    match algorithm {
        Algorithm::Sequential => mining::sequential(db, params),
        Algorithm::Interleaved => mining::interleaved(db, params),
        Algorithm::Pcar => mining::pcar(db, params),
        Algorithm::Cbcar => mining::cbcar(db, params, constraints),
    }
}

/// Loads the input and mines it `repeat` times.
pub fn run(config: &RunConfig) -> Result<MiningReport> {
    config.validate()?;
    let db = config.load()?;
    run_on(config, &db)
}

/// [`run`] against an already loaded database.
pub fn run_on(config: &RunConfig, db: &TemporalDatabase) -> Result<MiningReport> {
    config.validate()?;
    let mut times = Vec::with_capacity(config.repeat);
    let mut outcome = None;
    for _ in 0..config.repeat {
        let start = Instant::now();
        let out = mine(config.algorithm, db, &config.params, &config.constraints)?;
        times.push(start.elapsed().as_secs_f64() * 1000.0);
        outcome = Some(out);
    }
    let outcome = outcome.expect("repeat >= 1");
    Ok(MiningReport::new(config.clone(), &outcome, median(&mut times)))
}

pub(crate) fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n == 0 {
        0.0
    } else if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}
