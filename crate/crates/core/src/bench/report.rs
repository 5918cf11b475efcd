use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::RunConfig;
use crate::error::{Error, Result};
use crate::itemset::Itemset;
use crate::mining::{MiningOutcome, ScanCounters};
use crate::rulegen::CyclicRule;

/// Bumped whenever the JSON layout of [`MiningReport`] changes.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "text" | "txt" => Ok(OutputFormat::Text),
            other => Err(Error::arg("out-format", format!("unknown output format `{other}`"))),
        }
    }
}

/// Result of one [`run`](super::run).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MiningReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub rules: Vec<CyclicRule>,
    /// Frequent cyclic itemsets per size.
    pub counts: BTreeMap<usize, usize>,
    /// Median wall time of the mining call, in milliseconds.
    pub timing_ms: f64,
    pub counters: ScanCounters,
}

impl MiningReport {
    pub fn new(config: RunConfig, outcome: &MiningOutcome, timing_ms: f64) -> Self {
        MiningReport {
            schema_version: SCHEMA_VERSION,
            config,
            rules: outcome.rules.clone(),
            counts: outcome.counts_by_size(),
            timing_ms,
            counters: outcome.counters,
        }
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Text => Ok(self.to_text()),
        }
    }

    /// One row per rule: `premise,conclusion,support,confidence,cycles`.
    /// Itemsets are space-separated ids, cycles `l:o` pairs.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["premise", "conclusion", "support", "confidence", "cycles"])?;
        for r in &self.rules {
            let cycles = r
                .cycles
                .iter()
                .map(|c| format!("{}:{}", c.length, c.offset))
                .collect::<Vec<_>>()
                .join(" ");
            w.write_record([
                ids(&r.premise),
                ids(&r.conclusion),
                r.support.to_string(),
                r.confidence.to_string(),
                cycles,
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{}: {} rules in {:.3} ms ({} transactions touched, {} units evaluated)",
            self.config.algorithm,
            self.rules.len(),
            self.timing_ms,
            self.counters.transactions_touched,
            self.counters.units_evaluated
        );
        for (k, n) in &self.counts {
            let _ = writeln!(s, "frequent {k}-itemsets: {n}");
        }
        for r in &self.rules {
            let _ = writeln!(s, "{r}");
        }
        s
    }
}

fn ids(s: &Itemset) -> String {
    s.items().iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}
