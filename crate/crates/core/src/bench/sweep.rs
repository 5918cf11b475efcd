use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{run_on, Algorithm, RunConfig};
use crate::constraints::{
    aggregate_satisfied, rule_form_allows, universe_allows, AggregateConstraint, AggregateFn, Comparator,
    ConstraintSet,
};
use crate::db::TemporalDatabase;
use crate::error::{Error, Result};
use crate::rulegen::CyclicRule;

/// The parameter a [`sweep`] varies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Minsupp,
    Partitions,
    /// `cycle_length` for `pcar`/`cbcar`, `l_max` otherwise.
    CycleLength,
    /// Number of `SUM(item) >= 1` constraints over the most frequent items,
    /// added to the base constraints (`cbcar` only).
    ConstraintCount,
}

impl Dimension {
    pub fn name(self) -> &'static str {
        match self {
            Dimension::Minsupp => "minsupp",
            Dimension::Partitions => "partitions",
            Dimension::CycleLength => "cycle_length",
            Dimension::ConstraintCount => "constraint_count",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Dimension {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "minsupp" => Ok(Dimension::Minsupp),
            "partitions" => Ok(Dimension::Partitions),
            "cycle_length" => Ok(Dimension::CycleLength),
            "constraint_count" | "constraints" => Ok(Dimension::ConstraintCount),
            _ => Err(Error::arg("sweep", format!("unknown dimension `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub timing_ms: f64,
    pub rules: usize,
    pub frequent: usize,
    pub transactions_touched: u64,
    pub units_evaluated: u64,
}

/// Runs `base` once per value of `dimension` on a single loaded database,
/// writing a CSV row (and flushing) as each run finishes. If a row fails,
/// the rows already written stay in `out` and the error is returned.
pub fn sweep(base: &RunConfig, dimension: Dimension, values: &[f64], out: &mut dyn Write) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::arg("values", "at least one value is required"));
    }
    base.validate()?;
    if dimension == Dimension::ConstraintCount && base.algorithm != Algorithm::Cbcar {
        return Err(Error::arg("sweep", "constraint_count sweeps require --algorithm cbcar"));
    }
    let db = base.load()?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        dimension.name(),
        "timing_ms",
        "rules",
        "frequent",
        "transactions_touched",
        "units_evaluated",
    ])?;
    w.flush()?;
    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        let config = configure(base, &db, dimension, value)?;
        let report = run_on(&config, &db)?;
        let row = SweepRow {
            value,
            timing_ms: report.timing_ms,
            rules: report.rules.len(),
            frequent: report.counts.values().sum(),
            transactions_touched: report.counters.transactions_touched,
            units_evaluated: report.counters.units_evaluated,
        };
        w.write_record([
            value.to_string(),
            format!("{:.3}", row.timing_ms),
            row.rules.to_string(),
            row.frequent.to_string(),
            row.transactions_touched.to_string(),
            row.units_evaluated.to_string(),
        ])?;
        w.flush()?;
        rows.push(row);
    }
    Ok(rows)
}

fn configure(base: &RunConfig, db: &TemporalDatabase, dimension: Dimension, value: f64) -> Result<RunConfig> {
    let mut c = base.clone();
    let whole = |min: f64| {
        if value.fract() == 0.0 && value >= min && value <= u32::MAX as f64 {
            Ok(value as u32)
        } else {
            Err(Error::arg("values", format!("{value} is not a valid {dimension} value")))
        }
    };
    match dimension {
        Dimension::Minsupp => c.params.minsupp = value,
        Dimension::Partitions => c.params.nb_partitions = whole(1.0)? as usize,
        Dimension::CycleLength => {
            let l = whole(1.0)?;
            if c.algorithm.is_partitioned() {
                c.params.cycle_length = l;
            } else {
                c.params.l_max = l;
                c.params.l_min = c.params.l_min.min(l);
            }
        }
        Dimension::ConstraintCount => {
            let k = whole(0.0)? as usize;
            c.constraints.aggregates.extend(frequent_item_constraints(db, k)?);
        }
    }
    c.validate()?;
    Ok(c)
}

/// `SUM(i) >= 1` for each of the `k` most frequent items (ties by id).
pub(crate) fn frequent_item_constraints(db: &TemporalDatabase, k: usize) -> Result<Vec<AggregateConstraint>> {
    let freq = db.item_frequencies();
    if k > freq.len() {
        return Err(Error::arg(
            "values",
            format!("{k} constraints requested but the database has {} items", freq.len()),
        ));
    }
    let mut order: Vec<usize> = (0..freq.len()).collect();
    order.sort_by(|&a, &b| freq[b].cmp(&freq[a]).then(a.cmp(&b)));
    order
        .into_iter()
        .take(k)
        .map(|i| AggregateConstraint::new(AggregateFn::Sum, i as u32, Comparator::Ge, 1.0))
        .collect()
}

/// Whether a compared run's rules agree with the first run's.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossCheck {
    Reference,
    Agree,
    Disagree,
    /// Different semantics (e.g. cycle range vs. fixed length); not comparable.
    NotApplicable,
}

impl CrossCheck {
    pub fn name(self) -> &'static str {
        match self {
            CrossCheck::Reference => "reference",
            CrossCheck::Agree => "agree",
            CrossCheck::Disagree => "disagree",
            CrossCheck::NotApplicable => "n/a",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub algorithm: Algorithm,
    pub timing_ms: f64,
    pub rules: usize,
    pub transactions_touched: u64,
    pub units_evaluated: u64,
    pub cross_check: CrossCheck,
}

/// Runs each config on one shared database and writes one CSV row per
/// config. Every row after the first is cross-checked against the first:
/// `sequential` and `interleaved` must produce identical rules; `pcar` and
/// `cbcar` runs must agree once the less constrained rule set is filtered by
/// the other run's constraints. Other pairings, or differing mining
/// parameters, are reported as `n/a`.
pub fn compare(configs: &[RunConfig], out: &mut dyn Write) -> Result<Vec<CompareRow>> {
    if configs.len() < 2 {
        return Err(Error::arg("compare", "at least two configurations are required"));
    }
    if let Some(c) = configs[1..].iter().find(|c| !c.same_dataset(&configs[0])) {
        return Err(Error::arg(
            "compare",
            format!("{} run uses a different dataset than the first run", c.algorithm),
        ));
    }
    configs.iter().try_for_each(RunConfig::validate)?;
    let db = configs[0].load()?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "algorithm",
        "timing_ms",
        "rules",
        "transactions_touched",
        "units_evaluated",
        "cross_check",
    ])?;
    let mut rows = Vec::with_capacity(configs.len());
    let mut reference: Option<Vec<CyclicRule>> = None;
    for c in configs {
        let report = run_on(c, &db)?;
        let cross_check = match &reference {
            None => CrossCheck::Reference,
            Some(rules) => cross_check(&configs[0], rules, c, &report.rules, &db)?,
        };
        let row = CompareRow {
            algorithm: c.algorithm,
            timing_ms: report.timing_ms,
            rules: report.rules.len(),
            transactions_touched: report.counters.transactions_touched,
            units_evaluated: report.counters.units_evaluated,
            cross_check,
        };
        w.write_record([
            c.algorithm.name().to_string(),
            format!("{:.3}", row.timing_ms),
            row.rules.to_string(),
            row.transactions_touched.to_string(),
            row.units_evaluated.to_string(),
            cross_check.name().to_string(),
        ])?;
        w.flush()?;
        rows.push(row);
        if reference.is_none() {
            reference = Some(report.rules);
        }
    }
    Ok(rows)
}

fn cross_check(
    a: &RunConfig,
    a_rules: &[CyclicRule],
    b: &RunConfig,
    b_rules: &[CyclicRule],
    db: &TemporalDatabase,
) -> Result<CrossCheck> {
    if a.params != b.params || a.algorithm.is_partitioned() != b.algorithm.is_partitioned() {
        return Ok(CrossCheck::NotApplicable);
    }
    let agree = |same: bool| if same { CrossCheck::Agree } else { CrossCheck::Disagree };
    if a.constraints == b.constraints {
        return Ok(agree(a_rules == b_rules));
    }
    if a.constraints.is_empty() {
        return Ok(agree(restrict(a_rules, &b.constraints, db)? == b_rules));
    }
    if b.constraints.is_empty() {
        return Ok(agree(restrict(b_rules, &a.constraints, db)? == a_rules));
    }
    Ok(CrossCheck::NotApplicable)
}

/// The rules of an unconstrained run that satisfy `cs`.
pub(crate) fn restrict(rules: &[CyclicRule], cs: &ConstraintSet, db: &TemporalDatabase) -> Result<Vec<CyclicRule>> {
    let mut out = Vec::new();
    for r in rules {
        let full = r.premise.union(&r.conclusion);
        if !universe_allows(&full, cs) || !rule_form_allows(&r.premise, &r.conclusion, cs) {
            continue;
        }
        let mut ok = true;
        for ac in &cs.aggregates {
            if !aggregate_satisfied(&r.premise, &r.conclusion, db, ac)? {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(r.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::DataSource;
    use crate::db::BasketSpec;
    use crate::mining::MiningParams;

    fn small() -> RunConfig {
        RunConfig {
            input: DataSource::Synthetic(BasketSpec {
                transactions: 400,
                items: 12,
                avg_len: 3.0,
                per_unit: 20,
                patterns: 3,
                ..Default::default()
            }),
            algorithm: Algorithm::Pcar,
            params: MiningParams { minsupp: 0.1, minconf: 0.3, ..Default::default() },
            seed: 7,
            ..Default::default()
        }
    }

    #[test]
    fn empty_values_rejected() {
        let err = sweep(&small(), Dimension::Minsupp, &[], &mut Vec::new()).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument { name: "values", .. }));
    }

    #[test]
    fn partition_sweep_is_flat() {
        let mut out = Vec::new();
        let rows = sweep(&small(), Dimension::Partitions, &[1.0, 2.0, 4.0], &mut out).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.rules == rows[0].rules));
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("partitions,timing_ms,rules,"));
    }

    #[test]
    fn failing_row_keeps_earlier_rows() {
        let mut out = Vec::new();
        let err = sweep(&small(), Dimension::Minsupp, &[0.2, 1.5, 0.3], &mut out);
        assert!(err.is_err());
        assert_eq!(String::from_utf8(out).unwrap().lines().count(), 2);
    }

    #[test]
    fn constraint_count_needs_cbcar() {
        assert!(sweep(&small(), Dimension::ConstraintCount, &[1.0], &mut Vec::new()).is_err());
        let c = RunConfig { algorithm: Algorithm::Cbcar, ..small() };
        let rows = sweep(&c, Dimension::ConstraintCount, &[0.0, 1.0, 2.0], &mut Vec::new()).unwrap();
        assert!(rows[1].rules <= rows[0].rules && rows[2].rules <= rows[1].rules);
        assert!(sweep(&c, Dimension::ConstraintCount, &[1.5], &mut Vec::new()).is_err());
    }

    #[test]
    fn compare_needs_two_runs_on_one_dataset() {
        assert!(compare(&[small()], &mut Vec::new()).is_err());
        let other = RunConfig { seed: 8, ..small() };
        assert!(compare(&[small(), other], &mut Vec::new()).is_err());
    }

    #[test]
    fn compare_cross_checks() {
        let seq = RunConfig {
            algorithm: Algorithm::Sequential,
            params: MiningParams { minsupp: 0.1, minconf: 0.3, l_max: 4, ..Default::default() },
            ..small()
        };
        let inter = RunConfig { algorithm: Algorithm::Interleaved, ..seq.clone() };
        let rows = compare(&[seq, inter, small()], &mut Vec::new()).unwrap();
        assert_eq!(rows[0].cross_check, CrossCheck::Reference);
        assert_eq!(rows[1].cross_check, CrossCheck::Agree);
        assert!(rows[1].units_evaluated <= rows[0].units_evaluated);
        assert_eq!(rows[2].cross_check, CrossCheck::NotApplicable);

        let constrained = RunConfig {
            algorithm: Algorithm::Cbcar,
            constraints: ConstraintSet::builder()
                .conclusion([0, 1, 2, 3])
                .aggregate("MAX(0)>=1".parse().unwrap())
                .build(),
            ..small()
        };
        let rows = compare(&[small(), constrained], &mut Vec::new()).unwrap();
        assert_eq!(rows[1].cross_check, CrossCheck::Agree);
        assert!(rows[1].rules <= rows[0].rules);
    }
}
