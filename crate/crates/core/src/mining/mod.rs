//! Support counting, candidate generation and the four miners.

mod counter;
mod interleaved;
mod partitioned;
mod sequential;

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::cycle::{Cycle, OccurrenceSequence};
use crate::db::TemporalDatabase;
use crate::error::{Error, Result};
use crate::itemset::Itemset;
use crate::rulegen::CyclicRule;
use crate::threshold;

pub(crate) use counter::CandidateCounter;
pub use interleaved::interleaved;
pub use partitioned::{cbcar, pcar};
pub use sequential::sequential;

/// Thresholds and cycle parameters shared by all miners.
///
/// `cycle_length` applies to `pcar`/`cbcar`; `l_min..=l_max` to
/// `sequential`/`interleaved`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MiningParams {
    pub minsupp: f64,
    pub minconf: f64,
    pub nb_partitions: usize,
    pub cycle_length: u32,
    pub l_min: u32,
    pub l_max: u32,
    /// Also emit `∅ → {i}` rules for frequent single items.
    pub allow_empty_premise: bool,
    /// Report every detected cycle instead of only the minimal ones
    /// (`sequential`/`interleaved`).
    pub all_cycles: bool,
}

impl Default for MiningParams {
    fn default() -> Self {
        MiningParams {
            minsupp: 0.5,
            minconf: 0.5,
            nb_partitions: 1,
            cycle_length: 2,
            l_min: 1,
            l_max: 2,
            allow_empty_premise: false,
            all_cycles: false,
        }
    }
}

impl MiningParams {
    pub fn validate(&self) -> Result<()> {
        let frac = |name: &'static str, v: f64| {
            if v > 0.0 && v <= 1.0 {
                Ok(())
            } else {
                Err(Error::arg(name, format!("{v} not in (0, 1]")))
            }
        };
        frac("minsupp", self.minsupp)?;
        frac("minconf", self.minconf)?;
        if self.nb_partitions == 0 {
            return Err(Error::arg("partitions", "must be positive"));
        }
        if self.cycle_length == 0 {
            return Err(Error::arg("cycle-length", "must be positive"));
        }
        if self.l_min == 0 || self.l_min > self.l_max {
            return Err(Error::arg(
                "lmin/lmax",
                format!("need 1 <= lmin <= lmax, got {}..={}", self.l_min, self.l_max),
            ));
        }
        Ok(())
    }
}

/// A frequent cyclic itemset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemsetRecord {
    pub itemset: Itemset,
    /// Supporting transactions over the whole database.
    pub count: usize,
    /// Units in which the itemset was observed to occur (`pcar`/`cbcar`) or
    /// to hold (`sequential`/`interleaved`). `interleaved` never evaluates
    /// units outside its candidate cycles, so those stay unset there.
    pub occurrences: OccurrenceSequence,
    pub cycles: Vec<Cycle>,
    /// Outcome of each aggregate constraint used while mining, aligned with
    /// `ConstraintSet::aggregates`; empty when none were evaluated.
    #[serde(skip)]
    pub aggregate_pass: Vec<bool>,
}

/// Scan effort, for comparing miners on the same input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCounters {
    /// Transaction visits summed over all passes.
    pub transactions_touched: u64,
    /// (itemset or rule, time unit) evaluations.
    pub units_evaluated: u64,
}

/// The itemsets meeting a partition checkpoint's relative minimum support
/// and cyclic over the fully scanned units so far.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub level: usize,
    /// 1-based partition index.
    pub partition: usize,
    pub scanned: usize,
    pub relative_min_support: f64,
    pub passing: Vec<Itemset>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MiningOutcome {
    pub rules: Vec<CyclicRule>,
    pub frequent: Vec<ItemsetRecord>,
    pub counters: ScanCounters,
    /// Partition checkpoints (`pcar`/`cbcar` only).
    pub checkpoints: Vec<Checkpoint>,
}

impl MiningOutcome {
    /// Number of reported frequent itemsets per size.
    pub fn counts_by_size(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for r in &self.frequent {
            *out.entry(r.itemset.len()).or_default() += 1;
        }
        out
    }
}

/// Supporting transactions among the first `scan_limit`, and their share.
/// The empty itemset has support 1.
pub fn support(itemset: &Itemset, db: &TemporalDatabase, scan_limit: usize) -> Result<(usize, f64)> {
    if scan_limit == 0 || scan_limit > db.len() {
        return Err(Error::arg(
            "scan_limit",
            format!("must be in 1..={}, got {scan_limit}", db.len()),
        ));
    }
    db.check_itemset(itemset)?;
    let count = db.transactions()[..scan_limit]
        .iter()
        .filter(|t| t.contains_all(itemset.items()))
        .count();
    Ok((count, count as f64 / scan_limit as f64))
}

/// Whether `itemset` meets `minsupp` within the transactions of `unit`.
/// Empty units never hold.
pub fn unit_holds(itemset: &Itemset, db: &TemporalDatabase, unit: u32, minsupp: f64) -> bool {
    if unit >= db.unit_count() {
        return false;
    }
    let txs = db.unit_transactions(unit);
    let count = txs.iter().filter(|t| t.contains_all(itemset.items())).count();
    threshold::meets(count, txs.len(), minsupp)
}

/// Apriori join of `(k-1)`-itemsets sharing a `(k-2)`-prefix, followed by
/// pruning of candidates with an infrequent `(k-1)`-subset. Output is sorted.
pub fn apriori_gen(frequent_prev: &[Itemset]) -> Result<Vec<Itemset>> {
    let Some(first) = frequent_prev.first() else {
        return Ok(Vec::new());
    };
    let k1 = first.len();
    if k1 == 0 || frequent_prev.iter().any(|s| s.len() != k1) {
        return Err(Error::arg(
            "frequent_prev",
            "itemsets must be non-empty and share one size",
        ));
    }
    let mut sorted: Vec<&Itemset> = frequent_prev.iter().collect();
    sorted.sort();
    sorted.dedup();
    let known: HashSet<&[u32]> = sorted.iter().map(|s| s.items()).collect();

    let mut out = Vec::new();
    let mut block_start = 0;
    while block_start < sorted.len() {
        let prefix = &sorted[block_start].items()[..k1 - 1];
        let mut block_end = block_start + 1;
        while block_end < sorted.len() && &sorted[block_end].items()[..k1 - 1] == prefix {
            block_end += 1;
        }
        for i in block_start..block_end {
            for j in i + 1..block_end {
                let mut items = sorted[i].items().to_vec();
                items.push(*sorted[j].items().last().expect("non-empty"));
                let cand = Itemset::from_sorted(items);
                if cand.immediate_subsets().all(|s| known.contains(s.items())) {
                    out.push(cand);
                }
            }
        }
        block_start = block_end;
    }
    Ok(out)
}

/// Whole-database counts for a batch of itemsets of mixed sizes.
pub(crate) fn count_itemsets<'a>(
    db: &TemporalDatabase,
    itemsets: impl IntoIterator<Item = &'a Itemset>,
    counters: &mut ScanCounters,
) -> counter::FxHashMap<Itemset, usize> {
    let mut by_size: BTreeMap<usize, Vec<&Itemset>> = BTreeMap::new();
    let mut out = counter::FxHashMap::default();
    for s in itemsets {
        if s.is_empty() {
            out.insert(s.clone(), db.len());
        } else {
            by_size.entry(s.len()).or_default().push(s);
        }
    }
    for (_, mut group) in by_size {
        group.sort();
        group.dedup();
        let mut counts = vec![0usize; group.len()];
        let mut counter = CandidateCounter::new(group.iter().copied(), db.item_count());
        for t in db.transactions() {
            counter.for_each_match(t, |i| counts[i] += 1);
        }
        counters.transactions_touched += db.len() as u64;
        out.extend(group.into_iter().cloned().zip(counts));
    }
    out
}

/// Premises considered for a frequent itemset: its non-empty proper subsets,
/// or, for a single item with the flag set, the empty premise.
pub(crate) fn premises_of(itemset: &Itemset, allow_empty_premise: bool) -> Vec<Itemset> {
    if itemset.len() == 1 {
        if allow_empty_premise {
            vec![Itemset::empty()]
        } else {
            Vec::new()
        }
    } else {
        itemset
            .proper_subsets()
            .into_iter()
            .filter(|s| !s.is_empty())
            .collect()
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::db::TemporalDatabase;

    pub const TICKET: u32 = 0;
    pub const SHORTAGE: u32 = 1;
    pub const NEWSPRINT: u32 = 2;
    pub const HARD_DRIVE: u32 = 3;

    /// The eight-transaction failure log, one transaction per unit.
    pub fn failures() -> TemporalDatabase {
        TemporalDatabase::from_itemsets([
            vec![SHORTAGE],
            vec![TICKET, SHORTAGE],
            vec![SHORTAGE, NEWSPRINT, HARD_DRIVE],
            vec![TICKET, SHORTAGE, NEWSPRINT],
            vec![NEWSPRINT],
            vec![TICKET, SHORTAGE],
            vec![SHORTAGE, HARD_DRIVE],
            vec![TICKET, SHORTAGE],
        ])
        .unwrap()
    }
}
