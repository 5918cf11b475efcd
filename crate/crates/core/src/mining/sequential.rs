use super::counter::FxHashMap;
use super::{count_itemsets, apriori_gen, premises_of, CandidateCounter, ItemsetRecord, MiningOutcome, MiningParams, ScanCounters};
use crate::cycle::{check_length_range, detect_cycles_exhaustive, minimal_cycles, Cycle, OccurrenceSequence};
use crate::db::{TemporalDatabase, Transaction};
use crate::error::Result;
use crate::itemset::Itemset;
use crate::rulegen::CyclicRule;
use crate::threshold::meets;

/// Two-phase miner: association rules are mined independently inside every
/// time unit, then each rule's binary sequence goes through exhaustive
/// cycle detection over `l_min..=l_max`.
///
/// A rule holds in a unit when its itemset meets `minsupp` and its
/// confidence meets `minconf` within that unit's transactions; empty units
/// never hold. Reported support and confidence are whole-database values.
pub fn sequential(db: &TemporalDatabase, params: &MiningParams) -> Result<MiningOutcome> {
    params.validate()?;
    let units = db.unit_count();
    check_length_range(params.l_min, params.l_max, units)?;
    let mut counters = ScanCounters::default();
    let mut itemset_bits: FxHashMap<Itemset, OccurrenceSequence> = FxHashMap::default();
    let mut rule_bits: FxHashMap<(Itemset, Itemset), OccurrenceSequence> = FxHashMap::default();

    for u in 0..units {
        let txs = db.unit_transactions(u);
        let large = unit_apriori(txs, db.item_count(), params.minsupp, &mut counters);
        for (f, &count) in &large {
            itemset_bits
                .entry(f.clone())
                .or_insert_with(|| OccurrenceSequence::zeros(units))
                .set(u);
            for premise in premises_of(f, params.allow_empty_premise) {
                counters.units_evaluated += 1;
                let denom = if premise.is_empty() { txs.len() } else { large[&premise] };
                if meets(count, denom, params.minconf) {
                    let conclusion = f.difference(&premise);
                    rule_bits
                        .entry((premise, conclusion))
                        .or_insert_with(|| OccurrenceSequence::zeros(units))
                        .set(u);
                }
            }
        }
    }

    let mut found = Vec::new();
    for ((premise, conclusion), bits) in rule_bits {
        let cycles = detect_cycles_exhaustive(&bits, params.l_min, params.l_max)?;
        if !cycles.is_empty() {
            found.push((premise, conclusion, reported_cycles(&cycles, params.all_cycles)));
        }
    }
    let mut cyclic_itemsets = Vec::new();
    for (itemset, bits) in itemset_bits {
        let cycles = detect_cycles_exhaustive(&bits, params.l_min, params.l_max)?;
        if !cycles.is_empty() {
            cyclic_itemsets.push((itemset, bits, reported_cycles(&cycles, params.all_cycles)));
        }
    }
    Ok(finish(db, found, cyclic_itemsets, counters))
}

/// All itemsets meeting `minsupp` inside one unit, with their unit counts.
fn unit_apriori(
    txs: &[Transaction],
    item_count: u32,
    minsupp: f64,
    counters: &mut ScanCounters,
) -> FxHashMap<Itemset, usize> {
    let mut large = FxHashMap::default();
    counters.units_evaluated += item_count as u64;
    if txs.is_empty() {
        return large;
    }
    let n = txs.len();
    let mut item_counts = vec![0usize; item_count as usize];
    for t in txs {
        for &i in t.items() {
            item_counts[i as usize] += 1;
        }
    }
    counters.transactions_touched += n as u64;
    let mut level: Vec<Itemset> = Vec::new();
    for (i, &c) in item_counts.iter().enumerate() {
        if meets(c, n, minsupp) {
            let s = Itemset::from_sorted(vec![i as u32]);
            large.insert(s.clone(), c);
            level.push(s);
        }
    }
    while !level.is_empty() {
        let cands = apriori_gen(&level).expect("uniform sizes");
        if cands.is_empty() {
            break;
        }
        counters.units_evaluated += cands.len() as u64;
        counters.transactions_touched += n as u64;
        let mut counts = vec![0usize; cands.len()];
        let mut counter = CandidateCounter::new(&cands, item_count);
        for t in txs {
            counter.for_each_match(t, |i| counts[i] += 1);
        }
        level = Vec::new();
        for (cand, c) in cands.into_iter().zip(counts) {
            if meets(c, n, minsupp) {
                large.insert(cand.clone(), c);
                level.push(cand);
            }
        }
    }
    large
}

pub(super) fn reported_cycles(
    cycles: &std::collections::BTreeSet<Cycle>,
    all: bool,
) -> Vec<Cycle> {
    if all {
        cycles.iter().copied().collect()
    } else {
        minimal_cycles(cycles).into_iter().collect()
    }
}

/// Attaches whole-database support and confidence and sorts the output.
pub(super) fn finish(
    db: &TemporalDatabase,
    found: Vec<(Itemset, Itemset, Vec<Cycle>)>,
    cyclic_itemsets: Vec<(Itemset, OccurrenceSequence, Vec<Cycle>)>,
    mut counters: ScanCounters,
) -> MiningOutcome {
    let fulls: Vec<Itemset> = found.iter().map(|(p, c, _)| p.union(c)).collect();
    let needed = fulls
        .iter()
        .chain(found.iter().map(|(p, _, _)| p))
        .chain(cyclic_itemsets.iter().map(|(s, _, _)| s));
    let counts = count_itemsets(db, needed, &mut counters);
    let n = db.len() as f64;

    let mut rules: Vec<CyclicRule> = found
        .into_iter()
        .zip(fulls)
        .map(|((premise, conclusion, cycles), full)| {
            let both = counts[&full];
            let base = counts[&premise];
            CyclicRule {
                support: both as f64 / n,
                confidence: if base == 0 { 0.0 } else { both as f64 / base as f64 },
                premise,
                conclusion,
                cycles,
            }
        })
        .collect();
    rules.sort_by(|a, b| a.key().cmp(&b.key()));

    let mut frequent: Vec<ItemsetRecord> = cyclic_itemsets
        .into_iter()
        .map(|(itemset, occurrences, cycles)| ItemsetRecord {
            count: counts[&itemset],
            itemset,
            occurrences,
            cycles,
            aggregate_pass: Vec::new(),
        })
        .collect();
    frequent.sort_by(|a, b| (a.itemset.len(), &a.itemset).cmp(&(b.itemset.len(), &b.itemset)));

    MiningOutcome {
        rules,
        frequent,
        counters,
        checkpoints: Vec::new(),
    }
}
