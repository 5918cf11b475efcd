use std::collections::BTreeSet;

use super::counter::FxHashMap;
use super::sequential::{finish, reported_cycles};
use super::{apriori_gen, premises_of, CandidateCounter, MiningOutcome, MiningParams, ScanCounters};
use crate::cycle::{check_length_range, prune_candidates, Cycle, CycleCandidateSet, OccurrenceSequence};
use crate::db::TemporalDatabase;
use crate::error::Result;
use crate::itemset::Itemset;
use crate::threshold::meets;

struct Candidate {
    itemset: Itemset,
    live: CycleCandidateSet,
    held: OccurrenceSequence,
    /// `(unit, supporting transactions)` for every unit where it held.
    unit_counts: Vec<(u32, usize)>,
}

impl Candidate {
    fn count_at(&self, unit: u32) -> usize {
        self.unit_counts
            .binary_search_by_key(&unit, |&(u, _)| u)
            .map_or(0, |i| self.unit_counts[i].1)
    }
}

/// Produces exactly the rules of [`sequential`](super::sequential) while
/// evaluating fewer (itemset, unit) pairs:
///
/// * cycle pruning seeds a k-itemset's candidate cycles with the
///   intersection of its (k-1)-subsets' cycles;
/// * cycle skipping evaluates a unit only if some live candidate covers it;
/// * cycle elimination retires a candidate cycle at its first miss.
///
/// Rules of a cyclic itemset start from that itemset's cycles and are swept
/// the same way, using the per-unit counts recorded during the itemset pass.
pub fn interleaved(db: &TemporalDatabase, params: &MiningParams) -> Result<MiningOutcome> {
    params.validate()?;
    let units = db.unit_count();
    check_length_range(params.l_min, params.l_max, units)?;
    let mut counters = ScanCounters::default();
    let all = CycleCandidateSet::all(params.l_min, params.l_max)?;

    let mut level: Vec<Candidate> = (0..db.item_count())
        .map(|i| Candidate {
            itemset: Itemset::from_sorted(vec![i]),
            live: all.clone(),
            held: OccurrenceSequence::zeros(units),
            unit_counts: Vec::new(),
        })
        .collect();
    let mut cyclic: Vec<Candidate> = Vec::new();
    let mut cycles_of: FxHashMap<Itemset, BTreeSet<Cycle>> = FxHashMap::default();

    while !level.is_empty() {
        sweep_itemsets(db, &mut level, params.minsupp, &mut counters);
        let survivors: Vec<Candidate> = level.into_iter().filter(|c| !c.live.is_empty()).collect();
        for s in &survivors {
            cycles_of.insert(s.itemset.clone(), s.live.live().clone());
        }
        let sets: Vec<Itemset> = survivors.iter().map(|c| c.itemset.clone()).collect();
        let mut next = Vec::new();
        for cand in apriori_gen(&sets)? {
            let subset_cycles: Vec<BTreeSet<Cycle>> = cand
                .immediate_subsets()
                .map(|s| cycles_of[&s].clone())
                .collect();
            let live = prune_candidates(&subset_cycles, params.l_max)?;
            if !live.is_empty() {
                next.push(Candidate {
                    itemset: cand,
                    live,
                    held: OccurrenceSequence::zeros(units),
                    unit_counts: Vec::new(),
                });
            }
        }
        cyclic.extend(survivors);
        level = next;
    }

    let by_itemset: FxHashMap<&Itemset, &Candidate> = cyclic.iter().map(|c| (&c.itemset, c)).collect();
    let mut found = Vec::new();
    for f in &cyclic {
        for premise in premises_of(&f.itemset, params.allow_empty_premise) {
            let base = (!premise.is_empty()).then(|| by_itemset[&premise]);
            let mut live = f.live.clone();
            for u in 0..units {
                if live.is_empty() {
                    break;
                }
                if !live.covers(u) {
                    continue;
                }
                counters.units_evaluated += 1;
                let denom = match base {
                    Some(b) => b.count_at(u),
                    None => db.unit_range(u).len(),
                };
                let holds = meets(f.count_at(u), denom, params.minconf);
                live.eliminate_in_place(u, holds);
            }
            if !live.is_empty() {
                let conclusion = f.itemset.difference(&premise);
                found.push((premise, conclusion, reported_cycles(live.live(), params.all_cycles)));
            }
        }
    }

    let cyclic_itemsets = cyclic
        .into_iter()
        .map(|c| {
            let cycles = reported_cycles(c.live.live(), params.all_cycles);
            (c.itemset, c.held, cycles)
        })
        .collect();
    Ok(finish(db, found, cyclic_itemsets, counters))
}

/// One left-to-right pass over the units for a level of candidates.
fn sweep_itemsets(
    db: &TemporalDatabase,
    level: &mut [Candidate],
    minsupp: f64,
    counters: &mut ScanCounters,
) {
    let mut active: Vec<usize> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for u in 0..db.unit_count() {
        active.clear();
        active.extend((0..level.len()).filter(|&i| level[i].live.covers(u)));
        if active.is_empty() {
            continue;
        }
        counters.units_evaluated += active.len() as u64;
        let txs = db.unit_transactions(u);
        counts.clear();
        counts.resize(active.len(), 0);
        if !txs.is_empty() {
            counters.transactions_touched += txs.len() as u64;
            let mut counter = CandidateCounter::new(active.iter().map(|&i| &level[i].itemset), db.item_count());
            for t in txs {
                counter.for_each_match(t, |j| counts[j] += 1);
            }
        }
        for (j, &i) in active.iter().enumerate() {
            let c = &mut level[i];
            let holds = meets(counts[j], txs.len(), minsupp);
            if holds {
                c.held.set(u);
                c.unit_counts.push((u, counts[j]));
            }
            c.live.eliminate_in_place(u, holds);
        }
    }
}
