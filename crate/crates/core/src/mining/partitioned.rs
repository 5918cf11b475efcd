use super::{apriori_gen, Checkpoint, ItemsetRecord, MiningOutcome, MiningParams, ScanCounters};
use super::CandidateCounter;
use super::counter::FxHashMap;
use crate::constraints::{universe_allows, AggregateStats, ConstraintSet};
use crate::cycle::{is_cyclic, prune_candidates, CycleCandidateSet, OccurrenceSequence};
use crate::db::{partition, relative_min_support, TemporalDatabase};
use crate::error::{Error, Result};
use crate::itemset::Itemset;
use crate::rulegen::generate_rules;
use crate::threshold::{meets, min_count};

/// Partition-incremental cyclic rule mining at a fixed cycle length.
/// Equivalent to [`cbcar`] with no constraints.
pub fn pcar(db: &TemporalDatabase, params: &MiningParams) -> Result<MiningOutcome> {
    mine_partitioned(db, params, &ConstraintSet::unconstrained())
}

/// Constraint-based cyclic rule mining.
///
/// The database is scanned partition by partition, level by level. After
/// each partition a candidate's cumulative count is compared with the
/// relative minimum support of the scanned prefix, and its cycle offsets are
/// checked against every fully scanned unit; the passing sets are kept in
/// [`MiningOutcome::checkpoints`].
///
/// A candidate is dropped mid-scan only when it provably cannot succeed:
/// every offset has already missed a unit, or even a hit in every remaining
/// transaction would leave it below `minsupp`. Prefix frequency alone is not
/// preserved as the scan grows, so it is reported but never used to drop a
/// candidate; this keeps the output independent of `nb_partitions`.
///
/// Constraint hooks:
/// * candidates whose items are not all in `PRM ∪ CL` are never generated;
/// * aggregate constraints that are anti-monotone (`SUM`/`MAX` with `>=`/`>`,
///   `MIN` with `<=`/`<`) prune itemsets at the end of each level;
/// * rule form (`premise ⊆ PRM`, `conclusion ⊆ CL`) and every aggregate are
///   enforced during rule generation.
pub fn cbcar(db: &TemporalDatabase, params: &MiningParams, constraints: &ConstraintSet) -> Result<MiningOutcome> {
    constraints.validate(db)?;
    mine_partitioned(db, params, constraints)
}

struct Candidate {
    itemset: Itemset,
    count: usize,
    occurrences: OccurrenceSequence,
    live: CycleCandidateSet,
    aggregates: Vec<AggregateStats>,
    settled: Vec<bool>,
    /// Aggregates still accumulating.
    pending: usize,
    retired: bool,
}

impl Candidate {
    fn new(itemset: Itemset, live: CycleCandidateSet, units: u32, n_aggregates: usize) -> Self {
        Candidate {
            itemset,
            count: 0,
            occurrences: OccurrenceSequence::zeros(units),
            live,
            aggregates: vec![AggregateStats::default(); n_aggregates],
            settled: vec![false; n_aggregates],
            pending: n_aggregates,
            retired: false,
        }
    }
}

fn mine_partitioned(db: &TemporalDatabase, params: &MiningParams, cs: &ConstraintSet) -> Result<MiningOutcome> {
    params.validate()?;
    let units = db.unit_count();
    let length = params.cycle_length;
    if length > units / 2 {
        return Err(Error::arg(
            "cycle-length",
            format!("{length} exceeds unit_count / 2 = {}", units / 2),
        ));
    }
    let partitioning = partition(db, params.nb_partitions)?;
    let n = db.len();
    let needed = min_count(n, params.minsupp);
    let aggs = &cs.aggregates;
    let all_offsets = CycleCandidateSet::all(length, length)?;

    let mut counters = ScanCounters::default();
    let mut checkpoints = Vec::new();
    let mut records: Vec<ItemsetRecord> = Vec::new();
    let mut level: Vec<Candidate> = (0..db.item_count())
        .map(|i| Itemset::from_sorted(vec![i]))
        .filter(|s| universe_allows(s, cs))
        .map(|s| Candidate::new(s, all_offsets.clone(), units, aggs.len()))
        .collect();
    let mut k = 1;
    let mut active: Vec<usize> = Vec::new();

    while !level.is_empty() {
        let mut completed_units = 0u32;
        for (pi, range) in partitioning.ranges().iter().enumerate() {
            active.clear();
            active.extend((0..level.len()).filter(|&i| !level[i].retired));
            if active.is_empty() {
                break;
            }
            let keys: Vec<Itemset> = active.iter().map(|&i| level[i].itemset.clone()).collect();
            let mut counter = CandidateCounter::new(&keys, db.item_count());
            for t in &db.transactions()[range.clone()] {
                counter.for_each_match(t, |j| {
                    let c = &mut level[active[j]];
                    c.count += 1;
                    c.occurrences.set(t.time_unit);
                    if c.pending == 0 {
                        return;
                    }
                    for (a, ac) in aggs.iter().enumerate() {
                        if c.settled[a] {
                            continue;
                        }
                        c.aggregates[a].add(t.quantity_of(ac.item));
                        if ac.settles_when_met() && c.aggregates[a].satisfies(ac) {
                            c.settled[a] = true;
                            c.pending -= 1;
                        }
                    }
                });
            }
            counters.transactions_touched += range.len() as u64;

            let complete = db.complete_units(range.end);
            let remaining = n - range.end;
            for &i in &active {
                let c = &mut level[i];
                for u in completed_units..complete {
                    if c.live.covers(u) {
                        counters.units_evaluated += 1;
                        c.live.eliminate_in_place(u, c.occurrences.get(u));
                    }
                }
                if c.live.is_empty() || c.count + remaining < needed {
                    c.retired = true;
                }
            }
            completed_units = complete;

            let passing = active
                .iter()
                .map(|&i| &level[i])
                .filter(|c| meets(c.count, range.end, params.minsupp) && is_cyclic(&c.occurrences, length, complete))
                .map(|c| c.itemset.clone())
                .collect();
            checkpoints.push(Checkpoint {
                level: k,
                partition: pi + 1,
                scanned: range.end,
                relative_min_support: relative_min_support(&partitioning, pi + 1, n, params.minsupp)?,
                passing,
            });
        }

        let mut survivors: Vec<Candidate> = Vec::new();
        for c in level {
            if c.retired || !meets(c.count, n, params.minsupp) || c.live.is_empty() {
                continue;
            }
            let pass: Vec<bool> = aggs
                .iter()
                .enumerate()
                .map(|(a, ac)| c.settled[a] || c.aggregates[a].satisfies(ac))
                .collect();
            if aggs.iter().zip(&pass).any(|(ac, ok)| ac.is_anti_monotone() && !ok) {
                continue;
            }
            records.push(ItemsetRecord {
                itemset: c.itemset.clone(),
                count: c.count,
                occurrences: c.occurrences.clone(),
                cycles: c.live.live().iter().copied().collect(),
                aggregate_pass: pass,
            });
            survivors.push(c);
        }

        let cycles_of: FxHashMap<&Itemset, &CycleCandidateSet> =
            survivors.iter().map(|c| (&c.itemset, &c.live)).collect();
        let sets: Vec<Itemset> = survivors.iter().map(|c| c.itemset.clone()).collect();
        let mut next = Vec::new();
        for cand in apriori_gen(&sets)? {
            let subset_cycles: Vec<_> = cand
                .immediate_subsets()
                .map(|s| cycles_of[&s].live().clone())
                .collect();
            let live = prune_candidates(&subset_cycles, length)?;
            if !live.is_empty() {
                next.push(Candidate::new(cand, live, units, aggs.len()));
            }
        }
        level = next;
        k += 1;
    }

    let rules = generate_rules(&records, db, params.minconf, cs, params.allow_empty_premise)?;
    Ok(MiningOutcome {
        rules,
        frequent: records,
        counters,
        checkpoints,
    })
}
