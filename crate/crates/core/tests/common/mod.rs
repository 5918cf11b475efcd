//! Brute-force reference implementations over a plain in-memory layout,
//! sharing no code with the library's miners.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use cyclic_rules::{
    AggregateConstraint, AggregateFn, Comparator, ConstraintSet, CyclicRule, ItemFilter, TemporalDatabase,
    Transaction, TransactionEntry,
};
use rand::Rng;

pub const FIXTURE: &str = "1\n0 1\n1 2 3\n0 1 2\n2\n0 1\n1 3\n0 1\n";

/// Transactions grouped by unit; each is `item -> quantity`.
#[derive(Clone, Debug)]
pub struct Raw {
    pub units: Vec<Vec<BTreeMap<u32, u64>>>,
    pub items: u32,
}

impl Raw {
    pub fn random(rng: &mut impl Rng, max_units: u32, max_items: u32) -> Raw {
        let n_units = rng.random_range(4..=max_units);
        let items = rng.random_range(2..=max_items);
        // a few recurring itemsets so that cycles actually show up
        let motifs: Vec<Vec<u32>> = (0..2)
            .map(|_| (0..items).filter(|_| rng.random_bool(0.5)).collect())
            .collect();
        let period = rng.random_range(1..=3u32);
        let density = rng.random_range(0.2..0.7);
        let mut units = Vec::new();
        for u in 0..n_units {
            let n_tx = rng.random_range(0..=4usize);
            let mut txs = Vec::new();
            for _ in 0..n_tx {
                let mut tx = BTreeMap::new();
                if u % period == 0 && rng.random_bool(0.8) {
                    for &i in &motifs[rng.random_range(0..motifs.len())] {
                        tx.insert(i, rng.random_range(1..=4));
                    }
                }
                for i in 0..items {
                    if rng.random_bool(density) {
                        *tx.entry(i).or_insert(0) += rng.random_range(1..=4);
                    }
                }
                txs.push(tx);
            }
            units.push(txs);
        }
        if units.iter().all(|u| u.is_empty()) {
            units[0].push(BTreeMap::new());
        }
        Raw { units, items }
    }

    pub fn to_db(&self) -> TemporalDatabase {
        let mut txs = Vec::new();
        for (u, unit) in self.units.iter().enumerate() {
            for tx in unit {
                let entries = tx.iter().map(|(&item, &quantity)| TransactionEntry { item, quantity });
                txs.push(Transaction::new(txs.len() as u64, u as u32, entries).unwrap());
            }
        }
        TemporalDatabase::new(txs, Some(self.units.len() as u32), Some(self.items)).unwrap()
    }

    pub fn unit_count(&self) -> u32 {
        self.units.len() as u32
    }

    pub fn all(&self) -> impl Iterator<Item = &BTreeMap<u32, u64>> {
        self.units.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.all().count()
    }

    /// Non-empty itemsets over the item universe, as sorted id lists.
    pub fn itemsets(&self) -> Vec<Vec<u32>> {
        (1u32..(1 << self.items))
            .map(|mask| (0..self.items).filter(|i| mask >> i & 1 == 1).collect())
            .collect()
    }
}

pub fn contains(tx: &BTreeMap<u32, u64>, items: &[u32]) -> bool {
    items.iter().all(|i| tx.contains_key(i))
}

pub fn count<'a>(txs: impl IntoIterator<Item = &'a BTreeMap<u32, u64>>, items: &[u32]) -> usize {
    txs.into_iter().filter(|t| contains(t, items)).count()
}

pub fn at_least(count: usize, total: usize, fraction: f64) -> bool {
    total > 0 && count as f64 >= fraction * total as f64 - 1e-9
}

/// `(premise, conclusion, support, confidence, [(l, o)])`
pub type Expected = (Vec<u32>, Vec<u32>, f64, f64, Vec<(u32, u32)>);

pub fn flatten(rules: &[CyclicRule]) -> Vec<Expected> {
    rules
        .iter()
        .map(|r| {
            (
                r.premise.items().to_vec(),
                r.conclusion.items().to_vec(),
                r.support,
                r.confidence,
                r.cycles.iter().map(|c| (c.length, c.offset)).collect(),
            )
        })
        .collect()
}

fn premises(f: &[u32], allow_empty: bool) -> Vec<Vec<u32>> {
    if f.len() == 1 {
        return if allow_empty { vec![Vec::new()] } else { Vec::new() };
    }
    (1u32..(1 << f.len()) - 1)
        .map(|mask| {
            f.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

fn minus(f: &[u32], p: &[u32]) -> Vec<u32> {
    f.iter().copied().filter(|x| !p.contains(x)).collect()
}

/// Cycles `(l, o)`, `l_min <= l <= l_max`, whose residue class is all true.
pub fn cycles_of(bits: &[bool], l_min: u32, l_max: u32) -> BTreeSet<(u32, u32)> {
    let mut out = BTreeSet::new();
    for l in l_min..=l_max {
        for o in 0..l {
            let members: Vec<usize> = (o as usize..bits.len()).step_by(l as usize).collect();
            if members.len() >= 2 && members.iter().all(|&u| bits[u]) {
                out.insert((l, o));
            }
        }
    }
    out
}

fn minimal(cycles: &BTreeSet<(u32, u32)>) -> Vec<(u32, u32)> {
    cycles
        .iter()
        .copied()
        .filter(|&(l, o)| !cycles.iter().any(|&(m, p)| m < l && l % m == 0 && o % m == p))
        .collect()
}

pub struct SeqParams {
    pub minsupp: f64,
    pub minconf: f64,
    pub l_min: u32,
    pub l_max: u32,
    pub allow_empty: bool,
    pub all_cycles: bool,
}

/// Rules mined per unit, then kept when their per-unit truth sequence is
/// cyclic.
pub fn sequential(raw: &Raw, p: &SeqParams) -> Vec<Expected> {
    let n = raw.len();
    let mut out = Vec::new();
    for f in raw.itemsets() {
        for prem in premises(&f, p.allow_empty) {
            let holds: Vec<bool> = raw
                .units
                .iter()
                .map(|txs| {
                    let cf = count(txs, &f);
                    let cp = if prem.is_empty() { txs.len() } else { count(txs, &prem) };
                    at_least(cf, txs.len(), p.minsupp) && at_least(cf, cp, p.minconf)
                })
                .collect();
            let cycles = cycles_of(&holds, p.l_min, p.l_max);
            if cycles.is_empty() {
                continue;
            }
            let cf = count(raw.all(), &f);
            let cp = if prem.is_empty() { n } else { count(raw.all(), &prem) };
            let reported = if p.all_cycles { cycles.into_iter().collect() } else { minimal(&cycles) };
            out.push((prem.clone(), minus(&f, &prem), cf as f64 / n as f64, cf as f64 / cp as f64, reported));
        }
    }
    out.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    out
}

pub struct FixedParams {
    pub minsupp: f64,
    pub minconf: f64,
    pub length: u32,
    pub allow_empty: bool,
}

/// Rules whose itemset meets `minsupp` over the whole database and occurs in
/// every unit of some offset at the fixed length, filtered by `cs`.
pub fn fixed_length(raw: &Raw, p: &FixedParams, cs: &ConstraintSet) -> Vec<Expected> {
    let n = raw.len();
    let mut out = Vec::new();
    for f in raw.itemsets() {
        let cf = count(raw.all(), &f);
        if !at_least(cf, n, p.minsupp) {
            continue;
        }
        let occurs: Vec<bool> = raw.units.iter().map(|txs| count(txs, &f) > 0).collect();
        let cycles = cycles_of(&occurs, p.length, p.length);
        if cycles.is_empty() || !in_universe(&f, cs) || !cs.aggregates.iter().all(|a| aggregate(raw, &f, a)) {
            continue;
        }
        for prem in premises(&f, p.allow_empty) {
            let concl = minus(&f, &prem);
            if !allows(&cs.prm, &prem) || !allows(&cs.cl, &concl) {
                continue;
            }
            let cp = if prem.is_empty() { n } else { count(raw.all(), &prem) };
            if !at_least(cf, cp, p.minconf) {
                continue;
            }
            out.push((prem, concl, cf as f64 / n as f64, cf as f64 / cp as f64, cycles.iter().copied().collect()));
        }
    }
    out.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    out
}

fn allows(filter: &ItemFilter, items: &[u32]) -> bool {
    match filter {
        ItemFilter::Any => true,
        ItemFilter::Only(set) => items.iter().all(|i| set.contains(i)),
    }
}

fn in_universe(items: &[u32], cs: &ConstraintSet) -> bool {
    match (&cs.prm, &cs.cl) {
        (ItemFilter::Only(p), ItemFilter::Only(c)) => items.iter().all(|i| p.contains(i) || c.contains(i)),
        _ => true,
    }
}

/// Aggregate of `a.item`'s quantity over the transactions containing `f`.
/// A missing item adds 0 to SUM and AVG and is ignored by MIN and MAX;
/// MIN/MAX with no value at all fail.
pub fn aggregate(raw: &Raw, f: &[u32], a: &AggregateConstraint) -> bool {
    let supporting: Vec<_> = raw.all().filter(|t| contains(t, f)).collect();
    let qty: Vec<u64> = supporting.iter().filter_map(|t| t.get(&a.item).copied()).collect();
    let value = match a.function {
        AggregateFn::Sum => Some(qty.iter().sum::<u64>() as f64),
        AggregateFn::Avg if supporting.is_empty() => Some(0.0),
        AggregateFn::Avg => Some(qty.iter().sum::<u64>() as f64 / supporting.len() as f64),
        AggregateFn::Min => qty.iter().min().map(|&v| v as f64),
        AggregateFn::Max => qty.iter().max().map(|&v| v as f64),
    };
    let Some(v) = value else { return false };
    let t = a.threshold;
    match a.comparator {
        Comparator::Ge => v >= t - 1e-9,
        Comparator::Gt => v > t + 1e-9,
        Comparator::Le => v <= t + 1e-9,
        Comparator::Lt => v < t - 1e-9,
        Comparator::Eq => (v - t).abs() <= 1e-9,
    }
}

pub fn random_constraints(rng: &mut impl Rng, items: u32) -> ConstraintSet {
    let filter = |rng: &mut dyn rand::RngCore| {
        if rng.random_bool(0.3) {
            ItemFilter::Any
        } else {
            let mut set: BTreeSet<u32> = (0..items).filter(|_| rng.random_bool(0.5)).collect();
            if set.is_empty() {
                set.insert(rng.random_range(0..items));
            }
            ItemFilter::Only(set)
        }
    };
    let prm = filter(rng);
    let cl = filter(rng);
    let fns = [AggregateFn::Sum, AggregateFn::Avg, AggregateFn::Min, AggregateFn::Max];
    let cmps = [Comparator::Ge, Comparator::Gt, Comparator::Le, Comparator::Lt, Comparator::Eq];
    let aggregates = (0..rng.random_range(0..=2))
        .map(|_| {
            let f = fns[rng.random_range(0..fns.len())];
            let c = cmps[rng.random_range(0..cmps.len())];
            let threshold = match f {
                AggregateFn::Sum => rng.random_range(0..=12) as f64,
                AggregateFn::Avg => rng.random_range(0..=8) as f64 / 2.0,
                _ => rng.random_range(1..=4) as f64,
            };
            AggregateConstraint::new(f, rng.random_range(0..items), c, threshold).unwrap()
        })
        .collect();
    ConstraintSet { prm, cl, aggregates }
}

/// Keeps the rules an unconstrained run would have to share with a run
/// under `cs`: itemset inside `PRM ∪ CL`, premise in `PRM`, conclusion in
/// `CL`, every aggregate satisfied.
pub fn post_filter(raw: &Raw, rules: &[Expected], cs: &ConstraintSet) -> Vec<Expected> {
    rules
        .iter()
        .filter(|(p, c, ..)| {
            let mut f = p.clone();
            f.extend(c);
            f.sort_unstable();
            in_universe(&f, cs)
                && allows(&cs.prm, p)
                && allows(&cs.cl, c)
                && cs.aggregates.iter().all(|a| aggregate(raw, &f, a))
        })
        .cloned()
        .collect()
}
