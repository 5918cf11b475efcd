use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, Zipf};
use serde::{Deserialize, Serialize};

use super::{TemporalDatabase, Transaction};
use crate::cycle::Cycle;
use crate::error::{Error, Result};
use crate::itemset::{ItemId, Itemset};

/// An itemset planted on every unit of a cycle's residue class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedCycle {
    pub itemset: Itemset,
    pub cycle: Cycle,
}

/// One transaction per time unit. Unit `u` contains every planted itemset
/// whose cycle covers `u`, plus each item of `0..n_items` independently with
/// probability `noise`.
pub fn generate_synthetic(
    n_units: u32,
    n_items: u32,
    planted: &[PlantedCycle],
    noise: f64,
    seed: u64,
) -> Result<TemporalDatabase> {
    if n_units == 0 || n_items == 0 {
        return Err(Error::arg("n_units/n_items", "must be positive"));
    }
    if !(0.0..=1.0).contains(&noise) {
        return Err(Error::arg("noise", format!("{noise} not in [0, 1]")));
    }
    for p in planted {
        if p.cycle.length > n_units / 2 {
            return Err(Error::arg(
                "planted_cycles",
                format!("cycle {} longer than n_units / 2", p.cycle),
            ));
        }
        if let Some(&bad) = p.itemset.items().iter().find(|&&i| i >= n_items) {
            return Err(Error::UnknownItem(bad));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let txs = (0..n_units)
        .map(|u| {
            let mut items: Vec<ItemId> = planted
                .iter()
                .filter(|p| p.cycle.covers(u))
                .flat_map(|p| p.itemset.items().iter().copied())
                .collect();
            if noise > 0.0 {
                items.extend((0..n_items).filter(|_| rng.random_bool(noise)));
            }
            items.sort_unstable();
            items.dedup();
            Transaction::with_items(u as u64, u, items)
        })
        .collect();
    TemporalDatabase::new(txs, Some(n_units), Some(n_items))
}

/// Parameters of a market-basket style generator for benchmarks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BasketSpec {
    pub transactions: usize,
    pub items: u32,
    /// Mean transaction length (Poisson).
    pub avg_len: f64,
    /// Consecutive transactions per time unit.
    pub per_unit: u32,
    /// Size of the pool of recurring patterns.
    pub patterns: usize,
    /// Mean pattern length (Poisson, at least 2).
    pub pattern_len: f64,
    /// Probability that a transaction embeds one pool pattern.
    pub pattern_rate: f64,
    /// Zipf exponent of item popularity.
    pub skew: f64,
    pub seed: u64,
}

impl Default for BasketSpec {
    fn default() -> Self {
        BasketSpec {
            transactions: 10_000,
            items: 500,
            avg_len: 10.0,
            per_unit: 100,
            patterns: 40,
            pattern_len: 4.0,
            pattern_rate: 0.6,
            skew: 1.0,
            seed: 0,
        }
    }
}

/// Generates a deterministic basket database: Zipf-distributed items plus a
/// pool of recurring patterns, `per_unit` transactions per time unit.
pub fn generate_baskets(spec: &BasketSpec) -> Result<TemporalDatabase> {
    if spec.transactions == 0 || spec.items < 2 || spec.per_unit == 0 {
        return Err(Error::arg(
            "synthetic",
            "transactions, per_unit must be positive and items >= 2",
        ));
    }
    if !(spec.avg_len > 0.0 && spec.pattern_len > 0.0 && spec.skew > 0.0) {
        return Err(Error::arg("synthetic", "lengths and skew must be positive"));
    }
    if !(0.0..=1.0).contains(&spec.pattern_rate) {
        return Err(Error::arg("synthetic", "pattern_rate not in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let zipf = Zipf::new(spec.items as f64, spec.skew)
        .map_err(|e| Error::arg("synthetic", e.to_string()))?;
    let tx_len = Poisson::new(spec.avg_len).map_err(|e| Error::arg("synthetic", e.to_string()))?;
    let pat_len =
        Poisson::new(spec.pattern_len).map_err(|e| Error::arg("synthetic", e.to_string()))?;

    // Popularity ranks map onto a shuffled id space so that frequent items
    // are not simply the smallest ids.
    let mut id_of_rank: Vec<ItemId> = (0..spec.items).collect();
    id_of_rank.shuffle(&mut rng);
    let draw = |rng: &mut ChaCha8Rng| -> ItemId {
        let rank = zipf.sample(rng) as usize - 1;
        id_of_rank[rank.min(spec.items as usize - 1)]
    };

    let pool: Vec<Vec<ItemId>> = (0..spec.patterns)
        .map(|_| {
            let len = (pat_len.sample(&mut rng) as usize).clamp(2, spec.items as usize);
            let mut p: Vec<ItemId> = (0..len).map(|_| draw(&mut rng)).collect();
            p.sort_unstable();
            p.dedup();
            p
        })
        .collect();

    let txs = (0..spec.transactions)
        .map(|i| {
            let len = (tx_len.sample(&mut rng) as usize).max(1);
            let mut items = Vec::with_capacity(len + 4);
            if !pool.is_empty() && rng.random_bool(spec.pattern_rate) {
                let p = &pool[rng.random_range(0..pool.len())];
                items.extend_from_slice(p);
            }
            while items.len() < len {
                items.push(draw(&mut rng));
            }
            let unit = u32::try_from(i / spec.per_unit as usize).unwrap_or(u32::MAX);
            Transaction::with_items(i as u64, unit, items)
        })
        .collect();
    TemporalDatabase::new(txs, None, Some(spec.items))
}
