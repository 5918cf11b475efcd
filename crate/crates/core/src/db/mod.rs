//! Temporal transaction databases: model, ingestion, partitioning and
//! synthetic generation.
//!
//! Time units are 0-based. For line-oriented formats, transaction `i`
//! (0-based line number) lands in unit `i / units_per_group`, so the default
//! `units_per_group = 1` makes every transaction its own time unit.

mod parse;
mod partition;
mod synthetic;

use std::collections::BTreeMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::itemset::{is_sorted_subset, ItemId, Itemset};

pub use parse::{parse_transactions, InputFormat};
pub use partition::{partition, relative_min_support, Partitioning};
pub use synthetic::{generate_baskets, generate_synthetic, BasketSpec, PlantedCycle};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransactionEntry {
    pub item: ItemId,
    pub quantity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transaction {
    pub id: u64,
    pub time_unit: u32,
    entries: Vec<TransactionEntry>,
    #[serde(skip)]
    items: Vec<ItemId>,
}

impl Transaction {
    /// Builds a transaction, merging duplicate items by summing quantities.
    /// Zero quantities are rejected.
    pub fn new(
        id: u64,
        time_unit: u32,
        entries: impl IntoIterator<Item = TransactionEntry>,
    ) -> Result<Self> {
        let mut merged: BTreeMap<ItemId, u64> = BTreeMap::new();
        for e in entries {
            if e.quantity == 0 {
                return Err(Error::arg(
                    "quantity",
                    format!("item {} in transaction {id} has quantity 0", e.item),
                ));
            }
            *merged.entry(e.item).or_default() += e.quantity;
        }
        let entries: Vec<TransactionEntry> = merged
            .into_iter()
            .map(|(item, quantity)| TransactionEntry { item, quantity })
            .collect();
        let items = entries.iter().map(|e| e.item).collect();
        Ok(Transaction {
            id,
            time_unit,
            entries,
            items,
        })
    }

    /// Unit-quantity transaction over the given items.
    pub fn with_items(id: u64, time_unit: u32, items: impl IntoIterator<Item = ItemId>) -> Self {
        Transaction::new(
            id,
            time_unit,
            items
                .into_iter()
                .map(|item| TransactionEntry { item, quantity: 1 }),
        )
        .expect("unit quantities are valid")
    }

    /// Entries sorted by item id.
    pub fn entries(&self) -> &[TransactionEntry] {
        &self.entries
    }

    /// Item ids, sorted.
    pub fn items(&self) -> &[ItemId] {
        &self.items
    }

    pub fn contains_all(&self, itemset: &[ItemId]) -> bool {
        is_sorted_subset(itemset, &self.items)
    }

    pub fn quantity_of(&self, item: ItemId) -> Option<u64> {
        self.items
            .binary_search(&item)
            .ok()
            .map(|i| self.entries[i].quantity)
    }
}

/// An immutable, time-ordered transaction database.
///
/// Item ids form the dense universe `0..item_count`; an id inside that range
/// may legitimately never occur.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalDatabase {
    transactions: Vec<Transaction>,
    unit_count: u32,
    item_count: u32,
    /// `unit_starts[u]..unit_starts[u + 1]` indexes the transactions of unit `u`.
    unit_starts: Vec<usize>,
    labels: BTreeMap<ItemId, String>,
}

impl TemporalDatabase {
    /// Sorts transactions by `(time_unit, id)` and validates the invariants.
    ///
    /// `unit_count` defaults to one past the largest time unit and
    /// `item_count` to one past the largest item id.
    pub fn new(
        mut transactions: Vec<Transaction>,
        unit_count: Option<u32>,
        item_count: Option<u32>,
    ) -> Result<Self> {
        if transactions.is_empty() {
            return Err(Error::EmptyInput);
        }
        transactions.sort_by_key(|t| (t.time_unit, t.id));
        let mut ids: Vec<u64> = transactions.iter().map(|t| t.id).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::arg("transactions", "duplicate transaction id"));
        }
        let max_unit = transactions.iter().map(|t| t.time_unit).max().unwrap_or(0);
        let unit_count = unit_count.unwrap_or(max_unit + 1);
        if unit_count == 0 || max_unit >= unit_count {
            return Err(Error::arg(
                "unit_count",
                format!("time unit {max_unit} outside 0..{unit_count}"),
            ));
        }
        let max_item = transactions
            .iter()
            .filter_map(|t| t.items.last().copied())
            .max();
        let needed = max_item.map_or(0, |m| m + 1);
        let item_count = item_count.unwrap_or(needed);
        if item_count < needed {
            return Err(Error::UnknownItem(needed - 1));
        }

        let mut unit_starts = Vec::with_capacity(unit_count as usize + 1);
        let mut idx = 0;
        for u in 0..unit_count {
            while idx < transactions.len() && transactions[idx].time_unit < u {
                idx += 1;
            }
            unit_starts.push(idx);
        }
        unit_starts.push(transactions.len());

        Ok(TemporalDatabase {
            transactions,
            unit_count,
            item_count,
            unit_starts,
            labels: BTreeMap::new(),
        })
    }

    /// One transaction per time unit, unit quantities. Handy for fixtures.
    pub fn from_itemsets<I, T>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = ItemId>,
    {
        let txs = rows
            .into_iter()
            .enumerate()
            .map(|(i, items)| Transaction::with_items(i as u64, i as u32, items))
            .collect();
        TemporalDatabase::new(txs, None, None)
    }

    /// Attaches item labels. Labels must be distinct and refer to known items.
    pub fn with_labels(mut self, labels: BTreeMap<ItemId, String>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (id, label) in &labels {
            self.check_item(*id)?;
            if !seen.insert(label.as_str()) {
                return Err(Error::arg("labels", format!("duplicate label `{label}`")));
            }
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn unit_count(&self) -> u32 {
        self.unit_count
    }

    pub fn item_count(&self) -> u32 {
        self.item_count
    }

    pub fn label(&self, item: ItemId) -> Option<&str> {
        self.labels.get(&item).map(String::as_str)
    }

    pub fn item_by_label(&self, label: &str) -> Option<ItemId> {
        self.labels
            .iter()
            .find(|(_, l)| l.as_str() == label)
            .map(|(id, _)| *id)
    }

    pub fn check_item(&self, item: ItemId) -> Result<()> {
        if item < self.item_count {
            Ok(())
        } else {
            Err(Error::UnknownItem(item))
        }
    }

    pub fn check_itemset(&self, itemset: &Itemset) -> Result<()> {
        itemset.items().iter().try_for_each(|&i| self.check_item(i))
    }

    /// Index range of the transactions belonging to `unit`.
    pub fn unit_range(&self, unit: u32) -> Range<usize> {
        let u = unit as usize;
        self.unit_starts[u]..self.unit_starts[u + 1]
    }

    pub fn unit_transactions(&self, unit: u32) -> &[Transaction] {
        &self.transactions[self.unit_range(unit)]
    }

    /// Number of time units whose transactions all lie inside the first
    /// `scanned` transactions. Empty units count as complete once a later
    /// unit has started.
    pub fn complete_units(&self, scanned: usize) -> u32 {
        if scanned >= self.transactions.len() {
            self.unit_count
        } else {
            self.transactions[scanned].time_unit
        }
    }

    /// Occurrence count of every item in the universe.
    pub fn item_frequencies(&self) -> Vec<usize> {
        let mut freq = vec![0usize; self.item_count as usize];
        for t in &self.transactions {
            for &i in t.items() {
                freq[i as usize] += 1;
            }
        }
        freq
    }

    /// Renders the database as FIMI text, one transaction per line in
    /// storage order. With `quantified`, entries whose quantity is not 1
    /// are written as `id:qty`.
    pub fn to_fimi(&self, quantified: bool) -> String {
        let mut out = String::new();
        for t in &self.transactions {
            let mut first = true;
            for e in &t.entries {
                if !first {
                    out.push(' ');
                }
                first = false;
                if quantified && e.quantity != 1 {
                    out.push_str(&format!("{}:{}", e.item, e.quantity));
                } else {
                    out.push_str(&e.item.to_string());
                }
            }
            out.push('\n');
        }
        out
    }
}
