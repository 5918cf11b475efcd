//! Item-membership and aggregate constraints.
//!
//! Text syntax, as accepted by the CLI:
//!
//! * item filters: `"0,3"` (an explicit id list) or `"*"` (wildcard);
//! * aggregates: `FCT(item)CMP number`, e.g. `SUM(0)>=1`, `avg(4) < 2.5`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::db::{TemporalDatabase, Transaction};
use crate::error::{Error, Result};
use crate::itemset::{ItemId, Itemset};

/// Allowed items for one side of a rule.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "Option<BTreeSet<ItemId>>", into = "Option<BTreeSet<ItemId>>")]
pub enum ItemFilter {
    #[default]
    Any,
    Only(BTreeSet<ItemId>),
}

impl ItemFilter {
    pub fn allows(&self, item: ItemId) -> bool {
        match self {
            ItemFilter::Any => true,
            ItemFilter::Only(s) => s.contains(&item),
        }
    }

    pub fn allows_all(&self, itemset: &Itemset) -> bool {
        itemset.items().iter().all(|&i| self.allows(i))
    }

    pub fn is_any(&self) -> bool {
        matches!(self, ItemFilter::Any)
    }
}

impl From<Option<BTreeSet<ItemId>>> for ItemFilter {
    fn from(v: Option<BTreeSet<ItemId>>) -> Self {
        v.map_or(ItemFilter::Any, ItemFilter::Only)
    }
}

impl From<ItemFilter> for Option<BTreeSet<ItemId>> {
    fn from(f: ItemFilter) -> Self {
        match f {
            ItemFilter::Any => None,
            ItemFilter::Only(s) => Some(s),
        }
    }
}

impl FromStr for ItemFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "*" {
            return Ok(ItemFilter::Any);
        }
        let items = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<ItemId>()
                    .map_err(|_| Error::arg("item list", format!("bad item id `{t}`")))
            })
            .collect::<Result<BTreeSet<_>>>()?;
        if items.is_empty() {
            return Err(Error::arg("item list", "must name at least one item or be `*`"));
        }
        Ok(ItemFilter::Only(items))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AggregateFn {
    Sum,
    Avg,
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comparator {
    Ge,
    Gt,
    Le,
    Lt,
    Eq,
}

impl Comparator {
    pub fn apply(self, value: f64, threshold: f64) -> bool {
        const EPS: f64 = 1e-9;
        match self {
            Comparator::Ge => value >= threshold - EPS,
            Comparator::Gt => value > threshold + EPS,
            Comparator::Le => value <= threshold + EPS,
            Comparator::Lt => value < threshold - EPS,
            Comparator::Eq => (value - threshold).abs() <= EPS,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Comparator::Ge => ">=",
            Comparator::Gt => ">",
            Comparator::Le => "<=",
            Comparator::Lt => "<",
            Comparator::Eq => "=",
        }
    }
}

/// `FCT(item) CMP threshold`, evaluated over the supporting transactions of
/// a rule's full itemset.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AggregateConstraint {
    pub function: AggregateFn,
    pub item: ItemId,
    pub comparator: Comparator,
    pub threshold: f64,
}

impl AggregateConstraint {
    pub fn new(function: AggregateFn, item: ItemId, comparator: Comparator, threshold: f64) -> Result<Self> {
        if !threshold.is_finite() {
            return Err(Error::arg("aggregate", "threshold must be finite"));
        }
        Ok(AggregateConstraint {
            function,
            item,
            comparator,
            threshold,
        })
    }

    /// Whether failing on an itemset implies failing on all its supersets.
    ///
    /// Quantities are positive and a superset is supported by a subset of
    /// the transactions, so `SUM` and `MAX` can only shrink and `MIN` can
    /// only grow (or vanish).
    pub fn is_anti_monotone(&self) -> bool {
        matches!(
            (self.function, self.comparator),
            (AggregateFn::Sum | AggregateFn::Max, Comparator::Ge | Comparator::Gt)
                | (AggregateFn::Min, Comparator::Le | Comparator::Lt)
        )
    }

    /// Whether, once satisfied during a scan, the constraint stays satisfied
    /// as more supporting transactions are added.
    pub(crate) fn settles_when_met(&self) -> bool {
        matches!(
            (self.function, self.comparator),
            (AggregateFn::Sum | AggregateFn::Max, Comparator::Ge | Comparator::Gt)
        )
    }
}

impl fmt::Display for AggregateConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.function {
            AggregateFn::Sum => "SUM",
            AggregateFn::Avg => "AVG",
            AggregateFn::Min => "MIN",
            AggregateFn::Max => "MAX",
        };
        write!(f, "{name}({}){}{}", self.item, self.comparator.symbol(), self.threshold)
    }
}

impl FromStr for AggregateConstraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::arg("agg", format!("`{s}`: {why}; expected e.g. SUM(0)>=1"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let open = compact.find('(').ok_or_else(|| bad("missing `(`"))?;
        let close = compact.find(')').ok_or_else(|| bad("missing `)`"))?;
        if close < open {
            return Err(bad("misplaced `)`"));
        }
        let function = match compact[..open].to_ascii_uppercase().as_str() {
            "SUM" => AggregateFn::Sum,
            "AVG" => AggregateFn::Avg,
            "MIN" => AggregateFn::Min,
            "MAX" => AggregateFn::Max,
            _ => return Err(bad("unknown function")),
        };
        let item = compact[open + 1..close]
            .parse::<ItemId>()
            .map_err(|_| bad("bad item id"))?;
        let rest = &compact[close + 1..];
        let (comparator, num) = [
            (">=", Comparator::Ge),
            ("<=", Comparator::Le),
            (">", Comparator::Gt),
            ("<", Comparator::Lt),
            ("==", Comparator::Eq),
            ("=", Comparator::Eq),
        ]
        .into_iter()
        .find_map(|(sym, c)| rest.strip_prefix(sym).map(|n| (c, n)))
        .ok_or_else(|| bad("missing comparator"))?;
        let threshold = num.parse::<f64>().map_err(|_| bad("bad threshold"))?;
        AggregateConstraint::new(function, item, comparator, threshold).map_err(|_| bad("threshold must be finite"))
    }
}

impl TryFrom<String> for AggregateConstraint {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AggregateConstraint> for String {
    fn from(a: AggregateConstraint) -> Self {
        a.to_string()
    }
}

/// Running aggregate of one target item over a growing set of supporting
/// transactions.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AggregateStats {
    pub support: usize,
    pub sum: u64,
    pub min: Option<u64>,
    pub max: Option<u64>,
}

impl AggregateStats {
    /// Records one supporting transaction; `quantity` is the target item's
    /// quantity in it, if present.
    pub fn add(&mut self, quantity: Option<u64>) {
        self.support += 1;
        if let Some(q) = quantity {
            self.sum += q;
            self.min = Some(self.min.map_or(q, |m| m.min(q)));
            self.max = Some(self.max.map_or(q, |m| m.max(q)));
        }
    }

    /// Transactions lacking the item add 0 to `SUM`/`AVG` and are skipped by
    /// `MIN`/`MAX`; with no value to compare, `MIN`/`MAX` yield `None`.
    pub fn value(&self, function: AggregateFn) -> Option<f64> {
        match function {
            AggregateFn::Sum => Some(self.sum as f64),
            AggregateFn::Avg if self.support == 0 => Some(0.0),
            AggregateFn::Avg => Some(self.sum as f64 / self.support as f64),
            AggregateFn::Min => self.min.map(|v| v as f64),
            AggregateFn::Max => self.max.map(|v| v as f64),
        }
    }

    pub fn satisfies(&self, ac: &AggregateConstraint) -> bool {
        self.value(ac.function)
            .is_some_and(|v| ac.comparator.apply(v, ac.threshold))
    }

    pub fn accumulate<'a>(
        itemset: &Itemset,
        item: ItemId,
        transactions: impl IntoIterator<Item = &'a Transaction>,
    ) -> Self {
        let mut stats = AggregateStats::default();
        for t in transactions {
            if t.contains_all(itemset.items()) {
                stats.add(t.quantity_of(item));
            }
        }
        stats
    }
}

/// Premise/conclusion item filters plus a conjunction of aggregates.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSet {
    #[serde(default)]
    pub prm: ItemFilter,
    #[serde(default)]
    pub cl: ItemFilter,
    #[serde(default)]
    pub aggregates: Vec<AggregateConstraint>,
}

impl ConstraintSet {
    pub fn unconstrained() -> Self {
        ConstraintSet::default()
    }

    pub fn builder() -> ConstraintSetBuilder {
        ConstraintSetBuilder::default()
    }

    pub fn is_empty(&self) -> bool {
        self.prm.is_any() && self.cl.is_any() && self.aggregates.is_empty()
    }

    /// Rejects item ids outside the database's universe.
    pub fn validate(&self, db: &TemporalDatabase) -> Result<()> {
        for filter in [&self.prm, &self.cl] {
            if let ItemFilter::Only(items) = filter {
                if items.is_empty() {
                    return Err(Error::arg("prm/cl", "explicit item set must be non-empty"));
                }
                items.iter().try_for_each(|&i| db.check_item(i))?;
            }
        }
        self.aggregates
            .iter()
            .try_for_each(|a| db.check_item(a.item))
    }
}

#[derive(Default)]
pub struct ConstraintSetBuilder {
    cs: ConstraintSet,
}

impl ConstraintSetBuilder {
    pub fn premise(mut self, items: impl IntoIterator<Item = ItemId>) -> Self {
        self.cs.prm = ItemFilter::Only(items.into_iter().collect());
        self
    }

    pub fn conclusion(mut self, items: impl IntoIterator<Item = ItemId>) -> Self {
        self.cs.cl = ItemFilter::Only(items.into_iter().collect());
        self
    }

    pub fn aggregate(mut self, ac: AggregateConstraint) -> Self {
        self.cs.aggregates.push(ac);
        self
    }

    pub fn build(self) -> ConstraintSet {
        self.cs
    }
}

/// Every item of `itemset` may appear somewhere in a rule: it belongs to
/// `prm ∪ cl`. A wildcard on either side admits everything.
pub fn universe_allows(itemset: &Itemset, cs: &ConstraintSet) -> bool {
    match (&cs.prm, &cs.cl) {
        (ItemFilter::Any, _) | (_, ItemFilter::Any) => true,
        (ItemFilter::Only(p), ItemFilter::Only(c)) => itemset
            .items()
            .iter()
            .all(|i| p.contains(i) || c.contains(i)),
    }
}

/// `premise ⊆ prm` and `conclusion ⊆ cl`.
pub fn rule_form_allows(premise: &Itemset, conclusion: &Itemset, cs: &ConstraintSet) -> bool {
    cs.prm.allows_all(premise) && cs.cl.allows_all(conclusion)
}

/// Evaluates `ac` over the transactions supporting `premise ∪ conclusion`.
pub fn aggregate_satisfied(
    premise: &Itemset,
    conclusion: &Itemset,
    db: &TemporalDatabase,
    ac: &AggregateConstraint,
) -> Result<bool> {
    db.check_item(ac.item)?;
    let full = premise.union(conclusion);
    db.check_itemset(&full)?;
    Ok(AggregateStats::accumulate(&full, ac.item, db.transactions()).satisfies(ac))
}
