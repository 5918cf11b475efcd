//! Cyclic association rule mining over temporal transaction databases.
//!
//! A database is an ordered list of transactions, each assigned to a time
//! unit. An itemset (or rule) is *cyclic* on `(l, o)` when it holds in every
//! time unit `u` with `u ≡ o (mod l)`. Four miners are provided:
//!
//! * [`mining::sequential`]: per-unit Apriori followed by cycle detection over
//!   each rule's binary occurrence sequence.
//! * [`mining::interleaved`]: the same result set, computed with cycle
//!   pruning, cycle skipping and cycle elimination.
//! * [`mining::pcar`]: partition-incremental mining at a fixed cycle length.
//! * [`mining::cbcar`]: `pcar` with premise/conclusion item constraints and
//!   aggregate constraints (`SUM`, `AVG`, `MIN`, `MAX`) pushed into the search.
//!
//! ```
//! use cyclic_rules::{db::{parse_transactions, InputFormat}, mining, MiningParams, ConstraintSet};
//!
//! let text = "1\n0 1\n1 2 3\n0 1 2\n2\n0 1\n1 3\n0 1\n";
//! let db = parse_transactions(text.as_bytes(), InputFormat::Fimi, 1).unwrap();
//! let params = MiningParams { minsupp: 0.5, minconf: 0.5, nb_partitions: 2, cycle_length: 2, ..Default::default() };
//! let cs: ConstraintSet = ConstraintSet::builder().conclusion([1]).aggregate("SUM(0)>=1".parse().unwrap()).build();
//! let out = mining::cbcar(&db, &params, &cs).unwrap();
//! assert_eq!(out.rules.len(), 1);
//! assert_eq!(out.rules[0].to_string(), "{0} => {1} (support 0.5000, confidence 1.0000, cycles (l=2, o=1))");
//! ```

pub mod bench;
pub mod constraints;
pub mod cycle;
pub mod db;
mod error;
pub mod itemset;
pub mod mining;
pub mod rulegen;
mod threshold;

pub use constraints::{AggregateConstraint, AggregateFn, Comparator, ConstraintSet, ItemFilter};
pub use cycle::{Cycle, CycleCandidateSet, OccurrenceSequence};
pub use db::{TemporalDatabase, Transaction, TransactionEntry};
pub use error::{Error, Result};
pub use itemset::{ItemId, Itemset};
pub use mining::{MiningOutcome, MiningParams, ScanCounters};
pub use rulegen::CyclicRule;
