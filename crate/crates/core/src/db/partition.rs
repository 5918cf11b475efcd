use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::TemporalDatabase;
use crate::error::{Error, Result};

/// Adjacent, non-empty transaction ranges covering the whole database.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partitioning {
    ranges: Vec<Range<usize>>,
}

impl Partitioning {
    pub fn ranges(&self) -> &[Range<usize>] {
        &self.ranges
    }

    pub fn count(&self) -> usize {
        self.ranges.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.ranges.iter().map(|r| r.len()).collect()
    }

    /// Transactions covered by partitions `1..=i`.
    pub fn scanned_through(&self, i: usize) -> usize {
        self.ranges[..i].iter().map(|r| r.len()).sum()
    }
}

/// Splits the database into `nb` adjacent ranges. When `|DB|` is not a
/// multiple of `nb`, the first `|DB| mod nb` ranges get one extra
/// transaction.
pub fn partition(db: &TemporalDatabase, nb: usize) -> Result<Partitioning> {
    split(db.len(), nb)
}

pub(crate) fn split(n: usize, nb: usize) -> Result<Partitioning> {
    if nb == 0 || nb > n {
        return Err(Error::arg(
            "partitions",
            format!("must be in 1..={n}, got {nb}"),
        ));
    }
    let base = n / nb;
    let extra = n % nb;
    let mut start = 0;
    let ranges = (0..nb)
        .map(|i| {
            let len = base + usize::from(i < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect();
    Ok(Partitioning { ranges })
}

/// Relative minimum support after scanning partitions `1..=i`:
/// `(Σ_{j<=i} |P_j| / |DB|) * minsupp`.
///
/// A cumulative count `c` satisfies `c / |DB| >= relative_min_support(i)`
/// exactly when `c / scanned >= minsupp`; the miners use the latter form
/// (see `threshold::meets`).
pub fn relative_min_support(
    partitioning: &Partitioning,
    i: usize,
    db_size: usize,
    minsupp: f64,
) -> Result<f64> {
    if i == 0 || i > partitioning.count() {
        return Err(Error::arg(
            "partition index",
            format!("must be in 1..={}, got {i}", partitioning.count()),
        ));
    }
    if db_size == 0 {
        return Err(Error::arg("db_size", "must be positive"));
    }
    Ok(partitioning.scanned_through(i) as f64 / db_size as f64 * minsupp)
}
