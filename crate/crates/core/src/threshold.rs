//! Ratio comparisons shared by every miner.
//!
//! All thresholds are inclusive (`count / total >= fraction`). The comparison
//! is done as `count >= fraction * total` with a small absolute slack so that
//! values such as `0.3 * 10` do not reject a count of exactly 3.

const SLACK: f64 = 1e-9;

pub(crate) fn meets(count: usize, total: usize, fraction: f64) -> bool {
    if total == 0 {
        return false;
    }
    count as f64 >= fraction * total as f64 - SLACK
}

/// Smallest count that satisfies `meets(count, total, fraction)`.
pub(crate) fn min_count(total: usize, fraction: f64) -> usize {
    let raw = (fraction * total as f64 - SLACK).ceil();
    if raw <= 0.0 {
        0
    } else {
        raw as usize
    }
}
