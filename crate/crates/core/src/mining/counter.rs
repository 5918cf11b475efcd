//! Horizontal support counting for a batch of same-size candidates.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use crate::db::Transaction;
use crate::itemset::{ItemId, Itemset};

/// Multiplicative hash for short `u32` slices; much cheaper than SipHash on
/// the hot lookup path.
#[derive(Default)]
pub(crate) struct FxHasher(u64);

impl Hasher for FxHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.add(b as u64);
        }
    }

    fn write_u32(&mut self, i: u32) {
        self.add(i as u64);
    }

    fn write_u64(&mut self, i: u64) {
        self.add(i);
    }

    fn write_usize(&mut self, i: usize) {
        self.add(i as u64);
    }
}

impl FxHasher {
    #[inline]
    fn add(&mut self, w: u64) {
        self.0 = (self.0.rotate_left(5) ^ w).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }
}

pub(crate) type FxBuild = BuildHasherDefault<FxHasher>;
pub(crate) type FxHashMap<K, V> = HashMap<K, V, FxBuild>;

/// Finds, per transaction, which candidates it contains.
///
/// Short transactions enumerate their k-subsets and look them up; long ones
/// test each candidate for containment, whichever is cheaper.
pub(crate) struct CandidateCounter<'a> {
    k: usize,
    candidates: Vec<&'a [ItemId]>,
    index: FxHashMap<&'a [ItemId], usize>,
    relevant: Vec<bool>,
    buf: Vec<ItemId>,
    combo: Vec<usize>,
    key: Vec<ItemId>,
}

impl<'a> CandidateCounter<'a> {
    /// All candidates must share one non-zero size.
    pub(crate) fn new<I>(candidates: I, item_count: u32) -> Self
    where
        I: IntoIterator<Item = &'a Itemset>,
    {
        let candidates: Vec<&'a [ItemId]> = candidates.into_iter().map(|c| c.items()).collect();
        let k = candidates.first().map_or(0, |c| c.len());
        debug_assert!(candidates.iter().all(|c| c.len() == k));
        let mut relevant = vec![false; item_count as usize];
        let mut index = FxHashMap::default();
        index.reserve(candidates.len());
        for (i, c) in candidates.iter().enumerate() {
            for &item in c.iter() {
                relevant[item as usize] = true;
            }
            index.insert(*c, i);
        }
        CandidateCounter {
            k,
            candidates,
            index,
            relevant,
            buf: Vec::new(),
            combo: Vec::new(),
            key: Vec::new(),
        }
    }

    /// Calls `hit(candidate_index)` for every candidate contained in `tx`.
    pub(crate) fn for_each_match(&mut self, tx: &Transaction, mut hit: impl FnMut(usize)) {
        if self.k == 0 || self.candidates.is_empty() {
            return;
        }
        self.buf.clear();
        self.buf.extend(
            tx.items()
                .iter()
                .copied()
                .filter(|&i| self.relevant.get(i as usize).copied().unwrap_or(false)),
        );
        let m = self.buf.len();
        let k = self.k;
        if m < k {
            return;
        }
        if k == 1 {
            for item in &self.buf {
                if let Some(&i) = self.index.get(std::slice::from_ref(item)) {
                    hit(i);
                }
            }
            return;
        }
        if binomial_capped(m, k, self.candidates.len()) < self.candidates.len() {
            // enumerate k-subsets of the projected transaction in lexicographic order
            self.combo.clear();
            self.combo.extend(0..k);
            loop {
                self.key.clear();
                self.key.extend(self.combo.iter().map(|&j| self.buf[j]));
                if let Some(&i) = self.index.get(self.key.as_slice()) {
                    hit(i);
                }
                let mut pos = k;
                loop {
                    if pos == 0 {
                        return;
                    }
                    pos -= 1;
                    if self.combo[pos] < pos + m - k {
                        break;
                    }
                }
                self.combo[pos] += 1;
                for j in pos + 1..k {
                    self.combo[j] = self.combo[j - 1] + 1;
                }
            }
        } else {
            for (i, c) in self.candidates.iter().enumerate() {
                if crate::itemset::is_sorted_subset(c, &self.buf) {
                    hit(i);
                }
            }
        }
    }
}

/// `C(n, k)`, saturating at `cap`.
fn binomial_capped(n: usize, k: usize, cap: usize) -> usize {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc >= cap as u128 {
            return cap;
        }
    }
    acc as usize
}
