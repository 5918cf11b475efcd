use std::fmt;

use serde::{Deserialize, Serialize};

pub type ItemId = u32;

/// A sorted, duplicate-free set of item ids.
///
/// Ordering is lexicographic over the sorted ids, which gives the canonical
/// order used for reported rules.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Itemset(Vec<ItemId>);

impl Itemset {
    pub fn empty() -> Self {
        Itemset(Vec::new())
    }

    pub fn new(items: impl IntoIterator<Item = ItemId>) -> Self {
        let mut v: Vec<ItemId> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Itemset(v)
    }

    /// Wraps an already sorted, duplicate-free vector.
    pub(crate) fn from_sorted(v: Vec<ItemId>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]));
        Itemset(v)
    }

    pub fn items(&self) -> &[ItemId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    pub fn is_subset_of(&self, other: &Itemset) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    pub fn union(&self, other: &Itemset) -> Itemset {
        Itemset::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn difference(&self, other: &Itemset) -> Itemset {
        Itemset(self.0.iter().copied().filter(|i| !other.contains(*i)).collect())
    }

    /// The `len - 1` subsets obtained by dropping one item each.
    pub fn immediate_subsets(&self) -> impl Iterator<Item = Itemset> + '_ {
        (0..self.0.len()).map(move |skip| {
            Itemset(
                self.0
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &x)| x)
                    .collect(),
            )
        })
    }

    /// All proper subsets, including the empty set, in ascending bitmask
    /// order. Intended for the small itemsets that rule generation visits.
    pub fn proper_subsets(&self) -> Vec<Itemset> {
        let n = self.0.len();
        assert!(n < 32, "itemset too large to enumerate subsets");
        let full = (1u32 << n) - 1;
        (0..full)
            .map(|mask| {
                Itemset(
                    (0..n)
                        .filter(|b| mask & (1 << b) != 0)
                        .map(|b| self.0[b])
                        .collect(),
                )
            })
            .collect()
    }
}

impl From<Vec<ItemId>> for Itemset {
    fn from(v: Vec<ItemId>) -> Self {
        Itemset::new(v)
    }
}

impl<const N: usize> From<[ItemId; N]> for Itemset {
    fn from(v: [ItemId; N]) -> Self {
        Itemset::new(v)
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, item) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{item}")?;
        }
        f.write_str("}")
    }
}

/// Merge-based containment check over two sorted slices.
pub(crate) fn is_sorted_subset(needle: &[ItemId], haystack: &[ItemId]) -> bool {
    if needle.len() > haystack.len() {
        return false;
    }
    let mut h = haystack.iter();
    'outer: for x in needle {
        for y in h.by_ref() {
            match y.cmp(x) {
                std::cmp::Ordering::Less => continue,
                std::cmp::Ordering::Equal => continue 'outer,
                std::cmp::Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_sorts_and_dedups() {
        assert_eq!(Itemset::new([3, 1, 3, 2]).items(), &[1, 2, 3]);
    }

    #[test]
    fn subset_checks() {
        let a = Itemset::from([1, 3]);
        let b = Itemset::from([0, 1, 2, 3]);
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert!(Itemset::empty().is_subset_of(&a));
        assert!(!Itemset::from([4]).is_subset_of(&b));
    }

    #[test]
    fn proper_subsets_of_pair() {
        let s = Itemset::from([0, 1]).proper_subsets();
        assert_eq!(s, vec![Itemset::empty(), Itemset::from([0]), Itemset::from([1])]);
    }

    #[test]
    fn immediate_subsets_drop_one() {
        let subs: Vec<_> = Itemset::from([1, 2, 3]).immediate_subsets().collect();
        assert_eq!(
            subs,
            vec![Itemset::from([2, 3]), Itemset::from([1, 3]), Itemset::from([1, 2])]
        );
    }
}
