//! Binary occurrence sequences and cycle detection.
//!
//! A cycle `(l, o)` covers the units `u` with `u % l == o`. A sequence is
//! cyclic on `(l, o)` when every covered unit inside the observed window has
//! its bit set and the window contains at least two covered units.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cycle {
    #[serde(rename = "l")]
    pub length: u32,
    #[serde(rename = "o")]
    pub offset: u32,
}

impl Cycle {
    pub fn new(length: u32, offset: u32) -> Result<Self> {
        if length == 0 || offset >= length {
            return Err(Error::arg(
                "cycle",
                format!("need 0 <= o < l, got (l={length}, o={offset})"),
            ));
        }
        Ok(Cycle { length, offset })
    }

    pub fn covers(&self, unit: u32) -> bool {
        unit % self.length == self.offset
    }

    /// Number of covered units in `0..window`.
    pub fn hits_within(&self, window: u32) -> u32 {
        if window <= self.offset {
            0
        } else {
            (window - self.offset - 1) / self.length + 1
        }
    }

    /// Whether `self` is implied by `coarser` (a divisor cycle whose residue
    /// class contains this one).
    pub fn is_multiple_of(&self, coarser: &Cycle) -> bool {
        coarser.length < self.length
            && self.length % coarser.length == 0
            && self.offset % coarser.length == coarser.offset
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(l={}, o={})", self.length, self.offset)
    }
}

/// One bit per time unit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OccurrenceSequence {
    words: Vec<u64>,
    len: u32,
}

impl OccurrenceSequence {
    pub fn zeros(len: u32) -> Self {
        OccurrenceSequence {
            words: vec![0; (len as usize).div_ceil(64)],
            len,
        }
    }

    pub fn ones(len: u32) -> Self {
        let mut s = Self::zeros(len);
        for u in 0..len {
            s.set(u);
        }
        s
    }

    pub fn from_units(len: u32, units: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut s = Self::zeros(len);
        for u in units {
            if u >= len {
                return Err(Error::arg("unit", format!("{u} outside 0..{len}")));
            }
            s.set(u);
        }
        Ok(s)
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len() as u32);
        for (u, _) in bits.iter().enumerate().filter(|(_, b)| **b) {
            s.set(u as u32);
        }
        s
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, unit: u32) -> bool {
        unit < self.len && self.words[(unit / 64) as usize] & (1 << (unit % 64)) != 0
    }

    pub fn set(&mut self, unit: u32) {
        assert!(unit < self.len, "unit {unit} outside 0..{}", self.len);
        self.words[(unit / 64) as usize] |= 1 << (unit % 64);
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn and(&self, other: &OccurrenceSequence) -> OccurrenceSequence {
        assert_eq!(self.len, other.len);
        OccurrenceSequence {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    pub fn units(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.len).filter(move |&u| self.get(u))
    }

    /// Whether every unit of `cycle` inside `0..window` is set.
    fn holds_on(&self, cycle: &Cycle, window: u32) -> bool {
        (cycle.offset..window.min(self.len))
            .step_by(cycle.length as usize)
            .all(|u| self.get(u))
    }
}

impl fmt::Debug for OccurrenceSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len)
            .map(|u| if self.get(u) { '1' } else { '0' })
            .collect();
        write!(f, "OccurrenceSequence({s})")
    }
}

#[derive(Serialize, Deserialize)]
struct SequenceRepr {
    unit_count: u32,
    units: Vec<u32>,
}

impl Serialize for OccurrenceSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SequenceRepr {
            unit_count: self.len,
            units: self.units().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OccurrenceSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SequenceRepr::deserialize(d)?;
        OccurrenceSequence::from_units(r.unit_count, r.units).map_err(serde::de::Error::custom)
    }
}

/// The live cycles of an itemset or rule while the INTERLEAVED sweep runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCandidateSet {
    live: BTreeSet<Cycle>,
    l_max: u32,
}

impl CycleCandidateSet {
    /// Every `(l, o)` with `l_min <= l <= l_max`.
    pub fn all(l_min: u32, l_max: u32) -> Result<Self> {
        if l_min == 0 || l_min > l_max {
            return Err(Error::arg(
                "lmin/lmax",
                format!("need 1 <= lmin <= lmax, got {l_min}..={l_max}"),
            ));
        }
        let live = (l_min..=l_max)
            .flat_map(|l| (0..l).map(move |o| Cycle { length: l, offset: o }))
            .collect();
        Ok(CycleCandidateSet { live, l_max })
    }

    pub fn from_cycles(cycles: impl IntoIterator<Item = Cycle>, l_max: u32) -> Result<Self> {
        let live: BTreeSet<Cycle> = cycles.into_iter().collect();
        if let Some(c) = live.iter().find(|c| c.length > l_max) {
            return Err(Error::arg("cycles", format!("{c} longer than l_max={l_max}")));
        }
        Ok(CycleCandidateSet { live, l_max })
    }

    pub fn live(&self) -> &BTreeSet<Cycle> {
        &self.live
    }

    pub fn into_live(self) -> BTreeSet<Cycle> {
        self.live
    }

    pub fn l_max(&self) -> u32 {
        self.l_max
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    pub fn len(&self) -> usize {
        self.live.len()
    }

    /// Whether some live cycle needs `unit` to be evaluated.
    pub fn covers(&self, unit: u32) -> bool {
        self.live.iter().any(|c| c.covers(unit))
    }

    /// In-place cycle elimination: a 0 bit at `unit` retires every live
    /// cycle that covers it.
    pub fn eliminate_in_place(&mut self, unit: u32, bit: bool) {
        if !bit {
            self.live.retain(|c| !c.covers(unit));
        }
    }
}

/// Reference oracle: every `(l, o)` in the length range whose residue class
/// is all ones and has at least two members in the sequence.
pub fn detect_cycles_exhaustive(
    seq: &OccurrenceSequence,
    l_min: u32,
    l_max: u32,
) -> Result<BTreeSet<Cycle>> {
    check_length_range(l_min, l_max, seq.len())?;
    let mut out = BTreeSet::new();
    for l in l_min..=l_max {
        for o in 0..l {
            let c = Cycle { length: l, offset: o };
            if c.hits_within(seq.len()) >= 2 && seq.holds_on(&c, seq.len()) {
                out.insert(c);
            }
        }
    }
    Ok(out)
}

pub(crate) fn check_length_range(l_min: u32, l_max: u32, unit_count: u32) -> Result<()> {
    if l_min == 0 || l_min > l_max {
        return Err(Error::arg(
            "lmin/lmax",
            format!("need 1 <= lmin <= lmax, got {l_min}..={l_max}"),
        ));
    }
    if l_max > unit_count / 2 {
        return Err(Error::arg(
            "lmax",
            format!("{l_max} exceeds unit_count / 2 = {}", unit_count / 2),
        ));
    }
    Ok(())
}

/// Drops every cycle implied by a shorter cycle in the same set.
pub fn minimal_cycles(cycles: &BTreeSet<Cycle>) -> BTreeSet<Cycle> {
    cycles
        .iter()
        .filter(|c| !cycles.iter().any(|d| c.is_multiple_of(d)))
        .copied()
        .collect()
}

/// Returns `candidates` with the cycles covering `unit` removed when `bit`
/// is 0; unchanged otherwise.
pub fn eliminate(mut candidates: CycleCandidateSet, unit: u32, bit: bool) -> CycleCandidateSet {
    candidates.eliminate_in_place(unit, bit);
    candidates
}

/// Cycle pruning: the cycles of an itemset are a subset of the cycles of
/// each of its immediate subsets, so the candidates are their intersection.
pub fn prune_candidates(subset_cycles: &[BTreeSet<Cycle>], l_max: u32) -> Result<CycleCandidateSet> {
    let (first, rest) = subset_cycles
        .split_first()
        .ok_or_else(|| Error::arg("subset_cycles", "need at least one subset"))?;
    let live = first
        .iter()
        .filter(|c| c.length <= l_max && rest.iter().all(|s| s.contains(c)))
        .copied()
        .collect();
    Ok(CycleCandidateSet { live, l_max })
}

/// Cycle skipping: the units that at least one live candidate still needs,
/// in increasing order.
pub fn units_to_scan(candidates: &CycleCandidateSet, unit_count: u32) -> Vec<u32> {
    (0..unit_count).filter(|&u| candidates.covers(u)).collect()
}

/// Cycles of length `length` that hold on the first `scanned_units` units.
pub fn cycles_at_length(seq: &OccurrenceSequence, length: u32, scanned_units: u32) -> Vec<Cycle> {
    if length == 0 {
        return Vec::new();
    }
    (0..length)
        .map(|o| Cycle { length, offset: o })
        .filter(|c| c.hits_within(scanned_units) >= 2 && seq.holds_on(c, scanned_units))
        .collect()
}

/// Whether the occurrences are cyclic at length `length` over the first
/// `scanned_units` units: some offset's residue class has at least two
/// members in the window, all of them set.
pub fn is_cyclic(seq: &OccurrenceSequence, length: u32, scanned_units: u32) -> bool {
    length > 0
        && (0..length).any(|o| {
            let c = Cycle { length, offset: o };
            c.hits_within(scanned_units) >= 2 && seq.holds_on(&c, scanned_units)
        })
}
