//! Rule generation from frequent cyclic itemsets.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constraints::{rule_form_allows, AggregateStats, ConstraintSet};
use crate::cycle::{cycles_at_length, detect_cycles_exhaustive, Cycle};
use crate::db::TemporalDatabase;
use crate::error::{Error, Result};
use crate::itemset::Itemset;
use crate::mining::{premises_of, support, ItemsetRecord};
use crate::threshold::meets;

/// `premise → conclusion` with whole-database support and confidence and
/// the cycles on which it holds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicRule {
    pub premise: Itemset,
    pub conclusion: Itemset,
    pub support: f64,
    pub confidence: f64,
    pub cycles: Vec<Cycle>,
}

impl CyclicRule {
    /// Canonical sort and identity key.
    pub fn key(&self) -> (&Itemset, &Itemset) {
        (&self.premise, &self.conclusion)
    }
}

impl fmt::Display for CyclicRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} => {} (support {:.4}, confidence {:.4}, cycles ",
            self.premise, self.conclusion, self.support, self.confidence
        )?;
        for (i, c) in self.cycles.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// `supp(premise ∪ conclusion) / supp(premise)`, with `supp(∅) = 1`.
pub fn confidence(premise: &Itemset, conclusion: &Itemset, db: &TemporalDatabase) -> Result<f64> {
    if conclusion.is_empty() {
        return Err(Error::arg("conclusion", "must be non-empty"));
    }
    let full = premise.union(conclusion);
    let (both, _) = support(&full, db, db.len())?;
    let base = if premise.is_empty() {
        db.len()
    } else {
        support(premise, db, db.len())?.0
    };
    if base == 0 {
        return Err(Error::UndefinedConfidence(premise.to_string()));
    }
    Ok(both as f64 / base as f64)
}

/// How rule cycles are validated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleLengths {
    /// A single cycle length (`pcar`/`cbcar`).
    Fixed(u32),
    /// Every length in `min..=max` (`sequential`/`interleaved`).
    Range(u32, u32),
}

/// Cycles of a rule's full itemset, from its recorded occurrences.
pub fn rule_cycles(record: &ItemsetRecord, lengths: CycleLengths) -> Result<BTreeSet<Cycle>> {
    let occ = &record.occurrences;
    match lengths {
        CycleLengths::Fixed(l) => Ok(cycles_at_length(occ, l, occ.len()).into_iter().collect()),
        CycleLengths::Range(lo, hi) => detect_cycles_exhaustive(occ, lo, hi),
    }
}

/// Forms `s → (F − s)` for every frequent cyclic itemset `F` and premise
/// `s`, keeping rules that satisfy the rule form, `minconf` and every
/// aggregate constraint. Premises are the non-empty proper subsets of `F`;
/// with `allow_empty_premise`, single items also yield `∅ → {i}` with
/// confidence `supp({i})`.
///
/// Each rule inherits `F`'s support and cycles. Output is sorted by premise,
/// then conclusion.
pub fn generate_rules(
    frequent: &[ItemsetRecord],
    db: &TemporalDatabase,
    minconf: f64,
    cs: &ConstraintSet,
    allow_empty_premise: bool,
) -> Result<Vec<CyclicRule>> {
    let counts: HashMap<&Itemset, usize> = frequent.iter().map(|r| (&r.itemset, r.count)).collect();
    let n = db.len();
    let mut out = Vec::new();
    for record in frequent {
        if record.cycles.is_empty() {
            continue;
        }
        let mut aggregate_ok: Option<bool> = None;
        for premise in premises_of(&record.itemset, allow_empty_premise) {
            let conclusion = record.itemset.difference(&premise);
            if !rule_form_allows(&premise, &conclusion, cs) {
                continue;
            }
            let base = if premise.is_empty() {
                n
            } else {
                match counts.get(&premise) {
                    Some(&c) => c,
                    None => support(&premise, db, n)?.0,
                }
            };
            if base == 0 {
                return Err(Error::UndefinedConfidence(premise.to_string()));
            }
            if !meets(record.count, base, minconf) {
                continue;
            }
            let ok = *aggregate_ok.get_or_insert_with(|| aggregates_hold(record, db, cs));
            if !ok {
                continue;
            }
            out.push(CyclicRule {
                support: record.count as f64 / n as f64,
                confidence: record.count as f64 / base as f64,
                premise,
                conclusion,
                cycles: record.cycles.clone(),
            });
        }
    }
    out.sort_by(|a, b| a.key().cmp(&b.key()));
    Ok(out)
}

fn aggregates_hold(record: &ItemsetRecord, db: &TemporalDatabase, cs: &ConstraintSet) -> bool {
    if record.aggregate_pass.len() == cs.aggregates.len() {
        return record.aggregate_pass.iter().all(|&ok| ok);
    }
    cs.aggregates.iter().all(|ac| {
        AggregateStats::accumulate(&record.itemset, ac.item, db.transactions()).satisfies(ac)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::OccurrenceSequence;
    use crate::mining::fixtures::*;

    fn record(db: &TemporalDatabase, items: &[u32], l: u32) -> ItemsetRecord {
        let itemset = Itemset::new(items.iter().copied());
        let occ = OccurrenceSequence::from_units(
            db.unit_count(),
            db.transactions()
                .iter()
                .filter(|t| t.contains_all(itemset.items()))
                .map(|t| t.time_unit),
        )
        .unwrap();
        let (count, _) = support(&itemset, db, db.len()).unwrap();
        let mut r = ItemsetRecord {
            itemset,
            count,
            occurrences: occ,
            cycles: Vec::new(),
            aggregate_pass: Vec::new(),
        };
        r.cycles = rule_cycles(&r, CycleLengths::Fixed(l)).unwrap().into_iter().collect();
        r
    }

    fn frequent(db: &TemporalDatabase) -> Vec<ItemsetRecord> {
        vec![
            record(db, &[TICKET], 2),
            record(db, &[SHORTAGE], 2),
            record(db, &[TICKET, SHORTAGE], 2),
        ]
    }

    #[test]
    fn confidences_on_fixture() {
        let db = failures();
        let t = Itemset::from([TICKET]);
        let s = Itemset::from([SHORTAGE]);
        assert!((confidence(&s, &t, &db).unwrap() - 0.5714).abs() < 1e-4);
        assert_eq!(confidence(&t, &s, &db).unwrap(), 1.0);
        assert_eq!(confidence(&Itemset::empty(), &s, &db).unwrap(), 0.875);
    }

    #[test]
    fn zero_support_premise() {
        let db = TemporalDatabase::new(failures().transactions().to_vec(), None, Some(5)).unwrap();
        let r = confidence(&Itemset::from([4]), &Itemset::from([SHORTAGE]), &db);
        assert!(matches!(r, Err(Error::UndefinedConfidence(_))));
    }

    #[test]
    fn constrained_rules() {
        let db = failures();
        let cs = ConstraintSet::builder()
            .conclusion([SHORTAGE])
            .aggregate("SUM(0)>=1".parse().unwrap())
            .build();
        let rules = generate_rules(&frequent(&db), &db, 0.5, &cs, false).unwrap();
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].premise, Itemset::from([TICKET]));
        assert_eq!(rules[0].cycles, vec![Cycle::new(2, 1).unwrap()]);
    }

    #[test]
    fn empty_premise_rules() {
        let db = failures();
        let rules = generate_rules(&frequent(&db), &db, 0.5, &ConstraintSet::default(), true).unwrap();
        let supports: Vec<f64> = rules.iter().map(|r| r.support).collect();
        assert_eq!(supports, vec![0.5, 0.875, 0.5, 0.5]);
        assert!(rules[0].premise.is_empty() && rules[1].premise.is_empty());
    }

    #[test]
    fn nothing_frequent() {
        let db = failures();
        assert!(generate_rules(&[], &db, 0.5, &ConstraintSet::default(), true).unwrap().is_empty());
    }

    #[test]
    fn cycles_of_records() {
        let db = failures();
        let pair = record(&db, &[TICKET, SHORTAGE], 2);
        assert_eq!(
            rule_cycles(&pair, CycleLengths::Fixed(2)).unwrap(),
            [Cycle::new(2, 1).unwrap()].into_iter().collect()
        );
        let mut saturated = pair.clone();
        saturated.occurrences = OccurrenceSequence::ones(8);
        assert_eq!(rule_cycles(&saturated, CycleLengths::Fixed(2)).unwrap().len(), 2);
        let news = record(&db, &[NEWSPRINT], 2);
        assert!(rule_cycles(&news, CycleLengths::Fixed(2)).unwrap().is_empty());
        assert!(rule_cycles(&pair, CycleLengths::Range(1, 4)).unwrap().contains(&Cycle::new(4, 3).unwrap()));
    }
}
