use std::collections::BTreeSet;

use cyclic_rules::cycle::{detect_cycles_exhaustive, units_to_scan};
use cyclic_rules::db::{parse_transactions, InputFormat};
use cyclic_rules::mining::{cbcar, interleaved, pcar, sequential};
use cyclic_rules::{
    ConstraintSet, CycleCandidateSet, ItemFilter, MiningParams, OccurrenceSequence, TemporalDatabase, Transaction,
    TransactionEntry,
};
use proptest::prelude::*;

/// Up to 10 units of up to 3 transactions over items 0..5.
fn database() -> impl Strategy<Value = TemporalDatabase> {
    let tx = prop::collection::btree_map(0u32..5, 1u64..4, 0..5);
    prop::collection::vec(prop::collection::vec(tx, 0..4), 4..=10).prop_filter_map("no transactions", |units| {
        let mut txs = Vec::new();
        for (u, unit) in units.iter().enumerate() {
            for t in unit {
                let entries = t.iter().map(|(&item, &quantity)| TransactionEntry { item, quantity });
                txs.push(Transaction::new(txs.len() as u64, u as u32, entries).unwrap());
            }
        }
        TemporalDatabase::new(txs, Some(units.len() as u32), Some(5)).ok()
    })
}

fn params(db: &TemporalDatabase, minsupp: f64) -> MiningParams {
    let half = db.unit_count() / 2;
    MiningParams {
        minsupp,
        minconf: 0.5,
        nb_partitions: 2.min(db.len()),
        cycle_length: 2.min(half),
        l_min: 1,
        l_max: 3.min(half),
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn quantified_fimi_round_trips(lines in prop::collection::vec(
        prop::collection::vec((0u32..50, 1u64..9), 0..6), 1..20)
    ) {
        prop_assume!(lines.iter().any(|l| !l.is_empty()));
        let text: String = lines
            .iter()
            .map(|l| l.iter().map(|(i, q)| format!("{i}:{q}")).collect::<Vec<_>>().join(" ") + "\n")
            .collect();
        let db = parse_transactions(text.as_bytes(), InputFormat::FimiQuantified, 1).unwrap();
        let again = parse_transactions(db.to_fimi(true).as_bytes(), InputFormat::FimiQuantified, 1).unwrap();
        prop_assert_eq!(db.transactions(), again.transactions());
    }

    #[test]
    fn interleaved_equals_sequential(db in database(), minsupp in 0.2f64..0.9) {
        let p = params(&db, minsupp);
        let a = sequential(&db, &p).unwrap();
        let b = interleaved(&db, &p).unwrap();
        prop_assert_eq!(&a.rules, &b.rules);
        prop_assert!(b.counters.units_evaluated <= a.counters.units_evaluated);
    }

    #[test]
    fn raising_minsupp_only_removes_rules(db in database(), lo in 0.1f64..0.5, step in 0.0f64..0.5) {
        let low = pcar(&db, &params(&db, lo)).unwrap().rules;
        let high = pcar(&db, &params(&db, lo + step)).unwrap().rules;
        let keys: BTreeSet<_> = low.iter().map(|r| r.key()).collect();
        prop_assert!(high.iter().all(|r| keys.contains(&r.key())));
    }

    #[test]
    fn constrained_rules_are_a_subset(db in database(), cl in prop::collection::btree_set(0u32..5, 1..3)) {
        let p = params(&db, 0.2);
        let cs = ConstraintSet { cl: ItemFilter::Only(cl.clone()), ..Default::default() };
        let all = pcar(&db, &p).unwrap().rules;
        let some = cbcar(&db, &p, &cs).unwrap().rules;
        prop_assert!(some.iter().all(|r| all.contains(r)));
        prop_assert!(some.iter().all(|r| r.conclusion.items().iter().all(|i| cl.contains(i))));
    }

    #[test]
    fn partition_count_never_matters(db in database(), nb in 1usize..6) {
        let p = params(&db, 0.3);
        let one = pcar(&db, &p).unwrap();
        let many = pcar(&db, &MiningParams { nb_partitions: nb.min(db.len()), ..p }).unwrap();
        prop_assert_eq!(one.rules, many.rules);
        prop_assert_eq!(one.frequent, many.frequent);
    }

    #[test]
    fn skipped_units_never_matter(bits in prop::collection::vec(any::<bool>(), 2..48), l in 1u32..12) {
        let units = bits.len() as u32;
        let l_max = l.min(units / 2).max(1);
        let seq = OccurrenceSequence::from_bits(&bits);
        let mut live = CycleCandidateSet::all(1, l_max).unwrap();
        for u in units_to_scan(&live.clone(), units) {
            if live.covers(u) {
                live.eliminate_in_place(u, seq.get(u));
            }
        }
        prop_assert_eq!(live.live(), &detect_cycles_exhaustive(&seq, 1, l_max).unwrap());
    }
}
