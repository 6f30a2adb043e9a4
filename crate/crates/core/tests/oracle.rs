use std::collections::BTreeSet;

use knn_symmetry::classify::classify_cyclic_dihedral;
use knn_symmetry::oracle::{crosscheck_table, enumerate_automorphisms, oracle_report, realizable_orders};

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

#[test]
fn enumeration_counts_match_formula() {
    for n in 2..=5usize {
        let f = factorial(n as u64);
        assert_eq!(enumerate_automorphisms(n).unwrap().count() as u64, 2 * f * f);
    }
    assert_eq!(oracle_report(6).unwrap().automorphisms, 2 * 720 * 720);
}

#[test]
fn realizable_orders_small_n() {
    assert_eq!(realizable_orders(3).unwrap(), BTreeSet::from([1, 2, 3, 6]));
    assert_eq!(realizable_orders(4).unwrap(), BTreeSet::from([1, 2, 3, 4, 8]));
    assert_eq!(realizable_orders(5).unwrap(), BTreeSet::from([1, 2, 3, 4, 5, 10]));
}

#[test]
fn orders_agree_with_cyclic_conditions() {
    for n in 3..=5 {
        let orders = realizable_orders(n).unwrap();
        for m in 2..=12 {
            assert_eq!(orders.contains(&m), classify_cyclic_dihedral(n as u64, m).unwrap().contains(), "n={n} m={m}");
        }
    }
}

#[test]
fn no_divisor_gaps() {
    let report = crosscheck_table(3..=5, 2..=12).unwrap();
    assert!(report.discrepancies.is_empty());
    assert!(report.divisor_gaps.values().all(Vec::is_empty));
    for row in report.rows.iter().filter(|r| r.oracle) {
        let w = row.witness.as_ref().unwrap();
        assert_eq!(w.order(), row.m);
    }
}
