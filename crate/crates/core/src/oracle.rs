//! Brute-force ground truth over every automorphism of a small `K_{n,n}`.
//!
//! The oracle shares only the template matcher with the rest of the crate; it
//! never consults the congruence conditions except to compare against them.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bipartite::BipartiteAutomorphism;
use crate::classify::classify_cyclic_dihedral;
use crate::realizable::match_cases;

pub const MAX_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration is limited to n ≤ {MAX_N}, got {0}")]
    NTooLarge(usize),
    #[error("the template matcher needs n ≥ 3, got {0}")]
    NTooSmall(usize),
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    (0..n).permutations(n).collect()
}

fn build(n: usize, swap: bool, sigma: &[usize], tau: &[usize]) -> BipartiteAutomorphism {
    let offset = if swap { n } else { 0 };
    let mut image = Vec::with_capacity(2 * n);
    image.extend(sigma.iter().map(|&x| offset + x));
    image.extend(tau.iter().map(|&x| n - offset + x));
    BipartiteAutomorphism::from_slots(n, image).expect("block permutations are automorphisms")
}

/// All `2·(n!)²` automorphisms: part-preserving first, then part-swapping, each in
/// lexicographic order of the V-image and then the W-image.
pub fn enumerate_automorphisms(n: usize) -> Result<impl Iterator<Item = BipartiteAutomorphism>, OracleError> {
    if n > MAX_N {
        return Err(OracleError::NTooLarge(n));
    }
    let perms = permutations(n);
    let iter = [false, true].into_iter().flat_map(move |swap| {
        let perms = perms.clone();
        let outer = perms.clone();
        outer.into_iter().flat_map(move |sigma| {
            let perms = perms.clone();
            perms.into_iter().map(move |tau| build(n, swap, &sigma, &tau))
        })
    });
    Ok(iter)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderEntry {
    pub exists_realizable_automorphism: bool,
    /// First realizable automorphism of this order in enumeration order.
    pub sample: Option<BipartiteAutomorphism>,
    pub automorphisms_of_order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub automorphisms: u64,
    pub orders: BTreeMap<u64, OrderEntry>,
    /// Realizable orders with a divisor `d > 1` that is not realizable: `(m, d)`.
    pub divisor_gaps: Vec<(u64, u64)>,
}

impl OracleReport {
    pub fn realizable_orders(&self) -> BTreeSet<u64> {
        self.orders.iter().filter(|(_, e)| e.exists_realizable_automorphism).map(|(&m, _)| m).collect()
    }
}

#[derive(Default)]
struct Block {
    count: u64,
    per_order: BTreeMap<u64, (u64, Option<BipartiteAutomorphism>)>,
}

impl Block {
    fn merge(mut self, other: Block) -> Block {
        self.count += other.count;
        for (m, (c, s)) in other.per_order {
            let e = self.per_order.entry(m).or_insert((0, None));
            e.0 += c;
            if e.1.is_none() {
                e.1 = s;
            }
        }
        self
    }
}

/// Enumerates everything once and tabulates, per order, whether a realizable automorphism exists.
pub fn oracle_report(n: usize) -> Result<OracleReport, OracleError> {
    if n > MAX_N {
        return Err(OracleError::NTooLarge(n));
    }
    if n < 3 {
        return Err(OracleError::NTooSmall(n));
    }
    let perms = permutations(n);
    let blocks: Vec<(bool, usize)> = [false, true].into_iter().flat_map(|s| (0..perms.len()).map(move |i| (s, i))).collect();
    let results: Vec<Block> = blocks
        .par_iter()
        .map(|&(swap, i)| {
            let mut block = Block::default();
            for tau in &perms {
                let phi = build(n, swap, &perms[i], tau);
                block.count += 1;
                let verdict = match_cases(&phi).expect("n ≥ 3");
                let e = block.per_order.entry(verdict.order).or_insert((0, None));
                e.0 += 1;
                if verdict.realizable && e.1.is_none() {
                    e.1 = Some(phi);
                }
            }
            block
        })
        .collect();
    // `collect` keeps block order, so samples are the first in enumeration order.
    let total = results.into_iter().fold(Block::default(), Block::merge);

    let orders: BTreeMap<u64, OrderEntry> = total
        .per_order
        .into_iter()
        .map(|(m, (count, sample))| {
            (m, OrderEntry { exists_realizable_automorphism: sample.is_some(), sample, automorphisms_of_order: count })
        })
        .collect();
    let realizable: BTreeSet<u64> =
        orders.iter().filter(|(_, e)| e.exists_realizable_automorphism).map(|(&m, _)| m).collect();
    let mut divisor_gaps = Vec::new();
    for &m in &realizable {
        for d in (2..m).filter(|d| m % d == 0) {
            if !realizable.contains(&d) {
                divisor_gaps.push((m, d));
            }
        }
    }
    Ok(OracleReport { n, automorphisms: total.count, orders, divisor_gaps })
}

/// `{m : some order-m automorphism passes the template matcher} ∪ {1}`.
pub fn realizable_orders(n: usize) -> Result<BTreeSet<u64>, OracleError> {
    let mut set = oracle_report(n)?.realizable_orders();
    set.insert(1);
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckRow {
    pub n: usize,
    pub m: u64,
    pub oracle: bool,
    pub classify: bool,
    pub witness: Option<BipartiteAutomorphism>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub n: usize,
    pub m: u64,
    pub oracle: bool,
    pub classify: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrosscheckReport {
    pub rows: Vec<CrosscheckRow>,
    pub discrepancies: Vec<Discrepancy>,
    pub divisor_gaps: BTreeMap<usize, Vec<(u64, u64)>>,
}

pub fn crosscheck_table(
    n_range: std::ops::RangeInclusive<usize>,
    m_range: std::ops::RangeInclusive<u64>,
) -> Result<CrosscheckReport, OracleError> {
    let mut rows = Vec::new();
    let mut discrepancies = Vec::new();
    let mut divisor_gaps = BTreeMap::new();
    for n in n_range {
        let report = oracle_report(n)?;
        for m in m_range.clone() {
            let entry = report.orders.get(&m);
            let oracle = entry.is_some_and(|e| e.exists_realizable_automorphism);
            let classify = classify_cyclic_dihedral(n as u64, m).map(|v| v.contains()).unwrap_or(false);
            if oracle != classify {
                discrepancies.push(Discrepancy { n, m, oracle, classify });
            }
            rows.push(CrosscheckRow { n, m, oracle, classify, witness: entry.and_then(|e| e.sample.clone()) });
        }
        divisor_gaps.insert(n, report.divisor_gaps);
    }
    Ok(CrosscheckReport { rows, discrepancies, divisor_gaps })
}

pub fn crosscheck_discrepancies(
    n_range: std::ops::RangeInclusive<usize>,
    m_range: std::ops::RangeInclusive<u64>,
) -> Result<Vec<Discrepancy>, OracleError> {
    Ok(crosscheck_table(n_range, m_range)?.discrepancies)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_automorphisms(2).unwrap().count(), 8);
        assert_eq!(enumerate_automorphisms(3).unwrap().count(), 72);
        assert_eq!(enumerate_automorphisms(4).unwrap().count(), 1152);
        assert!(enumerate_automorphisms(7).is_err());
    }

    #[test]
    fn enumeration_is_distinct() {
        let all: BTreeSet<_> = enumerate_automorphisms(3).unwrap().collect();
        assert_eq!(all.len(), 72);
        assert_eq!(all.iter().filter(|p| p.swaps_parts()).count(), 36);
    }

    #[test]
    fn n3_orders() {
        assert_eq!(realizable_orders(3).unwrap(), BTreeSet::from([1, 2, 3, 6]));
    }

    #[test]
    fn n4_contains_four() {
        assert!(realizable_orders(4).unwrap().contains(&4));
    }

    #[test]
    fn crosscheck_small() {
        let report = crosscheck_table(3..=3, 2..=12).unwrap();
        assert!(report.discrepancies.is_empty());
        let row6 = report.rows.iter().find(|r| r.m == 6).unwrap();
        assert!(row6.oracle && row6.classify);
        let row4 = report.rows.iter().find(|r| r.m == 4).unwrap();
        assert!(!row4.oracle && !row4.classify);
    }
}
