//! Which single automorphisms of `K_{n,n}` are induced by an orientation
//! preserving diffeomorphism of some embedding.
//!
//! An automorphism of order `r` qualifies exactly when every vertex lies in an
//! `r`-cycle apart from the exceptions allowed by one of nine templates. The
//! templates are matched literally: each one demands that its exception be
//! present, and exceptions from different templates never combine.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::bipartite::{BipartiteAutomorphism, CycleStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizableError {
    #[error("the nine templates require n > 2, got n = {0}")]
    NTooSmall(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CaseMatch {
    pub case_id: u8,
    /// The template fitted only after interchanging the roles of V and W.
    pub parts_swapped_for_match: bool,
    pub parameters: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealizabilityVerdict {
    pub realizable: bool,
    /// Set when the automorphism is the identity, which needs no template.
    pub trivial: bool,
    pub order: u64,
    pub matches: Vec<CaseMatch>,
    pub diagnostics: Vec<String>,
}

/// Exceptional cycle lengths (length ≠ r, fixed points as length 1) with multiplicities.
type Exceptions = BTreeMap<usize, usize>;

fn exceptions(cycles: &[usize], fixed: usize, r: usize) -> Exceptions {
    let mut ex = Exceptions::new();
    if fixed > 0 && r != 1 {
        ex.insert(1, fixed);
    }
    for &len in cycles.iter().filter(|&&len| len != r) {
        *ex.entry(len).or_default() += 1;
    }
    ex
}

fn lengths(ex: &Exceptions) -> Vec<usize> {
    ex.keys().copied().collect()
}

fn proper_cycle(len: usize, r: usize) -> bool {
    (2..r).contains(&len)
}

fn params(pairs: &[(&str, usize)]) -> BTreeMap<String, u64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v as u64)).collect()
}

/// Templates (2)–(8) with `a` playing V and `b` playing W. Returns `(case, params)`.
fn fixing_templates(a: &Exceptions, b: &Exceptions, r: usize) -> Vec<(u8, BTreeMap<String, u64>)> {
    let mut out = Vec::new();
    let la = lengths(a);
    let lb = lengths(b);
    let count = |ex: &Exceptions, len: usize| ex.get(&len).copied().unwrap_or(0);

    if la == [1] && lb.is_empty() {
        out.push((2, params(&[])));
    }
    let small_fixed = |ex: &Exceptions, l: &[usize]| l.iter().all(|&x| x == 1) && count(ex, 1) <= 2;
    if small_fixed(a, &la) && small_fixed(b, &lb) && count(a, 1) + count(b, 1) > 0 {
        out.push((3, params(&[])));
    }
    if let [j] = la[..] {
        if lb.is_empty() && proper_cycle(j, r) && r % j == 0 {
            out.push((4, params(&[("j", j)])));
        }
    }
    if let [j, k] = la[..] {
        if lb.is_empty() && proper_cycle(j, r) && proper_cycle(k, r) && j.lcm(&k) == r {
            out.push((5, params(&[("j", j), ("k", k)])));
        }
    }
    if let ([j], [k]) = (&la[..], &lb[..]) {
        let (j, k) = (*j, *k);
        if proper_cycle(j, r) && proper_cycle(k, r) && j.lcm(&k) == r {
            out.push((6, params(&[("j", j), ("k", k)])));
        }
    }
    if r != 2 && la == [2] && lb == [2] && count(a, 2) == 1 && count(b, 2) == 1 {
        out.push((7, params(&[])));
    }
    let half = r / 2;
    if r % 2 == 0 && half % 2 == 1 && half >= 3 && la == [2, half] && lb == [2] && count(a, 2) == 1 && count(b, 2) == 1
    {
        out.push((8, params(&[])));
    }
    out
}

/// Templates symmetric in V and W; reported only in the unswapped orientation.
const SYMMETRIC_CASES: [u8; 2] = [3, 7];

pub fn match_cases(phi: &BipartiteAutomorphism) -> Result<RealizabilityVerdict, RealizableError> {
    let n = phi.n();
    if n <= 2 {
        return Err(RealizableError::NTooSmall(n));
    }
    let r = phi.order() as usize;
    let cs = phi.cycle_structure();
    let mut verdict = RealizabilityVerdict {
        realizable: false,
        trivial: false,
        order: r as u64,
        matches: Vec::new(),
        diagnostics: Vec::new(),
    };
    if r == 1 {
        verdict.realizable = true;
        verdict.trivial = true;
        return Ok(verdict);
    }

    if phi.swaps_parts() {
        match_swapping(&cs, n, r, &mut verdict);
    } else {
        let ex_v = exceptions(&cs.v_cycles, cs.fixed_v, r);
        let ex_w = exceptions(&cs.w_cycles, cs.fixed_w, r);
        if ex_v.is_empty() && ex_w.is_empty() {
            verdict.matches.push(CaseMatch { case_id: 1, parts_swapped_for_match: false, parameters: params(&[]) });
        }
        for (swapped, a, b) in [(false, &ex_v, &ex_w), (true, &ex_w, &ex_v)] {
            for (case_id, parameters) in fixing_templates(a, b, r) {
                if swapped && SYMMETRIC_CASES.contains(&case_id) {
                    continue;
                }
                verdict.matches.push(CaseMatch { case_id, parts_swapped_for_match: swapped, parameters });
            }
        }
        if verdict.matches.is_empty() {
            verdict.diagnostics.push(format!(
                "no template fits: exceptional cycles in V {}, in W {}",
                describe(&ex_v),
                describe(&ex_w)
            ));
        }
    }
    verdict.matches.sort();
    verdict.matches.dedup();
    verdict.realizable = !verdict.matches.is_empty();
    Ok(verdict)
}

fn match_swapping(cs: &CycleStructure, n: usize, r: usize, verdict: &mut RealizabilityVerdict) {
    // Every cycle of a part-swapping map alternates, so it meets V and W equally.
    let total: usize = cs.mixed_cycles.iter().sum();
    if total != 2 * n || cs.mixed_cycles.iter().any(|len| len % 2 == 1) {
        verdict.diagnostics.push(format!("inconsistent part-swapping cycle lengths {:?}", cs.mixed_cycles));
        return;
    }
    let ex = exceptions(&cs.mixed_cycles, 0, r);
    if ex.is_empty() {
        verdict.matches.push(CaseMatch { case_id: 1, parts_swapped_for_match: false, parameters: params(&[]) });
    } else if r != 4 && lengths(&ex) == [4] && ex[&4] == 1 {
        verdict.matches.push(CaseMatch { case_id: 9, parts_swapped_for_match: false, parameters: params(&[]) });
    } else {
        verdict.diagnostics.push(format!("no template fits: exceptional alternating cycles {}", describe(&ex)));
    }
}

fn describe(ex: &Exceptions) -> String {
    if ex.is_empty() {
        return "none".to_string();
    }
    let parts: Vec<String> = ex
        .iter()
        .map(|(&len, &count)| if len == 1 { format!("{count} fixed") } else { format!("{count}×{len}-cycle") })
        .collect();
    parts.join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verdict(n: usize, s: &str) -> RealizabilityVerdict {
        match_cases(&BipartiteAutomorphism::parse_cycles(n, s).unwrap()).unwrap()
    }

    fn cases(v: &RealizabilityVerdict) -> Vec<(u8, bool)> {
        v.matches.iter().map(|m| (m.case_id, m.parts_swapped_for_match)).collect()
    }

    #[test]
    fn single_mixed_six_cycle_is_case_one() {
        let v = verdict(3, "(v1 w1 v2 w2 v3 w3)");
        assert!(v.realizable);
        assert_eq!(cases(&v), vec![(1, false)]);
    }

    #[test]
    fn swap_with_one_four_cycle_is_case_nine() {
        let v = verdict(6, "(v1 w1 v2 w2)(v3 w3 v4 w4 v5 w5 v6 w6)");
        assert_eq!(v.order, 8);
        assert_eq!(cases(&v), vec![(9, false)]);
    }

    #[test]
    fn fixed_vertex_with_three_cycle_is_rejected() {
        let v = verdict(4, "(v2 v3 v4)");
        assert!(!v.realizable);
        assert!(v.matches.is_empty());
        assert!(!v.diagnostics.is_empty());
    }

    #[test]
    fn identity_is_trivially_realizable() {
        let v = verdict(3, "()");
        assert!(v.realizable && v.trivial && v.matches.is_empty());
    }

    #[test]
    fn small_n_rejected() {
        let phi = BipartiteAutomorphism::parse_cycles(2, "(v1 v2)").unwrap();
        assert_eq!(match_cases(&phi), Err(RealizableError::NTooSmall(2)));
    }

    #[test]
    fn fixed_vertices_in_w_only_match_case_two_swapped() {
        let v = verdict(3, "(v1 v2 v3)(w1 w2 w3)");
        assert_eq!(cases(&v), vec![(1, false)]);
        // All of W fixed: case (2) after swapping parts, too many fixed for case (3).
        let v = verdict(3, "(v1 v2 v3)");
        assert_eq!(cases(&v), vec![(2, true)]);
        let v = verdict(4, "(v1 v2 v3)(w1 w2 w3)");
        assert_eq!(cases(&v), vec![(3, false)]);
    }

    #[test]
    fn j_cycle_templates() {
        let v = verdict(6, "(v1 v2)(v3 v4)(v5 v6)(w1 w2 w3 w4 w5 w6)");
        assert_eq!(cases(&v), vec![(4, false)]);
        assert_eq!(v.matches[0].parameters["j"], 2);

        let v = verdict(12, "(v1 v2)(v3 v4)(v5 v6)(v7 v8 v9)(v10 v11 v12)(w1 w2 w3 w4 w5 w6)(w7 w8 w9 w10 w11 w12)");
        assert_eq!(cases(&v), vec![(5, false)]);

        let v = verdict(6, "(v1 v2)(v3 v4)(v5 v6)(w1 w2 w3)(w4 w5 w6)");
        assert_eq!(cases(&v), vec![(6, false), (6, true)]);

        let v = verdict(6, "(v1 v2)(v3 v4 v5 v6)(w1 w2 w3 w4)(w5 w6)");
        assert_eq!(cases(&v), vec![(7, false)]);

        let v = verdict(8, "(v1 v2)(v3 v4 v5)(v6 v7 v8)(w1 w2)(w3 w4 w5 w6 w7 w8)");
        assert_eq!(cases(&v), vec![(8, false)]);
    }

    #[test]
    fn combined_exceptions_are_rejected() {
        // A fixed vertex together with a 2-cycle in V, all else 4-cycles.
        let v = verdict(7, "(v2 v3)(v4 v5 v6 v7)(w1 w2 w3 w4)(w5 w6)");
        assert!(!v.realizable);
    }
}
