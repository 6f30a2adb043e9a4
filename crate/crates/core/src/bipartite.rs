//! Vertices and automorphisms of the complete bipartite graph `K_{n,n}`.
//!
//! Vertices are addressed as `(part, index)` with 1-based indices and print
//! as `v3` / `w1`. Internally an automorphism is a flat permutation of
//! `0..2n` where `v_i` is slot `i - 1` and `w_i` is slot `n + i - 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BipartiteError {
    #[error("vertex map is not a bijection on the {0} vertices")]
    NotBijective(usize),
    #[error("some vertices map within their part and others across parts ({within} within, {across} across)")]
    MixedAction { within: usize, across: usize },
    #[error("vertex {vertex} is out of range for n = {n}")]
    OutOfRange { vertex: String, n: usize },
    #[error("cannot parse vertex `{0}`")]
    BadVertex(String),
    #[error("vertex {0} appears more than once in the cycle notation")]
    RepeatedVertex(String),
    #[error("malformed cycle notation: {0}")]
    Syntax(String),
    #[error("n must be positive")]
    EmptyGraph,
    #[error("automorphisms act on different graphs (n = {0} vs n = {1})")]
    SizeMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Part {
    V,
    W,
}

impl Part {
    pub fn other(self) -> Part {
        match self {
            Part::V => Part::W,
            Part::W => Part::V,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    pub part: Part,
    pub index: usize,
}

impl VertexId {
    pub fn v(index: usize) -> Self {
        VertexId { part: Part::V, index }
    }

    pub fn w(index: usize) -> Self {
        VertexId { part: Part::W, index }
    }

    /// Flat slot in `0..2n`.
    pub fn slot(self, n: usize) -> usize {
        match self.part {
            Part::V => self.index - 1,
            Part::W => n + self.index - 1,
        }
    }

    pub fn from_slot(slot: usize, n: usize) -> Self {
        if slot < n {
            VertexId::v(slot + 1)
        } else {
            VertexId::w(slot - n + 1)
        }
    }

    fn check(self, n: usize) -> Result<Self, BipartiteError> {
        if self.index == 0 || self.index > n {
            Err(BipartiteError::OutOfRange { vertex: self.to_string(), n })
        } else {
            Ok(self)
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.part {
            Part::V => write!(f, "v{}", self.index),
            Part::W => write!(f, "w{}", self.index),
        }
    }
}

impl FromStr for VertexId {
    type Err = BipartiteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BipartiteError::BadVertex(s.to_string());
        let mut chars = s.chars();
        let part = match chars.next() {
            Some('v') | Some('V') => Part::V,
            Some('w') | Some('W') => Part::W,
            _ => return Err(bad()),
        };
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let index: usize = digits.parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(VertexId { part, index })
    }
}

impl Serialize for VertexId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A permutation of the `2n` vertices of `K_{n,n}` that preserves adjacency.
///
/// Every automorphism either fixes both parts setwise or interchanges them;
/// `swaps_parts` records which, and is re-derived on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BipartiteAutomorphism {
    n: usize,
    image: Vec<usize>,
    swaps_parts: bool,
}

/// Validates a vertex map and returns the automorphism it defines.
pub fn validate_automorphism(
    n: usize,
    image: &BTreeMap<VertexId, VertexId>,
) -> Result<BipartiteAutomorphism, BipartiteError> {
    if n == 0 {
        return Err(BipartiteError::EmptyGraph);
    }
    if image.len() != 2 * n {
        return Err(BipartiteError::NotBijective(2 * n));
    }
    let mut slots = vec![usize::MAX; 2 * n];
    for (from, to) in image {
        let from = from.check(n)?;
        let to = to.check(n)?;
        slots[from.slot(n)] = to.slot(n);
    }
    BipartiteAutomorphism::from_slots(n, slots)
}

impl BipartiteAutomorphism {
    pub fn identity(n: usize) -> Self {
        BipartiteAutomorphism { n, image: (0..2 * n).collect(), swaps_parts: false }
    }

    /// Builds an automorphism from a flat slot permutation (`image[x]` is the image of slot `x`).
    pub fn from_slots(n: usize, image: Vec<usize>) -> Result<Self, BipartiteError> {
        if n == 0 {
            return Err(BipartiteError::EmptyGraph);
        }
        if image.len() != 2 * n {
            return Err(BipartiteError::NotBijective(2 * n));
        }
        let mut seen = vec![false; 2 * n];
        for &y in &image {
            if y >= 2 * n || seen[y] {
                return Err(BipartiteError::NotBijective(2 * n));
            }
            seen[y] = true;
        }
        let across = image.iter().enumerate().filter(|&(x, &y)| (x < n) != (y < n)).count();
        let swaps_parts = match across {
            0 => false,
            c if c == 2 * n => true,
            c => return Err(BipartiteError::MixedAction { within: 2 * n - c, across: c }),
        };
        Ok(BipartiteAutomorphism { n, image, swaps_parts })
    }

    /// Parses cycle notation such as `"(v1 w1 v2 w2)(v3 v4)"`; omitted vertices are fixed.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self, BipartiteError> {
        if n == 0 {
            return Err(BipartiteError::EmptyGraph);
        }
        let mut image: Vec<usize> = (0..2 * n).collect();
        let mut used = vec![false; 2 * n];
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body_start = rest
                .strip_prefix('(')
                .ok_or_else(|| BipartiteError::Syntax(format!("expected `(` at `{rest}`")))?;
            let close = body_start
                .find(')')
                .ok_or_else(|| BipartiteError::Syntax("unclosed `(`".to_string()))?;
            let body = &body_start[..close];
            if body.contains('(') {
                return Err(BipartiteError::Syntax("nested `(`".to_string()));
            }
            let mut cycle = Vec::new();
            for token in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                let vertex: VertexId = token.parse()?;
                let slot = vertex.check(n)?.slot(n);
                if used[slot] {
                    return Err(BipartiteError::RepeatedVertex(vertex.to_string()));
                }
                used[slot] = true;
                cycle.push(slot);
            }
            for (i, &x) in cycle.iter().enumerate() {
                image[x] = cycle[(i + 1) % cycle.len()];
            }
            rest = body_start[close + 1..].trim_start();
        }
        Self::from_slots(n, image)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn swaps_parts(&self) -> bool {
        self.swaps_parts
    }

    pub fn slots(&self) -> &[usize] {
        &self.image
    }

    pub fn apply_slot(&self, slot: usize) -> usize {
        self.image[slot]
    }

    pub fn apply(&self, vertex: VertexId) -> VertexId {
        VertexId::from_slot(self.image[vertex.slot(self.n)], self.n)
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Self) -> Result<Self, BipartiteError> {
        if self.n != other.n {
            return Err(BipartiteError::SizeMismatch(self.n, other.n));
        }
        let image = other.image.iter().map(|&y| self.image[y]).collect();
        Ok(BipartiteAutomorphism { n: self.n, image, swaps_parts: self.swaps_parts != other.swaps_parts })
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![0; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            image[y] = x;
        }
        BipartiteAutomorphism { n: self.n, image, swaps_parts: self.swaps_parts }
    }

    /// Cycles of length at least 2, each starting at its smallest slot, ordered by that slot.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        self.orbits().into_iter().filter(|c| c.len() > 1).collect()
    }

    /// All orbits on the vertex slots, fixed points included.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.image.len()];
        let mut out = Vec::new();
        for start in 0..self.image.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_structure(&self) -> CycleStructure {
        cycle_structure(self)
    }

    pub fn order(&self) -> u64 {
        order(self)
    }

    /// Slots fixed by the permutation, split by part.
    pub fn fixed_counts(&self) -> (usize, usize) {
        let n = self.n;
        let fixed = |range: std::ops::Range<usize>| range.filter(|&x| self.image[x] == x).count();
        (fixed(0..n), fixed(n..2 * n))
    }
}

impl fmt::Display for BipartiteAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, &x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", VertexId::from_slot(x, self.n))?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl Serialize for BipartiteAutomorphism {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Cycle lengths of an automorphism, classified by the part(s) each cycle visits.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CycleStructure {
    /// Lengths (≥ 2) of cycles inside V, ascending.
    pub v_cycles: Vec<usize>,
    pub w_cycles: Vec<usize>,
    /// Lengths of part-alternating cycles, ascending. Always even.
    pub mixed_cycles: Vec<usize>,
    pub fixed_v: usize,
    pub fixed_w: usize,
}

impl CycleStructure {
    pub fn total(&self) -> usize {
        self.v_cycles.iter().chain(&self.w_cycles).chain(&self.mixed_cycles).sum::<usize>()
            + self.fixed_v
            + self.fixed_w
    }

    pub fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.v_cycles.iter().chain(&self.w_cycles).chain(&self.mixed_cycles).copied()
    }
}

pub fn cycle_structure(phi: &BipartiteAutomorphism) -> CycleStructure {
    let n = phi.n;
    let mut cs = CycleStructure::default();
    for orbit in phi.orbits() {
        let in_v = orbit.iter().filter(|&&x| x < n).count();
        match (orbit.len(), in_v) {
            (1, 1) => cs.fixed_v += 1,
            (1, _) => cs.fixed_w += 1,
            (len, k) if k == len => cs.v_cycles.push(len),
            (len, 0) => cs.w_cycles.push(len),
            (len, k) => {
                debug_assert_eq!(2 * k, len, "a part-swapping cycle must alternate");
                cs.mixed_cycles.push(len)
            }
        }
    }
    cs.v_cycles.sort_unstable();
    cs.w_cycles.sort_unstable();
    cs.mixed_cycles.sort_unstable();
    cs
}

/// Least `k ≥ 1` with `phi^k = id`: the lcm of the cycle lengths.
pub fn order(phi: &BipartiteAutomorphism) -> u64 {
    phi.orbits().iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
}

/// `beta` maps every `alpha`-orbit onto an `alpha`-orbit of the same length.
///
/// This always holds when the two commute; it is the consistency property
/// used to rule out configurations of commuting symmetries.
pub fn maps_orbits_to_orbits(alpha: &BipartiteAutomorphism, beta: &BipartiteAutomorphism) -> bool {
    if alpha.n != beta.n {
        return false;
    }
    let orbits = alpha.orbits();
    let mut owner = vec![0usize; alpha.image.len()];
    for (i, orbit) in orbits.iter().enumerate() {
        for &x in orbit {
            owner[x] = i;
        }
    }
    orbits.iter().all(|orbit| {
        let target = owner[beta.image[orbit[0]]];
        orbits[target].len() == orbit.len() && orbit.iter().all(|&x| owner[beta.image[x]] == target)
    })
}

pub fn commute(alpha: &BipartiteAutomorphism, beta: &BipartiteAutomorphism) -> bool {
    alpha.n == beta.n && (0..alpha.image.len()).all(|x| alpha.image[beta.image[x]] == beta.image[alpha.image[x]])
}
