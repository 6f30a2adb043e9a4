//! Hypotheses of the edge embedding lemma for a placement, and brute-force
//! checks of subgroup-lemma witnesses.
//!
//! Arcs are ccw parameter intervals `(start, end)` on a fixed circle, using
//! the parametrization of [`circle_param`]. Only the interior matters for
//! collisions, so arcs that share an endpoint are allowed and reported.

use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bipartite::{BipartiteAutomorphism, Part, VertexId};
use crate::classify::{Equality, GroupSpec};
use crate::families::{induced_action, Family, FamilyError, InducedAction, Placement};
use crate::motion::{act, circle_param, FixedSet, Motion, Point, Turn};

/// Exhaustive enumeration is refused above this many vertices.
pub const DEFAULT_MAX_VERTICES: usize = 16;
/// The pruned search copes with somewhat larger graphs.
pub const RESTRICTED_MAX_VERTICES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Embeddable {
    ProperSubset,
    FullCircleOnly,
    No,
}

/// How `K_{a,b}` sits in a circle.
pub fn circle_embeddable(a: usize, b: usize) -> Embeddable {
    match (a.min(b), a.max(b)) {
        (0, _) | (1, 1) | (1, 2) => Embeddable::ProperSubset,
        (2, 2) => Embeddable::FullCircleOnly,
        _ => Embeddable::No,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EdgeError {
    #[error("enumeration needs 2n ≤ {limit}, got 2n = {two_n}")]
    EnumerationTooLarge { two_n: usize, limit: usize },
    #[error("no witness plan: {0}")]
    NoWitnessPlan(String),
    #[error("target {target} is not a subgroup handled for {family}")]
    InvalidTarget { target: String, family: String },
    #[error("witness fails: {} is admissible and fixes K_{{{},{}}}", .0.counterexample.as_ref().map(|c| c.psi.to_string()).unwrap_or_default(), .0.counterexample.as_ref().map(|c| c.fixed.0).unwrap_or(0), .0.counterexample.as_ref().map(|c| c.fixed.1).unwrap_or(0))]
    WitnessFailed(Box<WitnessReport>),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub v: VertexId,
    pub w: VertexId,
    pub start: Turn,
    pub end: Turn,
}

impl Arc {
    fn length(&self) -> Turn {
        self.end - self.start
    }

    /// `u` strictly inside the ccw interval.
    pub fn interior_contains(&self, u: Turn) -> bool {
        u != self.start && u != self.end && (u - self.start) < self.length()
    }

    fn interiors_meet(&self, other: &Arc) -> bool {
        self.start == other.start || self.interior_contains(other.start) || other.interior_contains(self.start)
    }

    fn shares_endpoint(&self, other: &Arc) -> bool {
        [self.start, self.end].iter().any(|u| *u == other.start || *u == other.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CircleArcs {
    pub circle: FixedSet,
    pub arcs: Vec<Arc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcAssignment {
    pub circles: Vec<CircleArcs>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConditionResult {
    Pass,
    Fail { witness: String },
}

impl ConditionResult {
    pub fn passed(&self) -> bool {
        matches!(self, ConditionResult::Pass)
    }

    fn from_first(failures: &[String]) -> ConditionResult {
        match failures.first() {
            None => ConditionResult::Pass,
            Some(w) => ConditionResult::Fail { witness: w.clone() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    /// Results for conditions (1) to (5), in order.
    pub conditions: Vec<ConditionResult>,
    pub arcs: Option<ArcAssignment>,
    /// Pairs on one circle whose arcs meet at a vertex.
    pub shared_endpoints: Vec<(VertexId, VertexId, VertexId, VertexId)>,
    pub fixed_pairs: usize,
    pub interchanging_elements: usize,
    /// The two computations of uniqueness in condition (5) agree.
    pub condition5_paths_agree: bool,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(ConditionResult::passed)
    }
}

/// A pair of adjacent vertices lying on a circle fixed by a nontrivial element.
#[derive(Debug, Clone)]
struct CirclePair {
    v: VertexId,
    w: VertexId,
    circle: FixedSet,
    candidates: [Arc; 2],
}

/// `f` restricted to a circle it preserves: `u ↦ sign·u + shift`.
#[derive(Debug, Clone, Copy)]
struct CircleMap {
    reflect: bool,
    shift: Turn,
}

impl CircleMap {
    fn apply(self, u: Turn) -> Turn {
        if self.reflect {
            self.shift - u
        } else {
            self.shift + u
        }
    }

    fn image(self, arc: &Arc) -> (Turn, Turn) {
        if self.reflect {
            (self.apply(arc.end), self.apply(arc.start))
        } else {
            (self.apply(arc.start), self.apply(arc.end))
        }
    }
}

fn point_on(circle: FixedSet, u: Turn) -> Point {
    match circle {
        FixedSet::CircleX => Point::OnX(u),
        FixedSet::CircleY => Point::OnY(u),
        FixedSet::AxisCircle { a, b } => Point::on_axis(a, b, u),
        _ => unreachable!("not a circle"),
    }
}

fn circle_map(f: Motion, circle: FixedSet) -> Option<CircleMap> {
    if circle.image(f) != circle {
        return None;
    }
    let shift = circle_param(circle, &act(f, &point_on(circle, Turn::ZERO)))?;
    let quarter = circle_param(circle, &act(f, &point_on(circle, Turn::QUARTER)))?;
    Some(CircleMap { reflect: quarter != shift + Turn::QUARTER, shift })
}

/// Condition (3) for one arc: every `f` preserving the endpoint pair or fixing an
/// interior point maps the arc onto itself. Returns the first offending motion.
fn arc_violation(placement: &Placement, circle: FixedSet, arc: &Arc) -> Option<Motion> {
    let (pv, pw) = (placement.point(arc.v), placement.point(arc.w));
    for &f in placement.group.elements().iter().filter(|f| !f.is_identity()) {
        let (fv, fw) = (act(f, &pv), act(f, &pw));
        let preserves_pair = (fv == pv && fw == pw) || (fv == pw && fw == pv);
        let map = circle_map(f, circle);
        let fixes_interior = match map {
            Some(m) if !m.reflect => m.shift.is_zero(),
            Some(m) => {
                let half = m.shift.half();
                arc.interior_contains(half) || arc.interior_contains(half + Turn::HALF)
            }
            None => match f.fixed_set() {
                FixedSet::Empty => false,
                fix => fix
                    .intersection(circle)
                    .unwrap_or_default()
                    .iter()
                    .filter_map(|p| circle_param(circle, p))
                    .any(|u| arc.interior_contains(u)),
            },
        };
        if !(preserves_pair || fixes_interior) {
            continue;
        }
        let onto_itself = map.is_some_and(|m| m.image(arc) == (arc.start, arc.end));
        if !onto_itself {
            return Some(f);
        }
    }
    None
}

fn arcs_conflict(c1: FixedSet, a1: &Arc, c2: FixedSet, a2: &Arc) -> bool {
    if c1 == c2 {
        return a1.interiors_meet(a2);
    }
    c1.intersection(c2).unwrap_or_default().iter().any(|p| {
        let u1 = circle_param(c1, p).expect("intersection point lies on both circles");
        let u2 = circle_param(c2, p).expect("intersection point lies on both circles");
        a1.interior_contains(u1) && a2.interior_contains(u2)
    })
}

/// Backtracking over the two arc choices of every pair; `allowed[i][k]` gates choice `k` of pair `i`.
fn search_arcs(placement: &Placement, pairs: &[CirclePair], allowed: &[[bool; 2]]) -> Option<Vec<usize>> {
    fn go(
        placement: &Placement,
        pairs: &[CirclePair],
        allowed: &[[bool; 2]],
        chosen: &mut Vec<usize>,
    ) -> bool {
        let i = chosen.len();
        if i == pairs.len() {
            return true;
        }
        for k in 0..2 {
            if !allowed[i][k] {
                continue;
            }
            let arc = &pairs[i].candidates[k];
            let clash = chosen.iter().enumerate().any(|(j, &kj)| {
                arcs_conflict(pairs[i].circle, arc, pairs[j].circle, &pairs[j].candidates[kj])
            });
            if clash {
                continue;
            }
            chosen.push(k);
            if go(placement, pairs, allowed, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::with_capacity(pairs.len());
    go(placement, pairs, allowed, &mut chosen).then_some(chosen)
}

fn nontrivial_pair_stabilizer(placement: &Placement, pv: &Point, pw: &Point) -> Vec<Motion> {
    placement
        .group
        .elements()
        .iter()
        .copied()
        .filter(|&f| !f.is_identity() && act(f, pv) == *pv && act(f, pw) == *pw)
        .collect()
}

fn pairs(placement: &Placement) -> impl Iterator<Item = (VertexId, VertexId)> {
    let n = placement.n();
    (1..=n).cartesian_product(1..=n).map(|(i, j)| (VertexId::v(i), VertexId::w(j)))
}

pub fn check_conditions(placement: &Placement) -> ConditionReport {
    let vertices: Vec<Point> = placement.vertices().iter().map(|pv| pv.point).collect();

    // (1) and the input for (2).
    let mut fail1 = Vec::new();
    let mut circle_pairs: Vec<CirclePair> = Vec::new();
    for (v, w) in pairs(placement) {
        let (pv, pw) = (placement.point(v), placement.point(w));
        let stab = nontrivial_pair_stabilizer(placement, &pv, &pw);
        let sets: BTreeSet<FixedSet> = stab.iter().map(|f| f.fixed_set()).collect();
        if sets.len() > 1 {
            let names = sets.iter().map(|s| s.to_string()).join(", ");
            fail1.push(format!("{v}{w} is fixed by elements with fixed sets {names}"));
        }
        for circle in sets {
            let (uv, uw) = (circle_param(circle, &pv).unwrap(), circle_param(circle, &pw).unwrap());
            circle_pairs.push(CirclePair {
                v,
                w,
                circle,
                candidates: [Arc { v, w, start: uv, end: uw }, Arc { v, w, start: uw, end: uv }],
            });
        }
    }

    // (2): candidate arcs must avoid every vertex; then search for a consistent choice.
    let clean: Vec<[bool; 2]> = circle_pairs
        .iter()
        .map(|cp| {
            cp.candidates.map(|arc| {
                !vertices.iter().any(|p| circle_param(cp.circle, p).is_some_and(|u| arc.interior_contains(u)))
            })
        })
        .collect();
    let violations: Vec<[Option<Motion>; 2]> = circle_pairs
        .iter()
        .map(|cp| cp.candidates.map(|arc| arc_violation(placement, cp.circle, &arc)))
        .collect();
    let both: Vec<[bool; 2]> =
        clean.iter().zip(&violations).map(|(c, v)| [c[0] && v[0].is_none(), c[1] && v[1].is_none()]).collect();
    // Prefer an assignment that also satisfies (3); otherwise report (3) on a (2)-valid one.
    let choice = search_arcs(placement, &circle_pairs, &both).or_else(|| search_arcs(placement, &circle_pairs, &clean));
    let (cond2, cond3, arcs, shared) = match choice {
        None => {
            let witness = match circle_pairs.iter().zip(&clean).find(|(_, c)| !c[0] && !c[1]) {
                Some((cp, _)) => format!("both arcs between {} and {} on {} contain a vertex", cp.v, cp.w, cp.circle),
                None => {
                    let on: BTreeSet<String> = circle_pairs.iter().map(|cp| cp.circle.to_string()).collect();
                    format!("no disjoint choice of arcs for {} pairs on {}", circle_pairs.len(), on.iter().join(", "))
                }
            };
            (ConditionResult::Fail { witness }, ConditionResult::Pass, None, vec![])
        }
        Some(choice) => {
            let mut fail3 = Vec::new();
            let mut circles: Vec<CircleArcs> = Vec::new();
            let mut shared = Vec::new();
            for (i, (cp, &k)) in circle_pairs.iter().zip(&choice).enumerate() {
                let arc = cp.candidates[k];
                if let Some(f) = violations[i][k] {
                    fail3.push(format!("{f} does not map the arc {}{} on {} to itself", cp.v, cp.w, cp.circle));
                }
                match circles.iter_mut().find(|c| c.circle == cp.circle) {
                    Some(c) => {
                        for other in &c.arcs {
                            if other.shares_endpoint(&arc) {
                                shared.push((other.v, other.w, arc.v, arc.w));
                            }
                        }
                        c.arcs.push(arc)
                    }
                    None => circles.push(CircleArcs { circle: cp.circle, arcs: vec![arc] }),
                }
            }
            (ConditionResult::Pass, ConditionResult::from_first(&fail3), Some(ArcAssignment { circles }), shared)
        }
    };

    // (4) and (5) over elements interchanging an adjacent pair.
    let mut fail4 = Vec::new();
    let mut fail5 = Vec::new();
    let mut paths_agree = true;
    let mut interchanging = 0;
    for &g in placement.group.elements() {
        let swapped = pairs(placement).find(|&(v, w)| {
            let (pv, pw) = (placement.point(v), placement.point(w));
            act(g, &pv) == pw && act(g, &pw) == pv
        });
        let Some((v, w)) = swapped else { continue };
        interchanging += 1;
        let fixed: Vec<&Point> = vertices.iter().filter(|p| act(g, p) == **p).collect();
        let a = fixed.iter().filter(|p| placement.vertex_at(p).unwrap().part == Part::V).count();
        let b = fixed.len() - a;
        if circle_embeddable(a, b) != Embeddable::ProperSubset {
            fail4.push(format!("{g} interchanges {v}{w} and fixes K_{{{a},{b}}}"));
        }
        let fix = g.fixed_set();
        let by_fixed_set = placement.group.elements().iter().filter(|&&h| h != g && h.fixed_set() == fix).count() == 0;
        let by_coordinates = unique_by_coordinates(placement, g);
        paths_agree &= by_fixed_set == by_coordinates;
        if fix == FixedSet::Empty {
            fail5.push(format!("{g} interchanges {v}{w} and has no fixed point"));
        } else if !by_fixed_set {
            fail5.push(format!("{g} interchanges {v}{w} and shares its fixed set {fix}"));
        }
    }
    ConditionReport {
        conditions: vec![ConditionResult::from_first(&fail1), cond2, cond3, ConditionResult::from_first(&fail4), ConditionResult::from_first(&fail5)],
        arcs,
        shared_endpoints: shared,
        fixed_pairs: circle_pairs.len(),
        interchanging_elements: interchanging,
        condition5_paths_agree: paths_agree,
    }
}

/// Whether `g` is alone with its fixed set, read off the coordinates: a flagged
/// `(a, b, 1)` is the only element fixing `axis(a, b)`, and the rotations about X
/// (resp. Y) are the unflagged elements with `a = 0` (resp. `b = 0`).
fn unique_by_coordinates(placement: &Placement, g: Motion) -> bool {
    if g.flagged || g.is_identity() {
        return true;
    }
    let pattern = |h: Motion| (h.a.is_zero(), h.b.is_zero());
    !placement.group.elements().iter().any(|&h| !h.flagged && h != g && !h.is_identity() && pattern(h) == pattern(g))
}

// ---------------------------------------------------------------------------
// Subgroup lemma witnesses

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Every ψ fixing the endpoints of `e₁`, checked one by one.
    Exhaustive,
    /// Backtracking that only extends partial maps respecting the edge orbits.
    Restricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Witness edges for the target group itself.
    Lemma,
    /// Witness for the full group, then an edge fixed by no nontrivial element.
    Corollary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub psi: BipartiteAutomorphism,
    pub fixed: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub target: GroupSpec,
    pub route: Route,
    /// Order of the group whose edge orbits are designated.
    pub orbit_group_order: usize,
    pub plan: String,
    pub designated: Vec<(VertexId, VertexId)>,
    pub orbit_sizes: Vec<usize>,
    pub mode: SearchMode,
    /// Maps ψ fixing the endpoints of e₁ that respect every designated orbit.
    pub admissible: u64,
    /// Vertex counts of the subgraph fixed by every admissible ψ.
    pub forced: (usize, usize),
    pub counterexample: Option<Counterexample>,
    /// e₁ is pointwise fixed by no nontrivial element of the full group.
    pub corollary_edge_free: bool,
    pub passed: bool,
}

/// Witness edges in terms of points, plus the group whose orbits they designate.
struct Plan {
    description: String,
    edges: Vec<(Point, Point)>,
    subgroup: Vec<Motion>,
    route: Route,
}

fn target_kind(family: Family, target: GroupSpec) -> Option<bool> {
    // Some(true): the full group; Some(false): its rotation subgroup.
    match (family, target) {
        (Family::G1 { m } | Family::G2 { m } | Family::G3 { m }, GroupSpec::Dihedral { m: t }) if t == m => Some(true),
        (Family::G1 { m } | Family::G2 { m } | Family::G3 { m }, GroupSpec::Cyclic { m: t }) if t == m => Some(false),
        (Family::J1 { r, s }, GroupSpec::SemidirectProduct { r: tr, s: ts }) if (tr, ts) == (r, s) => Some(true),
        (Family::J1 { r, s }, GroupSpec::Product { r: tr, s: ts }) if (tr, ts) == (r, s) => Some(false),
        (Family::J2 { s }, GroupSpec::SemidirectProduct { r: 2, s: ts }) if ts == s => Some(true),
        (Family::J2 { s }, GroupSpec::Product { r: 2, s: ts }) if ts == s => Some(false),
        _ => None,
    }
}

fn rotation_subgroup(placement: &Placement) -> Vec<Motion> {
    placement.group.elements().iter().copied().filter(|m| !m.flagged).collect()
}

/// The edges named in the construction for `target`.
fn witness_plan(placement: &Placement, target: GroupSpec) -> Result<Plan, EdgeError> {
    let family = placement.params.family;
    let n = placement.params.n;
    let invalid = || EdgeError::InvalidTarget { target: target.to_string(), family: family.to_string() };
    let full = target_kind(family, target).ok_or_else(invalid)?;
    if let Ok(verdict) = target.classify(n) {
        if verdict.equality == Equality::Open {
            return Err(EdgeError::NoWitnessPlan(format!("equality for {target} at n = {n} is open")));
        }
    }
    let group = &placement.group;
    let all = group.elements().to_vec();
    let anchor = |name: &str| {
        placement.anchors.get(name).copied().ok_or_else(|| EdgeError::NoWitnessPlan(format!("placement has no {name}")))
    };
    let gen = |name: &str| group.generator(name).expect("family generator");
    let image = |m: Motion, p: Point| act(m, &p);
    let route = if full { Route::Lemma } else { Route::Corollary };
    let plan = |description: &str, edges: Vec<(Point, Point)>| Plan {
        description: description.to_string(),
        edges,
        subgroup: all.clone(),
        route,
    };

    Ok(match family {
        Family::G1 { m } => {
            let p = anchor("p0")?;
            let g = gen("g");
            let w = |i: i64| image(g.pow(i).compose(Motion::PHI), p);
            if m >= 3 {
                plan("p·φ(p), p·gφ(p), p·g²φ(p) for p in a free orbit", vec![(p, w(0)), (p, w(1)), (p, w(2))])
            } else {
                let other = if n % 2 == 0 { anchor("p1")? } else { anchor("x")? };
                plan("p·φ(p), p·gφ(p) and the cross-orbit edge p'·φ(p)", vec![(p, w(0)), (p, w(1)), (other, w(0))])
            }
        }
        Family::G2 { m } => {
            let h = gen("h");
            if m >= 6 {
                let q = anchor("q")?;
                plan("an edge of the Z cycle", vec![(q, image(h, q))])
            } else if m == 4 {
                let p = anchor("p0")?;
                plan("p·h(p) and p·φh(p) from a free orbit", vec![(p, image(h, p)), (p, image(Motion::PHI.compose(h), p))])
            } else {
                return Err(EdgeError::NoWitnessPlan("G2 with m = 2".to_string()));
            }
        }
        Family::G3 { m } => {
            if m < 8 {
                return Err(EdgeError::NoWitnessPlan("G3 with m = 4".to_string()));
            }
            let q = anchor("q")?;
            plan("an edge of the Z cycle", vec![(q, image(gen("j"), q))])
        }
        Family::J1 { r, s } => {
            let (g, h) = (gen("g"), gen("h"));
            if n % s == 0 {
                let v = anchor("p0").map_err(|_| EdgeError::NoWitnessPlan(format!("no free orbit at n = {n}")))?;
                let ws: Vec<Point> = placement
                    .vertices()
                    .iter()
                    .filter(|pv| pv.vertex.part == Part::W)
                    .map(|pv| pv.point)
                    .collect();
                plan("p joined to every vertex of W", ws.into_iter().map(|w| (v, w)).collect())
            } else if r == 2 {
                let v = anchor("p0")?;
                let edges = (0..s as i64).map(|i| (v, image(h.pow(i).compose(Motion::PHI), v))).collect();
                plan("v·h^i φ(v)", edges)
            } else if n % (4 * s) == 2 * s + 2 && n == 2 * s + 2 {
                let z = anchor("z")?;
                let e1 = (z, image(g.compose(h), z));
                if full {
                    plan("z·gh(z)", vec![e1])
                } else {
                    let w1 = image(g, anchor("y")?);
                    Plan {
                        description: "z·gh(z) and z·w1 under ⟨g, h⟩".to_string(),
                        edges: vec![e1, (z, w1)],
                        subgroup: rotation_subgroup(placement),
                        route: Route::Lemma,
                    }
                }
            } else {
                free_orbit_star(placement, &plan)?
            }
        }
        Family::J2 { s } => {
            let h = gen("h");
            if n == s + 2 {
                let q = anchor("q")?;
                let e1 = (q, image(h, q));
                if full {
                    plan("q·h(q)", vec![e1])
                } else if s == 4 {
                    let w1 = image(h, anchor("y")?);
                    Plan {
                        description: "q·h(q) and q·w1 under ⟨g, h⟩".to_string(),
                        edges: vec![e1, (q, w1)],
                        subgroup: rotation_subgroup(placement),
                        route: Route::Lemma,
                    }
                } else {
                    plan("q·h(q)", vec![e1])
                }
            } else {
                free_orbit_star(placement, &plan)?
            }
        }
    })
}

/// `v` joined to each vertex of W in its own free orbit.
fn free_orbit_star(placement: &Placement, plan: &dyn Fn(&str, Vec<(Point, Point)>) -> Plan) -> Result<Plan, EdgeError> {
    let v = placement.anchors.get("p0").copied().ok_or_else(|| EdgeError::NoWitnessPlan("no free orbit".to_string()))?;
    let edges = placement
        .group
        .orbit(&v)
        .into_iter()
        .filter(|p| placement.vertex_at(p).is_some_and(|x| x.part == Part::W))
        .map(|w| (v, w))
        .collect();
    Ok(plan("v joined to W within its free orbit", edges))
}

/// Edge orbits under a set of induced automorphisms, as an `n × n` colour table
/// (`colour[i·n + j]` for `v_{i+1} w_{j+1}`).
fn edge_orbit_ids(n: usize, perms: &[&BipartiteAutomorphism]) -> Vec<usize> {
    let edge_image = |p: &BipartiteAutomorphism, e: usize| {
        let (x, y) = (p.apply_slot(e / n), p.apply_slot(n + e % n));
        if x < n {
            x * n + (y - n)
        } else {
            y * n + (x - n)
        }
    };
    let mut id = vec![usize::MAX; n * n];
    let mut next = 0;
    for e in 0..n * n {
        if id[e] != usize::MAX {
            continue;
        }
        let mut stack = vec![e];
        id[e] = next;
        while let Some(x) = stack.pop() {
            for p in perms {
                let y = edge_image(p, x);
                if id[y] == usize::MAX {
                    id[y] = next;
                    stack.push(y);
                }
            }
        }
        next += 1;
    }
    id
}

/// The designation as a colour table: 0 for undesignated edges, `k + 1` for orbit `k`.
struct Designation {
    n: usize,
    colour: Vec<u16>,
    e1: (usize, usize),
}

impl Designation {
    fn new(n: usize, orbit_id: &[usize], edges: &[(usize, usize)]) -> (Designation, Vec<usize>) {
        let mut colour = vec![0u16; n * n];
        let mut sizes = Vec::new();
        let mut seen = Vec::new();
        for &(i, j) in edges {
            let o = orbit_id[i * n + j];
            if seen.contains(&o) {
                continue;
            }
            seen.push(o);
            let c = seen.len() as u16;
            let mut size = 0;
            for (e, &oid) in orbit_id.iter().enumerate() {
                if oid == o {
                    colour[e] = c;
                    size += 1;
                }
            }
            sizes.push(size);
        }
        (Designation { n, colour, e1: edges[0] }, sizes)
    }

    fn at(&self, i: usize, j: usize) -> u16 {
        self.colour[i * self.n + j]
    }
}

#[derive(Debug, Clone, Default)]
struct Tally {
    admissible: u64,
    /// Bit i for v_{i+1}, n + j for w_{j+1}.
    forced: u64,
    counterexample: Option<(Vec<usize>, Vec<usize>)>,
}

impl Tally {
    fn new() -> Tally {
        Tally { admissible: 0, forced: u64::MAX, counterexample: None }
    }

    fn record(&mut self, sigma: &[usize], tau: &[usize]) {
        self.admissible += 1;
        let n = sigma.len();
        let mut mask = 0u64;
        for (i, &x) in sigma.iter().enumerate() {
            if x == i {
                mask |= 1 << i;
            }
        }
        for (j, &y) in tau.iter().enumerate() {
            if y == j {
                mask |= 1 << (n + j);
            }
        }
        self.forced &= mask;
        if self.counterexample.is_none() {
            let a = (mask & ((1 << n) - 1)).count_ones() as usize;
            let b = (mask >> n).count_ones() as usize;
            if circle_embeddable(a, b) != Embeddable::No {
                self.counterexample = Some((sigma.to_vec(), tau.to_vec()));
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.admissible += other.admissible;
        self.forced &= other.forced;
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
        self
    }
}

fn respects(d: &Designation, sigma: &[usize], tau: &[usize]) -> bool {
    let n = d.n;
    (0..n).all(|i| (0..n).all(|j| d.at(i, j) == 0 || d.at(sigma[i], tau[j]) == d.at(i, j)))
}

/// All σ, τ fixing the endpoints of e₁, in lexicographic order.
fn exhaustive(d: &Designation) -> Tally {
    let n = d.n;
    let (v1, w1) = d.e1;
    let with_fixed = |fixed: usize| -> Vec<Vec<usize>> {
        let rest: Vec<usize> = (0..n).filter(|&x| x != fixed).collect();
        rest.iter()
            .copied()
            .permutations(n - 1)
            .map(|img| {
                let mut p = vec![0; n];
                p[fixed] = fixed;
                for (&from, to) in rest.iter().zip(img) {
                    p[from] = to;
                }
                p
            })
            .collect()
    };
    let sigmas = with_fixed(v1);
    let taus = with_fixed(w1);
    sigmas
        .par_iter()
        .map(|sigma| {
            let mut tally = Tally::new();
            for tau in &taus {
                if respects(d, sigma, tau) {
                    tally.record(sigma, tau);
                }
            }
            tally
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Tally::new(), Tally::merge)
}

/// Backtracking over V then W, extending only maps that keep every colour so far.
fn restricted(d: &Designation) -> Tally {
    let n = d.n;
    let (v1, w1) = d.e1;
    // Assignment order: v1, w1, then alternate the remaining vertices.
    let mut order: Vec<(Part, usize)> = vec![(Part::V, v1), (Part::W, w1)];
    let rest_v: Vec<usize> = (0..n).filter(|&x| x != v1).collect();
    let rest_w: Vec<usize> = (0..n).filter(|&x| x != w1).collect();
    for k in 0..n - 1 {
        order.push((Part::V, rest_v[k]));
        order.push((Part::W, rest_w[k]));
    }
    struct State {
        sigma: Vec<usize>,
        tau: Vec<usize>,
        used_v: Vec<bool>,
        used_w: Vec<bool>,
        assigned_v: Vec<usize>,
        assigned_w: Vec<usize>,
    }
    fn go(d: &Designation, order: &[(Part, usize)], depth: usize, st: &mut State, tally: &mut Tally) {
        let n = d.n;
        if depth == order.len() {
            tally.record(&st.sigma, &st.tau);
            return;
        }
        let (part, x) = order[depth];
        let fixed = depth < 2;
        for img in 0..n {
            if fixed && img != x {
                continue;
            }
            match part {
                Part::V => {
                    if st.used_v[img] || !st.assigned_w.iter().all(|&j| d.at(img, st.tau[j]) == d.at(x, j)) {
                        continue;
                    }
                    st.sigma[x] = img;
                    st.used_v[img] = true;
                    st.assigned_v.push(x);
                    go(d, order, depth + 1, st, tally);
                    st.assigned_v.pop();
                    st.used_v[img] = false;
                }
                Part::W => {
                    if st.used_w[img] || !st.assigned_v.iter().all(|&i| d.at(st.sigma[i], img) == d.at(i, x)) {
                        continue;
                    }
                    st.tau[x] = img;
                    st.used_w[img] = true;
                    st.assigned_w.push(x);
                    go(d, order, depth + 1, st, tally);
                    st.assigned_w.pop();
                    st.used_w[img] = false;
                }
            }
        }
    }
    let mut st = State {
        sigma: vec![usize::MAX; n],
        tau: vec![usize::MAX; n],
        used_v: vec![false; n],
        used_w: vec![false; n],
        assigned_v: vec![],
        assigned_w: vec![],
    };
    let mut tally = Tally::new();
    go(d, &order, 0, &mut st, &mut tally);
    tally
}

fn check_limit(n: usize, mode: SearchMode) -> Result<(), EdgeError> {
    let limit = match mode {
        SearchMode::Exhaustive => DEFAULT_MAX_VERTICES,
        SearchMode::Restricted => RESTRICTED_MAX_VERTICES,
    };
    if 2 * n > limit {
        return Err(EdgeError::EnumerationTooLarge { two_n: 2 * n, limit });
    }
    Ok(())
}

fn slot_pair(placement: &Placement, (p, q): (Point, Point)) -> (usize, usize) {
    let n = placement.n();
    let a = placement.slot_at(&p).expect("witness point is a vertex");
    let b = placement.slot_at(&q).expect("witness point is a vertex");
    let (v, w) = if a < n { (a, b) } else { (b, a) };
    assert!(v < n && w >= n, "witness edge joins the two parts");
    (v, w - n)
}

/// Runs the designated-orbit check for edges given in slot form.
fn evaluate(
    placement: &Placement,
    action: &InducedAction,
    subgroup: &[Motion],
    edges: &[(usize, usize)],
    mode: SearchMode,
) -> (Tally, Vec<usize>) {
    let n = placement.n();
    let perms: Vec<&BipartiteAutomorphism> = subgroup.iter().map(|&m| action.get(m).expect("subgroup element")).collect();
    let ids = edge_orbit_ids(n, &perms);
    let (d, sizes) = Designation::new(n, &ids, edges);
    let tally = match mode {
        SearchMode::Exhaustive => exhaustive(&d),
        SearchMode::Restricted => restricted(&d),
    };
    (tally, sizes)
}

fn edge_is_free(placement: &Placement, (v, w): (usize, usize)) -> bool {
    let n = placement.n();
    let (pv, pw) = (placement.point_at(v), placement.point_at(n + w));
    nontrivial_pair_stabilizer(placement, &pv, &pw).is_empty()
}

fn report(
    placement: &Placement,
    target: GroupSpec,
    route: Route,
    plan: String,
    subgroup_order: usize,
    edges: &[(usize, usize)],
    sizes: Vec<usize>,
    mode: SearchMode,
    tally: Tally,
) -> WitnessReport {
    let n = placement.n();
    let counterexample = tally.counterexample.map(|(sigma, tau)| {
        let mut image: Vec<usize> = sigma.clone();
        image.extend(tau.iter().map(|&y| n + y));
        let a = sigma.iter().enumerate().filter(|&(i, &x)| i == x).count();
        let b = tau.iter().enumerate().filter(|&(j, &y)| j == y).count();
        Counterexample { psi: BipartiteAutomorphism::from_slots(n, image).expect("block map"), fixed: (a, b) }
    });
    let forced = if tally.admissible == 0 {
        (n, n)
    } else {
        let mask = tally.forced;
        ((mask & ((1 << n) - 1)).count_ones() as usize, (mask >> n).count_ones() as usize)
    };
    let corollary_edge_free = edge_is_free(placement, edges[0]);
    let passed = counterexample.is_none() && (route == Route::Lemma || corollary_edge_free);
    WitnessReport {
        target,
        route,
        orbit_group_order: subgroup_order,
        plan,
        designated: edges.iter().map(|&(i, j)| (VertexId::v(i + 1), VertexId::w(j + 1))).collect(),
        orbit_sizes: sizes,
        mode,
        admissible: tally.admissible,
        forced,
        counterexample,
        corollary_edge_free,
        passed,
    }
}

/// Checks the witness edges named in the construction for `target`.
pub fn subgroup_witness(placement: &Placement, target: GroupSpec, mode: SearchMode) -> Result<WitnessReport, EdgeError> {
    check_limit(placement.n(), mode)?;
    let plan = witness_plan(placement, target)?;
    let action = induced_action(placement)?;
    let edges: Vec<(usize, usize)> = plan.edges.iter().map(|&e| slot_pair(placement, e)).collect();
    let (tally, sizes) = evaluate(placement, &action, &plan.subgroup, &edges, mode);
    let r = report(placement, target, plan.route, plan.description, plan.subgroup.len(), &edges, sizes, mode, tally);
    if r.passed {
        Ok(r)
    } else {
        Err(EdgeError::WitnessFailed(Box::new(r)))
    }
}

/// Searches for any witness: every edge orbit of the chosen group is designated, and
/// each orbit in turn supplies e₁. Returns the first passing report, or the last
/// failing one when none passes.
pub fn search_witness(placement: &Placement, target: GroupSpec, mode: SearchMode) -> Result<WitnessReport, EdgeError> {
    check_limit(placement.n(), mode)?;
    let family = placement.params.family;
    let full = target_kind(family, target)
        .ok_or_else(|| EdgeError::InvalidTarget { target: target.to_string(), family: family.to_string() })?;
    let action = induced_action(placement)?;
    let n = placement.n();
    let subgroup = if full { placement.group.elements().to_vec() } else { rotation_subgroup(placement) };
    let perms: Vec<&BipartiteAutomorphism> = subgroup.iter().map(|&m| action.get(m).unwrap()).collect();
    let ids = edge_orbit_ids(n, &perms);
    let orbits = ids.iter().copied().max().map_or(0, |m| m + 1);
    let reps: Vec<(usize, usize)> = (0..orbits)
        .map(|o| {
            let e = ids.iter().position(|&x| x == o).unwrap();
            (e / n, e % n)
        })
        .collect();
    let mut last = None;
    for &e1 in &reps {
        let mut edges = vec![e1];
        edges.extend(reps.iter().copied().filter(|&e| e != e1));
        let (tally, sizes) = evaluate(placement, &action, &subgroup, &edges, mode);
        let r = report(
            placement,
            target,
            Route::Lemma,
            format!("all {orbits} edge orbits designated"),
            subgroup.len(),
            &edges,
            sizes,
            mode,
            tally,
        );
        if r.passed {
            return Ok(r);
        }
        last = Some(r);
    }
    match last {
        Some(r) => Err(EdgeError::WitnessFailed(Box::new(r))),
        None => Err(EdgeError::NoWitnessPlan("no edges".to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_placement, FamilyParams, Role};
    use crate::motion::generate;

    fn placement(family: Family, n: u64) -> Placement {
        build_placement(FamilyParams::new(family, n)).unwrap()
    }

    #[test]
    fn embeddability_table() {
        assert_eq!(circle_embeddable(3, 1), Embeddable::No);
        assert_eq!(circle_embeddable(2, 2), Embeddable::FullCircleOnly);
        assert_eq!(circle_embeddable(1, 2), Embeddable::ProperSubset);
        assert_eq!(circle_embeddable(0, 7), Embeddable::ProperSubset);
        assert_eq!(circle_embeddable(2, 3), Embeddable::No);
    }

    #[test]
    fn arc_interior() {
        let t = |p, q| Turn::new(p, q);
        let arc = Arc { v: VertexId::v(1), w: VertexId::w(1), start: t(7, 8), end: t(1, 8) };
        assert!(arc.interior_contains(Turn::ZERO));
        assert!(!arc.interior_contains(t(1, 8)));
        assert!(!arc.interior_contains(t(1, 2)));
        let other = Arc { start: t(1, 8), end: t(3, 8), ..arc };
        assert!(!arc.interiors_meet(&other));
        assert!(arc.shares_endpoint(&other));
    }

    #[test]
    fn g1_passes() {
        let report = check_conditions(&placement(Family::G1 { m: 4 }, 5));
        assert!(report.passed(), "{report:?}");
        assert!(report.condition5_paths_agree);
    }

    #[test]
    fn j2_y_pairs_fixed_by_y_rotations() {
        let p = placement(Family::J2 { s: 4 }, 6);
        let report = check_conditions(&p);
        assert!(report.passed(), "{report:?}");
        let arcs = report.arcs.unwrap();
        assert_eq!(arcs.circles.len(), 1);
        assert_eq!(arcs.circles[0].circle, FixedSet::CircleY);
        assert_eq!(arcs.circles[0].arcs.len(), 4);
    }

    #[test]
    fn crowded_circle_fails_condition_two() {
        let group = generate(&Family::G1 { m: 3 }.generators()).unwrap();
        let t = |p| Turn::new(p, 16);
        let v = [1, 3, 5].map(|k| (Point::OnX(t(k)), Role::CircleX)).to_vec();
        let w = [-1, -3, -5].map(|k| (Point::OnX(t(k)), Role::CircleX)).to_vec();
        let params = FamilyParams::new(Family::G1 { m: 3 }, 3);
        let p = Placement::from_points(params, group, v, w).unwrap();
        let report = check_conditions(&p);
        assert!(report.conditions[0].passed());
        assert!(!report.conditions[1].passed());
        assert_eq!(report.fixed_pairs, 9);
    }

    #[test]
    fn g1_m3_witness() {
        let p = placement(Family::G1 { m: 3 }, 3);
        let r = subgroup_witness(&p, GroupSpec::Dihedral { m: 3 }, SearchMode::Exhaustive).unwrap();
        assert!(r.forced.0 >= 1 && r.forced.1 >= 3, "{r:?}");
        let c = subgroup_witness(&p, GroupSpec::Cyclic { m: 3 }, SearchMode::Restricted).unwrap();
        assert_eq!(c.route, Route::Corollary);
        assert!(c.corollary_edge_free);
    }

    #[test]
    fn modes_agree_on_g1_m2() {
        let p = placement(Family::G1 { m: 2 }, 4);
        let a = subgroup_witness(&p, GroupSpec::Dihedral { m: 2 }, SearchMode::Exhaustive).unwrap();
        let b = subgroup_witness(&p, GroupSpec::Dihedral { m: 2 }, SearchMode::Restricted).unwrap();
        assert_eq!((a.admissible, a.forced), (b.admissible, b.forced));
        assert!(a.forced.0 + a.forced.1 >= 5, "{a:?}");
    }

    #[test]
    fn wrong_target() {
        let p = placement(Family::G1 { m: 3 }, 3);
        let err = subgroup_witness(&p, GroupSpec::Dihedral { m: 4 }, SearchMode::Restricted).unwrap_err();
        assert!(matches!(err, EdgeError::InvalidTarget { .. }));
    }
}
