//! The five named motion groups and their vertex placements.
//!
//! | family | generators | order |
//! |---|---|---|
//! | G1(m) | `g = (0, 1/m, 0)`, `φ` | 2m |
//! | G2(m) | `h = (1/m, 2/m, 0)`, `φ` | 2m |
//! | G3(m) | `j = (1/m, 1/4, 0)`, `φ` | 2m |
//! | J1(r, s) | `g = (0, 1/r, 0)`, `h = (1/s, 0, 0)`, `φ` | 2rs |
//! | J2(s) | `g = (0, 1/2, 0)`, `h = (1/s, 1/4, 0)`, `φ` | 4s |
//!
//! Every placement is assembled from orbits: free orbits, orbits of points on
//! `X` or `Y`, and orbits of a point of `Z` off `X ∪ Y`. Points the
//! construction only describes as generic are taken from the sequence
//! `(2i + 1) / (8 · lcm(4, |G|))` and accepted once their stabilizer and orbit
//! have been checked.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::bipartite::{maps_orbits_to_orbits, BipartiteAutomorphism, BipartiteError, Part, VertexId};
use crate::motion::{act, generate, Motion, MotionError, MotionGroup, Point, Turn};

const CANDIDATE_LIMIT: i64 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("n = {n} does not satisfy the congruence required by {family}: {required}")]
    CongruenceMismatch { family: String, n: u64, required: String },
    #[error("no generic base point found: {0}")]
    PlacementDegenerate(String),
    #[error("placement is not invariant: {0}")]
    NotInvariant(String),
    #[error("two vertices share the point {0}")]
    NotInjective(String),
    #[error("motion {0} does not induce an automorphism: {1}")]
    NotAutomorphism(Motion, BipartiteError),
    #[error("motions {0} and {1} induce the same permutation")]
    NotFaithful(Motion, Motion),
    #[error("presentation relation fails: {0}")]
    RelationFailed(String),
    #[error(transparent)]
    Motion(#[from] MotionError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    G1 { m: u64 },
    G2 { m: u64 },
    G3 { m: u64 },
    J1 { r: u64, s: u64 },
    J2 { s: u64 },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::G1 { m } => write!(f, "G1(m={m})"),
            Family::G2 { m } => write!(f, "G2(m={m})"),
            Family::G3 { m } => write!(f, "G3(m={m})"),
            Family::J1 { r, s } => write!(f, "J1(r={r}, s={s})"),
            Family::J2 { s } => write!(f, "J2(s={s})"),
        }
    }
}

impl Family {
    pub fn group_order(self) -> u64 {
        match self {
            Family::G1 { m } | Family::G2 { m } | Family::G3 { m } => 2 * m,
            Family::J1 { r, s } => 2 * r * s,
            Family::J2 { s } => 4 * s,
        }
    }

    fn validate(self) -> Result<(), FamilyError> {
        let bad = |msg: String| Err(FamilyError::InvalidParams(msg));
        match self {
            Family::G1 { m } if m < 2 => bad(format!("G1 needs m ≥ 2, got {m}")),
            Family::G2 { m } if m < 2 || m % 2 != 0 => bad(format!("G2 needs m even, got {m}")),
            Family::G3 { m } if m < 4 || m % 4 != 0 => bad(format!("G3 needs 4 | m, got {m}")),
            Family::J1 { r, s } if r < 2 || s < 3 || s % r != 0 => {
                bad(format!("J1 needs r ≥ 2, s ≥ 3 and r | s, got r = {r}, s = {s}"))
            }
            Family::J2 { s } if s < 4 || s % 4 != 0 => bad(format!("J2 needs 4 | s, got {s}")),
            _ => Ok(()),
        }
    }

    pub fn generators(self) -> Vec<(&'static str, Motion)> {
        let t = |p: u64, q: u64| Turn::new(p as i64, q);
        let mut gens = match self {
            Family::G1 { m } => vec![("g", Motion::rot(Turn::ZERO, t(1, m)))],
            Family::G2 { m } => vec![("h", Motion::rot(t(1, m), t(2, m)))],
            Family::G3 { m } => vec![("j", Motion::rot(t(1, m), Turn::QUARTER))],
            Family::J1 { r, s } => {
                vec![("g", Motion::rot(Turn::ZERO, t(1, r))), ("h", Motion::rot(t(1, s), Turn::ZERO))]
            }
            Family::J2 { s } => vec![("g", Motion::rot(Turn::ZERO, Turn::HALF)), ("h", Motion::rot(t(1, s), Turn::QUARTER))],
        };
        gens.push(("phi", Motion::PHI));
        gens
    }

    /// The cyclic or abelian subgroup left after dropping `φ`.
    pub fn rotation_generators(self) -> Vec<(&'static str, Motion)> {
        self.generators().into_iter().filter(|(name, _)| *name != "phi").collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyParams {
    pub family: Family,
    pub n: u64,
}

impl FamilyParams {
    pub fn new(family: Family, n: u64) -> Self {
        FamilyParams { family, n }
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} with n = {}", self.family, self.n)
    }
}

/// Builds the group and verifies its order and presentation.
pub fn build_group(family: Family) -> Result<MotionGroup, FamilyError> {
    family.validate()?;
    let gens = family.generators();
    let group = generate(&gens)?;
    if group.order() as u64 != family.group_order() {
        return Err(FamilyError::RelationFailed(format!(
            "{family} has order {}, expected {}",
            group.order(),
            family.group_order()
        )));
    }
    let expected_orders: Vec<(&str, u64)> = match family {
        Family::G1 { m } | Family::G2 { m } | Family::G3 { m } => vec![("rot", m)],
        Family::J1 { r, s } => vec![("g", r), ("h", s)],
        Family::J2 { s } => vec![("g", 2), ("h", s)],
    };
    let rotations = family.rotation_generators();
    for (i, &(name, ord)) in expected_orders.iter().enumerate() {
        let actual = rotations[i].1.order();
        if actual != ord {
            return Err(FamilyError::RelationFailed(format!("generator {name} has order {actual}, expected {ord}")));
        }
    }
    for &x in group.elements().iter().filter(|x| !x.flagged) {
        if Motion::PHI.compose(x).compose(Motion::PHI) != x.inverse() {
            return Err(FamilyError::RelationFailed(format!("φ {x} φ ≠ {x}⁻¹")));
        }
    }
    if let [(_, g), (_, h)] = rotations[..] {
        if g.compose(h) != h.compose(g) {
            return Err(FamilyError::RelationFailed("gh ≠ hg".to_string()));
        }
    }
    Ok(group)
}

/// Role of a vertex in the construction, kept for reports and witness plans.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Free,
    CircleX,
    CircleY,
    ZOrbit,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlacedVertex {
    pub vertex: VertexId,
    pub point: Point,
    pub role: Role,
}

#[derive(Debug, Clone)]
pub struct Placement {
    pub params: FamilyParams,
    pub group: MotionGroup,
    vertices: Vec<PlacedVertex>,
    slot_of: BTreeMap<Point, usize>,
    /// Base points of the construction by name: `p0`, `p1`, … for free orbits, `q`/`z` on Z, `x`, `y`.
    pub anchors: BTreeMap<String, Point>,
}

impl Placement {
    pub fn n(&self) -> usize {
        self.params.n as usize
    }

    /// Vertices in slot order `v1..vn, w1..wn`.
    pub fn vertices(&self) -> &[PlacedVertex] {
        &self.vertices
    }

    pub fn point(&self, v: VertexId) -> Point {
        self.vertices[v.slot(self.n())].point
    }

    pub fn point_at(&self, slot: usize) -> Point {
        self.vertices[slot].point
    }

    pub fn vertex_at(&self, p: &Point) -> Option<VertexId> {
        self.slot_of.get(p).map(|&s| VertexId::from_slot(s, self.n()))
    }

    pub fn slot_at(&self, p: &Point) -> Option<usize> {
        self.slot_of.get(p).copied()
    }

    /// Builds a placement from explicit vertex lists and checks its invariants.
    pub fn from_points(
        params: FamilyParams,
        group: MotionGroup,
        v_points: Vec<(Point, Role)>,
        w_points: Vec<(Point, Role)>,
    ) -> Result<Placement, FamilyError> {
        let n = params.n as usize;
        if v_points.len() != n || w_points.len() != n {
            return Err(FamilyError::NotInvariant(format!(
                "part sizes {} and {}, expected {n} each",
                v_points.len(),
                w_points.len()
            )));
        }
        let mut vertices = Vec::with_capacity(2 * n);
        let mut slot_of = BTreeMap::new();
        for (part, list) in [(Part::V, v_points), (Part::W, w_points)] {
            for (i, (point, role)) in list.into_iter().enumerate() {
                let vertex = VertexId { part, index: i + 1 };
                if slot_of.insert(point, vertex.slot(n)).is_some() {
                    return Err(FamilyError::NotInjective(point.to_string()));
                }
                vertices.push(PlacedVertex { vertex, point, role });
            }
        }
        let placement = Placement { params, group, vertices, slot_of, anchors: BTreeMap::new() };
        for &m in placement.group.elements() {
            for pv in &placement.vertices {
                let image = act(m, &pv.point);
                if !placement.slot_of.contains_key(&image) {
                    return Err(FamilyError::NotInvariant(format!("{m} maps {} to {image}", pv.vertex)));
                }
            }
        }
        Ok(placement)
    }

    pub fn report(&self) -> PlacementReport {
        PlacementReport {
            family: self.params.family,
            n: self.params.n,
            group_order: self.group.order(),
            generators: self.group.generators().iter().map(|(name, g)| (name.clone(), *g)).collect(),
            vertices: self
                .vertices
                .iter()
                .map(|pv| VertexReport {
                    vertex: pv.vertex,
                    point: pv.point.to_string(),
                    role: pv.role,
                    stabilizer_order: self.group.stabilizer(&pv.point).len(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VertexReport {
    pub vertex: VertexId,
    pub point: String,
    pub role: Role,
    pub stabilizer_order: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PlacementReport {
    pub family: Family,
    pub n: u64,
    pub group_order: usize,
    pub generators: BTreeMap<String, Motion>,
    pub vertices: Vec<VertexReport>,
}

fn mismatch(params: FamilyParams, required: &str) -> FamilyError {
    FamilyError::CongruenceMismatch { family: params.family.to_string(), n: params.n, required: required.to_string() }
}

/// Accumulates orbits into the two parts while tracking every point already used.
struct Builder<'a> {
    group: &'a MotionGroup,
    v: Vec<(Point, Role)>,
    w: Vec<(Point, Role)>,
    used: BTreeMap<Point, ()>,
    anchors: BTreeMap<String, Point>,
    candidate_den: u64,
    next_candidate: i64,
}

impl<'a> Builder<'a> {
    fn new(group: &'a MotionGroup) -> Self {
        let den = 8 * (group.order() as u64).lcm(&4);
        Builder {
            group,
            v: vec![],
            w: vec![],
            used: BTreeMap::new(),
            anchors: BTreeMap::new(),
            candidate_den: den,
            next_candidate: 0,
        }
    }

    fn push(&mut self, part: Part, p: Point, role: Role) {
        self.used.insert(p, ());
        match part {
            Part::V => self.v.push((p, role)),
            Part::W => self.w.push((p, role)),
        }
    }

    /// Adds the orbit of `base`, each image `m(base)` going to `part_of(m)`. Images are
    /// visited in the group's element order and repeated images are skipped.
    fn orbit(&mut self, base: Point, role: Role, part_of: impl Fn(Motion) -> Part) {
        let mut seen = BTreeMap::new();
        for &m in self.group.elements() {
            let p = act(m, &base);
            if seen.insert(p, ()).is_none() {
                self.push(part_of(m), p, role);
            }
        }
    }

    /// Next point `make(t)` from the candidate sequence whose stabilizer has the given order
    /// and whose orbit avoids every point used so far.
    fn generic(&mut self, what: &str, stabilizer_order: usize, make: impl Fn(Turn) -> Point) -> Result<Point, FamilyError> {
        while self.next_candidate < CANDIDATE_LIMIT {
            let t = Turn::new(2 * self.next_candidate + 1, self.candidate_den);
            self.next_candidate += 1;
            let p = make(t);
            if self.group.stabilizer(&p).len() != stabilizer_order {
                continue;
            }
            if self.group.orbit(&p).iter().any(|q| self.used.contains_key(q)) {
                continue;
            }
            return Ok(p);
        }
        Err(FamilyError::PlacementDegenerate(format!("{what}: {CANDIDATE_LIMIT} candidates exhausted")))
    }

    fn finish(self, params: FamilyParams) -> Result<Placement, FamilyError> {
        let anchors = self.anchors;
        let mut placement = Placement::from_points(params, self.group.clone(), self.v, self.w)?;
        placement.anchors = anchors;
        Ok(placement)
    }
}

fn free(orbit: usize) -> Point {
    Point::free(orbit, Motion::IDENTITY)
}

/// Exponent of `m` along a generator of a cyclic factor: `x·den mod den`.
fn exponent(x: Turn, den: u64) -> u64 {
    (x.numer() * (den / x.denom())) % den
}

pub fn build_placement(params: FamilyParams) -> Result<Placement, FamilyError> {
    let group = build_group(params.family)?;
    if params.n < 3 {
        return Err(FamilyError::InvalidParams(format!("n must be at least 3, got {}", params.n)));
    }
    let n = params.n;
    let mut b = Builder::new(&group);
    let t = |p: i64, q: u64| Turn::new(p, q);
    match params.family {
        Family::G1 { m } => {
            let eps = n % m;
            if eps > 2 {
                return Err(mismatch(params, "n ≡ 0, 1, 2 (mod m)"));
            }
            let g = group.generator("g").unwrap();
            for j in 0..(n / m) as usize {
                for i in 0..m as i64 {
                    b.push(Part::V, Point::free(j, g.pow(i)), Role::Free);
                }
                for i in 0..m as i64 {
                    b.push(Part::W, Point::free(j, g.pow(i).compose(Motion::PHI)), Role::Free);
                }
                b.anchors.insert(format!("p{j}"), free(j));
            }
            match eps {
                1 => {
                    b.push(Part::V, Point::OnX(t(1, 8)), Role::CircleX);
                    b.push(Part::W, Point::OnX(t(7, 8)), Role::CircleX);
                }
                2 => {
                    b.push(Part::V, Point::OnX(t(1, 8)), Role::CircleX);
                    b.push(Part::V, Point::OnX(t(5, 8)), Role::CircleX);
                    b.push(Part::W, Point::OnX(t(7, 8)), Role::CircleX);
                    b.push(Part::W, Point::OnX(t(3, 8)), Role::CircleX);
                }
                _ => {}
            }
            if eps > 0 {
                b.anchors.insert("x".to_string(), Point::OnX(t(1, 8)));
            }
        }
        Family::G2 { m } | Family::G3 { m } => {
            let is_g3 = matches!(params.family, Family::G3 { .. });
            let extra = if is_g3 { 2 } else { 0 };
            if n % m != (m / 2 + extra) % m {
                let req = if is_g3 { "n ≡ m/2 + 2 (mod m)" } else { "n ≡ m/2 (mod m)" };
                return Err(mismatch(params, req));
            }
            let rot = params.family.rotation_generators()[0].1;
            let power_parity = |x: Motion| {
                // x = φ^c rot^i: recover i from the B-angle (G2) or A-angle (G3, ord 1/m).
                let base = if x.flagged { Motion::PHI.compose(x) } else { x };
                let i = (0..m as i64).find(|&i| rot.pow(i) == base).expect("element of the group");
                if i % 2 == 0 {
                    Part::V
                } else {
                    Part::W
                }
            };
            let blocks = (n - m / 2 - extra) / m;
            for j in 0..blocks as usize {
                b.orbit(free(j), Role::Free, power_parity);
                b.anchors.insert(format!("p{j}"), free(j));
            }
            if is_g3 {
                for k in 0..4 {
                    b.used.insert(Point::OnY(t(k, 4)), ());
                }
            }
            let q = b.generic("point of Z off X ∪ Y", 2, Point::on_z)?;
            b.anchors.insert("q".to_string(), q);
            for i in 0..m as i64 {
                b.push(if i % 2 == 0 { Part::V } else { Part::W }, act(rot.pow(i), &q), Role::ZOrbit);
            }
            if is_g3 {
                for (k, part) in [(0, Part::V), (1, Part::W), (2, Part::V), (3, Part::W)] {
                    b.push(part, Point::OnY(t(k, 4)), Role::CircleY);
                }
                b.anchors.insert("y".to_string(), Point::OnY(Turn::ZERO));
            }
        }
        Family::J1 { r, s } => {
            if n % s == 0 {
                j1_multiple_of_s(&mut b, r, s, n)?;
            } else if r == 2 && n % (2 * s) == 2 {
                for j in 0..((n - 2) / (2 * s)) as usize {
                    b.orbit(free(j), Role::Free, |x| if x.flagged { Part::W } else { Part::V });
                    b.anchors.insert(format!("p{j}"), free(j));
                }
                for (k, part) in [(1, Part::V), (3, Part::W), (5, Part::V), (7, Part::W)] {
                    b.push(part, Point::OnY(t(k, 8)), Role::CircleY);
                }
                b.anchors.insert("y".to_string(), Point::OnY(t(1, 8)));
            } else if r == 4 && n % (2 * s) == 2 {
                let g_parity = |x: Motion| if exponent(x.b, r) % 2 == 0 { Part::V } else { Part::W };
                for j in 0..((n - 2) / (4 * s)) as usize {
                    b.orbit(free(j), Role::Free, g_parity);
                    b.anchors.insert(format!("p{j}"), free(j));
                }
                for k in 0..4 {
                    b.used.insert(Point::OnY(t(k, 4)), ());
                }
                if n % (4 * s) == 2 * s + 2 {
                    let z = b.generic("point of Z off X ∪ Y", 2, Point::on_z)?;
                    b.anchors.insert("z".to_string(), z);
                    for &x in group.elements().iter().filter(|x| !x.flagged) {
                        b.push(g_parity(x), act(x, &z), Role::ZOrbit);
                    }
                }
                for (k, part) in [(0, Part::V), (1, Part::W), (2, Part::V), (3, Part::W)] {
                    b.push(part, Point::OnY(t(k, 4)), Role::CircleY);
                }
                b.anchors.insert("y".to_string(), Point::OnY(Turn::ZERO));
            } else {
                let req = if r == 2 || r == 4 { "n ≡ 0 (mod s) or n ≡ 2 (mod 2s)" } else { "n ≡ 0 (mod s)" };
                return Err(mismatch(params, req));
            }
        }
        Family::J2 { s } => {
            if n % (2 * s) != (s + 2) % (2 * s) {
                return Err(mismatch(params, "n ≡ s + 2 (mod 2s)"));
            }
            let h_parity = |x: Motion| if exponent(x.a, s) % 2 == 0 { Part::V } else { Part::W };
            for j in 0..((n - s - 2) / (2 * s)) as usize {
                b.orbit(free(j), Role::Free, h_parity);
                b.anchors.insert(format!("p{j}"), free(j));
            }
            for k in 0..4 {
                b.used.insert(Point::OnY(t(k, 4)), ());
            }
            let q = b.generic("point of Z off X ∪ Y", 2, Point::on_z)?;
            b.anchors.insert("q".to_string(), q);
            for &x in group.elements().iter().filter(|x| !x.flagged) {
                b.push(h_parity(x), act(x, &q), Role::ZOrbit);
            }
            for (k, part) in [(0, Part::V), (2, Part::V), (1, Part::W), (3, Part::W)] {
                b.push(part, Point::OnY(t(k, 4)), Role::CircleY);
            }
            b.anchors.insert("y".to_string(), Point::OnY(Turn::ZERO));
        }
    }
    b.finish(params)
}

/// `n = 2krs + ls` with `0 ≤ l < 2r`.
fn j1_multiple_of_s(b: &mut Builder<'_>, r: u64, s: u64, n: u64) -> Result<(), FamilyError> {
    let group = b.group;
    let k = n / (2 * r * s);
    let l = (n % (2 * r * s)) / s;
    let m = s / r;
    // V and W free orbits, labeled by the same group element.
    for j in 0..k as usize {
        for &x in group.elements() {
            b.push(Part::V, Point::free(j, x), Role::Free);
        }
        b.anchors.insert(format!("p{j}"), free(j));
    }
    for j in 0..k as usize {
        for &x in group.elements() {
            b.push(Part::W, Point::free(k as usize + j, x), Role::Free);
        }
        b.anchors.insert(format!("q{j}"), free(k as usize + j));
    }
    let odd = l % 2 == 1;
    if odd {
        for p in group.orbit(&Point::OnX(Turn::ZERO)) {
            b.used.insert(p, ());
        }
        if m % 2 == 1 {
            for p in group.orbit(&Point::OnY(Turn::ZERO)) {
                b.used.insert(p, ());
            }
        }
    }
    let x_generic = l / 2;
    let y_generic = if odd { (l / 2) * m + m / 2 } else { l * m / 2 };
    for i in 0..x_generic {
        let p = b.generic("point of X off the flagged axes", r as usize, Point::OnX)?;
        b.anchors.insert(format!("x{i}"), p);
        b.orbit(p, Role::CircleX, |_| Part::V);
    }
    for i in 0..y_generic {
        let p = b.generic("point of Y off the flagged axes", s as usize, Point::OnY)?;
        b.anchors.insert(format!("y{i}"), p);
        b.orbit(p, Role::CircleY, |_| Part::W);
    }
    if odd {
        b.anchors.insert("x".to_string(), Point::OnX(Turn::ZERO));
        b.orbit(Point::OnX(Turn::ZERO), Role::CircleX, |_| Part::V);
        if m % 2 == 1 {
            b.anchors.insert("y".to_string(), Point::OnY(Turn::ZERO));
            b.orbit(Point::OnY(Turn::ZERO), Role::CircleY, |_| Part::W);
        }
    }
    Ok(())
}

/// The vertex permutation induced by each motion.
#[derive(Debug, Clone)]
pub struct InducedAction {
    pub map: Vec<(Motion, BipartiteAutomorphism)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InducedReport {
    pub group_order: usize,
    pub image_order: usize,
    pub faithful: bool,
    pub homomorphism: bool,
    pub relations: bool,
    pub orbits_lemma: bool,
    pub part_swapping_elements: usize,
}

impl InducedAction {
    pub fn get(&self, m: Motion) -> Option<&BipartiteAutomorphism> {
        self.map.iter().find(|(x, _)| *x == m).map(|(_, p)| p)
    }

    pub fn image_order(&self) -> usize {
        let mut perms: Vec<&BipartiteAutomorphism> = self.map.iter().map(|(_, p)| p).collect();
        perms.sort();
        perms.dedup();
        perms.len()
    }
}

/// Induced permutations, validated: every motion gives an automorphism and the action is faithful.
pub fn induced_action(placement: &Placement) -> Result<InducedAction, FamilyError> {
    let n = placement.n();
    let mut map = Vec::with_capacity(placement.group.order());
    for &m in placement.group.elements() {
        let image = (0..2 * n)
            .map(|slot| {
                let p = act(m, &placement.point_at(slot));
                placement.slot_at(&p).ok_or_else(|| FamilyError::NotInvariant(format!("{m} maps a vertex to {p}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let perm = BipartiteAutomorphism::from_slots(n, image).map_err(|e| FamilyError::NotAutomorphism(m, e))?;
        map.push((m, perm));
    }
    let mut by_perm: BTreeMap<&BipartiteAutomorphism, Motion> = BTreeMap::new();
    for (m, p) in &map {
        if let Some(&other) = by_perm.get(p) {
            return Err(FamilyError::NotFaithful(other, *m));
        }
        by_perm.insert(p, *m);
    }
    Ok(InducedAction { map })
}

/// Re-checks the induced action: homomorphism, presentation relations and the orbits lemma.
pub fn induced_report(placement: &Placement, action: &InducedAction) -> InducedReport {
    let group = &placement.group;
    let perm = |m: Motion| action.get(m).expect("group element");
    let homomorphism = group.elements().iter().all(|&x| {
        group.elements().iter().all(|&y| perm(x).compose(perm(y)).ok().as_ref() == Some(perm(x.compose(y))))
    });
    let phi = perm(Motion::PHI);
    let gens = placement.params.family.rotation_generators();
    let mut relations = gens.iter().all(|&(_, g)| perm(g).order() == g.order());
    relations &= group.elements().iter().filter(|x| !x.flagged).all(|&x| {
        let conj = phi.compose(perm(x)).and_then(|p| p.compose(phi));
        conj.ok().as_ref() == Some(&perm(x).inverse())
    });
    if let [(_, g), (_, h)] = gens[..] {
        relations &= perm(g).compose(perm(h)) == perm(h).compose(perm(g));
    }
    let mut orbits_lemma = true;
    for &x in group.elements() {
        for &y in group.elements() {
            if x.compose(y) == y.compose(x) {
                orbits_lemma &= maps_orbits_to_orbits(perm(x), perm(y));
            }
        }
    }
    InducedReport {
        group_order: group.order(),
        image_order: action.image_order(),
        faithful: action.image_order() == group.order(),
        homomorphism,
        relations,
        orbits_lemma,
        part_swapping_elements: action.map.iter().filter(|(_, p)| p.swaps_parts()).count(),
    }
}

/// The parameter grid used throughout the tests and acceptance checks.
pub fn acceptance_grid() -> Vec<FamilyParams> {
    use Family::*;
    [
        (G1 { m: 3 }, 3),
        (G1 { m: 4 }, 5),
        (G1 { m: 2 }, 4),
        (G1 { m: 5 }, 7),
        (G2 { m: 4 }, 6),
        (G2 { m: 6 }, 3),
        (G3 { m: 8 }, 6),
        (J1 { r: 2, s: 4 }, 8),
        (J1 { r: 2, s: 4 }, 10),
        (J1 { r: 4, s: 4 }, 10),
        (J2 { s: 4 }, 6),
    ]
    .into_iter()
    .map(|(family, n)| FamilyParams { family, n })
    .collect()
}
