//! Exact rational model of the SO(4) motions used by the constructions.
//!
//! `S³` is the unit sphere in `ℂ²`. The motion `(a, b, 0)` multiplies the
//! coordinates by `e^{2πia}` and `e^{2πib}`; `(a, b, 1)` first conjugates both
//! coordinates. `X = {z₂ = 0}`, `Y = {z₁ = 0}`, and for turns `(α, β)` the axis
//! circle `{(x·e^{iπα}, y·e^{iπβ}) : x, y ∈ ℝ}` is the fixed set of `(α, β, 1)`.
//! The circle `Z` is `AxisCircle(0, 0)`.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_SIZE_BOUND: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MotionError {
    #[error("group closure exceeded {0} elements")]
    SizeBoundExceeded(usize),
    #[error("cannot parse `{0}`")]
    Parse(String),
}

/// A rational angle measured in full revolutions, reduced into `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Turn {
    num: u64,
    den: u64,
}

impl Turn {
    pub const ZERO: Turn = Turn { num: 0, den: 1 };
    pub const HALF: Turn = Turn { num: 1, den: 2 };
    pub const QUARTER: Turn = Turn { num: 1, den: 4 };

    /// `p/q` reduced mod 1. Panics if `q == 0`.
    pub fn new(p: i64, q: u64) -> Turn {
        assert!(q > 0, "turn denominator must be positive");
        let q = q as i128;
        let p = (p as i128).rem_euclid(q);
        let g = p.gcd(&q);
        Turn { num: (p / g) as u64, den: (q / g) as u64 }
    }

    pub fn numer(self) -> u64 {
        self.num
    }

    pub fn denom(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// `k·t` mod 1.
    pub fn times(self, k: i64) -> Turn {
        let p = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        Turn::new(p as i64, self.den)
    }

    /// The representative of `t/2` in `[0, 1/2)`.
    pub fn half(self) -> Turn {
        Turn::new(self.num as i64, 2 * self.den)
    }

    /// Additive order: the denominator.
    pub fn order(self) -> u64 {
        self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn in_open(self, lo: Turn, hi: Turn) -> bool {
        lo < self && self < hi
    }
}

impl Default for Turn {
    fn default() -> Turn {
        Turn::ZERO
    }
}

impl Ord for Turn {
    fn cmp(&self, other: &Turn) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Turn {
    fn partial_cmp(&self, other: &Turn) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Turn {
    type Output = Turn;
    fn add(self, rhs: Turn) -> Turn {
        let den = self.den.lcm(&rhs.den);
        let p = self.num as u128 * (den / self.den) as u128 + rhs.num as u128 * (den / rhs.den) as u128;
        Turn::new((p % den as u128) as i64, den)
    }
}

impl Neg for Turn {
    type Output = Turn;
    fn neg(self) -> Turn {
        Turn::new(-(self.num as i64), self.den)
    }
}

impl Sub for Turn {
    type Output = Turn;
    fn sub(self, rhs: Turn) -> Turn {
        self + (-rhs)
    }
}

impl fmt::Debug for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Turn {
    type Err = MotionError;

    fn from_str(s: &str) -> Result<Turn, MotionError> {
        let bad = || MotionError::Parse(s.to_string());
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s, "1"),
        };
        let p: i64 = p.parse().map_err(|_| bad())?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Ok(Turn::new(p, q))
    }
}

impl Serialize for Turn {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `(a, b, ε)`: rotate plane A by `a` and plane B by `b`, after conjugation when `flagged`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Motion {
    pub a: Turn,
    pub b: Turn,
    pub flagged: bool,
}

impl Motion {
    pub const IDENTITY: Motion = Motion { a: Turn::ZERO, b: Turn::ZERO, flagged: false };
    /// Rotation by π about the plane C.
    pub const PHI: Motion = Motion { a: Turn::ZERO, b: Turn::ZERO, flagged: true };

    pub fn new(a: Turn, b: Turn, flagged: bool) -> Motion {
        Motion { a, b, flagged }
    }

    pub fn rot(a: Turn, b: Turn) -> Motion {
        Motion { a, b, flagged: false }
    }

    /// `self ⋄ other`: apply `other` first.
    pub fn compose(self, other: Motion) -> Motion {
        if self.flagged {
            Motion { a: self.a - other.a, b: self.b - other.b, flagged: !other.flagged }
        } else {
            Motion { a: self.a + other.a, b: self.b + other.b, flagged: other.flagged }
        }
    }

    pub fn inverse(self) -> Motion {
        if self.flagged {
            self
        } else {
            Motion { a: -self.a, b: -self.b, flagged: false }
        }
    }

    pub fn pow(self, k: i64) -> Motion {
        if self.flagged {
            if k.rem_euclid(2) == 0 {
                Motion::IDENTITY
            } else {
                self
            }
        } else {
            Motion { a: self.a.times(k), b: self.b.times(k), flagged: false }
        }
    }

    pub fn is_identity(self) -> bool {
        self == Motion::IDENTITY
    }

    pub fn order(self) -> u64 {
        if self.flagged {
            2
        } else {
            self.a.order().lcm(&self.b.order())
        }
    }

    pub fn fixed_set(self) -> FixedSet {
        if self.flagged {
            return FixedSet::AxisCircle { a: self.a, b: self.b };
        }
        match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => FixedSet::All,
            (false, true) => FixedSet::CircleY,
            (true, false) => FixedSet::CircleX,
            (false, false) => FixedSet::Empty,
        }
    }

    pub fn act(self, p: &Point) -> Point {
        act(self, p)
    }
}

impl fmt::Debug for Motion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Motion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rot(a={}, b={}, phi={})", self.a, self.b, self.flagged as u8)
    }
}

impl FromStr for Motion {
    type Err = MotionError;

    /// Parses `rot(a=p/q, b=p'/q', phi=0|1)`; omitted fields default to zero.
    fn from_str(s: &str) -> Result<Motion, MotionError> {
        let bad = || MotionError::Parse(s.to_string());
        let body = s
            .trim()
            .strip_prefix("rot(")
            .and_then(|rest| rest.strip_suffix(')'))
            .ok_or_else(bad)?;
        let mut m = Motion::IDENTITY;
        let mut seen = BTreeSet::new();
        for field in body.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field.split_once('=').ok_or_else(bad)?;
            let key = key.trim();
            if !seen.insert(key.to_string()) {
                return Err(bad());
            }
            match key {
                "a" => m.a = value.parse()?,
                "b" => m.b = value.parse()?,
                "phi" => {
                    m.flagged = match value.trim() {
                        "0" => false,
                        "1" => true,
                        _ => return Err(bad()),
                    }
                }
                _ => return Err(bad()),
            }
        }
        Ok(m)
    }
}

impl Serialize for Motion {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Fixed-point set of a motion. Circle kinds double as the circles vertices are placed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind")]
pub enum FixedSet {
    All,
    Empty,
    CircleX,
    CircleY,
    AxisCircle { a: Turn, b: Turn },
}

impl FixedSet {
    pub const Z: FixedSet = FixedSet::AxisCircle { a: Turn::ZERO, b: Turn::ZERO };

    pub fn is_circle(self) -> bool {
        !matches!(self, FixedSet::All | FixedSet::Empty)
    }

    /// The image `m(self)`.
    pub fn image(self, m: Motion) -> FixedSet {
        match self {
            FixedSet::AxisCircle { a, b } => {
                if m.flagged {
                    FixedSet::AxisCircle { a: m.a.times(2) - a, b: m.b.times(2) - b }
                } else {
                    FixedSet::AxisCircle { a: a + m.a.times(2), b: b + m.b.times(2) }
                }
            }
            other => other,
        }
    }

    pub fn contains(self, p: &Point) -> bool {
        match self {
            FixedSet::All => true,
            FixedSet::Empty => false,
            circle => circle_param(circle, p).is_some(),
        }
    }

    /// Points where two distinct circles meet, or `None` if they coincide or one is not a circle.
    pub fn intersection(self, other: FixedSet) -> Option<Vec<Point>> {
        use FixedSet::*;
        if self == other || !self.is_circle() || !other.is_circle() {
            return None;
        }
        let on_x = |a: Turn| vec![Point::OnX(a.half()), Point::OnX(a.half() + Turn::HALF)];
        let on_y = |b: Turn| vec![Point::OnY(b.half()), Point::OnY(b.half() + Turn::HALF)];
        Some(match (self, other) {
            (CircleX, CircleY) | (CircleY, CircleX) => vec![],
            (CircleX, AxisCircle { a, .. }) | (AxisCircle { a, .. }, CircleX) => on_x(a),
            (CircleY, AxisCircle { b, .. }) | (AxisCircle { b, .. }, CircleY) => on_y(b),
            (AxisCircle { a, b }, AxisCircle { a: a2, b: b2 }) => {
                if a == a2 {
                    on_x(a)
                } else if b == b2 {
                    on_y(b)
                } else {
                    vec![]
                }
            }
            _ => unreachable!(),
        })
    }
}

impl fmt::Display for FixedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedSet::All => write!(f, "all"),
            FixedSet::Empty => write!(f, "empty"),
            FixedSet::CircleX => write!(f, "X"),
            FixedSet::CircleY => write!(f, "Y"),
            FixedSet::AxisCircle { a, b } if a.is_zero() && b.is_zero() => write!(f, "Z"),
            FixedSet::AxisCircle { a, b } => write!(f, "axis({a}, {b})"),
        }
    }
}

/// A symbolic point of `S³`.
///
/// `Torus` is the point `(cos 2πρ · e^{2πiθa}, sin 2πρ · e^{2πiθb})` with
/// `0 < ρ < 1/4`; each such point is on exactly one axis circle, which is how
/// images of `Z` are represented. `Free` points are labels in an orbit on which
/// the group acts freely; they lie on no fixed circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind")]
pub enum Point {
    OnX { t: Turn },
    OnY { t: Turn },
    Torus { rho: Turn, theta_a: Turn, theta_b: Turn },
    Free { orbit: usize, rep: Motion },
}

#[allow(non_snake_case)]
impl Point {
    pub fn OnX(t: Turn) -> Point {
        Point::OnX { t }
    }

    pub fn OnY(t: Turn) -> Point {
        Point::OnY { t }
    }

    pub fn free(orbit: usize, rep: Motion) -> Point {
        Point::Free { orbit, rep }
    }

    /// The point with parameter `u` on `AxisCircle(a, b)`: `(cos 2πu · e^{iπa}, sin 2πu · e^{iπb})`.
    ///
    /// `a` and `b` are read as their representatives in `[0, 1)`.
    pub fn on_axis(a: Turn, b: Turn, u: Turn) -> Point {
        let quarter = Turn::QUARTER;
        let half = Turn::HALF;
        if u.is_zero() {
            return Point::OnX(a.half());
        }
        if u == half {
            return Point::OnX(a.half() + half);
        }
        if u == quarter {
            return Point::OnY(b.half());
        }
        if u == quarter.times(3) {
            return Point::OnY(b.half() + half);
        }
        let cos_neg = u.in_open(quarter, quarter.times(3));
        let sin_neg = u > half;
        let folded = if u < half { u } else { u - half };
        let rho = if folded < quarter { folded } else { half - folded };
        Point::Torus {
            rho,
            theta_a: a.half() + if cos_neg { half } else { Turn::ZERO },
            theta_b: b.half() + if sin_neg { half } else { Turn::ZERO },
        }
    }

    /// The point `(cos 2πt, sin 2πt)` of `Z`.
    pub fn on_z(t: Turn) -> Point {
        Point::on_axis(Turn::ZERO, Turn::ZERO, t)
    }

    /// `rep` applied to the point of `Z` with parameter `t`.
    pub fn z_orbit(t: Turn, rep: Motion) -> Point {
        act(rep, &Point::on_z(t))
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Point::Free { .. })
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::OnX { t } => write!(f, "X({t})"),
            Point::OnY { t } => write!(f, "Y({t})"),
            Point::Torus { rho, theta_a, theta_b } => write!(f, "T({rho}; {theta_a}, {theta_b})"),
            Point::Free { orbit, rep } => write!(f, "free{orbit}[{rep}]"),
        }
    }
}

pub fn compose(m1: Motion, m2: Motion) -> Motion {
    m1.compose(m2)
}

pub fn act(m: Motion, p: &Point) -> Point {
    match *p {
        Point::OnX { t } => Point::OnX(if m.flagged { m.a - t } else { m.a + t }),
        Point::OnY { t } => Point::OnY(if m.flagged { m.b - t } else { m.b + t }),
        Point::Torus { rho, theta_a, theta_b } => {
            if m.flagged {
                Point::Torus { rho, theta_a: m.a - theta_a, theta_b: m.b - theta_b }
            } else {
                Point::Torus { rho, theta_a: m.a + theta_a, theta_b: m.b + theta_b }
            }
        }
        Point::Free { orbit, rep } => Point::Free { orbit, rep: m.compose(rep) },
    }
}

/// Parameter of `p` on the circle `c`, or `None` if `p ∉ c`.
///
/// `X` and `Y` use the `t` of `OnX`/`OnY`; axis circles use the `u` of [`Point::on_axis`].
pub fn circle_param(c: FixedSet, p: &Point) -> Option<Turn> {
    let half = Turn::HALF;
    let quarter = Turn::QUARTER;
    match (c, *p) {
        (FixedSet::CircleX, Point::OnX { t }) | (FixedSet::CircleY, Point::OnY { t }) => Some(t),
        (FixedSet::AxisCircle { a, .. }, Point::OnX { t }) => {
            if t == a.half() {
                Some(Turn::ZERO)
            } else if t == a.half() + half {
                Some(half)
            } else {
                None
            }
        }
        (FixedSet::AxisCircle { b, .. }, Point::OnY { t }) => {
            if t == b.half() {
                Some(quarter)
            } else if t == b.half() + half {
                Some(quarter.times(3))
            } else {
                None
            }
        }
        (FixedSet::AxisCircle { a, b }, Point::Torus { rho, theta_a, theta_b }) => {
            if theta_a.times(2) != a || theta_b.times(2) != b {
                return None;
            }
            let cos_pos = theta_a == a.half();
            let sin_pos = theta_b == b.half();
            Some(match (cos_pos, sin_pos) {
                (true, true) => rho,
                (false, true) => half - rho,
                (false, false) => half + rho,
                (true, false) => -rho,
            })
        }
        _ => None,
    }
}

/// A finite group of motions, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MotionGroup {
    generators: Vec<(String, Motion)>,
    elements: Vec<Motion>,
}

pub fn generate(generators: &[(&str, Motion)]) -> Result<MotionGroup, MotionError> {
    generate_bounded(generators, DEFAULT_SIZE_BOUND)
}

pub fn generate_bounded(generators: &[(&str, Motion)], bound: usize) -> Result<MotionGroup, MotionError> {
    let mut seen = BTreeSet::from([Motion::IDENTITY]);
    let mut queue = VecDeque::from([Motion::IDENTITY]);
    while let Some(x) = queue.pop_front() {
        for &(_, g) in generators {
            let y = g.compose(x);
            if seen.insert(y) {
                if seen.len() > bound {
                    return Err(MotionError::SizeBoundExceeded(bound));
                }
                queue.push_back(y);
            }
        }
    }
    Ok(MotionGroup {
        generators: generators.iter().map(|(name, g)| (name.to_string(), *g)).collect(),
        elements: seen.into_iter().collect(),
    })
}

impl MotionGroup {
    pub fn trivial() -> MotionGroup {
        MotionGroup { generators: vec![], elements: vec![Motion::IDENTITY] }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Motion] {
        &self.elements
    }

    pub fn generators(&self) -> &[(String, Motion)] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<Motion> {
        self.generators.iter().find(|(n, _)| n == name).map(|&(_, g)| g)
    }

    pub fn contains(&self, m: Motion) -> bool {
        self.elements.binary_search(&m).is_ok()
    }

    /// Position of `m` in the sorted element list.
    pub fn index_of(&self, m: Motion) -> Option<usize> {
        self.elements.binary_search(&m).ok()
    }

    pub fn stabilizer(&self, p: &Point) -> Vec<Motion> {
        stabilizer(self, p)
    }

    /// Distinct images of `p`, sorted.
    pub fn orbit(&self, p: &Point) -> Vec<Point> {
        let set: BTreeSet<Point> = self.elements.iter().map(|&m| act(m, p)).collect();
        set.into_iter().collect()
    }

    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|&x| {
            self.contains(x.inverse()) && self.elements.iter().all(|&y| self.contains(x.compose(y)))
        })
    }
}

pub fn stabilizer(group: &MotionGroup, p: &Point) -> Vec<Motion> {
    group.elements.iter().copied().filter(|&m| act(m, p) == *p).collect()
}
