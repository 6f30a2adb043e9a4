//! Floating-point cross-check of the motion algebra with 4×4 orthogonal matrices.
//!
//! Coordinates are `(Re z₁, Im z₁, Re z₂, Im z₂)`, so plane A is spanned by the
//! first two basis vectors and plane B by the last two.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix2, Matrix4};
use serde::Serialize;
use thiserror::Error;

use crate::motion::{FixedSet, Motion, MotionGroup};

pub type Matrix4f = Matrix4<f64>;

pub const COMPOSE_TOL: f64 = 1e-9;
pub const RANK_TOL: f64 = 1e-7;
pub const ISOCLINIC_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("singular value {0:e} is too close to the rank threshold {RANK_TOL:e}")]
    AmbiguousRank(f64),
}

fn rotation(turn: f64) -> Matrix2<f64> {
    let (s, c) = (TAU * turn).sin_cos();
    Matrix2::new(c, -s, s, c)
}

pub fn motion_to_matrix(m: Motion) -> Matrix4f {
    let mut ra = rotation(m.a.as_f64());
    let mut rb = rotation(m.b.as_f64());
    if m.flagged {
        let k = Matrix2::new(1.0, 0.0, 0.0, -1.0);
        ra *= k;
        rb *= k;
    }
    let mut out = Matrix4f::zeros();
    out.fixed_view_mut::<2, 2>(0, 0).copy_from(&ra);
    out.fixed_view_mut::<2, 2>(2, 2).copy_from(&rb);
    out
}

pub fn row_major(m: &Matrix4f) -> [f64; 16] {
    let mut out = [0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            out[4 * i + j] = m[(i, j)];
        }
    }
    out
}

fn max_abs(m: &Matrix4f) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// `max ‖M(x⋄y) − M(x)M(y)‖∞` over all pairs.
pub fn verify_homomorphism(group: &MotionGroup) -> f64 {
    let mats: Vec<Matrix4f> = group.elements().iter().map(|&x| motion_to_matrix(x)).collect();
    let mut worst: f64 = 0.0;
    for (i, &x) in group.elements().iter().enumerate() {
        for (j, &y) in group.elements().iter().enumerate() {
            let err = max_abs(&(motion_to_matrix(x.compose(y)) - mats[i] * mats[j]));
            worst = worst.max(err);
        }
    }
    worst
}

/// Deviation from orthogonality and from unit determinant.
pub fn orthogonality_error(m: &Matrix4f) -> f64 {
    max_abs(&(m.transpose() * m - Matrix4f::identity())).max((m.determinant() - 1.0).abs())
}

/// `dim ker(M − I)`.
pub fn fixed_space_dim(m: &Matrix4f) -> Result<usize, MatrixError> {
    let svd = (m - Matrix4f::identity()).svd(false, false);
    let mut dim = 0;
    for &sv in svd.singular_values.iter() {
        if sv > RANK_TOL / 10.0 && sv < RANK_TOL * 10.0 {
            return Err(MatrixError::AmbiguousRank(sv));
        }
        if sv < RANK_TOL {
            dim += 1;
        }
    }
    Ok(dim)
}

pub fn expected_fixed_dim(f: FixedSet) -> usize {
    match f {
        FixedSet::All => 4,
        FixedSet::Empty => 0,
        _ => 2,
    }
}

/// Largest entry outside the A and B diagonal blocks.
pub fn off_block_norm(m: &Matrix4f) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if (i < 2) != (j < 2) {
                worst = worst.max(m[(i, j)].abs());
            }
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Isoclinic {
    No,
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Angles {
    /// Rotation angle on the invariant plane closest to A, in radians.
    pub alpha: f64,
    pub beta: f64,
    pub isoclinic: Isoclinic,
}

/// Wraps into `(-π, π]`.
fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

struct Plane {
    angle: f64,
    cols: (usize, usize),
}

/// Angles of the two invariant planes, read off the real Schur form `M = Q T Qᵀ`.
///
/// A consistent orientation of both planes is fixed by making `Q` proper, so
/// `α = β` versus `α = −β` is meaningful relative to the basis used by
/// [`motion_to_matrix`].
pub fn analyze_angles(m: &Matrix4f) -> Angles {
    let (mut q, t) = m.schur().unpack();
    let mut planes = Vec::new();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut i = 0;
    while i < 4 {
        if i < 3 && t[(i + 1, i)].abs() > 1e-12 {
            let sin = (t[(i + 1, i)] - t[(i, i + 1)]) / 2.0;
            let cos = (t[(i, i)] + t[(i + 1, i + 1)]) / 2.0;
            planes.push(Plane { angle: sin.atan2(cos), cols: (i, i + 1) });
            i += 2;
        } else {
            if t[(i, i)] > 0.0 {
                plus.push(i);
            } else {
                minus.push(i);
            }
            i += 1;
        }
    }
    for (group, angle) in [(plus, 0.0), (minus, PI)] {
        for pair in group.chunks(2) {
            if let [a, b] = *pair {
                planes.push(Plane { angle, cols: (a, b) });
            }
        }
    }
    assert_eq!(planes.len(), 2, "not a special orthogonal matrix");

    if q.determinant() < 0.0 {
        let c = planes[1].cols.1;
        q.column_mut(c).neg_mut();
        planes[1].angle = -planes[1].angle;
    }
    let weight_a = |p: &Plane| {
        let (c1, c2) = p.cols;
        (0..2).map(|r| q[(r, c1)].powi(2) + q[(r, c2)].powi(2)).sum::<f64>()
    };
    if weight_a(&planes[1]) > weight_a(&planes[0]) {
        planes.swap(0, 1);
    }
    // Orient so the A-plane block agrees with the standard orientation when it can be compared.
    let (c1, c2) = planes[0].cols;
    let det_a = q[(0, c1)] * q[(1, c2)] - q[(1, c1)] * q[(0, c2)];
    if det_a < -1e-6 {
        planes[0].angle = -planes[0].angle;
        planes[1].angle = -planes[1].angle;
    }

    let alpha = wrap(planes[0].angle);
    let beta = wrap(planes[1].angle);
    let isoclinic = if wrap(alpha - beta).abs() < ISOCLINIC_TOL {
        Isoclinic::Left
    } else if wrap(alpha + beta).abs() < ISOCLINIC_TOL {
        Isoclinic::Right
    } else {
        Isoclinic::No
    };
    Angles { alpha, beta, isoclinic }
}

/// Per-group summary used by the CLI and acceptance tests.
#[derive(Debug, Clone, Serialize)]
pub struct So4Report {
    pub group_order: usize,
    pub homomorphism_error: f64,
    pub max_orthogonality_error: f64,
    pub fixed_dim_mismatches: Vec<String>,
    pub commuting_pairs: usize,
    pub max_off_block: f64,
}

impl So4Report {
    pub fn passed(&self) -> bool {
        self.homomorphism_error < COMPOSE_TOL
            && self.max_orthogonality_error < COMPOSE_TOL
            && self.fixed_dim_mismatches.is_empty()
            && self.max_off_block < COMPOSE_TOL
    }
}

pub fn so4_report(group: &MotionGroup) -> So4Report {
    let mut mismatches = Vec::new();
    let mut max_orth: f64 = 0.0;
    for &g in group.elements() {
        let m = motion_to_matrix(g);
        max_orth = max_orth.max(orthogonality_error(&m));
        let expected = expected_fixed_dim(g.fixed_set());
        match fixed_space_dim(&m) {
            Ok(d) if d == expected => {}
            Ok(d) => mismatches.push(format!("{g}: fixed space dimension {d}, expected {expected}")),
            Err(e) => mismatches.push(format!("{g}: {e}")),
        }
    }
    let unflagged: Vec<Motion> = group.elements().iter().copied().filter(|g| !g.flagged).collect();
    let mut pairs = 0;
    let mut off: f64 = 0.0;
    for &x in &unflagged {
        for &y in &unflagged {
            if x.compose(y) == y.compose(x) {
                pairs += 1;
                off = off.max(off_block_norm(&motion_to_matrix(x))).max(off_block_norm(&motion_to_matrix(y)));
            }
        }
    }
    So4Report {
        group_order: group.order(),
        homomorphism_error: verify_homomorphism(group),
        max_orthogonality_error: max_orth,
        fixed_dim_mismatches: mismatches,
        commuting_pairs: pairs,
        max_off_block: off,
    }
}
