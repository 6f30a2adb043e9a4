//! Exhaustive property checks shared by the property suite and the acceptance report.
#![allow(dead_code)]

use knn_symmetry::bipartite::maps_orbits_to_orbits;
use knn_symmetry::families::{acceptance_grid, build_group, build_placement, induced_action, Family};
use knn_symmetry::motion::{act, FixedSet, MotionGroup};

/// Every family instance of order at most `max_order`, plus the grid groups.
pub fn groups_up_to(max_order: u64) -> Vec<(Family, MotionGroup)> {
    let mut families = Vec::new();
    for m in 2..=max_order / 2 {
        families.push(Family::G1 { m });
        if m % 2 == 0 {
            families.push(Family::G2 { m });
        }
        if m % 4 == 0 {
            families.push(Family::G3 { m });
        }
    }
    for s in 3..=max_order {
        for r in (2..=s).filter(|r| s % r == 0 && 2 * r * s <= max_order) {
            families.push(Family::J1 { r, s });
        }
        if s % 4 == 0 && 4 * s <= max_order {
            families.push(Family::J2 { s });
        }
    }
    families.into_iter().map(|f| (f, build_group(f).unwrap())).collect()
}

pub fn group_axioms(max_order: u64) -> Result<usize, String> {
    let groups = groups_up_to(max_order);
    for (f, g) in &groups {
        let el = g.elements();
        for &x in el {
            if !g.contains(x.inverse()) || !x.compose(x.inverse()).is_identity() || !x.inverse().compose(x).is_identity() {
                return Err(format!("{f}: inverse law fails at {x}"));
            }
            if x.compose(knn_symmetry::Motion::IDENTITY) != x || knn_symmetry::Motion::IDENTITY.compose(x) != x {
                return Err(format!("{f}: identity law fails at {x}"));
            }
            for &y in el {
                let xy = x.compose(y);
                if !g.contains(xy) {
                    return Err(format!("{f}: not closed at {x}, {y}"));
                }
                for &z in el {
                    if xy.compose(z) != x.compose(y.compose(z)) {
                        return Err(format!("{f}: associativity fails at {x}, {y}, {z}"));
                    }
                }
            }
        }
    }
    Ok(groups.len())
}

pub fn action_axioms() -> Result<(), String> {
    for params in acceptance_grid() {
        let p = build_placement(params).unwrap();
        for pv in p.vertices() {
            if act(knn_symmetry::Motion::IDENTITY, &pv.point) != pv.point {
                return Err(format!("{params}: identity moves {}", pv.point));
            }
            for &x in p.group.elements() {
                for &y in p.group.elements() {
                    if act(x.compose(y), &pv.point) != act(x, &act(y, &pv.point)) {
                        return Err(format!("{params}: action fails for {x}, {y} at {}", pv.point));
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn orbit_stabilizer() -> Result<(), String> {
    for params in acceptance_grid() {
        let p = build_placement(params).unwrap();
        for pv in p.vertices() {
            let orbit = p.group.orbit(&pv.point).len();
            let stab = p.group.stabilizer(&pv.point).len();
            if orbit * stab != p.group.order() {
                return Err(format!("{params}: |orbit| {orbit} x |stab| {stab} at {}", pv.vertex));
            }
        }
    }
    Ok(())
}

pub fn orbits_lemma() -> Result<usize, String> {
    let mut pairs = 0;
    for params in acceptance_grid() {
        let p = build_placement(params).unwrap();
        let action = induced_action(&p).unwrap();
        for (x, px) in &action.map {
            for (y, py) in &action.map {
                if x.compose(*y) == y.compose(*x) {
                    pairs += 1;
                    if !maps_orbits_to_orbits(px, py) {
                        return Err(format!("{params}: {y} does not map orbits of {x} to orbits"));
                    }
                }
            }
        }
    }
    Ok(pairs)
}

pub fn conjugation_equivariance(max_order: u64) -> Result<(), String> {
    for (f, g) in groups_up_to(max_order) {
        for &m in g.elements() {
            if !m.is_identity() && m.fixed_set() == FixedSet::All {
                return Err(format!("{f}: {m} fixes everything"));
            }
            for &w in g.elements() {
                let conj = w.compose(m).compose(w.inverse());
                if conj.fixed_set() != m.fixed_set().image(w) {
                    return Err(format!("{f}: fix({w} {m} {w}^-1) is not the image of fix({m})"));
                }
            }
        }
        let axes: std::collections::BTreeSet<FixedSet> =
            g.elements().iter().filter(|m| m.flagged).map(|m| m.fixed_set()).collect();
        if axes.len() != g.elements().iter().filter(|m| m.flagged).count() {
            return Err(format!("{f}: two flagged elements share an axis"));
        }
    }
    Ok(())
}

pub fn cycle_totals() -> Result<usize, String> {
    let mut count = 0;
    for params in acceptance_grid() {
        let p = build_placement(params).unwrap();
        for (m, perm) in &induced_action(&p).unwrap().map {
            count += 1;
            let cs = perm.cycle_structure();
            if cs.total() != 2 * p.n() || cs.mixed_cycles.iter().any(|l| l % 2 == 1) {
                return Err(format!("{params}: cycle structure of {m} is {cs:?}"));
            }
        }
    }
    for n in 3..=4 {
        for perm in knn_symmetry::oracle::enumerate_automorphisms(n).unwrap() {
            count += 1;
            if perm.cycle_structure().total() != 2 * n {
                return Err(format!("cycle structure of {perm} does not total {}", 2 * n));
            }
        }
    }
    Ok(count)
}
