use knn_symmetry::bipartite::Part;
use knn_symmetry::classify::GroupSpec;
use knn_symmetry::edgecheck::{check_conditions, search_witness, subgroup_witness, EdgeError, SearchMode, Route};
use knn_symmetry::families::{acceptance_grid, build_placement, induced_action, induced_report, Family, FamilyParams, Role};
use knn_symmetry::matrixcheck::{so4_report, COMPOSE_TOL};
use knn_symmetry::motion::{FixedSet, Motion, Turn};

fn placement(family: Family, n: u64) -> knn_symmetry::Placement {
    build_placement(FamilyParams::new(family, n)).unwrap()
}

fn targets(f: Family) -> [GroupSpec; 2] {
    match f {
        Family::G1 { m } | Family::G2 { m } | Family::G3 { m } => [GroupSpec::Dihedral { m }, GroupSpec::Cyclic { m }],
        Family::J1 { r, s } => [GroupSpec::SemidirectProduct { r, s }, GroupSpec::Product { r, s }],
        Family::J2 { s } => [GroupSpec::SemidirectProduct { r: 2, s }, GroupSpec::Product { r: 2, s }],
    }
}

#[test]
fn grid_orders_and_faithfulness() {
    for params in acceptance_grid() {
        let p = build_placement(params).unwrap();
        assert_eq!(p.group.order() as u64, params.family.group_order());
        let action = induced_action(&p).unwrap();
        let report = induced_report(&p, &action);
        assert_eq!(report.image_order, p.group.order(), "{params}");
        assert!(report.relations && report.homomorphism && report.orbits_lemma, "{params}");
        let v = p.vertices().iter().filter(|x| x.vertex.part == Part::V).count();
        assert_eq!(v as u64, params.n);
    }
}

#[test]
fn grid_conditions_pass() {
    for params in acceptance_grid() {
        let report = check_conditions(&build_placement(params).unwrap());
        assert!(report.passed(), "{params}: {:?}", report.conditions);
        assert!(report.condition5_paths_agree, "{params}");
    }
}

#[test]
fn stabilizers_match_the_construction() {
    for params in acceptance_grid() {
        let p = build_placement(params).unwrap();
        for pv in p.vertices() {
            let stab = p.group.stabilizer(&pv.point);
            match pv.role {
                Role::Free => assert_eq!(stab, vec![Motion::IDENTITY]),
                Role::ZOrbit => {
                    assert_eq!(stab.len(), 2, "{params} {}", pv.vertex);
                    assert!(stab[1].flagged || stab[0].flagged);
                }
                Role::CircleX | Role::CircleY => assert!(stab.len() > 1),
            }
        }
    }
    let p = placement(Family::G1 { m: 5 }, 7);
    for pv in p.vertices().iter().filter(|v| v.role == Role::CircleX) {
        let stab = p.group.stabilizer(&pv.point);
        let expected: Vec<Motion> = (0..5).map(|j| Motion::rot(Turn::ZERO, Turn::new(j, 5))).collect();
        let mut expected = expected;
        expected.sort();
        assert_eq!(stab, expected);
    }
}

#[test]
fn j1_odd_branch_part_counts() {
    // n = 2js + s with j = 1, r = 3, s = 9: l = 3 and m = 3 is odd.
    let p = placement(Family::J1 { r: 3, s: 9 }, 27);
    let count = |part: Part| p.vertices().iter().filter(|v| v.vertex.part == part).count();
    assert_eq!((count(Part::V), count(Part::W)), (27, 27));
    let on_y = p.vertices().iter().filter(|v| v.role == Role::CircleY).count();
    assert_eq!(on_y, 27);
    assert!(check_conditions(&p).passed());
}

#[test]
fn product_generators_fix_disjoint_circles() {
    for params in acceptance_grid() {
        let p = build_placement(params).unwrap();
        if !matches!(params.family, Family::J1 { .. } | Family::J2 { .. }) {
            continue;
        }
        let sets: std::collections::BTreeSet<FixedSet> =
            p.group.elements().iter().filter(|m| !m.flagged && !m.is_identity()).map(|m| m.fixed_set()).collect();
        assert!(sets.contains(&FixedSet::CircleX) && sets.contains(&FixedSet::CircleY), "{params}");
        assert_eq!(FixedSet::CircleX.intersection(FixedSet::CircleY), Some(vec![]));
    }
}

#[test]
fn witness_modes_agree_on_grid() {
    for params in acceptance_grid().into_iter().filter(|p| p.n <= 8) {
        let p = build_placement(params).unwrap();
        for target in targets(params.family) {
            let a = subgroup_witness(&p, target, SearchMode::Exhaustive);
            let b = subgroup_witness(&p, target, SearchMode::Restricted);
            match (a, b) {
                (Ok(a), Ok(b)) => {
                    assert_eq!((a.admissible, a.forced), (b.admissible, b.forced), "{params} {target}");
                    assert!(a.corollary_edge_free, "{params} {target}");
                }
                (Err(EdgeError::NoWitnessPlan(_)), Err(EdgeError::NoWitnessPlan(_))) => {}
                (a, b) => panic!("{params} {target}: {a:?} vs {b:?}"),
            }
        }
    }
}

#[test]
fn g1_m3_forces_k31() {
    let r = subgroup_witness(&placement(Family::G1 { m: 3 }, 3), GroupSpec::Dihedral { m: 3 }, SearchMode::Restricted).unwrap();
    assert!(r.forced.0 >= 1 && r.forced.1 >= 3);
    assert_eq!(r.designated.len(), 3);
}

#[test]
fn g1_m2_forces_k32() {
    let r = subgroup_witness(&placement(Family::G1 { m: 2 }, 4), GroupSpec::Dihedral { m: 2 }, SearchMode::Restricted).unwrap();
    let (a, b) = r.forced;
    assert!((a >= 3 && b >= 2) || (a >= 2 && b >= 3), "{r:?}");
}

#[test]
fn j2_product_target_uses_rotation_subgroup() {
    let p = placement(Family::J2 { s: 4 }, 6);
    let r = subgroup_witness(&p, GroupSpec::Product { r: 2, s: 4 }, SearchMode::Restricted).unwrap();
    assert_eq!(r.route, Route::Lemma);
    assert_eq!(r.orbit_group_order, 8);
    assert_eq!(r.designated.len(), 2);
    let open = subgroup_witness(&p, GroupSpec::SemidirectProduct { r: 2, s: 4 }, SearchMode::Restricted);
    assert!(matches!(open, Err(EdgeError::NoWitnessPlan(_))));
}

#[test]
fn j1_n8_admits_no_witness() {
    // Even designating every edge orbit leaves a map fixing only a 4-cycle.
    let p = placement(Family::J1 { r: 2, s: 4 }, 8);
    for target in targets(p.params.family) {
        match search_witness(&p, target, SearchMode::Restricted) {
            Err(EdgeError::WitnessFailed(r)) => {
                let c = r.counterexample.unwrap();
                assert_eq!(c.fixed, (2, 2));
            }
            other => panic!("{target}: {other:?}"),
        }
    }
}

#[test]
fn larger_grid_cases_restricted() {
    let p = placement(Family::J1 { r: 2, s: 4 }, 10);
    for target in targets(p.params.family) {
        assert!(subgroup_witness(&p, target, SearchMode::Restricted).unwrap().passed);
    }
    let p = placement(Family::J1 { r: 4, s: 4 }, 10);
    assert!(subgroup_witness(&p, GroupSpec::Product { r: 4, s: 4 }, SearchMode::Restricted).unwrap().passed);
    assert!(matches!(
        subgroup_witness(&p, GroupSpec::Product { r: 4, s: 4 }, SearchMode::Exhaustive),
        Err(EdgeError::EnumerationTooLarge { .. })
    ));
}

#[test]
fn matrices_agree_on_grid() {
    for params in acceptance_grid() {
        let r = so4_report(&build_placement(params).unwrap().group);
        assert!(r.passed(), "{params}: {r:?}");
        assert!(r.homomorphism_error < COMPOSE_TOL);
    }
}
