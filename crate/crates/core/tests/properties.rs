mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use knn_symmetry::bipartite::{validate_automorphism, BipartiteAutomorphism, Part, VertexId};
use knn_symmetry::classify::{classify_cyclic_dihedral, classify_product, Condition};
use knn_symmetry::edgecheck::{check_conditions, circle_embeddable, Embeddable};
use knn_symmetry::families::{acceptance_grid, build_placement, Placement, Role};
use knn_symmetry::matrixcheck::{analyze_angles, motion_to_matrix};
use knn_symmetry::motion::{Motion, Point, Turn};
use knn_symmetry::oracle::enumerate_automorphisms;
use knn_symmetry::realizable::match_cases;

#[test]
fn group_axioms_up_to_order_100() {
    let groups = common::group_axioms(100).unwrap();
    assert!(groups > 40);
}

#[test]
fn action_axioms() {
    common::action_axioms().unwrap();
}

#[test]
fn orbit_stabilizer_counting() {
    common::orbit_stabilizer().unwrap();
}

#[test]
fn orbits_lemma_on_grid() {
    assert!(common::orbits_lemma().unwrap() > 0);
}

#[test]
fn fixed_sets_are_conjugation_equivariant() {
    common::conjugation_equivariance(100).unwrap();
}

#[test]
fn cycle_structure_totals() {
    common::cycle_totals().unwrap();
}

fn preserves_edges(n: usize, image: &[usize]) -> bool {
    // Edges of K_{n,n} are exactly the pairs with one end below n.
    let edge = |x: usize, y: usize| (x < n) != (y < n);
    (0..2 * n).all(|x| (0..2 * n).all(|y| edge(x, y) == edge(image[x], image[y])))
}

#[test]
fn validation_matches_adjacency() {
    use itertools::Itertools;
    for n in 1..=4 {
        let mut accepted = 0;
        for image in (0..2 * n).permutations(2 * n) {
            let map: BTreeMap<VertexId, VertexId> = image
                .iter()
                .enumerate()
                .map(|(x, &y)| (VertexId::from_slot(x, n), VertexId::from_slot(y, n)))
                .collect();
            let valid = validate_automorphism(n, &map).is_ok();
            assert_eq!(valid, preserves_edges(n, &image), "n = {n}, image {image:?}");
            accepted += valid as usize;
        }
        let fact: usize = (1..=n).product();
        assert_eq!(accepted, 2 * fact * fact);
    }
}

#[test]
fn inverse_matches_same_cases_small_n() {
    for n in 3..=4 {
        for phi in enumerate_automorphisms(n).unwrap() {
            let a = match_cases(&phi).unwrap();
            let b = match_cases(&phi.inverse()).unwrap();
            assert_eq!(a.realizable, b.realizable, "{phi}");
            assert_eq!(a.matches, b.matches, "{phi}");
        }
    }
}

#[test]
fn cyclic_and_dihedral_agree() {
    for n in 3..=120 {
        for m in 2..=40 {
            let v = classify_cyclic_dihedral(n, m).unwrap();
            let d = knn_symmetry::GroupSpec::Dihedral { m }.classify(n).unwrap();
            assert_eq!(v, d);
        }
    }
}

#[test]
fn product_containment_implies_cyclic() {
    for n in 3..=100 {
        for s in 3..=24 {
            for r in (2..=s).filter(|r| s % r == 0) {
                for semidirect in [false, true] {
                    if (r, s) == (2, 2) {
                        continue;
                    }
                    if classify_product(n, r, s, semidirect).unwrap().contains() {
                        assert!(classify_cyclic_dihedral(n, s).unwrap().contains(), "n {n} r {r} s {s}");
                    }
                }
            }
        }
    }
}

#[test]
fn p1_excludes_p2_and_p3() {
    for s in 3..=24u64 {
        for n in 3..=4 * s * s {
            let v = classify_product(n, 2, s, false);
            let Ok(v) = v else { continue };
            let c = &v.matched_conditions;
            assert!(!(c.contains(&Condition::P1) && (c.contains(&Condition::P2) || c.contains(&Condition::P3))), "n {n} s {s}");
        }
    }
}

#[test]
fn embeddability_is_monotone() {
    let rank = |e: Embeddable| match e {
        Embeddable::ProperSubset => 0,
        Embeddable::FullCircleOnly => 1,
        Embeddable::No => 2,
    };
    for a in 0..12 {
        for b in 0..12 {
            let here = rank(circle_embeddable(a, b));
            assert!(rank(circle_embeddable(a + 1, b)) >= here);
            assert!(rank(circle_embeddable(a, b + 1)) >= here);
        }
    }
}

fn relabel(p: &Placement, v_order: &[usize], w_order: &[usize]) -> Placement {
    let n = p.n();
    let pick = |part: Part, order: &[usize]| -> Vec<(Point, Role)> {
        order
            .iter()
            .map(|&i| {
                let pv = &p.vertices()[VertexId { part, index: i + 1 }.slot(n)];
                (pv.point, pv.role)
            })
            .collect()
    };
    Placement::from_points(p.params, p.group.clone(), pick(Part::V, v_order), pick(Part::W, w_order)).unwrap()
}

fn shuffled(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

fn any_perm(n: usize) -> impl Strategy<Value = BipartiteAutomorphism> {
    (shuffled(n), shuffled(n), any::<bool>()).prop_map(move |(sigma, tau, swap)| {
        let offset = if swap { n } else { 0 };
        let mut image: Vec<usize> = sigma.iter().map(|&x| x + offset).collect();
        image.extend(tau.iter().map(|&y| y + n - offset));
        BipartiteAutomorphism::from_slots(n, image).unwrap()
    })
}

fn part_relabeling(n: usize) -> impl Strategy<Value = BipartiteAutomorphism> {
    (shuffled(n), shuffled(n)).prop_map(move |(sigma, tau)| {
        let mut image = sigma;
        image.extend(tau.iter().map(|&y| y + n));
        BipartiteAutomorphism::from_slots(n, image).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn arc_search_is_order_independent(
        (idx, v, w) in (0usize..11).prop_flat_map(|i| {
            let n = acceptance_grid()[i].n as usize;
            (Just(i), shuffled(n), shuffled(n))
        })
    ) {
        let p = build_placement(acceptance_grid()[idx]).unwrap();
        let a = check_conditions(&p);
        let b = check_conditions(&relabel(&p, &v, &w));
        let pass = |r: &knn_symmetry::edgecheck::ConditionReport| r.conditions.iter().map(|c| c.passed()).collect::<Vec<_>>();
        prop_assert_eq!(pass(&a), pass(&b));
        prop_assert_eq!(a.fixed_pairs, b.fixed_pairs);
    }

    #[test]
    fn cycle_totals_and_orders(phi in (3usize..=7).prop_flat_map(any_perm)) {
        let n = phi.n();
        prop_assert_eq!(phi.cycle_structure().total(), 2 * n);
        prop_assert!(phi.cycle_structure().mixed_cycles.iter().all(|l| l % 2 == 0));
        let sq = phi.compose(&phi).unwrap();
        prop_assert_eq!(phi.order() % sq.order(), 0);
        prop_assert_eq!(phi.order(), phi.inverse().order());
    }

    #[test]
    fn composition_orders(pair in (3usize..=6).prop_flat_map(|n| (any_perm(n), any_perm(n)))) {
        let (a, b) = pair;
        let c = a.compose(&b).unwrap();
        prop_assert_eq!(c.cycle_structure().total(), 2 * a.n());
        prop_assert_eq!(c.order(), c.inverse().order());
        let sq = c.compose(&c).unwrap();
        prop_assert_eq!(c.order() % sq.order(), 0);
    }

    #[test]
    fn matching_ignores_relabeling(pair in (3usize..=7).prop_flat_map(|n| (any_perm(n), part_relabeling(n)))) {
        let (phi, rho) = pair;
        let conj = rho.compose(&phi).unwrap().compose(&rho.inverse()).unwrap();
        let a = match_cases(&phi).unwrap();
        let b = match_cases(&conj).unwrap();
        prop_assert_eq!(a.realizable, b.realizable);
        prop_assert_eq!(a.matches, b.matches);
    }

    #[test]
    fn angles_recover_turns(p in -24i64..24, q in 1u64..25, p2 in -24i64..24, q2 in 1u64..25) {
        let (a, b) = (Turn::new(p, q), Turn::new(p2, q2));
        let angles = analyze_angles(&motion_to_matrix(Motion::rot(a, b)));
        let tau = std::f64::consts::TAU;
        let same = |x: f64, y: f64| (x.cos() - y.cos()).abs() < 1e-9 && (x.sin() - y.sin()).abs() < 1e-9;
        let (x, y) = (tau * a.as_f64(), tau * b.as_f64());
        // Each plane's angle is determined up to sign by the eigenvalues alone.
        let up_to_sign = |u: f64, v: f64| same(u, v) || same(u, -v);
        prop_assert!(
            (up_to_sign(angles.alpha, x) && up_to_sign(angles.beta, y))
                || (up_to_sign(angles.alpha, y) && up_to_sign(angles.beta, x)),
            "{:?} for {} {}", angles, a, b
        );
    }
}
