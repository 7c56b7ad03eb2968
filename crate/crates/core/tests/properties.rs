use proptest::prelude::*;

use ctsearch_core::phase::{circle_distance, disjointify, measurement_distribution};
use ctsearch_core::reduced::{evolution_matrix, evolve_from_overlap};
use ctsearch_core::{weighted_superposition, InformationSet, SearchScenario};

fn sets_strategy(n_items: usize) -> impl Strategy<Value = Vec<(Vec<usize>, f64)>> {
    prop::collection::vec(
        (prop::collection::vec(0..n_items, 1..6), 0.01f64..1.0),
        1..5,
    )
}

fn scenario_from(n_items: usize, raw: &[(Vec<usize>, f64)], scale: f64) -> SearchScenario {
    // the first member of every set is a target, so coverage always holds
    let targets: Vec<usize> = raw.iter().map(|(m, _)| m[0]).collect();
    let sets = raw
        .iter()
        .map(|(m, w)| InformationSet::new(m.iter().copied(), w * scale))
        .collect();
    SearchScenario::with_raw_weights(n_items, targets, sets, 1.0).unwrap()
}

proptest! {
    #[test]
    fn circle_distance_is_a_metric(a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0) {
        let (ab, bc, ac) = (circle_distance(a, b), circle_distance(b, c), circle_distance(a, c));
        prop_assert!((0.0..=0.5).contains(&ab));
        prop_assert!((ab - circle_distance(b, a)).abs() < 1e-15);
        prop_assert!(ac <= ab + bc + 1e-12);
        prop_assert_eq!(circle_distance(a, a), 0.0);
    }

    #[test]
    fn disjointify_partitions_the_union(raw in sets_strategy(20)) {
        let sets: Vec<InformationSet> = raw.iter()
            .map(|(m, w)| InformationSet::new(m.iter().copied(), *w))
            .collect();
        let out = disjointify(&sets);
        let mut seen = std::collections::BTreeSet::new();
        for s in &out {
            prop_assert!(!s.is_empty());
            for &i in s.members() {
                prop_assert!(seen.insert(i));
            }
        }
        let union: std::collections::BTreeSet<usize> =
            sets.iter().flat_map(|s| s.members().iter().copied()).collect();
        prop_assert_eq!(seen, union);
        let total: f64 = out.iter().map(|s| s.weight()).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn overlap_is_scale_invariant(raw in sets_strategy(16), scale in 0.1f64..10.0) {
        let a = weighted_superposition(&scenario_from(16, &raw, 1.0)).unwrap();
        let b = weighted_superposition(&scenario_from(16, &raw, scale)).unwrap();
        prop_assert!((a.y - b.y).abs() < 1e-12);
        prop_assert!(a.y > 0.0 && a.y <= 1.0 + 1e-15);
    }

    #[test]
    fn confidence_class_ignores_set_order(raw in sets_strategy(16)) {
        let s = scenario_from(16, &raw, 1.0);
        let mut rev = raw.clone();
        rev.reverse();
        let r = scenario_from(16, &rev, 1.0);
        prop_assert_eq!(s.classify_confidence().unwrap().class, r.classify_confidence().unwrap().class);
    }

    #[test]
    fn propagator_is_unitary_group(y in 0.001f64..1.0, e in 0.1f64..5.0, t1 in 0.0f64..50.0, t2 in 0.0f64..50.0) {
        let u1 = evolution_matrix(y, e, t1).unwrap();
        let u2 = evolution_matrix(y, e, t2).unwrap();
        let u12 = evolution_matrix(y, e, t1 + t2).unwrap();
        let id = u1.adjoint() * u1;
        prop_assert!((id[(0, 0)].re - 1.0).abs() < 1e-12 && id[(0, 1)].norm() < 1e-12);
        prop_assert!((u1 * u2 - u12).norm() < 1e-10);
        let s = evolve_from_overlap(y, e, t1).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distribution_sums_to_one(y in 0.0f64..1.0, exp in 1u32..9) {
        let m = 1usize << exp;
        let d = measurement_distribution(y.max(1e-9), m).unwrap();
        let total: f64 = d.probs.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        prop_assert!(d.probs.iter().all(|p| *p >= 0.0));
    }

    #[test]
    fn distribution_continuous_in_y(y in 0.01f64..0.99, exp in 2u32..8) {
        let m = 1usize << exp;
        let a = measurement_distribution(y, m).unwrap();
        let b = measurement_distribution(y + 1e-6, m).unwrap();
        let diff = a.probs.iter().zip(&b.probs).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-3);
    }
}
