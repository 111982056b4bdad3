//! Randomized invariants of the geometric and combinatorial core: metric
//! axioms, projection behavior, carrier nesting, affinity of piecewise
//! maps, order-independence of refutations, and serialization stability.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use proptest::prelude::*;

use chromatic_tasks::chromap::{project_point, MapError, PAMap};
use chromatic_tasks::complex::{vertex, Color, Complex, Simplex, VertexId};
use chromatic_tasks::geometry::{affine_combination, tv_distance, Point};
use chromatic_tasks::rational::{int, ratio, Rational};
use chromatic_tasks::subdivision::{iterate_chromatic, Subdivision};
use chromatic_tasks::task::{
    generate_failsafe_consensus, search_decision_map, verify_solution, Order, Task,
};

fn triangle() -> &'static Complex {
    static CELL: OnceLock<Complex> = OnceLock::new();
    CELL.get_or_init(|| {
        Complex::build(
            vec![vertex(0, 0, "a"), vertex(1, 1, "b"), vertex(2, 2, "c")],
            vec![vec![VertexId(0), VertexId(1), VertexId(2)]],
        )
        .unwrap()
    })
}

fn edge() -> &'static Complex {
    static CELL: OnceLock<Complex> = OnceLock::new();
    CELL.get_or_init(|| {
        Complex::build(
            vec![vertex(0, 0, "a"), vertex(1, 1, "b")],
            vec![vec![VertexId(0), VertexId(1)]],
        )
        .unwrap()
    })
}

fn subdivided_triangle() -> &'static Subdivision {
    static CELL: OnceLock<Subdivision> = OnceLock::new();
    CELL.get_or_init(|| iterate_chromatic(triangle(), 2))
}

/// The depth-1 zigzag on the edge: every subdivision vertex goes to the
/// base vertex of its own color.
fn fold_map() -> &'static PAMap {
    static CELL: OnceLock<PAMap> = OnceLock::new();
    CELL.get_or_init(|| {
        let s = iterate_chromatic(edge(), 1);
        let assignment: BTreeMap<VertexId, VertexId> = s
            .complex()
            .vertices()
            .map(|v| (v.id, VertexId(v.color.0)))
            .collect();
        PAMap::realize_simplicial(s, edge(), &assignment).unwrap()
    })
}

fn consensus() -> &'static Task {
    static CELL: OnceLock<Task> = OnceLock::new();
    CELL.get_or_init(|| generate_failsafe_consensus(2, 0).unwrap())
}

/// Positive weights over a chosen nonempty subset of the triangle's
/// vertices, normalized to total mass one.
fn triangle_point() -> impl Strategy<Value = Point> {
    (1u32..8, proptest::collection::vec(1i64..10, 3)).prop_map(|(mask, raw)| {
        let mut weights = BTreeMap::new();
        let mut total = int(0);
        for (i, w) in raw.iter().enumerate() {
            if mask & (1 << i) != 0 {
                weights.insert(VertexId(i as u32), int(*w));
                total += int(*w);
            }
        }
        let weights = weights
            .into_iter()
            .map(|(v, w)| (v, w / total.clone()))
            .collect();
        Point::new(triangle(), weights).unwrap()
    })
}

fn interpolation_weight() -> impl Strategy<Value = Rational> {
    (1i64..9).prop_map(|n| ratio(n, 9))
}

proptest! {
    #[test]
    fn total_variation_is_a_metric(
        x in triangle_point(),
        y in triangle_point(),
        z in triangle_point(),
    ) {
        let ambient = triangle();
        let xy = tv_distance(ambient, &x, &y).unwrap();
        prop_assert_eq!(&xy, &tv_distance(ambient, &y, &x).unwrap());
        prop_assert_eq!(xy == int(0), x == y);
        prop_assert_eq!(tv_distance(ambient, &x, &x).unwrap(), int(0));
        let xz = tv_distance(ambient, &x, &z).unwrap();
        let yz = tv_distance(ambient, &y, &z).unwrap();
        prop_assert!(xz <= xy + yz);
    }

    #[test]
    fn dropping_an_absent_color_is_the_identity(
        x in triangle_point(),
        c in 0u32..3,
    ) {
        let ambient = triangle();
        let colored = x
            .support()
            .vertices()
            .iter()
            .any(|v| ambient.color_of(*v) == Some(Color(c)));
        match project_point(ambient, &x, Color(c)) {
            Ok(projected) => {
                if !colored {
                    prop_assert_eq!(&projected, &x);
                }
                let again = project_point(ambient, &projected, Color(c)).unwrap();
                prop_assert_eq!(again, projected);
            }
            Err(MapError::UndefinedAtColorVertex(_)) => {
                // Only the pure color-c vertex has nowhere to go.
                prop_assert_eq!(x.support().len(), 1);
                prop_assert!(colored);
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn subdivision_carriers_nest(idx in 0usize..169) {
        let s = subdivided_triangle();
        let facet = &s.complex().facets()[idx];
        let carrier = s.carrier_of_simplex(facet);
        prop_assert!(triangle().contains_simplex(&carrier));
        for v in facet.vertices() {
            prop_assert!(s.vertex_carrier(*v).is_face_of(&carrier));
            prop_assert!(s.vertex_point(*v).support().is_face_of(s.vertex_carrier(*v)));
        }
    }

    #[test]
    fn piecewise_images_interpolate_affinely(
        idx in 0usize..3,
        a in proptest::collection::vec(1i64..10, 2),
        b in proptest::collection::vec(1i64..10, 2),
        t in interpolation_weight(),
    ) {
        let f = fold_map();
        let cell = &f.domain().complex().facets()[idx];
        let combine = |raw: &[i64]| {
            let total: i64 = raw.iter().sum();
            let terms: Vec<(Rational, Point)> = cell
                .vertices()
                .iter()
                .zip(raw)
                .map(|(v, w)| (ratio(*w, total), f.domain().vertex_point(*v).clone()))
                .collect();
            affine_combination(edge(), &terms).unwrap()
        };
        let x = combine(&a);
        let y = combine(&b);
        let mid = affine_combination(
            edge(),
            &[(t.clone(), x.clone()), (int(1) - t.clone(), y.clone())],
        )
        .unwrap();
        let expected = affine_combination(
            edge(),
            &[
                (t.clone(), f.evaluate(&x).unwrap()),
                (int(1) - t, f.evaluate(&y).unwrap()),
            ],
        )
        .unwrap();
        prop_assert_eq!(f.evaluate(&mid).unwrap(), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn refutations_do_not_depend_on_exploration_order(seed in any::<u64>()) {
        let s = iterate_chromatic(consensus().input(), 1);
        let found = search_decision_map(consensus(), &s, Order::Seeded(seed)).unwrap();
        prop_assert!(found.is_none());
    }

    #[test]
    fn discovered_decisions_always_verify(seed in any::<u64>()) {
        let task = Task::unconstrained(triangle().clone(), triangle().clone());
        let s = iterate_chromatic(triangle(), 1);
        let decision = search_decision_map(&task, &s, Order::Seeded(seed))
            .unwrap()
            .expect("an unconstrained task is always solvable");
        prop_assert_eq!(decision.depth, 1);
        prop_assert!(verify_solution(&task, &s, &decision).unwrap());
    }
}

proptest! {
    #[test]
    fn complex_serialization_round_trips(mask in 1u32..(1 << 13)) {
        let coarse = iterate_chromatic(triangle(), 1);
        let chosen: Vec<Simplex> = coarse
            .complex()
            .facets()
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, f)| f.clone())
            .collect();
        prop_assert!(!chosen.is_empty());
        let used: Vec<_> = coarse
            .complex()
            .vertices()
            .filter(|v| chosen.iter().any(|f| f.contains(v.id)))
            .cloned()
            .collect();
        let facet_ids = chosen.iter().map(|f| f.vertices().to_vec()).collect();
        let c = Complex::build(used, facet_ids).unwrap();
        let back = Complex::from_json(&c.to_json()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn task_serialization_round_trips(n in 1u32..4, extra in 0u32..3) {
        let bound = extra.min(n);
        let task = generate_failsafe_consensus(n, bound).unwrap();
        let back = Task::from_json(&task.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), task.to_json());
    }
}
