use proptest::prelude::*;

use lzdg_core::domination::{
    brute_force_domination, exact_domination, expand_witness, is_dominating_vertex_set, random_graph_with_twins,
    DominationInstance, SolverLimits,
};
use lzdg_core::matrix::{canonical_factorize, smith_type, QuatMatIso};
use lzdg_core::quaternion::{crt_join_quat, crt_split_quat, dyadic_shapes};
use lzdg_core::zdg::{structural_twin_partition, twin_partition, ZdGraph};
use lzdg_core::{Mat2, Quaternion};

fn quat(n: u64) -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(0..n as i64).prop_map(move |c| Quaternion::new(c, n).unwrap())
}

fn mat(n: u64) -> impl Strategy<Value = Mat2> {
    prop::array::uniform4(0..n as i64).prop_map(move |e| Mat2::new([[e[0], e[1]], [e[2], e[3]]], n).unwrap())
}

fn quat_pair() -> impl Strategy<Value = (Quaternion, Quaternion)> {
    (2u64..500).prop_flat_map(|n| (quat(n), quat(n)))
}

prop_compose! {
    fn prime_power()(ps in prop::sample::select(vec![(3u64, 1u32), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (7, 2), (13, 1)])) -> (u64, u32) {
        ps
    }
}

fn graph_strategy() -> impl Strategy<Value = ZdGraph<usize>> {
    (any::<u64>(), 4usize..14, 0usize..10, 0.1f64..0.6)
        .prop_map(|(seed, base, twins, d)| random_graph_with_twins(seed, base, twins, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_is_multiplicative((x, y) in quat_pair()) {
        prop_assert_eq!((x * y).norm(), x.norm().checked_mul(y.norm()).unwrap());
    }

    #[test]
    fn conjugation_reverses_products((x, y) in quat_pair()) {
        prop_assert_eq!((x * y).conj(), y.conj() * x.conj());
    }

    #[test]
    fn units_are_invertible((x, _) in quat_pair()) {
        match x.inverse() {
            Some(inv) => {
                prop_assert!(x.is_unit());
                prop_assert_eq!(x * inv, Quaternion::one(x.modulus()));
            }
            None => prop_assert!(!x.is_unit()),
        }
    }

    #[test]
    fn crt_round_trip((x, y) in quat_pair()) {
        let parts = crt_split_quat(&x).unwrap();
        prop_assert_eq!(crt_join_quat(&parts).unwrap(), x);
        let product: Vec<Quaternion> = parts
            .iter()
            .zip(crt_split_quat(&y).unwrap())
            .map(|(a, b)| *a * b)
            .collect();
        prop_assert_eq!(crt_join_quat(&product).unwrap(), x * y);
    }

    #[test]
    fn dyadic_shapes_reconstruct(s in 1u32..8, c in prop::array::uniform4(0i64..1 << 7)) {
        let x = Quaternion::new(c, 1 << s).unwrap();
        prop_assume!(!x.is_zero() && !x.is_unit());
        let shapes = dyadic_shapes(&x).unwrap();
        prop_assert!(!shapes.is_empty() && shapes.len() <= 2);
        for f in &shapes {
            prop_assert_eq!(f.reconstruct(), x);
            prop_assert!(f.l < s);
            prop_assert!(f.alpha0.is_unit());
        }
    }

    #[test]
    fn matrix_factorization_reconstructs((p, s) in prime_power(), e in prop::array::uniform4(0i64..2197)) {
        let n = p.pow(s);
        let a = Mat2::new([[e[0], e[1]], [e[2], e[3]]], n).unwrap();
        prop_assume!(!a.is_zero() && !a.is_unit());
        let f = canonical_factorize(&a).unwrap();
        prop_assert_eq!(f.reconstruct(), a);
        prop_assert_eq!(f.smith_type(), smith_type(&a).unwrap());
    }

    #[test]
    fn isomorphism_is_a_ring_map(
        (p, s) in prime_power(),
        c in prop::array::uniform4(0i64..2197),
        d in prop::array::uniform4(0i64..2197),
    ) {
        let n = p.pow(s);
        let iso = QuatMatIso::new(p, s).unwrap();
        let (x, y) = (Quaternion::new(c, n).unwrap(), Quaternion::new(d, n).unwrap());
        let (fx, fy) = (iso.quat_to_mat(&x).unwrap(), iso.quat_to_mat(&y).unwrap());
        prop_assert_eq!(iso.quat_to_mat(&(x * y)).unwrap(), fx * fy);
        prop_assert_eq!(iso.quat_to_mat(&(x + y)).unwrap(), fx + fy);
        prop_assert_eq!(iso.mat_to_quat(&fx).unwrap(), x);
        prop_assert_eq!(fx.is_unit(), x.is_unit());
    }

    #[test]
    fn determinant_is_multiplicative(a in mat(45), b in mat(45)) {
        prop_assert_eq!((a * b).det(), a.det().checked_mul(b.det()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn exact_solver_matches_brute_force(g in graph_strategy()) {
        let (inst, t) = DominationInstance::from_graph(&g);
        let r = exact_domination(&inst, &SolverLimits::default()).unwrap();
        prop_assert!(r.optimal);
        prop_assert_eq!(r.gamma, brute_force_domination(&g).unwrap());
        let set = expand_witness(&t, &r);
        prop_assert_eq!(set.len() as u64, r.gamma);
        prop_assert!(is_dominating_vertex_set(&g, &set));
    }

    #[test]
    fn structural_twins_share_neighbourhoods(g in graph_strategy()) {
        let t = structural_twin_partition(&g);
        for class in t.classes() {
            let a = class.members[0];
            for &b in &class.members[1..] {
                let mut na = g.neighbors(a);
                let mut nb = g.neighbors(b);
                na.set(b, false);
                nb.set(a, false);
                prop_assert_eq!(na, nb);
                prop_assert_eq!(class.self_adjacent, g.adjacent(a, b));
            }
        }
    }

    #[test]
    fn literal_twins_refine_structural_twins(g in graph_strategy()) {
        let lit = twin_partition(&g);
        let st = structural_twin_partition(&g);
        for class in lit.classes() {
            for w in class.members.windows(2) {
                prop_assert!(st.same_class(w[0], w[1]));
            }
        }
    }
}
