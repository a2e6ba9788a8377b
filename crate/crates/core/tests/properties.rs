use posmap_core::{
    build_extremal, canonicalize, ccp_check, complete_to_unitary, cp_check, decompose_extremal,
    verify_decomposition, Branch, ChoiMat64, Column, Complex64, ExtremalParams64, Mat2f64, Mat4f64,
};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e3..1e3f64,
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
    ]
}

fn complex() -> impl Strategy<Value = Complex64> {
    (finite(), finite()).prop_map(|(re, im)| Complex64::new(re, im))
}

fn mat4() -> impl Strategy<Value = Mat4f64> {
    proptest::array::uniform4(proptest::array::uniform4(complex())).prop_map(|rows| Mat4f64::new(rows).unwrap())
}

fn unit() -> impl Strategy<Value = [Complex64; 2]> {
    (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU).prop_map(|(th, p1, p2)| {
        [
            Complex64::from_polar((th / 2.0).cos(), p1),
            Complex64::from_polar((th / 2.0).sin(), p2),
        ]
    })
}

fn extremal_params() -> impl Strategy<Value = ExtremalParams64> {
    (0.05..0.95f64, 0.01..0.99f64, 0.0..std::f64::consts::TAU, 0.0..std::f64::consts::TAU, any::<bool>()).prop_map(
        |(u, share, py, pz, plus)| {
            let r = u.sqrt();
            ExtremalParams64 {
                u,
                y: Complex64::from_polar(r * share, py),
                z: Complex64::from_polar(r * (1.0 - share), pz),
                t_branch: if plus { Branch::Plus } else { Branch::Minus },
            }
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn json_round_trip_is_exact(m in mat4()) {
        let text = serde_json::to_string(&ChoiMat64::from_mat4(m)).unwrap();
        let back: ChoiMat64 = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.into_mat4(), m);
    }

    #[test]
    fn partial_transpose_is_a_linear_involution(a in mat4(), b in mat4()) {
        let (ha, hb) = (ChoiMat64::from_mat4(a), ChoiMat64::from_mat4(b));
        prop_assert_eq!(ha.partial_transpose().partial_transpose(), ha);
        prop_assert_eq!((ha + hb).partial_transpose(), ha.partial_transpose() + hb.partial_transpose());
    }

    #[test]
    fn conjugation_preserves_cp_and_ccp_margins(p in extremal_params(), xi in unit(), eta in unit()) {
        let h = build_extremal(&p).unwrap();
        let pair = decompose_extremal(&h, 1e-10).unwrap();
        let v = complete_to_unitary(eta, Column::First).unwrap();
        let w = complete_to_unitary(xi, Column::Second).unwrap();
        for part in [pair.h1, pair.h2] {
            let moved = part.conjugate(&v, &w, 1e-12).unwrap();
            let before = (cp_check(&part, 1e-10).unwrap().margin, ccp_check(&part, 1e-10).unwrap().margin);
            let after = (cp_check(&moved, 1e-10).unwrap().margin, ccp_check(&moved, 1e-10).unwrap().margin);
            prop_assert!((before.0 - after.0).abs() < 1e-12);
            prop_assert!((before.1 - after.1).abs() < 1e-12);
        }
    }

    #[test]
    fn rotated_extremal_maps_canonicalize_back(p in extremal_params(), xi in unit(), eta in unit()) {
        let h = build_extremal(&p).unwrap();
        let v = complete_to_unitary(eta, Column::First).unwrap();
        let w = complete_to_unitary(xi, Column::Second).unwrap();
        let rotated = h.conjugate(&v.adjoint(), &w.adjoint(), 1e-12).unwrap();
        let (back, _) = canonicalize(&rotated, xi, eta, 1e-10).unwrap();
        prop_assert!(back.max_diff(&h) < 1e-12);
        let pair = decompose_extremal(&back, 1e-10).unwrap();
        prop_assert!(verify_decomposition(&back, &pair, 1e-10).is_pass());
    }

    #[test]
    fn decomposition_is_linear_in_the_input_matrix(p in extremal_params(), a in proptest::array::uniform2(proptest::array::uniform2(-1.0..1.0f64))) {
        let h = build_extremal(&p).unwrap();
        let pair = decompose_extremal(&h, 1e-10).unwrap();
        let a = Mat2f64::from_real(a).unwrap();
        prop_assert!((pair.h1.apply(&a) + pair.h2.apply(&a)).max_diff(&h.apply(&a)) < 1e-12);
        prop_assert!(pair.apply_kraus(&a).max_diff(&h.apply(&a)) < 1e-12);
    }
}
