mod common;

use std::f64::consts::PI;

use common::{diagonal_frame, euclidean, example_groups};
use g2morse::fourier::{FlatTorus, FourierForm};
use g2morse::group::{examples, validate_joyce};
use g2morse::scalar::{qi, C64};
use g2morse::spectral::{
    enumerate_classes, group_action_on_mode, invariant_dimension_bruteforce, invariant_dimension_formula,
    partial_morse_sum, representation_block, spectral_reports, su3_trace_check, DimensionRoute, ModeKind,
    ModeSpace, MorseKind,
};
use g2morse::{ExteriorForm, Execution};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn blocks_are_laplace_eigenspaces() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let torus = FlatTorus::standard();
    for kind in ModeKind::ALL {
        let space = ModeSpace::new(torus.structure(), kind);
        for _ in 0..20 {
            let k: [i32; 7] = std::array::from_fn(|_| rng.gen_range(-3..=3));
            if k == [0; 7] {
                continue;
            }
            let basis = space.block(&k).orthonormal_basis();
            assert_eq!(basis.len(), kind.block_dim());
            let coeffs = basis.iter().fold(ExteriorForm::<C64>::zero(kind.grade()), |acc, b| {
                let w = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                &acc + &b.map(|x| w * *x)
            });
            let f = FourierForm::from_mode(&torus, k, coeffs);
            let lap = f.laplacian().evaluated();
            let want = f.scale_real(4.0 * PI * PI * torus.norm_sq(&k));
            let err = lap.try_sub(&want).unwrap().max_abs();
            assert!(err <= 1e-9 * want.max_abs(), "Δ residual {err}");
            assert!(f.d_star().unwrap().evaluated().max_abs() < 1e-9);
        }
    }
}

#[test]
fn orthonormal_bases_are_orthonormal() {
    let space = ModeSpace::new(&g2morse::G2Structure::standard(), ModeKind::HPrime);
    let b = space.block(&[1, -2, 0, 3, 0, 0, 1]).orthonormal_basis();
    for (i, x) in b.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let d = x.dot(y);
            assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
    }
}

#[test]
fn actions_preserve_eigenvalue_classes() {
    let o = euclidean(examples::m3());
    let space = ModeSpace::for_orbifold(&o, ModeKind::H);
    for cls in enumerate_classes(&o, &qi(3)) {
        for k in &cls.vectors {
            let alpha = space.block(k).basis()[0].clone();
            for g in o.group().elements() {
                let act = group_action_on_mode(&o, g, k, &alpha).unwrap();
                assert!(cls.contains(&act.k_out));
                assert!(act.conventions_agree);
                assert!(space.block(&act.k_out).contains(&act.alpha_out));
            }
        }
    }
}

#[test]
fn su3_traces_match_on_every_fixed_unit_vector() {
    for (name, g) in example_groups() {
        let o = euclidean(g);
        for a in o.group().elements() {
            for i in 0..7 {
                for sign in [1, -1] {
                    let mut k = [0; 7];
                    k[i] = sign;
                    match su3_trace_check(&o, a, &k) {
                        Ok(r) => assert!(r.residual8 == qi(0) && r.residual12 == qi(0), "{name}: {a} at {k:?}"),
                        Err(g2morse::Error::NotFixed) => {}
                        Err(e) => panic!("{name}: {e}"),
                    }
                }
            }
        }
    }
}

#[test]
fn full_block_matrices_are_invertible_maps_between_blocks() {
    let o = euclidean(examples::m2());
    let space = ModeSpace::for_orbifold(&o, ModeKind::HPrime);
    for g in o.group().elements() {
        let (_, k_out, m) = representation_block(&o, &space, g, &[1, 1, 0, 2, 0, 1, 0]).unwrap();
        assert_eq!(m.rows(), 12);
        assert!(m.inverse().is_some());
        let (_, back, _) = representation_block(&o, &space, g, &k_out).unwrap();
        assert_eq!(back, [1, 1, 0, 2, 0, 1, 0]);
    }
}

#[test]
fn m3_unit_class_agrees() {
    let o = euclidean(examples::m3());
    let cls = &enumerate_classes(&o, &qi(1))[0];
    for kind in ModeKind::ALL {
        let space = ModeSpace::for_orbifold(&o, kind);
        assert_eq!(
            invariant_dimension_bruteforce(&o, cls, &space).unwrap(),
            invariant_dimension_formula(&o, cls, kind).unwrap()
        );
    }
}

#[test]
fn morse_sums_agree_between_routes_and_grow_with_radius() {
    let o = euclidean(examples::m2());
    let space = ModeSpace::for_orbifold(&o, ModeKind::H);
    let mut last = 0.0;
    for r in 1..=4 {
        let brute = partial_morse_sum(&o, MorseKind::Mu3, 4.0, &qi(r), &space, DimensionRoute::BruteForce).unwrap();
        let formula = partial_morse_sum(&o, MorseKind::Mu3, 4.0, &qi(r), &space, DimensionRoute::Formula).unwrap();
        assert_eq!(brute, formula);
        assert!(brute >= last);
        last = brute;
    }
}

#[test]
fn report_lines_serialize() {
    let o = euclidean(examples::torus());
    let h = ModeSpace::for_orbifold(&o, ModeKind::H);
    let hp = ModeSpace::for_orbifold(&o, ModeKind::HPrime);
    let r = spectral_reports(&o, &qi(1), &[&h, &hp], Execution::Sequential).unwrap();
    let lines: Vec<String> = r.iter().map(|x| serde_json::to_string(x).unwrap()).collect();
    assert_eq!(
        lines,
        vec![
            r#"{"norm_sq":"1","kind":"H","dim_bruteforce":112,"dim_formula":112,"match":true}"#,
            r#"{"norm_sq":"1","kind":"Hprime","dim_bruteforce":168,"dim_formula":168,"match":true}"#,
        ]
    );
    assert!(spectral_reports(&o, &qi(0), &[&h], Execution::Sequential).unwrap().is_empty());
}

#[test]
fn sequential_and_parallel_reports_agree() {
    let o = euclidean(examples::m1());
    let h = ModeSpace::for_orbifold(&o, ModeKind::H);
    let a = spectral_reports(&o, &qi(3), &[&h], Execution::Sequential).unwrap();
    let b = spectral_reports(&o, &qi(3), &[&h], Execution::Parallel).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    #[test]
    fn oracle_agrees_for_diagonal_frames(f in diagonal_frame()) {
        let o = validate_joyce(examples::m2(), f.clone()).unwrap();
        let h = ModeSpace::for_orbifold(&o, ModeKind::H);
        let hp = ModeSpace::for_orbifold(&o, ModeKind::HPrime);
        let ginv = f.inverse().unwrap();
        let ginv = ginv.mul(&ginv.transpose());
        let smallest = (0..7).map(|i| ginv[(i, i)].clone()).min().unwrap();
        let radius = smallest * qi(3);
        for r in spectral_reports(&o, &radius, &[&h, &hp], Execution::default()).unwrap() {
            prop_assert!(r.matches, "{:?}", r);
        }
        let torus = FlatTorus::new(o.structure().clone());
        let k = [1, 0, 1, 1, 0, 0, 1];
        let b = h.block(&k).orthonormal_basis();
        let form = FourierForm::from_mode(&torus, k, b[0].map(|x| C64::from(*x)));
        let lap = form.laplacian().evaluated();
        let want = form.scale_real(4.0 * PI * PI * torus.norm_sq(&k));
        prop_assert!(lap.try_sub(&want).unwrap().max_abs() < 1e-9 * want.max_abs());
    }
}
