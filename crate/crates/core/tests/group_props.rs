mod common;

use common::{diagonal_frame, half};
use g2morse::group::{examples, validate_joyce, AffineElement, OrbifoldGroup, DEFAULT_CAP};
use g2morse::linalg::Matrix;
use g2morse::scalar::{q, qi};
use g2morse::{mu_invariants, Error};
use proptest::prelude::*;

fn m3_with(b6: g2morse::scalar::Q, b7: g2morse::scalar::Q, c: [g2morse::scalar::Q; 3]) -> OrbifoldGroup {
    let [c3, c5, c7] = c;
    OrbifoldGroup::generate(
        &[examples::alpha(), examples::beta(b6, b7), examples::gamma(c3, c5, c7)],
        DEFAULT_CAP,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn generate_is_idempotent(b6 in half(), b7 in half(), c3 in half(), c5 in half(), c7 in half()) {
        let g = m3_with(b6, b7, [c3, c5, c7]);
        let again = OrbifoldGroup::generate(g.elements(), DEFAULT_CAP).unwrap();
        prop_assert_eq!(again.order(), g.order());
        for e in g.elements() {
            prop_assert!(again.contains(e));
        }
        prop_assert!(g.is_closed());
        prop_assert!(g.order() <= DEFAULT_CAP);
        for e in g.elements() {
            prop_assert!(g.matrix_order(e).is_some());
        }
    }

    #[test]
    fn validated_elements_preserve_the_metric(f in diagonal_frame(), b7 in half(), c7 in half()) {
        let g = m3_with(qi(0), b7, [q(1, 2), q(1, 2), c7]);
        let o = validate_joyce(g, f.clone()).unwrap();
        let gram = f.transpose().mul(&f);
        for e in o.group().elements() {
            let a = e.matrix();
            prop_assert_eq!(a.transpose().mul(&gram).mul(a), gram.clone());
        }
    }

    #[test]
    fn invariants_ignore_frames_and_translations(f in diagonal_frame(), b6 in half(), b7 in half(), c3 in half(), c5 in half(), c7 in half()) {
        let reference = mu_invariants(&validate_joyce(examples::m3(), Matrix::identity(7)).unwrap());
        let o = validate_joyce(m3_with(b6, b7, [c3, c5, c7]), f).unwrap();
        prop_assert_eq!(mu_invariants(&o), reference);
    }
}

#[test]
fn cap_is_an_upper_bound_on_the_order() {
    let g = OrbifoldGroup::generate(&[examples::alpha(), examples::default_beta()], 4).unwrap();
    assert_eq!(g.order(), 4);
    assert_eq!(
        OrbifoldGroup::generate(&[examples::alpha(), examples::default_beta()], 3).unwrap_err(),
        Error::NonFinite { cap: 3 }
    );
}

#[test]
fn non_g2_frames_are_rejected() {
    // a shear mixing axes 1 and 4 does not commute with α
    let mut f = Matrix::identity(7);
    f[(0, 3)] = qi(1);
    let err = validate_joyce(examples::m1(), f).unwrap_err();
    assert!(matches!(err, Error::NotG2Compatible { .. }));
    assert!(validate_joyce(OrbifoldGroup::trivial(), Matrix::identity(7)).is_ok());
    assert!(AffineElement::identity().is_identity());
}
