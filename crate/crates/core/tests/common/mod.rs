#![allow(dead_code)]

use g2morse::group::{examples, validate_joyce, JoyceOrbifold, OrbifoldGroup};
use g2morse::linalg::Matrix;
use g2morse::scalar::{q, qi, Q};
use g2morse::ExteriorForm;
use proptest::prelude::*;

pub fn small_q() -> impl Strategy<Value = Q> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

pub fn form(grade: usize) -> impl Strategy<Value = ExteriorForm<Q>> {
    let n = g2morse::exterior::dim_of_grade(grade);
    proptest::collection::vec(small_q(), n).prop_map(move |c| ExteriorForm::from_coeffs(grade, c).unwrap())
}

/// Upper triangular frames with positive diagonal.
pub fn frame() -> impl Strategy<Value = Matrix<Q>> {
    (
        proptest::collection::vec(1i64..=3, 7),
        proptest::collection::vec(-1i64..=1, 21),
    )
        .prop_map(|(diag, off)| {
            let mut it = off.into_iter();
            Matrix::from_fn(7, 7, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => qi(diag[i]),
                std::cmp::Ordering::Less => q(it.next().unwrap(), 2),
                std::cmp::Ordering::Greater => qi(0),
            })
        })
}

/// Positive diagonal frames; they commute with every sign-diagonal group.
pub fn diagonal_frame() -> impl Strategy<Value = Matrix<Q>> {
    proptest::collection::vec((1i64..=3, 1i64..=2), 7).prop_map(|d| {
        Matrix::from_fn(7, 7, |i, j| if i == j { q(d[i].0, d[i].1) } else { qi(0) })
    })
}

pub fn euclidean(g: OrbifoldGroup) -> JoyceOrbifold {
    validate_joyce(g, Matrix::identity(7)).unwrap()
}

pub fn example_groups() -> Vec<(&'static str, OrbifoldGroup)> {
    vec![
        ("T7", examples::torus()),
        ("M1", examples::m1()),
        ("M2", examples::m2()),
        ("M3", examples::m3()),
    ]
}

pub fn half() -> impl Strategy<Value = Q> {
    prop_oneof![Just(qi(0)), Just(q(1, 2))]
}
