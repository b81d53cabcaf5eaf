//! Closed-form μ₃ and μ₄ from the SU(3) trace polynomials.

use serde::Serialize;

use crate::group::{JoyceOrbifold, OrbifoldGroup};
use crate::linalg::Matrix;
use crate::scalar::{format_q, q, qi, Q};

/// Traces of `A`, `A²`, `A³`.
fn power_traces(a: &Matrix<Q>) -> (Q, Q, Q) {
    let a2 = a.mul(a);
    let a3 = a2.mul(a);
    (a.trace(), a2.trace(), a3.trace())
}

/// `(Tr(A)² − Tr(A²))/2 − 2 Tr(A) + 1`.
pub fn tr8_su3(a: &Matrix<Q>) -> Q {
    let (t1, t2, _) = power_traces(a);
    (&t1 * &t1 - &t2) * q(1, 2) - qi(2) * &t1 + qi(1)
}

/// `(Tr(A)³ + 2 Tr(A³) − 3 Tr(A²) Tr(A))/6 − (Tr(A)² − Tr(A²))/2 − 2`.
pub fn tr12_su3(a: &Matrix<Q>) -> Q {
    let (t1, t2, t3) = power_traces(a);
    (&t1 * &t1 * &t1 + qi(2) * &t3 - qi(3) * &t2 * &t1) * q(1, 6)
        - (&t1 * &t1 - &t2) * q(1, 2)
        - qi(2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantPair {
    pub mu3: Q,
    pub mu4: Q,
}

impl Serialize for InvariantPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("InvariantPair", 2)?;
        st.serialize_field("mu3", &format_q(&self.mu3))?;
        st.serialize_field("mu4", &format_q(&self.mu4))?;
        st.end()
    }
}

/// Group averages `−(1/|Γ|) Σ Tr₈(A)` and `−(1/|Γ|) Σ Tr₁₂(A)`.
pub fn group_invariants(group: &OrbifoldGroup) -> InvariantPair {
    let n = qi(group.order() as i64);
    let (s8, s12) = group
        .elements()
        .iter()
        .fold((qi(0), qi(0)), |(s8, s12), g| {
            (s8 + tr8_su3(g.matrix()), s12 + tr12_su3(g.matrix()))
        });
    InvariantPair {
        mu3: -s8 / &n,
        mu4: -s12 / n,
    }
}

pub fn mu_invariants(orbifold: &JoyceOrbifold) -> InvariantPair {
    group_invariants(orbifold.group())
}
