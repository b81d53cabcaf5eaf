//! The model 3-form φ₀, its dual ψ₀ = ⋆φ₀, the type decomposition of forms
//! into irreducible G2 pieces, and the pointwise maps I and J.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exterior::{
    dim_of_grade, pullback_matrix, star_matrix, ExteriorForm, Metric7, MultiIndex, DIM,
};
use crate::linalg::{orthonormalize, Matrix};
use crate::scalar::{q, qi, Scalar, Q};

/// `θ^{123} + θ^{145} + θ^{167} + θ^{246} − θ^{257} − θ^{347} − θ^{356}`.
pub fn standard_phi0() -> ExteriorForm<Q> {
    const TERMS: [(i64, [usize; 3]); 7] = [
        (1, [1, 2, 3]),
        (1, [1, 4, 5]),
        (1, [1, 6, 7]),
        (1, [2, 4, 6]),
        (-1, [2, 5, 7]),
        (-1, [3, 4, 7]),
        (-1, [3, 5, 6]),
    ];
    TERMS.iter().fold(ExteriorForm::zero(3), |acc, (c, idx)| {
        &acc + &ExteriorForm::term(qi(*c), idx)
    })
}

/// `ψ₀ = ⋆φ₀` for the Euclidean metric.
pub fn standard_psi0() -> ExteriorForm<Q> {
    standard_phi0().hodge_star(&Metric7::euclidean())
}

/// An irreducible summand `Λ^grade_component`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeLabel {
    grade: usize,
    component: usize,
}

impl TypeLabel {
    /// Grades 2 and 3 carry {7, 14} and {1, 7, 27}; grades 5 and 4 mirror them
    /// through the Hodge star.
    pub fn new(grade: usize, component: usize) -> Result<Self> {
        if Self::components(grade).contains(&component) {
            Ok(Self { grade, component })
        } else {
            Err(Error::InvalidLabel { grade, component })
        }
    }

    pub fn components(grade: usize) -> &'static [usize] {
        match grade {
            0 | 7 => &[1],
            1 | 6 => &[7],
            2 | 5 => &[7, 14],
            3 | 4 => &[1, 7, 27],
            _ => &[],
        }
    }

    pub fn all_of_grade(grade: usize) -> Vec<TypeLabel> {
        Self::components(grade)
            .iter()
            .map(|&component| TypeLabel { grade, component })
            .collect()
    }

    pub fn grade(self) -> usize {
        self.grade
    }

    pub fn component(self) -> usize {
        self.component
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ^{}_{}", self.grade, self.component)
    }
}

fn unit(i: usize) -> Vec<Q> {
    let mut v = vec![qi(0); DIM];
    v[i] = qi(1);
    v
}

/// Spanning vectors of a type space for φ₀, straight from the defining conditions.
fn standard_spanning_set(grade: usize, component: usize) -> Vec<Vec<Q>> {
    let phi = standard_phi0();
    let psi = standard_psi0();
    match (grade, component) {
        (0, 1) | (7, 1) => vec![vec![qi(1)]],
        (1, 7) | (6, 7) => (0..DIM).map(unit).collect(),
        (2, 7) => (0..DIM)
            .map(|i| phi.interior(&unit(i)).expect("grade 3").into_coeffs())
            .collect(),
        (2, 14) => psi.wedge_matrix(2).expect("2 + 4 ≤ 7").null_space(),
        (3, 1) => vec![phi.into_coeffs()],
        (3, 7) => (0..DIM)
            .map(|i| psi.interior(&unit(i)).expect("grade 4").into_coeffs())
            .collect(),
        (3, 27) => phi
            .wedge_matrix(3)
            .expect("3 + 3 ≤ 7")
            .vstack(&psi.wedge_matrix(3).expect("4 + 3 ≤ 7"))
            .null_space(),
        _ => unreachable!("label validated"),
    }
}

struct StandardTables {
    exact: BTreeMap<TypeLabel, Matrix<Q>>,
    float: BTreeMap<TypeLabel, Matrix<f64>>,
}

fn standard_tables() -> &'static StandardTables {
    static TABLES: OnceLock<StandardTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut exact = BTreeMap::new();
        for grade in 0..=3 {
            for label in TypeLabel::all_of_grade(grade) {
                let span = standard_spanning_set(grade, label.component);
                exact.insert(label, Matrix::projector_onto(dim_of_grade(grade), &span));
            }
        }
        let g = Metric7::<Q>::euclidean();
        for grade in 4..=7 {
            let dual = DIM - grade;
            let to_dual = star_matrix(&g, grade);
            let back = star_matrix(&g, dual);
            for label in TypeLabel::all_of_grade(grade) {
                let p = &exact[&TypeLabel::new(dual, label.component).expect("mirrored")];
                exact.insert(label, back.mul(p).mul(&to_dual));
            }
        }
        let float = exact.iter().map(|(k, v)| (*k, v.to_f64())).collect();
        StandardTables { exact, float }
    })
}

/// Exact orthogonal projector onto a type space of φ₀.
pub fn standard_projector(label: TypeLabel) -> &'static Matrix<Q> {
    &standard_tables().exact[&label]
}

/// Floating copy of [`standard_projector`].
pub fn standard_projector_f64(label: TypeLabel) -> &'static Matrix<f64> {
    &standard_tables().float[&label]
}

/// Apply a real projector to complex coefficients.
pub fn apply_real_matrix(m: &Matrix<f64>, v: &[crate::scalar::C64]) -> Vec<crate::scalar::C64> {
    assert_eq!(m.cols(), v.len());
    (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .zip(v)
                .fold(crate::scalar::C64::new(0.0, 0.0), |acc, (a, b)| acc + b * *a)
        })
        .collect()
}

/// A flat G2 structure `φ = F^*φ₀` on R^7 with rational frame `F`.
#[derive(Clone, Debug)]
pub struct G2Structure {
    frame: Matrix<Q>,
    phi: ExteriorForm<Q>,
    psi: ExteriorForm<Q>,
    metric: Metric7<Q>,
    projectors: BTreeMap<TypeLabel, Matrix<Q>>,
}

impl G2Structure {
    /// The model structure φ₀ with the Euclidean metric.
    pub fn standard() -> Self {
        Self::from_frame(Matrix::identity(DIM)).expect("identity frame")
    }

    pub fn from_frame(frame: Matrix<Q>) -> Result<Self> {
        let metric = Metric7::from_frame(&frame)?;
        let phi = standard_phi0().pullback(&frame);
        let psi = phi.hodge_star(&metric);
        let check = phi.wedge(&psi)?;
        if check != metric.volume_form().scale(&qi(7)) {
            return Err(Error::BadFrame);
        }
        let projectors = if frame == Matrix::identity(DIM) {
            standard_tables().exact.clone()
        } else {
            let inv = frame.inverse().ok_or(Error::BadFrame)?;
            standard_tables()
                .exact
                .iter()
                .map(|(label, p0)| {
                    let l = pullback_matrix(&frame, label.grade);
                    let l_inv = pullback_matrix(&inv, label.grade);
                    (*label, l.mul(p0).mul(&l_inv))
                })
                .collect()
        };
        Ok(Self {
            frame,
            phi,
            psi,
            metric,
            projectors,
        })
    }

    pub fn frame(&self) -> &Matrix<Q> {
        &self.frame
    }

    pub fn phi(&self) -> &ExteriorForm<Q> {
        &self.phi
    }

    pub fn psi(&self) -> &ExteriorForm<Q> {
        &self.psi
    }

    pub fn metric(&self) -> &Metric7<Q> {
        &self.metric
    }

    pub fn is_standard(&self) -> bool {
        self.frame == Matrix::identity(DIM)
    }

    /// Exact `g_φ`-orthogonal projector onto the labeled component.
    pub fn projector(&self, label: TypeLabel) -> &Matrix<Q> {
        &self.projectors[&label]
    }

    pub fn project(&self, label: TypeLabel, a: &ExteriorForm<Q>) -> Result<ExteriorForm<Q>> {
        if a.grade() != label.grade {
            return Err(Error::GradeMismatch {
                expected: label.grade,
                found: a.grade(),
            });
        }
        ExteriorForm::from_coeffs(a.grade(), self.projector(label).mul_vec(a.coeffs()))
    }

    /// A `g_φ`-orthonormal basis of the labeled component.
    pub fn type_basis(&self, label: TypeLabel) -> Vec<ExteriorForm<f64>> {
        let grade = label.grade;
        let span: Vec<Vec<f64>> = if grade <= 3 {
            standard_spanning_set(grade, label.component)
        } else {
            (0..dim_of_grade(grade))
                .map(|c| standard_projector(label).column(c))
                .collect()
        }
        .iter()
        .map(|v| v.iter().map(f64::from_q).collect())
        .collect();
        // F^* is an isometry from the Euclidean metric to g_φ.
        let pull = pullback_matrix(&self.frame, grade).to_f64();
        orthonormalize(&span)
            .into_iter()
            .map(|v| {
                ExteriorForm::from_coeffs(grade, pull.mul_vec(&v)).expect("grade length")
            })
            .collect()
    }

    fn combine(&self, grade: usize, weights: &[(usize, Q)], a: &ExteriorForm<Q>) -> Result<ExteriorForm<Q>> {
        if a.grade() != grade {
            return Err(Error::GradeMismatch {
                expected: grade,
                found: a.grade(),
            });
        }
        let mut out = ExteriorForm::zero(grade);
        for (component, w) in weights {
            let label = TypeLabel::new(grade, *component)?;
            out = &out + &self.project(label, a)?.scale(w);
        }
        Ok(out)
    }

    /// `I = (4/3)π₁ + π₇ − π₂₇` on 3-forms.
    pub fn apply_i(&self, a: &ExteriorForm<Q>) -> Result<ExteriorForm<Q>> {
        self.combine(3, &[(1, q(4, 3)), (7, qi(1)), (27, qi(-1))], a)
    }

    /// `J = (3/4)π₁ + π₇ − π₂₇` on 4-forms.
    pub fn apply_j(&self, a: &ExteriorForm<Q>) -> Result<ExteriorForm<Q>> {
        self.combine(4, &[(1, q(3, 4)), (7, qi(1)), (27, qi(-1))], a)
    }

    /// Whether `x ↦ A x` preserves φ, i.e. `F A F⁻¹ ∈ G2`.
    pub fn is_g2_element(&self, a: &Matrix<Q>) -> bool {
        a.rows() == DIM && a.cols() == DIM && self.phi.pullback(a) == self.phi
    }
}

/// Indices of the nonzero coefficients of a form, for diagnostics.
pub fn support(a: &ExteriorForm<Q>) -> Vec<MultiIndex> {
    MultiIndex::all(a.grade())
        .zip(a.coeffs())
        .filter(|(_, c)| !c.is_negligible())
        .map(|(m, _)| m)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(g: usize, c: usize) -> TypeLabel {
        TypeLabel::new(g, c).unwrap()
    }

    #[test]
    fn phi0_coefficients() {
        let phi = standard_phi0();
        assert_eq!(phi.coeff(MultiIndex::new(&[1, 2, 3]).unwrap()), &qi(1));
        assert_eq!(phi.coeff(MultiIndex::new(&[2, 5, 7]).unwrap()), &qi(-1));
        assert_eq!(phi.nonzero_count(), 7);
    }

    #[test]
    fn phi_wedge_psi_is_seven_vol() {
        let wedge = standard_phi0().wedge(&standard_psi0()).unwrap();
        assert_eq!(wedge, ExteriorForm::volume(qi(7)));
    }

    #[test]
    fn e1_interior_phi0() {
        let got = standard_phi0().interior(&unit(0)).unwrap();
        let expect = [[2, 3], [4, 5], [6, 7]]
            .iter()
            .fold(ExteriorForm::zero(2), |acc, idx| &acc + &ExteriorForm::term(qi(1), idx));
        assert_eq!(got, expect);
    }

    #[test]
    fn type_dimensions() {
        let s = G2Structure::standard();
        for (g, c) in [(2, 7), (2, 14), (3, 1), (3, 7), (3, 27), (4, 27), (5, 14)] {
            assert_eq!(s.type_basis(label(g, c)).len(), c, "{g} {c}");
            assert_eq!(s.projector(label(g, c)).rank(), c);
        }
    }

    #[test]
    fn type_basis_is_orthonormal() {
        let s = G2Structure::standard();
        let basis = s.type_basis(label(3, 27));
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((a.dot(b) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn phi_is_pure_type_one() {
        let s = G2Structure::standard();
        let phi = s.phi().clone();
        assert_eq!(s.project(label(3, 1), &phi).unwrap(), phi);
        assert!(s.project(label(3, 7), &phi).unwrap().is_zero());
        assert!(s.project(label(3, 27), &phi).unwrap().is_zero());
        assert_eq!(s.apply_i(&phi).unwrap(), phi.scale(&q(4, 3)));
        let psi = s.psi().clone();
        assert_eq!(s.apply_j(&psi).unwrap(), psi.scale(&q(3, 4)));
    }

    #[test]
    fn type_seven_two_form_has_no_fourteen_part() {
        let s = G2Structure::standard();
        let a = s.phi().interior(&unit(0)).unwrap();
        assert!(s.project(label(2, 14), &a).unwrap().is_zero());
    }

    #[test]
    fn label_validation() {
        assert!(TypeLabel::new(2, 1).is_err());
        assert!(TypeLabel::new(3, 14).is_err());
        assert!(TypeLabel::new(8, 1).is_err());
    }

    #[test]
    fn projection_rejects_wrong_grade() {
        let s = G2Structure::standard();
        let err = s.project(label(2, 7), s.phi()).unwrap_err();
        assert_eq!(err, Error::GradeMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn g2_membership() {
        let s = G2Structure::standard();
        let diag = |d: [i64; 7]| Matrix::from_fn(DIM, DIM, |r, c| if r == c { qi(d[r]) } else { qi(0) });
        assert!(s.is_g2_element(&Matrix::identity(DIM)));
        assert!(s.is_g2_element(&diag([1, 1, 1, -1, -1, -1, -1])));
        assert!(!s.is_g2_element(&diag([-1, 1, 1, 1, 1, 1, 1])));
    }

    #[test]
    fn rational_frame_projectors_are_g_orthogonal() {
        let mut f = Matrix::<Q>::identity(DIM);
        f[(0, 1)] = q(1, 2);
        f[(2, 2)] = qi(2);
        let s = G2Structure::from_frame(f).unwrap();
        let psi = s.psi().clone();
        assert_eq!(s.phi().wedge(&psi).unwrap(), s.metric().volume_form().scale(&qi(7)));
        let p27 = s.projector(label(3, 27));
        assert_eq!(&p27.mul(p27), p27);
        assert_eq!(s.project(label(3, 1), s.phi()).unwrap(), s.phi().clone());
        for b in s.type_basis(label(2, 14)) {
            let g = s.metric().clone();
            let gf = Metric7::<f64>::from_gram(g.gram().to_f64()).unwrap();
            assert!((b.inner(&b, &gf).unwrap() - 1.0).abs() < 1e-10);
        }
    }
}
