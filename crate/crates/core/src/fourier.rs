//! Trigonometric-polynomial forms on a flat G2 torus and the refined exterior
//! derivatives acting on them mode by mode.
//!
//! A mode is an integer covector `k`, standing for `χ_k(x) = exp(2πi k·x)`.
//! Coefficients are stored in the orthonormal coframe `y = F x`, where the
//! structure is the model φ₀ and the metric is Euclidean; the mode then acts
//! through its wave covector `k' = F^{-T} k`, and `‖k‖²_g = |k'|²`.
//!
//! Every derivative contributes a factor `2π`. Forms carry the exponent
//! `pow2pi` of that factor separately, so `d` multiplies by `i k'∧` and bumps
//! the exponent, and coefficients stay of moderate size.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exterior::{dim_of_grade, star_matrix, ExteriorForm, Metric7, DIM};
use crate::g2::{apply_real_matrix, standard_phi0, standard_projector_f64, standard_psi0, G2Structure, TypeLabel};
use crate::linalg::Matrix;
use crate::scalar::{Scalar, C64, Q};

pub type Mode = [i32; DIM];

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// The torus `R^7 / Z^7` with a constant G2 structure.
#[derive(Debug)]
pub struct FlatTorus {
    structure: G2Structure,
    wave: Matrix<f64>,
    gram_inverse: Matrix<Q>,
}

impl FlatTorus {
    pub fn new(structure: G2Structure) -> Arc<Self> {
        let inv = structure.frame().inverse().expect("validated frame");
        let wave = inv.transpose().to_f64();
        let gram_inverse = inv.mul(&inv.transpose());
        Arc::new(Self {
            structure,
            wave,
            gram_inverse,
        })
    }

    pub fn standard() -> Arc<Self> {
        Self::new(G2Structure::standard())
    }

    pub fn structure(&self) -> &G2Structure {
        &self.structure
    }

    /// `k' = F^{-T} k`, the mode's covector in the orthonormal coframe.
    pub fn wave(&self, k: &Mode) -> Vec<f64> {
        let kf: Vec<f64> = k.iter().map(|&x| f64::from(x)).collect();
        self.wave.mul_vec(&kf)
    }

    pub fn norm_sq(&self, k: &Mode) -> f64 {
        self.wave(k).iter().map(|x| x * x).sum()
    }

    /// `‖k‖²_g = k^T G^{-1} k` exactly.
    pub fn norm_sq_exact(&self, k: &Mode) -> Q {
        let kq: Vec<Q> = k.iter().map(|&x| Q::from_i64(i64::from(x))).collect();
        let g = self.gram_inverse.mul_vec(&kq);
        kq.iter().zip(&g).fold(Q::zero(), |acc, (a, b)| acc + a * b)
    }
}

fn complexify(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

struct Constants {
    phi: ExteriorForm<C64>,
    psi: ExteriorForm<C64>,
    /// `α ↦ ⋆(α ∧ ψ)`, from 1-forms to 2-forms.
    star_wedge_psi: Matrix<f64>,
}

fn constants() -> &'static Constants {
    static C: OnceLock<Constants> = OnceLock::new();
    C.get_or_init(|| {
        let psi = standard_psi0();
        let wedge = psi.wedge_matrix(1).expect("4 + 1 ≤ 7");
        let star = star_matrix(&Metric7::<Q>::euclidean(), 5);
        Constants {
            phi: standard_phi0().map(C64::from_q),
            psi: psi.map(C64::from_q),
            star_wedge_psi: star.mul(&wedge).to_f64(),
        }
    })
}

/// A finitely supported form `Σ_k χ_k α_k` on the torus, times `(2π)^pow2pi`.
#[derive(Clone)]
pub struct FourierForm {
    torus: Arc<FlatTorus>,
    grade: usize,
    pow2pi: i32,
    modes: BTreeMap<Mode, ExteriorForm<C64>>,
}

impl fmt::Debug for FourierForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FourierForm")
            .field("grade", &self.grade)
            .field("pow2pi", &self.pow2pi)
            .field("modes", &self.modes)
            .finish()
    }
}

impl FourierForm {
    pub fn zero(torus: &Arc<FlatTorus>, grade: usize) -> Self {
        Self {
            torus: Arc::clone(torus),
            grade,
            pow2pi: 0,
            modes: BTreeMap::new(),
        }
    }

    pub fn from_mode(torus: &Arc<FlatTorus>, k: Mode, coeff: ExteriorForm<C64>) -> Self {
        let mut f = Self::zero(torus, coeff.grade());
        f.insert(k, coeff);
        f
    }

    pub fn constant(torus: &Arc<FlatTorus>, coeff: ExteriorForm<C64>) -> Self {
        Self::from_mode(torus, [0; DIM], coeff)
    }

    fn insert(&mut self, k: Mode, coeff: ExteriorForm<C64>) {
        assert_eq!(coeff.grade(), self.grade);
        if coeff.max_abs() == 0.0 {
            self.modes.remove(&k);
        } else {
            self.modes.insert(k, coeff);
        }
    }

    pub fn torus(&self) -> &Arc<FlatTorus> {
        &self.torus
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn pow2pi(&self) -> i32 {
        self.pow2pi
    }

    pub fn modes(&self) -> &BTreeMap<Mode, ExteriorForm<C64>> {
        &self.modes
    }

    pub fn coefficient(&self, k: &Mode) -> ExteriorForm<C64> {
        self.modes
            .get(k)
            .cloned()
            .unwrap_or_else(|| ExteriorForm::zero(self.grade))
    }

    /// Largest coefficient modulus, with the `(2π)` power left factored out.
    pub fn max_abs(&self) -> f64 {
        self.modes.values().map(ExteriorForm::max_abs).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.modes.is_empty()
    }

    /// Apply a pointwise map to every mode.
    fn map_modes(
        &self,
        grade: usize,
        pow_delta: i32,
        f: impl Fn(&Mode, &ExteriorForm<C64>) -> ExteriorForm<C64>,
    ) -> Self {
        let mut out = Self::zero(&self.torus, grade);
        out.pow2pi = self.pow2pi + pow_delta;
        for (k, a) in &self.modes {
            out.insert(*k, f(k, a));
        }
        out
    }

    /// Replace every coefficient `α_k` by `f(k, α_k)`, keeping grade and scale.
    pub fn map_each_mode(&self, f: impl Fn(&Mode, &ExteriorForm<C64>) -> ExteriorForm<C64>) -> Self {
        self.map_modes(self.grade, 0, f)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.grade != other.grade {
            return Err(Error::GradeMismatch {
                expected: self.grade,
                found: other.grade,
            });
        }
        if self.pow2pi != other.pow2pi {
            return Err(Error::ScaleMismatch(self.pow2pi, other.pow2pi));
        }
        Ok(())
    }

    /// Sum of two forms; a zero summand adopts the other's `2π` power.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if other.is_zero() || self.is_zero() {
            let (base, zero) = if other.is_zero() { (self, other) } else { (other, self) };
            if base.grade != zero.grade {
                return Err(Error::GradeMismatch {
                    expected: self.grade,
                    found: other.grade,
                });
            }
            return Ok(base.clone());
        }
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, b) in &other.modes {
            let sum = &out.coefficient(k) + b;
            out.insert(*k, sum);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map_modes(self.grade, 0, |_, a| a.scale(&s))
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    /// Multiply the factored power of `2π` into the coefficients.
    pub fn rescale_to(&self, pow2pi: i32) -> Self {
        let factor = TWO_PI.powi(self.pow2pi - pow2pi);
        let mut out = self.scale_real(factor);
        out.pow2pi = pow2pi;
        out
    }

    /// Plain coefficient form with every factor of `2π` multiplied in.
    pub fn evaluated(&self) -> Self {
        self.rescale_to(0)
    }

    /// L² inner product for the unit-volume normalized measure, conjugate-linear
    /// in `self`, with the `2π` powers multiplied in.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.grade != other.grade {
            return Err(Error::GradeMismatch {
                expected: self.grade,
                found: other.grade,
            });
        }
        let raw = self
            .modes
            .iter()
            .filter_map(|(k, a)| other.modes.get(k).map(|b| a.dot(b)))
            .fold(C64::zero(), |acc, x| acc + x);
        Ok(raw * TWO_PI.powi(self.pow2pi + other.pow2pi))
    }

    pub fn l2_norm(&self) -> f64 {
        self.inner(self).expect("same grade").re.max(0.0).sqrt()
    }

    /// `d(χ_k α) = 2πi χ_k k' ∧ α`.
    pub fn d(&self) -> Result<Self> {
        if self.grade >= DIM {
            return Err(Error::GradeOverflow(1, self.grade));
        }
        let torus = Arc::clone(&self.torus);
        Ok(self.map_modes(self.grade + 1, 1, move |k, a| {
            let kw = ExteriorForm::covector(&complexify(&torus.wave(k)));
            kw.wedge(a).expect("grade checked").scale(&C64::new(0.0, 1.0))
        }))
    }

    /// `d^*(χ_k α) = −2πi χ_k k' ⌟ α`.
    pub fn d_star(&self) -> Result<Self> {
        if self.grade == 0 {
            return Err(Error::InteriorOfScalar);
        }
        let torus = Arc::clone(&self.torus);
        Ok(self.map_modes(self.grade - 1, 1, move |k, a| {
            a.interior(&complexify(&torus.wave(k)))
                .expect("grade ≥ 1")
                .scale(&C64::new(0.0, -1.0))
        }))
    }

    /// Hodge Laplacian, acting on `χ_k α` by `4π²‖k‖²_g`.
    pub fn laplacian(&self) -> Self {
        let torus = Arc::clone(&self.torus);
        self.map_modes(self.grade, 2, move |k, a| a.scale(&C64::new(torus.norm_sq(k), 0.0)))
    }

    /// Green's operator: inverse Laplacian on nonconstant modes, zero on constants.
    pub fn green(&self) -> Self {
        let torus = Arc::clone(&self.torus);
        self.map_modes(self.grade, -2, move |k, a| {
            if *k == [0; DIM] {
                ExteriorForm::zero(a.grade())
            } else {
                a.scale(&C64::new(1.0 / torus.norm_sq(k), 0.0))
            }
        })
    }

    /// The constant (harmonic) part.
    pub fn harmonic_part(&self) -> Self {
        self.map_modes(self.grade, 0, |k, a| {
            if *k == [0; DIM] {
                a.clone()
            } else {
                ExteriorForm::zero(a.grade())
            }
        })
    }

    /// Hodge star of the structure's metric.
    pub fn star(&self) -> Self {
        let g = Metric7::<C64>::euclidean();
        self.map_modes(DIM - self.grade, 0, move |_, a| a.hodge_star(&g))
    }

    /// `self ∧ c` for a constant form `c`.
    pub fn wedge_const(&self, c: &ExteriorForm<C64>) -> Result<Self> {
        if self.grade + c.grade() > DIM {
            return Err(Error::GradeOverflow(self.grade, c.grade()));
        }
        Ok(self.map_modes(self.grade + c.grade(), 0, |_, a| a.wedge(c).expect("grade checked")))
    }

    pub fn wedge_phi(&self) -> Result<Self> {
        self.wedge_const(&constants().phi)
    }

    pub fn wedge_psi(&self) -> Result<Self> {
        self.wedge_const(&constants().psi)
    }

    /// `f ↦ f φ` for a function.
    pub fn times_phi(&self) -> Result<Self> {
        self.expect_grade(0)?;
        self.wedge_phi()
    }

    /// Apply a constant real matrix on the coefficients.
    pub fn apply_matrix(&self, m: &Matrix<f64>, grade: usize) -> Self {
        assert_eq!(m.cols(), dim_of_grade(self.grade));
        assert_eq!(m.rows(), dim_of_grade(grade));
        self.map_modes(grade, 0, |_, a| {
            ExteriorForm::from_coeffs(grade, apply_real_matrix(m, a.coeffs())).expect("shape")
        })
    }

    /// Orthogonal projection onto a type component.
    pub fn project(&self, label: TypeLabel) -> Result<Self> {
        self.expect_grade(label.grade())?;
        Ok(self.apply_matrix(standard_projector_f64(label), self.grade))
    }

    /// `I = (4/3)π₁ + π₇ − π₂₇` on 3-forms.
    pub fn apply_i(&self) -> Result<Self> {
        self.weighted_types(3, &[(1, 4.0 / 3.0), (7, 1.0), (27, -1.0)])
    }

    /// `J = (3/4)π₁ + π₇ − π₂₇` on 4-forms.
    pub fn apply_j(&self) -> Result<Self> {
        self.weighted_types(4, &[(1, 0.75), (7, 1.0), (27, -1.0)])
    }

    fn weighted_types(&self, grade: usize, weights: &[(usize, f64)]) -> Result<Self> {
        self.expect_grade(grade)?;
        let n = dim_of_grade(grade);
        let m = weights.iter().fold(Matrix::zeros(n, n), |acc, (c, w)| {
            let p = standard_projector_f64(TypeLabel::new(grade, *c).expect("valid"));
            acc.add(&p.scale(w))
        });
        Ok(self.apply_matrix(&m, grade))
    }

    /// Per-mode conjugate symmetry `α_{−k} = conj(α_k)`, to tolerance.
    pub fn is_real(&self, tol: f64) -> bool {
        self.modes.iter().all(|(k, a)| {
            let minus = k.map(|x| -x);
            let b = self.coefficient(&minus).map(|c| c.conj());
            (a - &b).max_abs() <= tol
        })
    }

    /// `(f + conj f)/2`.
    pub fn real_part(&self) -> Self {
        let mut out = self.scale_real(0.5);
        for (k, a) in &self.modes {
            let minus = k.map(|x| -x);
            let add = a.map(|c| c.conj() * 0.5);
            let sum = &out.coefficient(&minus) + &add;
            out.insert(minus, sum);
        }
        out
    }

    fn expect_grade(&self, grade: usize) -> Result<()> {
        if self.grade == grade {
            Ok(())
        } else {
            Err(Error::GradeMismatch {
                expected: grade,
                found: self.grade,
            })
        }
    }
}

/// Distance between two forms after bringing them to a common `2π` power.
pub fn residual(a: &FourierForm, b: &FourierForm) -> f64 {
    let b = if b.pow2pi == a.pow2pi || b.is_zero() {
        let mut b = b.clone();
        b.pow2pi = a.pow2pi;
        b
    } else {
        b.rescale_to(a.pow2pi)
    };
    a.try_sub(&b).expect("same grade").max_abs()
}

/// Settings for random trigonometric forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomForms {
    /// Largest `|k_i|` of a drawn mode; `0` gives constant forms.
    pub max_norm: i32,
    /// Number of drawn modes (duplicates merge).
    pub modes: usize,
}

impl Default for RandomForms {
    fn default() -> Self {
        Self {
            max_norm: 3,
            modes: 3,
        }
    }
}

impl RandomForms {
    /// Coefficients uniform in `[−1, 1] + i[−1, 1]`.
    pub fn sample<R: Rng + ?Sized>(&self, torus: &Arc<FlatTorus>, grade: usize, rng: &mut R) -> FourierForm {
        let mut f = FourierForm::zero(torus, grade);
        for _ in 0..self.modes.max(1) {
            let k: Mode = std::array::from_fn(|_| rng.gen_range(-self.max_norm..=self.max_norm));
            let coeffs = (0..dim_of_grade(grade))
                .map(|_| C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
                .collect();
            let a = ExteriorForm::from_coeffs(grade, coeffs).expect("length");
            let sum = &f.coefficient(&k) + &a;
            f.insert(k, sum);
        }
        f
    }

    pub fn sample_typed<R: Rng + ?Sized>(&self, torus: &Arc<FlatTorus>, label: TypeLabel, rng: &mut R) -> FourierForm {
        self.sample(torus, label.grade(), rng)
            .project(label)
            .expect("grade matches")
    }
}

/// The refined exterior derivatives `d^p_q` between typed form bundles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RefinedOp {
    D1to7,
    D7to1,
    D7to7,
    D7to14,
    D14to7,
    D7to27,
    D27to7,
    D14to27,
    D27to14,
    D27to27,
}

/// Where a refined operator starts or lands: a grade and, if typed, a component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Slot {
    pub grade: usize,
    pub component: Option<usize>,
}

impl RefinedOp {
    pub const ALL: [RefinedOp; 10] = [
        RefinedOp::D1to7,
        RefinedOp::D7to1,
        RefinedOp::D7to7,
        RefinedOp::D7to14,
        RefinedOp::D14to7,
        RefinedOp::D7to27,
        RefinedOp::D27to7,
        RefinedOp::D14to27,
        RefinedOp::D27to14,
        RefinedOp::D27to27,
    ];

    fn types(self) -> (usize, usize) {
        match self {
            RefinedOp::D1to7 => (1, 7),
            RefinedOp::D7to1 => (7, 1),
            RefinedOp::D7to7 => (7, 7),
            RefinedOp::D7to14 => (7, 14),
            RefinedOp::D14to7 => (14, 7),
            RefinedOp::D7to27 => (7, 27),
            RefinedOp::D27to7 => (27, 7),
            RefinedOp::D14to27 => (14, 27),
            RefinedOp::D27to14 => (27, 14),
            RefinedOp::D27to27 => (27, 27),
        }
    }

    /// ASCII name such as `d^7_14`.
    pub fn name(self) -> String {
        let (p, q) = self.types();
        format!("d^{p}_{q}")
    }

    /// Functions for type 1, 1-forms for type 7, then Λ²₁₄ and Λ³₂₇.
    fn slot(component: usize) -> Slot {
        match component {
            1 => Slot { grade: 0, component: None },
            7 => Slot { grade: 1, component: None },
            14 => Slot { grade: 2, component: Some(14) },
            27 => Slot { grade: 3, component: Some(27) },
            _ => unreachable!(),
        }
    }

    pub fn domain(self) -> Slot {
        Self::slot(self.types().0)
    }

    pub fn codomain(self) -> Slot {
        Self::slot(self.types().1)
    }

    /// The formal adjoint partner.
    pub fn adjoint(self) -> RefinedOp {
        match self {
            RefinedOp::D1to7 => RefinedOp::D7to1,
            RefinedOp::D7to1 => RefinedOp::D1to7,
            RefinedOp::D7to14 => RefinedOp::D14to7,
            RefinedOp::D14to7 => RefinedOp::D7to14,
            RefinedOp::D7to27 => RefinedOp::D27to7,
            RefinedOp::D27to7 => RefinedOp::D7to27,
            RefinedOp::D14to27 => RefinedOp::D27to14,
            RefinedOp::D27to14 => RefinedOp::D14to27,
            op => op,
        }
    }
}

impl fmt::Display for RefinedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for RefinedOp {
    type Err = Error;

    /// Accepts `d^7_14`, `d7_14` and `d⁷₁₄`.
    fn from_str(s: &str) -> Result<Self> {
        let ascii: String = s
            .trim()
            .chars()
            .map(|c| match c {
                '⁰'..='⁹' | '¹' | '²' | '³' => superscript_digit(c),
                '₀'..='₉' => char::from_digit(c as u32 - '₀' as u32, 10).expect("digit"),
                _ => c,
            })
            .collect();
        let compact: String = ascii.chars().filter(|c| *c != '^').collect();
        RefinedOp::ALL
            .into_iter()
            .find(|op| {
                let (p, q) = op.types();
                compact == format!("d{p}_{q}")
            })
            .or_else(|| {
                // Unicode input has no separator between the two indices.
                RefinedOp::ALL.into_iter().find(|op| {
                    let (p, q) = op.types();
                    compact == format!("d{p}{q}")
                })
            })
            .ok_or_else(|| Error::UnknownOperator(s.to_string()))
    }
}

fn superscript_digit(c: char) -> char {
    match c {
        '¹' => '1',
        '²' => '2',
        '³' => '3',
        _ => char::from_digit(c as u32 - '⁰' as u32, 10).unwrap_or(c),
    }
}

/// Apply a refined operator.
///
/// Typed domains (Λ²₁₄, Λ³₂₇) are projected onto first; with `strict`, an
/// input with a component outside the domain is rejected instead.
pub fn refined(op: RefinedOp, f: &FourierForm, strict: bool) -> Result<FourierForm> {
    let dom = op.domain();
    f.expect_grade(dom.grade)?;
    let input = match dom.component {
        Some(c) => {
            let label = TypeLabel::new(dom.grade, c)?;
            let p = f.project(label)?;
            if strict && residual(f, &p) > 1e-9 * f.max_abs().max(1.0) {
                return Err(Error::WrongType(label.to_string()));
            }
            p
        }
        None => f.clone(),
    };
    let t = |g: usize, c: usize| TypeLabel::new(g, c).expect("valid");
    let c = constants();
    match op {
        RefinedOp::D1to7 => input.d(),
        RefinedOp::D7to1 => input.d_star(),
        // α ↦ ⋆ d(α ∧ ψ)
        RefinedOp::D7to7 => Ok(input.wedge_psi()?.d()?.star()),
        // α ↦ π₁₄ dα
        RefinedOp::D7to14 => input.d()?.project(t(2, 14)),
        RefinedOp::D14to7 => input.d_star(),
        // α ↦ π₂₇ d ⋆(α ∧ ψ)
        RefinedOp::D7to27 => input.apply_matrix(&c.star_wedge_psi, 2).d()?.project(t(3, 27)),
        RefinedOp::D27to7 => Ok(input
            .d_star()?
            .apply_matrix(&c.star_wedge_psi.transpose(), 1)),
        // β ↦ π₂₇ dβ
        RefinedOp::D14to27 => input.d()?.project(t(3, 27)),
        RefinedOp::D27to14 => input.d_star()?.project(t(2, 14)),
        // γ ↦ ⋆ π₂₇ dγ
        RefinedOp::D27to27 => Ok(input.d()?.project(t(4, 27))?.star()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(i: usize) -> Mode {
        let mut k = [0; DIM];
        k[i] = 1;
        k
    }

    fn one() -> C64 {
        C64::new(1.0, 0.0)
    }

    #[test]
    fn d_of_a_single_mode() {
        let t = FlatTorus::standard();
        let f = FourierForm::from_mode(&t, e(0), ExteriorForm::one());
        let df = f.d().unwrap();
        assert_eq!(df.pow2pi(), 1);
        let expect = ExteriorForm::term(C64::new(0.0, 1.0), &[1]);
        assert!((&df.coefficient(&e(0)) - &expect).max_abs() < 1e-15);
    }

    #[test]
    fn constants_are_closed_and_coclosed() {
        let t = FlatTorus::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let consts = RandomForms { max_norm: 0, modes: 1 };
        for grade in 1..DIM {
            let f = consts.sample(&t, grade, &mut rng);
            assert!(f.d().unwrap().is_zero());
            assert!(f.d_star().unwrap().is_zero());
            assert!(f.laplacian().is_zero());
            assert!(f.green().is_zero());
        }
    }

    #[test]
    fn laplacian_of_basic_mode() {
        let t = FlatTorus::standard();
        let f = FourierForm::from_mode(&t, e(0), ExteriorForm::term(one(), &[2, 3]));
        let lap = f.laplacian().evaluated();
        let expect = 4.0 * std::f64::consts::PI.powi(2);
        let pos = crate::exterior::MultiIndex::new(&[2, 3]).unwrap().position();
        assert!((lap.coefficient(&e(0)).coeffs()[pos].re - expect).abs() < 1e-12);
    }

    #[test]
    fn scale_mismatch_is_an_error() {
        let t = FlatTorus::standard();
        let f = FourierForm::from_mode(&t, e(1), ExteriorForm::term(one(), &[2]));
        let g = f.d_star().unwrap().d().unwrap();
        assert_eq!(f.try_add(&g).unwrap_err(), Error::ScaleMismatch(0, 2));
        assert!(residual(&f.laplacian(), &g.try_add(&f.d().unwrap().d_star().unwrap()).unwrap()) < 1e-12);
    }

    #[test]
    fn op_names_round_trip() {
        for op in RefinedOp::ALL {
            assert_eq!(op.name().parse::<RefinedOp>().unwrap(), op);
        }
        assert_eq!("d⁷₁₄".parse::<RefinedOp>().unwrap(), RefinedOp::D7to14);
        assert_eq!("d27_27".parse::<RefinedOp>().unwrap(), RefinedOp::D27to27);
        assert!(matches!("d^3_5".parse::<RefinedOp>(), Err(Error::UnknownOperator(_))));
    }

    #[test]
    fn strict_mode_rejects_untyped_input() {
        let t = FlatTorus::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = RandomForms::default().sample(&t, 2, &mut rng);
        assert!(matches!(
            refined(RefinedOp::D14to27, &f, true),
            Err(Error::WrongType(_))
        ));
        let typed = f.project(TypeLabel::new(2, 14).unwrap()).unwrap();
        let lax = refined(RefinedOp::D14to27, &f, false).unwrap();
        let strict = refined(RefinedOp::D14to27, &typed, true).unwrap();
        assert!(residual(&lax, &strict) < 1e-12);
    }

    #[test]
    fn real_part_is_real() {
        let t = FlatTorus::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = RandomForms::default().sample(&t, 3, &mut rng);
        assert!(f.real_part().is_real(1e-15));
        assert!(f.real_part().d().unwrap().is_real(1e-12));
    }

    #[test]
    fn exact_norm_matches_wave() {
        let mut frame = Matrix::<Q>::identity(DIM);
        frame[(0, 1)] = crate::scalar::q(1, 3);
        frame[(4, 4)] = crate::scalar::qi(2);
        let t = FlatTorus::new(G2Structure::from_frame(frame).unwrap());
        let k = [1, -2, 0, 3, 1, 0, 2];
        assert!((t.norm_sq(&k) - crate::scalar::q_to_f64(&t.norm_sq_exact(&k))).abs() < 1e-12);
    }
}
