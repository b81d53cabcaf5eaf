//! Multilinear algebra on the exterior powers of (R^7)^*.
//!
//! A p-form is stored densely over the C(7, p) sorted multi-indices in
//! lexicographic order. Multi-indices are bitmasks internally (bit `i` is the
//! 1-based index `i + 1`) and are exposed with 1-based indices.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{format_q, parse_q, Scalar, Q};

pub const DIM: usize = 7;

struct IndexTables {
    /// `masks[p]` lists the grade-p masks in lexicographic order.
    masks: Vec<Vec<u8>>,
    /// Position of a mask within its grade.
    position: [usize; 128],
}

fn tables() -> &'static IndexTables {
    static TABLES: OnceLock<IndexTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut masks = vec![Vec::new(); DIM + 1];
        fn rec(start: usize, mask: u8, len: usize, masks: &mut Vec<Vec<u8>>) {
            masks[len].push(mask);
            for i in start..DIM {
                rec(i + 1, mask | (1 << i), len + 1, masks);
            }
        }
        // Depth-first generation visits each grade's masks in lexicographic order.
        rec(0, 0, 0, &mut masks);
        let mut position = [usize::MAX; 128];
        for grade in &masks {
            for (pos, &m) in grade.iter().enumerate() {
                position[m as usize] = pos;
            }
        }
        IndexTables { masks, position }
    })
}

/// Number of multi-indices of the given grade, C(7, grade).
pub fn dim_of_grade(grade: usize) -> usize {
    tables().masks[grade].len()
}

/// Sign of the permutation sorting the concatenation `I J` of two disjoint
/// index sets.
fn concat_sign(i: u8, j: u8) -> i32 {
    let mut inversions = 0;
    let mut rest = j;
    while rest != 0 {
        let b = rest.trailing_zeros();
        inversions += (i >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A strictly increasing sequence of indices in `1..=7`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(u8);

impl MultiIndex {
    /// Build from 1-based indices; `None` unless strictly increasing in 1..=7.
    pub fn new(indices: &[usize]) -> Option<Self> {
        let mut mask = 0u8;
        let mut last = 0;
        for &i in indices {
            if i <= last || i > DIM {
                return None;
            }
            mask |= 1 << (i - 1);
            last = i;
        }
        Some(Self(mask))
    }

    pub fn from_position(grade: usize, pos: usize) -> Self {
        Self(tables().masks[grade][pos])
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn position(self) -> usize {
        tables().position[self.0 as usize]
    }

    pub fn indices(self) -> Vec<usize> {
        (0..DIM).filter(|i| self.0 & (1 << i) != 0).map(|i| i + 1).collect()
    }

    pub fn complement(self) -> Self {
        Self(!self.0 & 0x7f)
    }

    /// All multi-indices of a grade, in lexicographic order.
    pub fn all(grade: usize) -> impl Iterator<Item = MultiIndex> {
        tables().masks[grade].iter().map(|&m| MultiIndex(m))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: String = self.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "θ^{{{digits}}}")
    }
}

/// A constant p-form on R^7.
#[derive(Clone, PartialEq)]
pub struct ExteriorForm<T> {
    grade: usize,
    coeffs: Vec<T>,
}

impl<T: fmt::Debug + Scalar> fmt::Debug for ExteriorForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-form[", self.grade)?;
        let mut first = true;
        for (pos, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{:?} {}", c, MultiIndex::from_position(self.grade, pos))?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> ExteriorForm<T> {
    pub fn zero(grade: usize) -> Self {
        assert!(grade <= DIM, "grade {grade} out of range");
        Self {
            grade,
            coeffs: vec![T::zero(); dim_of_grade(grade)],
        }
    }

    pub fn from_coeffs(grade: usize, coeffs: Vec<T>) -> Result<Self> {
        if grade > DIM {
            return Err(Error::GradeOverflow(grade, 0));
        }
        if coeffs.len() != dim_of_grade(grade) {
            return Err(Error::InvalidInput(format!(
                "grade {grade} needs {} coefficients, got {}",
                dim_of_grade(grade),
                coeffs.len()
            )));
        }
        Ok(Self { grade, coeffs })
    }

    /// The unit scalar 0-form.
    pub fn one() -> Self {
        Self {
            grade: 0,
            coeffs: vec![T::one()],
        }
    }

    pub fn basis(index: MultiIndex) -> Self {
        let mut form = Self::zero(index.grade());
        form.coeffs[index.position()] = T::one();
        form
    }

    /// `coeff * θ^{indices}` for strictly increasing 1-based indices.
    pub fn term(coeff: T, indices: &[usize]) -> Self {
        let index = MultiIndex::new(indices).expect("strictly increasing indices in 1..=7");
        let mut form = Self::zero(index.grade());
        form.coeffs[index.position()] = coeff;
        form
    }

    /// The 1-form with the given coefficients in the dual basis.
    pub fn covector(v: &[T]) -> Self {
        assert_eq!(v.len(), DIM);
        Self {
            grade: 1,
            coeffs: v.to_vec(),
        }
    }

    /// The volume form `θ^{1234567}` times `c`.
    pub fn volume(c: T) -> Self {
        Self {
            grade: DIM,
            coeffs: vec![c],
        }
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, index: MultiIndex) -> &T {
        assert_eq!(index.grade(), self.grade);
        &self.coeffs[index.position()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_negligible)
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ExteriorForm<U> {
        ExteriorForm {
            grade: self.grade,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.grade != other.grade {
            return Err(Error::GradeMismatch {
                expected: self.grade,
                found: other.grade,
            });
        }
        Ok(Self {
            grade: self.grade,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let grade = self.grade + other.grade;
        if grade > DIM {
            return Err(Error::GradeOverflow(self.grade, other.grade));
        }
        let mut out = Self::zero(grade);
        for (pa, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ia = tables().masks[self.grade][pa];
            for (pb, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ib = tables().masks[other.grade][pb];
                if ia & ib != 0 {
                    continue;
                }
                let pos = tables().position[(ia | ib) as usize];
                let prod = a.clone() * b.clone();
                out.coeffs[pos] = if concat_sign(ia, ib) > 0 {
                    out.coeffs[pos].clone() + prod
                } else {
                    out.coeffs[pos].clone() - prod
                };
            }
        }
        Ok(out)
    }

    /// Interior product `v ⌟ self` with a vector given in the standard basis.
    pub fn interior(&self, v: &[T]) -> Result<Self> {
        assert_eq!(v.len(), DIM);
        if self.grade == 0 {
            return Err(Error::InteriorOfScalar);
        }
        let mut out = Self::zero(self.grade - 1);
        for (pa, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mask = tables().masks[self.grade][pa];
            let mut rank = 0;
            for (i, vi) in v.iter().enumerate() {
                if mask & (1 << i) == 0 {
                    continue;
                }
                if !vi.is_zero() {
                    let pos = tables().position[(mask & !(1 << i)) as usize];
                    let prod = vi.clone() * a.clone();
                    out.coeffs[pos] = if rank % 2 == 0 {
                        out.coeffs[pos].clone() + prod
                    } else {
                        out.coeffs[pos].clone() - prod
                    };
                }
                rank += 1;
            }
        }
        Ok(out)
    }

    /// Hodge star for the metric `g`, fixed by `a ∧ ⋆b = <a, b>_g vol_g`.
    pub fn hodge_star(&self, g: &Metric7<T>) -> Self {
        let raised = if g.euclidean {
            self.coeffs.clone()
        } else {
            compound(&g.inverse, self.grade).mul_vec(&self.coeffs)
        };
        let mut out = Self::zero(DIM - self.grade);
        for (pos, a) in raised.into_iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mask = tables().masks[self.grade][pos];
            let comp = !mask & 0x7f;
            let val = a * g.vol.clone();
            out.coeffs[tables().position[comp as usize]] =
                if concat_sign(mask, comp) > 0 { val } else { -val };
        }
        out
    }

    /// Metric inner product `<self, other>_g`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self, g: &Metric7<T>) -> Result<T> {
        if self.grade != other.grade {
            return Err(Error::GradeMismatch {
                expected: self.grade,
                found: other.grade,
            });
        }
        let raised = if g.euclidean {
            other.coeffs.clone()
        } else {
            compound(&g.inverse, other.grade).mul_vec(&other.coeffs)
        };
        Ok(self
            .coeffs
            .iter()
            .zip(raised)
            .fold(T::zero(), |acc, (a, b)| acc + a.conj() * b))
    }

    /// Euclidean hermitian inner product of coefficient vectors.
    pub fn dot(&self, other: &Self) -> T {
        assert_eq!(self.grade, other.grade);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(T::zero(), |acc, (a, b)| acc + a.conj() * b.clone())
    }

    /// Pullback `A^*` of the form under the linear map `x ↦ A x`.
    pub fn pullback(&self, a: &Matrix<T>) -> Self {
        Self {
            grade: self.grade,
            coeffs: pullback_matrix(a, self.grade).mul_vec(&self.coeffs),
        }
    }

    /// Linear map `b ↦ self ∧ b` from grade `q` forms, as a matrix.
    pub fn wedge_matrix(&self, q: usize) -> Result<Matrix<T>> {
        if self.grade + q > DIM {
            return Err(Error::GradeOverflow(self.grade, q));
        }
        let cols: Vec<Vec<T>> = MultiIndex::all(q)
            .map(|idx| {
                self.wedge(&ExteriorForm::basis(idx))
                    .expect("grade checked")
                    .coeffs
            })
            .collect();
        Ok(Matrix::from_columns(dim_of_grade(self.grade + q), &cols))
    }
}

impl<T: Scalar> std::ops::Add for &ExteriorForm<T> {
    type Output = ExteriorForm<T>;
    fn add(self, rhs: Self) -> ExteriorForm<T> {
        self.try_add(rhs).expect("adding forms of different grades")
    }
}

impl<T: Scalar> std::ops::Sub for &ExteriorForm<T> {
    type Output = ExteriorForm<T>;
    fn sub(self, rhs: Self) -> ExteriorForm<T> {
        self.try_sub(rhs).expect("subtracting forms of different grades")
    }
}

impl<T: Scalar> std::ops::Neg for &ExteriorForm<T> {
    type Output = ExteriorForm<T>;
    fn neg(self) -> ExteriorForm<T> {
        self.scale(&-T::one())
    }
}

/// The p-th compound matrix: entry `(I, J)` is the minor `det M[I, J]`.
pub fn compound<T: Scalar>(m: &Matrix<T>, p: usize) -> Matrix<T> {
    assert_eq!((m.rows(), m.cols()), (DIM, DIM));
    let columns: Vec<ExteriorForm<T>> = (0..DIM)
        .map(|j| ExteriorForm::covector(&m.column(j)))
        .collect();
    let cols: Vec<Vec<T>> = MultiIndex::all(p)
        .map(|idx| {
            idx.indices()
                .iter()
                .fold(ExteriorForm::one(), |acc, &j| {
                    acc.wedge(&columns[j - 1]).expect("grade ≤ 7")
                })
                .coeffs
        })
        .collect();
    Matrix::from_columns(dim_of_grade(p), &cols)
}

/// Matrix of the pullback `A^*` on grade-p coefficient vectors.
///
/// With `(A^*ω)(u_1, ..., u_p) = ω(A u_1, ..., A u_p)`, the pullback of the
/// covector `θ^j` is row `j` of `A`, so this is the compound of `A^T`.
pub fn pullback_matrix<T: Scalar>(a: &Matrix<T>, p: usize) -> Matrix<T> {
    compound(&a.transpose(), p)
}

/// Matrix of the interior product `a ↦ v ⌟ a` on grade-p forms.
pub fn interior_matrix<T: Scalar>(v: &[T], p: usize) -> Matrix<T> {
    assert!(p >= 1);
    let cols: Vec<Vec<T>> = MultiIndex::all(p)
        .map(|idx| {
            ExteriorForm::basis(idx)
                .interior(v)
                .expect("p ≥ 1")
                .coeffs
        })
        .collect();
    Matrix::from_columns(dim_of_grade(p - 1), &cols)
}

/// Matrix of the Hodge star on grade-p forms.
pub fn star_matrix<T: Scalar>(g: &Metric7<T>, p: usize) -> Matrix<T> {
    let cols: Vec<Vec<T>> = MultiIndex::all(p)
        .map(|idx| ExteriorForm::basis(idx).hodge_star(g).coeffs)
        .collect();
    Matrix::from_columns(dim_of_grade(DIM - p), &cols)
}

/// A Riemannian metric on R^7 with its volume factor `sqrt(det gram)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric7<T> {
    gram: Matrix<T>,
    inverse: Matrix<T>,
    vol: T,
    euclidean: bool,
}

impl<T: Scalar> Metric7<T> {
    pub fn euclidean() -> Self {
        Self {
            gram: Matrix::identity(DIM),
            inverse: Matrix::identity(DIM),
            vol: T::one(),
            euclidean: true,
        }
    }

    /// Validate a Gram matrix together with a claimed volume factor.
    pub fn with_volume(gram: Matrix<T>, vol: T) -> Result<Self> {
        if gram.rows() != DIM || gram.cols() != DIM {
            return Err(Error::InvalidInput("metric must be 7x7".into()));
        }
        if gram != gram.conj_transpose() {
            return Err(Error::NotPositiveDefinite);
        }
        for k in 1..=DIM {
            let minor = Matrix::from_fn(k, k, |r, c| gram[(r, c)].clone()).determinant();
            if minor.re() <= 0.0 {
                return Err(Error::NotPositiveDefinite);
            }
        }
        if vol.re() <= 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        let det = gram.determinant();
        let mismatch = (vol.clone() * vol.clone() - det.clone()).magnitude();
        if mismatch > 1e-9 * det.magnitude().max(1.0) || (mismatch > 0.0 && det.is_negligible()) {
            return Err(Error::IrrationalVolume);
        }
        let inverse = gram.inverse().ok_or(Error::NotPositiveDefinite)?;
        let euclidean = gram == Matrix::identity(DIM);
        Ok(Self {
            gram,
            inverse,
            vol,
            euclidean,
        })
    }

    /// The metric induced by the frame: `F^T F`, pulled back from the Euclidean one.
    pub fn from_frame(frame: &Matrix<T>) -> Result<Self> {
        if frame.rows() != DIM || frame.cols() != DIM {
            return Err(Error::InvalidInput("frame must be 7x7".into()));
        }
        let det = frame.determinant();
        if det.is_negligible() || det.re() <= 0.0 {
            return Err(Error::BadFrame);
        }
        let gram = frame.conj_transpose().mul(frame);
        Self::with_volume(gram, det)
    }

    pub fn gram(&self) -> &Matrix<T> {
        &self.gram
    }

    pub fn inverse(&self) -> &Matrix<T> {
        &self.inverse
    }

    pub fn vol(&self) -> &T {
        &self.vol
    }

    pub fn is_euclidean(&self) -> bool {
        self.euclidean
    }

    /// `v ↦ v^♭ = g(v, ·)`.
    pub fn flat(&self, v: &[T]) -> Vec<T> {
        self.gram.mul_vec(v)
    }

    /// `ξ ↦ ξ^♯`.
    pub fn sharp(&self, covector: &[T]) -> Vec<T> {
        self.inverse.mul_vec(covector)
    }

    /// The volume form `vol_g`.
    pub fn volume_form(&self) -> ExteriorForm<T> {
        ExteriorForm::volume(self.vol.clone())
    }
}

impl Metric7<f64> {
    /// Floating metric from a Gram matrix, computing `vol = sqrt(det)`.
    pub fn from_gram(gram: Matrix<f64>) -> Result<Self> {
        let det = gram.determinant();
        if det <= 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        Self::with_volume(gram, det.sqrt())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExactFormRepr {
    grade: usize,
    coeffs: Vec<String>,
}

impl Serialize for ExteriorForm<Q> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ExactFormRepr {
            grade: self.grade,
            coeffs: self.coeffs.iter().map(format_q).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExteriorForm<Q> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ExactFormRepr::deserialize(deserializer)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| parse_q(s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        ExteriorForm::from_coeffs(repr.grade, coeffs).map_err(D::Error::custom)
    }
}
