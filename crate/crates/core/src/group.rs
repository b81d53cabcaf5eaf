//! Finite subgroups of SL(7, Z) ⋉ T^7 acting by `x ↦ A x + t`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exterior::DIM;
use crate::g2::G2Structure;
use crate::linalg::Matrix;
use crate::scalar::{format_q, frac_mod1, q, qi, Q};

pub const DEFAULT_CAP: usize = 10_000;

/// An affine map `x ↦ A x + t` of the torus, with `t` reduced into `[0, 1)`.
#[derive(Clone, PartialEq, Eq)]
pub struct AffineElement {
    matrix: Matrix<Q>,
    translation: Vec<Q>,
}

type ElementKey = (Vec<Q>, Vec<Q>);

impl AffineElement {
    /// Accepts any integral matrix; unimodularity is checked where groups are built.
    pub fn new(matrix: Matrix<Q>, translation: Vec<Q>) -> Result<Self> {
        if matrix.rows() != DIM || matrix.cols() != DIM || translation.len() != DIM {
            return Err(Error::InvalidInput("group elements act on R^7".into()));
        }
        if !matrix.is_integral() {
            return Err(Error::NonIntegral);
        }
        let translation = translation.iter().map(frac_mod1).collect();
        Ok(Self {
            matrix,
            translation,
        })
    }

    pub fn from_ints(matrix: [[i64; DIM]; DIM], translation: [Q; DIM]) -> Self {
        let m = Matrix::from_fn(DIM, DIM, |r, c| qi(matrix[r][c]));
        Self::new(m, translation.to_vec()).expect("integral 7x7")
    }

    pub fn diagonal(diag: [i64; DIM], translation: [Q; DIM]) -> Self {
        let mut m = [[0; DIM]; DIM];
        for (i, d) in diag.iter().enumerate() {
            m[i][i] = *d;
        }
        Self::from_ints(m, translation)
    }

    pub fn identity() -> Self {
        Self {
            matrix: Matrix::identity(DIM),
            translation: vec![qi(0); DIM],
        }
    }

    pub fn matrix(&self) -> &Matrix<Q> {
        &self.matrix
    }

    pub fn translation(&self) -> &[Q] {
        &self.translation
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn determinant(&self) -> Q {
        self.matrix.determinant()
    }

    /// `(A₁, t₁)(A₂, t₂) = (A₁A₂, A₁t₂ + t₁)`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let shifted = self.matrix.mul_vec(&other.translation);
        Self {
            matrix: self.matrix.mul(&other.matrix),
            translation: shifted
                .iter()
                .zip(&self.translation)
                .map(|(a, b)| frac_mod1(&(a + b)))
                .collect(),
        }
    }

    /// Requires `det A = ±1` so that the inverse stays integral.
    pub fn inverse(&self) -> Self {
        let inv = self.matrix.inverse().expect("unimodular matrix");
        let t = inv.mul_vec(&self.translation);
        Self {
            matrix: inv,
            translation: t.iter().map(|x| frac_mod1(&-x)).collect(),
        }
    }

    /// Image of a point of R^7 (not reduced modulo the lattice).
    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        self.matrix
            .mul_vec(x)
            .iter()
            .zip(&self.translation)
            .map(|(a, b)| a + b)
            .collect()
    }

    fn key(&self) -> ElementKey {
        let m = (0..DIM)
            .flat_map(|r| self.matrix.row(r).to_vec())
            .collect();
        (m, self.translation.clone())
    }
}

impl fmt::Debug for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..DIM)
            .map(|r| {
                let entries: Vec<String> = self.matrix.row(r).iter().map(format_q).collect();
                format!("[{}]", entries.join(","))
            })
            .collect();
        let t: Vec<String> = self.translation.iter().map(format_q).collect();
        write!(f, "(A=[{}], t=({}))", rows.join(","), t.join(","))
    }
}

/// A finite group of affine torus maps; the identity is always first.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbifoldGroup {
    elements: Vec<AffineElement>,
}

impl OrbifoldGroup {
    pub fn trivial() -> Self {
        Self {
            elements: vec![AffineElement::identity()],
        }
    }

    /// Closure of the generators under composition, in breadth-first order.
    pub fn generate(generators: &[AffineElement], cap: usize) -> Result<Self> {
        for (index, g) in generators.iter().enumerate() {
            let det = g.determinant();
            if !det.is_one() {
                return Err(Error::NonUnimodular {
                    index,
                    det: format_q(&det),
                });
            }
        }
        let cap = cap.max(1);
        let identity = AffineElement::identity();
        let mut seen: BTreeSet<ElementKey> = BTreeSet::from([identity.key()]);
        let mut elements = vec![identity.clone()];
        let mut queue = VecDeque::from([identity]);
        // In a finite group the monoid generated by S already contains the inverses.
        while let Some(h) = queue.pop_front() {
            for g in generators {
                let next = g.compose(&h);
                if seen.insert(next.key()) {
                    if elements.len() == cap {
                        return Err(Error::NonFinite { cap });
                    }
                    elements.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(Self { elements })
    }

    /// Wrap an explicit element list after checking the group axioms.
    pub fn from_elements(elements: Vec<AffineElement>) -> Result<Self> {
        let keys: BTreeSet<ElementKey> = elements.iter().map(AffineElement::key).collect();
        if keys.len() != elements.len() {
            return Err(Error::InvalidInput("duplicate group elements".into()));
        }
        let mut elements = elements;
        match elements.iter().position(AffineElement::is_identity) {
            Some(pos) => elements.swap(0, pos),
            None => return Err(Error::InvalidInput("group must contain the identity".into())),
        }
        if elements.iter().any(|g| g.matrix.inverse().is_none_or(|m| !m.is_integral())) {
            return Err(Error::InvalidInput("matrix parts must be invertible over Z".into()));
        }
        let group = Self { elements };
        if !group.is_closed() {
            return Err(Error::InvalidInput("element list is not closed".into()));
        }
        Ok(group)
    }

    pub fn elements(&self) -> &[AffineElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &AffineElement) -> bool {
        self.elements.iter().any(|h| h == g)
    }

    /// Whether the element set is closed under composition and inverses.
    pub fn is_closed(&self) -> bool {
        let keys: BTreeSet<ElementKey> = self.elements.iter().map(AffineElement::key).collect();
        self.elements.iter().all(|a| {
            keys.contains(&a.inverse().key())
                && self
                    .elements
                    .iter()
                    .all(|b| keys.contains(&a.compose(b).key()))
        })
    }

    /// Multiplicative order of a matrix part, bounded by the group order.
    pub fn matrix_order(&self, g: &AffineElement) -> Option<usize> {
        let id = Matrix::<Q>::identity(DIM);
        let mut power = g.matrix.clone();
        for n in 1..=self.order() {
            if power == id {
                return Some(n);
            }
            power = power.mul(&g.matrix);
        }
        None
    }
}

/// A group whose matrix parts preserve the G2 structure of a frame.
#[derive(Clone, Debug)]
pub struct JoyceOrbifold {
    group: OrbifoldGroup,
    structure: G2Structure,
}

impl JoyceOrbifold {
    pub fn group(&self) -> &OrbifoldGroup {
        &self.group
    }

    pub fn structure(&self) -> &G2Structure {
        &self.structure
    }

    pub fn frame(&self) -> &Matrix<Q> {
        self.structure.frame()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}

/// Check `F A F⁻¹ ∈ G2` for every element and assemble the orbifold.
pub fn validate_joyce(group: OrbifoldGroup, frame: Matrix<Q>) -> Result<JoyceOrbifold> {
    let structure = G2Structure::from_frame(frame)?;
    if let Some((index, g)) = group
        .elements()
        .iter()
        .enumerate()
        .find(|(_, g)| !structure.is_g2_element(g.matrix()))
    {
        return Err(Error::NotG2Compatible {
            index,
            element: g.to_string(),
        });
    }
    Ok(JoyceOrbifold { group, structure })
}

/// The worked examples: α, β, γ and the groups they generate.
pub mod examples {
    use super::*;

    fn zero() -> Q {
        Q::zero()
    }

    pub fn alpha() -> AffineElement {
        AffineElement::diagonal([1, 1, 1, -1, -1, -1, -1], std::array::from_fn(|_| zero()))
    }

    /// `x ↦ (x¹, −x², −x³, x⁴, x⁵, b⁶ − x⁶, b⁷ − x⁷)`.
    pub fn beta(b6: Q, b7: Q) -> AffineElement {
        AffineElement::diagonal(
            [1, -1, -1, 1, 1, -1, -1],
            [zero(), zero(), zero(), zero(), zero(), b6, b7],
        )
    }

    /// `x ↦ (−x¹, x², c³ − x³, x⁴, c⁵ − x⁵, x⁶, c⁷ − x⁷)`.
    pub fn gamma(c3: Q, c5: Q, c7: Q) -> AffineElement {
        AffineElement::diagonal(
            [-1, 1, -1, 1, -1, 1, -1],
            [zero(), zero(), c3, zero(), c5, zero(), c7],
        )
    }

    pub fn default_beta() -> AffineElement {
        beta(zero(), q(1, 2))
    }

    pub fn default_gamma() -> AffineElement {
        gamma(zero(), q(1, 2), q(1, 2))
    }

    pub fn torus() -> OrbifoldGroup {
        OrbifoldGroup::trivial()
    }

    pub fn m1() -> OrbifoldGroup {
        OrbifoldGroup::generate(&[alpha()], DEFAULT_CAP).expect("order 2")
    }

    pub fn m2() -> OrbifoldGroup {
        OrbifoldGroup::generate(&[alpha(), default_beta()], DEFAULT_CAP).expect("order 4")
    }

    pub fn m3() -> OrbifoldGroup {
        OrbifoldGroup::generate(&[alpha(), default_beta(), default_gamma()], DEFAULT_CAP)
            .expect("order 8")
    }
}
