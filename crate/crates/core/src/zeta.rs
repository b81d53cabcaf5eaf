//! Twisted Epstein zeta functions of fixed-point lattices.
//!
//! For a positive definite Gram matrix `S` of rank `n` and twist `c`,
//! `Z(s) = Σ_{m ≠ 0} e^{2πi c·m} (mᵀSm)^{−s}`. With `det S = 1` the Mellin
//! integral split at 1 and Poisson summation give
//!
//! `Z(s) = π^s/Γ(s) [Σ_{m≠0} e(c·m) G_s(πS[m]) + Σ_{h+c≠0} G_{n/2−s}(πS⁻¹[h+c])
//!          + δ_{c∈ℤⁿ}/(s − n/2)] − π^s/Γ(s+1)`
//!
//! with `G_a(y) = ∫₁^∞ u^{a−1}e^{−yu}du`; general determinants reduce to this
//! by `Z_{λS}(s) = λ^{−s} Z_S(s)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::group::{AffineElement, JoyceOrbifold};
use crate::invariants::{tr12_su3, tr8_su3};
use crate::linalg::{integer_kernel, Matrix};
use crate::scalar::{frac_mod1, q_to_f64, C64, Q};
use crate::special::{rgamma, upper_gamma_tail};

/// Lattice terms below this fraction of the leading term are dropped.
const CUTOFF: f64 = 1e-17;

/// A lattice `Σ ℤ b_i` with Gram matrix and rational twist `c_i = b_i · t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedLattice {
    basis: Vec<Vec<BigInt>>,
    gram: Matrix<Q>,
    twist: Vec<Q>,
}

impl TwistedLattice {
    /// A lattice given directly by its Gram matrix and twist exponents.
    pub fn new(gram: Matrix<Q>, twist: Vec<Q>) -> Result<Self> {
        let n = gram.rows();
        if n == 0 || n > 7 || gram.cols() != n || twist.len() != n {
            return Err(Error::InvalidInput(format!("lattice of rank {n} with {} twist entries", twist.len())));
        }
        if gram.transpose() != gram || !(1..=n).all(|k| leading_minor(&gram, k) > Q::zero()) {
            return Err(Error::NotPositiveDefinite);
        }
        let basis = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect();
        Ok(Self {
            basis,
            gram,
            twist: twist.iter().map(frac_mod1).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn gram(&self) -> &Matrix<Q> {
        &self.gram
    }

    pub fn twist(&self) -> &[Q] {
        &self.twist
    }

    pub fn is_untwisted(&self) -> bool {
        self.twist.iter().all(Zero::is_zero)
    }

    /// The same lattice in the basis `b'_j = Σ_i U_ij b_i`.
    pub fn rebased(&self, u: &Matrix<Q>) -> Result<Self> {
        let det = u.determinant();
        if !u.is_integral() || !(det == Q::one() || det == -Q::one()) {
            return Err(Error::InvalidInput(format!("change of basis has determinant {}", crate::scalar::format_q(&det))));
        }
        let n = self.rank();
        let basis = (0..n)
            .map(|j| {
                (0..self.basis[0].len())
                    .map(|c| (0..n).map(|i| u[(i, j)].numer() * &self.basis[i][c]).sum())
                    .collect()
            })
            .collect();
        let ut = u.transpose();
        Ok(Self {
            basis,
            gram: ut.mul(&self.gram).mul(u),
            twist: ut.mul_vec(&self.twist).iter().map(frac_mod1).collect(),
        })
    }

    /// The lattice with Gram matrix `c · gram`.
    pub fn scaled(&self, c: &Q) -> Self {
        Self {
            basis: self.basis.clone(),
            gram: self.gram.scale(c),
            twist: self.twist.clone(),
        }
    }
}

fn leading_minor(m: &Matrix<Q>, k: usize) -> Q {
    Matrix::from_fn(k, k, |i, j| m[(i, j)].clone()).determinant()
}

/// Fixed modes `{k ∈ ℤ⁷ : Aᵀk = k}` of an element, with the induced
/// Gram matrix of `‖l‖²_g = kᵀG⁻¹k` and the twist `k · t`.
///
/// Returns `PreconditionFailed` when the fixed lattice is trivial.
pub fn fixed_lattice(o: &JoyceOrbifold, a: &AffineElement) -> Result<TwistedLattice> {
    let at = a.matrix().transpose();
    let basis = integer_kernel(&at.sub(&Matrix::identity(7)));
    if basis.is_empty() {
        return Err(Error::PreconditionFailed("fixed lattice has rank 0".into()));
    }
    let finv = o.frame().inverse().expect("validated frame");
    let ginv = finv.mul(&finv.transpose());
    let bq: Vec<Vec<Q>> = basis
        .iter()
        .map(|b| b.iter().map(|x| Q::from_integer(x.clone())).collect())
        .collect();
    let n = bq.len();
    let gram = Matrix::from_fn(n, n, |i, j| {
        let gj = ginv.mul_vec(&bq[j]);
        bq[i].iter().zip(&gj).fold(Q::zero(), |acc, (x, y)| acc + x * y)
    });
    let twist = bq
        .iter()
        .map(|b| frac_mod1(&b.iter().zip(a.translation()).fold(Q::zero(), |acc, (x, y)| acc + x * y)))
        .collect();
    Ok(TwistedLattice { basis, gram, twist })
}

/// Lower Cholesky factor of a positive definite matrix.
fn cholesky(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i][k] * l[j][k]).sum();
            if i == j {
                l[i][i] = (a[i][i] - s).max(0.0).sqrt();
            } else {
                l[i][j] = (a[i][j] - s) / l[j][j];
            }
        }
    }
    l
}

/// Integer points `x` with `(x − center)ᵀ A (x − center) ≤ bound`, with values.
///
/// Fincke–Pohst enumeration on the Cholesky factor; the order of the output
/// is deterministic.
pub fn short_vectors(a: &[Vec<f64>], center: &[f64], bound: f64) -> Vec<(Vec<i64>, f64)> {
    let n = a.len();
    // A = RᵀR with R upper triangular, R = Lᵀ
    let l = cholesky(a);
    let r: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| l[j][i]).collect()).collect();
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    fn recurse(
        level: usize,
        r: &[Vec<f64>],
        center: &[f64],
        remaining: f64,
        x: &mut Vec<i64>,
        out: &mut Vec<(Vec<i64>, f64)>,
        bound: f64,
    ) {
        let n = r.len();
        let i = level;
        // (R(x−c))_i = r_ii (x_i − c_i) + Σ_{j>i} r_ij (x_j − c_j)
        let shift: f64 = ((i + 1)..n).map(|j| r[i][j] * (x[j] as f64 - center[j])).sum();
        let mid = center[i] - shift / r[i][i];
        let half = (remaining.max(0.0)).sqrt() / r[i][i];
        let lo = (mid - half - 1e-9).ceil() as i64;
        let hi = (mid + half + 1e-9).floor() as i64;
        for xi in lo..=hi {
            x[i] = xi;
            let t = r[i][i] * (xi as f64 - center[i]) + shift;
            let rem = remaining - t * t;
            if rem < -1e-9 * bound.max(1.0) {
                continue;
            }
            if i == 0 {
                out.push((x.clone(), bound - rem));
            } else {
                recurse(i - 1, r, center, rem, x, out, bound);
            }
        }
    }
    if n > 0 {
        recurse(n - 1, &r, center, bound, &mut x, &mut out, bound);
    }
    out
}

/// Exact phase exponents `c · m mod 1` for integer `m`, via a common denominator.
struct Twist {
    numerators: Vec<i64>,
    denominator: i64,
}

impl Twist {
    fn new(c: &[Q]) -> Self {
        let den = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        Self {
            numerators: c
                .iter()
                .map(|x| (x * Q::from_integer(den.clone())).to_integer().to_i64().expect("small twist"))
                .collect(),
            denominator: den.to_i64().expect("small twist denominator"),
        }
    }

    fn phase(&self, m: &[i64]) -> C64 {
        let d = self.denominator;
        let e = self.numerators.iter().zip(m).fold(0i64, |acc, (a, b)| (acc + (a * b).rem_euclid(d)) % d);
        if e == 0 {
            C64::from(1.0)
        } else if 2 * e == d {
            C64::from(-1.0)
        } else {
            C64::from_polar(1.0, std::f64::consts::TAU * e as f64 / d as f64)
        }
    }
}

/// `Σ_x phase(x) G_a(π A[x − center])`, skipping the origin of the shifted lattice.
fn incomplete_gamma_sum(
    a_mat: &[Vec<f64>],
    center: &[f64],
    a: C64,
    phase: impl Fn(&[i64]) -> C64 + Sync,
    exec: Execution,
) -> C64 {
    // terms decay like e^{−y} y^p with y = πq, p = max(Re a − 1, 0)
    let p = (a.re - 1.0).max(0.0);
    let decay = |y: f64| (-y).exp() * y.powf(p);
    let head = if p > 0.0 { decay(p) } else { 1.0 };
    let mut y = p.max(1.0);
    while decay(y) > CUTOFF * head {
        y *= 1.1;
    }
    let bound = y / std::f64::consts::PI;
    let points: Vec<(Vec<i64>, f64)> = short_vectors(a_mat, center, bound)
        .into_iter()
        .filter(|(_, q)| *q > 1e-12)
        .collect();
    let chunks: Vec<Vec<(Vec<i64>, f64)>> = points.chunks(4096).map(<[_]>::to_vec).collect();
    exec.map(chunks, |chunk| {
        chunk
            .iter()
            .map(|(x, q)| phase(x) * upper_gamma_tail(a, std::f64::consts::PI * q))
            .fold(C64::from(0.0), |acc, t| acc + t)
    })
    .into_iter()
    .fold(C64::from(0.0), |acc, t| acc + t)
}

fn to_rows(m: &Matrix<f64>) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

/// `Z(s)` by incomplete-gamma splitting and theta transformation.
pub fn epstein_value(lat: &TwistedLattice, s: C64) -> Result<C64> {
    epstein_value_with(lat, s, Execution::default())
}

pub fn epstein_value_with(lat: &TwistedLattice, s: C64, exec: Execution) -> Result<C64> {
    let n = lat.rank();
    let half = n as f64 / 2.0;
    let untwisted = lat.is_untwisted();
    if untwisted && s == C64::from(half) {
        return Err(Error::PoleEncountered(half));
    }
    let gram = lat.gram.to_f64();
    let det = q_to_f64(&lat.gram.determinant());
    let scale = det.powf(1.0 / n as f64);
    let norm: Vec<Vec<f64>> = to_rows(&gram).into_iter().map(|r| r.into_iter().map(|x| x / scale).collect()).collect();
    let dual = to_rows(&gram.inverse().expect("positive definite")).into_iter().map(|r| r.into_iter().map(|x| x * scale).collect()).collect::<Vec<_>>();
    let twist = Twist::new(&lat.twist);
    let c: Vec<f64> = lat.twist.iter().map(q_to_f64).collect();
    let pi = std::f64::consts::PI;

    let rg = rgamma(s);
    let direct = if rg == C64::from(0.0) {
        C64::from(0.0)
    } else {
        incomplete_gamma_sum(&norm, &vec![0.0; n], s, |m| twist.phase(m), exec)
    };
    // h + c over the shifted lattice: center −c
    let neg_c: Vec<f64> = c.iter().map(|x| -x).collect();
    let dual_sum = incomplete_gamma_sum(&dual, &neg_c, C64::from(half) - s, |_| C64::from(1.0), exec);
    let mut bracket = direct + dual_sum;
    if untwisted {
        bracket += C64::from(1.0) / (s - half);
    }
    let pis = C64::from(pi).powc(s);
    let value = pis * (rg * bracket - rgamma(s + 1.0));
    Ok(value * C64::from(scale).powc(-s))
}

/// The continued value `Z(0)`.
pub fn value_at_zero(lat: &TwistedLattice) -> Result<f64> {
    Ok(epstein_value(lat, C64::from(0.0))?.re)
}

/// Direct truncated sum `Σ_{0 < S[m] ≤ bound} e(c·m) S[m]^{−s}`.
pub fn direct_sum(lat: &TwistedLattice, s: C64, bound: f64) -> C64 {
    let gram = to_rows(&lat.gram.to_f64());
    let twist = Twist::new(&lat.twist);
    short_vectors(&gram, &vec![0.0; lat.rank()], bound)
        .into_iter()
        .filter(|(_, q)| *q > 1e-12)
        .map(|(m, q)| twist.phase(&m) * C64::from(q).powc(-s))
        .fold(C64::from(0.0), |acc, t| acc + t)
}

/// μ₃, μ₄ assembled numerically from the continued values at zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NumericInvariants {
    pub mu3: f64,
    pub mu4: f64,
}

/// Per-element data behind [`closed_form_mu`].
#[derive(Clone, Debug, Serialize)]
pub struct ElementZeta {
    pub index: usize,
    pub rank: usize,
    pub twisted: bool,
    pub value_at_zero: f64,
}

/// `μ₃ = (1/|Γ|) Σ Tr₈(A) Z_A(0)` and the Tr₁₂ analogue.
pub fn closed_form_mu(o: &JoyceOrbifold) -> Result<NumericInvariants> {
    Ok(closed_form_details(o)?.0)
}

pub fn closed_form_details(o: &JoyceOrbifold) -> Result<(NumericInvariants, Vec<ElementZeta>)> {
    let mut mu3 = 0.0;
    let mut mu4 = 0.0;
    let mut details = Vec::new();
    for (index, g) in o.group().elements().iter().enumerate() {
        let lat = fixed_lattice(o, g)?;
        let z = value_at_zero(&lat)?;
        mu3 += q_to_f64(&tr8_su3(g.matrix())) * z;
        mu4 += q_to_f64(&tr12_su3(g.matrix())) * z;
        details.push(ElementZeta {
            index,
            rank: lat.rank(),
            twisted: !lat.is_untwisted(),
            value_at_zero: z,
        });
    }
    let n = o.order() as f64;
    Ok((NumericInvariants { mu3: mu3 / n, mu4: mu4 / n }, details))
}
