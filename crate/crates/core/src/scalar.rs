//! Scalar backends shared by the exterior algebra and the linear algebra.
//!
//! Three fields are used: exact rationals for anything derived from group data,
//! `f64` for orthonormal bases and zeta numerics, and `Complex64` for Fourier
//! coefficients.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

/// Complex floating scalar.
pub type C64 = Complex64;

/// Absolute threshold under which a floating pivot counts as zero.
pub const FLOAT_PIVOT_EPS: f64 = 1e-10;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_q(q: &Q) -> Self;

    fn from_i64(v: i64) -> Self;

    /// Absolute value as a float, used for pivoting and residuals.
    fn magnitude(&self) -> f64;

    fn conj(&self) -> Self;

    /// Exact zero test for rationals, thresholded test for floats.
    fn is_negligible(&self) -> bool;

    fn to_c64(&self) -> C64;

    /// Real part as a float; exact for the sign of nonzero rationals.
    fn re(&self) -> f64;
}

impl Scalar for Q {
    fn from_q(q: &Q) -> Self {
        q.clone()
    }

    fn from_i64(v: i64) -> Self {
        Q::from_integer(BigInt::from(v))
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn to_c64(&self) -> C64 {
        C64::new(q_to_f64(self), 0.0)
    }

    fn re(&self) -> f64 {
        q_to_f64(self)
    }
}

impl Scalar for f64 {
    fn from_q(q: &Q) -> Self {
        q_to_f64(q)
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn conj(&self) -> Self {
        *self
    }

    fn is_negligible(&self) -> bool {
        self.abs() < FLOAT_PIVOT_EPS
    }

    fn to_c64(&self) -> C64 {
        C64::new(*self, 0.0)
    }

    fn re(&self) -> f64 {
        *self
    }
}

impl Scalar for C64 {
    fn from_q(q: &Q) -> Self {
        C64::new(q_to_f64(q), 0.0)
    }

    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn is_negligible(&self) -> bool {
        self.norm() < FLOAT_PIVOT_EPS
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn re(&self) -> f64 {
        self.re
    }
}

/// Shorthand for the rational `n/d`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // to_f64 fails only on overflow of numerator/denominator separately
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Reduce a rational into `[0, 1)`.
pub fn frac_mod1(x: &Q) -> Q {
    x - x.floor()
}

/// Parse `"p/q"`, `"p"` or `"-p/q"` into an exact rational.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Q::new(n, d))
}

/// Render as `"p/q"` (or `"p"` for integers).
pub fn format_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
