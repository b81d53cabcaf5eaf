//! Exact sums of rational multiples of roots of unity.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::{frac_mod1, q_to_f64, C64, Q};

/// `Σ c_j e^{2πi r_j}` with rational `c_j` and rational exponents `r_j` in `[0, 1)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CyclotomicSum {
    terms: BTreeMap<Q, Q>,
}

impl CyclotomicSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `coeff · e^{2πi exponent}`; the exponent is reduced mod 1.
    pub fn add(&mut self, exponent: &Q, coeff: Q) {
        if coeff.is_zero() {
            return;
        }
        let key = frac_mod1(exponent);
        let entry = self.terms.entry(key.clone()).or_insert_with(Q::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn extend(&mut self, other: &CyclotomicSum) {
        for (e, c) in &other.terms {
            self.add(e, c.clone());
        }
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = Self::new();
        for (e, c) in &self.terms {
            out.add(e, c.clone() * s.clone());
        }
        out
    }

    pub fn terms(&self) -> &BTreeMap<Q, Q> {
        &self.terms
    }

    /// Least common multiple of the exponent denominators.
    pub fn conductor(&self) -> u64 {
        self.terms
            .keys()
            .map(|e| e.denom().to_u64().expect("root of unity order fits in u64"))
            .fold(1, |acc, d| acc.lcm(&d))
    }

    /// Canonical representative in `Q[x]/Φ_N(x)` with `x = e^{2πi/N}`.
    pub fn reduced(&self) -> (u64, Vec<Q>) {
        let n = self.conductor();
        let mut poly = vec![Q::zero(); n as usize];
        for (e, c) in &self.terms {
            let j = (e * Q::from_integer(n.into())).to_integer().to_usize().unwrap();
            poly[j] += c.clone();
        }
        (n, poly_rem(poly, &cyclotomic_polynomial(n)))
    }

    /// The exact value when the sum is rational.
    pub fn to_rational(&self) -> Option<Q> {
        let (_, rem) = self.reduced();
        if rem.iter().skip(1).all(Zero::is_zero) {
            Some(rem.first().cloned().unwrap_or_else(Q::zero))
        } else {
            None
        }
    }

    pub fn to_c64(&self) -> C64 {
        self.terms
            .iter()
            .map(|(e, c)| C64::from_polar(q_to_f64(c), std::f64::consts::TAU * q_to_f64(e)))
            .sum()
    }
}

/// Integer coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<Q> {
    assert!(n >= 1);
    let mut num = vec![Q::zero(); n as usize + 1];
    num[0] = -Q::one();
    num[n as usize] = Q::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = poly_div_exact(num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn trim(p: &mut Vec<Q>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_div_exact(mut num: Vec<Q>, den: &[Q]) -> Vec<Q> {
    trim(&mut num);
    let dd = den.len() - 1;
    if num.len() <= dd {
        return vec![Q::zero()];
    }
    let mut quot = vec![Q::zero(); num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = num[i + dd].clone() / den[dd].clone();
        for (j, dj) in den.iter().enumerate() {
            num[i + j] -= c.clone() * dj.clone();
        }
        quot[i] = c;
    }
    debug_assert!(num.iter().all(Zero::is_zero));
    quot
}

fn poly_rem(mut num: Vec<Q>, den: &[Q]) -> Vec<Q> {
    let dd = den.len() - 1;
    if dd == 0 {
        return vec![Q::zero()];
    }
    trim(&mut num);
    while num.len() > dd {
        let top = num.len() - 1;
        let c = num[top].clone() / den[dd].clone();
        if !c.is_zero() {
            for (j, dj) in den.iter().enumerate() {
                num[top - dd + j] -= c.clone() * dj.clone();
            }
        }
        num.pop();
    }
    num.resize(dd, Q::zero());
    num
}

/// Rounds an exact rational to an integer when it is one.
pub fn as_integer(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub(crate) fn is_nonnegative_integer(x: &Q) -> bool {
    x.is_integer() && !x.is_negative()
}
