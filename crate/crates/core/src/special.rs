//! Complex gamma function and upper incomplete gamma integrals.

use crate::scalar::C64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Nonpositive integer nearest to `z`, if `z` is one.
fn nonpositive_integer(z: C64) -> Option<i64> {
    (z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0).then_some(z.re as i64)
}

/// `Γ(z)` (Lanczos approximation with reflection).
pub fn gamma(z: C64) -> C64 {
    if nonpositive_integer(z).is_some() {
        return C64::new(f64::INFINITY, 0.0);
    }
    if z.re < 0.5 {
        let pi = std::f64::consts::PI;
        return C64::from(pi) / ((z * pi).sin() * gamma(C64::from(1.0) - z));
    }
    let z = z - 1.0;
    let mut x = C64::from(LANCZOS[0]);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// `1/Γ(z)`, exactly zero at the poles of `Γ`.
pub fn rgamma(z: C64) -> C64 {
    if nonpositive_integer(z).is_some() {
        return C64::from(0.0);
    }
    C64::from(1.0) / gamma(z)
}

/// `G_a(y) = ∫₁^∞ u^{a−1} e^{−yu} du = y^{−a} Γ(a, y)` for `y > 0`.
pub fn upper_gamma_tail(a: C64, y: f64) -> C64 {
    assert!(y > 0.0, "upper_gamma_tail needs y > 0");
    if y >= 2.5 {
        if let Some(v) = tail_continued_fraction(a, y) {
            return v;
        }
    }
    match nearest_nonpositive_integer(a) {
        Some(n) => exponential_integral(1 - n, y),
        None => tail_series(a, y),
    }
}

fn nearest_nonpositive_integer(a: C64) -> Option<i64> {
    let r = a.re.round();
    (r <= 0.0 && (a - r).norm() < 1e-9).then_some(r as i64)
}

/// Legendre continued fraction for `e^{y} y^{a} Γ(a,y)`, via modified Lentz.
fn tail_continued_fraction(a: C64, y: f64) -> Option<C64> {
    let tiny = 1e-300;
    let one = C64::from(1.0);
    let mut b = C64::from(y + 1.0) - a;
    let mut c = C64::from(1.0 / tiny);
    let mut d = one / b;
    let mut h = d;
    for i in 1..20_000 {
        let an = -(i as f64) * (C64::from(i as f64) - a);
        b += 2.0;
        d = an * d + b;
        if d.norm() < tiny {
            d = C64::from(tiny);
        }
        c = b + an / c;
        if c.norm() < tiny {
            c = C64::from(tiny);
        }
        d = one / d;
        let delta = d * c;
        h *= delta;
        if (delta - one).norm() < 1e-16 {
            return Some(h * (-y).exp());
        }
    }
    None
}

/// `y^{−a}Γ(a) − Σ_k (−y)^k / (k! (a+k))`.
fn tail_series(a: C64, y: f64) -> C64 {
    let mut sum = C64::from(0.0);
    let mut term = 1.0;
    for k in 0..500 {
        if k > 0 {
            term *= -y / k as f64;
        }
        let add = term / (a + k as f64);
        sum += add;
        if add.norm() < 1e-18 * sum.norm().max(1e-300) && k as f64 > y {
            break;
        }
    }
    gamma(a) * C64::from(y).powc(-a) - sum
}

/// `E_n(y) = ∫₁^∞ e^{−yu} u^{−n} du` for integer `n ≥ 1`.
pub fn exponential_integral(n: i64, y: f64) -> C64 {
    assert!(n >= 1);
    let euler = 0.577_215_664_901_532_9;
    let nm1 = n - 1;
    // power series with the digamma correction at k = n−1
    let mut ans = if nm1 != 0 { 1.0 / nm1 as f64 } else { -y.ln() - euler };
    let mut fact = 1.0;
    for i in 1..500 {
        fact *= -y / i as f64;
        let del = if i != nm1 {
            -fact / (i - nm1) as f64
        } else {
            let psi = -euler + (1..=nm1).map(|j| 1.0 / j as f64).sum::<f64>();
            fact * (-y.ln() + psi)
        };
        ans += del;
        if del.abs() < ans.abs() * 1e-17 && i > nm1 {
            break;
        }
    }
    C64::from(ans)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadrature(a: C64, y: f64) -> C64 {
        // ∫₁^∞ via u = 1 + v, composite Simpson on [0, V]
        let v_max = 60.0 / y;
        let n = 200_000;
        let h = v_max / n as f64;
        let f = |v: f64| C64::from(1.0 + v).powc(a - 1.0) * (-y * (1.0 + v)).exp();
        let mut s = f(0.0) + f(v_max);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn gamma_values() {
        let pi = std::f64::consts::PI;
        assert!((gamma(C64::from(5.0)) - 24.0).norm() < 1e-10);
        assert!((gamma(C64::from(0.5)) - pi.sqrt()).norm() < 1e-13);
        assert!((gamma(C64::from(-0.5)) + 2.0 * pi.sqrt()).norm() < 1e-12);
        assert_eq!(rgamma(C64::from(0.0)), C64::from(0.0));
        assert_eq!(rgamma(C64::from(-3.0)), C64::from(0.0));
        // |Γ(i)|² = π / sinh(π)
        let g = gamma(C64::new(0.0, 1.0));
        assert!((g.norm_sqr() - pi / pi.sinh()).abs() < 1e-13);
    }

    #[test]
    fn tail_matches_quadrature() {
        for &(a, y) in &[
            (C64::from(0.0), 0.3),
            (C64::from(0.0), 4.0),
            (C64::from(3.5), 0.7),
            (C64::from(3.5), 3.1),
            (C64::new(-1.2, 0.5), 1.0),
            (C64::new(2.0, -3.0), 5.0),
            (C64::from(-2.0), 0.2),
            (C64::from(8.0), 3.2),
        ] {
            let got = upper_gamma_tail(a, y);
            let want = quadrature(a, y);
            assert!((got - want).norm() < 1e-9 * want.norm().max(1.0), "a={a} y={y}: {got} vs {want}");
        }
    }
}
