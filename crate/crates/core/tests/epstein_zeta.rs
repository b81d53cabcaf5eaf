mod common;

use common::{euclidean, example_groups};
use g2morse::linalg::Matrix;
use g2morse::scalar::{q, q_to_f64, qi, C64, Q};
use g2morse::zeta::{closed_form_mu, direct_sum, epstein_value, fixed_lattice, value_at_zero, TwistedLattice};
use g2morse::mu_invariants;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_lattice(rng: &mut ChaCha8Rng) -> TwistedLattice {
    let n = rng.gen_range(1..=3);
    let a = Matrix::from_fn(n, n, |_, _| qi(rng.gen_range(-2..=2)));
    let gram = a.transpose().mul(&a).add(&Matrix::identity(n));
    let twist = (0..n)
        .map(|_| [qi(0), q(1, 2), q(1, 3), q(1, 4)][rng.gen_range(0..4)].clone())
        .collect();
    TwistedLattice::new(gram, twist).unwrap()
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Q> {
    let mut u = Matrix::identity(n);
    for _ in 0..6 {
        if n < 2 {
            break;
        }
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mut e = Matrix::identity(n);
        e[(i, j)] = qi(rng.gen_range(-2..=2));
        u = u.mul(&e);
    }
    if rng.gen_bool(0.5) {
        let mut flip = Matrix::identity(n);
        flip[(0, 0)] = qi(-1);
        u = u.mul(&flip);
    }
    u
}

/// Unit ball volume in dimension `n`.
fn ball(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    std::f64::consts::PI.powf(h) / g2morse::special::gamma(C64::from(h + 1.0)).re
}

#[test]
fn continuation_matches_direct_sums_in_the_convergence_region() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..20 {
        let lat = random_lattice(&mut rng);
        let n = lat.rank() as f64;
        let sigma = n / 2.0 + 3.0;
        let s = C64::new(sigma, rng.gen_range(-1.0..1.0));
        let bound: f64 = 400.0;
        let det = q_to_f64(&lat.gram().determinant());
        // Σ_{S[m] > R} S[m]^{-σ} ≈ ∫_R^∞ d(V_n r^{n/2}/√det) r^{-σ}
        let tail = ball(lat.rank()) / det.sqrt() * (n / 2.0) / (sigma - n / 2.0) * bound.powf(n / 2.0 - sigma);
        let cont = epstein_value(&lat, s).unwrap();
        let direct = direct_sum(&lat, s, bound);
        assert!((cont - direct).norm() <= 3.0 * tail + 1e-12, "{lat:?}: {cont} vs {direct}, tail {tail}");
    }
}

#[test]
fn rank_seven_untwisted_direct_sum() {
    let lat = TwistedLattice::new(Matrix::identity(7), vec![qi(0); 7]).unwrap();
    let s = C64::from(10.0);
    let bound: f64 = 25.0;
    let tail = ball(7) * 3.5 / 6.5 * bound.powf(3.5 - 10.0);
    let cont = epstein_value(&lat, s).unwrap();
    let direct = direct_sum(&lat, s, bound);
    assert!(tail < 1e-6);
    assert!((cont - direct).norm() < 1e-6, "{cont} vs {direct}");
}

#[test]
fn value_at_zero_is_basis_and_scale_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let lat = random_lattice(&mut rng);
        let z0 = value_at_zero(&lat).unwrap();
        let u = random_unimodular(&mut rng, lat.rank());
        let re = lat.rebased(&u).unwrap();
        assert!((value_at_zero(&re).unwrap() - z0).abs() < 1e-10);
        let s = C64::new(0.8, 0.3);
        let a = epstein_value(&lat, s).unwrap();
        let b = epstein_value(&re, s).unwrap();
        assert!((a - b).norm() < 1e-10 * a.norm().max(1.0));
        for c in [q(2, 1), q(1, 3), q(5, 2)] {
            let scaled = lat.scaled(&c);
            let cs = C64::from(q_to_f64(&c)).powc(-s);
            assert!((epstein_value(&scaled, s).unwrap() - cs * a).norm() < 1e-10 * a.norm().max(1.0));
            assert!((value_at_zero(&scaled).unwrap() - z0).abs() < 1e-10);
        }
    }
}

#[test]
fn continuation_is_continuous_at_zero() {
    let lat = TwistedLattice::new(Matrix::identity(2), vec![q(1, 2), qi(0)]).unwrap();
    let near = epstein_value(&lat, C64::from(1e-7)).unwrap();
    assert!((near.re + 1.0).abs() < 1e-5);
}

#[test]
fn every_example_fixed_lattice_regularizes_to_minus_one() {
    for (name, g) in example_groups() {
        let o = euclidean(g);
        for a in o.group().elements() {
            let lat = fixed_lattice(&o, a).unwrap();
            let z = value_at_zero(&lat).unwrap();
            assert!((z + 1.0).abs() < 1e-8, "{name}: {a} gives {z}");
        }
        let exact = mu_invariants(&o);
        let numeric = closed_form_mu(&o).unwrap();
        assert!((numeric.mu3 - q_to_f64(&exact.mu3)).abs() < 1e-6);
        assert!((numeric.mu4 - q_to_f64(&exact.mu4)).abs() < 1e-6);
    }
}
