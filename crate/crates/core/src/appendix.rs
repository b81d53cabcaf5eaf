//! Mode-wise checks of the refined-operator calculus: the exterior and
//! co-exterior derivative formulas, the fourteen quadratic identities
//! equivalent to `d² = 0`, the Laplacian formulas, the splitting of coexact
//! 3-forms of type 1 ⊕ 27, and the block structure of the two Hessians.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::exterior::{interior_matrix, ExteriorForm, DIM};
use crate::fourier::{refined, residual, FlatTorus, FourierForm, Mode, RandomForms, RefinedOp};
use crate::g2::{apply_real_matrix, standard_projector_f64, standard_psi0, TypeLabel};
use crate::linalg::{orthonormalize, Matrix};
use crate::scalar::C64;

use RefinedOp::*;

fn label(grade: usize, component: usize) -> TypeLabel {
    TypeLabel::new(grade, component).expect("valid label")
}

fn r(op: RefinedOp, f: &FourierForm) -> FourierForm {
    refined(op, f, false).expect("typed input")
}

/// `Σ cᵢ fᵢ`; all summands must share grade and `2π` power unless zero.
fn lc(terms: &[(f64, FourierForm)]) -> FourierForm {
    let (_, first) = &terms[0];
    terms
        .iter()
        .fold(FourierForm::zero(first.torus(), first.grade()), |acc, (c, f)| {
            acc.try_add(&f.scale_real(*c)).expect("homogeneous combination")
        })
}

fn volume_c() -> ExteriorForm<C64> {
    ExteriorForm::volume(C64::new(1.0, 0.0))
}

/// Max residual of one identity over all trials.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResidual {
    pub family: String,
    pub name: String,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AppendixReport {
    pub trials: usize,
    pub seed: u64,
    pub max_mode_norm: i32,
    pub identities: Vec<IdentityResidual>,
}

impl AppendixReport {
    pub fn max_residual(&self) -> f64 {
        self.identities
            .iter()
            .map(|i| i.max_residual)
            .fold(0.0, f64::max)
    }

    pub fn failures(&self, tolerance: f64) -> Vec<&IdentityResidual> {
        self.identities
            .iter()
            .filter(|i| !(i.max_residual <= tolerance))
            .collect()
    }
}

type Check = (&'static str, &'static str, f64);

/// All checks for one set of random inputs.
fn trial_checks(f: &FourierForm, a: &FourierForm, b: &FourierForm, g: &FourierForm) -> Vec<Check> {
    let mut out: Vec<Check> = Vec::new();
    let mut push = |family, name, lhs: FourierForm, rhs: FourierForm| {
        out.push((family, name, residual(&lhs, &rhs)));
    };
    let d = |x: &FourierForm| x.d().expect("grade < 7");
    let ds = |x: &FourierForm| x.d_star().expect("grade > 0");
    let zero = |x: &FourierForm| FourierForm::zero(x.torus(), x.grade());

    // Functions.
    let d17f = r(D1to7, f);
    push("functions", "d f = d1_7 f", d(f), d17f.clone());
    push(
        "functions",
        "d(f phi) = d1_7 f ^ phi",
        d(&f.wedge_phi().unwrap()),
        d17f.wedge_phi().unwrap(),
    );
    push(
        "functions",
        "d(f psi) = d1_7 f ^ psi",
        d(&f.wedge_psi().unwrap()),
        d17f.wedge_psi().unwrap(),
    );

    // 1-forms.
    let d77a = r(D7to7, a);
    let d714a = r(D7to14, a);
    let d727a = r(D7to27, a);
    let d71a = r(D7to1, a);
    push(
        "1-forms",
        "d a = 1/3 *(d7_7 a ^ *phi) + d7_14 a",
        d(a),
        lc(&[(1.0 / 3.0, d77a.wedge_psi().unwrap().star()), (1.0, d714a.clone())]),
    );
    push(
        "1-forms",
        "d(a ^ phi) = 2/3 d7_7 a ^ psi - *d7_14 a",
        d(&a.wedge_phi().unwrap()),
        lc(&[(2.0 / 3.0, d77a.wedge_psi().unwrap()), (-1.0, d714a.star())]),
    );
    push(
        "1-forms",
        "d(*(a ^ phi)) = 4/7 (d7_1 a) psi + 1/2 d7_7 a ^ phi + *d7_27 a",
        d(&a.wedge_phi().unwrap().star()),
        lc(&[
            (4.0 / 7.0, d71a.wedge_psi().unwrap()),
            (0.5, d77a.wedge_phi().unwrap()),
            (1.0, d727a.star()),
        ]),
    );
    push(
        "1-forms",
        "d(*(a ^ *phi)) = -3/7 (d7_1 a) phi - 1/2 *(d7_7 a ^ phi) + d7_27 a",
        d(&a.wedge_psi().unwrap().star()),
        lc(&[
            (-3.0 / 7.0, d71a.wedge_phi().unwrap()),
            (-0.5, d77a.wedge_phi().unwrap().star()),
            (1.0, d727a.clone()),
        ]),
    );
    push(
        "1-forms",
        "d(a ^ psi) = *d7_7 a",
        d(&a.wedge_psi().unwrap()),
        d77a.star(),
    );
    push(
        "1-forms",
        "d(*a) = -(d7_1 a) vol",
        d(&a.star()),
        d71a.wedge_const(&volume_c()).unwrap().scale_real(-1.0),
    );

    // Λ²₁₄.
    let d147b = r(D14to7, b);
    push(
        "2-forms of type 14",
        "d b = 1/4 *(d14_7 b ^ phi) + d14_27 b",
        d(b),
        lc(&[(0.25, d147b.wedge_phi().unwrap().star()), (1.0, r(D14to27, b))]),
    );
    push("2-forms of type 14", "d* b = d14_7 b", ds(b), d147b.clone());

    // Λ³₂₇.
    let d277g = r(D27to7, g);
    push(
        "3-forms of type 27",
        "d g = 1/4 d27_7 g ^ phi + *d27_27 g",
        d(g),
        lc(&[(0.25, d277g.wedge_phi().unwrap()), (1.0, r(D27to27, g).star())]),
    );
    push(
        "3-forms of type 27",
        "d* g = 1/3 *(d27_7 g ^ psi) + d27_14 g",
        ds(g),
        lc(&[(1.0 / 3.0, d277g.wedge_psi().unwrap().star()), (1.0, r(D27to14, g))]),
    );

    // d² = 0, on functions, 1-forms, Λ²₁₄ and Λ³₂₇ in that order of first factor.
    let rr = |p: RefinedOp, q: RefinedOp, x: &FourierForm| r(p, &r(q, x));
    let dd = "d^2 = 0";
    push(dd, "d7_7 d1_7 = 0", rr(D7to7, D1to7, f), zero(a));
    push(dd, "d7_14 d1_7 = 0", rr(D7to14, D1to7, f), zero(b));
    push(dd, "d7_1 d7_7 = 0", rr(D7to1, D7to7, a), zero(f));
    push(
        dd,
        "d14_7 d7_14 = 2/3 (d7_7)^2",
        rr(D14to7, D7to14, a),
        rr(D7to7, D7to7, a).scale_real(2.0 / 3.0),
    );
    push(
        dd,
        "d27_7 d7_27 = (d7_7)^2 + 12/7 d1_7 d7_1",
        rr(D27to7, D7to27, a),
        lc(&[(1.0, rr(D7to7, D7to7, a)), (12.0 / 7.0, rr(D1to7, D7to1, a))]),
    );
    push(
        dd,
        "d7_14 d7_7 + 2 d27_14 d7_27 = 0",
        lc(&[(1.0, rr(D7to14, D7to7, a)), (2.0, rr(D27to14, D7to27, a))]),
        zero(b),
    );
    push(
        dd,
        "3 d14_27 d7_14 + d7_27 d7_7 = 0",
        lc(&[(3.0, rr(D14to27, D7to14, a)), (1.0, rr(D7to27, D7to7, a))]),
        zero(g),
    );
    push(
        dd,
        "2 d27_27 d7_27 - d7_27 d7_7 = 0",
        lc(&[(2.0, rr(D27to27, D7to27, a)), (-1.0, rr(D7to27, D7to7, a))]),
        zero(g),
    );
    push(dd, "d7_1 d14_7 = 0", rr(D7to1, D14to7, b), zero(f));
    push(
        dd,
        "d7_7 d14_7 + 2 d27_7 d14_27 = 0",
        lc(&[(1.0, rr(D7to7, D14to7, b)), (2.0, rr(D27to7, D14to27, b))]),
        zero(a),
    );
    push(
        dd,
        "d7_27 d14_7 + 4 d27_27 d14_27 = 0",
        lc(&[(1.0, rr(D7to27, D14to7, b)), (4.0, rr(D27to27, D14to27, b))]),
        zero(g),
    );
    push(
        dd,
        "3 d14_7 d27_14 + d7_7 d27_7 = 0",
        lc(&[(3.0, rr(D14to7, D27to14, g)), (1.0, rr(D7to7, D27to7, g))]),
        zero(a),
    );
    push(
        dd,
        "2 d27_7 d27_27 - d7_7 d27_7 = 0",
        lc(&[(2.0, rr(D27to7, D27to27, g)), (-1.0, rr(D7to7, D27to7, g))]),
        zero(a),
    );
    push(
        dd,
        "d7_14 d27_7 + 4 d27_14 d27_27 = 0",
        lc(&[(1.0, rr(D7to14, D27to7, g)), (4.0, rr(D27to14, D27to27, g))]),
        zero(b),
    );

    // Laplacians.
    let lap = "Laplacian";
    push(lap, "Lap f = d7_1 d1_7 f", f.laplacian(), rr(D7to1, D1to7, f));
    push(
        lap,
        "Lap a = (d7_7)^2 a + d1_7 d7_1 a",
        a.laplacian(),
        lc(&[(1.0, rr(D7to7, D7to7, a)), (1.0, rr(D1to7, D7to1, a))]),
    );
    push(
        lap,
        "Lap b = 5/4 d7_14 d14_7 b + d27_14 d14_27 b",
        b.laplacian(),
        lc(&[(1.25, rr(D7to14, D14to7, b)), (1.0, rr(D27to14, D14to27, b))]),
    );
    push(
        lap,
        "Lap g = 7/12 d7_27 d27_7 g + d14_27 d27_14 g + (d27_27)^2 g",
        g.laplacian(),
        lc(&[
            (7.0 / 12.0, rr(D7to27, D27to7, g)),
            (1.0, rr(D14to27, D27to14, g)),
            (1.0, rr(D27to27, D27to27, g)),
        ]),
    );
    out
}

/// `|<P x, y> − <x, P* y>|` for each adjoint pair, and symmetry of the two
/// self-adjoint operators.
fn adjoint_checks(f: &FourierForm, a: &FourierForm, a2: &FourierForm, b: &FourierForm, g: &FourierForm, g2: &FourierForm) -> Vec<Check> {
    let pair = |op: RefinedOp, x: &FourierForm, y: &FourierForm| {
        let lhs = r(op, x).inner(y).expect("grades");
        let rhs = x.inner(&r(op.adjoint(), y)).expect("grades");
        (lhs - rhs).norm()
    };
    let fam = "adjoints";
    vec![
        (fam, "<d1_7 f, a> = <f, d7_1 a>", pair(D1to7, f, a)),
        (fam, "<d7_14 a, b> = <a, d14_7 b>", pair(D7to14, a, b)),
        (fam, "<d7_27 a, g> = <a, d27_7 g>", pair(D7to27, a, g)),
        (fam, "<d14_27 b, g> = <b, d27_14 g>", pair(D14to27, b, g)),
        (fam, "<d7_7 a, a'> = <a, d7_7 a'>", pair(D7to7, a, a2)),
        (fam, "<d27_27 g, g'> = <g, d27_27 g'>", pair(D27to27, g, g2)),
    ]
}

/// `d(Ω³₁ ⊕ Ω³₂₇)` has no Ω⁴₁ component and `Δ` commutes with every type projector.
fn type_checks(w: &FourierForm, x2: &FourierForm, x3: &FourierForm) -> Vec<Check> {
    let fam = "types";
    let dw = w.d().expect("grade 3");
    let mut out = vec![(
        fam,
        "pi_1 d(Omega^3_1 + Omega^3_27) = 0",
        dw.project(label(4, 1)).expect("grade 4").max_abs(),
    )];
    let commute = |x: &FourierForm, l: TypeLabel| {
        residual(&x.laplacian().project(l).unwrap(), &x.project(l).unwrap().laplacian())
    };
    out.push((fam, "Lap pi_7 = pi_7 Lap on 2-forms", commute(x2, label(2, 7))));
    out.push((fam, "Lap pi_14 = pi_14 Lap on 2-forms", commute(x2, label(2, 14))));
    out.push((fam, "Lap pi_1 = pi_1 Lap on 3-forms", commute(x3, label(3, 1))));
    out.push((fam, "Lap pi_7 = pi_7 Lap on 3-forms", commute(x3, label(3, 7))));
    out.push((fam, "Lap pi_27 = pi_27 Lap on 3-forms", commute(x3, label(3, 27))));
    out
}

/// The random generator for trial `trial` of a run seeded by `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Check every refined-operator formula on `trials` seeded random inputs.
pub fn verify_appendix(
    torus: &Arc<FlatTorus>,
    trials: usize,
    seed: u64,
    forms: RandomForms,
    exec: Execution,
) -> AppendixReport {
    let per_trial = exec.map((0..trials.max(1)).collect(), |t| {
        let mut rng = trial_rng(seed, t);
        let f = forms.sample(torus, 0, &mut rng);
        let a = forms.sample(torus, 1, &mut rng);
        let a2 = forms.sample(torus, 1, &mut rng);
        let b = forms.sample_typed(torus, label(2, 14), &mut rng);
        let g = forms.sample_typed(torus, label(3, 27), &mut rng);
        let g2 = forms.sample_typed(torus, label(3, 27), &mut rng);
        let x2 = forms.sample(torus, 2, &mut rng);
        let x3 = forms.sample(torus, 3, &mut rng);
        let w = lc(&[(1.0, x3.project(label(3, 1)).unwrap()), (1.0, g.clone())]);
        let mut checks = trial_checks(&f, &a, &b, &g);
        checks.extend(adjoint_checks(&f, &a, &a2, &b, &g, &g2));
        checks.extend(type_checks(&w, &x2, &x3));
        checks
    });
    let mut identities: Vec<IdentityResidual> = per_trial[0]
        .iter()
        .map(|(family, name, _)| IdentityResidual {
            family: family.to_string(),
            name: name.to_string(),
            max_residual: 0.0,
        })
        .collect();
    for checks in &per_trial {
        for (slot, (_, _, res)) in identities.iter_mut().zip(checks) {
            // NaN must surface as a failure, so avoid f64::max here.
            if !(*res <= slot.max_residual) {
                slot.max_residual = *res;
            }
        }
    }
    AppendixReport {
        trials: trials.max(1),
        seed,
        max_mode_norm: forms.max_norm,
        identities,
    }
}

/// Orthogonal projector onto the common kernel of real constraint matrices.
fn kernel_projector(constraints: &[Matrix<f64>]) -> Matrix<f64> {
    let n = constraints[0].cols();
    let rows: Vec<Vec<f64>> = constraints
        .iter()
        .flat_map(|m| (0..m.rows()).map(move |r| m.row(r).to_vec()))
        .collect();
    let basis = orthonormalize(&rows);
    Matrix::from_fn(n, n, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        delta - basis.iter().map(|u| u[i] * u[j]).sum::<f64>()
    })
}

fn unit_wave(torus: &FlatTorus, k: &Mode) -> Vec<f64> {
    let w = torus.wave(k);
    let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    w.into_iter().map(|x| x / n).collect()
}

/// Per-mode orthogonal projection onto the coexact forms in the common kernel
/// of the given constant constraints.
fn project_coexact(f: &FourierForm, extra: &[Matrix<f64>]) -> FourierForm {
    let grade = f.grade();
    let torus = Arc::clone(f.torus());
    f.map_each_mode(|k, coeff| {
        if *k == [0; DIM] {
            return ExteriorForm::zero(grade);
        }
        let mut constraints = vec![interior_matrix(&unit_wave(&torus, k), grade)];
        constraints.extend(extra.iter().cloned());
        let p = kernel_projector(&constraints);
        ExteriorForm::from_coeffs(grade, apply_real_matrix(&p, coeff.coeffs())).expect("shape")
    })
}

/// The part of a 2-form in `d*Ω³ ∩ Ω²₁₄`.
pub fn project_coexact_14(f: &FourierForm) -> Result<FourierForm> {
    expect_grade(f, 2)?;
    Ok(project_coexact(f, &[standard_psi0().wedge_matrix(2).expect("6 ≤ 7").to_f64()]))
}

/// The part of a 3-form in `d*Ω⁴ ∩ (Ω³₁ ⊕ Ω³₂₇)`.
pub fn project_coexact_1_27(f: &FourierForm) -> Result<FourierForm> {
    expect_grade(f, 3)?;
    Ok(project_coexact(f, &[standard_projector_f64(label(3, 7)).clone()]))
}

fn expect_grade(f: &FourierForm, grade: usize) -> Result<()> {
    if f.grade() == grade {
        Ok(())
    } else {
        Err(Error::GradeMismatch {
            expected: grade,
            found: f.grade(),
        })
    }
}

/// Split `ω ∈ d*Ω⁴ ∩ Ω³₁⊕₂₇` as `ω⁺ + ω⁻` with
/// `ω⁺ = fφ + 7/12 d⁷₂₇d²⁷₇Gγ` and `ω⁻ = γ − 7/12 d⁷₂₇d²⁷₇Gγ`,
/// where `fφ = π₁ω` and `γ = π₂₇ω`.
pub fn split_s4(omega: &FourierForm) -> Result<(FourierForm, FourierForm)> {
    expect_grade(omega, 3)?;
    let tol = 1e-9 * omega.max_abs().max(1.0);
    if omega.harmonic_part().max_abs() > tol {
        return Err(Error::PreconditionFailed("input has a harmonic (constant) part".into()));
    }
    if omega.d_star()?.max_abs() > tol * 64.0 {
        return Err(Error::PreconditionFailed("input is not coclosed".into()));
    }
    if omega.project(label(3, 7))?.max_abs() > tol {
        return Err(Error::PreconditionFailed("input has a type-7 component".into()));
    }
    let f_phi = omega.project(label(3, 1))?;
    let gamma = omega.project(label(3, 27))?;
    let correction = r(D7to27, &r(D27to7, &gamma.green())).scale_real(7.0 / 12.0);
    Ok((f_phi.try_add(&correction)?, gamma.try_sub(&correction)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HessianKind {
    /// The 2-form Hessian, built from `I`.
    E,
    /// The 3-form Hessian, built from `J`.
    F,
}

#[derive(Clone, Debug)]
pub struct HessianBlock {
    pub name: &'static str,
    pub component: FourierForm,
    /// The block action applied to `component`, with `2π` multiplied in.
    pub image: FourierForm,
}

#[derive(Clone, Debug)]
pub struct HessianAction {
    pub kind: HessianKind,
    pub blocks: Vec<HessianBlock>,
    /// Sum of the block images.
    pub total: FourierForm,
    /// Named residuals of the structural identities behind the block table.
    pub checks: Vec<(&'static str, f64)>,
}

impl HessianAction {
    pub fn max_check(&self) -> f64 {
        self.checks.iter().map(|c| c.1).fold(0.0, f64::max)
    }
}

/// `π_harm + Δ + 2 d* T d`, with `T = I` on 3-forms or `J` on 4-forms.
fn hessian_direct(kind: HessianKind, f: &FourierForm) -> FourierForm {
    let df = f.d().expect("grade < 7");
    let tdf = match kind {
        HessianKind::E => df.apply_i(),
        HessianKind::F => df.apply_j(),
    }
    .expect("grade");
    let second = lc(&[(1.0, f.laplacian()), (2.0, tdf.d_star().expect("grade"))]);
    lc(&[(1.0, f.harmonic_part().evaluated()), (1.0, second.evaluated())])
}

fn d_star_t_d(kind: HessianKind, f: &FourierForm) -> FourierForm {
    let df = f.d().expect("grade");
    match kind {
        HessianKind::E => df.apply_i(),
        HessianKind::F => df.apply_j(),
    }
    .expect("grade")
    .d_star()
    .expect("grade")
}

/// Decompose into the printed blocks and apply the printed block actions.
pub fn hessian_blocks(kind: HessianKind, f: &FourierForm) -> Result<HessianAction> {
    let grade = match kind {
        HessianKind::E => 2,
        HessianKind::F => 3,
    };
    expect_grade(f, grade)?;
    let harmonic = f.harmonic_part();
    let exact = f.green().d_star()?.d()?;
    let coexact = f.green().d()?.d_star()?;
    let dsd = |x: &FourierForm| x.d().expect("grade").d_star().expect("grade");
    let dds = |x: &FourierForm| x.d_star().expect("grade").d().expect("grade");
    let mut blocks = vec![
        HessianBlock {
            name: "harmonic",
            component: harmonic.clone(),
            image: harmonic.evaluated(),
        },
        HessianBlock {
            name: "exact",
            component: exact.clone(),
            image: dds(&exact).evaluated(),
        },
    ];
    let mut checks = Vec::new();
    match kind {
        HessianKind::E => {
            let c14 = project_coexact_14(&coexact)?;
            let c7 = coexact.try_sub(&c14)?;
            checks.push((
                "d* I d = -d* d on d*Omega^3 ^ Omega^2_14",
                residual(&d_star_t_d(kind, &c14), &dsd(&c14).scale_real(-1.0)),
            ));
            checks.push(("d* I d = 0 on d*d Omega^2_7", d_star_t_d(kind, &c7).max_abs()));
            blocks.push(HessianBlock {
                name: "d*d Omega^2_7",
                image: dsd(&c7).evaluated(),
                component: c7,
            });
            blocks.push(HessianBlock {
                name: "d*Omega^3 ^ Omega^2_14",
                image: dsd(&c14).scale_real(-1.0).evaluated(),
                component: c14,
            });
        }
        HessianKind::F => {
            let w = project_coexact_1_27(&coexact)?;
            let c7 = coexact.try_sub(&w)?;
            let (plus, minus) = split_s4(&w)?;
            checks.push((
                "d* J d = d* d on S+",
                residual(&d_star_t_d(kind, &plus), &dsd(&plus)),
            ));
            checks.push((
                "d* J d = -d* d on S-",
                residual(&d_star_t_d(kind, &minus), &dsd(&minus).scale_real(-1.0)),
            ));
            checks.push(("d* J d = 0 on d*d Omega^3_7", d_star_t_d(kind, &c7).max_abs()));
            checks.push(("pi_27 d w+ = 0", plus.d()?.project(label(4, 27))?.max_abs()));
            checks.push(("pi_7 d w- = 0", minus.d()?.project(label(4, 7))?.max_abs()));
            checks.push(("<w+, w-> = 0", plus.inner(&minus)?.norm()));
            blocks.push(HessianBlock {
                name: "d*d Omega^3_7",
                image: dsd(&c7).evaluated(),
                component: c7,
            });
            blocks.push(HessianBlock {
                name: "S+",
                image: dsd(&plus).scale_real(3.0).evaluated(),
                component: plus,
            });
            blocks.push(HessianBlock {
                name: "S-",
                image: dsd(&minus).scale_real(-1.0).evaluated(),
                component: minus,
            });
        }
    }
    let recombined = blocks
        .iter()
        .fold(FourierForm::zero(f.torus(), grade), |acc, b| {
            acc.try_add(&b.component).expect("same power")
        });
    checks.push(("blocks sum to the input", residual(&recombined, f)));
    let total = blocks
        .iter()
        .fold(FourierForm::zero(f.torus(), grade), |acc, b| {
            acc.try_add(&b.image).expect("evaluated")
        });
    let direct = hessian_direct(kind, f);
    let scale = direct.max_abs().max(1.0);
    checks.push((
        "block action = pi_harm + Lap + 2 d* T d (relative)",
        residual(&total, &direct) / scale,
    ));
    Ok(HessianAction {
        kind,
        blocks,
        total,
        checks,
    })
}

/// Residuals of the Hessian identities on seeded random inputs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HessianReport {
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<IdentityResidual>,
}

impl HessianReport {
    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.max_residual).fold(0.0, f64::max)
    }

    pub fn failures(&self, tolerance: f64) -> Vec<&IdentityResidual> {
        self.checks
            .iter()
            .filter(|c| !(c.max_residual <= tolerance))
            .collect()
    }
}

/// Run `hessian_blocks` for both kinds on random 2- and 3-forms.
pub fn verify_hessians(
    torus: &Arc<FlatTorus>,
    trials: usize,
    seed: u64,
    forms: RandomForms,
    exec: Execution,
) -> HessianReport {
    let per_trial = exec.map((0..trials.max(1)).collect(), |t| {
        // Separate streams from the identity suite.
        let mut rng = trial_rng(seed ^ 0x4845_5353, t);
        let mut out = Vec::new();
        for kind in [HessianKind::E, HessianKind::F] {
            let grade = if kind == HessianKind::E { 2 } else { 3 };
            let x = forms.sample(torus, grade, &mut rng);
            let action = hessian_blocks(kind, &x).expect("grade matches");
            let prefix = if kind == HessianKind::E { "E" } else { "F" };
            for (name, res) in action.checks {
                out.push((format!("{prefix}: {name}"), res));
            }
        }
        out
    });
    let mut checks: Vec<IdentityResidual> = per_trial[0]
        .iter()
        .map(|(name, _)| IdentityResidual {
            family: "hessian".into(),
            name: name.clone(),
            max_residual: 0.0,
        })
        .collect();
    for trial in &per_trial {
        for (slot, (_, res)) in checks.iter_mut().zip(trial) {
            if !(*res <= slot.max_residual) {
                slot.max_residual = *res;
            }
        }
    }
    HessianReport {
        trials: trials.max(1),
        seed,
        checks,
    }
}
