//! The five subcommands. Each returns typed results plus a flat table for CSV.

use std::fmt::Display;

use g2morse::appendix::{trial_rng, verify_appendix, verify_hessians, IdentityResidual};
use g2morse::fourier::{refined, FlatTorus, RandomForms, RefinedOp};
use g2morse::g2::{G2Structure, TypeLabel};
use g2morse::linalg::Matrix;
use g2morse::scalar::{format_q, q_to_f64, Q};
use g2morse::spectral::spectral_reports;
use g2morse::zeta::closed_form_details;
use g2morse::{closed_form_mu, mu_invariants, validate_joyce, Error, Execution, JoyceOrbifold, ModeKind, ModeSpace};
use g2morse::SpectralReport;
use serde::Serialize;
use serde_json::Value;

use crate::config::Resolved;
use crate::CliError;

pub const IDENTITY_TOLERANCE: f64 = 1e-9;
pub const ZETA_TOLERANCE: f64 = 1e-6;

/// Per-run knobs after merging flags over the config.
#[derive(Clone, Debug, Serialize)]
pub struct Settings {
    #[serde(serialize_with = "ser_q")]
    pub radius_sq: Q,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub strict_types: bool,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_q(x))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

fn s(x: impl Display) -> String {
    x.to_string()
}

pub struct Outcome {
    pub passed: bool,
    pub results: Value,
    pub table: Table,
}

fn outcome(passed: bool, results: impl Serialize, table: Table) -> Outcome {
    Outcome {
        passed,
        results: serde_json::to_value(results).expect("results serialize"),
        table,
    }
}

fn orbifold(cfg: &Resolved) -> Result<JoyceOrbifold, CliError> {
    validate_joyce(cfg.group()?, cfg.frame.clone()).map_err(CliError::Math)
}

fn q_rows(m: &Matrix<Q>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| format_q(&m[(r, c)])).collect()).collect()
}

#[derive(Serialize)]
struct CheckElement {
    index: usize,
    matrix: Vec<Vec<String>>,
    translation: Vec<String>,
    determinant: String,
    matrix_order: Option<usize>,
    g2_compatible: bool,
}

#[derive(Serialize)]
struct CheckResults {
    order: usize,
    compatible: bool,
    elements: Vec<CheckElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

pub fn check(cfg: &Resolved) -> Result<Outcome, CliError> {
    let group = cfg.group()?;
    let structure = G2Structure::from_frame(cfg.frame.clone()).map_err(CliError::Math)?;
    let elements: Vec<CheckElement> = group
        .elements()
        .iter()
        .enumerate()
        .map(|(index, g)| CheckElement {
            index,
            matrix: q_rows(g.matrix()),
            translation: g.translation().iter().map(format_q).collect(),
            determinant: format_q(&g.determinant()),
            matrix_order: group.matrix_order(g),
            g2_compatible: structure.is_g2_element(g.matrix()),
        })
        .collect();
    let compatible = elements.iter().all(|e| e.g2_compatible);
    let error = validate_joyce(group.clone(), cfg.frame.clone()).err().map(|e| e.to_string());
    let mut table = Table::new(&["index", "matrix_order", "determinant", "g2_compatible", "element"]);
    for (e, g) in elements.iter().zip(group.elements()) {
        table.push(vec![
            s(e.index),
            e.matrix_order.map_or_else(String::new, s),
            e.determinant.clone(),
            s(e.g2_compatible),
            s(g),
        ]);
    }
    let results = CheckResults {
        order: group.order(),
        compatible,
        elements,
        error,
    };
    Ok(outcome(compatible, results, table))
}

#[derive(Serialize)]
struct NumericPair {
    mu3: f64,
    mu4: f64,
}

#[derive(Serialize)]
struct InvariantsResults {
    order: usize,
    mu3: String,
    mu4: String,
    mu3_decimal: f64,
    mu4_decimal: f64,
    closed_form: Option<NumericPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form_error: Option<String>,
    max_abs_difference: Option<f64>,
    tolerance: f64,
}

pub fn invariants(cfg: &Resolved, settings: &Settings) -> Result<Outcome, CliError> {
    let o = orbifold(cfg)?;
    let exact = mu_invariants(&o);
    let tolerance = settings.tolerance.unwrap_or(ZETA_TOLERANCE);
    let (m3, m4) = (q_to_f64(&exact.mu3), q_to_f64(&exact.mu4));
    let (closed_form, closed_form_error) = match closed_form_mu(&o) {
        Ok(n) => (Some(NumericPair { mu3: n.mu3, mu4: n.mu4 }), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let max_abs_difference = closed_form.as_ref().map(|n| (n.mu3 - m3).abs().max((n.mu4 - m4).abs()));
    let passed = max_abs_difference.is_some_and(|d| d <= tolerance);
    let mut table = Table::new(&["quantity", "exact", "decimal", "closed_form", "abs_difference"]);
    for (name, q, x, cf) in [
        ("mu3", &exact.mu3, m3, closed_form.as_ref().map(|n| n.mu3)),
        ("mu4", &exact.mu4, m4, closed_form.as_ref().map(|n| n.mu4)),
    ] {
        table.push(vec![
            s(name),
            format_q(q),
            s(x),
            cf.map_or_else(String::new, s),
            cf.map_or_else(String::new, |c| s((c - x).abs())),
        ]);
    }
    let results = InvariantsResults {
        order: o.order(),
        mu3: format_q(&exact.mu3),
        mu4: format_q(&exact.mu4),
        mu3_decimal: m3,
        mu4_decimal: m4,
        closed_form,
        closed_form_error,
        max_abs_difference,
        tolerance,
    };
    Ok(outcome(passed, results, table))
}

#[derive(Serialize)]
struct SpectrumResults {
    radius_sq: String,
    classes: usize,
    mismatches: usize,
    reports: Vec<SpectralReport>,
}

pub fn spectrum(cfg: &Resolved, settings: &Settings) -> Result<Outcome, CliError> {
    let o = orbifold(cfg)?;
    let spaces: Vec<ModeSpace> = ModeKind::ALL.iter().map(|&k| ModeSpace::for_orbifold(&o, k)).collect();
    let refs: Vec<&ModeSpace> = spaces.iter().collect();
    let reports = spectral_reports(&o, &settings.radius_sq, &refs, Execution::default()).map_err(CliError::Math)?;
    let mismatches = reports.iter().filter(|r| !r.matches).count();
    let mut table = Table::new(&["norm_sq", "kind", "dim_bruteforce", "dim_formula", "match"]);
    for r in &reports {
        table.push(vec![
            format_q(&r.norm_sq),
            s(r.kind),
            s(r.dim_bruteforce),
            s(r.dim_formula),
            s(r.matches),
        ]);
    }
    let results = SpectrumResults {
        radius_sq: format_q(&settings.radius_sq),
        classes: reports.len() / ModeKind::ALL.len(),
        mismatches,
        reports,
    };
    Ok(outcome(mismatches == 0, results, table))
}

#[derive(Serialize)]
struct ProjectorRank {
    label: String,
    rank: usize,
    expected: usize,
}

#[derive(Serialize)]
struct TypeDecomposition {
    ranks: Vec<ProjectorRank>,
    complete: bool,
    idempotent: bool,
}

fn type_decomposition(structure: &G2Structure) -> TypeDecomposition {
    let mut ranks = Vec::new();
    let mut complete = true;
    let mut idempotent = true;
    for grade in [2, 3] {
        let labels = TypeLabel::all_of_grade(grade);
        let n = structure.projector(labels[0]).rows();
        let mut sum = Matrix::<Q>::zeros(n, n);
        for label in labels {
            let p = structure.projector(label);
            ranks.push(ProjectorRank {
                label: label.to_string(),
                rank: p.rank(),
                expected: label.component(),
            });
            idempotent &= p.mul(p) == *p;
            sum = sum.add(p);
        }
        complete &= sum == Matrix::identity(n);
    }
    TypeDecomposition {
        ranks,
        complete,
        idempotent,
    }
}

#[derive(Serialize)]
struct StrictCheck {
    operator: String,
    accepts_typed_input: bool,
    rejects_untyped_input: Option<bool>,
}

/// Every refined operator accepts inputs of its declared type and, when the
/// type is a proper summand, rejects a generic form of the same grade.
fn strict_type_checks(torus: &std::sync::Arc<FlatTorus>, seed: u64) -> Vec<StrictCheck> {
    let forms = RandomForms::default();
    let mut rng = trial_rng(seed ^ 0x5354_5249, 0);
    RefinedOp::ALL
        .iter()
        .map(|&op| {
            let dom = op.domain();
            let generic = forms.sample(torus, dom.grade, &mut rng);
            let typed = match dom.component {
                Some(c) => forms.sample_typed(torus, TypeLabel::new(dom.grade, c).expect("valid"), &mut rng),
                None => generic.clone(),
            };
            let proper = dom.component.is_some() && TypeLabel::components(dom.grade).len() > 1;
            StrictCheck {
                operator: op.name(),
                accepts_typed_input: refined(op, &typed, true).is_ok(),
                rejects_untyped_input: proper
                    .then(|| matches!(refined(op, &generic, true), Err(Error::WrongType(_)))),
            }
        })
        .collect()
}

#[derive(Serialize)]
struct IdentitiesResults {
    trials: usize,
    seed: u64,
    tolerance: f64,
    max_residual: f64,
    failures: usize,
    type_decomposition: TypeDecomposition,
    #[serde(skip_serializing_if = "Option::is_none")]
    strict_types: Option<Vec<StrictCheck>>,
    identities: Vec<IdentityResidual>,
    hessian: Vec<IdentityResidual>,
}

pub fn identities(cfg: &Resolved, settings: &Settings) -> Result<Outcome, CliError> {
    let o = orbifold(cfg)?;
    let tolerance = settings.tolerance.unwrap_or(IDENTITY_TOLERANCE);
    let torus = FlatTorus::new(o.structure().clone());
    let exec = Execution::default();
    let appendix = verify_appendix(&torus, settings.trials, settings.seed, RandomForms::default(), exec);
    let hessian = verify_hessians(&torus, settings.trials, settings.seed, RandomForms::default(), exec);
    let decomposition = type_decomposition(o.structure());
    let strict = settings.strict_types.then(|| strict_type_checks(&torus, settings.seed));
    let failures = appendix.failures(tolerance).len() + hessian.failures(tolerance).len();
    let strict_ok = strict.as_ref().is_none_or(|checks| {
        checks
            .iter()
            .all(|c| c.accepts_typed_input && c.rejects_untyped_input != Some(false))
    });
    let decomposition_ok = decomposition.complete
        && decomposition.idempotent
        && decomposition.ranks.iter().all(|r| r.rank == r.expected);
    let mut table = Table::new(&["family", "name", "max_residual", "passed"]);
    for r in appendix.identities.iter().chain(&hessian.checks) {
        table.push(vec![
            r.family.clone(),
            r.name.clone(),
            s(r.max_residual),
            s(r.max_residual <= tolerance),
        ]);
    }
    for r in &decomposition.ranks {
        table.push(vec![
            s("type ranks"),
            format!("rank {}", r.label),
            s(r.rank),
            s(r.rank == r.expected),
        ]);
    }
    let results = IdentitiesResults {
        trials: appendix.trials,
        seed: settings.seed,
        tolerance,
        max_residual: appendix.max_residual().max(hessian.max_residual()),
        failures,
        type_decomposition: decomposition,
        strict_types: strict,
        identities: appendix.identities,
        hessian: hessian.checks,
    };
    Ok(outcome(failures == 0 && strict_ok && decomposition_ok, results, table))
}

#[derive(Serialize)]
struct ZetaElement {
    index: usize,
    element: String,
    rank: usize,
    twisted: bool,
    value_at_zero: f64,
    abs_error: f64,
}

#[derive(Serialize)]
struct Bridge {
    quantity: &'static str,
    closed_form: f64,
    exact: String,
    abs_difference: f64,
}

#[derive(Serialize)]
struct ZetaResults {
    tolerance: f64,
    max_abs_error: f64,
    elements: Vec<ZetaElement>,
    bridge: Vec<Bridge>,
}

pub fn zeta(cfg: &Resolved, settings: &Settings) -> Result<Outcome, CliError> {
    let o = orbifold(cfg)?;
    let tolerance = settings.tolerance.unwrap_or(ZETA_TOLERANCE);
    let (numeric, details) = closed_form_details(&o).map_err(CliError::Math)?;
    let exact = mu_invariants(&o);
    let elements: Vec<ZetaElement> = details
        .iter()
        .map(|d| ZetaElement {
            index: d.index,
            element: o.group().elements()[d.index].to_string(),
            rank: d.rank,
            twisted: d.twisted,
            value_at_zero: d.value_at_zero,
            abs_error: (d.value_at_zero + 1.0).abs(),
        })
        .collect();
    let bridge = vec![
        Bridge {
            quantity: "mu3",
            closed_form: numeric.mu3,
            exact: format_q(&exact.mu3),
            abs_difference: (numeric.mu3 - q_to_f64(&exact.mu3)).abs(),
        },
        Bridge {
            quantity: "mu4",
            closed_form: numeric.mu4,
            exact: format_q(&exact.mu4),
            abs_difference: (numeric.mu4 - q_to_f64(&exact.mu4)).abs(),
        },
    ];
    let max_abs_error = elements
        .iter()
        .map(|e| e.abs_error)
        .chain(bridge.iter().map(|b| b.abs_difference))
        .fold(0.0, |m: f64, x| if x <= m { m } else { x });
    let mut table = Table::new(&["item", "rank", "twisted", "value", "reference", "abs_error"]);
    for e in &elements {
        table.push(vec![
            format!("element {}", e.index),
            s(e.rank),
            s(e.twisted),
            s(e.value_at_zero),
            s(-1),
            s(e.abs_error),
        ]);
    }
    for b in &bridge {
        table.push(vec![
            s(b.quantity),
            String::new(),
            String::new(),
            s(b.closed_form),
            b.exact.clone(),
            s(b.abs_difference),
        ]);
    }
    let results = ZetaResults {
        tolerance,
        max_abs_error,
        elements,
        bridge,
    };
    Ok(outcome(max_abs_error <= tolerance, results, table))
}
