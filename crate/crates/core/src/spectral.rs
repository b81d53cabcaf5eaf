//! Brute-force invariant dimensions of the Hessian eigenspaces on T^7/Γ.
//!
//! Modes are integer covectors `k` with `χ_k(x) = e^{2πi k·x}`; the metric dual
//! lattice vector is `l = G⁻¹k` and `‖l‖²_g = kᵀG⁻¹k`. All forms live in the
//! orthonormal coframe of the G2 structure, where an element `(A, t)` acts by
//! the pullback of `B = F A F⁻¹` and sends the mode `k` to `Aᵀk`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cyclotomic::{as_integer, is_nonnegative_integer, CyclotomicSum};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::exterior::{interior_matrix, pullback_matrix, ExteriorForm};
use crate::fourier::Mode;
use crate::g2::{standard_phi0, standard_psi0, G2Structure};
use crate::group::{AffineElement, JoyceOrbifold};
use crate::invariants::{tr12_su3, tr8_su3};
use crate::linalg::{orthonormalize, Matrix};
use crate::scalar::{format_q, q_to_f64, Scalar, Q};
use crate::zeta::short_vectors;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ModeKind {
    /// Coclosed type-14 two-forms.
    H,
    /// Coclosed type-27 three-forms.
    #[serde(rename = "Hprime")]
    HPrime,
}

impl ModeKind {
    pub const ALL: [ModeKind; 2] = [ModeKind::H, ModeKind::HPrime];

    pub fn grade(self) -> usize {
        match self {
            ModeKind::H => 2,
            ModeKind::HPrime => 3,
        }
    }

    pub fn component(self) -> usize {
        match self {
            ModeKind::H => 14,
            ModeKind::HPrime => 27,
        }
    }

    /// Dimension of each nonzero-mode block.
    pub fn block_dim(self) -> usize {
        match self {
            ModeKind::H => 8,
            ModeKind::HPrime => 12,
        }
    }

    /// The SU(3) trace polynomial governing this kind.
    pub fn su3_trace(self, a: &Matrix<Q>) -> Q {
        match self {
            ModeKind::H => tr8_su3(a),
            ModeKind::HPrime => tr12_su3(a),
        }
    }
}

impl fmt::Display for ModeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModeKind::H => "H",
            ModeKind::HPrime => "Hprime",
        })
    }
}

/// Which invariant a partial Morse sum approximates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorseKind {
    Mu3,
    Mu4,
}

impl MorseKind {
    pub fn mode_kind(self) -> ModeKind {
        match self {
            MorseKind::Mu3 => ModeKind::H,
            MorseKind::Mu4 => ModeKind::HPrime,
        }
    }
}

/// All nonzero modes sharing one exact eigenvalue `−4π² norm_sq`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenClass {
    pub norm_sq: Q,
    pub vectors: Vec<Mode>,
}

impl EigenClass {
    pub fn lambda(&self) -> f64 {
        -4.0 * std::f64::consts::PI.powi(2) * q_to_f64(&self.norm_sq)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn contains(&self, k: &Mode) -> bool {
        self.vectors.binary_search(k).is_ok()
    }
}

fn gram_inverse(structure: &G2Structure) -> Matrix<Q> {
    let inv = structure.frame().inverse().expect("validated frame");
    inv.mul(&inv.transpose())
}

fn mode_q(k: &Mode) -> Vec<Q> {
    k.iter().map(|&x| Q::from_i64(i64::from(x))).collect()
}

fn quad(m: &Matrix<Q>, k: &[Q]) -> Q {
    let mk = m.mul_vec(k);
    k.iter().zip(&mk).fold(Q::zero(), |acc, (a, b)| acc + a * b)
}

/// Every nonzero mode with `‖l‖²_g ≤ radius_sq`, grouped by exact norm, ascending.
pub fn enumerate_classes(o: &JoyceOrbifold, radius_sq: &Q) -> Vec<EigenClass> {
    if !radius_sq.is_positive() {
        return Vec::new();
    }
    let ginv = gram_inverse(o.structure());
    let ginv_f = ginv.to_f64();
    let rows: Vec<Vec<f64>> = (0..7).map(|r| ginv_f.row(r).to_vec()).collect();
    let r = q_to_f64(radius_sq);
    let mut classes: BTreeMap<Q, Vec<Mode>> = BTreeMap::new();
    for (x, _) in short_vectors(&rows, &[0.0; 7], r * (1.0 + 1e-9) + 1e-9) {
        if x.iter().all(|&v| v == 0) {
            continue;
        }
        let k: Mode = std::array::from_fn(|i| i32::try_from(x[i]).expect("mode fits in i32"));
        let exact = quad(&ginv, &mode_q(&k));
        if &exact <= radius_sq {
            classes.entry(exact).or_default().push(k);
        }
    }
    classes
        .into_iter()
        .map(|(norm_sq, mut vectors)| {
            vectors.sort_unstable();
            EigenClass { norm_sq, vectors }
        })
        .collect()
}

type SparseRows = Vec<Vec<(usize, Q)>>;

fn sparse_rows(m: &Matrix<Q>) -> SparseRows {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .filter(|&c| !m[(r, c)].is_zero())
                .map(|c| (c, m[(r, c)].clone()))
                .collect()
        })
        .collect()
}

fn mul_entry(m: &Q, x: &Q) -> Q {
    if m.is_one() {
        x.clone()
    } else if (-m).is_one() {
        -x
    } else {
        m * x
    }
}

fn apply_sparse(rows: &SparseRows, v: &[Q]) -> Vec<Q> {
    rows.iter()
        .map(|row| {
            row.iter().fold(Q::zero(), |acc, (j, m)| {
                if v[*j].is_zero() {
                    acc
                } else {
                    acc + mul_entry(m, &v[*j])
                }
            })
        })
        .collect()
}

/// Exact basis of `Λ^p_q` as columns, with identity rows at `free`.
struct AmbientBasis {
    columns: Vec<Vec<Q>>,
    sparse_columns: SparseRows,
    free: Vec<usize>,
    conditions: SparseRows,
}

fn ambient_basis(kind: ModeKind) -> &'static AmbientBasis {
    static H: OnceLock<AmbientBasis> = OnceLock::new();
    static HP: OnceLock<AmbientBasis> = OnceLock::new();
    let build = |conditions: Matrix<Q>| {
        let red = conditions.rref();
        let columns = red.null_space();
        let sparse_columns = columns
            .iter()
            .map(|c| c.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect())
            .collect();
        AmbientBasis {
            free: red.free_columns(),
            columns,
            sparse_columns,
            conditions: sparse_rows(&conditions),
        }
    };
    match kind {
        ModeKind::H => H.get_or_init(|| build(standard_psi0().wedge_matrix(2).unwrap())),
        ModeKind::HPrime => HP.get_or_init(|| {
            let phi = standard_phi0().wedge_matrix(3).unwrap();
            let psi = standard_psi0().wedge_matrix(3).unwrap();
            build(phi.vstack(&psi))
        }),
    }
}

/// Exact basis of one block `{α ∈ Λ^p_q : k'⌟α = 0}`.
///
/// The basis is in echelon form: the coordinates of a member are its
/// coefficients at `positions`.
#[derive(Clone, Debug)]
pub struct ModeBasis {
    kind: ModeKind,
    basis: Vec<ExteriorForm<Q>>,
    positions: Vec<usize>,
    contraction: SparseRows,
}

impl ModeBasis {
    fn build(kind: ModeKind, wave: &[Q]) -> Self {
        let amb = ambient_basis(kind);
        let p = kind.grade();
        let contraction = sparse_rows(&interior_matrix(wave, p));
        // constraint in ambient-basis coordinates: (k'⌟ B) x = 0
        let cols: Vec<Vec<Q>> = amb.columns.iter().map(|c| apply_sparse(&contraction, c)).collect();
        let red = Matrix::from_columns(contraction.len(), &cols).rref_exact();
        let free = red.free_columns();
        let basis = red
            .null_space()
            .into_iter()
            .map(|x| {
                let mut v = vec![Q::zero(); amb.columns[0].len()];
                for (xi, col) in x.iter().zip(&amb.sparse_columns) {
                    if xi.is_zero() {
                        continue;
                    }
                    for (i, ci) in col {
                        v[*i] += mul_entry(ci, xi);
                    }
                }
                ExteriorForm::from_coeffs(p, v).expect("grade matches")
            })
            .collect();
        let positions = free.iter().map(|&f| amb.free[f]).collect();
        Self {
            kind,
            basis,
            positions,
            contraction,
        }
    }

    pub fn kind(&self) -> ModeKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ExteriorForm<Q>] {
        &self.basis
    }

    /// Exact membership test against the defining conditions.
    pub fn contains(&self, alpha: &ExteriorForm<Q>) -> bool {
        if alpha.grade() != self.kind.grade() {
            return false;
        }
        let c = alpha.coeffs();
        apply_sparse(&ambient_basis(self.kind).conditions, c).iter().all(Zero::is_zero)
            && apply_sparse(&self.contraction, c).iter().all(Zero::is_zero)
    }

    /// Coordinates in the echelon basis, or `None` for non-members.
    pub fn coordinates(&self, alpha: &ExteriorForm<Q>) -> Option<Vec<Q>> {
        if !self.contains(alpha) {
            return None;
        }
        Some(self.positions.iter().map(|&p| alpha.coeffs()[p].clone()).collect())
    }

    /// An orthonormal basis (in the G2 metric) of the same block.
    pub fn orthonormal_basis(&self) -> Vec<ExteriorForm<f64>> {
        let vecs: Vec<Vec<f64>> = self
            .basis
            .iter()
            .map(|b| b.coeffs().iter().map(q_to_f64).collect())
            .collect();
        orthonormalize(&vecs)
            .into_iter()
            .map(|v| ExteriorForm::from_coeffs(self.kind.grade(), v).unwrap())
            .collect()
    }
}

/// Lazily built exact bases of every block `H_k` or `H′_k` for one frame.
///
/// Blocks depend only on the line through `k' = F^{-T}k`, so they are cached
/// per primitive direction and shared between all groups using the frame.
pub struct ModeSpace {
    kind: ModeKind,
    frame: Matrix<Q>,
    wave: Matrix<Q>,
    cache: Mutex<HashMap<Vec<BigInt>, Arc<ModeBasis>>>,
}

impl fmt::Debug for ModeSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModeSpace")
            .field("kind", &self.kind)
            .field("cached_blocks", &self.cache.lock().unwrap().len())
            .finish()
    }
}

fn primitive_direction(v: &[Q]) -> Vec<BigInt> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        for x in &mut ints {
            *x /= &g;
        }
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in &mut ints {
            *x = -x.clone();
        }
    }
    ints
}

impl ModeSpace {
    pub fn new(structure: &G2Structure, kind: ModeKind) -> Self {
        let frame = structure.frame().clone();
        let wave = frame.inverse().expect("validated frame").transpose();
        Self {
            kind,
            frame,
            wave,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn for_orbifold(o: &JoyceOrbifold, kind: ModeKind) -> Self {
        Self::new(o.structure(), kind)
    }

    pub fn kind(&self) -> ModeKind {
        self.kind
    }

    pub fn frame(&self) -> &Matrix<Q> {
        &self.frame
    }

    fn check_frame(&self, o: &JoyceOrbifold) -> Result<()> {
        if o.frame() == &self.frame {
            Ok(())
        } else {
            Err(Error::PreconditionFailed(
                "mode space was built for a different frame".into(),
            ))
        }
    }

    /// `k' = F^{-T}k`.
    pub fn wave(&self, k: &Mode) -> Vec<Q> {
        self.wave.mul_vec(&mode_q(k))
    }

    /// The block for the nonzero mode `k`.
    pub fn block(&self, k: &Mode) -> Arc<ModeBasis> {
        assert!(k.iter().any(|&x| x != 0), "the zero mode has no block");
        let dir = primitive_direction(&self.wave(k));
        if let Some(b) = self.cache.lock().unwrap().get(&dir) {
            return Arc::clone(b);
        }
        let wave: Vec<Q> = dir.iter().map(|x| Q::from_integer(x.clone())).collect();
        let built = Arc::new(ModeBasis::build(self.kind, &wave));
        Arc::clone(self.cache.lock().unwrap().entry(dir).or_insert(built))
    }

    pub fn cached_blocks(&self) -> usize {
        self.cache.lock().unwrap().len()
    }
}

/// An element in the coframe picture: `B = F A F⁻¹` and its pullbacks.
struct ConjugatedElement {
    a_transpose: Matrix<Q>,
    translation: Vec<Q>,
    identity: bool,
    pullback: [SparseRows; 2],
}

impl ConjugatedElement {
    fn new(frame: &Matrix<Q>, g: &AffineElement) -> Self {
        let finv = frame.inverse().expect("validated frame");
        let b = frame.mul(g.matrix()).mul(&finv);
        Self {
            a_transpose: g.matrix().transpose(),
            translation: g.translation().to_vec(),
            identity: g.matrix() == &Matrix::identity(7),
            pullback: [sparse_rows(&pullback_matrix(&b, 2)), sparse_rows(&pullback_matrix(&b, 3))],
        }
    }

    fn map_mode(&self, k: &Mode) -> Mode {
        let out = self.a_transpose.mul_vec(&mode_q(k));
        let mut m = [0i32; 7];
        for (mi, x) in m.iter_mut().zip(out) {
            *mi = x.to_integer().to_i32().expect("mode coordinates fit in i32");
        }
        m
    }

    fn phase(&self, k: &Mode) -> Q {
        let kq = mode_q(k);
        crate::scalar::frac_mod1(&kq.iter().zip(&self.translation).fold(Q::zero(), |acc, (a, b)| acc + a * b))
    }

    fn pull(&self, alpha: &ExteriorForm<Q>) -> ExteriorForm<Q> {
        if self.identity {
            return alpha.clone();
        }
        let v = apply_sparse(&self.pullback[alpha.grade() - 2], alpha.coeffs());
        ExteriorForm::from_coeffs(alpha.grade(), v).unwrap()
    }
}

/// Result of pulling back `χ_k α` by an affine element.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeAction {
    /// Exponent `q` of the phase `e^{2πi q}`, reduced into `[0, 1)`.
    pub phase: Q,
    /// The new integer covector `Aᵀk`.
    pub k_out: Mode,
    /// `l_out = G⁻¹Aᵀk`, from `g(l_out, x) = g(l, Ax)`.
    pub l_out: Vec<Q>,
    /// `Aᵀl` with `l = G⁻¹k`, the mode as written for Euclidean metrics.
    pub l_out_naive: Vec<Q>,
    /// Whether the two mode conventions coincide for this input.
    pub conventions_agree: bool,
    pub alpha_out: ExteriorForm<Q>,
}

/// Pullback of `χ_k α` (α in the G2 coframe) by `x ↦ Ax + t`.
pub fn group_action_on_mode(
    o: &JoyceOrbifold,
    a: &AffineElement,
    k: &Mode,
    alpha: &ExteriorForm<Q>,
) -> Result<ModeAction> {
    if !(2..=3).contains(&alpha.grade()) {
        return Err(Error::PreconditionFailed("mode coefficients must be 2- or 3-forms".into()));
    }
    let ce = ConjugatedElement::new(o.frame(), a);
    let ginv = gram_inverse(o.structure());
    let k_out = ce.map_mode(k);
    let l = ginv.mul_vec(&mode_q(k));
    let l_out = ginv.mul_vec(&mode_q(&k_out));
    let l_out_naive = ce.a_transpose.mul_vec(&l);
    Ok(ModeAction {
        phase: ce.phase(k),
        k_out,
        conventions_agree: l_out == l_out_naive,
        l_out,
        l_out_naive,
        alpha_out: ce.pull(alpha),
    })
}

/// Matrix of `χ_k α ↦ (A,t)^*(χ_k α)` from block `k` to block `Aᵀk`,
/// together with the phase exponent and target mode.
pub fn representation_block(
    o: &JoyceOrbifold,
    space: &ModeSpace,
    a: &AffineElement,
    k: &Mode,
) -> Result<(Q, Mode, Matrix<Q>)> {
    space.check_frame(o)?;
    block_matrix(space, &ConjugatedElement::new(o.frame(), a), k)
}

fn block_matrix(space: &ModeSpace, ce: &ConjugatedElement, k: &Mode) -> Result<(Q, Mode, Matrix<Q>)> {
    if ce.identity {
        return Ok((ce.phase(k), *k, Matrix::identity(space.block(k).dim())));
    }
    let k_out = ce.map_mode(k);
    let source = space.block(k);
    let target = space.block(&k_out);
    let mut cols = Vec::with_capacity(source.dim());
    for b in source.basis() {
        let image = ce.pull(b);
        let coords = target.coordinates(&image).ok_or_else(|| {
            Error::PreconditionFailed(format!("element does not map the block of {k:?} into the block of {k_out:?}"))
        })?;
        cols.push(coords);
    }
    Ok((ce.phase(k), k_out, Matrix::from_columns(target.dim(), &cols)))
}

fn to_dimension(sum: &CyclotomicSum, order: usize) -> Result<i64> {
    let avg = sum.scale(&Q::new(BigInt::one(), BigInt::from(order)));
    match avg.to_rational() {
        Some(x) if is_nonnegative_integer(&x) => Ok(as_integer(&x).expect("small")),
        Some(x) => Err(Error::NonIntegerDimension(format_q(&x))),
        None => Err(Error::NonIntegerDimension(format!("{:?}", avg.to_c64()))),
    }
}

fn conjugated(o: &JoyceOrbifold) -> Vec<ConjugatedElement> {
    o.group()
        .elements()
        .iter()
        .map(|g| ConjugatedElement::new(o.frame(), g))
        .collect()
}

/// `(1/|Γ|) Σ_g Tr(g | H(λ))` from the explicit block matrices.
///
/// The representation permutes blocks along `k ↦ Aᵀk`; blocks with
/// `Aᵀk ≠ k` sit off the diagonal and do not enter the trace, so only the
/// diagonal blocks are assembled.
pub fn invariant_dimension_bruteforce(
    o: &JoyceOrbifold,
    cls: &EigenClass,
    space: &ModeSpace,
) -> Result<i64> {
    space.check_frame(o)?;
    bruteforce_with(&conjugated(o), cls, space)
}

fn bruteforce_with(elements: &[ConjugatedElement], cls: &EigenClass, space: &ModeSpace) -> Result<i64> {
    let mut sum = CyclotomicSum::new();
    for ce in elements {
        for k in &cls.vectors {
            let k_out = ce.map_mode(k);
            if !cls.contains(&k_out) {
                return Err(Error::PreconditionFailed(format!(
                    "element moves {k:?} out of its eigenvalue class"
                )));
            }
            if &k_out != k {
                continue;
            }
            let (phase, _, m) = block_matrix(space, ce, k)?;
            sum.add(&phase, m.trace());
        }
    }
    to_dimension(&sum, elements.len())
}

/// `(1/|Γ|) Σ_g Σ_{k ∈ cls, Aᵀk = k} e^{2πi k·t} Tr^{SU(3)}(A)`.
pub fn invariant_dimension_formula(o: &JoyceOrbifold, cls: &EigenClass, kind: ModeKind) -> Result<i64> {
    let elements = conjugated(o);
    let mut sum = CyclotomicSum::new();
    for (g, ce) in o.group().elements().iter().zip(&elements) {
        let tr = kind.su3_trace(g.matrix());
        for k in &cls.vectors {
            if &ce.map_mode(k) == k {
                sum.add(&ce.phase(k), tr.clone());
            }
        }
    }
    to_dimension(&sum, elements.len())
}

/// Traces of `A` on the two blocks at a fixed mode, and their residuals
/// against the SU(3) trace polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Su3TraceCheck {
    pub trace8: Q,
    pub trace12: Q,
    pub residual8: Q,
    pub residual12: Q,
}

pub fn su3_trace_check(o: &JoyceOrbifold, a: &AffineElement, k: &Mode) -> Result<Su3TraceCheck> {
    if k.iter().all(|&x| x == 0) {
        return Err(Error::PreconditionFailed("the zero mode is excluded".into()));
    }
    let ce = ConjugatedElement::new(o.frame(), a);
    if &ce.map_mode(k) != k {
        return Err(Error::NotFixed);
    }
    let trace = |kind| -> Result<Q> {
        let space = ModeSpace::for_orbifold(o, kind);
        Ok(block_matrix(&space, &ce, k)?.2.trace())
    };
    let trace8 = trace(ModeKind::H)?;
    let trace12 = trace(ModeKind::HPrime)?;
    Ok(Su3TraceCheck {
        residual8: (&trace8 - tr8_su3(a.matrix())).abs(),
        residual12: (&trace12 - tr12_su3(a.matrix())).abs(),
        trace8,
        trace12,
    })
}

/// How invariant dimensions are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DimensionRoute {
    BruteForce,
    Formula,
}

/// `Σ_{classes ≤ radius_sq} dim^Γ / (4π²‖l‖²)^s`.
pub fn partial_morse_sum(
    o: &JoyceOrbifold,
    kind: MorseKind,
    s: f64,
    radius_sq: &Q,
    space: &ModeSpace,
    route: DimensionRoute,
) -> Result<f64> {
    if s.is_nan() || s <= 3.5 {
        return Err(Error::ConvergenceRegionViolated(s));
    }
    let mk = kind.mode_kind();
    if space.kind() != mk {
        return Err(Error::PreconditionFailed(format!("expected a {mk} mode space")));
    }
    space.check_frame(o)?;
    let elements = conjugated(o);
    let four_pi_sq = 4.0 * std::f64::consts::PI.powi(2);
    let mut total = 0.0;
    for cls in enumerate_classes(o, radius_sq) {
        let dim = match route {
            DimensionRoute::BruteForce => bruteforce_with(&elements, &cls, space)?,
            DimensionRoute::Formula => invariant_dimension_formula(o, &cls, mk)?,
        };
        total += dim as f64 / (four_pi_sq * q_to_f64(&cls.norm_sq)).powf(s);
    }
    Ok(total)
}

/// One line of the oracle's output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectralReport {
    #[serde(serialize_with = "ser_q")]
    pub norm_sq: Q,
    pub kind: ModeKind,
    pub dim_bruteforce: i64,
    pub dim_formula: i64,
    #[serde(rename = "match")]
    pub matches: bool,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_q(x))
}

/// Compares both routes on every class and kind, in class order with `H` first.
pub fn spectral_reports(
    o: &JoyceOrbifold,
    radius_sq: &Q,
    spaces: &[&ModeSpace],
    exec: Execution,
) -> Result<Vec<SpectralReport>> {
    for sp in spaces {
        sp.check_frame(o)?;
    }
    let elements = conjugated(o);
    let classes = enumerate_classes(o, radius_sq);
    let jobs: Vec<(&EigenClass, &ModeSpace)> = classes
        .iter()
        .flat_map(|c| spaces.iter().map(move |sp| (c, *sp)))
        .collect();
    exec.map(jobs, |(cls, sp)| -> Result<SpectralReport> {
        let dim_bruteforce = bruteforce_with(&elements, cls, sp)?;
        let dim_formula = invariant_dimension_formula(o, cls, sp.kind())?;
        Ok(SpectralReport {
            norm_sq: cls.norm_sq.clone(),
            kind: sp.kind(),
            dim_bruteforce,
            dim_formula,
            matches: dim_bruteforce == dim_formula,
        })
    })
    .into_iter()
    .collect()
}
