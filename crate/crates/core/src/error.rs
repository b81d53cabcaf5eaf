use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("wedge product of grades {0} and {1} exceeds 7")]
    GradeOverflow(usize, usize),

    #[error("interior product is undefined on 0-forms")]
    InteriorOfScalar,

    #[error("grade mismatch: expected {expected}, found {found}")]
    GradeMismatch { expected: usize, found: usize },

    #[error("invalid type label: grade {grade}, component {component}")]
    InvalidLabel { grade: usize, component: usize },

    #[error("metric is not positive definite")]
    NotPositiveDefinite,

    #[error("frame is singular or orientation-reversing")]
    BadFrame,

    #[error("metric volume sqrt(det g) is not rational")]
    IrrationalVolume,

    #[error("generator {index} has determinant {det}, expected 1")]
    NonUnimodular { index: usize, det: String },

    #[error("matrix part is not integral")]
    NonIntegral,

    #[error("group closure exceeded the order cap {cap}")]
    NonFinite { cap: usize },

    #[error("element {index} is not G2-compatible with the frame: {element}")]
    NotG2Compatible { index: usize, element: String },

    #[error("averaged trace {0} is not a nonnegative integer")]
    NonIntegerDimension(String),

    #[error("lattice vector is not fixed by the element")]
    NotFixed,

    #[error("s = {0} lies outside the convergence region Re(s) > 7/2")]
    ConvergenceRegionViolated(f64),

    #[error("Epstein zeta function has a pole at s = {0}")]
    PoleEncountered(f64),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("unknown refined operator `{0}`")]
    UnknownOperator(String),

    #[error("form is not of type {0} (strict mode)")]
    WrongType(String),

    #[error("cannot add Fourier forms carrying different powers of 2*pi ({0} vs {1})")]
    ScaleMismatch(i32, i32),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
