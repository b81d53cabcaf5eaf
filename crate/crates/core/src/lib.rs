//! Spectral Morse-index invariants μ₃ and μ₄ of flat G2 orbifolds T^7/Γ,
//! together with exact and brute-force cross-checks of every ingredient.

// `!(x <= tol)` is deliberate: a NaN residual must count as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod appendix;
pub mod cyclotomic;
pub mod error;
pub mod exec;
pub mod exterior;
pub mod fourier;
pub mod g2;
pub mod group;
pub mod invariants;
pub mod linalg;
pub mod scalar;
pub mod special;
pub mod spectral;
pub mod zeta;

pub use error::{Error, Result};
pub use exec::Execution;
pub use exterior::{ExteriorForm, Metric7, MultiIndex};
pub use g2::{standard_phi0, standard_psi0, G2Structure, TypeLabel};
pub use group::{validate_joyce, AffineElement, JoyceOrbifold, OrbifoldGroup};
pub use invariants::{mu_invariants, tr12_su3, tr8_su3, InvariantPair};
pub use spectral::{
    enumerate_classes, group_action_on_mode, invariant_dimension_bruteforce, invariant_dimension_formula,
    partial_morse_sum, su3_trace_check, EigenClass, ModeKind, ModeSpace, MorseKind, SpectralReport,
};
pub use zeta::{closed_form_mu, epstein_value, fixed_lattice, value_at_zero, NumericInvariants, TwistedLattice};
