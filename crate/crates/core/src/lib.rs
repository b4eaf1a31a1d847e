//! Two-level quantum dynamics under an infinitely narrow pulse.
//!
//! The crate provides the exact delta-pulse propagator for an arbitrary
//! initial superposition, numerical integration of the coupled amplitude
//! equations for Gaussian pulses of finite width, the interaction strengths
//! that collapse a superposition onto an eigenstate, and an independent
//! closed-form solution path used as a cross-check.
//!
//! Units are chosen so that `hbar = 1`; couplings are the dimensionless
//! `k = beta / hbar`.

pub mod collapse;
pub mod error;
pub mod integrator;
pub mod oracle;
pub mod propagator;
pub mod pulse;
pub mod simulate;
pub mod types;

pub use collapse::{
    collapse_strengths, collapsed_phase, figure1_data, reverse_strength, strength_sensitivity, CollapseBranch,
    CollapseSolution, CollapseTarget, Figure1Row, Sign,
};
pub use error::{Error, Result};
pub use oracle::{appendix_a_constant, appendix_a_propagate, conserved_quadratic_residual, AppendixAConstant};
pub use propagator::{
    classify_strength, delta_propagate, p12_delta, p12_finite, transition_probability, StrengthClass, StrengthVariant,
    DEFAULT_CLASS_TOLERANCE,
};
pub use pulse::{gaussian_pulse, PulseShape, PulseSpec, SystemParams};
pub use simulate::{
    convergence_study, finite_n_closed_form, integrate_exact, integrate_exact_with_stops, ConvergenceRow, FailedRow,
    IntegrationOptions, Sample, StudyRow, Trajectory,
};
pub use types::{ComplexScalar, Coupling, SuperpositionState};
