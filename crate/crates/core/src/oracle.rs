//! Second, independent solution path for the pulse problem, used to check the
//! propagator and the integrated trajectories.
//!
//! Dividing the two amplitude equations gives the conserved relation
//! `k*(c1^2 - a1^2) = k(c2^2 - a2^2)`. Solving the resulting first-order
//! equation for `c1` gives, with `e = erf(n t)` and `X = exp(d sqrt(k*) - i|k| e / 2)`,
//!
//! ```text
//! c1 = (a1^2 k* - a2^2 k) / (2 X) + X / (2 k*)
//! c2 = (k* (a2^2 k - a1^2 k*) / X + X) / (2 |k|)
//! ```
//!
//! The constant `d` follows from the initial condition at `e = -1`.

use crate::error::{Error, Result};
use crate::simulate::Trajectory;
use crate::types::{ComplexScalar, Coupling, SuperpositionState};

const I: ComplexScalar = ComplexScalar::new(0.0, 1.0);

/// Integration constant `d` with the integer choosing the logarithm branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixAConstant {
    pub d: ComplexScalar,
    pub branch_k: i64,
}

fn constant_from_log_argument(arg: ComplexScalar, k: &Coupling, branch_k: i64) -> Result<AppendixAConstant> {
    let kv = k.value();
    if arg.norm() <= 4.0 * f64::EPSILON * kv.norm() {
        return Err(Error::DegenerateLog);
    }
    let log = arg.ln() + I * (2.0 * std::f64::consts::PI * branch_k as f64);
    let d = (log - I * (0.5 * kv.norm())) / kv.conj().sqrt();
    Ok(AppendixAConstant { d, branch_k })
}

fn check(state: &SuperpositionState, k: &Coupling) -> Result<()> {
    if !crate::types::is_finite(k.value()) {
        return Err(Error::NonFiniteInput("coupling"));
    }
    if !crate::types::is_finite(state.a1()) || !crate::types::is_finite(state.a2()) {
        return Err(Error::NonFiniteInput("state amplitude"));
    }
    if k.modulus() == 0.0 {
        return Err(Error::ZeroCoupling);
    }
    Ok(())
}

/// Constant matching `c1 = a1` and `c2 = a2` at `e = -1`, using the
/// principal logarithm of `k* a1 + |k| a2`.
pub fn appendix_a_constant(state: &SuperpositionState, k: &Coupling) -> Result<AppendixAConstant> {
    check(state, k)?;
    let kv = k.value();
    constant_from_log_argument(kv.conj() * state.a1() + kv.norm() * state.a2(), k, 0)
}

/// The other root of the `c1` initial condition, built on `k* a1 - |k| a2`.
/// It reproduces `a1` but gives `-a2` for the second amplitude.
pub fn appendix_a_rejected_constant(state: &SuperpositionState, k: &Coupling) -> Result<AppendixAConstant> {
    check(state, k)?;
    let kv = k.value();
    constant_from_log_argument(kv.conj() * state.a1() - kv.norm() * state.a2(), k, 0)
}

/// Same as [`appendix_a_constant`] on a chosen logarithm branch.
pub fn appendix_a_constant_on_branch(
    state: &SuperpositionState,
    k: &Coupling,
    branch_k: i64,
) -> Result<AppendixAConstant> {
    check(state, k)?;
    let kv = k.value();
    constant_from_log_argument(kv.conj() * state.a1() + kv.norm() * state.a2(), k, branch_k)
}

/// Amplitudes of the closed forms at `e = erf(n t)`.
pub fn appendix_a_amplitudes(
    state: &SuperpositionState,
    k: &Coupling,
    constant: &AppendixAConstant,
    erf_value: f64,
) -> [ComplexScalar; 2] {
    let kv = k.value();
    let kc = kv.conj();
    let modulus = kv.norm();
    let a1sq = state.a1() * state.a1();
    let a2sq = state.a2() * state.a2();
    let x = (constant.d * kc.sqrt() - I * (0.5 * modulus * erf_value)).exp();
    let c1 = 0.5 * (a1sq * kc - a2sq * kv) / x + x / (2.0 * kc);
    let c2 = (kc * (a2sq * kv - a1sq * kc) / x + x) / (2.0 * modulus);
    [c1, c2]
}

/// Post-pulse state from the closed forms at `e = 1`.
pub fn appendix_a_propagate(state: &SuperpositionState, k: &Coupling) -> Result<SuperpositionState> {
    let constant = appendix_a_constant(state, k)?;
    let [c1, c2] = appendix_a_amplitudes(state, k, &constant, 1.0);
    Ok(SuperpositionState::from_unitary_image(c1, c2))
}

/// Largest `|k*(c1^2 - a1^2) - k(c2^2 - a2^2)|` along a gap-free trajectory.
pub fn conserved_quadratic_residual(trajectory: &Trajectory, state0: &SuperpositionState, k: &Coupling) -> Result<f64> {
    if trajectory.omega0 != 0.0 {
        return Err(Error::DomainError(
            "conserved quadratic holds only on trajectories without an energy gap".into(),
        ));
    }
    let kv = k.value();
    let a1sq = state0.a1() * state0.a1();
    let a2sq = state0.a2() * state0.a2();
    Ok(trajectory
        .samples
        .iter()
        .map(|s| (kv.conj() * (s.a1 * s.a1 - a1sq) - kv * (s.a2 * s.a2 - a2sq)).norm())
        .fold(0.0, f64::max))
}
