//! Exact propagator for an infinitely narrow pulse and the transition
//! probabilities derived from it.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::types::{is_finite, ComplexScalar, Coupling, SuperpositionState};

/// Default tolerance on `2|k|/pi` used by [`classify_strength`].
pub const DEFAULT_CLASS_TOLERANCE: f64 = 1e-9;

const I: ComplexScalar = ComplexScalar::new(0.0, 1.0);

fn check_inputs(state: &SuperpositionState, k: &Coupling) -> Result<()> {
    if !is_finite(state.a1()) || !is_finite(state.a2()) {
        return Err(Error::NonFiniteInput("state amplitude"));
    }
    if !is_finite(k.value()) {
        return Err(Error::NonFiniteInput("coupling"));
    }
    Ok(())
}

/// Applies the delta-pulse map with coupling `k` to `state`:
///
/// ```text
/// c1 = a1 cos|k| - i a2 (k/|k|)  sin|k|
/// c2 = a2 cos|k| - i a1 (k*/|k|) sin|k|
/// ```
///
/// The energy gap does not enter.
pub fn delta_propagate(state: &SuperpositionState, k: &Coupling) -> Result<SuperpositionState> {
    check_inputs(state, k)?;
    let (sin, cos) = k.modulus().sin_cos();
    let u = k.unit();
    let (a1, a2) = (state.a1(), state.a2());
    let c1 = a1 * cos - I * a2 * u * sin;
    let c2 = a2 * cos - I * a1 * u.conj() * sin;
    Ok(SuperpositionState::from_unitary_image(c1, c2))
}

/// Probability `|c2|^2` of finding the second eigenstate after the pulse.
pub fn transition_probability(state: &SuperpositionState, k: &Coupling) -> Result<f64> {
    let out = delta_propagate(state, k)?;
    Ok(out.a2().norm_sqr().clamp(0.0, 1.0))
}

/// `P(1 -> 2) = sin^2 |k|` for a delta pulse.
pub fn p12_delta(k: &Coupling) -> f64 {
    k.modulus().sin().powi(2)
}

/// Transition probability of a finite pulse with amplitude `omega0_amp`,
/// constant gap `gap` and width `width`:
/// `sin^2(pi Omega0 T / 2) / cosh^2(pi Delta0 T / 2)`.
pub fn p12_finite(omega0_amp: f64, gap: f64, width: f64) -> Result<f64> {
    if !omega0_amp.is_finite() || !gap.is_finite() || !width.is_finite() {
        return Err(Error::NonFiniteInput("finite pulse parameter"));
    }
    if width < 0.0 || omega0_amp < 0.0 {
        return Err(Error::DomainError(
            "pulse width and amplitude must be nonnegative".into(),
        ));
    }
    let num = (0.5 * PI * omega0_amp * width).sin().powi(2);
    let den = (0.5 * PI * gap * width).cosh().powi(2);
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrengthVariant {
    /// `|k| = 2 pi m`: the state is unchanged.
    Identity,
    /// `|k| = pi (2m - 1)`: both amplitudes change sign.
    SignFlip,
    /// `|k| = pi/2 + pi m`: the moduli of the amplitudes are exchanged.
    Swap,
    Generic,
}

impl StrengthVariant {
    pub fn as_str(&self) -> &'static str {
        match self {
            StrengthVariant::Identity => "identity",
            StrengthVariant::SignFlip => "sign_flip",
            StrengthVariant::Swap => "swap",
            StrengthVariant::Generic => "generic",
        }
    }
}

/// Classification of `|k|` against the multiples `l pi / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrengthClass {
    pub variant: StrengthVariant,
    /// `l` with `|k| = l pi / 2`, absent for [`StrengthVariant::Generic`].
    pub ell: Option<u64>,
}

pub fn classify_strength(k: &Coupling, tol: f64) -> Result<StrengthClass> {
    if !is_finite(k.value()) {
        return Err(Error::NonFiniteInput("coupling"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::DomainError("classification tolerance must be positive".into()));
    }
    let x = 2.0 * k.modulus() / PI;
    let ell = x.round();
    if (x - ell).abs() > tol || ell > u64::MAX as f64 {
        return Ok(StrengthClass {
            variant: StrengthVariant::Generic,
            ell: None,
        });
    }
    let ell = ell as u64;
    let variant = match ell % 4 {
        0 => StrengthVariant::Identity,
        2 => StrengthVariant::SignFlip,
        _ => StrengthVariant::Swap,
    };
    Ok(StrengthClass {
        variant,
        ell: Some(ell),
    })
}
