//! Interaction strengths that drive a superposition onto the first
//! eigenstate, and the reversal of that collapse.
//!
//! A collapse requires `cos|k| = +-|a1|`, which gives the moduli
//! `|k| = 2 pi m +- arccos(+-|a1|)`, together with the phase condition
//! `k / k* = z = -(a1 / a1*) (a2* / a2)`. The strength is `k = +-R sqrt(z)`.
//! Squaring the collapse condition admits both overall signs for each
//! modulus; only the sign that actually annihilates `c2` is kept.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::propagator::delta_propagate;
use crate::types::{ComplexScalar, Coupling, SuperpositionState};

/// Largest `|c2|` accepted for a reported solution.
pub const COLLAPSE_RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Moduli closer than this are reported once.
const DISTINCT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollapseTarget {
    Eigenstate1,
}

/// Position of a modulus in the branch set `2 pi m + offset * arccos(arccos_sign * |a1|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseBranch {
    /// The modulus `|k|`.
    pub r: f64,
    /// Overall sign in `k = +-R sqrt(z)`.
    pub sign: Sign,
    /// `m` in the `2 pi m` offset.
    pub branch_index: u32,
    /// Sign inside the arccos; also the sign of the collapsed amplitude
    /// relative to `a1 / |a1|`.
    pub arccos_sign: Sign,
    /// Sign in front of the arccos; always `Plus` for `branch_index = 0`.
    pub offset_sign: Sign,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseSolution {
    pub k: ComplexScalar,
    pub branch: CollapseBranch,
    /// Unit phase constraint; `1` by convention when an amplitude vanishes.
    pub z: ComplexScalar,
    /// `|c2|` after the pulse.
    pub residual: f64,
}

impl CollapseSolution {
    pub fn coupling(&self) -> Coupling {
        Coupling::new(self.k).expect("collapse strengths are finite")
    }
}

/// `z = -(a1 / a1*)(a2* / a2)`, or `None` when either amplitude vanishes.
pub fn phase_constraint(state: &SuperpositionState) -> Option<ComplexScalar> {
    let (a1, a2) = (state.a1(), state.a2());
    if a1.norm() == 0.0 || a2.norm() == 0.0 {
        return None;
    }
    let u1 = a1 / a1.norm();
    let u2 = a2 / a2.norm();
    Some(-(u1 * u1) * (u2.conj() * u2.conj()))
}

/// Moduli `|k| <= 2 pi max_branch + pi` that satisfy `cos|k| = +-|a1|`,
/// ascending, without duplicates.
pub fn branch_moduli(alpha1_mod: f64, max_branch: u32) -> Vec<(f64, u32, Sign, Sign)> {
    let x = alpha1_mod.clamp(0.0, 1.0);
    let mut out: Vec<(f64, u32, Sign, Sign)> = Vec::new();
    for m in 0..=max_branch {
        let base = 2.0 * PI * m as f64;
        let offsets: &[Sign] = if m == 0 {
            &[Sign::Plus]
        } else {
            &[Sign::Minus, Sign::Plus]
        };
        for &offset in offsets {
            for arccos_sign in [Sign::Plus, Sign::Minus] {
                let r = base + offset.value() * (arccos_sign.value() * x).acos();
                out.push((r, m, arccos_sign, offset));
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out.dedup_by(|b, a| (b.0 - a.0).abs() <= DISTINCT_TOLERANCE);
    out
}

/// Enumerates every interaction strength that collapses `state` onto the
/// first eigenstate with `|k|` up to `2 pi max_branch + pi`.
///
/// Each solution is checked against [`delta_propagate`]. When an amplitude
/// vanishes the phase of `k` is taken as 0.
pub fn collapse_strengths(
    state: &SuperpositionState,
    max_branch: u32,
    target: CollapseTarget,
) -> Result<Vec<CollapseSolution>> {
    let CollapseTarget::Eigenstate1 = target;
    let (a1, a2) = (state.a1(), state.a2());
    if !crate::types::is_finite(a1) || !crate::types::is_finite(a2) {
        return Err(Error::NonFiniteInput("state amplitude"));
    }
    let z = phase_constraint(state).unwrap_or(ComplexScalar::new(1.0, 0.0));
    let root = z.sqrt();

    let mut solutions: Vec<CollapseSolution> = Vec::new();
    for (r, branch_index, arccos_sign, offset_sign) in branch_moduli(a1.norm(), max_branch) {
        for sign in [Sign::Plus, Sign::Minus] {
            let k = root * (sign.value() * r);
            let coupling = Coupling::new(k)?;
            let out = delta_propagate(state, &coupling)?;
            let residual = out.a2().norm();
            if residual >= COLLAPSE_RESIDUAL_TOLERANCE || (out.a1().norm() - 1.0).abs() >= COLLAPSE_RESIDUAL_TOLERANCE {
                continue;
            }
            if solutions.iter().any(|s| (s.k - k).norm() <= DISTINCT_TOLERANCE) {
                continue;
            }
            solutions.push(CollapseSolution {
                k,
                branch: CollapseBranch {
                    r,
                    sign,
                    branch_index,
                    arccos_sign,
                    offset_sign,
                },
                z,
                residual,
            });
        }
    }
    Ok(solutions)
}

/// The collapsed amplitude `+-a1/|a1|`, with the sign of the arccos branch.
pub fn collapsed_phase(state: &SuperpositionState, solution: &CollapseSolution) -> Result<ComplexScalar> {
    let a1 = state.a1();
    let m = a1.norm();
    if m == 0.0 {
        return Err(Error::DegenerateState);
    }
    Ok(a1 / m * solution.branch.arccos_sign.value())
}

/// Strength that undoes a collapse: `-k`.
pub fn reverse_strength(solution: &CollapseSolution) -> ComplexScalar {
    -solution.k
}

/// `|d|k| / d|a1||` along either branch.
pub fn strength_sensitivity(alpha1_mod: f64) -> Result<f64> {
    if !alpha1_mod.is_finite() {
        return Err(Error::NonFiniteInput("|a1|"));
    }
    if !(0.0..1.0).contains(&alpha1_mod) {
        return Err(Error::DomainError(format!(
            "sensitivity requires 0 <= |a1| < 1, got {alpha1_mod}"
        )));
    }
    Ok(1.0 / (1.0 - alpha1_mod * alpha1_mod).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure1Row {
    pub alpha1_mod: f64,
    /// `arccos(|a1|)`
    pub kmod_plus: f64,
    /// `arccos(-|a1|)`
    pub kmod_minus: f64,
}

/// Both base branches of the collapse modulus on a uniform `|a1|` grid over `[0, 1]`.
pub fn figure1_data(num_points: usize) -> Result<Vec<Figure1Row>> {
    if num_points < 2 {
        return Err(Error::DomainError("figure grid needs at least two points".into()));
    }
    let last = (num_points - 1) as f64;
    Ok((0..num_points)
        .map(|i| {
            let x = i as f64 / last;
            Figure1Row {
                alpha1_mod: x,
                kmod_plus: x.acos(),
                kmod_minus: (-x).acos(),
            }
        })
        .collect())
}
