//! Finite-width pulse dynamics: direct integration of the coupled amplitude
//! equations, the closed-form solution of the gap-free system, and
//! convergence studies toward the delta-pulse limit.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::integrator::{self, StepControl};
use crate::propagator::delta_propagate;
use crate::pulse::{PulseSpec, SystemParams};
use crate::types::{ComplexScalar, Coupling, SuperpositionState};

const I: ComplexScalar = ComplexScalar::new(0.0, 1.0);

/// Settings for [`integrate_exact`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Half-width of the integration window in units of `1/n`.
    pub window: f64,
    pub max_steps: usize,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            window: 8.0,
            max_steps: 10_000_000,
        }
    }
}

impl IntegrationOptions {
    fn validate(&self) -> Result<()> {
        let tol_ok = |x: f64| x > 0.0 && x <= 1e-4;
        if !tol_ok(self.rel_tol) || !tol_ok(self.abs_tol) {
            return Err(Error::DomainError(format!(
                "tolerances must lie in (0, 1e-4], got rel {} abs {}",
                self.rel_tol, self.abs_tol
            )));
        }
        if !(self.window.is_finite() && self.window > 0.0) {
            return Err(Error::DomainError("window must be positive and finite".into()));
        }
        if self.max_steps == 0 {
            return Err(Error::DomainError("max_steps must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub a1: ComplexScalar,
    pub a2: ComplexScalar,
}

impl Sample {
    pub fn norm_sqr(&self) -> f64 {
        self.a1.norm_sqr() + self.a2.norm_sqr()
    }
}

/// Time-ordered amplitudes produced by [`integrate_exact`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub n: f64,
    pub omega0: f64,
    pub k: Coupling,
    pub rel_tol: f64,
    pub abs_tol: f64,
}

impl Trajectory {
    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has at least one sample")
    }

    /// Final amplitudes. Not renormalized.
    pub fn final_amplitudes(&self) -> [ComplexScalar; 2] {
        let s = self.last();
        [s.a1, s.a2]
    }

    /// Largest `| |a1|^2 + |a2|^2 - 1 |` over all samples.
    pub fn max_norm_drift(&self) -> f64 {
        self.samples
            .iter()
            .map(|s| (s.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Keeps at most `max_rows` samples, uniformly spaced in index and
    /// always including the first and last sample.
    pub fn thinned(&self, max_rows: usize) -> Vec<Sample> {
        let len = self.samples.len();
        if max_rows == 0 {
            return Vec::new();
        }
        if len <= max_rows {
            return self.samples.clone();
        }
        if max_rows == 1 {
            return vec![*self.last()];
        }
        let mut out = Vec::with_capacity(max_rows);
        let mut prev = usize::MAX;
        for j in 0..max_rows {
            let idx = ((j as u128 * (len - 1) as u128 + (max_rows - 1) as u128 / 2) / (max_rows - 1) as u128) as usize;
            if idx != prev {
                out.push(self.samples[idx]);
                prev = idx;
            }
        }
        out
    }
}

fn pack(a1: ComplexScalar, a2: ComplexScalar) -> [f64; 4] {
    [a1.re, a1.im, a2.re, a2.im]
}

fn unpack(y: &[f64; 4]) -> (ComplexScalar, ComplexScalar) {
    (ComplexScalar::new(y[0], y[1]), ComplexScalar::new(y[2], y[3]))
}

/// Integrates
///
/// ```text
/// c1' = -i k  q_n(t) e^{-i w0 t} c2
/// c2' = -i k* q_n(t) e^{+i w0 t} c1
/// ```
///
/// over `[-w/n, w/n]` starting from `state`.
pub fn integrate_exact(
    state: &SuperpositionState,
    k: &Coupling,
    params: &SystemParams,
    pulse: &PulseSpec,
    opts: &IntegrationOptions,
) -> Result<Trajectory> {
    integrate_exact_with_stops(state, k, params, pulse, opts, &[])
}

/// Like [`integrate_exact`], with the additional guarantee that every time in
/// `stops` appears as a sample.
pub fn integrate_exact_with_stops(
    state: &SuperpositionState,
    k: &Coupling,
    params: &SystemParams,
    pulse: &PulseSpec,
    opts: &IntegrationOptions,
    stops: &[f64],
) -> Result<Trajectory> {
    opts.validate()?;
    let n = pulse.n();
    let t_max = opts.window / n;
    let kv = k.value();
    let w0 = params.omega0();
    let rhs = |t: f64, y: &[f64; 4]| {
        let (c1, c2) = unpack(y);
        let q = pulse.value(t);
        let rot = ComplexScalar::from_polar(1.0, w0 * t);
        let d1 = -I * kv * q * rot.conj() * c2;
        let d2 = -I * kv.conj() * q * rot * c1;
        pack(d1, d2)
    };
    let ctl = StepControl {
        rel_tol: opts.rel_tol,
        abs_tol: opts.abs_tol,
        // keeps the pulse from being stepped over
        h_max: 0.25 / n,
        max_steps: opts.max_steps,
        ..Default::default()
    };
    let mut samples = Vec::new();
    integrator::integrate(rhs, -t_max, pack(state.a1(), state.a2()), t_max, stops, &ctl, |t, y| {
        let (a1, a2) = unpack(y);
        samples.push(Sample { t, a1, a2 });
    })?;
    Ok(Trajectory {
        samples,
        n,
        omega0: w0,
        k: *k,
        rel_tol: opts.rel_tol,
        abs_tol: opts.abs_tol,
    })
}

/// Integration constants `(b1, b2)` of the gap-free closed form.
pub fn closed_form_constants(state: &SuperpositionState, k: &Coupling) -> (ComplexScalar, ComplexScalar) {
    let half = 0.5 * k.modulus();
    let (s, c) = half.sin_cos();
    let u = k.unit();
    let (a1, a2) = (state.a1(), state.a2());
    let b1 = a1 * c - I * a2 * u * s;
    let b2 = -a1 * s - I * a2 * u * c;
    (b1, b2)
}

/// Gap-free closed form expressed through `e = erf(n t)`:
///
/// ```text
/// c1 = b1 cos(|k| e / 2) + b2 sin(|k| e / 2)
/// c2 = i (|k|/k) (b2 cos(|k| e / 2) - b1 sin(|k| e / 2))
/// ```
///
/// `e = -1` reproduces the initial state and `e = 1` the delta-pulse result.
pub fn closed_form_from_erf(state: &SuperpositionState, k: &Coupling, erf_value: f64) -> SuperpositionState {
    let (b1, b2) = closed_form_constants(state, k);
    let (s, c) = (0.5 * k.modulus() * erf_value).sin_cos();
    // |k| / k = conj(k / |k|)
    let v = k.unit().conj();
    let c1 = b1 * c + b2 * s;
    let c2 = I * v * (b2 * c - b1 * s);
    SuperpositionState::from_unitary_image(c1, c2)
}

/// Exact amplitudes at time `t` for a Gaussian pulse of width parameter `n`
/// when the energy gap vanishes.
pub fn finite_n_closed_form(
    state: &SuperpositionState,
    k: &Coupling,
    params: &SystemParams,
    pulse: &PulseSpec,
    t: f64,
) -> Result<SuperpositionState> {
    if params.omega0() != 0.0 {
        return Err(Error::DomainError(
            "closed form is exact only for a vanishing energy gap".into(),
        ));
    }
    if t.is_nan() {
        return Err(Error::NonFiniteInput("time"));
    }
    Ok(closed_form_from_erf(state, k, libm::erf(pulse.n() * t)))
}

/// Removes the global phase of `numeric` relative to `reference`, aligning
/// on the component with the larger modulus in `reference`.
pub fn align_global_phase(numeric: [ComplexScalar; 2], reference: [ComplexScalar; 2]) -> [ComplexScalar; 2] {
    let j = if reference[0].norm() >= reference[1].norm() {
        0
    } else {
        1
    };
    let ratio = reference[j] * numeric[j].conj();
    if ratio.norm() == 0.0 {
        return numeric;
    }
    let u = ratio / ratio.norm();
    [numeric[0] * u, numeric[1] * u]
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: f64,
    /// Largest componentwise deviation from the delta-pulse state, after
    /// removing the global phase.
    pub err_state: f64,
    /// `|P2(numeric) - P2(delta)|`.
    pub err_prob: f64,
}

/// A row whose integration failed.
#[derive(Debug, Clone, PartialEq)]
pub struct FailedRow {
    pub n: f64,
    pub error: Error,
}

pub type StudyRow = std::result::Result<ConvergenceRow, FailedRow>;

fn study_row(
    state: &SuperpositionState,
    k: &Coupling,
    params: &SystemParams,
    n: f64,
    opts: &IntegrationOptions,
    target: &SuperpositionState,
) -> Result<ConvergenceRow> {
    let pulse = PulseSpec::gaussian(n)?;
    let traj = integrate_exact(state, k, params, &pulse, opts)?;
    let numeric = traj.final_amplitudes();
    let reference = target.amplitudes();
    let aligned = align_global_phase(numeric, reference);
    let err_state = (aligned[0] - reference[0])
        .norm()
        .max((aligned[1] - reference[1]).norm());
    let err_prob = (numeric[1].norm_sqr() - reference[1].norm_sqr()).abs();
    Ok(ConvergenceRow { n, err_state, err_prob })
}

/// Compares finite-width integrations against the delta-pulse propagator for
/// each `n` in `n_list`. Rows are evaluated in parallel and returned in input
/// order; a failing integration marks its row without aborting the study.
pub fn convergence_study(
    state: &SuperpositionState,
    k: &Coupling,
    params: &SystemParams,
    n_list: &[f64],
    opts: &IntegrationOptions,
) -> Result<Vec<StudyRow>> {
    if n_list.is_empty() {
        return Err(Error::DomainError("n list must not be empty".into()));
    }
    if n_list
        .windows(2)
        .any(|w| w[0].is_nan() || w[1].is_nan() || w[0] >= w[1])
    {
        return Err(Error::DomainError("n list must be strictly ascending".into()));
    }
    opts.validate()?;
    let target = delta_propagate(state, k)?;
    Ok(n_list
        .par_iter()
        .map(|&n| study_row(state, k, params, n, opts, &target).map_err(|error| FailedRow { n, error }))
        .collect())
}
