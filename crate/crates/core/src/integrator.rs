//! Dormand-Prince 5(4) embedded Runge-Kutta pair with PI step-size control.
//!
//! States are fixed-size real arrays; complex systems pack `(re, im)` pairs.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the step size; `f64::INFINITY` for none.
    pub h_max: f64,
    pub max_steps: usize,
    pub safety: f64,
    /// PI stabilisation exponent.
    pub beta: f64,
    /// Bounds on the ratio new step / old step.
    pub min_factor: f64,
    pub max_factor: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            h_max: f64::INFINITY,
            max_steps: 10_000_000,
            safety: 0.9,
            beta: 0.04,
            min_factor: 0.2,
            max_factor: 10.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// difference between the 5th and embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

fn error_norm<const N: usize>(err: &[f64; N], y: &[f64; N], y_new: &[f64; N], ctl: &StepControl) -> f64 {
    let mut sum = 0.0;
    for i in 0..N {
        let scale = ctl.abs_tol + ctl.rel_tol * y[i].abs().max(y_new[i].abs());
        sum += (err[i] / scale).powi(2);
    }
    (sum / N as f64).sqrt()
}

fn initial_step<const N: usize, F>(f: &F, t0: f64, y0: &[f64; N], f0: &[f64; N], ctl: &StepControl, span: f64) -> f64
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let scale: Vec<f64> = y0.iter().map(|y| ctl.abs_tol + ctl.rel_tol * y.abs()).collect();
    let rms = |v: &[f64; N]| (v.iter().zip(&scale).map(|(x, s)| (x / s).powi(2)).sum::<f64>() / N as f64).sqrt();
    let d0 = rms(y0);
    let d1 = rms(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6 * span
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span).min(ctl.h_max);
    let y1 = axpy(y0, h0, &[(1.0, f0)]);
    let f1 = f(t0 + h0, &y1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = rms(&diff) / h0;
    let dmax = d1.max(d2);
    let h1 = if dmax <= 1e-15 {
        (h0 * 1e-3).max(1e-6 * span)
    } else {
        (0.01 / dmax).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span).min(ctl.h_max)
}

/// Integrates `y' = f(t, y)` from `t0` to `t_end > t0`.
///
/// Every time in `stops` (ascending, inside `(t0, t_end]`) is hit exactly by
/// an accepted step, except stops within a few ulps of a neighbour or of
/// `t_end`, which are merged into it. `observe` is called with the initial point and after
/// every accepted step.
pub fn integrate<const N: usize, F, O>(
    f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    stops: &[f64],
    ctl: &StepControl,
    mut observe: O,
) -> Result<([f64; N], Stats)>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
    O: FnMut(f64, &[f64; N]),
{
    if t_end.is_nan() || t0.is_nan() || t_end <= t0 {
        return Err(Error::DomainError("integration interval must be nonempty".into()));
    }
    if stops.windows(2).any(|w| w[0] >= w[1]) || stops.iter().any(|&s| s <= t0 || s > t_end) {
        return Err(Error::DomainError(
            "output times must be strictly increasing inside the integration interval".into(),
        ));
    }
    let span = t_end - t0;
    // stops closer than this to a neighbour or to t_end cannot be resolved
    let resolution = 16.0 * f64::EPSILON * t0.abs().max(t_end.abs()).max(span);
    let mut merged: Vec<f64> = Vec::with_capacity(stops.len());
    for &s in stops {
        let prev = merged.last().copied().unwrap_or(t0);
        if s - prev > resolution && t_end - s > resolution {
            merged.push(s);
        }
    }
    let stops = merged.as_slice();
    let expo = 0.2 - 0.75 * ctl.beta;

    let mut stats = Stats::default();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    stats.evaluations += 1;
    observe(t, &y);

    let mut h = initial_step(&f, t0, &y0, &k1, ctl, span);
    stats.evaluations += 1;
    let mut err_old: f64 = 1e-4;
    let mut last_rejected = false;
    let mut next_stop = 0usize;

    loop {
        if stats.accepted + stats.rejected >= ctl.max_steps {
            return Err(Error::MaxStepsExceeded {
                max_steps: ctl.max_steps,
                t,
            });
        }
        let target = stops.get(next_stop).copied().unwrap_or(t_end);
        let mut landing = false;
        if t + h >= target || (target - t - h) <= 1e-12 * span {
            h = target - t;
            landing = true;
        }
        if h <= 4.0 * f64::EPSILON * t.abs().max(span) {
            return Err(Error::StepSizeUnderflow { t, h });
        }

        let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let t_new = if landing { target } else { t + h };
        let k7 = f(t_new, &y_new);
        stats.evaluations += 6;

        if y_new.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { t: t_new });
        }

        let mut err = [0.0; N];
        for i in 0..N {
            err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let err = error_norm(&err, &y, &y_new, ctl);
        let fac_err = err.powf(expo);

        if err <= 1.0 {
            let mut fac = fac_err / err_old.powf(ctl.beta) / ctl.safety;
            fac = fac.clamp(1.0 / ctl.max_factor, 1.0 / ctl.min_factor);
            let mut h_new = (h / fac).min(ctl.h_max);
            if last_rejected {
                h_new = h_new.min(h);
            }
            err_old = err.max(1e-4);
            stats.accepted += 1;
            t = t_new;
            y = y_new;
            k1 = k7;
            observe(t, &y);
            last_rejected = false;
            if landing {
                if next_stop < stops.len() && target == stops[next_stop] {
                    next_stop += 1;
                }
                if t >= t_end {
                    return Ok((y, stats));
                }
            }
            h = h_new;
        } else {
            stats.rejected += 1;
            h /= (fac_err / ctl.safety).min(1.0 / ctl.min_factor);
            last_rejected = true;
        }
    }
}
