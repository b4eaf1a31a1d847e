//! The `verify` suite: each check compares two independent routes to the
//! same quantity over seeded random inputs.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use pulsekick_core::oracle::appendix_a_propagate;
use pulsekick_core::{
    collapse_strengths, collapsed_phase, conserved_quadratic_residual, delta_propagate, finite_n_closed_form,
    integrate_exact, reverse_strength, strength_sensitivity, CollapseTarget, Coupling, Error, IntegrationOptions,
    PulseSpec, SuperpositionState, SystemParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::output::{Cell, Table};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub samples: usize,
    pub max_error: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.max_error < self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["check", "samples", "max_error", "tolerance", "passed"]);
        for c in &self.checks {
            t.push(vec![
                c.name.into(),
                Cell::Int(c.samples as i64),
                c.max_error.into(),
                c.tolerance.into(),
                if c.passed() { "true" } else { "false" }.into(),
            ]);
        }
        t
    }
}

pub fn random_state(rng: &mut impl Rng) -> SuperpositionState {
    let w: f64 = rng.gen();
    let a1 = Complex64::from_polar(w.sqrt(), rng.gen_range(-PI..PI));
    let a2 = Complex64::from_polar((1.0 - w).sqrt(), rng.gen_range(-PI..PI));
    SuperpositionState::new(a1, a2).expect("unit norm by construction")
}

pub fn random_coupling(rng: &mut impl Rng, lo: f64, hi: f64) -> Coupling {
    Coupling::from_polar(rng.gen_range(lo..hi), rng.gen_range(-PI..PI)).expect("finite")
}

fn check(name: &'static str, tolerance: f64, errors: impl IntoIterator<Item = f64>) -> Check {
    let mut samples = 0;
    let mut max_error: f64 = 0.0;
    for e in errors {
        samples += 1;
        // NaN must fail the check
        max_error = if e.is_nan() { f64::NAN } else { max_error.max(e) };
        if max_error.is_nan() {
            break;
        }
    }
    Check {
        name,
        samples,
        max_error,
        tolerance,
    }
}

fn failure() -> f64 {
    f64::INFINITY
}

/// Runs every check with `draws` random inputs each, seeded by `seed`.
pub fn run_suite(seed: u64, draws: usize, opts: &IntegrationOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    let pairs: Vec<(SuperpositionState, Coupling)> = (0..draws)
        .map(|_| (random_state(&mut rng), random_coupling(&mut rng, 0.0, 20.0)))
        .collect();

    checks.push(check(
        "norm_conservation",
        1e-12,
        pairs.iter().map(|(s, k)| match delta_propagate(s, k) {
            Ok(out) => (out.norm_sqr() - 1.0).abs(),
            Err(_) => failure(),
        }),
    ));

    checks.push(check(
        "inverse_coupling",
        1e-12,
        pairs.iter().map(|(s, k)| {
            delta_propagate(s, k)
                .and_then(|out| delta_propagate(&out, &(-*k)))
                .map(|back| back.max_abs_diff(s))
                .unwrap_or_else(|_| failure())
        }),
    ));

    let oracle_pairs: Vec<(SuperpositionState, Coupling)> = (0..draws)
        .map(|_| (random_state(&mut rng), random_coupling(&mut rng, 1e-3, 10.0)))
        .collect();
    checks.push(check(
        "appendix_a_equivalence",
        1e-10,
        oracle_pairs
            .iter()
            .filter_map(|(s, k)| match appendix_a_propagate(s, k) {
                Ok(a) => Some(
                    delta_propagate(s, k)
                        .map(|b| a.max_abs_diff(&b))
                        .unwrap_or_else(|_| failure()),
                ),
                // measure-zero set where the logarithm is singular
                Err(Error::DegenerateLog) => None,
                Err(_) => Some(failure()),
            }),
    ));

    checks.push(check(
        "special_strengths",
        1e-12,
        (0..draws.min(100)).flat_map(|_| {
            let s = random_state(&mut rng);
            let phase = rng.gen_range(-PI..PI);
            (1..=4u32).map(move |ell| {
                let k = Coupling::from_polar(ell as f64 * FRAC_PI_2, phase).expect("finite");
                let Ok(out) = delta_propagate(&s, &k) else {
                    return failure();
                };
                match ell {
                    4 => out.max_abs_diff(&s),
                    2 => out.max_abs_diff(&s.with_global_phase(PI)),
                    _ => (out.a2().norm_sqr() - s.a1().norm_sqr()).abs(),
                }
            })
        }),
    ));

    let mut collapse_errors = Vec::new();
    let mut reverse_errors = Vec::new();
    for _ in 0..draws {
        let s = random_state(&mut rng);
        match collapse_strengths(&s, 0, CollapseTarget::Eigenstate1) {
            Ok(sols) if !sols.is_empty() => {
                for sol in &sols {
                    let out = delta_propagate(&s, &sol.coupling());
                    let phase = collapsed_phase(&s, sol);
                    match (out, phase) {
                        (Ok(out), Ok(phase)) => {
                            collapse_errors.push(out.a2().norm().max((phase - out.a1()).norm()));
                            let back = SuperpositionState::new(phase, Complex64::new(0.0, 0.0))
                                .and_then(|c| delta_propagate(&c, &Coupling::new(reverse_strength(sol))?));
                            reverse_errors.push(back.map(|b| b.max_abs_diff(&s)).unwrap_or_else(|_| failure()));
                        }
                        _ => collapse_errors.push(failure()),
                    }
                }
            }
            _ => collapse_errors.push(failure()),
        }
    }
    checks.push(check("collapse_residual", 1e-10, collapse_errors));
    checks.push(check("collapse_reversal", 1e-10, reverse_errors));

    let h = 1e-6;
    checks.push(check(
        "sensitivity_finite_difference",
        1e-6,
        (0..=99).map(|i| {
            let x = i as f64 / 100.0;
            let fd = (((x + h).acos() - (x - h).acos()) / (2.0 * h)).abs();
            strength_sensitivity(x)
                .map(|d| (d - fd).abs() / d)
                .unwrap_or_else(|_| failure())
        }),
    ));

    let mut closed_form_errors = Vec::new();
    let mut quadratic_errors = Vec::new();
    for n in [0.5, 3.0, 40.0] {
        let s = random_state(&mut rng);
        let k = random_coupling(&mut rng, 0.0, 10.0);
        let pulse = PulseSpec::gaussian(n).expect("positive n");
        let params = SystemParams::gapless();
        match integrate_exact(&s, &k, &params, &pulse, opts) {
            Ok(traj) => {
                for sample in &traj.samples {
                    let err = finite_n_closed_form(&s, &k, &params, &pulse, sample.t)
                        .map(|e| (sample.a1 - e.a1()).norm().max((sample.a2 - e.a2()).norm()))
                        .unwrap_or_else(|_| failure());
                    closed_form_errors.push(err);
                }
                quadratic_errors.push(conserved_quadratic_residual(&traj, &s, &k).unwrap_or_else(|_| failure()));
            }
            Err(_) => {
                closed_form_errors.push(failure());
                quadratic_errors.push(failure());
            }
        }
    }
    checks.push(check("closed_form_vs_integrator", 1e-8, closed_form_errors));
    checks.push(check("conserved_quadratic", 1e-8, quadratic_errors));

    Outcome { checks }
}
