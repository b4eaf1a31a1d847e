//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use pulsekick_cli::verify::{random_coupling, random_state};
use pulsekick_core::{
    appendix_a_propagate, collapse_strengths, collapsed_phase, conserved_quadratic_residual, delta_propagate,
    figure1_data, finite_n_closed_form, integrate_exact, p12_delta, p12_finite, reverse_strength, strength_sensitivity,
    CollapseTarget, Coupling, Error, IntegrationOptions, PulseSpec, SuperpositionState, SystemParams,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn final_p2(w0: f64, n: f64, opts: &IntegrationOptions) -> Result<f64, String> {
    let traj = integrate_exact(
        &SuperpositionState::ground(),
        &Coupling::real(1.0).unwrap(),
        &SystemParams::new(w0).unwrap(),
        &PulseSpec::gaussian(n).unwrap(),
        opts,
    )
    .map_err(|e| e.to_string())?;
    Ok(traj.last().a2.norm_sqr())
}

fn norm_conservation() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let s = random_state(&mut rng);
        let k = random_coupling(&mut rng, 0.0, 50.0);
        let out = delta_propagate(&s, &k).map_err(|e| e.to_string())?;
        worst = worst.max((out.norm_sqr() - 1.0).abs());
    }
    let elapsed = start.elapsed();
    ensure(worst < 1e-12, || format!("max norm deviation {worst:e}"))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "max | |c1|^2+|c2|^2 - 1 | = {worst:.2e} over 1e4 draws in {elapsed:.2?}"
    ))
}

fn delta_limit_convergence() -> Outcome {
    let start = Instant::now();
    let opts = IntegrationOptions::default();
    let target = p12_delta(&Coupling::real(1.0).unwrap());
    let noise_floor = 10.0 * opts.rel_tol;
    let mut summary = Vec::new();
    for (w0, limit) in [(0.0, 1e-4), (1.0, 1e-4), (5.0, 1e-3)] {
        let errs = [10.0, 20.0, 40.0, 80.0, 160.0]
            .iter()
            .map(|&n| final_p2(w0, n, &opts).map(|p| (p - target).abs()))
            .collect::<Result<Vec<_>, _>>()?;
        for w in errs.windows(2) {
            ensure(w[1] <= w[0] + noise_floor, || {
                format!("omega0={w0}: errors not decreasing {errs:?}")
            })?;
        }
        let last = *errs.last().unwrap();
        ensure(last < limit, || {
            format!("omega0={w0}: error {last:e} at n=160 exceeds {limit:e}")
        })?;
        summary.push(format!("w0={w0}: {last:.1e}"));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("|P2 - sin^2 1| at n=160: {}", summary.join(", ")))
}

fn gap_independence() -> Outcome {
    let opts = IntegrationOptions::default();
    let p = [0.0, 1.0, 5.0, 10.0]
        .iter()
        .map(|&w0| final_p2(w0, 320.0, &opts))
        .collect::<Result<Vec<_>, _>>()?;
    let spread = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - p.iter().cloned().fold(f64::INFINITY, f64::min);
    ensure(spread < 1e-3, || format!("P2 spread {spread:e} at n=320"))?;

    let mut worst: f64 = 0.0;
    for kmod in [0.3, 1.0, 2.5] {
        let k = Coupling::real(kmod).unwrap();
        let width = 1e-4;
        let amp = 2.0 * kmod / (PI * width);
        let finite = p12_finite(amp, 1.0, width).map_err(|e| e.to_string())?;
        worst = worst.max((finite - p12_delta(&k)).abs());
    }
    ensure(worst < 1e-6, || format!("finite pulse at T=1e-4 off by {worst:e}"))?;
    Ok(format!(
        "P2 spread over omega0 = {spread:.2e}; finite-pulse error at T=1e-4 = {worst:.2e}"
    ))
}

fn special_strengths() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst = [0.0f64; 3];
    for _ in 0..100 {
        let s = random_state(&mut rng);
        let phase = rand::Rng::gen_range(&mut rng, -PI..PI);
        for ell in 1..=8u32 {
            let k = Coupling::from_polar(ell as f64 * FRAC_PI_2, phase).unwrap();
            let out = delta_propagate(&s, &k).map_err(|e| e.to_string())?;
            match ell % 4 {
                0 => worst[0] = worst[0].max(out.max_abs_diff(&s)),
                2 => worst[1] = worst[1].max(out.max_abs_diff(&s.with_global_phase(PI))),
                _ => worst[2] = worst[2].max((out.a2().norm_sqr() - s.a1().norm_sqr()).abs()),
            }
        }
    }
    ensure(worst.iter().all(|&w| w < 1e-12), || format!("deviations {worst:?}"))?;
    Ok(format!(
        "identity {:.1e}, sign flip {:.1e}, swap {:.1e}",
        worst[0], worst[1], worst[2]
    ))
}

fn collapse_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut residual: f64 = 0.0;
    let mut phase_err: f64 = 0.0;
    let mut count = 0;
    for _ in 0..1000 {
        let s = random_state(&mut rng);
        let sols = collapse_strengths(&s, 0, CollapseTarget::Eigenstate1).map_err(|e| e.to_string())?;
        ensure(!sols.is_empty(), || format!("no solutions for {s}"))?;
        for sol in &sols {
            let out = delta_propagate(&s, &sol.coupling()).map_err(|e| e.to_string())?;
            residual = residual.max(out.a2().norm());
            let phase = collapsed_phase(&s, sol).map_err(|e| e.to_string())?;
            let expected = s.a1() / s.a1().norm() * sol.branch.arccos_sign.value();
            phase_err = phase_err
                .max((phase - expected).norm())
                .max((out.a1() - expected).norm());
            count += 1;
        }
    }
    ensure(residual < 1e-10, || format!("|c2| up to {residual:e}"))?;
    ensure(phase_err < 1e-10, || format!("collapsed phase off by {phase_err:e}"))?;

    let rows = figure1_data(1001).map_err(|e| e.to_string())?;
    let sum_err = rows
        .iter()
        .map(|r| (r.kmod_plus + r.kmod_minus - PI).abs())
        .fold(0.0, f64::max);
    ensure(sum_err < 1e-12, || format!("branch sum off by {sum_err:e}"))?;
    let (first, last) = (rows[0], rows[rows.len() - 1]);
    ensure(
        first.alpha1_mod == 0.0 && first.kmod_plus == FRAC_PI_2 && first.kmod_minus == FRAC_PI_2,
        || format!("first row {first:?}"),
    )?;
    ensure(
        last.alpha1_mod == 1.0 && last.kmod_plus == 0.0 && last.kmod_minus == PI,
        || format!("last row {last:?}"),
    )?;
    Ok(format!(
        "{count} solutions: max |c2| {residual:.1e}, phase error {phase_err:.1e}; figure branch sum error {sum_err:.1e}"
    ))
}

fn reversibility() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let s = random_state(&mut rng);
        for sol in collapse_strengths(&s, 0, CollapseTarget::Eigenstate1).map_err(|e| e.to_string())? {
            let phase = collapsed_phase(&s, &sol).map_err(|e| e.to_string())?;
            let collapsed = SuperpositionState::new(phase, Complex64::new(0.0, 0.0)).map_err(|e| e.to_string())?;
            let back = delta_propagate(&collapsed, &Coupling::new(reverse_strength(&sol)).unwrap())
                .map_err(|e| e.to_string())?;
            worst = worst.max(back.max_abs_diff(&s));
        }
    }
    ensure(worst < 1e-10, || format!("round trip off by {worst:e}"))?;
    Ok(format!("max round-trip deviation {worst:.1e}"))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut log_form: f64 = 0.0;
    let mut compared = 0;
    for _ in 0..1000 {
        let s = random_state(&mut rng);
        let k = random_coupling(&mut rng, 1e-3, 10.0);
        match appendix_a_propagate(&s, &k) {
            Ok(a) => {
                log_form = log_form.max(a.max_abs_diff(&delta_propagate(&s, &k).unwrap()));
                compared += 1;
            }
            Err(Error::DegenerateLog) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    ensure(log_form < 1e-10, || format!("log-form propagator off by {log_form:e}"))?;

    let opts = IntegrationOptions::default();
    let mut pointwise: f64 = 0.0;
    let mut quadratic: f64 = 0.0;
    for n in [0.5, 1.0, 3.0, 20.0, 300.0] {
        let s = random_state(&mut rng);
        let k = random_coupling(&mut rng, 0.0, 10.0);
        let pulse = PulseSpec::gaussian(n).unwrap();
        let params = SystemParams::gapless();
        let traj = integrate_exact(&s, &k, &params, &pulse, &opts).map_err(|e| e.to_string())?;
        for x in &traj.samples {
            let exact = finite_n_closed_form(&s, &k, &params, &pulse, x.t).map_err(|e| e.to_string())?;
            pointwise = pointwise.max((x.a1 - exact.a1()).norm().max((x.a2 - exact.a2()).norm()));
        }
        quadratic = quadratic.max(conserved_quadratic_residual(&traj, &s, &k).map_err(|e| e.to_string())?);
    }
    ensure(pointwise < 1e-8, || format!("closed form vs integrator {pointwise:e}"))?;
    ensure(quadratic < 1e-8, || {
        format!("conserved quadratic residual {quadratic:e}")
    })?;
    Ok(format!(
        "log form {log_form:.1e} ({compared} draws), closed form {pointwise:.1e}, quadratic {quadratic:.1e}"
    ))
}

fn sensitivity() -> Outcome {
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    for i in 0..=990 {
        let x = i as f64 / 1000.0;
        let fd = ((x + h).acos() - (x - h).acos()) / (2.0 * h);
        let d = strength_sensitivity(x).map_err(|e| e.to_string())?;
        worst = worst.max((d - fd.abs()).abs() / d);
    }
    ensure(worst < 1e-6, || format!("relative error {worst:e}"))?;
    Ok(format!("max relative error {worst:.1e} on [0, 0.99]"))
}

fn cli_determinism() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_pulsekick");
    let dir = std::env::temp_dir().join(format!("pulsekick-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let runs: &[&[&str]] = &[
        &[
            "propagate",
            "--a1",
            "0.6,0.1",
            "--a2",
            "0,0.7937253933193772",
            "--k",
            "0.4,1.1",
        ],
        &[
            "sweep",
            "--a1",
            "1,0",
            "--a2",
            "0,0",
            "--param",
            "kmod",
            "--from",
            "0",
            "--to",
            "6.283185307179586",
            "--steps",
            "629",
        ],
        &[
            "simulate",
            "--k",
            "1,0.5",
            "--omega0",
            "2",
            "--n",
            "20",
            "--max-rows",
            "200",
        ],
        &["converge", "--k", "1,0", "--omega0", "1", "--n", "10,20,40"],
        &["collapse", "--a1", "0.6,0", "--a2", "0.8,0", "--branches", "2"],
        &[
            "reverse",
            "--a1",
            "0.6,0.3",
            "--a2",
            "0,0.7416198487095663",
            "--branches",
            "1",
        ],
        &["figure1", "--points", "51"],
        &["verify", "--draws", "200"],
        &["propagate", "--format", "json", "--k", "2,1"],
    ];
    let mut sweep_csv = String::new();
    for (i, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let path: PathBuf = dir.join(format!("run{i}-{rep}.out"));
            let status = Command::new(exe)
                .args(*args)
                .arg("--output")
                .arg(&path)
                .env_remove("PULSEKICK_CONFIG")
                .output()
                .map_err(|e| e.to_string())?;
            ensure(status.status.success(), || {
                format!("{args:?} failed: {}", String::from_utf8_lossy(&status.stderr))
            })?;
            outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        ensure(outputs[0] == outputs[1], || format!("{args:?}: outputs differ"))?;
        if args[0] == "sweep" {
            sweep_csv = String::from_utf8(outputs.remove(0)).map_err(|e| e.to_string())?;
        }
    }
    std::fs::remove_dir_all(&dir).ok();

    let mut lines = sweep_csv.lines();
    ensure(lines.next() == Some("kmod,p2"), || "sweep header".into())?;
    let mut worst: f64 = 0.0;
    let mut rows = 0;
    for line in lines {
        let (kmod, p2) = line.split_once(',').ok_or("malformed sweep row")?;
        let kmod: f64 = kmod.parse().map_err(|_| "bad kmod")?;
        let p2: f64 = p2.parse().map_err(|_| "bad p2")?;
        worst = worst.max((p2 - kmod.sin().powi(2)).abs());
        rows += 1;
    }
    ensure(rows == 630, || format!("expected 630 sweep rows, got {rows}"))?;
    ensure(worst < 1e-12, || format!("sweep deviates from sin^2 by {worst:e}"))?;
    Ok(format!(
        "{} subcommand runs byte-identical; sweep max |p2 - sin^2 kmod| = {worst:.1e}",
        runs.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 norm conservation", norm_conservation),
        ("2 delta-limit convergence", delta_limit_convergence),
        ("3 gap independence", gap_independence),
        ("4 special strengths", special_strengths),
        ("5 collapse correctness", collapse_correctness),
        ("6 reversibility", reversibility),
        ("7 oracle equivalence", oracle_equivalence),
        ("8 sensitivity", sensitivity),
        ("9 cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (name, criterion) in criteria {
        match criterion() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
