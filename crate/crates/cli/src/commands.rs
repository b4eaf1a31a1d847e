//! Subcommand implementations.

use std::io::Write;

use num_complex::Complex64;
use pulsekick_core::{
    classify_strength, collapse_strengths, collapsed_phase, convergence_study, delta_propagate, figure1_data,
    integrate_exact, reverse_strength, transition_probability, CollapseTarget, Coupling, IntegrationOptions, PulseSpec,
    SuperpositionState, SystemParams, DEFAULT_CLASS_TOLERANCE,
};

use crate::config::{RunConfig, Subcommand, SweepParam};
use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::verify;

/// Rendered result of a subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: String,
    /// Final line for standard output, written after the body.
    pub summary: Option<String>,
}

fn options(cfg: &RunConfig) -> IntegrationOptions {
    IntegrationOptions {
        rel_tol: cfg.rel_tol,
        abs_tol: cfg.abs_tol,
        window: cfg.window,
        ..Default::default()
    }
}

fn propagate(cfg: &RunConfig) -> Result<Table, CliError> {
    let out = delta_propagate(&cfg.state, &cfg.k)?;
    let p2 = transition_probability(&cfg.state, &cfg.k)?;
    let class = classify_strength(&cfg.k, DEFAULT_CLASS_TOLERANCE)?;
    let mut t = Table::new(&["c1_re", "c1_im", "c2_re", "c2_im", "p1", "p2", "class"]);
    t.push(vec![
        out.a1().re.into(),
        out.a1().im.into(),
        out.a2().re.into(),
        out.a2().im.into(),
        out.a1().norm_sqr().into(),
        p2.into(),
        class.variant.as_str().into(),
    ]);
    Ok(t)
}

fn sweep(cfg: &RunConfig) -> Result<Table, CliError> {
    let SweepParam::Kmod = cfg.sweep_param;
    let phase = cfg.k.phase();
    let mut t = Table::new(&["kmod", "p2"]);
    for i in 0..=cfg.sweep_steps {
        let kmod = if i == cfg.sweep_steps {
            cfg.sweep_to
        } else {
            cfg.sweep_from + (cfg.sweep_to - cfg.sweep_from) * i as f64 / cfg.sweep_steps as f64
        };
        let k = Coupling::from_polar(kmod, phase)?;
        t.push(vec![kmod.into(), transition_probability(&cfg.state, &k)?.into()]);
    }
    Ok(t)
}

fn simulate(cfg: &RunConfig) -> Result<Table, CliError> {
    let traj = integrate_exact(
        &cfg.state,
        &cfg.k,
        &SystemParams::new(cfg.omega0)?,
        &PulseSpec::gaussian(cfg.n[0])?,
        &options(cfg),
    )?;
    let mut t = Table::new(&["t", "a1_re", "a1_im", "a2_re", "a2_im", "norm"]);
    for s in traj.thinned(cfg.max_rows) {
        t.push(vec![
            s.t.into(),
            s.a1.re.into(),
            s.a1.im.into(),
            s.a2.re.into(),
            s.a2.im.into(),
            s.norm_sqr().into(),
        ]);
    }
    Ok(t)
}

fn converge(cfg: &RunConfig) -> Result<Table, CliError> {
    let rows = convergence_study(
        &cfg.state,
        &cfg.k,
        &SystemParams::new(cfg.omega0)?,
        &cfg.n,
        &options(cfg),
    )?;
    let mut t = Table::new(&["n", "err_state", "err_prob"]);
    let mut failures = Vec::new();
    for row in rows {
        match row {
            Ok(r) => t.push(vec![r.n.into(), r.err_state.into(), r.err_prob.into()]),
            Err(f) => failures.push(format!("n = {}: {}", f.n, f.error)),
        }
    }
    if !failures.is_empty() {
        return Err(CliError::Runtime(format!(
            "integration failed for {}",
            failures.join("; ")
        )));
    }
    Ok(t)
}

fn collapse(cfg: &RunConfig) -> Result<Table, CliError> {
    let sols = collapse_strengths(&cfg.state, cfg.branches, CollapseTarget::Eigenstate1)?;
    let mut t = Table::new(&["branch", "arccos_sign", "sign", "R", "k_re", "k_im", "residual"]);
    for sol in &sols {
        if cfg.state.a1().norm() > 0.0 {
            let phase = collapsed_phase(&cfg.state, sol)?;
            let out = delta_propagate(&cfg.state, &sol.coupling())?;
            if (phase - out.a1()).norm() > 1e-10 {
                return Err(CliError::Runtime(format!(
                    "collapsed amplitude mismatch for k = {}",
                    sol.k
                )));
            }
        }
        t.push(vec![
            Cell::Int(sol.branch.branch_index as i64),
            sol.branch.arccos_sign.symbol().into(),
            sol.branch.sign.symbol().into(),
            sol.branch.r.into(),
            sol.k.re.into(),
            sol.k.im.into(),
            sol.residual.into(),
        ]);
    }
    Ok(t)
}

fn reverse(cfg: &RunConfig) -> Result<Table, CliError> {
    let sols = collapse_strengths(&cfg.state, cfg.branches, CollapseTarget::Eigenstate1)?;
    let mut t = Table::new(&[
        "branch",
        "arccos_sign",
        "sign",
        "k_re",
        "k_im",
        "collapsed_re",
        "collapsed_im",
        "a1_re",
        "a1_im",
        "a2_re",
        "a2_im",
        "roundtrip_err",
    ]);
    for sol in &sols {
        let phase = match collapsed_phase(&cfg.state, sol) {
            Ok(p) => p,
            Err(pulsekick_core::Error::DegenerateState) => delta_propagate(&cfg.state, &sol.coupling())?.a1(),
            Err(e) => return Err(e.into()),
        };
        let collapsed = SuperpositionState::new(phase, Complex64::new(0.0, 0.0))?;
        let back = delta_propagate(&collapsed, &Coupling::new(reverse_strength(sol))?)?;
        t.push(vec![
            Cell::Int(sol.branch.branch_index as i64),
            sol.branch.arccos_sign.symbol().into(),
            sol.branch.sign.symbol().into(),
            sol.k.re.into(),
            sol.k.im.into(),
            phase.re.into(),
            phase.im.into(),
            back.a1().re.into(),
            back.a1().im.into(),
            back.a2().re.into(),
            back.a2().im.into(),
            back.max_abs_diff(&cfg.state).into(),
        ]);
    }
    Ok(t)
}

fn figure1(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut t = Table::new(&["alpha1_mod", "kmod_plus", "kmod_minus"]);
    for row in figure1_data(cfg.points)? {
        t.push(vec![row.alpha1_mod.into(), row.kmod_plus.into(), row.kmod_minus.into()]);
    }
    Ok(t)
}

/// Runs a subcommand and renders its output.
pub fn execute(cfg: &RunConfig) -> Result<Report, CliError> {
    let table = match cfg.subcommand {
        Subcommand::Propagate => propagate(cfg)?,
        Subcommand::Sweep => sweep(cfg)?,
        Subcommand::Simulate => simulate(cfg)?,
        Subcommand::Converge => converge(cfg)?,
        Subcommand::Collapse => collapse(cfg)?,
        Subcommand::Reverse => reverse(cfg)?,
        Subcommand::Figure1 => figure1(cfg)?,
        Subcommand::Verify => {
            let outcome = verify::run_suite(cfg.seed, cfg.draws, &options(cfg));
            let body = outcome.table().render(cfg.format);
            let failed = outcome.failed();
            if failed > 0 {
                return Err(CliError::Runtime(format!(
                    "{failed} of {} checks failed\n{}",
                    outcome.checks.len(),
                    outcome.table().to_csv()
                )));
            }
            return Ok(Report {
                body,
                summary: Some(format!("all checks passed: {}", outcome.checks.len())),
            });
        }
    };
    Ok(Report {
        body: table.render(cfg.format),
        summary: None,
    })
}

/// Runs a subcommand, writing output to the configured path or standard
/// output and diagnostics to standard error. Returns the process exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    for w in &cfg.warnings {
        eprintln!("{w}");
    }
    let result = execute(cfg).and_then(|report| {
        match &cfg.output_path {
            Some(path) => std::fs::write(path, &report.body)?,
            None => std::io::stdout().write_all(report.body.as_bytes())?,
        }
        if let Some(summary) = &report.summary {
            println!("{summary}");
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
