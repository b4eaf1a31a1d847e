//! Command-line and config-file parsing.
//!
//! Values are layered: built-in defaults, then the config file (`--config`
//! or `PULSEKICK_CONFIG`), then flags.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand as ClapSubcommand};
use num_complex::Complex64;
use pulsekick_core::{Coupling, SuperpositionState};

use crate::error::CliError;

pub const CONFIG_ENV: &str = "PULSEKICK_CONFIG";

/// Deviation of the input norm from 1 above which a warning is emitted.
const NORM_WARNING_THRESHOLD: f64 = 1e-6;

const HELP_COLUMNS: &str = "\
CSV columns by subcommand:
  propagate  c1_re,c1_im,c2_re,c2_im,p1,p2,class
  sweep      kmod,p2
  simulate   t,a1_re,a1_im,a2_re,a2_im,norm
  converge   n,err_state,err_prob
  collapse   branch,arccos_sign,sign,R,k_re,k_im,residual
  reverse    branch,arccos_sign,sign,k_re,k_im,collapsed_re,collapsed_im,a1_re,a1_im,a2_re,a2_im,roundtrip_err
  figure1    alpha1_mod,kmod_plus,kmod_minus
  verify     check,samples,max_error,tolerance,passed
JSON output carries the same fields as an array of objects.
Complex values are written as \"re,im\". Config files hold `key = value`
lines (keys as the long flag names) with `#` comments.

Exit codes: 0 success, 1 numeric or runtime failure, 2 usage error.";

#[derive(Debug, Parser)]
#[command(
    name = "pulsekick",
    version,
    about = "Two-level systems under delta-function pulses",
    after_help = HELP_COLUMNS
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, ClapSubcommand)]
enum Command {
    /// Apply the delta-pulse propagator to a state.
    Propagate {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        coupling: CouplingArgs,
    },
    /// Transition probability over a grid of |k| at the phase of --k.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        coupling: CouplingArgs,
        /// Swept parameter (only `kmod`).
        #[arg(long)]
        param: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        from: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        to: Option<String>,
        /// Number of grid intervals; steps + 1 rows are written.
        #[arg(long)]
        steps: Option<String>,
    },
    /// Integrate the amplitude equations for a Gaussian pulse and dump the trajectory.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[command(flatten)]
        sim: SimArgs,
        /// Maximum number of trajectory rows (uniform thinning).
        #[arg(long)]
        max_rows: Option<String>,
    },
    /// Error of finite-width integrations against the delta-pulse limit.
    Converge {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Interaction strengths that collapse the state onto the first eigenstate.
    Collapse {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        state: StateArgs,
        /// Highest 2*pi offset index.
        #[arg(long)]
        branches: Option<String>,
    },
    /// Collapse followed by the reversing pulse, for every solution.
    Reverse {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        state: StateArgs,
        /// Highest 2*pi offset index.
        #[arg(long)]
        branches: Option<String>,
    },
    /// Collapse moduli arccos(+|a1|) and arccos(-|a1|) on a grid of |a1|.
    Figure1 {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of grid points on [0, 1].
        #[arg(long)]
        points: Option<String>,
    },
    /// Cross-check the propagator against the independent solution paths.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        seed: Option<String>,
        /// Random draws per randomised check.
        #[arg(long)]
        draws: Option<String>,
        /// Relative tolerance of the integrator
        #[arg(long)]
        rel_tol: Option<String>,
        /// Absolute tolerance of the integrator
        #[arg(long)]
        abs_tol: Option<String>,
    },
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Debug, Args)]
struct StateArgs {
    /// First amplitude as "re,im".
    #[arg(long, allow_hyphen_values = true)]
    a1: Option<String>,
    /// Second amplitude as "re,im".
    #[arg(long, allow_hyphen_values = true)]
    a2: Option<String>,
}

#[derive(Debug, Args)]
struct CouplingArgs {
    /// Interaction strength k = beta/hbar as "re,im".
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
}

#[derive(Debug, Args)]
struct SimArgs {
    /// Energy gap (E2 - E1)/hbar.
    #[arg(long)]
    omega0: Option<String>,
    /// Pulse parameter n, or a comma-separated ascending list for converge.
    #[arg(long)]
    n: Option<String>,
    /// Relative tolerance of the integrator
    #[arg(long)]
    rel_tol: Option<String>,
    /// Absolute tolerance of the integrator
    #[arg(long)]
    abs_tol: Option<String>,
    /// Integration window half-width in units of 1/n.
    #[arg(long)]
    window: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Propagate,
    Sweep,
    Simulate,
    Converge,
    Collapse,
    Reverse,
    Figure1,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Kmod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub state: SuperpositionState,
    pub k: Coupling,
    pub omega0: f64,
    pub n: Vec<f64>,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub window: f64,
    pub max_rows: usize,
    pub sweep_param: SweepParam,
    pub sweep_from: f64,
    pub sweep_to: f64,
    pub sweep_steps: usize,
    pub branches: u32,
    pub points: usize,
    pub seed: u64,
    pub draws: usize,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    /// Non-fatal notices for standard error.
    pub warnings: Vec<String>,
}

const KEYS: &[&str] = &[
    "a1", "a2", "k", "omega0", "n", "rel_tol", "abs_tol", "window", "max_rows", "param", "from", "to", "steps",
    "branches", "points", "seed", "draws", "output", "format",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Source {
    Default,
    File,
    Flag,
}

struct Layered {
    values: BTreeMap<&'static str, (String, Source)>,
    file: Option<PathBuf>,
}

impl Layered {
    fn new() -> Self {
        let defaults: &[(&'static str, &str)] = &[
            ("a1", "1,0"),
            ("a2", "0,0"),
            ("k", "1,0"),
            ("omega0", "0"),
            ("rel_tol", "1e-10"),
            ("abs_tol", "1e-10"),
            ("window", "8"),
            ("max_rows", "2000"),
            ("param", "kmod"),
            ("from", "0"),
            ("steps", "100"),
            ("branches", "2"),
            ("points", "101"),
            ("seed", "1"),
            ("draws", "1000"),
            ("format", "csv"),
        ];
        let mut values = BTreeMap::new();
        for &(key, value) in defaults {
            values.insert(key, (value.to_string(), Source::Default));
        }
        values.insert("to", (format!("{TAU}"), Source::Default));
        Self { values, file: None }
    }

    fn load_file(&mut self, path: PathBuf) -> Result<(), CliError> {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::ConfigParse(format!("cannot read config file {}: {e}", path.display())))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::ConfigParse(format!(
                    "{}:{}: expected `key = value`",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = key.trim().replace('-', "_");
            let Some(known) = KEYS.iter().copied().find(|k| *k == key) else {
                return Err(CliError::ConfigParse(format!(
                    "{}:{}: unknown key `{key}`",
                    path.display(),
                    lineno + 1
                )));
            };
            self.values.insert(known, (value.trim().to_string(), Source::File));
        }
        self.file = Some(path);
        Ok(())
    }

    fn flag(&mut self, key: &'static str, value: Option<String>) {
        if let Some(v) = value {
            self.values.insert(key, (v, Source::Flag));
        }
    }

    fn error(&self, key: &str, source: Source, msg: String) -> CliError {
        match source {
            Source::Flag => CliError::Usage(format!("invalid value for --{}: {msg}", key.replace('_', "-"))),
            Source::File => CliError::ConfigParse(format!(
                "{}: invalid value for `{key}`: {msg}",
                self.file.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
            )),
            Source::Default => CliError::Usage(format!("missing value for --{}", key.replace('_', "-"))),
        }
    }

    fn get<T>(&self, key: &'static str, parse: impl Fn(&str) -> Result<T, String>) -> Result<T, CliError> {
        match self.values.get(key) {
            Some((raw, source)) => parse(raw).map_err(|msg| self.error(key, *source, msg)),
            None => Err(self.error(key, Source::Default, String::new())),
        }
    }

    fn get_opt<T>(&self, key: &'static str, parse: impl Fn(&str) -> Result<T, String>) -> Result<Option<T>, CliError> {
        if self.values.contains_key(key) {
            self.get(key, parse).map(Some)
        } else {
            Ok(None)
        }
    }
}

fn parse_real(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !x.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(x)
}

/// Parses a complex number written as `re,im` (or a bare real).
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse_real(re)?, parse_real(im)?)),
        None => Ok(Complex64::new(parse_real(s)?, 0.0)),
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    let list = s.split(',').map(parse_real).collect::<Result<Vec<_>, _>>()?;
    if list.is_empty() {
        return Err("empty list".into());
    }
    Ok(list)
}

fn parse_count<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a nonnegative integer"))
}

fn parse_format(s: &str) -> Result<Format, String> {
    match s.trim() {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        other => Err(format!("unknown format `{other}` (expected csv or json)")),
    }
}

fn parse_param(s: &str) -> Result<SweepParam, String> {
    match s.trim() {
        "kmod" => Ok(SweepParam::Kmod),
        other => Err(format!("unknown sweep parameter `{other}` (expected kmod)")),
    }
}

/// Parses the arguments that follow the program name.
pub fn parse_args<I, S>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args = std::iter::once("pulsekick".to_string()).chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp
        | clap::error::ErrorKind::DisplayVersion
        | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => CliError::Help(e.to_string()),
        _ => {
            let msg = e.to_string();
            CliError::Usage(msg.strip_prefix("error: ").unwrap_or(&msg).trim_end().to_string())
        }
    })?;

    let mut layered = Layered::new();
    let common = match &cli.command {
        Command::Propagate { common, .. }
        | Command::Sweep { common, .. }
        | Command::Simulate { common, .. }
        | Command::Converge { common, .. }
        | Command::Collapse { common, .. }
        | Command::Reverse { common, .. }
        | Command::Figure1 { common, .. }
        | Command::Verify { common, .. } => common,
    };
    let config_path = common.config.clone().or_else(|| {
        std::env::var_os(CONFIG_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    });
    if let Some(path) = config_path {
        layered.load_file(path)?;
    }
    layered.flag("output", common.output.as_ref().map(|p| p.display().to_string()));
    layered.flag("format", common.format.clone());

    let subcommand = match cli.command {
        Command::Propagate { state, coupling, .. } => {
            apply_state(&mut layered, state);
            layered.flag("k", coupling.k);
            Subcommand::Propagate
        }
        Command::Sweep {
            state,
            coupling,
            param,
            from,
            to,
            steps,
            ..
        } => {
            apply_state(&mut layered, state);
            layered.flag("k", coupling.k);
            layered.flag("param", param);
            layered.flag("from", from);
            layered.flag("to", to);
            layered.flag("steps", steps);
            Subcommand::Sweep
        }
        Command::Simulate {
            state,
            coupling,
            sim,
            max_rows,
            ..
        } => {
            apply_state(&mut layered, state);
            layered.flag("k", coupling.k);
            apply_sim(&mut layered, sim);
            layered.flag("max_rows", max_rows);
            Subcommand::Simulate
        }
        Command::Converge {
            state, coupling, sim, ..
        } => {
            apply_state(&mut layered, state);
            layered.flag("k", coupling.k);
            apply_sim(&mut layered, sim);
            Subcommand::Converge
        }
        Command::Collapse { state, branches, .. } => {
            apply_state(&mut layered, state);
            layered.flag("branches", branches);
            Subcommand::Collapse
        }
        Command::Reverse { state, branches, .. } => {
            apply_state(&mut layered, state);
            layered.flag("branches", branches);
            Subcommand::Reverse
        }
        Command::Figure1 { points, .. } => {
            layered.flag("points", points);
            Subcommand::Figure1
        }
        Command::Verify {
            seed,
            draws,
            rel_tol,
            abs_tol,
            ..
        } => {
            layered.flag("seed", seed);
            layered.flag("draws", draws);
            layered.flag("rel_tol", rel_tol);
            layered.flag("abs_tol", abs_tol);
            Subcommand::Verify
        }
    };

    let default_n = if subcommand == Subcommand::Converge {
        "10,20,40,80,160"
    } else {
        "160"
    };
    layered
        .values
        .entry("n")
        .or_insert_with(|| (default_n.to_string(), Source::Default));

    let mut warnings = Vec::new();
    let a1 = layered.get("a1", parse_complex)?;
    let a2 = layered.get("a2", parse_complex)?;
    let (state, norm) = SuperpositionState::normalized(a1, a2)
        .map_err(|e| CliError::Usage(format!("invalid state (--a1, --a2): {e}")))?;
    if (norm - 1.0).abs() > NORM_WARNING_THRESHOLD {
        warnings.push(format!(
            "warning: state norm {norm} differs from 1; amplitudes normalized to ({}, {})",
            state.a1(),
            state.a2()
        ));
    }
    let k = layered.get("k", |s| {
        let v = parse_complex(s)?;
        Coupling::new(v).map_err(|e| e.to_string())
    })?;
    let omega0 = layered.get("omega0", |s| {
        let x = parse_real(s)?;
        if x < 0.0 {
            return Err("must be nonnegative".into());
        }
        Ok(x)
    })?;
    let n = layered.get("n", |s| {
        let list = parse_list(s)?;
        if list.iter().any(|&x| x <= 0.0) {
            return Err("n must be positive".into());
        }
        if list.windows(2).any(|w| w[0] >= w[1]) {
            return Err("n list must be strictly ascending".into());
        }
        Ok(list)
    })?;
    if subcommand == Subcommand::Simulate && n.len() != 1 {
        return Err(CliError::Usage(
            "invalid value for --n: simulate takes a single n".into(),
        ));
    }
    let tol = |s: &str| {
        let x = parse_real(s)?;
        if !(x > 0.0 && x <= 1e-4) {
            return Err("tolerance must lie in (0, 1e-4]".into());
        }
        Ok(x)
    };
    let rel_tol = layered.get("rel_tol", tol)?;
    let abs_tol = layered.get("abs_tol", tol)?;
    let window = layered.get("window", |s| {
        let x = parse_real(s)?;
        if x <= 0.0 {
            return Err("must be positive".into());
        }
        Ok(x)
    })?;
    let max_rows = layered.get("max_rows", |s| {
        let m: usize = parse_count(s)?;
        if m < 2 {
            return Err("must be at least 2".into());
        }
        Ok(m)
    })?;
    let sweep_param = layered.get("param", parse_param)?;
    let sweep_from = layered.get("from", parse_real)?;
    let sweep_to = layered.get("to", parse_real)?;
    let sweep_steps = layered.get("steps", |s| {
        let m: usize = parse_count(s)?;
        if m == 0 {
            return Err("must be positive".into());
        }
        Ok(m)
    })?;
    if subcommand == Subcommand::Sweep && (sweep_from < 0.0 || sweep_to < sweep_from) {
        return Err(CliError::Usage(
            "invalid value for --from/--to: need 0 <= from <= to".into(),
        ));
    }
    let branches = layered.get("branches", parse_count::<u32>)?;
    let points = layered.get("points", |s| {
        let m: usize = parse_count(s)?;
        if m < 2 {
            return Err("must be at least 2".into());
        }
        Ok(m)
    })?;
    let seed = layered.get("seed", parse_count::<u64>)?;
    let draws = layered.get("draws", |s| {
        let m: usize = parse_count(s)?;
        if m == 0 {
            return Err("must be positive".into());
        }
        Ok(m)
    })?;
    let output_path = layered.get_opt("output", |s| Ok(PathBuf::from(s)))?;
    let format = layered.get("format", parse_format)?;

    Ok(RunConfig {
        subcommand,
        state,
        k,
        omega0,
        n,
        rel_tol,
        abs_tol,
        window,
        max_rows,
        sweep_param,
        sweep_from,
        sweep_to,
        sweep_steps,
        branches,
        points,
        seed,
        draws,
        output_path,
        format,
        warnings,
    })
}

fn apply_state(layered: &mut Layered, state: StateArgs) {
    layered.flag("a1", state.a1);
    layered.flag("a2", state.a2);
}

fn apply_sim(layered: &mut Layered, sim: SimArgs) {
    layered.flag("omega0", sim.omega0);
    layered.flag("n", sim.n);
    layered.flag("rel_tol", sim.rel_tol);
    layered.flag("abs_tol", sim.abs_tol);
    layered.flag("window", sim.window);
}
