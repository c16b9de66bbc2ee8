//! Command-line surface: `spectrum`, `state`, `survival`, `ratio`, `validate`.
//!
//! Every flag can also come from a JSON file passed with `--config`; flags win.
//! All inputs are validated before any computation, and output is assembled in
//! full before it is written, so a failing run never leaves partial output.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::dynamics::{
    decomposition_series, resonance_ratio, survival_series, ContourConfig, Method,
};
use crate::error::Error;
use crate::lattice::OracleConfig;
use crate::numeric::symmetric_grid;
use crate::siegert::{
    boundary_current, boundary_current_left, build_siegert_state, conservation_residual,
    partial_norm, quadratic_form_partial, NormConvention,
};
use crate::spectrum::{
    solve_point_spectrum, sweep_spectrum, ModelParams, PointState, StateClass, SweepRow,
};
use crate::validation::{validate, ValidationConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ABSENT_STATE: i32 = 3;
pub const EXIT_NON_CONVERGENCE: i32 = 4;
pub const EXIT_HORIZON: i32 = 5;

pub const SPECTRUM_HEADER: &str = "v0,t0,class,re_k,im_k,re_e,im_e,transition_flag";
pub const SURVIVAL_HEADER: &str =
    "t,re_a,im_a,abs2_a,abs2_chi_res,abs2_chi_ar,abs2_chi_other,discrepancy";
pub const STATE_HEADER: &str = "x,re_psi,im_psi";
pub const RATIO_HEADER: &str = "t,ratio";

#[derive(Debug, Parser)]
#[command(
    name = "impurity-chain",
    version,
    about = "Point spectrum and resonance dynamics of an impurity on an open chain"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON file with default values for any flag (snake_case keys).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Point states for one V0 or a sweep of V0.
    Spectrum(SpectrumArgs),
    /// Eigenfunction samples on [-L, L] and the norm/current summary.
    State(StateArgs),
    /// Survival amplitude and its point-state components.
    Survival(SurvivalArgs),
    /// Ratio of resonant to anti-resonant weight.
    Ratio(RatioArgs),
    /// Run the invariant suite and print a JSON report.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub t0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v0: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ContourArgs {
    /// Initial number of quadrature nodes (power of two, at least 64).
    #[arg(long)]
    pub n_points: Option<usize>,
    /// Relative tolerance between successive node doublings.
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_doublings: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Sites on each side of the impurity in the reference chain.
    #[arg(long)]
    pub oracle_l: Option<usize>,
    /// Fraction of the reflection time usable, in (0, 0.95].
    #[arg(long)]
    pub horizon_safety: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Points on the symmetric grid [-tmax, tmax].
    #[arg(long)]
    pub nt: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// `start:end:n`, replacing --v0.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "v0")]
    pub v0_sweep: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Res,
    Ar,
    Bound,
    Abound,
}

impl Which {
    fn class(self) -> StateClass {
        match self {
            Which::Res => StateClass::Resonant,
            Which::Ar => StateClass::AntiResonant,
            Which::Bound => StateClass::Bound,
            Which::Abound => StateClass::AntiBound,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    Unnormalized,
    Biorthogonal,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, value_enum)]
    pub which: Option<Which>,
    /// Window half length.
    #[arg(long = "L")]
    pub half_length: Option<usize>,
    #[arg(long, value_enum)]
    pub norm: Option<Norm>,
    /// Which state of the class, in spectrum order (two anti-bound states can coexist).
    #[arg(long)]
    pub index: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Decomp,
    Lattice,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct SurvivalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[command(flatten)]
    pub contour: ContourArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RatioArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub contour: ContourArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long = "L")]
    pub half_length: Option<usize>,
    #[command(flatten)]
    pub contour: ContourArgs,
    #[command(flatten)]
    pub oracle: OracleArgs,
}

/// Contents of a `--config` file. Unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub t0: Option<f64>,
    pub v0: Option<f64>,
    pub v0_sweep: Option<String>,
    pub which: Option<Which>,
    #[serde(rename = "L")]
    pub half_length: Option<usize>,
    pub norm: Option<Norm>,
    pub index: Option<usize>,
    pub tmax: Option<f64>,
    pub nt: Option<usize>,
    pub method: Option<MethodArg>,
    pub n_points: Option<usize>,
    pub rel_tol: Option<f64>,
    pub max_doublings: Option<u32>,
    pub oracle_l: Option<usize>,
    pub horizon_safety: Option<f64>,
}

/// A failed run: exit code plus message for standard error.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidParams { .. } | Error::Config(_) => EXIT_USAGE,
        Error::Class { .. } | Error::StateAbsent { .. } => EXIT_ABSENT_STATE,
        Error::NonConvergence { .. } => EXIT_NON_CONVERGENCE,
        Error::HorizonExceeded { .. } => EXIT_HORIZON,
        _ => EXIT_FAILURE,
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Self {
            code: exit_code(&err),
            message: err.to_string(),
        }
    }
}

/// Fixed scientific notation with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn required<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T, Failure> {
    flag.or(file)
        .ok_or_else(|| Failure::usage(format!("missing required value --{name}")))
}

fn model(args: &ModelArgs, file: &FileConfig) -> Result<ModelParams, Failure> {
    let t0 = required(args.t0, file.t0, "t0")?;
    let v0 = required(args.v0, file.v0, "v0")?;
    Ok(ModelParams::new(t0, v0)?)
}

fn contour(args: &ContourArgs, file: &FileConfig) -> Result<ContourConfig, Failure> {
    let d = ContourConfig::default();
    let cfg = ContourConfig {
        n_points: args.n_points.or(file.n_points).unwrap_or(d.n_points),
        rel_tol: args.rel_tol.or(file.rel_tol).unwrap_or(d.rel_tol),
        max_doublings: args
            .max_doublings
            .or(file.max_doublings)
            .unwrap_or(d.max_doublings),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn oracle(args: &OracleArgs, file: &FileConfig) -> Result<OracleConfig, Failure> {
    let d = OracleConfig::default();
    let cfg = OracleConfig {
        half_length: args.oracle_l.or(file.oracle_l).unwrap_or(d.half_length),
        horizon_safety: args
            .horizon_safety
            .or(file.horizon_safety)
            .unwrap_or(d.horizon_safety),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn grid(
    args: &GridArgs,
    file: &FileConfig,
    default_tmax: f64,
    default_nt: usize,
) -> Result<Vec<f64>, Failure> {
    let tmax = args.tmax.or(file.tmax).unwrap_or(default_tmax);
    let nt = args.nt.or(file.nt).unwrap_or(default_nt);
    if nt < 2 {
        return Err(Failure::usage(format!("--nt must be at least 2, got {nt}")));
    }
    if !(tmax > 0.0 && tmax.is_finite()) {
        return Err(Failure::usage(format!(
            "--tmax must be positive, got {tmax}"
        )));
    }
    Ok(symmetric_grid(tmax, nt))
}

fn parse_sweep(text: &str) -> Result<(f64, f64, usize), Failure> {
    let bad = || Failure::usage(format!("--v0-sweep expects start:end:n, got '{text}'"));
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let end: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n < 2 {
        return Err(Failure::usage(format!("--v0-sweep needs n >= 2, got {n}")));
    }
    if !(start.is_finite() && end.is_finite()) || start == end {
        return Err(bad());
    }
    Ok((start.min(end), start.max(end), n))
}

/// Rendered output of one command.
struct Rendered {
    body: String,
    /// Set when the command ran but its verdict is a failure (`validate`).
    verdict: Option<Failure>,
}

impl From<String> for Rendered {
    fn from(body: String) -> Self {
        Self {
            body,
            verdict: None,
        }
    }
}

fn json_body(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn spectrum_row(v0: f64, t0: f64, s: &PointState, transition: bool) -> (String, Value) {
    let csv = format!(
        "{},{},{},{},{},{},{},{}",
        fmt_float(v0),
        fmt_float(t0),
        s.class,
        fmt_float(s.k.re),
        fmt_float(s.k.im),
        fmt_float(s.energy.re),
        fmt_float(s.energy.im),
        u8::from(transition)
    );
    let json = json!({
        "v0": v0, "t0": t0, "class": s.class.name(),
        "re_k": s.k.re, "im_k": s.k.im, "re_e": s.energy.re, "im_e": s.energy.im,
        "transition_flag": transition,
    });
    (csv, json)
}

fn cmd_spectrum(
    args: &SpectrumArgs,
    file: &FileConfig,
    format: Format,
) -> Result<Rendered, Failure> {
    let t0 = required(args.model.t0, file.t0, "t0")?;
    let sweep = match (&args.v0_sweep, args.model.v0) {
        (Some(s), _) => Some(parse_sweep(s)?),
        (None, Some(_)) => None,
        (None, None) => file.v0_sweep.as_deref().map(parse_sweep).transpose()?,
    };
    let rows = match sweep {
        Some((start, end, n)) => sweep_spectrum(t0, start, end, n)?,
        None => {
            let v0 = required(args.model.v0, file.v0, "v0")?;
            if !(t0.is_finite() && v0.is_finite()) {
                return Err(Error::InvalidParams { t0, v0 }.into());
            }
            vec![SweepRow {
                v0,
                spectrum: solve_point_spectrum(ModelParams { t0, v0 }),
                transition: false,
            }]
        }
    };

    let mut csv = format!("{SPECTRUM_HEADER}\n");
    let mut json_rows = Vec::new();
    let mut notes = Vec::new();
    for row in &rows {
        match &row.spectrum {
            Ok(spec) => {
                for s in &spec.states {
                    let (line, value) = spectrum_row(row.v0, t0, s, row.transition);
                    csv.push_str(&line);
                    csv.push('\n');
                    json_rows.push(value);
                }
            }
            Err(err) => {
                let note = format!("v0={}: {err}", fmt_float(row.v0));
                let _ = writeln!(csv, "# {note}");
                notes.push(note);
            }
        }
    }
    Ok(match format {
        Format::Csv => csv.into(),
        Format::Json => json_body(&json!({ "rows": json_rows, "notes": notes })).into(),
    })
}

fn cmd_state(args: &StateArgs, file: &FileConfig, format: Format) -> Result<Rendered, Failure> {
    let params = model(&args.model, file)?;
    let which = required(args.which, file.which, "which")?;
    let half_length = required(args.half_length, file.half_length, "L")?;
    let norm = args.norm.or(file.norm).unwrap_or(Norm::Unnormalized);
    let index = args.index.or(file.index).unwrap_or(0);

    let spec = solve_point_spectrum(params)?;
    let class = which.class();
    let ps = spec.of_class(class).nth(index).ok_or(Error::StateAbsent {
        wanted: class,
        index,
        t0: params.t0,
        v0: params.v0,
    })?;
    let convention = match norm {
        Norm::Unnormalized => NormConvention::Unnormalized,
        Norm::Biorthogonal => NormConvention::Biorthogonal,
    };
    let state = build_siegert_state(&params, ps, convention)?;
    let pn = partial_norm(&state, half_length);
    let j_right = boundary_current(&state, half_length);
    let j_left = boundary_current_left(&state, half_length);
    let residual = match conservation_residual(&state, half_length) {
        Ok(r) => Some(r),
        Err(Error::Class { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let q = quadratic_form_partial(&params, &state.sample(half_length));
    let summary = json!({
        "class": state.class.name(),
        "k": complex_json(state.k),
        "energy": complex_json(state.energy),
        "partial_norm": pn,
        "j_left": j_left,
        "j_right": j_right,
        "conservation_residual": residual,
        "quadratic_form": complex_json(q),
    });

    let l = half_length as i64;
    Ok(match format {
        Format::Csv => {
            let mut out = format!("{STATE_HEADER}\n");
            for x in -l..=l {
                let psi = state.amplitude(x);
                let _ = writeln!(out, "{x},{},{}", fmt_float(psi.re), fmt_float(psi.im));
            }
            let _ = writeln!(
                out,
                "# {}",
                serde_json::to_string(&summary).expect("JSON values serialize")
            );
            out.into()
        }
        Format::Json => {
            let samples: Vec<Value> = (-l..=l)
                .map(|x| {
                    let psi = state.amplitude(x);
                    json!({ "x": x, "re_psi": psi.re, "im_psi": psi.im })
                })
                .collect();
            json_body(&json!({ "samples": samples, "summary": summary })).into()
        }
    })
}

fn cmd_survival(
    args: &SurvivalArgs,
    file: &FileConfig,
    format: Format,
) -> Result<Rendered, Failure> {
    let params = model(&args.model, file)?;
    let times = grid(&args.grid, file, 40.0, 801)?;
    let method = match args.method.or(file.method).unwrap_or(MethodArg::Decomp) {
        MethodArg::Decomp => Method::Decomposition,
        MethodArg::Lattice => Method::LatticeOracle,
        MethodArg::Both => Method::Both,
    };
    let ccfg = contour(&args.contour, file)?;
    let ocfg = oracle(&args.oracle, file)?;

    let series = survival_series(&params, &times, method, &ccfg, &ocfg)?;
    let weights = |class| series.weights(class);
    let res = weights(StateClass::Resonant);
    let ar = weights(StateClass::AntiResonant);
    let has_components = !series.components.is_empty();
    let other: Option<Vec<f64>> = has_components.then(|| {
        (0..times.len())
            .map(|i| {
                series
                    .components
                    .iter()
                    .filter(|c| {
                        !matches!(
                            c.state.class,
                            StateClass::Resonant | StateClass::AntiResonant
                        )
                    })
                    .map(|c| c.values[i].norm_sqr())
                    .sum()
            })
            .collect()
    });
    let discrepancy = match method {
        Method::Both => series.discrepancy(),
        _ => None,
    };
    let pick = |col: &Option<Vec<f64>>, i: usize| col.as_ref().map(|c| c[i]);

    Ok(match format {
        Format::Csv => {
            let mut out = format!("{SURVIVAL_HEADER}\n");
            for (i, &t) in times.iter().enumerate() {
                let a = series.total[i];
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    fmt_float(t),
                    fmt_float(a.re),
                    fmt_float(a.im),
                    fmt_float(a.norm_sqr()),
                    fmt_opt(pick(&res, i)),
                    fmt_opt(pick(&ar, i)),
                    fmt_opt(pick(&other, i)),
                    fmt_opt(pick(&discrepancy, i)),
                );
            }
            out.into()
        }
        Format::Json => {
            let rows: Vec<Value> = times
                .iter()
                .enumerate()
                .map(|(i, &t)| {
                    let a = series.total[i];
                    json!({
                        "t": t, "re_a": a.re, "im_a": a.im, "abs2_a": a.norm_sqr(),
                        "abs2_chi_res": pick(&res, i), "abs2_chi_ar": pick(&ar, i),
                        "abs2_chi_other": pick(&other, i), "discrepancy": pick(&discrepancy, i),
                    })
                })
                .collect();
            json_body(&json!({ "rows": rows, "max_discrepancy": series.max_discrepancy })).into()
        }
    })
}

fn cmd_ratio(args: &RatioArgs, file: &FileConfig, format: Format) -> Result<Rendered, Failure> {
    let params = model(&args.model, file)?;
    let times = grid(&args.grid, file, 40.0, 401)?;
    let ccfg = contour(&args.contour, file)?;

    let spec = solve_point_spectrum(params)?;
    if spec.resonance_pair().is_none() {
        return Err(Error::StateAbsent {
            wanted: StateClass::Resonant,
            index: 0,
            t0: params.t0,
            v0: params.v0,
        }
        .into());
    }
    let series = decomposition_series(&params, &times, &ccfg)?;
    let res = series
        .component(StateClass::Resonant)
        .expect("resonant component");
    let ar = series
        .component(StateClass::AntiResonant)
        .expect("anti-resonant component");
    let ratios: Vec<Option<f64>> = times
        .iter()
        .enumerate()
        .map(
            |(i, &t)| match resonance_ratio(res.values[i], ar.values[i], t) {
                Ok(r) => Ok(Some(r)),
                Err(Error::Underflow { .. }) => Ok(None),
                Err(e) => Err(e),
            },
        )
        .collect::<Result<_, Error>>()?;

    Ok(match format {
        Format::Csv => {
            let mut out = format!("{RATIO_HEADER}\n");
            for (&t, r) in times.iter().zip(&ratios) {
                if r.is_none() {
                    let _ = writeln!(
                        out,
                        "# anti-resonant weight underflows at t={}",
                        fmt_float(t)
                    );
                }
                let _ = writeln!(out, "{},{}", fmt_float(t), fmt_opt(*r));
            }
            out.into()
        }
        Format::Json => {
            let rows: Vec<Value> = times
                .iter()
                .zip(&ratios)
                .map(|(&t, r)| json!({ "t": t, "ratio": r }))
                .collect();
            json_body(&json!({ "rows": rows })).into()
        }
    })
}

fn cmd_validate(args: &ValidateArgs, file: &FileConfig) -> Result<Rendered, Failure> {
    let params = model(&args.model, file)?;
    let d = ValidationConfig::default();
    let cfg = ValidationConfig {
        contour: contour(&args.contour, file)?,
        oracle: oracle(&args.oracle, file)?,
        half_length: args
            .half_length
            .or(file.half_length)
            .unwrap_or(d.half_length),
        tmax: args.grid.tmax.or(file.tmax).unwrap_or(d.tmax),
        nt: args.grid.nt.or(file.nt).unwrap_or(d.nt),
    };
    cfg.validate().map_err(|e| match e {
        Error::HorizonExceeded { .. } => Failure::from(e),
        other => Failure::usage(other.to_string()),
    })?;
    let report = validate(&params, &cfg)?;
    let failed: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    let verdict = (!failed.is_empty()).then(|| Failure {
        code: EXIT_FAILURE,
        message: format!("failed checks: {}", failed.join(", ")),
    });
    let body = json_body(&serde_json::to_value(&report).expect("report serializes"));
    Ok(Rendered { body, verdict })
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig, Failure> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("invalid config {}: {e}", path.display())))
}

fn execute(cli: &Cli) -> Result<(Rendered, Option<PathBuf>), Failure> {
    let file = load_config(&cli.config)?;
    let format = cli.format.or(file.format).unwrap_or(Format::Csv);
    let out = cli.out.clone().or_else(|| file.out.clone());
    let rendered = match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a, &file, format)?,
        Command::State(a) => cmd_state(a, &file, format)?,
        Command::Survival(a) => cmd_survival(a, &file, format)?,
        Command::Ratio(a) => cmd_ratio(a, &file, format)?,
        Command::Validate(a) => cmd_validate(a, &file)?,
    };
    Ok((rendered, out))
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let (rendered, out) = match execute(&cli) {
        Ok(v) => v,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            return f.code;
        }
    };
    let written = match &out {
        Some(path) => std::fs::write(path, &rendered.body)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout
            .write_all(rendered.body.as_bytes())
            .map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_FAILURE;
    }
    match rendered.verdict {
        Some(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
        None => EXIT_OK,
    }
}
