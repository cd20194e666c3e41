//! Command-line surface: one subcommand per computation, CSV out.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gsw_core::asymptotics::{
    inner_half_width, lattice_remainder_with, remainder_case_a, remainder_case_b_with, LATTICE_J_MAX,
    SEVENTH_ORDER_J_MAX,
};
use gsw_core::inner::{case_a_root, case_b_beta, prefactor_case_a, prefactor_case_b, prefactor_lattice, PrefactorEstimate};
use gsw_core::singulant::{
    classify_regime, hierarchy_singulant_roots, lambda_crit, lattice_5kdv_singulants, lattice_kdv_singulants,
    solve_7kdv_singulant, Classification, Family, Regime, SingulantRoot,
};
use gsw_core::{Complex64, ModelSpec};

use crate::config::ConfigFile;
use crate::error::{GswError, Result};
use crate::output::{csv_string, ensure_dir, num, resolve_output_dir, write_csv, RunManifest, DEFAULT_OUTPUT_DIR};
use crate::solver::{run, Equation, SimulationConfig, Splitting};
use crate::tail::{compare_sweep, SweepTemplate, DEFAULT_SWEEP_EPS};

#[derive(Debug, Parser)]
#[command(name = "gsw", version, about = "Exponential asymptotics of generalized solitary waves")]
pub struct Cli {
    /// Directory for data files and manifests (default: $GSW_OUTPUT_DIR).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Singulant roots of a model.
    Singulant(SingulantArgs),
    /// Critical λ for even hierarchy orders.
    LambdaCrit(LambdaCritArgs),
    /// Late-order prefactor Λ with its convergence history.
    Prefactor(PrefactorArgs),
    /// Far-field oscillation amplitude over parameter grids.
    Amplitude(AmplitudeArgs),
    /// Remainder log-envelopes for a decaying and a non-decaying case.
    Envelope(EnvelopeArgs),
    /// Split-step run from the soliton initial condition.
    Simulate(SimulateArgs),
    /// Numerical versus predicted tail amplitude over an ε sweep.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    #[value(name = "7kdv")]
    Kdv7,
    #[value(name = "hierarchy")]
    Hierarchy,
    #[value(name = "lattice-kdv")]
    LatticeKdv,
    #[value(name = "lattice-5kdv")]
    Lattice5Kdv,
}

#[derive(Debug, Args)]
pub struct SingulantArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Lattice branches N = ±1 … ±n_max.
    #[arg(long, default_value_t = 3)]
    pub n_max: u32,
    /// Extra 4πiN shifts of the second lattice 5KdV family.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub offsets: Vec<i64>,
}

#[derive(Debug, Args)]
pub struct LambdaCritArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [2u32, 4, 6, 8, 10])]
    pub k: Vec<u32>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    A,
    B,
}

#[derive(Debug, Args)]
pub struct PrefactorArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Recurrence depth (600 for 7KdV, 200 for the lattice).
    #[arg(long)]
    pub jmax: Option<usize>,
    #[arg(long = "case", value_enum)]
    pub case: Option<CaseArg>,
}

#[derive(Debug, Args)]
pub struct AmplitudeArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// ε grid for 7KdV.
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<f64>,
    /// Grid spacing h for the lattice.
    #[arg(long, value_delimiter = ',')]
    pub h: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub c: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct EnvelopeArgs {
    /// Decaying case, λ > 1/4.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Non-decaying case, 0 < λ ≤ 1/4.
    #[arg(long, default_value_t = 0.125)]
    pub lambda_b: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    /// Samples cover |x − ct| ≤ half_width.
    #[arg(long, default_value_t = 5.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 401)]
    pub points: usize,
    /// Excluded inner half-width (default: three transition widths).
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EquationArg {
    Kdv,
    #[value(name = "7kdv")]
    Kdv7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SplittingArg {
    Lie,
    Strang,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub equation: Option<EquationArg>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub half_length: Option<f64>,
    #[arg(long)]
    pub n_points: Option<usize>,
    #[arg(long)]
    pub dealias: Option<bool>,
    #[arg(long, value_enum)]
    pub splitting: Option<SplittingArg>,
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub half_length: Option<f64>,
    #[arg(long)]
    pub n_points: Option<usize>,
    #[arg(long)]
    pub settle_factor: Option<f64>,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status, writing results to stdout and errors to stderr.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command and returns what it prints on success.
pub fn execute(cli: &Cli) -> Result<String> {
    let dir = cli.out_dir.as_deref();
    match &cli.command {
        Command::Singulant(a) => cmd_singulant(a, dir),
        Command::LambdaCrit(a) => cmd_lambda_crit(a, dir),
        Command::Prefactor(a) => cmd_prefactor(a, dir),
        Command::Amplitude(a) => cmd_amplitude(a, dir),
        Command::Envelope(a) => cmd_envelope(a, dir),
        Command::Simulate(a) => cmd_simulate(a, dir),
        Command::Compare(a) => cmd_compare(a, dir),
    }
}

fn usage(msg: impl Into<String>) -> GswError {
    GswError::Usage(msg.into())
}

fn flag_err(e: gsw_core::Error) -> GswError {
    usage(e.to_string())
}

fn require<T: Copy>(v: Option<T>, flag: &str, model: &str) -> Result<T> {
    v.ok_or_else(|| usage(format!("--{flag} is required for --model {model}")))
}

fn reject<T>(v: &Option<T>, flag: &str, model: &str) -> Result<()> {
    match v {
        Some(_) => Err(usage(format!("--{flag} does not apply to --model {model}"))),
        None => Ok(()),
    }
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::PureImaginary => "PureImaginary",
        Regime::ComplexDecaying => "ComplexDecaying",
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Primary => "primary",
        Family::Secondary => "secondary",
    }
}

/// Writes `file` plus a manifest when an output directory is configured,
/// and returns the CSV text either way.
fn small_table(
    dir: Option<&Path>,
    manifest: &mut RunManifest,
    file: &str,
    header: &[&str],
    rows: &[Vec<String>],
    start: Instant,
) -> Result<String> {
    if let Some(d) = resolve_output_dir(dir, None) {
        ensure_dir(&d)?;
        let path = d.join(file);
        write_csv(&path, header, rows)?;
        manifest.outputs.push(path);
        manifest.write(&d, start.elapsed())?;
    }
    Ok(csv_string(header, rows))
}

fn cmd_singulant(a: &SingulantArgs, dir: Option<&Path>) -> Result<String> {
    let start = Instant::now();
    let mut manifest = RunManifest::new("singulant");
    let roots: Vec<SingulantRoot> = match a.model {
        ModelArg::Kdv7 => {
            reject(&a.k, "k", "7kdv")?;
            reject(&a.kappa, "kappa", "7kdv")?;
            let lambda = require(a.lambda, "lambda", "7kdv")?;
            ModelSpec::seventh_order(lambda, 1.0).map_err(flag_err)?;
            manifest.param("lambda", lambda);
            solve_7kdv_singulant(lambda)?
        }
        ModelArg::Hierarchy => {
            reject(&a.kappa, "kappa", "hierarchy")?;
            let k = require(a.k, "k", "hierarchy")?;
            let lambda = require(a.lambda, "lambda", "hierarchy")?;
            ModelSpec::hierarchy(k, lambda, 1.0).map_err(flag_err)?;
            manifest.param("k", k).param("lambda", lambda);
            hierarchy_singulant_roots(k, lambda)?
        }
        ModelArg::LatticeKdv => {
            reject(&a.lambda, "lambda", "lattice-kdv")?;
            reject(&a.k, "k", "lattice-kdv")?;
            reject(&a.kappa, "kappa", "lattice-kdv")?;
            if a.n_max == 0 {
                return Err(usage("--n-max must be at least 1"));
            }
            manifest.param("n-max", a.n_max);
            lattice_kdv_singulants(a.n_max)?
        }
        ModelArg::Lattice5Kdv => {
            reject(&a.lambda, "lambda", "lattice-5kdv")?;
            reject(&a.k, "k", "lattice-5kdv")?;
            let kappa = require(a.kappa, "kappa", "lattice-5kdv")?;
            ModelSpec::lattice_5kdv(kappa, 1.0, 1.0).map_err(flag_err)?;
            manifest.param("kappa", kappa).param("n-max", a.n_max);
            let r = lattice_5kdv_singulants(kappa, a.n_max, &a.offsets)?;
            let mut all: Vec<SingulantRoot> = r.family1.into_iter().chain(r.family2).collect();
            all.sort_by(|x, y| x.value.im.abs().total_cmp(&y.value.im.abs()));
            all
        }
    };
    manifest.param("model", format!("{:?}", a.model));
    let rows: Vec<Vec<String>> = roots
        .iter()
        .map(|r| {
            vec![
                num(r.value.re),
                num(r.value.im),
                regime_name(r.regime).to_string(),
                family_name(r.family).to_string(),
                r.branch_index.to_string(),
            ]
        })
        .collect();
    small_table(
        dir,
        &mut manifest,
        "singulant.csv",
        &["re", "im", "regime", "family", "branch"],
        &rows,
        start,
    )
}

fn cmd_lambda_crit(a: &LambdaCritArgs, dir: Option<&Path>) -> Result<String> {
    let start = Instant::now();
    if a.k.is_empty() {
        return Err(usage("--k needs at least one value"));
    }
    if let Some(k) = a.k.iter().find(|&&k| k == 0 || k % 2 == 1) {
        return Err(usage(format!("--k {k}: only even positive orders have a critical λ")));
    }
    if !(a.tol > 0.0) {
        return Err(usage("--tol must be positive"));
    }
    let mut rows = Vec::with_capacity(a.k.len());
    for &k in &a.k {
        rows.push(vec![k.to_string(), num(lambda_crit(k, a.tol)?.critical_value)]);
    }
    let mut manifest = RunManifest::new("lambda-crit");
    manifest
        .param("k", a.k.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
        .param("tol", a.tol);
    small_table(dir, &mut manifest, "lambda-crit.csv", &["k", "lambda_crit"], &rows, start)
}

fn history_rows(p: &PrefactorEstimate) -> Vec<Vec<String>> {
    p.history
        .iter()
        .map(|(j, v)| vec![j.to_string(), num(v.re), num(v.im)])
        .collect()
}

fn describe(name: &str, p: &PrefactorEstimate, out: &mut String) {
    let sign = if p.value.im.is_sign_negative() { '-' } else { '+' };
    let _ = writeln!(out, "{name} = {} {sign} {}i", num(p.value.re), num(p.value.im.abs()));
    let _ = writeln!(
        out,
        "{name} converged = {} (mean relative change {:.3e})",
        p.converged, p.rel_change_last
    );
}

fn cmd_prefactor(a: &PrefactorArgs, dir: Option<&Path>) -> Result<String> {
    let start = Instant::now();
    let mut manifest = RunManifest::new("prefactor");
    let mut out = String::new();
    let mut tables: Vec<(&str, Vec<Vec<String>>)> = Vec::new();
    match a.model {
        ModelArg::Kdv7 => {
            let lambda = require(a.lambda, "lambda", "7kdv")?;
            ModelSpec::seventh_order(lambda, 1.0).map_err(flag_err)?;
            let jmax = a.jmax.unwrap_or(SEVENTH_ORDER_J_MAX);
            let natural = if lambda > 0.25 { CaseArg::A } else { CaseArg::B };
            let case = a.case.unwrap_or(natural);
            if case != natural {
                return Err(GswError::Regime(format!(
                    "case {case:?} does not apply at lambda = {lambda}; it is case {natural:?}"
                )));
            }
            manifest.param("model", "7kdv").param("lambda", lambda).param("jmax", jmax);
            match case {
                CaseArg::A => {
                    let (l1, l2) = prefactor_case_a(lambda, jmax)?;
                    describe("Lambda_1", &l1, &mut out);
                    describe("Lambda_2", &l2, &mut out);
                    tables.push(("prefactor-history.csv", history_rows(&l1)));
                    tables.push(("prefactor-history-conjugate.csv", history_rows(&l2)));
                }
                CaseArg::B => {
                    let p = prefactor_case_b(lambda, jmax)?;
                    describe("Lambda", &p, &mut out);
                    tables.push(("prefactor-history.csv", history_rows(&p)));
                }
            }
        }
        ModelArg::LatticeKdv => {
            reject(&a.lambda, "lambda", "lattice-kdv")?;
            if a.case.is_some() {
                return Err(usage("--case applies only to --model 7kdv"));
            }
            let jmax = a.jmax.unwrap_or(LATTICE_J_MAX);
            manifest.param("model", "lattice-kdv").param("jmax", jmax);
            let p = prefactor_lattice(jmax)?;
            describe("Lambda", &p, &mut out);
            tables.push(("prefactor-history.csv", history_rows(&p)));
        }
        other => return Err(usage(format!("prefactor is not available for --model {other:?}"))),
    }
    let d = resolve_output_dir(dir, Some(DEFAULT_OUTPUT_DIR)).unwrap_or_default();
    ensure_dir(&d)?;
    for (file, rows) in &tables {
        let path = d.join(file);
        write_csv(&path, &["j", "re", "im"], rows)?;
        let _ = writeln!(out, "history = {}", path.display());
        manifest.outputs.push(path);
    }
    manifest.write(&d, start.elapsed())?;
    Ok(out)
}

fn cmd_amplitude(a: &AmplitudeArgs, dir: Option<&Path>) -> Result<String> {
    let start = Instant::now();
    let mut manifest = RunManifest::new("amplitude");
    let cs = if a.c.is_empty() { vec![1.0] } else { a.c.clone() };
    if cs.iter().any(|&c| !(c > 0.0)) {
        return Err(usage("--c values must be positive"));
    }
    let mut rows = Vec::new();
    match a.model {
        ModelArg::Kdv7 => {
            if !a.h.is_empty() {
                return Err(usage("--h applies only to --model lattice-kdv"));
            }
            let lambda = require(a.lambda, "lambda", "7kdv")?;
            let model = ModelSpec::seventh_order(lambda, 1.0).map_err(flag_err)?;
            if classify_regime(&model)? == Classification::LocalizedSoliton {
                return Err(GswError::Regime(
                    "regime is LocalizedSoliton; use envelope for the decaying remainder".into(),
                ));
            }
            let eps = if a.eps.is_empty() {
                (1..=10).map(|i| 0.05 * i as f64).collect()
            } else {
                a.eps.clone()
            };
            if eps.iter().any(|&e| !(e > 0.0)) {
                return Err(usage("--eps values must be positive"));
            }
            let prefactor = prefactor_case_b(lambda, SEVENTH_ORDER_J_MAX)?.value;
            for &c in &cs {
                let m = ModelSpec::seventh_order(lambda, c).map_err(flag_err)?;
                for &e in &eps {
                    let r = remainder_case_b_with(&m, e, prefactor)?;
                    rows.push(vec![num(e), num(c), num(r.amplitude), num(r.frequency)]);
                }
            }
            manifest.param("model", "7kdv").param("lambda", lambda);
        }
        ModelArg::LatticeKdv => {
            if !a.eps.is_empty() || a.lambda.is_some() {
                return Err(usage("--eps and --lambda do not apply to --model lattice-kdv"));
            }
            let hs = if a.h.is_empty() {
                (1..=10).map(|i| 0.1 * i as f64).collect()
            } else {
                a.h.clone()
            };
            if hs.iter().any(|&h| !(h > 0.0)) {
                return Err(usage("--h values must be positive"));
            }
            let prefactor = prefactor_lattice(LATTICE_J_MAX)?.value;
            for &c in &cs {
                for &h in &hs {
                    let r = lattice_remainder_with(h, c, prefactor)?;
                    rows.push(vec![num(h), num(c), num(r.amplitude), num(r.frequency)]);
                }
            }
            manifest.param("model", "lattice-kdv");
        }
        other => return Err(usage(format!("amplitude is not available for --model {other:?}"))),
    }
    manifest.param("c", cs.iter().map(f64::to_string).collect::<Vec<_>>().join(","));
    small_table(
        dir,
        &mut manifest,
        "amplitude.csv",
        &["param", "c", "amplitude", "frequency"],
        &rows,
        start,
    )
}

/// `x` samples over `|x − ct| ≤ half_width` with the inner band removed.
fn envelope_rows(a: &EnvelopeArgs, delta: f64, log_env: impl Fn(f64) -> f64) -> Vec<Vec<String>> {
    let centre = a.c * a.t;
    let n = a.points.max(2);
    (0..n)
        .map(|i| centre - a.half_width + 2.0 * a.half_width * i as f64 / (n - 1) as f64)
        .filter(|x| (x - centre).abs() >= delta)
        .map(|x| vec![num(x), num(log_env(x - centre))])
        .collect()
}

fn cmd_envelope(a: &EnvelopeArgs, dir: Option<&Path>) -> Result<String> {
    let start = Instant::now();
    if !(a.eps > 0.0 && a.c > 0.0 && a.half_width > 0.0) {
        return Err(usage("--eps, --c and --half-width must be positive"));
    }
    if !(a.lambda > 0.25) {
        return Err(usage(format!("--lambda {} must exceed 1/4 (decaying case)", a.lambda)));
    }
    if !(a.lambda_b > 0.0 && a.lambda_b <= 0.25) {
        return Err(usage(format!("--lambda-b {} must lie in (0, 1/4]", a.lambda_b)));
    }
    if let Some(d) = a.delta {
        if !(d >= 0.0) {
            return Err(usage("--delta must be non-negative"));
        }
    }
    let model_a = ModelSpec::seventh_order(a.lambda, a.c).map_err(flag_err)?;
    let model_b = ModelSpec::seventh_order(a.lambda_b, a.c).map_err(flag_err)?;
    let (_, right) = remainder_case_a(&model_a, a.eps)?;
    let b = gsw_core::asymptotics::remainder_case_b(&model_b, a.eps)?;
    let delta_a = a.delta.unwrap_or_else(|| inner_half_width(a.eps, case_a_root(a.lambda).unwrap_or_default(), a.c));
    let beta = case_b_beta(a.lambda_b)?;
    let delta_b = a.delta.unwrap_or_else(|| inner_half_width(a.eps, Complex64::new(0.0, beta), a.c));

    let d = resolve_output_dir(dir, Some(DEFAULT_OUTPUT_DIR)).unwrap_or_default();
    ensure_dir(&d)?;
    let mut manifest = RunManifest::new("envelope");
    manifest
        .param("lambda", a.lambda)
        .param("lambda-b", a.lambda_b)
        .param("eps", a.eps)
        .param("c", a.c)
        .param("t", a.t)
        .param("delta-a", delta_a)
        .param("delta-b", delta_b);
    let pa = d.join("envelope-case-a.csv");
    write_csv(&pa, &["x", "log_envelope"], &envelope_rows(a, delta_a, |s| right.log_envelope(s)))?;
    let pb = d.join("envelope-case-b.csv");
    write_csv(&pb, &["x", "log_envelope"], &envelope_rows(a, delta_b, |s| b.log_envelope(s)))?;
    let mut out = String::new();
    let _ = writeln!(out, "decaying: rate {} per unit length, file {}", num(right.envelope_rate), pa.display());
    let _ = writeln!(out, "constant: log amplitude {}, file {}", num(b.amplitude.ln()), pb.display());
    manifest.outputs.extend([pa, pb]);
    manifest.write(&d, start.elapsed())?;
    Ok(out)
}

const SIMULATE_KEYS: [&str; 11] = [
    "equation", "lambda", "eps", "c", "dt", "t-end", "half-length", "n-points", "dealias", "splitting", "snapshots",
];

fn load_config(path: &Option<PathBuf>, known: &[&str]) -> Result<ConfigFile> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(p) => {
            let c = ConfigFile::load(p)?;
            c.check_keys(known)?;
            Ok(c)
        }
    }
}

fn enum_value<T: ValueEnum>(file: &ConfigFile, key: &str) -> Result<Option<T>> {
    match file.raw(key) {
        None => Ok(None),
        Some(s) => T::from_str(s, true)
            .map(Some)
            .map_err(|e| usage(format!("{}: `{key}`: {e}", file.path.display()))),
    }
}

/// Resolves flags over file values over defaults.
pub fn simulation_config(a: &SimulateArgs) -> Result<SimulationConfig> {
    let f = load_config(&a.config, &SIMULATE_KEYS)?;
    let equation = a.equation.or(enum_value(&f, "equation")?).unwrap_or(EquationArg::Kdv7);
    let lambda = a.lambda.or(f.get("lambda")?).unwrap_or(0.125);
    let eps = a.eps.or(f.get("eps")?).unwrap_or(0.5);
    let c = a.c.or(f.get("c")?).unwrap_or(1.0);
    let model = ModelSpec::seventh_order(lambda, c).map_err(flag_err)?;
    let eq = match equation {
        EquationArg::Kdv => Equation::Kdv,
        EquationArg::Kdv7 => Equation::Perturbed,
    };
    let mut cfg = SimulationConfig::new(model, eq, eps);
    cfg.dt = a.dt.or(f.get("dt")?).unwrap_or(1e-3);
    cfg.t_end = a.t_end.or(f.get("t-end")?).unwrap_or(3.0);
    cfg.half_length = a.half_length.or(f.get("half-length")?).unwrap_or(50.0);
    cfg.n_points = a.n_points.or(f.get("n-points")?).unwrap_or(4096);
    cfg.dealias = a.dealias.or(f.get("dealias")?).unwrap_or(true);
    cfg.splitting = match a.splitting.or(enum_value(&f, "splitting")?).unwrap_or(SplittingArg::Strang) {
        SplittingArg::Lie => Splitting::Lie,
        SplittingArg::Strang => Splitting::Strang,
    };
    cfg.snapshot_times = match &a.snapshots {
        Some(s) => s.clone(),
        None => f.get_list("snapshots")?.unwrap_or_default(),
    };
    if !(cfg.eps > 0.0) {
        return Err(usage("--eps must be positive"));
    }
    cfg.validate().map_err(|e| match e {
        GswError::Setup(m) => usage(m),
        GswError::Core(c) => flag_err(c),
        other => other,
    })?;
    Ok(cfg)
}

fn cmd_simulate(a: &SimulateArgs, dir: Option<&Path>) -> Result<String> {
    let start = Instant::now();
    let cfg = simulation_config(a)?;
    let out = run(&cfg)?;
    let d = resolve_output_dir(dir, Some(DEFAULT_OUTPUT_DIR)).unwrap_or_default();
    ensure_dir(&d)?;
    let mut manifest = RunManifest::new("simulate");
    manifest
        .param("equation", format!("{:?}", cfg.equation))
        .param("lambda", cfg.model.lambda)
        .param("eps", cfg.eps)
        .param("c", cfg.model.c)
        .param("dt", cfg.dt)
        .param("dt-used", out.dt_used)
        .param("steps", out.steps)
        .param("t-end", cfg.t_end)
        .param("half-length", cfg.half_length)
        .param("n-points", cfg.n_points)
        .param("dealias", cfg.dealias)
        .param("splitting", format!("{:?}", cfg.splitting));
    let mut fields: Vec<_> = out.snapshots.iter().collect();
    if fields.last().map(|f| f.time) != Some(out.final_field.time) {
        fields.push(&out.final_field);
    }
    let mut times = Vec::new();
    let mut text = String::new();
    for (i, f) in fields.iter().enumerate() {
        let path = d.join(format!("snapshot-{i:03}.csv"));
        let rows: Vec<Vec<String>> = f
            .samples
            .iter()
            .enumerate()
            .map(|(j, u)| vec![num(f.x(j)), num(*u)])
            .collect();
        write_csv(&path, &["x", "u"], &rows)?;
        let _ = writeln!(text, "t = {} -> {}", num(f.time), path.display());
        times.push(num(f.time));
        manifest.outputs.push(path);
    }
    manifest.param("times", times.join(","));
    let m = manifest.write(&d, start.elapsed())?;
    let _ = writeln!(text, "manifest = {}", m.display());
    Ok(text)
}

const COMPARE_KEYS: [&str; 7] = ["lambda", "c", "eps", "dt", "half-length", "n-points", "settle-factor"];

fn cmd_compare(a: &CompareArgs, dir: Option<&Path>) -> Result<String> {
    let start = Instant::now();
    let f = load_config(&a.config, &COMPARE_KEYS)?;
    let lambda = a.lambda.or(f.get("lambda")?).unwrap_or(0.125);
    let c = a.c.or(f.get("c")?).unwrap_or(1.0);
    ModelSpec::seventh_order(lambda, c).map_err(flag_err)?;
    let eps = match &a.eps {
        Some(e) => e.clone(),
        None => f.get_list("eps")?.unwrap_or_else(|| DEFAULT_SWEEP_EPS.to_vec()),
    };
    if eps.iter().any(|&e| !(e > 0.0)) {
        return Err(usage("--eps values must be positive"));
    }
    let base = SweepTemplate::default();
    let template = SweepTemplate {
        dt: a.dt.or(f.get("dt")?).unwrap_or(base.dt),
        half_length: a.half_length.or(f.get("half-length")?).unwrap_or(base.half_length),
        n_points: a.n_points.or(f.get("n-points")?).unwrap_or(base.n_points),
        settle_factor: a.settle_factor.or(f.get("settle-factor")?).unwrap_or(base.settle_factor),
        ..base
    };
    if !(template.settle_factor > 0.0) {
        return Err(usage("--settle-factor must be positive"));
    }
    let rows = compare_sweep(lambda, c, &eps, &template)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                num(r.eps),
                num(r.numeric_amplitude),
                num(r.asymptotic_amplitude),
                num(r.ratio),
                num(r.rel_error),
            ]
        })
        .collect();
    let d = resolve_output_dir(dir, Some(DEFAULT_OUTPUT_DIR)).unwrap_or_default();
    ensure_dir(&d)?;
    let path = d.join("comparison.csv");
    let header = ["eps", "numeric_amplitude", "asymptotic_amplitude", "ratio", "rel_error"];
    write_csv(&path, &header, &table)?;
    let mut manifest = RunManifest::new("compare");
    manifest
        .param("lambda", lambda)
        .param("c", c)
        .param("eps", eps.iter().map(f64::to_string).collect::<Vec<_>>().join(","))
        .param("dt", template.dt)
        .param("half-length", template.half_length)
        .param("n-points", template.n_points)
        .param("settle-factor", template.settle_factor)
        .param(
            "steady",
            rows.iter().map(|r| r.steady.to_string()).collect::<Vec<_>>().join(","),
        );
    manifest.outputs.push(path);
    manifest.write(&d, start.elapsed())?;
    let mut out = csv_string(&header, &table);
    for r in &rows {
        if !r.steady {
            let _ = writeln!(out, "# eps = {}: amplitude still drifting at t_end = {:.3}", r.eps, r.t_end);
        }
    }
    Ok(out)
}
