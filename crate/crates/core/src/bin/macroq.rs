// Copyright 2026 MacroQ Contributors
// SPDX-License-Identifier: Apache-2.0

//! `macroq` command-line tool.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error,
//! 3 truncation/resource error, 4 internal consistency error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use macroq::error::exit_code;
use macroq::family::{Family, StateRecipe, SweepParameter};
use macroq::io::{grid_to_csv, grid_to_json, read_state_file, write_state_file, StateData};
use macroq::measures::{measure_report_tol, pure_state_measures_tol};
use macroq::states::product_state;
use macroq::sweep::{run_sweep, write_sweep, SweepSpec, SweepValues};
use macroq::verify::{run_verify, VerifyConfig};
use macroq::wigner::{
    check_comparison, compare_pipelines, default_half_width, wigner_direct, wigner_from_density, GridSpec,
    DEFAULT_POINTS,
};
use macroq::{Error, OperatorCache, Tolerances};

#[derive(Parser)]
#[command(name = "macroq", version, about = "Phase-space coherence measures of bosonic states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a state and write it as a JSON state file.
    State(StateArgs),
    /// Compute I, C, P and chi2 of a state file.
    Measure(MeasureArgs),
    /// Measure a state family over a range of one parameter.
    Sweep(SweepArgs),
    /// Export the Wigner function of a single-mode state on a grid.
    Wigner(WignerArgs),
    /// Run the built-in invariant suite, optionally on extra state files.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Grid points per axis.
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    grid: usize,
    /// Half-width L of the square (q, p) domain [default: sqrt(2N) + 5].
    #[arg(long)]
    half_width: Option<f64>,
}

impl GridArgs {
    fn spec(&self, truncation: usize) -> Result<GridSpec, Error> {
        let l = self.half_width.unwrap_or_else(|| default_half_width(truncation));
        GridSpec::new(l, self.grid, self.grid)
    }
}

#[derive(Args)]
struct StateArgs {
    /// One of fock, coherent, cat, cat-mixture, fock-mixture, thermal, product.
    family: String,
    /// Family parameters as key=value (product: left=FILE right=FILE).
    params: Vec<String>,
    /// Output state file.
    #[arg(long, short)]
    out: PathBuf,
    /// Fock truncation N per mode (overrides the family default).
    #[arg(long)]
    truncation: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Operator,
    Wigner,
    Both,
}

#[derive(Args)]
struct MeasureArgs {
    /// State file.
    state: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Operator)]
    method: Method,
    #[command(flatten)]
    grid: GridArgs,
    /// Factor applied to every consistency tolerance.
    #[arg(long, default_value_t = 1.0)]
    tol: f64,
}

#[derive(Args)]
struct SweepArgs {
    /// State family (any except product).
    #[arg(long)]
    family: String,
    /// Swept parameter: alpha, a, d or n.
    #[arg(long)]
    parameter: String,
    /// First value of an evenly spaced range.
    #[arg(long, requires_all = ["stop", "steps"], conflicts_with = "values")]
    start: Option<f64>,
    /// Last value of the range, included exactly.
    #[arg(long)]
    stop: Option<f64>,
    /// Number of evenly spaced points from start to stop inclusive.
    #[arg(long)]
    steps: Option<usize>,
    /// Explicit comma-separated values.
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    /// Fixed family parameters as key=value.
    #[arg(long = "param")]
    params: Vec<String>,
    /// Output CSV; full reports go to a `.reports.json` sidecar.
    #[arg(long, short)]
    out: PathBuf,
    /// Fock truncation N for every point [default: per-point family default].
    #[arg(long)]
    truncation: Option<usize>,
    /// Factor applied to every consistency tolerance.
    #[arg(long, default_value_t = 1.0)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Transform {
    /// Fock-basis kernel sum.
    Kernel,
    /// Numerical quadrature of the defining integral.
    Direct,
}

#[derive(Args)]
struct WignerArgs {
    /// State file (single mode).
    state: PathBuf,
    #[arg(long, short)]
    out: PathBuf,
    /// Output format [default: from the file extension, csv otherwise].
    #[arg(long, value_enum)]
    format: Option<GridFormat>,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value_t = Transform::Kernel)]
    method: Transform,
    /// Quadrature points of the direct transform.
    #[arg(long, default_value_t = 512)]
    eta_points: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Extra state files, or directories of `.json` state files.
    corpus: Vec<PathBuf>,
    /// Grid points per axis for the Wigner checks (below 256 the pipeline
    /// tolerance loosens to 5e-3).
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    grid: usize,
    /// Factor applied to every verification tolerance.
    #[arg(long, default_value_t = 1.0)]
    tol: f64,
    /// Also write the JSON summary to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

/// Failure of a command: message for stderr plus exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: e.exit_code(), message: e.to_string() }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Error::from(e).into()
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: exit_code::USAGE, message: message.into() }
}

type CmdResult = Result<i32, Failure>;

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

fn tolerances(factor: f64) -> Result<Tolerances, Failure> {
    if !(factor.is_finite() && factor > 0.0) {
        return Err(usage(format!("--tol must be a positive factor, got {factor}")));
    }
    Ok(Tolerances::default().scaled(factor))
}

fn parse_params(raw: &[String]) -> Result<Vec<(String, String)>, Failure> {
    raw.iter()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| usage(format!("parameter '{kv}' is not of the form key=value")))
        })
        .collect()
}

fn parse_family(name: &str) -> Result<Family, Failure> {
    Ok(name.parse::<Family>()?)
}

fn cmd_state(args: StateArgs) -> CmdResult {
    let family = parse_family(&args.family)?;
    let params = parse_params(&args.params)?;
    let (state, metadata) = if family == Family::Product {
        build_product(&params, args.truncation)?
    } else {
        let recipe = StateRecipe::from_params(family, &params)?;
        (recipe.build(args.truncation)?, recipe.metadata())
    };
    write_state_file(&args.out, &state, &metadata)?;
    let rho = state.density();
    println!(
        "{family} state ({}) on {}: max top-level population {:.3e} -> {}",
        match state {
            StateData::Pure(_) => "pure",
            StateData::Mixed(_) => "mixed",
        },
        state.spec(),
        rho.max_tail_mass(),
        args.out.display()
    );
    Ok(exit_code::SUCCESS)
}

fn build_product(params: &[(String, String)], truncation: Option<usize>) -> Result<(StateData, Map<String, Value>), Failure> {
    if truncation.is_some() {
        return Err(usage("--truncation does not apply to product states; set it on the factors"));
    }
    let mut left = None;
    let mut right = None;
    for (k, v) in params {
        match k.as_str() {
            "left" => left = Some(PathBuf::from(v)),
            "right" => right = Some(PathBuf::from(v)),
            _ => return Err(usage(format!("family product takes left, right; got '{k}'"))),
        }
    }
    let (Some(left), Some(right)) = (left, right) else {
        return Err(usage("family product needs left=FILE right=FILE"));
    };
    let (a, meta_a) = read_state_file(&left)?;
    let (b, meta_b) = read_state_file(&right)?;
    let state = match (&a, &b) {
        (StateData::Pure(x), StateData::Pure(y)) => StateData::Pure(x.tensor(y)?),
        _ => StateData::Mixed(product_state(&a.density(), &b.density())?),
    };
    let mut meta = Map::new();
    meta.insert("family".into(), Value::from("product"));
    meta.insert("left".into(), Value::Object(meta_a));
    meta.insert("right".into(), Value::Object(meta_b));
    Ok((state, meta))
}

fn cmd_measure(args: MeasureArgs) -> CmdResult {
    let tol = tolerances(args.tol)?;
    let (state, _) = read_state_file(&args.state)?;
    let rho = state.density();
    let cache = OperatorCache::new();
    let output = match args.method {
        Method::Operator => match &state {
            StateData::Pure(psi) => serde_json::to_value(pure_state_measures_tol(psi, &cache, &tol)?)?,
            StateData::Mixed(r) => serde_json::to_value(measure_report_tol(r, &cache, &tol)?)?,
        },
        Method::Wigner | Method::Both => {
            let gs = args.grid.spec(rho.spec().truncation)?;
            let cmp = compare_pipelines(&rho, &gs, &tol)?;
            let checked = check_comparison(&cmp, &tol);
            let value = match args.method {
                Method::Wigner => serde_json::to_value(&cmp.wigner)?,
                _ => json!({
                    "operator": cmp.operator,
                    "wigner": cmp.wigner,
                    "grid": cmp.grid,
                    "normalization": cmp.normalization,
                    "deltas": {
                        "C": cmp.rel_delta_c,
                        "P": cmp.rel_delta_p,
                        "chi2": cmp.rel_delta_chi2,
                        "I": cmp.delta_i,
                    },
                }),
            };
            if let Err(e) = checked {
                println!("{}", serde_json::to_string_pretty(&value)?);
                return Err(e.into());
            }
            value
        }
    };
    println!("{}", serde_json::to_string_pretty(&output)?);
    Ok(exit_code::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> CmdResult {
    let tol = tolerances(args.tol)?;
    let family = parse_family(&args.family)?;
    let parameter: SweepParameter = args.parameter.parse()?;
    let values = match (args.start, args.stop, args.steps, args.values) {
        (Some(start), Some(stop), Some(steps), None) => SweepValues::Range { start, stop, steps },
        (None, None, None, Some(list)) => SweepValues::List(list),
        _ => return Err(usage("give either --start/--stop/--steps or --values")),
    };
    let first = values.expand()?[0];
    let mut params = parse_params(&args.params)?;
    if params.iter().any(|(k, _)| k == parameter.name()) {
        return Err(usage(format!("{parameter} is swept and cannot also be fixed")));
    }
    params.push((parameter.name().to_string(), first.to_string()));
    let base = StateRecipe::from_params(family, &params)?;
    let spec = SweepSpec { parameter, values, base, truncation: args.truncation, output: args.out };
    let result = run_sweep(&spec, &tol)?;
    let sidecar = write_sweep(&result, &spec.output, &timestamp())?;
    let ok = result.succeeded();
    println!(
        "{family} sweep over {parameter}: {ok}/{} points succeeded -> {} (reports: {})",
        result.rows.len(),
        spec.output.display(),
        sidecar.display()
    );
    for row in result.rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("{parameter}={}: {}", row.parameter, row.error.as_deref().unwrap_or_default());
    }
    if ok == 0 {
        let code = result.rows.iter().find_map(|r| r.error_code).unwrap_or(exit_code::CONSISTENCY);
        return Err(Failure { code, message: "no sweep point succeeded".into() });
    }
    Ok(exit_code::SUCCESS)
}

fn cmd_wigner(args: WignerArgs) -> CmdResult {
    let (state, metadata) = read_state_file(&args.state)?;
    let rho = state.density();
    if rho.num_modes() != 1 {
        return Err(usage(format!(
            "Wigner grids are single-mode; {} has {} modes",
            args.state.display(),
            rho.num_modes()
        )));
    }
    let gs = args.grid.spec(rho.spec().truncation)?;
    let grid = match args.method {
        Transform::Kernel => wigner_from_density(&rho, &gs)?,
        Transform::Direct => wigner_direct(&rho, &gs, args.eta_points)?,
    };
    let format = args.format.unwrap_or_else(|| {
        match args.out.extension().and_then(|e| e.to_str()) {
            Some("json") => GridFormat::Json,
            _ => GridFormat::Csv,
        }
    });
    let text = match format {
        GridFormat::Csv => grid_to_csv(&grid),
        GridFormat::Json => grid_to_json(&grid, &gs, &metadata)?,
    };
    fs::write(&args.out, text).map_err(Error::from)?;
    let ((i, j), max) = grid.argmax();
    let (ci, cj) = grid.nearest(0.0, 0.0);
    println!(
        "{}x{} grid on [-{l}, {l}]^2: max W = {max:.12e} at (q, p) = ({:.6}, {:.6}), W(0, 0) = {:.12e}, integral = {:.12e} -> {}",
        gs.nq,
        gs.np,
        grid.q(i),
        grid.p(j),
        grid.at(ci, cj),
        grid.integral(),
        args.out.display(),
        l = gs.half_width,
    );
    Ok(exit_code::SUCCESS)
}

/// Expands directories into their `.json` files, sorted by name.
fn corpus_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>, Failure> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut files: Vec<PathBuf> = fs::read_dir(p)
                .map_err(Error::from)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().and_then(|e| e.to_str()) == Some("json"))
                .collect();
            files.sort();
            out.extend(files);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    tolerances(args.tol)?;
    let cfg = VerifyConfig { grid_points: args.grid, tol_factor: args.tol, corpus: corpus_files(&args.corpus)? };
    let summary = run_verify(&cfg, &timestamp());
    print!("{}", summary.to_text());
    if let Some(path) = &args.json {
        write_json(path, &serde_json::to_string_pretty(&summary)?)?;
    }
    Ok(if summary.ok() { exit_code::SUCCESS } else { exit_code::VERIFICATION_FAILED })
}

fn write_json(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Error::from(e).into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::State(a) => cmd_state(a),
        Command::Measure(a) => cmd_measure(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Wigner(a) => cmd_wigner(a),
        Command::Verify(a) => cmd_verify(a),
    };
    let code = match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    ExitCode::from(code as u8)
}
