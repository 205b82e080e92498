mod config;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use fracstep::diffuse::{exact_diffusivity, Boundary, DiffuseProblem, InitialCondition};
use fracstep::harness::{
    mre, run_table, sine_exact_profile, ErrorReport, ReferenceCache, Table, TableOverrides,
};
use fracstep::mlf::exact_relaxation;
use fracstep::relax::{
    solve_relax_explicit_volterra_with, solve_relax_implicit, RelaxProblem, RelaxScheme,
    VolterraOptions,
};
use fracstep::{Error, MeshStrategy};

use output::{num, opt};

/// Bad flags, bad config or out-of-domain parameters. Exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

enum Failure {
    Usage(UsageError),
    Solver(anyhow::Error),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Solver(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Solver(e.into())
    }
}

type Outcome = Result<(), Failure>;

#[derive(Parser)]
#[command(
    name = "fracstep",
    version,
    about = "Time-fractional relaxation and diffusion solvers"
)]
struct Cli {
    /// JSON file with the same keys as the command's flags; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a single problem and write its solution as CSV.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Rerun one of the comparison tables.
    Bench(BenchArgs),
    /// Dump the nodes of a time mesh.
    Mesh(MeshArgs),
}

#[derive(Subcommand)]
enum SolveCommand {
    /// D^γ u + B u = 0, u(0) = A.
    Relax(RelaxArgs),
    /// ∂^α u/∂t^α = D ∂²u/∂x² on [0, L].
    Diffuse(DiffuseArgs),
}

#[derive(Args, Serialize, Deserialize, Default, Debug)]
#[serde(deny_unknown_fields)]
struct RelaxArgs {
    /// Order in (0, 1].
    #[arg(long)]
    gamma: Option<f64>,
    /// Initial value.
    #[arg(long = "A")]
    #[serde(rename = "A")]
    a: Option<f64>,
    /// Relaxation coefficient.
    #[arg(long = "B")]
    #[serde(rename = "B")]
    b: Option<f64>,
    /// Horizon.
    #[arg(long = "T")]
    #[serde(rename = "T")]
    horizon: Option<f64>,
    /// sfdm-implicit, uniform-implicit, legacy-implicit, sfdm-explicit or clock-explicit.
    #[arg(long)]
    scheme: Option<String>,
    /// Time intervals N.
    #[arg(long)]
    nodes: Option<usize>,
    /// Explicit schemes: build the whole weight matrix up front.
    #[arg(long)]
    precompute: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Default, Debug)]
#[serde(deny_unknown_fields)]
struct DiffuseArgs {
    /// Order in (0, 1).
    #[arg(long)]
    alpha: Option<f64>,
    /// Domain length.
    #[arg(long = "L")]
    #[serde(rename = "L")]
    length: Option<f64>,
    /// Diffusivity, or `exactk` for L²/π².
    #[arg(long = "D")]
    #[serde(rename = "D")]
    diffusivity: Option<Diffusivity>,
    /// sine or point.
    #[arg(long)]
    ic: Option<String>,
    /// Point-source height.
    #[arg(long)]
    height: Option<f64>,
    /// dirichlet or neumann.
    #[arg(long)]
    bc: Option<String>,
    /// Time intervals N.
    #[arg(long)]
    nodes: Option<usize>,
    /// Space intervals M.
    #[arg(long)]
    xnodes: Option<usize>,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    horizon: Option<f64>,
    /// power-law, uniform or legacy.
    #[arg(long)]
    mesh: Option<String>,
    /// Only write the final time row.
    #[arg(long = "final-only")]
    #[serde(rename = "final-only")]
    final_only: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum Diffusivity {
    Value(f64),
    Named(ExactK),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ExactK {
    Exactk,
}

impl FromStr for Diffusivity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("exactk") {
            return Ok(Diffusivity::Named(ExactK::Exactk));
        }
        s.parse()
            .map(Diffusivity::Value)
            .map_err(|_| format!("expected a number or `exactk`, got `{s}`"))
    }
}

#[derive(Args, Serialize, Deserialize, Default, Debug)]
#[serde(deny_unknown_fields)]
struct BenchArgs {
    /// table1, table2, table3 or table4.
    #[serde(skip)]
    table: String,
    /// Orders to run, comma separated.
    #[arg(long, value_delimiter = ',')]
    alphas: Option<Vec<f64>>,
    /// Horizons to run, comma separated.
    #[arg(long = "T", value_delimiter = ',')]
    #[serde(rename = "T")]
    horizons: Option<Vec<f64>>,
    /// Node counts, comma separated (S-FDM counts per horizon for table3).
    #[arg(long, value_delimiter = ',')]
    nodes: Option<Vec<usize>>,
    /// Space intervals M.
    #[arg(long)]
    xnodes: Option<usize>,
    /// Time intervals of the fine-grid reference (table4).
    #[arg(long = "reference-nodes")]
    #[serde(rename = "reference-nodes")]
    reference_nodes: Option<usize>,
    /// Timed runs per row; the median is reported.
    #[arg(long)]
    repeats: Option<usize>,
    /// Reference cache directory; defaults to $FRACSTEP_CACHE or ./cache.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// table3: search S-FDM node counts for error parity.
    #[arg(long)]
    search: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Default, Debug)]
#[serde(deny_unknown_fields)]
struct MeshArgs {
    /// power-law, uniform or legacy.
    #[arg(long)]
    strategy: Option<String>,
    /// Order of the power-law mesh; also adds a t^α column.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    horizon: Option<f64>,
    /// Intervals N.
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    let file = cli.config.as_deref().map(config::load).transpose()?;
    let file = file.as_ref();
    match cli.command {
        Command::Solve(SolveCommand::Relax(args)) => {
            solve_relax(config::merge(&args, file, "solve relax")?)
        }
        Command::Solve(SolveCommand::Diffuse(args)) => {
            solve_diffuse(config::merge(&args, file, "solve diffuse")?)
        }
        Command::Bench(args) => {
            let mut merged: BenchArgs = config::merge(&args, file, "bench")?;
            merged.table = args.table;
            bench(merged)
        }
        Command::Mesh(args) => mesh(config::merge(&args, file, "mesh")?),
    }
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, UsageError> {
    value.ok_or_else(|| UsageError(format!("missing required flag --{flag}")))
}

/// Domain errors raised while building a problem are usage errors.
fn as_usage(e: Error) -> Failure {
    match e {
        Error::Domain {
            name,
            value,
            reason,
        } => {
            let flag = match name {
                "M" => "xnodes",
                "N" => "nodes",
                other => other,
            };
            Failure::Usage(UsageError(format!("invalid --{flag} = {value}: {reason}")))
        }
        Error::LengthMismatch { .. } | Error::InvalidInput(_) => {
            Failure::Usage(UsageError(e.to_string()))
        }
        other => other.into(),
    }
}

fn parse_strategy(name: &str, alpha: Option<f64>) -> Result<MeshStrategy, UsageError> {
    match name {
        "power-law" | "sfdm" => Ok(MeshStrategy::PowerLaw {
            alpha: required(alpha, "alpha")?,
        }),
        "uniform" => Ok(MeshStrategy::Uniform),
        "legacy" => Ok(MeshStrategy::LegacyNonUniform),
        other => Err(UsageError(format!(
            "invalid --strategy `{other}`: expected power-law, uniform or legacy"
        ))),
    }
}

/// Summary lines go to standard output when the CSV goes to a file.
fn summary(to_file: bool, line: String) {
    if to_file {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn solve_relax(args: RelaxArgs) -> Outcome {
    let gamma = required(args.gamma, "gamma")?;
    let a = required(args.a, "A")?;
    let b = required(args.b, "B")?;
    let horizon = required(args.horizon, "T")?;
    let n = required(args.nodes, "nodes")?;
    let scheme: RelaxScheme = args
        .scheme
        .as_deref()
        .unwrap_or("sfdm-implicit")
        .parse()
        .map_err(|_| {
            UsageError(format!(
                "invalid --scheme `{}`: expected one of {}",
                args.scheme.as_deref().unwrap_or_default(),
                RelaxScheme::ALL.map(|s| s.label()).join(", ")
            ))
        })?;
    let p = RelaxProblem::new(gamma, a, b, horizon).map_err(as_usage)?;
    let mesh = scheme.strategy(gamma).build(horizon, n).map_err(as_usage)?;

    let sol = if scheme.is_explicit() {
        let opts = VolterraOptions {
            precompute: args.precompute,
        };
        solve_relax_explicit_volterra_with(&p, &mesh, opts)?
    } else {
        solve_relax_implicit(&p, &mesh)?
    };

    let mut w = output::open(args.out.as_deref(), "solve relax", &args)?;
    w.write_record(["t", "u"]).context("writing CSV")?;
    for (t, u) in sol.mesh().nodes().iter().zip(sol.u()) {
        w.write_record([num(*t), num(*u)]).context("writing CSV")?;
    }
    w.flush().context("writing CSV")?;

    let to_file = args.out.is_some();
    summary(to_file, format!("u(T) = {}", num(sol.final_value())));
    if b >= 0.0 {
        if let Ok(exact) = exact_relaxation(a, b, gamma, horizon) {
            if let Ok(err) = mre(&[sol.final_value()], &[exact]) {
                summary(to_file, format!("MRE vs exact at T: {err:.6e}"));
            }
        }
    }
    Ok(())
}

fn solve_diffuse(args: DiffuseArgs) -> Outcome {
    let alpha = required(args.alpha, "alpha")?;
    let length = args.length.unwrap_or(10.0);
    let horizon = required(args.horizon, "T")?;
    let n = required(args.nodes, "nodes")?;
    let m = args.xnodes.unwrap_or(100);
    let d = required(args.diffusivity, "D")?;
    let exact_k = matches!(d, Diffusivity::Named(_));
    let d = match d {
        Diffusivity::Value(v) => v,
        Diffusivity::Named(_) => exact_diffusivity(length),
    };
    let ic = match args.ic.as_deref().unwrap_or("sine") {
        "sine" => InitialCondition::Sine,
        "point" => InitialCondition::PointSource {
            height: args.height.unwrap_or(2.0),
        },
        other => {
            return Err(
                UsageError(format!("invalid --ic `{other}`: expected sine or point")).into(),
            )
        }
    };
    let bc = match args.bc.as_deref().unwrap_or("dirichlet") {
        "dirichlet" => Boundary::Dirichlet0,
        "neumann" => Boundary::NeumannZeroFlux,
        other => {
            return Err(UsageError(format!(
                "invalid --bc `{other}`: expected dirichlet or neumann"
            ))
            .into())
        }
    };
    let strategy = parse_strategy(args.mesh.as_deref().unwrap_or("power-law"), Some(alpha))
        .map_err(|e| UsageError(e.0.replace("--strategy", "--mesh")))?;

    let p = DiffuseProblem::new(alpha, d, length, m, horizon)
        .and_then(|p| p.with_ic(ic))
        .map_err(as_usage)?
        .with_bc(bc);
    let mesh = strategy.build(horizon, n).map_err(as_usage)?;
    let sol = fracstep::solve_diffuse_implicit(&p, &mesh)?;

    let mut w = output::open(args.out.as_deref(), "solve diffuse", &args)?;
    if args.final_only {
        w.write_record(["x", "u"]).context("writing CSV")?;
        for (x, u) in sol.xgrid().iter().zip(sol.final_row()) {
            w.write_record([num(*x), num(*u)]).context("writing CSV")?;
        }
    } else {
        w.write_record(["t", "x", "u"]).context("writing CSV")?;
        for (t, row) in sol.mesh().nodes().iter().zip(sol.rows()) {
            for (x, u) in sol.xgrid().iter().zip(row) {
                w.write_record([num(*t), num(*x), num(*u)])
                    .context("writing CSV")?;
            }
        }
    }
    w.flush().context("writing CSV")?;

    if exact_k && p.ic == InitialCondition::Sine && p.bc == Boundary::Dirichlet0 {
        let exact = sine_exact_profile(&p)?;
        let err = mre(sol.final_row(), &exact)?;
        summary(
            args.out.is_some(),
            format!("final MRE vs exact solution: {err:.6e}"),
        );
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Outcome {
    let table: Table = args.table.parse().map_err(|_| {
        UsageError(format!(
            "invalid table `{}`: expected table1, table2, table3 or table4",
            args.table
        ))
    })?;
    if let Some(alphas) = &args.alphas {
        for &a in alphas {
            if !(a > 0.0 && a <= 1.0) {
                return Err(
                    UsageError(format!("invalid --alphas entry {a}: must lie in (0, 1]")).into(),
                );
            }
        }
    }
    if args.repeats == Some(0) {
        return Err(UsageError("invalid --repeats = 0: need at least one run".into()).into());
    }
    let overrides = TableOverrides {
        alphas: args.alphas.clone(),
        horizons: args.horizons.clone(),
        nodes: args.nodes.clone(),
        space_intervals: args.xnodes,
        reference_nodes: args.reference_nodes,
        repeats: args.repeats,
        cache: Some(
            args.cache
                .clone()
                .map_or_else(ReferenceCache::from_env, ReferenceCache::new),
        ),
        search: args.search,
    };
    let reports = run_table(table, &overrides).map_err(as_usage)?;

    let command = format!("bench {}", args.table);
    let mut w = output::open(args.out.as_deref(), &command, &args)?;
    if table == Table::T3 {
        write_comparison(&mut w, &reports)?;
    } else {
        write_reports(&mut w, &reports)?;
    }
    w.flush().context("writing CSV")?;
    Ok(())
}

fn write_reports(w: &mut output::Sink, reports: &[ErrorReport]) -> anyhow::Result<()> {
    w.write_record([
        "scheme",
        "strategy",
        "alpha",
        "T",
        "N",
        "M",
        "MRE",
        "MAE1",
        "rate",
        "wall_time",
        "node_count",
    ])?;
    for r in reports {
        w.write_record([
            r.scheme.clone(),
            r.strategy.clone(),
            num(r.alpha),
            num(r.horizon),
            r.n.to_string(),
            r.m.map(|m| m.to_string()).unwrap_or_default(),
            opt(r.mre),
            opt(r.mae1),
            opt(r.rate),
            num(r.wall_time),
            r.node_count.to_string(),
        ])?;
    }
    Ok(())
}

/// One row per (alpha, T): the S-FDM run next to the uniform run.
fn write_comparison(w: &mut output::Sink, reports: &[ErrorReport]) -> anyhow::Result<()> {
    w.write_record([
        "alpha",
        "T",
        "sfdm_nodes",
        "sfdm_MRE",
        "sfdm_wall_time",
        "uniform_nodes",
        "uniform_MRE",
        "uniform_wall_time",
        "wall_time_ratio",
    ])?;
    for pair in reports.chunks_exact(2) {
        let (s, u) = (&pair[0], &pair[1]);
        w.write_record([
            num(s.alpha),
            num(s.horizon),
            s.n.to_string(),
            opt(s.mre),
            num(s.wall_time),
            u.n.to_string(),
            opt(u.mre),
            num(u.wall_time),
            num(u.wall_time / s.wall_time),
        ])?;
    }
    Ok(())
}

fn mesh(args: MeshArgs) -> Outcome {
    let strategy = parse_strategy(&required(args.strategy.clone(), "strategy")?, args.alpha)?;
    let horizon = required(args.horizon, "T")?;
    let n = required(args.nodes, "nodes")?;
    let mesh = strategy.build(horizon, n).map_err(as_usage)?;

    let mut w = output::open(args.out.as_deref(), "mesh", &args)?;
    w.write_record(["k", "t", "step", "t_alpha"])
        .context("writing CSV")?;
    for (k, t) in mesh.nodes().iter().enumerate() {
        let step = if k == 0 { None } else { Some(mesh.step(k)) };
        let scaled = args.alpha.map(|a| t.powf(a));
        w.write_record([k.to_string(), num(*t), opt(step), opt(scaled)])
            .context("writing CSV")?;
    }
    w.flush().context("writing CSV")?;
    Ok(())
}
