//! Command implementations behind the `xyent` binary.
//!
//! Exit codes: 0 success, 2 input or validation failure, 3 numeric failure,
//! 4 steady-state methods disagree.

use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use xyent::analytic::{
    analytic_trajectory_gg_product, steady_concurrence_finite_t, steady_concurrence_t0,
    steady_state, vanishing_temperature,
};
use xyent::dynamics::{
    integrate, integrate_batch, max_stable_dt, relaxation_rate, steady_state_longtime, steady_state_nullspace,
    IntegratorConfig, SteadyStateMethod, Trajectory,
};
use xyent::entanglement::concurrence;
use xyent::io::{fmt_f64, push_rho_fields, read_density_matrix_file, rho_columns, write_trajectory_csv};
use xyent::model::{check_restrictions, DensityMatrix, InitialState, ModelParams};
use xyent::sweep::{run_sweep, Axis, SweepGrid, SweepResult};
use xyent::Error;

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_DISAGREEMENT: i32 = 4;

/// Largest accepted pairwise max-entry deviation between steady-state methods.
pub const CROSS_CHECK_TOL: f64 = 1e-6;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Numeric(_)
            | Error::NoConvergence { .. }
            | Error::Singular { .. }
            | Error::Multiplicity(_)
            | Error::NotFound(_) => EXIT_NUMERIC,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::input(format!("i/o error: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "xyent", version, about = "Entanglement dynamics of a dissipative two-qubit XY model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the master equation and write a trajectory CSV.
    Evolve(EvolveArgs),
    /// Compute the steady state by one or all methods.
    Steady(SteadyArgs),
    /// Tabulate the steady concurrence over a scaled parameter grid (gamma = 1).
    Sweep(SweepArgs),
    /// Write the CSV data behind the four standard figures.
    Figures(FiguresArgs),
}

/// Model parameters. Unset values default to ω = 1, J = 0.1, Δ = 0.1, γ = 0.3, n̄ = 0.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub j: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub nbar: Option<f64>,
    /// Read --omega and --delta as ω/γ and Δ/γ with γ = 1 and J = 0.
    #[arg(long)]
    pub scaled: bool,
}

impl ParamArgs {
    pub fn params(&self) -> CliResult<ModelParams> {
        let nbar = self.nbar.unwrap_or(0.0);
        if self.scaled {
            if self.gamma.is_some() || self.j.is_some() {
                return Err(CliError::input("--scaled fixes gamma = 1 and J = 0; drop --gamma and --j"));
            }
            let omega_bar = self.omega.unwrap_or(1.0);
            let delta_bar = self.delta.unwrap_or(1.0);
            return Ok(ModelParams::scaled(omega_bar, delta_bar, nbar)?);
        }
        Ok(ModelParams::new(
            self.omega.unwrap_or(1.0),
            self.j.unwrap_or(0.1),
            self.delta.unwrap_or(0.1),
            self.gamma.unwrap_or(0.3),
            nbar,
        )?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Named state (gg, bell_gg_ee, mixed_fig1) or path to a matrix file.
    #[arg(long, default_value = "gg")]
    pub initial: String,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Record every n-th step.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub allow_restricted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Analytic,
    Nullspace,
    Longtime,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Args)]
pub struct SteadyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Integration horizon for the long-time method (default 200/(γ(1+2n̄))).
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Output file (standard output if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub allow_restricted: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// `a:b:n,c:d:m[,e:f:k]` for ω̄, Δ̄ and optionally n̄; a single number fixes an axis.
    #[arg(long)]
    pub grid: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct FiguresArgs {
    #[arg(value_enum, default_value_t = Figure::All)]
    pub which: Figure,
    /// Output directory.
    #[arg(long, default_value = "figures")]
    pub out: PathBuf,
}

/// Resolved inputs for a trajectory run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams,
    pub initial: DensityMatrix,
    pub integrator: IntegratorConfig,
    pub output_path: PathBuf,
    pub enforce_restrictions: bool,
}

impl RunConfig {
    pub fn from_args(args: &EvolveArgs) -> CliResult<Self> {
        let params = args.params.params()?;
        let initial = resolve_initial(&args.initial)?;
        let dt = args.dt.unwrap_or_else(|| max_stable_dt(&params));
        let t_max = args.t_max.unwrap_or(30.0 / params.gamma);
        let integrator = IntegratorConfig::new(&params, dt, t_max, args.stride)?;
        Ok(Self {
            params,
            initial,
            integrator,
            output_path: args.out.clone(),
            enforce_restrictions: !args.allow_restricted,
        })
    }
}

/// A known state name, else a matrix file path.
pub fn resolve_initial(spec: &str) -> CliResult<DensityMatrix> {
    if let Ok(state) = spec.parse::<InitialState>() {
        return Ok(state.density_matrix());
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::input(format!(
            "initial state '{spec}' is neither a known name (gg, bell_gg_ee, mixed_fig1) nor an existing file"
        )));
    }
    read_density_matrix_file(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn enforce_restrictions(p: &ModelParams) -> CliResult<()> {
    let report = check_restrictions(p)?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::input(format!(
            "parameters violate the model restrictions: {report}; pass --allow-restricted to run anyway"
        )))
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

fn sink(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Summary of an `evolve` run.
#[derive(Debug, Clone)]
pub struct EvolveSummary {
    pub final_concurrence: f64,
    pub converged_at: Option<f64>,
    pub trajectory: Trajectory,
}

pub fn cmd_evolve(cfg: &RunConfig) -> CliResult<EvolveSummary> {
    if cfg.enforce_restrictions {
        enforce_restrictions(&cfg.params)?;
    }
    let traj = integrate(&cfg.params, &cfg.initial, &cfg.integrator)?;
    let mut w = create(&cfg.output_path)?;
    write_trajectory_csv(&mut w, &traj)?;
    w.flush()?;
    Ok(EvolveSummary {
        final_concurrence: traj.final_concurrence(),
        converged_at: traj.converged_at,
        trajectory: traj,
    })
}

/// One steady-state record.
#[derive(Debug, Clone)]
pub struct SteadyRecord {
    pub method: SteadyStateMethod,
    pub rho: DensityMatrix,
    pub c: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct SteadyReport {
    pub records: Vec<SteadyRecord>,
    /// Largest max-entry deviation between any two records (with more than one method).
    pub max_pairwise_deviation: Option<f64>,
}

impl SteadyReport {
    pub fn agrees(&self) -> bool {
        self.max_pairwise_deviation.map_or(true, |d| d <= CROSS_CHECK_TOL)
    }
}

/// Long-time integration settings: from `|gg⟩` up to `t_max` (default `200/Γ`, `Γ = γ(1 + 2n̄)`).
pub fn longtime_config(p: &ModelParams, t_max: Option<f64>, dt: Option<f64>) -> CliResult<IntegratorConfig> {
    let dt = dt.unwrap_or_else(|| max_stable_dt(p));
    let t_max = t_max.unwrap_or(200.0 / relaxation_rate(p));
    Ok(IntegratorConfig::new(p, dt, t_max, usize::MAX)?)
}

pub fn steady_records(
    p: &ModelParams,
    method: MethodArg,
    longtime: &IntegratorConfig,
) -> CliResult<SteadyReport> {
    let methods: &[SteadyStateMethod] = match method {
        MethodArg::Analytic => &[SteadyStateMethod::Analytic],
        MethodArg::Nullspace => &[SteadyStateMethod::Nullspace],
        MethodArg::Longtime => &[SteadyStateMethod::Longtime],
        MethodArg::All => &[
            SteadyStateMethod::Analytic,
            SteadyStateMethod::Nullspace,
            SteadyStateMethod::Longtime,
        ],
    };
    let mut records = Vec::with_capacity(methods.len());
    for &m in methods {
        let (rho, residual) = match m {
            SteadyStateMethod::Analytic => {
                let s = steady_state(p)?;
                (s.rho, s.residual)
            }
            SteadyStateMethod::Nullspace => {
                let s = steady_state_nullspace(p)?;
                (s.rho, s.residual)
            }
            SteadyStateMethod::Longtime => {
                let s = steady_state_longtime(p, &InitialState::Gg.density_matrix(), longtime)?;
                (s.rho, s.residual)
            }
        };
        records.push(SteadyRecord {
            method: m,
            c: concurrence(&rho)?.c,
            rho,
            residual,
        });
    }
    let max_pairwise_deviation = (records.len() > 1).then(|| {
        let mut worst = 0.0_f64;
        for (a, ra) in records.iter().enumerate() {
            for rb in &records[a + 1..] {
                worst = worst.max(ra.rho.max_abs_diff(&rb.rho));
            }
        }
        worst
    });
    Ok(SteadyReport {
        records,
        max_pairwise_deviation,
    })
}

pub fn steady_csv_header() -> String {
    let mut h = String::from("method,C,residual");
    for c in rho_columns() {
        h.push(',');
        h.push_str(&c);
    }
    h
}

pub fn write_steady<W: Write>(mut w: W, report: &SteadyReport, format: OutputFormat) -> io::Result<()> {
    match format {
        OutputFormat::Csv => {
            writeln!(w, "{}", steady_csv_header())?;
            for r in &report.records {
                let mut line = format!("{},{},{}", r.method, fmt_f64(r.c), fmt_f64(r.residual));
                push_rho_fields(&mut line, r.rho.matrix());
                writeln!(w, "{line}")?;
            }
            if let Some(d) = report.max_pairwise_deviation {
                writeln!(w, "# max_pairwise_deviation,{}", fmt_f64(d))?;
            }
        }
        OutputFormat::Jsonl => {
            for r in &report.records {
                let rho: Vec<[f64; 2]> = r.rho.matrix().as_slice().iter().map(|z| [z.re, z.im]).collect();
                let record = serde_json::json!({
                    "method": r.method.to_string(),
                    "C": r.c,
                    "residual": r.residual,
                    "rho": rho,
                });
                writeln!(w, "{record}")?;
            }
            if let Some(d) = report.max_pairwise_deviation {
                writeln!(w, "{}", serde_json::json!({ "max_pairwise_deviation": d }))?;
            }
        }
    }
    Ok(())
}

pub fn cmd_steady(args: &SteadyArgs) -> CliResult<SteadyReport> {
    let p = args.params.params()?;
    if !args.allow_restricted {
        enforce_restrictions(&p)?;
    }
    let longtime = longtime_config(&p, args.t_max, args.dt)?;
    let report = steady_records(&p, args.method, &longtime)?;
    let mut w = sink(args.out.as_deref())?;
    write_steady(&mut w, &report, args.format)?;
    w.flush()?;
    if !report.agrees() {
        return Err(CliError {
            code: EXIT_DISAGREEMENT,
            message: format!(
                "steady-state methods disagree: max pairwise deviation {:.3e} > {CROSS_CHECK_TOL:e}",
                report.max_pairwise_deviation.unwrap_or(f64::NAN)
            ),
        });
    }
    Ok(report)
}

fn parse_axis(spec: &str) -> CliResult<Axis> {
    let bad = || CliError::input(format!("bad axis '{spec}', expected start:stop:count or a single value"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(Axis::fixed(v.trim().parse().map_err(|_| bad())?)?),
        [a, b, n] => Ok(Axis::new(
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
            n.trim().parse().map_err(|_| bad())?,
        )?),
        _ => Err(bad()),
    }
}

/// Parses `a:b:n,c:d:m[,e:f:k]`.
pub fn parse_grid(spec: &str) -> CliResult<SweepGrid> {
    let axes = spec.split(',').map(parse_axis).collect::<CliResult<Vec<_>>>()?;
    match axes.as_slice() {
        [w, d] => Ok(SweepGrid {
            omega_bar_axis: *w,
            delta_bar_axis: *d,
            nbar_axis: None,
        }),
        [w, d, n] => Ok(SweepGrid {
            omega_bar_axis: *w,
            delta_bar_axis: *d,
            nbar_axis: Some(*n),
        }),
        _ => Err(CliError::input(format!(
            "grid '{spec}' needs two or three comma-separated axes"
        ))),
    }
}

/// Writes grid rows in row-major order, then the ridge summary for surfaces.
pub fn write_sweep<W: Write>(mut w: W, result: &SweepResult) -> io::Result<()> {
    let with_nbar = result.grid.nbar_axis.is_some();
    writeln!(w, "{}", if with_nbar { "omega_bar,delta_bar,nbar,C" } else { "omega_bar,delta_bar,C" })?;
    for p in &result.points {
        match p.nbar {
            Some(n) => writeln!(
                w,
                "{},{},{},{}",
                fmt_f64(p.omega_bar),
                fmt_f64(p.delta_bar),
                fmt_f64(n),
                fmt_f64(p.c)
            )?,
            None => writeln!(w, "{},{},{}", fmt_f64(p.omega_bar), fmt_f64(p.delta_bar), fmt_f64(p.c))?,
        }
    }
    if !with_nbar {
        writeln!(w, "# ridge summary")?;
        writeln!(w, "omega_bar,argmax_delta_bar,delta_bar_max_predicted,max_C")?;
        for r in &result.ridge {
            writeln!(
                w,
                "{},{},{},{}",
                fmt_f64(r.omega_bar),
                fmt_f64(r.argmax_delta_bar),
                fmt_f64(r.predicted_delta_bar),
                fmt_f64(r.max_c)
            )?;
        }
        let g = result.global_max;
        writeln!(
            w,
            "# global_max,{},{},{}",
            fmt_f64(g.omega_bar),
            fmt_f64(g.delta_bar),
            fmt_f64(g.c)
        )?;
        match result.best_restricted {
            Some(b) => writeln!(
                w,
                "# best_restricted,{},{},{}",
                fmt_f64(b.omega_bar),
                fmt_f64(b.delta_bar),
                fmt_f64(b.c)
            )?,
            None => writeln!(w, "# best_restricted,none")?,
        }
    }
    Ok(())
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<SweepResult> {
    let grid = parse_grid(&args.grid)?;
    let result = run_sweep(&grid);
    let mut w = sink(args.out.as_deref())?;
    write_sweep(&mut w, &result)?;
    w.flush()?;
    Ok(result)
}

/// Time step and record stride used for the trajectory figures.
pub const FIGURE_DT_GAMMA: f64 = 1e-3;
pub const FIGURE_STRIDE: usize = 100;
/// Trajectory figures span `γt ∈ [0, 10]`.
pub const FIGURE_GAMMA_T_MAX: f64 = 10.0;
/// Number of `n̄` samples in the temperature figure.
pub const FIG4_POINTS: usize = 241;

fn figure_trajectories(p: &ModelParams) -> CliResult<Vec<Trajectory>> {
    let jobs: Vec<(ModelParams, DensityMatrix)> = InitialState::ALL
        .iter()
        .map(|s| (*p, s.density_matrix()))
        .collect();
    integrate_batch(&jobs, |p| {
        IntegratorConfig::new(p, FIGURE_DT_GAMMA / p.gamma, FIGURE_GAMMA_T_MAX / p.gamma, FIGURE_STRIDE)
    })
    .into_iter()
    .map(|r| r.map_err(CliError::from))
    .collect()
}

fn write_trajectory_figure(name: &str, p: &ModelParams, dir: &Path) -> CliResult<Vec<PathBuf>> {
    let trajs = figure_trajectories(p)?;
    let mut written = Vec::new();
    for (state, traj) in InitialState::ALL.iter().zip(&trajs) {
        let path = dir.join(format!("{name}_{}.csv", state.name()));
        let mut w = create(&path)?;
        write_trajectory_csv(&mut w, traj)?;
        w.flush()?;
        written.push(path);
    }

    let path = dir.join(format!("{name}_summary.csv"));
    let mut w = create(&path)?;
    let mut header = String::from("gamma_t");
    for s in InitialState::ALL {
        header.push_str(",C_");
        header.push_str(s.name());
    }
    header.push_str(",C_gg_analytic");
    writeln!(w, "{header}")?;
    for (k, &t) in trajs[0].times.iter().enumerate() {
        let mut line = fmt_f64(t * p.gamma);
        for traj in &trajs {
            line.push(',');
            line.push_str(&fmt_f64(traj.concurrences[k]));
        }
        let exact = concurrence(&analytic_trajectory_gg_product(p, t)?)?.c;
        line.push(',');
        line.push_str(&fmt_f64(exact));
        writeln!(w, "{line}")?;
    }
    w.flush()?;
    written.push(path);
    Ok(written)
}

/// Rows `(n̄, C_fig1, C_fig2)` of the temperature figure.
pub fn fig4_rows() -> CliResult<Vec<[f64; 3]>> {
    let (p1, p2) = (ModelParams::figure1(), ModelParams::figure2());
    let n_max = 1.2 * vanishing_temperature(&p1)?.max(vanishing_temperature(&p2)?);
    let axis = Axis::new(0.0, n_max, FIG4_POINTS)?;
    axis.values()
        .map(|n| {
            let c1 = steady_concurrence_finite_t(&p1.with_nbar(n)?);
            let c2 = steady_concurrence_finite_t(&p2.with_nbar(n)?);
            Ok([n, c1, c2])
        })
        .collect()
}

/// Writes the requested figure data into `dir`; returns the files written.
pub fn cmd_figures(which: Figure, dir: &Path) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let all = which == Figure::All;
    if all || which == Figure::Fig1 {
        written.extend(write_trajectory_figure("fig1", &ModelParams::figure1(), dir)?);
    }
    if all || which == Figure::Fig2 {
        written.extend(write_trajectory_figure("fig2", &ModelParams::figure2(), dir)?);
    }
    if all || which == Figure::Fig3 {
        let path = dir.join("fig3.csv");
        let mut w = create(&path)?;
        write_sweep(&mut w, &run_sweep(&SweepGrid::standard_surface()))?;
        w.flush()?;
        written.push(path);
    }
    if all || which == Figure::Fig4 {
        let path = dir.join("fig4.csv");
        let mut w = create(&path)?;
        writeln!(w, "nbar,C_fig1,C_fig2")?;
        for [n, c1, c2] in fig4_rows()? {
            writeln!(w, "{},{},{}", fmt_f64(n), fmt_f64(c1), fmt_f64(c2))?;
        }
        w.flush()?;
        written.push(path);
    }
    Ok(written)
}

/// Zero-temperature steady concurrences of the two trajectory figures.
pub fn figure_steady_values() -> CliResult<(f64, f64)> {
    Ok((
        steady_concurrence_t0(&ModelParams::figure1())?,
        steady_concurrence_t0(&ModelParams::figure2())?,
    ))
}

/// Runs a parsed command line, printing human-readable summaries to stdout.
pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Evolve(args) => {
            let cfg = RunConfig::from_args(&args)?;
            let summary = cmd_evolve(&cfg)?;
            println!("final C = {}", fmt_f64(summary.final_concurrence));
            match summary.converged_at {
                Some(t) => println!(
                    "converged at t = {} (gamma t = {})",
                    fmt_f64(t),
                    fmt_f64(t * cfg.params.gamma)
                ),
                None => println!("not converged by t = {}", fmt_f64(cfg.integrator.t_max)),
            }
        }
        Command::Steady(args) => {
            cmd_steady(&args)?;
        }
        Command::Sweep(args) => {
            cmd_sweep(&args)?;
        }
        Command::Figures(args) => {
            for path in cmd_figures(args.which, &args.out)? {
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => EXIT_SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parsing() {
        let g = parse_grid("0:5:400,0:3:400").unwrap();
        assert_eq!(g.omega_bar_axis.count, 400);
        assert!(g.nbar_axis.is_none());
        let g = parse_grid("2.1834,1,0:0.5:11").unwrap();
        assert_eq!(g.omega_bar_axis.count, 1);
        assert_eq!(g.nbar_axis.unwrap().count, 11);
        assert_eq!(parse_grid("0:5:400").unwrap_err().code, EXIT_INPUT);
        assert_eq!(parse_grid("0:5:1,0:1:3").unwrap_err().code, EXIT_INPUT);
        assert_eq!(parse_grid("a:b:c,0:1:3").unwrap_err().code, EXIT_INPUT);
    }

    #[test]
    fn scaled_params() {
        let args = ParamArgs {
            omega: Some(2.0),
            j: None,
            delta: Some(0.5),
            gamma: None,
            nbar: None,
            scaled: true,
        };
        let p = args.params().unwrap();
        assert_eq!((p.omega, p.j, p.delta, p.gamma), (2.0, 0.0, 0.5, 1.0));
        let clash = ParamArgs {
            gamma: Some(0.3),
            ..args
        };
        assert_eq!(clash.params().unwrap_err().code, EXIT_INPUT);
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::Numeric("x".into())).code, EXIT_NUMERIC);
        assert_eq!(CliError::from(Error::Domain("x".into())).code, EXIT_INPUT);
    }

    #[test]
    fn unknown_initial_state() {
        assert_eq!(resolve_initial("no_such_state").unwrap_err().code, EXIT_INPUT);
    }
}
