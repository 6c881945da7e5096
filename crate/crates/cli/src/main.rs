//! `ssl`: Neumann eigenvalues, bounds and shape optimization for convex
//! planar bodies.

mod shape;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use spectral_shape::bounds::{bounds_report, DEFAULT_C};
use spectral_shape::constraints::{ProblemKind, Strategy};
use spectral_shape::eigen::{mesh_shape, neumann_spectrum, EvalOptions};
use spectral_shape::families::{scan_family, Family, ScanOptions};
use spectral_shape::optimize::{solve_exterior, solve_interior, OptimizeOptions};
use spectral_shape::par::ExecMode;
use spectral_shape::report::{overlay, svg, Layer};
use spectral_shape::scheme::{run_scheme, SchemeOptions};
use spectral_shape::self_domain::{self_domain_check, SelfDomainOptions};
use spectral_shape::support::SupportFunction;

/// Version of the config and report schema.
const CONFIG_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "ssl", version, about = "Neumann eigenvalue shape optimization for convex planar bodies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Directory for the JSON report and any CSV/SVG/mesh files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the JSON report on stdout instead of a table.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Neumann eigenvalues mu_0..mu_k of a shape.
    Eig(EigArgs),
    /// Certified bounds on mu_k and the inequality checks.
    Bounds(BoundsArgs),
    /// Minimize (interior) or maximize (exterior) mu_k around a shape.
    Optimize(OptimizeArgs),
    /// mu_k along a one-parameter family.
    Scan(ScanArgs),
    /// Alternate interior and exterior optimization.
    Iterate(IterateArgs),
    /// Necessary conditions for a shape to be its own optimizer.
    SelfDomain(SelfDomainArgs),
    /// Re-run the command recorded in a config or report file.
    #[serde(skip)]
    Run { file: PathBuf },
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct MeshArgs {
    /// Element size is diam / h-factor.
    #[arg(long, default_value_t = 60.0)]
    h_factor: f64,
    /// Uniform refinements after meshing.
    #[arg(long, default_value_t = 0)]
    refine: usize,
    /// Halfplanes used to realize Fourier shapes.
    #[arg(long, default_value_t = 256)]
    m_out: usize,
    /// Mesh bodies thinner than the collapse threshold.
    #[arg(long)]
    allow_thin: bool,
}

impl MeshArgs {
    fn eval(&self) -> EvalOptions {
        EvalOptions { m_out: self.m_out, h_factor: self.h_factor, refine: self.refine, allow_thin: self.allow_thin }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct EigArgs {
    #[arg(required = true, num_args = 1.., allow_negative_numbers = true, help = shape::USAGE)]
    shape: Vec<String>,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[command(flatten)]
    #[serde(flatten)]
    mesh: MeshArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct BoundsArgs {
    #[arg(required = true, num_args = 1.., allow_negative_numbers = true, help = shape::USAGE)]
    shape: Vec<String>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Constant of the improved Payne-Weinberger inequality.
    #[arg(long, default_value_t = DEFAULT_C)]
    c: f64,
    /// Skip the FEM spectrum and the checks that need it.
    #[arg(long)]
    no_fem: bool,
    #[command(flatten)]
    #[serde(flatten)]
    mesh: MeshArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Interior,
    Exterior,
}

impl From<Mode> for ProblemKind {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Interior => ProblemKind::Interior,
            Mode::Exterior => ProblemKind::Exterior,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct SolverArgs {
    /// fourier:N (2N+1 coefficients), fourier-coeffs:D, or pwa:M.
    #[arg(long, default_value = "pwa:50")]
    strategy: String,
    #[arg(long, default_value_t = 8)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 150)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-5)]
    tol_opt: f64,
    /// Mesh size diam / h-factor during descent.
    #[arg(long, default_value_t = 40.0)]
    h_factor: f64,
    /// Mesh size diam / final-h-factor for the reported values.
    #[arg(long, default_value_t = 80.0)]
    final_h_factor: f64,
    /// Constraint angles for the Fourier strategy.
    #[arg(long, default_value_t = 256)]
    samples: usize,
    #[arg(long, default_value_t = 256)]
    m_out: usize,
    /// Run starts and gradient evaluations on one thread.
    #[arg(long)]
    sequential: bool,
}

impl SolverArgs {
    fn strategy(&self) -> spectral_shape::Result<Strategy> {
        Strategy::parse(&self.strategy)
    }

    fn options(&self, starts: usize) -> OptimizeOptions {
        OptimizeOptions {
            starts,
            seed: self.seed,
            max_iter: self.max_iter,
            tol_opt: self.tol_opt,
            h_factor: self.h_factor,
            final_h_factor: self.final_h_factor,
            m_out: self.m_out,
            samples: self.samples,
            exec: if self.sequential { ExecMode::Sequential } else { ExecMode::Parallel },
            ..Default::default()
        }
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct OptimizeArgs {
    #[arg(value_enum)]
    mode: Mode,
    /// Box (interior) or obstacle (exterior).
    #[arg(required = true, num_args = 1.., allow_negative_numbers = true, help = shape::USAGE)]
    shape: Vec<String>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct ScanArgs {
    /// disk-square-intersection, hull-disk-points[:n] or hull-square-points.
    family: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Number of grid points.
    #[arg(long, default_value_t = 50)]
    grid: usize,
    /// Start of the parameter range (default: the family's range).
    #[arg(long, allow_negative_numbers = true)]
    from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    to: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    mesh: MeshArgs,
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct IterateArgs {
    #[arg(required = true, num_args = 1.., allow_negative_numbers = true, help = shape::USAGE)]
    shape: Vec<String>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Number of interior stages.
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// Starts per stage, counting the warm start.
    #[arg(long = "stage-starts", default_value_t = 2)]
    stage_starts: usize,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
struct SelfDomainArgs {
    #[arg(required = true, num_args = 1.., allow_negative_numbers = true, help = shape::USAGE)]
    shape: Vec<String>,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Mode::Interior)]
    mode: Mode,
    /// Also run a local optimization looking for a better competitor.
    #[arg(long)]
    probe: bool,
    #[command(flatten)]
    #[serde(flatten)]
    solver: SolverArgs,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RunConfig {
    version: u32,
    #[serde(flatten)]
    command: Command,
}

/// What a command produced: the JSON report, a table for the terminal, extra
/// files, and an error that ended the run after partial results.
struct Outcome {
    report: Value,
    table: String,
    files: Vec<(String, String)>,
    partial_error: Option<spectral_shape::Error>,
}

impl Outcome {
    fn new(report: Value, table: String) -> Self {
        Self { report, table, files: Vec::new(), partial_error: None }
    }

    fn file(mut self, name: &str, contents: String) -> Self {
        self.files.push((name.to_string(), contents));
        self
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn shape_svg(reference: &SupportFunction, candidate: Option<&SupportFunction>, m_out: usize, title: &str) -> anyhow::Result<String> {
    let r = reference.reconstruct_polygon(m_out)?;
    Ok(match candidate {
        Some(c) => overlay(&r, &c.reconstruct_polygon(m_out)?, title),
        None => svg(&[Layer::filled(&r, "#1f77b4")], title),
    })
}

fn eig(a: &EigArgs) -> anyhow::Result<Outcome> {
    let shape = shape::parse(&a.shape)?;
    let mesh = mesh_shape(&shape, &a.mesh.eval())?;
    let spectrum = neumann_spectrum(&mesh, a.k)?;
    let mut table = format!("{:>4}  {:>16}\n", "k", "mu_k");
    for (k, v) in spectrum.values.iter().enumerate() {
        let mark = if k > 0 && spectrum.is_multiple(k) { "  (multiple)" } else { "" };
        table.push_str(&format!("{k:>4}  {v:>16.8}{mark}\n"));
    }
    table.push_str(&format!("nodes {}, triangles {}, h {:.4e}\n", mesh.n_nodes(), mesh.n_triangles(), spectrum.mesh_h));
    let report = json!({ "spectrum": spectrum.to_json(Some(&mesh)) });
    Ok(Outcome::new(report, table)
        .file("spectrum.csv", spectrum.to_csv())
        .file("mesh.txt", mesh.to_text())
        .file("shape.svg", shape_svg(&shape, None, a.mesh.m_out, &a.shape.join(" "))?))
}

fn bounds(a: &BoundsArgs) -> anyhow::Result<Outcome> {
    let shape = shape::parse(&a.shape)?;
    let spectrum = if a.no_fem {
        None
    } else {
        Some(neumann_spectrum(&mesh_shape(&shape, &a.mesh.eval())?, a.k.max(1))?)
    };
    let r = bounds_report(&a.shape.join(" "), &shape, a.k, a.c, spectrum.as_ref())?;
    let mut table = format!("k = {}, C = {}\n", r.k, r.c);
    for (name, v) in [
        ("payne-weinberger lower (k=1)", r.pw_lower),
        ("C_k / diam^2 lower", r.c_k_lower),
        ("buser grid lower", r.buser_lower),
        ("diameter upper", r.diam_upper),
        ("k0 bound", r.k0_bound),
    ] {
        table.push_str(&format!("{name:<30} {v:>14.6}\n"));
    }
    if let Some(mu) = r.mu_fem {
        table.push_str(&format!("{:<30} {mu:>14.6}\n", "mu_k (FEM)"));
    }
    for c in &r.inequality_checks {
        table.push_str(&format!("{:<30} {:>14.6} <= {:<14.6} {}\n", c.name, c.lhs, c.rhs, if c.pass { "ok" } else { "VIOLATED" }));
    }
    Ok(Outcome::new(json!({ "bounds": to_value(&r) }), table))
}

fn optimize(a: &OptimizeArgs) -> anyhow::Result<Outcome> {
    let reference = shape::parse(&a.shape)?;
    let strategy = a.solver.strategy()?;
    let opts = a.solver.options(a.solver.starts);
    let r = match a.mode {
        Mode::Interior => solve_interior(&reference, a.k, strategy, &opts)?,
        Mode::Exterior => solve_exterior(&reference, a.k, strategy, &opts)?,
    };
    let mut table = format!("{} optimization, k = {}, strategy {}\n", ProblemKind::from(a.mode), a.k, strategy);
    table.push_str(&format!("mu_k = {:.8} (start {} of {})\n", r.objective, r.best_start, r.starts_used));
    table.push_str(&format!("min width {:.4e}, feasibility residual {:.2e}\n", r.min_width, r.feasibility_residual));
    for (i, v) in r.start_objectives.iter().enumerate() {
        match v {
            Some(v) => table.push_str(&format!("  start {i:>2}: {v:.8}\n")),
            None => table.push_str(&format!("  start {i:>2}: failed\n")),
        }
    }
    let title = format!("{} k={} mu_k={:.5}", ProblemKind::from(a.mode), a.k, r.objective);
    let svg = shape_svg(&reference, Some(&r.shape), a.solver.m_out, &title)?;
    let shape_json = r.shape.to_json(json!({ "objective": r.objective, "k": a.k }))?;
    Ok(Outcome::new(json!({ "optimization": r.to_json(&Value::Null) }), table)
        .file("trace.csv", r.trace_csv())
        .file("shape.svg", svg)
        .file("shape.json", shape_json))
}

fn scan(a: &ScanArgs) -> anyhow::Result<Outcome> {
    let family: Family = a.family.parse()?;
    let (lo, hi) = family.range();
    let (lo, hi) = (a.from.unwrap_or(lo), a.to.unwrap_or(hi));
    let n = a.grid.max(1);
    let grid: Vec<f64> = if n == 1 { vec![lo] } else { (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect() };
    let opts = ScanOptions {
        eval: a.mesh.eval(),
        exec: if a.sequential { ExecMode::Sequential } else { ExecMode::Parallel },
        ..Default::default()
    };
    let r = scan_family(family, a.k, &grid, &opts)?;
    let mut table = format!("{family}, k = {}, {:?}\n", a.k, r.goal);
    for (p, v) in &r.values {
        match v {
            Some(v) => table.push_str(&format!("{p:>12.6}  {v:>14.8}\n")),
            None => table.push_str(&format!("{p:>12.6}  {:>14}\n", "failed")),
        }
    }
    table.push_str(&format!("best: param {:.6}, mu_k {:.8}\n", r.best_param, r.best_value));
    let best = family.shape(r.best_param)?;
    let title = format!("{family} param={:.4}", r.best_param);
    Ok(Outcome::new(json!({ "scan": to_value(&r) }), table)
        .file("scan.csv", r.to_csv())
        .file("best.svg", shape_svg(&best, None, a.mesh.m_out, &title)?))
}

fn iterate(a: &IterateArgs) -> anyhow::Result<Outcome> {
    let d1 = shape::parse(&a.shape)?;
    let opts = SchemeOptions { strategy: a.solver.strategy()?, optimize: a.solver.options(a.stage_starts), ..Default::default() };
    let trace = run_scheme(&d1, a.k, a.n, &opts)?;
    let mut table = format!("{:>3}  {:>14}  {:>14}  {:>10}  {:>10}\n", "n", "mu_k(Omega)", "mu_k(D)", "J_k", "width(D)");
    for s in &trace.steps {
        table.push_str(&format!("{:>3}  {:>14.8}  {:>14.8}  {:>10.6}  {:>10.4e}\n", s.n, s.mu_omega, s.mu_d, s.j, s.min_width_d));
    }
    table.push_str(&format!("status {:?}\n", trace.status));
    if let Some(e) = &trace.error {
        table.push_str(&format!("stopped: {e}\n"));
    }
    let mut out = Outcome::new(json!({ "scheme": to_value(&trace) }), table).file("scheme.csv", trace.to_csv());
    for s in &trace.steps {
        let title = format!("n={} J={:.5}", s.n, s.j);
        out = out.file(&format!("iter_{:02}.svg", s.n), shape_svg(&s.d, Some(&s.omega), a.solver.m_out, &title)?);
    }
    if let Some(e) = &trace.error {
        out.partial_error = Some(spectral_shape::Error::SolverDivergence(e.clone()));
    }
    Ok(out)
}

fn self_domain(a: &SelfDomainArgs) -> anyhow::Result<Outcome> {
    let shape = shape::parse(&a.shape)?;
    let probe = if a.probe { Some((a.solver.strategy()?, a.solver.options(a.solver.starts))) } else { None };
    let eval = EvalOptions { m_out: a.solver.m_out, h_factor: a.solver.final_h_factor, refine: 0, allow_thin: false };
    let opts = SelfDomainOptions { eval, probe, ..Default::default() };
    let r = self_domain_check(&shape, a.k, a.mode.into(), &opts)?;
    let table = format!("{} k={} {}: {}\n", a.shape.join(" "), a.k, ProblemKind::from(a.mode), r.summary());
    Ok(Outcome::new(json!({ "self_domain": to_value(&r) }), table))
}

fn load_config(path: &Path) -> anyhow::Result<RunConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(c) = v.get_mut("config") {
        v = c.take();
    }
    let cfg: RunConfig = serde_json::from_value(v).context("not a run config")?;
    if cfg.version != CONFIG_VERSION {
        bail!("config version {} is not supported (expected {CONFIG_VERSION})", cfg.version);
    }
    Ok(cfg)
}

fn dispatch(command: &Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Eig(a) => eig(a),
        Command::Bounds(a) => bounds(a),
        Command::Optimize(a) => optimize(a),
        Command::Scan(a) => scan(a),
        Command::Iterate(a) => iterate(a),
        Command::SelfDomain(a) => self_domain(a),
        Command::Run { .. } => bail!("run files cannot nest"),
    }
}

fn write_outputs(dir: &Path, report: &Value, files: &[(String, String)]) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    fs::write(dir.join("report.json"), serde_json::to_string_pretty(report)? + "\n")?;
    for (name, contents) in files {
        fs::write(dir.join(name), contents).with_context(|| format!("writing {name}"))?;
    }
    Ok(())
}

/// Exit codes: 2 for geometry errors, 3 for solver errors, 1 otherwise.
fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<spectral_shape::Error>() {
        Some(e) if e.is_geometric() => 2,
        Some(_) => 3,
        None => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<Option<spectral_shape::Error>> {
    let command = match cli.command {
        Command::Run { file } => load_config(&file)?.command,
        c => c,
    };
    let config = RunConfig { version: CONFIG_VERSION, command };
    let outcome = dispatch(&config.command)?;
    let mut report = json!({ "version": CONFIG_VERSION, "config": to_value(&config) });
    if let (Value::Object(r), Value::Object(o)) = (&mut report, outcome.report) {
        r.extend(o);
    }
    if let Some(e) = &outcome.partial_error {
        report["error"] = Value::String(e.to_string());
    }
    if let Some(dir) = &cli.out {
        write_outputs(dir, &report, &outcome.files)?;
    }
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", outcome.table);
    }
    Ok(outcome.partial_error)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&anyhow::Error::new(e)))
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
