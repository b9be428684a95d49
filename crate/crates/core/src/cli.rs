//! Command-line front end. The `bordered-flow` binary is a thin wrapper
//! around [`run`], which keeps every subcommand testable in-process.
//!
//! Exit codes: 0 success, 1 numeric or convergence failure, 2 usage or
//! parse failure.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::conformal::{BaseMetric, Surface};
use crate::error::Error;
use crate::flows::{decay_rate, integrate, vector_field, FlowKind, FlowSpec, FlowStatus, Trajectory};
use crate::io::{
    load_metric, parse_list, parse_mesh, read_to_string, trajectory_to_csv, version, write_string, FlowParameters,
    FlowReport, SolveFileReport,
};
use crate::newton::{solve_prescribed, NewtonOptions};
use crate::random::{random_instance, rng_from_seed};
use crate::triangulation::IdealTriangulation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "bordered-flow", version = version(), about = "Prescribe boundary lengths of hyperbolic bordered surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a mesh file and print its combinatorics.
    Validate {
        #[arg(long)]
        mesh: PathBuf,
    },
    /// Integrate a flow and write its trajectory.
    Flow(FlowArgs),
    /// Solve B(w) = targets directly by damped Newton.
    Solve(SolveArgs),
    /// Run several flow variants from one start and tabulate their decay.
    Compare(CompareArgs),
}

#[derive(Debug, Args, Clone)]
pub struct InstanceArgs {
    /// Mesh JSON. Without it, `--seed` generates a random instance.
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    /// Per-edge base lengths (JSON array). Defaults to 2·arccosh(2) on every edge.
    #[arg(long)]
    pub metric: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Boundary cap for random instances.
    #[arg(long, default_value_t = 6)]
    pub max_boundaries: usize,
    /// Initial conformal factor, comma separated. Defaults to 0.
    #[arg(long, allow_hyphen_values = true)]
    pub w0: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Guo,
    FractionalCalabi,
    GeneralizedYamabe,
}

#[derive(Debug, Args, Clone)]
pub struct IntegratorArgs {
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long = "t-max", default_value_t = 1e4)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub safety: f64,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Fractional Calabi exponent (default 0).
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    /// Generalized Yamabe exponent in [0, 2) (default 0).
    #[arg(long)]
    pub p: Option<f64>,
    /// Target lengths: comma-separated list or a JSON array file.
    #[arg(long)]
    pub targets: Option<String>,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    #[arg(long = "out-csv")]
    pub out_csv: Option<PathBuf>,
    #[arg(long = "out-json")]
    pub out_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long)]
    pub targets: Option<String>,
    /// Plant a solution: targets := B(w_planted). Overrides `--targets`.
    #[arg(long, allow_hyphen_values = true)]
    pub plant: Option<String>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long = "out-json")]
    pub out_json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    /// Fractional Calabi exponents, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
    /// Generalized Yamabe exponents, comma separated.
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub targets: Option<String>,
    #[command(flatten)]
    pub integrator: IntegratorArgs,
    #[arg(long = "out-csv")]
    pub out_csv: Option<PathBuf>,
}

struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::InvalidParameter(_) | Error::DimensionMismatch { .. } | Error::Io { .. } => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

/// Parse `args` (including the program name) and run the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    match cli.command {
        Command::Validate { mesh } => cmd_validate(&mesh, out, err),
        Command::Flow(a) => cmd_flow(&a, out, err),
        Command::Solve(a) => cmd_solve(&a, out, err),
        Command::Compare(a) => cmd_compare(&a, out, err),
    }
}

pub fn cmd_validate(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match parse_mesh(&text) {
        Ok(t) => {
            let _ = writeln!(out, "boundaries n = {}", t.n_boundaries());
            let _ = writeln!(out, "edges |E| = {}", t.n_edges());
            let _ = writeln!(out, "faces |F| = {}", t.n_faces());
            let _ = writeln!(out, "euler characteristic = {}", t.euler_characteristic());
            let _ = writeln!(out, "3|F| = 2|E|: pass");
            let _ = writeln!(out, "each edge on two face sides: pass");
            let _ = writeln!(out, "corner labels match edge endpoints: pass");
            let _ = writeln!(out, "every boundary has a corner: pass");
            let _ = writeln!(out, "negative euler characteristic: pass");
            EXIT_OK
        }
        Err(e @ Error::MalformedMesh { .. }) => {
            let _ = writeln!(out, "invalid: {e}");
            EXIT_NUMERIC
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

struct Loaded {
    surface: Surface,
    w0: Vec<f64>,
    seed: Option<u64>,
}

fn load_instance(a: &InstanceArgs) -> Result<Loaded, Usage> {
    let surface = match (&a.mesh, a.seed) {
        (Some(path), _) => {
            let mesh: IdealTriangulation = parse_mesh(&read_to_string(path)?)?;
            let metric = match &a.metric {
                Some(p) => load_metric(p)?,
                None => BaseMetric::uniform(mesh.n_edges(), 2.0 * 2f64.acosh())?,
            };
            Surface::new(mesh, metric)?
        }
        (None, Some(seed)) => {
            if a.metric.is_some() {
                return Err(Usage("--metric needs --mesh".into()));
            }
            random_instance(&mut rng_from_seed(seed), a.max_boundaries, 2 * a.max_boundaries + 2)?.surface
        }
        (None, None) => return Err(Usage("either --mesh or --seed is required".into())),
    };
    let w0 = match &a.w0 {
        Some(s) => parse_list(s)?,
        None => vec![0.0; surface.n_boundaries()],
    };
    surface.check_factor(&w0)?;
    if !surface.is_admissible(&w0) {
        return Err(Usage("--w0 is not an admissible conformal factor".into()));
    }
    Ok(Loaded {
        surface,
        w0,
        seed: a.seed,
    })
}

fn load_targets(spec: &str, n: usize) -> Result<Vec<f64>, Usage> {
    let values = match parse_list(spec) {
        Ok(v) => v,
        Err(_) if Path::new(spec).exists() => serde_json::from_str(&read_to_string(Path::new(spec))?)
            .map_err(|e| Usage(format!("targets file: {e}")))?,
        Err(e) => return Err(e.into()),
    };
    if values.len() != n {
        return Err(Usage(format!("expected {n} targets, got {}", values.len())));
    }
    if let Some(t) = values.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
        return Err(Usage(format!("targets must be positive, got {t}")));
    }
    Ok(values)
}

fn flow_kind(a: &FlowArgs) -> Result<FlowKind, Usage> {
    match a.kind {
        KindArg::Guo if a.s.is_some() || a.p.is_some() => Err(Usage("--s/--p are not used by the guo flow".into())),
        KindArg::FractionalCalabi if a.p.is_some() => Err(Usage("--p only applies to generalized-yamabe".into())),
        KindArg::GeneralizedYamabe if a.s.is_some() => Err(Usage("--s only applies to fractional-calabi".into())),
        KindArg::Guo => Ok(FlowKind::Guo),
        KindArg::FractionalCalabi => Ok(FlowKind::FractionalCalabi { s: a.s.unwrap_or(0.0) }),
        KindArg::GeneralizedYamabe => Ok(FlowKind::GeneralizedYamabe { p: a.p.unwrap_or(0.0) }),
    }
}

fn apply_integrator(spec: &mut FlowSpec, a: &IntegratorArgs) {
    spec.step = a.step;
    spec.tol = a.tol;
    spec.t_max = a.t_max;
    spec.safety = a.safety;
}

fn status_name(s: FlowStatus) -> &'static str {
    match s {
        FlowStatus::Converged => "converged",
        FlowStatus::TimeBudgetExhausted => "time-budget-exhausted",
        FlowStatus::GuardTriggered => "guard-triggered",
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

pub fn cmd_flow(a: &FlowArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let setup = (|| -> Result<(Loaded, FlowSpec), Usage> {
        let kind = flow_kind(a)?;
        let loaded = load_instance(&a.instance)?;
        let n = loaded.surface.n_boundaries();
        let targets = match (kind, &a.targets) {
            (FlowKind::Guo, Some(_)) => return Err(Usage("--targets is not used by the guo flow".into())),
            (FlowKind::Guo, None) => vec![0.0; n],
            (_, Some(t)) => load_targets(t, n)?,
            (_, None) => return Err(Usage("--targets is required for this flow".into())),
        };
        let mut spec = FlowSpec::new(kind, targets);
        apply_integrator(&mut spec, &a.integrator);
        spec.validate(&loaded.surface)?;
        Ok((loaded, spec))
    })();
    let (loaded, mut spec) = match setup {
        Ok(x) => x,
        Err(Usage(m)) => {
            let _ = writeln!(err, "usage error: {m}");
            return EXIT_USAGE;
        }
    };

    let started = Instant::now();
    let newton_w_star = if spec.kind.uses_targets() {
        solve_prescribed(&loaded.surface, &spec.targets, &vec![0.0; spec.targets.len()], &NewtonOptions::default())
            .ok()
            .map(|r| r.w_star)
    } else {
        None
    };
    spec.w_star = newton_w_star.clone();

    let (traj, collapse): (Trajectory, Option<String>) = match integrate(&loaded.surface, &loaded.w0, &spec) {
        Ok(t) => (t, None),
        Err(Error::StepCollapse { t, h, partial }) => (*partial, Some(format!("step collapsed to {h:e} at t = {t}"))),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let fit = decay_rate(&traj).ok();
    let last = traj.last();
    let report = FlowReport {
        flow_kind: spec.kind.name().to_string(),
        parameters: FlowParameters {
            kind: spec.kind,
            targets: spec.targets.clone(),
            w0: loaded.w0.clone(),
            step: spec.step,
            tol: spec.tol,
            t_max: spec.t_max,
            safety: spec.safety,
        },
        status: if collapse.is_some() {
            "step-collapse".into()
        } else {
            status_name(traj.status).into()
        },
        final_residual: last.residual,
        final_time: last.t,
        final_w: last.w.clone(),
        final_boundary: last.boundary.clone(),
        accepted_steps: traj.accepted_steps,
        rejected_steps: traj.rejected_steps,
        decay_rate: fit.map(|f| f.rate),
        decay_r_squared: fit.map(|f| f.r_squared),
        newton_w_star,
        guard_reason: collapse.or_else(|| traj.guard_reason.clone()),
        wall_time_s: started.elapsed().as_secs_f64(),
        seed: loaded.seed,
        version: version().to_string(),
    };

    if let Some(p) = &a.out_csv {
        if let Err(e) = write_string(p, &trajectory_to_csv(&traj)) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    }
    let json = to_json(&report);
    match &a.out_json {
        Some(p) => {
            if let Err(e) = write_string(p, &json) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            let _ = writeln!(
                out,
                "{}: {} after {} steps, t = {}, residual = {:e}",
                report.flow_kind, report.status, report.accepted_steps, report.final_time, report.final_residual
            );
        }
        None => {
            let _ = writeln!(out, "{json}");
        }
    }
    if report.status == "converged" {
        EXIT_OK
    } else {
        EXIT_NUMERIC
    }
}

pub fn cmd_solve(a: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let setup = (|| -> Result<(Loaded, Vec<f64>), Usage> {
        let loaded = load_instance(&a.instance)?;
        let n = loaded.surface.n_boundaries();
        let targets = match (&a.plant, &a.targets) {
            (Some(p), _) => {
                let planted = parse_list(p)?;
                loaded.surface.check_factor(&planted)?;
                if !loaded.surface.is_admissible(&planted) {
                    return Err(Usage("--plant is not admissible".into()));
                }
                loaded.surface.boundary_lengths(&planted)?.into_vec()
            }
            (None, Some(t)) => load_targets(t, n)?,
            (None, None) => return Err(Usage("--targets or --plant is required".into())),
        };
        if !(a.tol.is_finite() && a.tol > 0.0) {
            return Err(Usage(format!("--tol must be positive, got {}", a.tol)));
        }
        Ok((loaded, targets))
    })();
    let (loaded, targets) = match setup {
        Ok(x) => x,
        Err(Usage(m)) => {
            let _ = writeln!(err, "usage error: {m}");
            return EXIT_USAGE;
        }
    };
    let started = Instant::now();
    let opts = NewtonOptions {
        tol: a.tol,
        ..NewtonOptions::default()
    };
    let result = solve_prescribed(&loaded.surface, &targets, &loaded.w0, &opts);
    let (code, report, error) = match result {
        Ok(r) => (EXIT_OK, Some(r), None),
        Err(e) => (exit_code(&e), None, Some(e.to_string())),
    };
    let file = SolveFileReport {
        status: if code == EXIT_OK { "converged".into() } else { "failed".into() },
        targets,
        w_init: loaded.w0,
        tol: a.tol,
        report,
        error,
        wall_time_s: started.elapsed().as_secs_f64(),
        seed: loaded.seed,
        version: version().to_string(),
    };
    let json = to_json(&file);
    match &a.out_json {
        Some(p) => {
            if let Err(e) = write_string(p, &json) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            let _ = writeln!(out, "solve: {}", file.status);
        }
        None => {
            let _ = writeln!(out, "{json}");
        }
    }
    code
}

#[derive(Debug, Clone)]
pub struct CompareRow {
    pub kind: FlowKind,
    pub status: String,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub final_time: f64,
    pub decay_rate: Option<f64>,
    pub r_squared: Option<f64>,
    pub initial_speed: f64,
    pub deviation: f64,
}

pub const COMPARE_HEADER: &str =
    "variant,parameter,status,accepted_steps,rejected_steps,final_time,decay_rate,r_squared,initial_speed,max_dev_from_newton";

impl CompareRow {
    pub fn to_csv(&self) -> String {
        let (name, param) = match self.kind {
            FlowKind::FractionalCalabi { s } => ("fractional-calabi", s),
            FlowKind::GeneralizedYamabe { p } => ("generalized-yamabe", p),
            FlowKind::Guo => ("guo", f64::NAN),
        };
        let opt = |x: Option<f64>| x.map_or_else(String::new, |v| format!("{v:.16e}"));
        format!(
            "{name},{param},{},{},{},{:.16e},{},{},{:.16e},{:.16e}",
            self.status,
            self.accepted_steps,
            self.rejected_steps,
            self.final_time,
            opt(self.decay_rate),
            opt(self.r_squared),
            self.initial_speed,
            self.deviation
        )
    }
}

/// Tolerance for "same final w" across compare rows.
pub const COMPARE_AGREEMENT: f64 = 1e-6;

pub fn cmd_compare(a: &CompareArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let setup = (|| -> Result<(Loaded, Vec<f64>, Vec<FlowKind>), Usage> {
        let mut kinds = Vec::new();
        if let Some(s) = &a.s {
            kinds.extend(parse_list(s)?.into_iter().map(|s| FlowKind::FractionalCalabi { s }));
        }
        if let Some(p) = &a.p {
            kinds.extend(parse_list(p)?.into_iter().map(|p| FlowKind::GeneralizedYamabe { p }));
        }
        if kinds.is_empty() {
            return Err(Usage("give at least one variant via --s or --p".into()));
        }
        let loaded = load_instance(&a.instance)?;
        let targets = match &a.targets {
            Some(t) => load_targets(t, loaded.surface.n_boundaries())?,
            None => return Err(Usage("--targets is required".into())),
        };
        for &kind in &kinds {
            let mut spec = FlowSpec::new(kind, targets.clone());
            apply_integrator(&mut spec, &a.integrator);
            spec.validate(&loaded.surface)?;
        }
        Ok((loaded, targets, kinds))
    })();
    let (loaded, targets, kinds) = match setup {
        Ok(x) => x,
        Err(Usage(m)) => {
            let _ = writeln!(err, "usage error: {m}");
            return EXIT_USAGE;
        }
    };

    let w_star = match solve_prescribed(&loaded.surface, &targets, &vec![0.0; targets.len()], &NewtonOptions::default()) {
        Ok(r) => r.w_star,
        Err(e) => {
            let _ = writeln!(err, "error: Newton reference failed: {e}");
            return EXIT_NUMERIC;
        }
    };

    let surface = &loaded.surface;
    let w0 = &loaded.w0;
    let run_one = |kind: FlowKind| -> CompareRow {
        let mut spec = FlowSpec::new(kind, targets.clone());
        apply_integrator(&mut spec, &a.integrator);
        spec.w_star = Some(w_star.clone());
        let initial_speed = vector_field(surface, w0, &spec)
            .map(|v| v.iter().fold(0.0, |m: f64, x| m.max(x.abs())))
            .unwrap_or(f64::NAN);
        let (traj, status) = match integrate(surface, w0, &spec) {
            Ok(t) => {
                let s = status_name(t.status).to_string();
                (Some(t), s)
            }
            Err(Error::StepCollapse { partial, .. }) => (Some(*partial), "step-collapse".into()),
            Err(e) => (None, format!("error: {e}")),
        };
        match traj {
            Some(t) => {
                let fit = decay_rate(&t).ok();
                let last = t.last();
                let deviation = last.w.iter().zip(&w_star).fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()));
                CompareRow {
                    kind,
                    status,
                    accepted_steps: t.accepted_steps,
                    rejected_steps: t.rejected_steps,
                    final_time: last.t,
                    decay_rate: fit.map(|f| f.rate),
                    r_squared: fit.map(|f| f.r_squared),
                    initial_speed,
                    deviation,
                }
            }
            None => CompareRow {
                kind,
                status,
                accepted_steps: 0,
                rejected_steps: 0,
                final_time: 0.0,
                decay_rate: None,
                r_squared: None,
                initial_speed,
                deviation: f64::NAN,
            },
        }
    };

    let rows: Vec<CompareRow> = std::thread::scope(|scope| {
        let handles: Vec<_> = kinds.iter().map(|&k| scope.spawn(move || run_one(k))).collect();
        handles.into_iter().map(|h| h.join().expect("variant thread panicked")).collect()
    });

    let mut table = String::from(COMPARE_HEADER);
    table.push('\n');
    for r in &rows {
        table.push_str(&r.to_csv());
        table.push('\n');
    }
    match &a.out_csv {
        Some(p) => {
            if let Err(e) = write_string(p, &table) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
        }
        None => {
            let _ = write!(out, "{table}");
        }
    }
    let ok = rows
        .iter()
        .all(|r| r.status == "converged" && r.deviation < COMPARE_AGREEMENT);
    if ok {
        EXIT_OK
    } else {
        let _ = writeln!(err, "some variants failed to converge or disagree with the Newton solution");
        EXIT_NUMERIC
    }
}
