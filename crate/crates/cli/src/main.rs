use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use verlinde_core::fixed_points::{build_point_set, enumerate_t0, standard_schedule, write_paths_csv};
use verlinde_core::index::{chebyshev_nodes, vanishing_check, EngineOptions, Fault, IndexEngine, IndexTask};
use verlinde_core::lie::{Representation, RootSystem};
use verlinde_core::limit::{solve_at_minus1, verify_vanishing_mechanism, LimitReport};
use verlinde_core::precision::Precision;
use verlinde_core::verify::{default_grid, verify_grid, GridPoint};
use verlinde_core::Error;

#[derive(Parser)]
#[command(name = "vv", version, about = "Fixed-point engine for the twisted Verlinde index")]
struct Cli {
    /// Summation mode for orbit sums.
    #[arg(long, global = true, env = "VV_PRECISION", default_value = "double")]
    precision: Precision,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Root system summary.
    Roots {
        #[arg(long)]
        group: String,
    },
    /// Fixed points at t = 0, or solutions of the degenerate equation at t = -1.
    Points {
        #[arg(long)]
        group: String,
        #[arg(long)]
        h: i64,
        #[arg(long, value_enum, default_value = "zero")]
        at: At,
    },
    /// Fit the index polynomial.
    Index {
        #[command(flatten)]
        task: TaskArgs,
        #[arg(long, default_value_t = -0.9, allow_negative_numbers = true)]
        t_min: f64,
        /// Node count, or a comma-separated list of t values.
        #[arg(long, allow_hyphen_values = true)]
        nodes: Option<String>,
        /// CSV of (t, value) samples.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// t -> -1 limit analysis.
    Limit {
        #[command(flatten)]
        task: TaskArgs,
        /// CSV of the tracked paths.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Run every check over a grid of tasks.
    Verify {
        /// Restrict to one group (needs --g and --h).
        #[arg(long, requires_all = ["g", "h"])]
        group: Option<String>,
        #[arg(long)]
        g: Option<u32>,
        #[arg(long)]
        h: Option<i64>,
        #[command(flatten)]
        tuning: Tuning,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum At {
    Zero,
    MinusOne,
}

#[derive(Args)]
struct TaskArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    g: u32,
    #[arg(long)]
    h: i64,
    /// Highest weight of the test representation U.
    #[arg(long, value_delimiter = ',')]
    u: Option<Vec<i64>>,
    /// Highest weight of V for the s-deformation.
    #[arg(long, value_delimiter = ',')]
    v: Option<Vec<i64>>,
    #[arg(long, default_value_t = 0)]
    s_order: usize,
    /// Borel weight μ; enables full-flag mode.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    flag_weight: Option<Vec<i64>>,
    /// Include fibre differentials in full-flag mode.
    #[arg(long)]
    fiber_diff: bool,
}

#[derive(Args)]
struct Tuning {
    #[arg(long, hide = true, value_enum)]
    inject_fault: Option<FaultArg>,
    #[arg(long, hide = true)]
    min_step: Option<f64>,
    #[arg(long, hide = true)]
    x_min: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    ThetaSign,
}

impl Tuning {
    fn options(&self, precision: Precision) -> EngineOptions {
        let mut o = EngineOptions {
            precision,
            fault: self.inject_fault.map(|FaultArg::ThetaSign| Fault::ThetaSign),
            ..EngineOptions::default()
        };
        if let Some(s) = self.min_step {
            o.track.min_step = s;
        }
        if let Some(x) = self.x_min {
            o.track.x_min = x;
        }
        o
    }
}

impl TaskArgs {
    fn build(&self) -> Result<(RootSystem, IndexTask), Error> {
        let rs = RootSystem::from_name(&self.group)?;
        let mut task = IndexTask::new(&rs, self.g, self.h);
        if let Some(u) = &self.u {
            task.u = Representation::irreducible(&rs, u)?;
        }
        if let Some(v) = &self.v {
            task.v = Some(Representation::irreducible(&rs, v)?);
        }
        task.s_order = self.s_order;
        task.flag_weight = self.flag_weight.clone();
        task.fiber_differentials = self.fiber_diff;
        if self.fiber_diff && task.flag_weight.is_none() {
            return Err(Error::InvalidInput("--fiber-diff needs --flag-weight".into()));
        }
        task.validate(&rs)?;
        Ok((rs, task))
    }
}

fn parse_nodes(text: &str, degree: usize, t_min: f64) -> Result<Vec<f64>, Error> {
    let bad = || Error::InvalidInput(format!("cannot parse --nodes '{text}'"));
    if text.contains(',') || text.contains('.') || text.starts_with('-') {
        text.split(',').map(|s| s.trim().parse::<f64>().map_err(|_| bad())).collect()
    } else {
        let n: usize = text.parse().map_err(|_| bad())?;
        if n <= degree {
            return Err(Error::InvalidInput(format!("{n} nodes cannot determine a polynomial of degree {degree}")));
        }
        Ok(chebyshev_nodes(n, t_min, 0.0))
    }
}

struct Output {
    path: Option<PathBuf>,
}

impl Output {
    fn emit(&self, text: &str) -> Result<(), Error> {
        match &self.path {
            Some(p) => {
                let mut f = File::create(p)?;
                f.write_all(text.as_bytes())?;
                f.write_all(b"\n")?;
            }
            None => {
                let mut so = std::io::stdout().lock();
                match writeln!(so, "{text}") {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    fn json<T: Serialize>(&self, value: &T) -> Result<(), Error> {
        let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
        self.emit(&text)
    }
}

#[derive(Serialize)]
struct RootsSummary {
    schema: u32,
    group: String,
    rank: usize,
    dual_coxeter: i64,
    gram_det: i64,
    weyl_order: usize,
    dim: usize,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
}

#[derive(Serialize)]
struct PointsSummary {
    schema: u32,
    group: String,
    level: i64,
    t: f64,
    count: usize,
    regular: usize,
    orbits: usize,
    regular_orbits: usize,
    points: Vec<PointRow>,
}

#[derive(Serialize)]
struct PointRow {
    fractions: Vec<f64>,
    branch: Vec<i64>,
    regular: bool,
    orbit: usize,
}

#[derive(Serialize)]
struct LimitOutput<'a> {
    #[serde(flatten)]
    report: &'a LimitReport,
    warnings: Vec<String>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TheoremViolation(_) | Error::EquivalenceBroken { .. } => 1,
        Error::Io(_) => 2,
        e if e.is_config() => 2,
        _ => 3,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let out = Output { path: cli.out.clone() };
    match cli.command {
        Command::Roots { group } => {
            let rs = RootSystem::from_name(&group)?;
            let s = RootsSummary {
                schema: verlinde_core::index::SCHEMA_VERSION,
                group: rs.cartan_type.to_string(),
                rank: rs.rank,
                dual_coxeter: rs.dual_coxeter,
                gram_det: rs.gram_det,
                weyl_order: rs.weyl_order(),
                dim: rs.dim_group(),
                cartan: rs.cartan.chunks(rs.rank).map(|r| r.to_vec()).collect(),
                positive_roots: rs.positive_roots().iter().map(|r| r.weight.clone()).collect(),
            };
            if cli.json {
                out.json(&s)?;
            } else {
                out.emit(&format!(
                    "group {}\nrank {}\ndim {}\nc {}\ndet B {}\n|W| {}\npositive roots {:?}",
                    s.group, s.rank, s.dim, s.dual_coxeter, s.gram_det, s.weyl_order, s.positive_roots
                ))?;
            }
            Ok(0)
        }
        Command::Points { group, h, at } => {
            let rs = RootSystem::from_name(&group)?;
            let (set, t) = match at {
                At::Zero => (enumerate_t0(&rs, h)?, 0.0),
                At::MinusOne => (build_point_set(&rs, h, solve_at_minus1(&rs, h)?)?, -1.0),
            };
            let s = PointsSummary {
                schema: verlinde_core::index::SCHEMA_VERSION,
                group: rs.cartan_type.to_string(),
                level: h,
                t,
                count: set.count,
                regular: set.points.iter().filter(|p| p.regular).count(),
                orbits: set.orbits.len(),
                regular_orbits: set.regular_orbit_count(),
                points: set
                    .points
                    .iter()
                    .map(|p| PointRow {
                        fractions: p.point.fractions(),
                        branch: p.branch.clone(),
                        regular: p.regular,
                        orbit: p.orbit,
                    })
                    .collect(),
            };
            out.json(&s)?;
            Ok(0)
        }
        Command::Index {
            task,
            t_min,
            nodes,
            csv,
            tuning,
        } => {
            let (rs, task) = task.build()?;
            if !(-1.0..0.0).contains(&t_min) {
                return Err(Error::InvalidInput(format!("--t-min {t_min} must lie in (-1, 0)")));
            }
            let degree = task.degree_bound(&rs);
            let nodes = match nodes {
                Some(text) => parse_nodes(&text, degree, t_min)?,
                None => chebyshev_nodes(2 * (degree + 1), t_min, 0.0),
            };
            let engine = IndexEngine::new(task, tuning.options(cli.precision))?;
            let result = engine.fit(Some(nodes))?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            if let Some(path) = csv {
                let mut w = csv_writer(&path)?;
                w.write_record(["t", "value_re", "value_im"]).map_err(Error::from)?;
                for n in &result.nodes {
                    w.write_record([n.t.to_string(), n.value_re.to_string(), n.value_im.to_string()])
                        .map_err(Error::from)?;
                }
                w.flush()?;
            }
            out.json(&result)?;
            vanishing_check(&result)?;
            Ok(0)
        }
        Command::Limit { task, csv, tuning } => {
            let (_, task) = task.build()?;
            let engine = IndexEngine::new(task, tuning.options(cli.precision))?;
            if let Some(path) = csv {
                let schedule = standard_schedule(&engine.options.track, None, &[])?;
                let paths = engine.track(&schedule, engine.scope())?;
                write_paths_csv(&paths, engine.rs.rank, File::create(path)?)?;
            }
            let report = verify_vanishing_mechanism(&engine)?;
            out.json(&LimitOutput {
                report: &report,
                warnings: engine.warnings.clone(),
            })?;
            Ok(0)
        }
        Command::Verify { group, g, h, tuning } => {
            let grid = match (group, g, h) {
                (Some(group), Some(g), Some(h)) => vec![GridPoint::new(&group, g, h)],
                _ => default_grid(),
            };
            let verdict = verify_grid(&grid, tuning.options(cli.precision))?;
            if cli.json {
                out.json(&verdict)?;
            } else {
                let mut lines = Vec::new();
                for t in &verdict.tasks {
                    for c in &t.checks {
                        lines.push(format!(
                            "{} {} g={} h={} {}: {}",
                            if c.passed { "PASS" } else { "FAIL" },
                            t.point.group,
                            t.point.genus,
                            t.point.level,
                            c.name,
                            c.detail
                        ));
                    }
                }
                lines.push(format!("verdict: {}", if verdict.passed { "pass" } else { "fail" }));
                out.emit(&lines.join("\n"))?;
            }
            Ok(if verdict.passed { 0 } else { 1 })
        }
    }
}

fn csv_writer(path: &PathBuf) -> Result<csv::Writer<File>, Error> {
    Ok(csv::Writer::from_writer(File::create(path)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
