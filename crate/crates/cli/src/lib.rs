//! Command-line front end: argument parsing, dispatch and JSON reports.

mod commands;
mod error;
mod input;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use minfill::embed::Generator;
use minfill::fillings::{SweepOptions, DEFAULT_MF_CAP};
use minfill::rational::parse_rational;

use commands::Ctx;
pub use error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Inputs must be exact rationals.
    Exact,
    /// Decimal inputs and planar configurations are accepted.
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    Simplex,
    RandomMetric,
    RandomPlanar,
}

#[derive(Debug, Parser)]
#[command(name = "minfill", version, about = "Exact minimal fillings of finite pseudo-metric spaces")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Mode::Exact, global = true)]
    mode: Mode,
    /// Worker threads; falls back to MINFILL_JOBS, then to all cores.
    #[arg(long, env = "MINFILL_JOBS", global = true)]
    jobs: Option<usize>,
    /// Largest point count for exhaustive sweeps.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    cap: Option<u64>,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Include the per-topology table in mf reports.
    #[arg(long, global = true)]
    full_table: bool,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that the input is a pseudo-metric.
    Validate { input: PathBuf },
    /// Minimal filling over all binary topologies.
    Mf {
        input: PathBuf,
        /// Allow negative weights.
        #[arg(long)]
        free: bool,
    },
    /// Minimal parametric filling of one topology.
    Mpf {
        input: PathBuf,
        /// Tree file, Newick text, or splits like `1,2|3,4,5`.
        #[arg(long)]
        topology: String,
    },
    /// Tours of the minimal filling (or of a given topology) and of its base.
    Tours {
        input: PathBuf,
        #[arg(long)]
        topology: Option<String>,
    },
    /// Free-sign program value against multi-tours of multiplicity up to k.
    Multitour {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        topology: Option<String>,
    },
    /// Four-point rules and the generating tree when there is one.
    Additive { input: PathBuf },
    /// Reconstruct the generating tree.
    Gentree {
        input: PathBuf,
        /// Allow negative weights.
        #[arg(long)]
        signed: bool,
    },
    /// ℓ∞ images of the points and of the filling's vertices.
    Embed {
        input: PathBuf,
        #[arg(long)]
        topology: Option<String>,
    },
    /// Ratios of one space, or a random sweep.
    Ratios {
        input: Option<PathBuf>,
        #[arg(long, value_enum)]
        sweep: Option<SweepKind>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        arity: usize,
    },
    /// Shift every distance by `a` and compare the minimal fillings.
    Rays {
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Every analysis in one report.
    Report { input: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Mf { .. } => "mf",
            Command::Mpf { .. } => "mpf",
            Command::Tours { .. } => "tours",
            Command::Multitour { .. } => "multitour",
            Command::Additive { .. } => "additive",
            Command::Gentree { .. } => "gentree",
            Command::Embed { .. } => "embed",
            Command::Ratios { .. } => "ratios",
            Command::Rays { .. } => "rays",
            Command::Report { .. } => "report",
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn header(space: &minfill::PseudoMetricSpace) -> Value {
    json!({ "digest": input::digest(space), "n": space.n(), "labels": space.labels() })
}

fn merge(mut into: Value, from: Value) -> Value {
    if let (Some(a), Value::Object(b)) = (into.as_object_mut(), from) {
        a.extend(b);
    }
    into
}

fn run(cmd: &Command, ctx: &Ctx) -> Result<Value, CliError> {
    let float = ctx.float;
    let topo = |arg: &Option<String>, s: &minfill::PseudoMetricSpace| arg.as_deref().map(|a| input::topology(a, s)).transpose();
    let with_space = |path: &PathBuf, f: &dyn Fn(&input::Input) -> Result<Value, CliError>| -> Result<Value, CliError> {
        let inp = input::load(path, float)?;
        let body = f(&inp)?;
        Ok(merge(header(&inp.space), body))
    };
    match cmd {
        Command::Validate { input } => with_space(input, &|i| commands::validate(&i.space)),
        Command::Mf { input, free } => with_space(input, &|i| commands::mf_command(&i.space, ctx, *free)),
        Command::Mpf { input, topology } => with_space(input, &|i| {
            let t = input::topology(topology, &i.space)?;
            commands::mpf_command(&i.space, ctx, &t)
        }),
        Command::Tours { input, topology } => with_space(input, &|i| {
            let tree = commands::subject(&i.space, ctx, topo(topology, &i.space)?.as_ref())?;
            commands::tours(&i.space, ctx, &tree)
        }),
        Command::Multitour { input, k, topology } => with_space(input, &|i| {
            let tree = commands::subject(&i.space, ctx, topo(topology, &i.space)?.as_ref())?;
            commands::multitour(&i.space, *k, &tree)
        }),
        Command::Additive { input } => with_space(input, &|i| commands::additive(&i.space)),
        Command::Gentree { input, signed } => with_space(input, &|i| commands::gentree(&i.space, *signed)),
        Command::Embed { input, topology } => with_space(input, &|i| {
            let tree = commands::subject(&i.space, ctx, topo(topology, &i.space)?.as_ref())?;
            commands::embed(&i.space, i.planar.as_ref(), &tree)
        }),
        Command::Ratios { input, sweep, count, arity } => match (input, sweep) {
            (Some(path), None) => with_space(path, &|i| commands::ratios(&i.space, i.planar.as_ref(), ctx)),
            (None, Some(kind)) => {
                let generator = match kind {
                    SweepKind::Simplex => Generator::Simplex,
                    SweepKind::RandomMetric => Generator::RandomMetric,
                    SweepKind::RandomPlanar => Generator::RandomPlanar,
                };
                commands::sweep(ctx, generator, *count, *arity)
            }
            _ => Err(CliError::usage("ratios takes either an input file or --sweep")),
        },
        Command::Rays { input, a } => {
            let a = parse_rational(a).map_err(|e| CliError::usage(e.to_string()))?;
            with_space(input, &|i| commands::rays(&i.space, ctx, &a))
        }
        Command::Report { input } => with_space(input, &|i| commands::report(&i.space, i.planar.as_ref(), ctx)),
    }
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Parses `args` (program name first), runs the command and renders the
/// report. Exit code 0 on success, 1 on domain errors, 2 on usage errors.
pub fn dispatch<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        builder = builder.num_threads(j);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => return usage_outcome(&CliError::usage(e.to_string())),
    };
    let name = cli.command.name();
    let result = pool.install(|| {
        let ctx = Ctx {
            float: cli.mode == Mode::Float,
            opts: SweepOptions {
                cap: cli.cap.map_or(DEFAULT_MF_CAP, |c| c as usize),
                shards: rayon::current_num_threads() * 4,
                full_table: cli.full_table,
            },
            seed: cli.seed,
        };
        run(&cli.command, &ctx)
    });
    let (code, body) = match result {
        Ok(v) => (0, merge(json!({ "command": name }), v)),
        Err(CliError::Usage(m)) => return usage_outcome(&CliError::Usage(m)),
        Err(e) => {
            let mut v = json!({ "command": name, "error": e.to_json() });
            if name == "validate" {
                v["valid"] = json!(false);
            }
            (e.code(), v)
        }
    };
    let text = render(&body);
    match &cli.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
            Err(e) => usage_outcome(&CliError::usage(format!("cannot write {}: {e}", path.display()))),
        },
        None => Outcome { code, stdout: text, stderr: String::new() },
    }
}

fn usage_outcome(e: &CliError) -> Outcome {
    Outcome {
        code: 2,
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}
