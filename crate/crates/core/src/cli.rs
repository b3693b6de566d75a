//! `prefnet` command-line front end.
//!
//! Exit codes: 0 success, 1 validation error, 2 runtime error,
//! 3 verification failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use crate::dynamics::{DynamicsSpec, InitPolicy, UpdateRule};
use crate::equilibrium::enumerate_equilibria;
use crate::error::{Error, Result};
use crate::experiments::{aggregate, run_realization, run_sweep, Coordinate, Figure};
use crate::game::{GameKind, PayoffParams, Preference};
use crate::graph::{Graph, TopologySpec};
use crate::io::{self, fmt_sig9};
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "prefnet", version, about = "Network games with heterogeneous preferences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a sweep config and write per-realization results.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Per-realization CSV.
        #[arg(long)]
        out: PathBuf,
        /// Aggregate CSV keyed by coordinate.
        #[arg(long)]
        aggregate: Option<PathBuf>,
        /// Aggregate JSON document.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Aggregate an existing results file.
    Aggregate {
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run one realization and print its observables and class.
    Run(RunArgs),
    /// List every pure Nash profile of a small graph.
    Enumerate {
        /// Edges as `i-j` pairs separated by commas.
        #[arg(long, conflicts_with = "graph")]
        edges: Option<String>,
        /// Node count when using --edges.
        #[arg(long)]
        n: Option<usize>,
        /// Edge-list file (`n <count>` then `i j` lines).
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Preferences as a 0/1 string, agent 0 first.
        #[arg(long)]
        prefs: String,
        #[arg(long, default_value = "cg")]
        game: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
    },
    /// Emit the aggregate surface of a named figure analogue.
    Figure {
        name: String,
        #[arg(long, default_value_t = 0)]
        base_seed: u64,
        #[arg(long)]
        realizations: Option<usize>,
        /// Aggregate CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Print the equivalent sweep config instead of running.
        #[arg(long)]
        print_config: bool,
    },
    /// Generate a graph and print it in edge-list format.
    Graph {
        #[command(flatten)]
        topology: TopologyArgs,
        #[arg(long)]
        seed: u64,
    },
    /// Run the built-in oracle and property checks.
    Verify,
}

#[derive(Debug, Args)]
struct TopologyArgs {
    /// `er` or `ba`.
    #[arg(long, default_value = "er")]
    topology: String,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 10.0)]
    mean_degree: f64,
    #[arg(long, default_value_t = 3)]
    m_attach: usize,
}

impl TopologyArgs {
    fn spec(&self) -> Result<TopologySpec> {
        let spec = match self.topology.as_str() {
            "er" => TopologySpec::Er {
                n: self.n,
                mean_degree: self.mean_degree,
            },
            "ba" => TopologySpec::Ba {
                n: self.n,
                m_attach: self.m_attach,
            },
            other => return Err(Error::config(format!("unknown topology `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    topology: TopologyArgs,
    #[arg(long, default_value = "cg")]
    game: String,
    /// `br` or `pi`.
    #[arg(long, default_value = "br")]
    dynamics: String,
    /// `complete` or `incomplete`.
    #[arg(long, default_value = "complete")]
    info: String,
    #[arg(long, default_value_t = 0.8)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Fraction of 0-preference agents.
    #[arg(long, default_value_t = 0.5)]
    rho0: f64,
    /// `random` or `preferred`.
    #[arg(long, default_value = "random")]
    init: String,
    /// Child seed, as found in the `seed` column of a results file.
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    max_steps: usize,
    #[arg(long, default_value_t = 1.0)]
    update_fraction: f64,
    #[arg(long, default_value_t = 20)]
    window: usize,
    /// Print d1 and df after every step.
    #[arg(long)]
    trajectory: bool,
}

/// Parses `argv` and runs the command; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                EXIT_VALIDATION
            } else {
                EXIT_RUNTIME
            }
        }
    }
}

fn execute(cmd: Command) -> Result<i32> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cmd {
        Command::Sweep {
            config,
            out: results,
            aggregate: agg,
            json,
        } => {
            let cfg = io::read_config(&config)?;
            let records = run_sweep(&cfg).map_err(runtime)?;
            io::write_results(&records, &results)?;
            write_aggregates(&aggregate(&records), agg.as_deref(), json.as_deref(), &mut out)?;
            eprintln!("wrote {} records to {}", records.len(), results.display());
        }
        Command::Aggregate { results, out: path, json } => {
            let records = io::read_results(&results)?;
            write_aggregates(&aggregate(&records), Some(&path), json.as_deref(), &mut out)?;
        }
        Command::Run(args) => run_single(&args, &mut out)?,
        Command::Enumerate {
            edges,
            n,
            graph,
            prefs,
            game,
            alpha,
            beta,
        } => {
            let g = match (edges, graph) {
                (Some(list), None) => parse_edges(&list, n, prefs.len())?,
                (None, Some(path)) => Graph::from_edge_list(&std::fs::read_to_string(path)?)?,
                (None, None) => Graph::empty(prefs.len()),
                (Some(_), Some(_)) => unreachable!("clap enforces conflicts"),
            };
            let prefs = parse_bits(&prefs)?;
            let p = PayoffParams::new(alpha, beta)?;
            let kind: GameKind = game.parse()?;
            let g = Arc::new(g);
            for (profile, class) in enumerate_equilibria(&g, &prefs, &p, kind)? {
                let bits: String = profile.iter().map(|x| char::from(b'0' + x.as_u8())).collect();
                writeln!(out, "{bits} {class}")?;
            }
        }
        Command::Figure {
            name,
            base_seed,
            realizations,
            out: path,
            json,
            print_config,
        } => {
            let figure: Figure = name.parse()?;
            let mut cfg = figure.config(base_seed);
            if let Some(r) = realizations {
                cfg.realizations = r;
            }
            cfg.validate()?;
            if print_config {
                write!(out, "{}", io::config_to_toml(&cfg))?;
                return Ok(EXIT_OK);
            }
            let records = run_sweep(&cfg).map_err(runtime)?;
            let table = aggregate(&records);
            match path {
                Some(p) => write_aggregates(&table, Some(&p), json.as_deref(), &mut out)?,
                None => {
                    out.write_all(&io::aggregate_to_csv(&table)?)?;
                    if let Some(j) = json {
                        io::write_atomic(&j, &io::aggregate_to_json(&table)?)?;
                    }
                }
            }
        }
        Command::Graph { topology, seed } => {
            let g = topology.spec()?.generate(seed)?;
            write!(out, "{}", g.to_edge_list())?;
        }
        Command::Verify => {
            let mut all = true;
            for c in verify::run_all() {
                writeln!(out, "[{}] {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
                all &= c.passed;
            }
            return Ok(if all { EXIT_OK } else { EXIT_VERIFY });
        }
    }
    Ok(EXIT_OK)
}

/// Failures inside a validated sweep are runtime errors.
fn runtime(e: Error) -> Error {
    match e {
        Error::Io(_) => e,
        other => Error::Io(std::io::Error::other(other.to_string())),
    }
}

fn write_aggregates(
    table: &[crate::experiments::SurfacePoint],
    csv_path: Option<&Path>,
    json_path: Option<&Path>,
    _out: &mut impl Write,
) -> Result<()> {
    if let Some(p) = csv_path {
        io::write_atomic(p, &io::aggregate_to_csv(table)?)?;
    }
    if let Some(p) = json_path {
        io::write_atomic(p, &io::aggregate_to_json(table)?)?;
    }
    Ok(())
}

fn run_single(args: &RunArgs, out: &mut impl Write) -> Result<()> {
    let topology = args.topology.spec()?;
    let rule = UpdateRule::from_labels(&args.dynamics, &args.info)?;
    let mut spec = DynamicsSpec::new(rule);
    spec.max_steps = args.max_steps;
    spec.update_fraction = args.update_fraction;
    spec.convergence_window = args.window;
    spec.record_trajectory = args.trajectory;
    spec.validate()?;
    let init: InitPolicy = args.init.parse()?;
    if !(0.0..=1.0).contains(&args.rho0) {
        return Err(Error::config(format!("rho0 must lie in [0, 1], got {}", args.rho0)));
    }
    let coord = Coordinate {
        topology,
        game: args.game.parse()?,
        rule,
        params: PayoffParams::new(args.alpha, args.beta)?,
        rho0: args.rho0,
    };
    let r = run_realization(&coord, &spec, init, 0, args.seed)?;
    if let Some(traj) = &r.result.trajectory {
        for (t, o) in traj.iter().enumerate() {
            writeln!(out, "step={} d1={} df={}", t + 1, fmt_sig9(o.d1), fmt_sig9(o.df))?;
        }
    }
    let rec = &r.record;
    writeln!(
        out,
        "d1={} df={} class={} termination={} steps={}",
        fmt_sig9(rec.d1),
        fmt_sig9(rec.df),
        rec.class.map_or("none", |c| c.label()),
        rec.termination,
        rec.steps
    )?;
    Ok(())
}

fn parse_bits(text: &str) -> Result<Vec<Preference>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(Preference::Zero),
            '1' => Ok(Preference::One),
            other => Err(Error::config(format!("preference string may only hold 0/1, found `{other}`"))),
        })
        .collect()
}

fn parse_edges(list: &str, n: Option<usize>, default_n: usize) -> Result<Graph> {
    let mut edges = Vec::new();
    for part in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (a, b) = part
            .split_once('-')
            .ok_or_else(|| Error::config(format!("edge `{part}` is not of the form i-j")))?;
        let i = a.trim().parse().map_err(|e| Error::config(format!("edge `{part}`: {e}")))?;
        let j = b.trim().parse().map_err(|e| Error::config(format!("edge `{part}`: {e}")))?;
        edges.push((i, j));
    }
    Graph::from_edges(n.unwrap_or(default_n), edges)
}
