use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rcsp_cli::runner::{default_threads, one_based, solve_on_graph};
use rcsp_cli::summary::write_rows;
use rcsp_cli::{
    cactus, run_batch, summarize, write_csv, write_json, BenchConfig, Instance, Limits, MapSpec, QuerySource, RunRecord,
};
use rcsp_core::fixtures::sample;
use rcsp_core::instance::{random_queries, write_queries};
use rcsp_core::oracle::{enumerate_solutions, random_instance, verify, FuzzConfig};
use rcsp_core::{solve_problem, Cost, Graph, Query, StateId, Tightness};

#[derive(Parser)]
#[command(
    name = "rcsp",
    version,
    about = "Exact resource constrained shortest paths on DIMACS road maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one start/goal instance.
    Solve(SolveArgs),
    /// Run a query file or seeded queries over a grid of tightness values.
    Bench(BenchArgs),
    /// Write seeded start/goal pairs drawn from the largest SCC.
    Gen(GenArgs),
    /// Compare the solver with brute-force enumeration on random small graphs.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct MapArgs {
    /// DIMACS attribute file; repeat once per cost dimension, in order.
    #[arg(long = "gr", value_name = "PATH")]
    gr: Vec<PathBuf>,
    /// Add synthetic dimensions up to this many costs in total.
    #[arg(long, value_name = "3|4", value_parser = clap::value_parser!(u8).range(3..=4))]
    extend_to: Option<u8>,
    /// Map name for the output; defaults to the suffix of the first file stem.
    #[arg(long)]
    name: Option<String>,
}

impl MapArgs {
    fn map_spec(&self) -> MapSpec {
        let mut map = MapSpec::from_files(self.gr.clone(), self.extend_to.map(usize::from));
        if let Some(n) = &self.name {
            map.name = n.clone();
        }
        map
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

impl OutputArgs {
    fn emit(&self, records: &[RunRecord]) -> Result<()> {
        let sink: Box<dyn Write> = match &self.out {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
            )),
            None => Box::new(io::stdout().lock()),
        };
        match self.format {
            Format::Csv => write_csv(records, sink),
            Format::Json => write_json(records, sink),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Use the built-in eight-state example graph instead of files.
    #[arg(long, conflicts_with = "gr")]
    sample: bool,
    /// One-based start state.
    #[arg(long)]
    start: u32,
    /// One-based goal state.
    #[arg(long)]
    goal: u32,
    /// Explicit resource limits, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "delta")]
    limits: Option<Vec<Cost>>,
    /// Tightness in (0, 1] for generated limits.
    #[arg(long)]
    delta: Option<Tightness>,
    /// Seconds before the search gives up.
    #[arg(long, default_value_t = 3600.0)]
    timeout: f64,
    #[command(flatten)]
    output: OutputArgs,
    /// Also print each solution path to standard error.
    #[arg(long)]
    paths: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Query file with one-based `<start> <goal>` lines.
    #[arg(long, conflicts_with = "seed")]
    queries: Option<PathBuf>,
    /// Seed for random queries when no query file is given.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random queries.
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Tightness values, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    delta: Vec<Tightness>,
    #[arg(long, default_value_t = 3600.0)]
    timeout: f64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
    /// Write per-group min/mean/max statistics as CSV.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Write per-group sorted runtimes as CSV.
    #[arg(long)]
    cactus: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    map: MapArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    count: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    count: usize,
}

fn timeout(secs: f64) -> Result<Duration> {
    if !(secs.is_finite() && secs > 0.0) {
        bail!("timeout must be a positive number of seconds, got {secs}");
    }
    Ok(Duration::from_secs_f64(secs))
}

fn state(graph: &Graph, one_based: u32, what: &str) -> Result<StateId> {
    if one_based == 0 || one_based as usize > graph.state_count() {
        bail!("{what} {one_based} out of range 1..={}", graph.state_count());
    }
    Ok(StateId(one_based - 1))
}

fn solve(args: SolveArgs) -> Result<()> {
    let (name, graph) = if args.sample {
        ("sample".to_string(), sample::graph())
    } else {
        let map = args.map.map_spec();
        (map.name.clone(), map.load()?)
    };
    let limits = match (args.limits, args.delta) {
        (Some(l), _) => {
            if l.len() + 1 != graph.arity() {
                bail!("{} limits given, graph has {} resources", l.len(), graph.arity() - 1);
            }
            Limits::Explicit(l)
        }
        (None, Some(d)) => Limits::Tightness(d),
        (None, None) => bail!("give either --limits or --delta"),
    };
    let instance = Instance {
        id: 0,
        query: Query {
            start: state(&graph, args.start, "start")?,
            goal: state(&graph, args.goal, "goal")?,
        },
        limits,
    };
    let (record, solutions) = solve_on_graph(&name, &graph, &instance, timeout(args.timeout)?);
    if args.paths {
        for s in &solutions {
            eprintln!("{}: {:?}", s.cost, one_based(&s.path));
        }
    }
    args.output.emit(&[record])
}

fn bench(args: BenchArgs) -> Result<()> {
    let queries = match (args.queries, args.seed) {
        (Some(p), _) => QuerySource::File(p),
        (None, Some(seed)) => QuerySource::Random {
            seed,
            count: args.count,
        },
        (None, None) => bail!("give either --queries or --seed"),
    };
    let config = BenchConfig {
        map: args.map.map_spec(),
        queries,
        deltas: args.delta,
        timeout: timeout(args.timeout)?,
        threads: args.threads.unwrap_or_else(default_threads),
    };
    let records = run_batch(&config)?;
    args.output.emit(&records)?;
    if let Some(p) = args.summary {
        write_rows(
            &summarize(&records),
            File::create(&p).with_context(|| format!("cannot create {}", p.display()))?,
        )?;
    }
    if let Some(p) = args.cactus {
        write_rows(
            &cactus(&records),
            File::create(&p).with_context(|| format!("cannot create {}", p.display()))?,
        )?;
    }
    Ok(())
}

fn gen(args: GenArgs) -> Result<()> {
    let graph = args.map.map_spec().load()?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let queries = random_queries(&graph, args.count, &mut rng);
    match args.out {
        Some(p) => write_queries(&queries, BufWriter::new(File::create(&p)?))?,
        None => write_queries(&queries, io::stdout().lock())?,
    }
    Ok(())
}

/// Returns the number of mismatching instances.
fn verify_fuzz(args: VerifyArgs) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let config = FuzzConfig::default();
    let mut failures = 0;
    let mut feasible = 0;
    for i in 0..args.count {
        let inst = random_instance(&mut rng, &config);
        let problem = inst.problem();
        let solver = solve_problem(&problem)?;
        let oracle = enumerate_solutions(&problem)?;
        feasible += usize::from(!oracle.solutions.is_empty());
        let report = verify(&problem, &solver.solutions, &oracle);
        if !report.passed() {
            failures += 1;
            eprintln!("instance {i}: {report}");
        }
    }
    println!("instances {} feasible {feasible} mismatches {failures}", args.count);
    Ok(failures)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Gen(a) => gen(a),
        Command::Verify(a) => match verify_fuzz(a) {
            Ok(0) => Ok(()),
            Ok(_) => return ExitCode::from(2),
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
