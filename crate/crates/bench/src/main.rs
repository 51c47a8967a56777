use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flowkit_bench::{
    parse_dimacs_max, parse_edge_list, run_flow_workload, run_gomory_hu, run_scaling, write_csv, write_dimacs,
    write_edge_list, BenchError, FlowConfig, GhConfig, Instance, PairSpec, Result, ScalingConfig,
};
use flowkit_core::generators::{gen_er, gen_girg_1d, gen_layered, EdgeGraph, ErDensity, ErParams, GirgParams, LayeredParams};
use flowkit_core::{BalanceMetric, CutStrategy, OptConfig, SolverKind};

#[derive(Parser)]
#[command(name = "flowkit", version, about = "Max-flow, min-cut and Gomory-Hu benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one flow per sampled terminal pair and write a CSV row for each.
    Flow(FlowArgs),
    /// Build a Gomory-Hu tree with Gusfield's algorithm.
    GomoryHu(GhArgs),
    /// Write a generated instance.
    Gen {
        #[command(subcommand)]
        model: GenModel,
    },
    /// Flow counters on GIRGs of growing size.
    Scaling(ScalingArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Edgelist,
    Dimacs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pairs {
    Low,
    High,
    Uniform,
    Gh,
    Fixed,
    Range,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrCut {
    Convert,
    Tside,
    Swap,
}

impl From<PrCut> for CutStrategy {
    fn from(c: PrCut) -> Self {
        match c {
            PrCut::Convert => CutStrategy::Convert,
            PrCut::Tside => CutStrategy::TSide,
            PrCut::Swap => CutStrategy::Swap,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Balance {
    Volume,
    Cardinality,
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "edgelist")]
    format: Format,
    /// Read an edge list as directed arcs.
    #[arg(long)]
    directed: bool,
    /// Terminals for `--pairs fixed` on edge-list input.
    #[arg(long, requires = "sink")]
    source: Option<usize>,
    #[arg(long, requires = "source")]
    sink: Option<usize>,
}

#[derive(Args)]
struct FlowArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "dinitz-opt", value_parser = parse_solver)]
    solver: SolverKind,
    #[arg(long, value_enum)]
    pr_cut: Option<PrCut>,
    #[arg(long, value_enum, default_value = "low")]
    pairs: Pairs,
    /// Inclusive degree band for `--pairs range`.
    #[arg(long, value_delimiter = ',', default_values_t = [10, 20])]
    degree_range: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Exchange source and sink of every sampled pair.
    #[arg(long)]
    swap_terminals: bool,
    /// Reallocate solver state before each flow.
    #[arg(long)]
    recreate: bool,
    /// Disable skipping of the next forward layer.
    #[arg(long)]
    no_skip: bool,
    #[arg(long, value_enum)]
    balance: Option<Balance>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GhArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "dinitz-opt", value_parser = parse_solver)]
    solver: SolverKind,
    #[arg(long, value_enum)]
    pr_cut: Option<PrCut>,
    #[arg(long)]
    recreate: bool,
    /// Tree file, "child parent weight" per line.
    #[arg(long)]
    tree_out: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenModel {
    /// Directed Erdős–Rényi graph.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "m", required_unless_present = "m")]
        p: Option<f64>,
        #[arg(long)]
        m: Option<usize>,
        /// Uniform capacities in LO,HI.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<i64>>,
        #[arg(long)]
        super_terminals: bool,
        #[command(flatten)]
        output: GenOutput,
    },
    /// Layered directed instance with designated terminals.
    Layered {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        length: usize,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [1, 10000])]
        capacity: Vec<i64>,
        #[command(flatten)]
        output: GenOutput,
    },
    /// One-dimensional threshold GIRG.
    Girg {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10.0)]
        degree: f64,
        #[arg(long, default_value_t = 2.8)]
        beta: f64,
        /// Threshold constant; calibrated from the degree when absent.
        #[arg(long)]
        c: Option<f64>,
        #[command(flatten)]
        output: GenOutput,
    },
}

#[derive(Args)]
struct GenOutput {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "edgelist")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScalingArgs {
    /// Explicit sizes; otherwise doubling from --min-n to --max-n.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    min_n: usize,
    #[arg(long, default_value_t = 64000)]
    max_n: usize,
    #[arg(long, default_value_t = 10)]
    iterations: usize,
    #[arg(long, default_value_t = 10)]
    pairs: usize,
    #[arg(long, value_delimiter = ',', default_value = "dinitz,dinitz-opt", value_parser = parse_solver)]
    solvers: Vec<SolverKind>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-size means and standard deviations.
    #[arg(long)]
    aggregates_out: Option<PathBuf>,
}

fn parse_solver(s: &str) -> std::result::Result<SolverKind, String> {
    s.parse().map_err(|e: flowkit_core::FlowError| e.to_string())
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn load(args: &InputArgs) -> Result<Instance> {
    let text = std::fs::read_to_string(&args.input)?;
    let name = args.input.file_stem().map_or("input".into(), |s| s.to_string_lossy().into_owned());
    let mut inst = match args.format {
        Format::Edgelist => Instance::from_edge_list(name, parse_edge_list(&text)?, args.directed),
        Format::Dimacs => Instance::from_dimacs(name, parse_dimacs_max(&text)?),
    };
    if let (Some(s), Some(t)) = (args.source, args.sink) {
        inst.terminals = Some(flowkit_core::TerminalPair::new(s, t)?);
    }
    Ok(inst)
}

fn range(values: &[i64], what: &str) -> Result<(i64, i64)> {
    match values {
        [lo, hi] => Ok((*lo, *hi)),
        _ => Err(BenchError::Config(format!("{what} takes LO,HI"))),
    }
}

fn write_graph(g: &EdgeGraph, out: &GenOutput, weighted: bool) -> Result<()> {
    let mut w = output(out.out.as_deref())?;
    match out.format {
        Format::Edgelist => write_edge_list(&mut w, g.n, &g.edges, weighted)?,
        Format::Dimacs => {
            let pair = g
                .terminals
                .ok_or_else(|| BenchError::Config("DIMACS output needs designated terminals".into()))?;
            write_dimacs(&mut w, g.n, &g.edges, pair)?
        }
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Flow(args) => {
            let inst = load(&args.input)?;
            let spec = match args.pairs {
                Pairs::Low => PairSpec::Low,
                Pairs::High => PairSpec::High,
                Pairs::Uniform => PairSpec::Uniform,
                Pairs::Gh => PairSpec::Gh,
                Pairs::Fixed => PairSpec::Fixed,
                Pairs::Range => match args.degree_range[..] {
                    [lo, hi] => PairSpec::Range(lo, hi),
                    _ => return Err(BenchError::Config("--degree-range takes LO,HI".into())),
                },
            };
            let opt = (args.no_skip || args.balance.is_some()).then(|| {
                let mut opt = args.solver.opt_config().unwrap_or_default();
                opt.skip_next_forward_layer &= !args.no_skip;
                if let Some(b) = args.balance {
                    opt.balance = match b {
                        Balance::Volume => BalanceMetric::Volume,
                        Balance::Cardinality => BalanceMetric::Cardinality,
                    };
                }
                opt
            });
            let cfg = FlowConfig {
                pr_cut: args.pr_cut.map(Into::into),
                opt: opt as Option<OptConfig>,
                recreate: args.recreate,
                swap_terminals: args.swap_terminals,
                ..FlowConfig::new(args.solver)
            };
            let rows = run_flow_workload(&inst, &cfg, spec, args.count, args.seed)?;
            write_csv(output(args.out.as_deref())?, &rows)
        }
        Command::GomoryHu(args) => {
            let inst = load(&args.input)?;
            let cfg = GhConfig { pr_cut: args.pr_cut.map(Into::into), recreate: args.recreate, ..GhConfig::new(args.solver) };
            let (tree, summary) = run_gomory_hu(&inst, &cfg)?;
            let mut w = BufWriter::new(File::create(&args.tree_out)?);
            tree.write_to(&mut w)?;
            w.flush()?;
            write_csv(output(args.out.as_deref())?, &[summary])
        }
        Command::Gen { model } => match model {
            GenModel::Er { n, p, m, weights, super_terminals, output } => {
                let density = match (p, m) {
                    (Some(p), None) => ErDensity::P(p),
                    (None, Some(m)) => ErDensity::M(m),
                    _ => return Err(BenchError::Config("give exactly one of --p and --m".into())),
                };
                let weights = weights.as_deref().map(|w| range(w, "--weights")).transpose()?;
                let g = gen_er(&ErParams { n, density, weights, super_terminals, seed: output.seed })?;
                write_graph(&g, &output, weights.is_some() || super_terminals)
            }
            GenModel::Layered { width, length, degree, capacity, output } => {
                let capacity = range(&capacity, "--capacity")?;
                let g = gen_layered(&LayeredParams { width, length, degree, capacity, seed: output.seed })?;
                write_graph(&g, &output, true)
            }
            GenModel::Girg { n, degree, beta, c, output } => {
                let girg = gen_girg_1d(&GirgParams { n, avg_degree: degree, beta, seed: output.seed, c })?;
                write_graph(&girg.graph, &output, false)
            }
        },
        Command::Scaling(args) => {
            let sizes = if args.sizes.is_empty() { ScalingConfig::doubling(args.min_n, args.max_n) } else { args.sizes };
            let cfg = ScalingConfig {
                iterations: args.iterations,
                pairs: args.pairs,
                seed: args.seed,
                ..ScalingConfig::new(sizes, args.solvers)
            };
            let out = run_scaling(&cfg)?;
            write_csv(output(args.out.as_deref())?, &out.rows)?;
            if let Some(path) = args.aggregates_out {
                write_csv(File::create(path)?, &out.aggregates)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("flowkit: {e}");
            ExitCode::FAILURE
        }
    }
}
