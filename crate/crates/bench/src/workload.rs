//! Multi-flow, scaling and Gomory-Hu workloads.

use std::time::{Duration, Instant};

use flowkit_core::generators::{gen_girg_1d, sample_terminals, EdgeGraph, Edge, GirgParams, PairMode};
use flowkit_core::{
    gusfield, CutStrategy, FlowNetwork, FlowResult, GomoryHuTree, OptConfig, Solver, SolverKind, TerminalPair,
};

use crate::error::{BenchError, Result};
use crate::formats::{DimacsFile, EdgeListFile};
use crate::record::{mean_sd, micros, AggregateRecord, CsvRecord, GhSummary};

/// A named input graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub n: usize,
    pub edges: Vec<Edge>,
    pub directed: bool,
    pub terminals: Option<TerminalPair>,
}

impl Instance {
    pub fn from_graph(name: impl Into<String>, g: &EdgeGraph) -> Self {
        Self { name: name.into(), n: g.n, edges: g.edges.clone(), directed: g.directed, terminals: g.terminals }
    }

    pub fn from_edge_list(name: impl Into<String>, f: EdgeListFile, directed: bool) -> Self {
        Self { name: name.into(), n: f.n, edges: f.edges, directed, terminals: None }
    }

    pub fn from_dimacs(name: impl Into<String>, f: DimacsFile) -> Self {
        Self { name: name.into(), n: f.n, edges: f.edges, directed: true, terminals: Some(f.terminals) }
    }

    /// Builds the network and reports how long that took.
    pub fn build(&self) -> Result<(FlowNetwork, Duration)> {
        let start = Instant::now();
        let net = FlowNetwork::build(self.n, &self.edges, self.directed)?;
        Ok((net, start.elapsed()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSpec {
    Low,
    High,
    Uniform,
    /// Pairs of a Gusfield schedule.
    Gh,
    /// The instance's designated terminals.
    Fixed,
    /// Degrees in an inclusive range.
    Range(usize, usize),
}

pub fn sample_pairs(
    inst: &Instance,
    net: &FlowNetwork,
    spec: PairSpec,
    count: usize,
    seed: u64,
) -> Result<Vec<TerminalPair>> {
    let mode = match spec {
        PairSpec::Low => PairMode::Low,
        PairSpec::High => PairMode::High,
        PairSpec::Uniform => PairMode::Uniform,
        PairSpec::Gh => PairMode::GhLike,
        PairSpec::Range(lo, hi) => PairMode::DegreeRange(lo, hi),
        PairSpec::Fixed => PairMode::Fixed(
            inst.terminals
                .ok_or_else(|| BenchError::Config(format!("instance {} has no designated terminals", inst.name)))?,
        ),
    };
    Ok(sample_terminals(net, mode, count, seed)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlowConfig {
    pub solver: SolverKind,
    /// Cut extraction for push-relabel; without it only the preflow runs.
    pub pr_cut: Option<CutStrategy>,
    /// Replaces the configuration of a bidirectional variant.
    pub opt: Option<OptConfig>,
    pub recreate: bool,
    pub swap_terminals: bool,
    pub timing: bool,
}

impl FlowConfig {
    pub fn new(solver: SolverKind) -> Self {
        Self { solver, pr_cut: None, opt: None, recreate: false, swap_terminals: false, timing: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pr_cut.is_some() && self.solver != SolverKind::PushRelabel {
            return Err(BenchError::Config(format!("--pr-cut needs push-relabel, not {}", self.solver)));
        }
        if self.opt.is_some() && (self.solver.opt_config().is_none() || !self.solver.lazy_reset()) {
            return Err(BenchError::Config(format!("{} takes no search options", self.solver)));
        }
        Ok(())
    }

    /// Name written to the `solver` column.
    pub fn label(&self) -> String {
        match (self.opt, self.solver.opt_config()) {
            (Some(opt), Some(default)) if opt != default => format!(
                "{}[stamps={},skip={},balance={:?}]",
                self.solver,
                opt.time_stamps as u8,
                opt.skip_next_forward_layer as u8,
                opt.balance
            )
            .to_lowercase(),
            _ => self.solver.to_string(),
        }
    }

    fn solver(&self, n: usize) -> Result<Solver> {
        let mut solver = match self.opt {
            Some(opt) => Solver::with_config(n, opt),
            None => Solver::new(self.solver, n),
        };
        if let Some(strategy) = self.pr_cut {
            solver = solver.with_cut_strategy(strategy)?;
        }
        Ok(solver.with_recreate(self.recreate).with_timing(self.timing))
    }
}

/// Runs one flow per pair on `net`, reusing solver state, and resets after
/// each flow by the solver's policy. Expects zero flows on entry.
pub fn run_flows(
    inst: &Instance,
    net: &mut FlowNetwork,
    build_time: Duration,
    pairs: &[TerminalPair],
    cfg: &FlowConfig,
) -> Result<Vec<CsvRecord>> {
    cfg.validate()?;
    let mut solver = cfg.solver(net.n())?;
    let label = cfg.label();
    let strategy = match (cfg.solver, cfg.pr_cut) {
        (SolverKind::PushRelabel, Some(s)) => s.name(),
        (SolverKind::PushRelabel, None) => "preflow",
        _ => "residual",
    };
    let mut rows = Vec::with_capacity(pairs.len());
    for &pair in pairs {
        let pair = if cfg.swap_terminals { pair.swapped() } else { pair };
        let start = Instant::now();
        let flow: FlowResult = if cfg.pr_cut.is_some() {
            solver.flow_and_cut(net, pair)?.0
        } else {
            solver.max_flow(net, pair)
        };
        let flow_done = start.elapsed();
        let augmented = net.augmented_arcs();
        let reset_start = Instant::now();
        let reset_arcs = solver.reset(net) as u64;
        let reset_time = reset_start.elapsed();
        let (stats, times) = (&flow.stats, flow.times);
        let timed = |d: Duration| if cfg.timing { micros(d) } else { 0.0 };
        rows.push(CsvRecord {
            instance: inst.name.clone(),
            n: net.n(),
            m: net.edge_count(),
            solver: label.clone(),
            cut_strategy: strategy.to_string(),
            source: pair.source,
            sink: pair.sink,
            source_degree: net.degree(pair.source),
            sink_degree: net.degree(pair.sink),
            flow_value: flow.value,
            rounds: flow.rounds,
            initial_distance: stats.distance_per_round.first().copied().flatten(),
            augmenting_paths: stats.augmenting_paths,
            bfs_edges_total: stats.bfs_total(),
            dfs_edges_total: stats.dfs_total(),
            forward: stats.forward,
            backward: stats.backward,
            next_forward: stats.next_forward,
            next_backward: stats.next_backward,
            intersection: stats.intersection,
            init_writes: stats.init_writes.iter().sum(),
            augmented_arcs: augmented,
            reset_arcs,
            build_us: timed(build_time),
            reset_us: timed(reset_time),
            init_us: timed(times.init),
            bfs_us: timed(times.bfs),
            dfs_us: timed(times.dfs),
            preflow_us: timed(times.preflow),
            convert_us: timed(times.convert),
            cut_us: timed(times.cut),
            flow_us: timed(times.flow()),
            total_us: timed(flow_done + reset_time),
        });
    }
    Ok(rows)
}

/// Builds the instance once, samples pairs and runs them.
pub fn run_flow_workload(
    inst: &Instance,
    cfg: &FlowConfig,
    spec: PairSpec,
    count: usize,
    seed: u64,
) -> Result<Vec<CsvRecord>> {
    let (mut net, build_time) = inst.build()?;
    let pairs = sample_pairs(inst, &net, spec, count, seed)?;
    run_flows(inst, &mut net, build_time, &pairs, cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingConfig {
    pub sizes: Vec<usize>,
    pub iterations: usize,
    pub pairs: usize,
    pub solvers: Vec<SolverKind>,
    pub avg_degree: f64,
    pub beta: f64,
    pub degree_band: (usize, usize),
    pub seed: u64,
    pub timing: bool,
}

impl ScalingConfig {
    pub fn new(sizes: Vec<usize>, solvers: Vec<SolverKind>) -> Self {
        Self {
            sizes,
            iterations: 10,
            pairs: 10,
            solvers,
            avg_degree: 10.0,
            beta: 2.8,
            degree_band: (10, 20),
            seed: 1,
            timing: true,
        }
    }

    /// Powers of two times `min` up to `max`.
    pub fn doubling(min: usize, max: usize) -> Vec<usize> {
        std::iter::successors(Some(min), |&n| n.checked_mul(2)).take_while(|&n| n <= max).collect()
    }

    fn cell_seed(&self, n: usize, iteration: usize) -> u64 {
        self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((n as u64) << 16) ^ iteration as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingOutput {
    pub rows: Vec<CsvRecord>,
    pub aggregates: Vec<AggregateRecord>,
}

/// Fresh GIRGs per (size, iteration), degree-band pairs, every solver on
/// the same pairs.
pub fn run_scaling(cfg: &ScalingConfig) -> Result<ScalingOutput> {
    let mut rows = Vec::new();
    let mut aggregates = Vec::new();
    for &n in &cfg.sizes {
        let mut per_solver: Vec<Vec<CsvRecord>> = vec![Vec::new(); cfg.solvers.len()];
        for iteration in 0..cfg.iterations {
            let seed = cfg.cell_seed(n, iteration);
            let params = GirgParams { n, avg_degree: cfg.avg_degree, beta: cfg.beta, seed, c: None };
            let girg = gen_girg_1d(&params)?;
            let inst = Instance::from_graph(format!("girg-n{n}-i{iteration}"), &girg.graph);
            let (mut net, build_time) = inst.build()?;
            let (lo, hi) = cfg.degree_band;
            let pairs = sample_pairs(&inst, &net, PairSpec::Range(lo, hi), cfg.pairs, seed ^ 0x5a5a)?;
            for (i, &kind) in cfg.solvers.iter().enumerate() {
                let flow_cfg = FlowConfig { timing: cfg.timing, ..FlowConfig::new(kind) };
                let batch = run_flows(&inst, &mut net, build_time, &pairs, &flow_cfg)?;
                per_solver[i].extend(batch);
            }
        }
        for (kind, group) in cfg.solvers.iter().zip(per_solver) {
            aggregates.push(aggregate(n, &kind.to_string(), &group));
            rows.extend(group);
        }
    }
    Ok(ScalingOutput { rows, aggregates })
}

pub fn aggregate(n: usize, solver: &str, rows: &[CsvRecord]) -> AggregateRecord {
    let (mean_edges, sd_edges) = mean_sd(rows.iter().map(|r| r.edges_total() as f64));
    let (mean_bfs_edges, sd_bfs_edges) = mean_sd(rows.iter().map(|r| r.bfs_edges_total as f64));
    let (mean_dfs_edges, sd_dfs_edges) = mean_sd(rows.iter().map(|r| r.dfs_edges_total as f64));
    let (mean_rounds, _) = mean_sd(rows.iter().map(|r| r.rounds as f64));
    let (mean_flow_us, sd_flow_us) = mean_sd(rows.iter().map(|r| r.flow_us));
    AggregateRecord {
        n,
        solver: solver.to_string(),
        flows: rows.len(),
        mean_edges,
        sd_edges,
        mean_bfs_edges,
        sd_bfs_edges,
        mean_dfs_edges,
        sd_dfs_edges,
        mean_rounds,
        mean_flow_us,
        sd_flow_us,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GhConfig {
    pub solver: SolverKind,
    pub pr_cut: Option<CutStrategy>,
    pub recreate: bool,
    pub timing: bool,
}

impl GhConfig {
    pub fn new(solver: SolverKind) -> Self {
        Self { solver, pr_cut: None, recreate: false, timing: true }
    }
}

pub fn run_gomory_hu(inst: &Instance, cfg: &GhConfig) -> Result<(GomoryHuTree, GhSummary)> {
    if inst.directed {
        return Err(BenchError::Config("Gomory-Hu trees need undirected input".into()));
    }
    let flow_cfg = FlowConfig { pr_cut: cfg.pr_cut, recreate: cfg.recreate, timing: cfg.timing, ..FlowConfig::new(cfg.solver) };
    flow_cfg.validate()?;
    let (mut net, build_time) = inst.build()?;
    let mut oracle = flow_cfg.solver(net.n())?;
    let start = Instant::now();
    let (tree, stats) = gusfield(&mut net, &mut oracle)?;
    let total = start.elapsed();
    let timed = |d: Duration| if cfg.timing { micros(d) } else { 0.0 };
    let t = stats.times;
    let summary = GhSummary {
        instance: inst.name.clone(),
        n: net.n(),
        m: net.edge_count(),
        oracle: cfg.solver.to_string(),
        cut_strategy: match cfg.solver {
            SolverKind::PushRelabel => oracle.cut_strategy().name().to_string(),
            _ => "residual".to_string(),
        },
        oracle_calls: stats.oracle_calls,
        trivial_cuts: stats.trivial_cuts,
        reparented: stats.reparented,
        source_degree_sum: stats.source_degree_sum,
        sink_degree_sum: stats.sink_degree_sum,
        build_us: timed(build_time),
        init_us: timed(t.init),
        bfs_us: timed(t.bfs),
        dfs_us: timed(t.dfs),
        preflow_us: timed(t.preflow),
        convert_us: timed(t.convert),
        cut_us: timed(t.cut),
        flow_us: timed(t.flow()),
        total_us: timed(total),
    };
    Ok((tree, summary))
}
