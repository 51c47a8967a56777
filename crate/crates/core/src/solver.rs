//! One front end over every max-flow variant, with the reset policy that
//! belongs to each.

use std::fmt;
use std::str::FromStr;

use crate::dinitz::{CutResult, Dinitz, FlowResult};
use crate::dinitz_opt::{DinitzOpt, OptConfig};
use crate::error::{FlowError, Result};
use crate::gomory_hu::CutOracle;
use crate::network::{FlowNetwork, TerminalPair};
use crate::push_relabel::{CutStrategy, PushRelabel};
use crate::stats::StageTimes;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Dinitz,
    DinitzBi,
    DinitzReset,
    DinitzStamp,
    DinitzOpt,
    PushRelabel,
}

impl SolverKind {
    pub const ALL: [SolverKind; 6] = [
        SolverKind::Dinitz,
        SolverKind::DinitzBi,
        SolverKind::DinitzReset,
        SolverKind::DinitzStamp,
        SolverKind::DinitzOpt,
        SolverKind::PushRelabel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Dinitz => "dinitz",
            SolverKind::DinitzBi => "dinitz-bi",
            SolverKind::DinitzReset => "dinitz-reset",
            SolverKind::DinitzStamp => "dinitz-stamp",
            SolverKind::DinitzOpt => "dinitz-opt",
            SolverKind::PushRelabel => "push-relabel",
        }
    }

    /// Whether flows are cleared through the touched-arc list rather than
    /// by sweeping every arc.
    pub fn lazy_reset(self) -> bool {
        !matches!(self, SolverKind::Dinitz | SolverKind::DinitzBi)
    }

    /// Configuration of the bidirectional variants.
    pub fn opt_config(self) -> Option<OptConfig> {
        match self {
            SolverKind::DinitzBi | SolverKind::DinitzReset => Some(OptConfig::BIDIRECTIONAL),
            SolverKind::DinitzStamp => Some(OptConfig::STAMPED),
            SolverKind::DinitzOpt => Some(OptConfig::FULL),
            SolverKind::Dinitz | SolverKind::PushRelabel => None,
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = FlowError;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| FlowError::Input(format!("unknown solver {s:?}")))
    }
}

#[derive(Debug, Clone)]
enum Engine {
    Dinitz(Dinitz),
    Opt(DinitzOpt),
    PushRelabel(PushRelabel),
}

#[derive(Debug, Clone)]
pub struct Solver {
    kind: SolverKind,
    config: Option<OptConfig>,
    engine: Engine,
    strategy: CutStrategy,
    recreate: bool,
    timing: bool,
    n: usize,
    last_times: StageTimes,
}

impl Solver {
    pub fn new(kind: SolverKind, n: usize) -> Self {
        let config = kind.opt_config();
        Self {
            kind,
            config,
            engine: Self::engine(kind, config, n, false),
            strategy: CutStrategy::default(),
            recreate: false,
            timing: false,
            n,
            last_times: StageTimes::default(),
        }
    }

    /// A bidirectional Dinitz with an explicit configuration. Resets lazily.
    pub fn with_config(n: usize, config: OptConfig) -> Self {
        let mut solver = Self::new(SolverKind::DinitzOpt, n);
        solver.config = Some(config);
        solver.engine = Self::engine(solver.kind, solver.config, n, false);
        solver
    }

    fn engine(kind: SolverKind, config: Option<OptConfig>, n: usize, timing: bool) -> Engine {
        match (kind, config) {
            (SolverKind::Dinitz, _) => Engine::Dinitz(Dinitz::new(n).with_timing(timing)),
            (SolverKind::PushRelabel, _) => Engine::PushRelabel(PushRelabel::new(n).with_timing(timing)),
            (_, config) => Engine::Opt(DinitzOpt::new(n, config.unwrap_or_default()).with_timing(timing)),
        }
    }

    /// Cut extraction used by push-relabel. Other solvers reject anything
    /// but the default.
    pub fn with_cut_strategy(mut self, strategy: CutStrategy) -> Result<Self> {
        if self.kind != SolverKind::PushRelabel && strategy != CutStrategy::default() {
            return Err(FlowError::Input(format!("cut strategy {} needs push-relabel", strategy.name())));
        }
        self.strategy = strategy;
        Ok(self)
    }

    /// Reallocate the solver state before every flow instead of reusing it.
    pub fn with_recreate(mut self, recreate: bool) -> Self {
        self.recreate = recreate;
        self
    }

    pub fn with_timing(mut self, timing: bool) -> Self {
        self.timing = timing;
        self.engine = Self::engine(self.kind, self.config, self.n, timing);
        self
    }

    pub fn kind(&self) -> SolverKind {
        self.kind
    }

    pub fn cut_strategy(&self) -> CutStrategy {
        self.strategy
    }

    pub fn opt_config(&self) -> Option<OptConfig> {
        self.config
    }

    /// Clears all flows according to the solver's reset policy and returns
    /// the number of arcs written.
    pub fn reset(&self, net: &mut FlowNetwork) -> usize {
        if self.kind.lazy_reset() {
            net.reset_flows()
        } else {
            net.reset_all_flows()
        }
    }

    fn refresh(&mut self, n: usize) {
        if self.recreate || n != self.n {
            self.n = n;
            self.engine = Self::engine(self.kind, self.config, n, self.timing);
        }
    }

    /// Maximum flow from zero flows. Push-relabel stops after the preflow.
    pub fn max_flow(&mut self, net: &mut FlowNetwork, pair: TerminalPair) -> FlowResult {
        self.refresh(net.n());
        let result = match &mut self.engine {
            Engine::Dinitz(d) => d.max_flow(net, pair),
            Engine::Opt(d) => d.max_flow(net, pair),
            Engine::PushRelabel(pr) => pr.max_flow(net, pair),
        };
        self.last_times = result.times;
        result
    }

    /// Minimum cut from zero flows.
    pub fn min_cut(&mut self, net: &mut FlowNetwork, pair: TerminalPair) -> Result<CutResult> {
        Ok(self.flow_and_cut(net, pair)?.1)
    }

    /// Maximum flow and the source side of a minimum cut from zero flows.
    /// For push-relabel the flow part covers the preflow stage.
    pub fn flow_and_cut(&mut self, net: &mut FlowNetwork, pair: TerminalPair) -> Result<(FlowResult, CutResult)> {
        self.refresh(net.n());
        match &mut self.engine {
            Engine::Dinitz(d) => {
                let flow = d.max_flow(net, pair);
                let cut = d.min_cut_source_side(net, pair)?;
                self.last_times = flow.times;
                Ok((flow, cut))
            }
            Engine::Opt(d) => {
                let flow = d.max_flow(net, pair);
                let cut = d.min_cut_source_side(net, pair)?;
                self.last_times = flow.times;
                Ok((flow, cut))
            }
            Engine::PushRelabel(pr) => {
                let cut = pr.min_cut(net, pair, self.strategy)?;
                let mut flow = FlowResult { value: cut.value, rounds: 1, ..Default::default() };
                flow.stats.begin_round();
                let counters = pr.counters();
                flow.stats.bfs_edges[0] = counters.label_scans;
                flow.stats.dfs_edges[0] = counters.arc_scans;
                flow.stats.flow_per_round[0] = cut.value;
                flow.times = pr.times();
                self.last_times = flow.times;
                Ok((flow, cut))
            }
        }
    }

    pub fn last_times(&self) -> StageTimes {
        self.last_times
    }
}

impl CutOracle for Solver {
    fn cut(&mut self, net: &mut FlowNetwork, pair: TerminalPair) -> Result<CutResult> {
        self.reset(net);
        self.min_cut(net, pair)
    }

    fn stage_times(&self) -> StageTimes {
        self.last_times
    }
}
