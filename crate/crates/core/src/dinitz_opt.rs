//! Dinitz driven by a balanced bidirectional BFS.
//!
//! Each round grows one BFS layer from the source or the sink, whichever
//! frontier is cheaper, until a vertex is discovered that the other side has
//! already labelled. The discovering layer is completed so that every
//! shortest s-t path is labelled. Forward vertices carry `dist_s`, backward
//! vertices carry `dist_t`, meeting vertices carry both. The DFS then accepts
//! an arc `u -> v` if it raises `dist_s` by one or lowers `dist_t` by one.
//! That relaxed layered network contains every shortest-path arc.
//!
//! Three switches separate the optimisations:
//!
//! * time stamps make per-vertex initialisation lazy instead of a full sweep
//!   at the start of every round;
//! * skip-next-forward-layer stops the DFS from entering vertices of the
//!   pending forward layer that the backward search never reached, since
//!   none of them lies on a shortest path;
//! * the balance metric picks between frontier arc volume and frontier size.

use crate::dinitz::{augment_blocking_flow, source_side_cut, CutResult, FlowResult, SearchLabels, UNLABELLED};
use crate::error::{FlowError, Result};
use crate::network::{FlowNetwork, TerminalPair, VertexId, VertexMarks};
use crate::stats::{SearchSpaceStats, StageTimes, Stopwatch};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BalanceMetric {
    /// Sum of arc-range sizes of the frontier.
    #[default]
    Volume,
    /// Number of frontier vertices.
    Cardinality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptConfig {
    pub time_stamps: bool,
    pub skip_next_forward_layer: bool,
    pub balance: BalanceMetric,
}

impl OptConfig {
    /// Bidirectional search only.
    pub const BIDIRECTIONAL: Self =
        Self { time_stamps: false, skip_next_forward_layer: false, balance: BalanceMetric::Volume };
    /// Bidirectional search with lazy initialisation.
    pub const STAMPED: Self = Self { time_stamps: true, ..Self::BIDIRECTIONAL };
    /// Every optimisation enabled.
    pub const FULL: Self = Self { time_stamps: true, skip_next_forward_layer: true, ..Self::BIDIRECTIONAL };
}

impl Default for OptConfig {
    fn default() -> Self {
        Self::FULL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Forward,
    Backward,
}

/// Queues of both searches with the bounds of their current frontiers.
#[derive(Debug, Clone)]
pub struct BidirFrontier {
    forward_queue: Vec<VertexId>,
    backward_queue: Vec<VertexId>,
    forward_begin: usize,
    backward_begin: usize,
    forward_cost: u64,
    backward_cost: u64,
    /// Completed forward layers; also the `dist_s` of the pending layer.
    pub forward_layers: u32,
    pub backward_layers: u32,
}

impl BidirFrontier {
    fn new(n: usize) -> Self {
        Self {
            forward_queue: Vec::with_capacity(n),
            backward_queue: Vec::with_capacity(n),
            forward_begin: 0,
            backward_begin: 0,
            forward_cost: 0,
            backward_cost: 0,
            forward_layers: 0,
            backward_layers: 0,
        }
    }

    pub fn frontier(&self, side: Side) -> &[VertexId] {
        match side {
            Side::Forward => &self.forward_queue[self.forward_begin..],
            Side::Backward => &self.backward_queue[self.backward_begin..],
        }
    }

    /// Cost of expanding the current frontier of `side` by one layer.
    pub fn layer_cost(&self, side: Side) -> u64 {
        match side {
            Side::Forward => self.forward_cost,
            Side::Backward => self.backward_cost,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DinitzOpt {
    config: OptConfig,
    labels: SearchLabels,
    frontier: BidirFrontier,
    path: Vec<usize>,
    marks: VertexMarks,
    times: StageTimes,
    timing: bool,
    solved: Option<(TerminalPair, i64)>,
}

impl DinitzOpt {
    pub fn new(n: usize, config: OptConfig) -> Self {
        Self {
            config,
            labels: SearchLabels::new(n),
            frontier: BidirFrontier::new(n),
            path: Vec::with_capacity(n),
            marks: VertexMarks::new(n),
            times: StageTimes::default(),
            timing: false,
            solved: None,
        }
    }

    pub fn with_timing(mut self, timing: bool) -> Self {
        self.timing = timing;
        self
    }

    pub fn config(&self) -> OptConfig {
        self.config
    }

    pub fn labels(&self) -> &SearchLabels {
        &self.labels
    }

    pub fn frontier(&self) -> &BidirFrontier {
        &self.frontier
    }

    fn prepare(&mut self, n: usize) {
        if self.labels.len() != n {
            *self = Self { timing: self.timing, ..Self::new(n, self.config) };
        }
    }

    fn cost_of(&self, net: &FlowNetwork, v: VertexId) -> u64 {
        match self.config.balance {
            BalanceMetric::Volume => net.degree(v) as u64,
            BalanceMetric::Cardinality => 1,
        }
    }

    /// Brings the record of `v` into the current round; counts the write.
    #[inline]
    fn touch(labels: &mut SearchLabels, net: &FlowNetwork, v: VertexId, writes: &mut u64) {
        if !labels.valid(v) {
            labels.fresh(net, v);
            *writes += 1;
        }
    }

    /// Starts a round and labels the relaxed layered network. Returns whether
    /// the sink is reachable from the source in the residual network.
    pub fn bidir_bfs(&mut self, net: &FlowNetwork, pair: TerminalPair, stats: &mut SearchSpaceStats) -> bool {
        pair.check(net.n());
        self.prepare(net.n());
        stats.begin_round();
        let TerminalPair { source: s, sink: t } = pair;

        let clock = Stopwatch::start(self.timing);
        self.labels.advance_round();
        let mut writes = 0;
        if !self.config.time_stamps {
            writes += self.labels.init_all(net);
        }
        clock.add_to(&mut self.times.init);

        let clock = Stopwatch::start(self.timing);
        Self::touch(&mut self.labels, net, s, &mut writes);
        Self::touch(&mut self.labels, net, t, &mut writes);
        self.labels.states[s].dist_s = 0;
        self.labels.states[t].dist_t = 0;
        let source_cost = self.cost_of(net, s);
        let sink_cost = self.cost_of(net, t);
        let f = &mut self.frontier;
        f.forward_queue.clear();
        f.backward_queue.clear();
        f.forward_queue.push(s);
        f.backward_queue.push(t);
        f.forward_begin = 0;
        f.backward_begin = 0;
        f.forward_cost = source_cost;
        f.backward_cost = sink_cost;
        f.forward_layers = 0;
        f.backward_layers = 0;

        let undirected = !net.is_directed();
        let arcs = net.arcs();
        let volume = self.config.balance == BalanceMetric::Volume;
        let labels = &mut self.labels;
        let mut met = false;
        let mut forward_scans = 0u64;
        let mut backward_scans = 0u64;
        let mut layer_scans = 0u64;
        while f.forward_begin < f.forward_queue.len() && f.backward_begin < f.backward_queue.len() {
            layer_scans = 0;
            let mut next_cost = 0u64;
            if f.forward_cost <= f.backward_cost {
                let end = f.forward_queue.len();
                for i in f.forward_begin..end {
                    let u = f.forward_queue[i];
                    let next = labels.states[u].dist_s + 1;
                    for a in net.arc_range(u) {
                        layer_scans += 1;
                        let arc = &arcs[a];
                        if arc.capacity - arc.flow <= 0 {
                            continue;
                        }
                        let v = arc.head;
                        Self::touch(labels, net, v, &mut writes);
                        let state = &mut labels.states[v];
                        if state.dist_s == UNLABELLED {
                            state.dist_s = next;
                            met |= state.dist_t != UNLABELLED;
                            f.forward_queue.push(v);
                            next_cost += if volume { net.degree(v) as u64 } else { 1 };
                        }
                    }
                }
                forward_scans += layer_scans;
                f.forward_begin = end;
                f.forward_cost = next_cost;
                f.forward_layers += 1;
            } else {
                let end = f.backward_queue.len();
                for i in f.backward_begin..end {
                    let u = f.backward_queue[i];
                    let next = labels.states[u].dist_t + 1;
                    for a in net.arc_range(u) {
                        layer_scans += 1;
                        let arc = &arcs[a];
                        // residual of head -> u, the twin of `a`
                        let open = if undirected {
                            arc.capacity + arc.flow > 0
                        } else {
                            arcs[arc.twin].residual() > 0
                        };
                        if !open {
                            continue;
                        }
                        let v = arc.head;
                        Self::touch(labels, net, v, &mut writes);
                        let state = &mut labels.states[v];
                        if state.dist_t == UNLABELLED {
                            state.dist_t = next;
                            met |= state.dist_s != UNLABELLED;
                            f.backward_queue.push(v);
                            next_cost += if volume { net.degree(v) as u64 } else { 1 };
                        }
                    }
                }
                backward_scans += layer_scans;
                f.backward_begin = end;
                f.backward_cost = next_cost;
                f.backward_layers += 1;
            }
            if met {
                break;
            }
        }

        let mut next_forward = 0;
        let mut intersection = 0;
        for &v in &f.forward_queue[f.forward_begin..] {
            if labels.states[v].dist_t != UNLABELLED {
                intersection += net.degree(v) as u64;
            } else {
                next_forward += net.degree(v) as u64;
            }
        }
        let next_backward: u64 = f.backward_queue[f.backward_begin..]
            .iter()
            .filter(|&&v| labels.states[v].dist_s == UNLABELLED)
            .map(|&v| net.degree(v) as u64)
            .sum();
        let labelled_twice =
            f.forward_queue.iter().filter(|&&v| labels.states[v].dist_t != UNLABELLED).count();

        *stats.bfs_edges.last_mut().unwrap() = forward_scans + backward_scans;
        *stats.last_layer_edges.last_mut().unwrap() = layer_scans;
        *stats.init_writes.last_mut().unwrap() = writes;
        *stats.seen_vertices.last_mut().unwrap() =
            (f.forward_queue.len() + f.backward_queue.len() - labelled_twice) as u64;
        stats.forward += forward_scans;
        stats.backward += backward_scans;
        stats.next_forward += next_forward;
        stats.next_backward += next_backward;
        stats.intersection += intersection;
        if met {
            *stats.distance_per_round.last_mut().unwrap() = Some(f.forward_layers + f.backward_layers);
        }
        clock.add_to(&mut self.times.bfs);
        met
    }

    /// Whether the DFS may use arc `a` out of `u` in the current round.
    pub fn layered_arc_admissible(&self, net: &FlowNetwork, u: VertexId, a: usize) -> bool {
        admissible(net, &self.labels, self.skip_bound(), u, a)
    }

    fn skip_bound(&self) -> u32 {
        if self.config.skip_next_forward_layer {
            self.frontier.forward_layers
        } else {
            UNLABELLED
        }
    }

    /// Augments a blocking flow of the relaxed layered network labelled by
    /// the last [`bidir_bfs`](Self::bidir_bfs). The DFS always starts at the
    /// source.
    pub fn blocking_flow(&mut self, net: &mut FlowNetwork, pair: TerminalPair, stats: &mut SearchSpaceStats) -> i64 {
        let clock = Stopwatch::start(self.timing);
        let bound = self.skip_bound();
        let added = augment_blocking_flow(net, &mut self.labels, &mut self.path, pair, stats, |net, labels, u, a| {
            admissible(net, labels, bound, u, a)
        });
        clock.add_to(&mut self.times.dfs);
        added
    }

    pub fn max_flow(&mut self, net: &mut FlowNetwork, pair: TerminalPair) -> FlowResult {
        self.times = StageTimes::default();
        let mut stats = SearchSpaceStats::default();
        let mut value = 0;
        while self.bidir_bfs(net, pair, &mut stats) {
            value += self.blocking_flow(net, pair, &mut stats);
        }
        self.solved = Some((pair, value));
        FlowResult { value, rounds: stats.rounds(), stats, times: self.times }
    }

    pub fn min_cut_source_side(&mut self, net: &FlowNetwork, pair: TerminalPair) -> Result<CutResult> {
        let value = match self.solved {
            Some((solved, value)) if solved == pair => value,
            _ => return Err(FlowError::Contract(format!("no maximum flow computed for {pair:?}"))),
        };
        source_side_cut(net, pair, value, &mut self.marks)
    }
}

/// Relaxed layered-network test. Labels of stale records read as unset.
/// Arcs into the pending forward layer (`dist_s == skip_bound`) are refused
/// unless the head was also reached by the backward search.
#[inline]
fn admissible(net: &FlowNetwork, labels: &SearchLabels, skip_bound: u32, u: VertexId, a: usize) -> bool {
    let arc = net.arc(a);
    if arc.residual() <= 0 {
        return false;
    }
    let v = arc.head;
    if !labels.valid(v) {
        return false;
    }
    let from = labels.states[u];
    let to = labels.states[v];
    if from.dist_s != UNLABELLED && to.dist_s == from.dist_s + 1 {
        return to.dist_s != skip_bound || to.dist_t != UNLABELLED;
    }
    from.dist_t != UNLABELLED && to.dist_t != UNLABELLED && from.dist_t == to.dist_t + 1
}
