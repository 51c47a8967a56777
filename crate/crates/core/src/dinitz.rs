//! Textbook Dinitz: unidirectional BFS layering, blocking flow by repeated
//! DFS with per-vertex next-arc counters, and source-side cut extraction.

use crate::error::{FlowError, Result};
use crate::network::{FlowNetwork, TerminalPair, VertexId, VertexMarks};
use crate::stats::{SearchSpaceStats, StageTimes, Stopwatch};

/// Distance value of a vertex not labelled in the current round.
pub const UNLABELLED: u32 = u32::MAX;

/// Per-vertex search state, stored interleaved so one load fetches all of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct VertexState {
    pub dist_s: u32,
    pub dist_t: u32,
    pub next_arc: usize,
    pub stamp: u64,
}

/// Distance labels, next-arc counters and round stamps for every vertex,
/// plus a pre-allocated BFS queue.
///
/// A vertex record is valid only if its stamp equals the current round; any
/// other record reads as unlabelled.
#[derive(Debug, Clone)]
pub struct SearchLabels {
    pub(crate) states: Vec<VertexState>,
    pub(crate) queue: Vec<VertexId>,
    pub(crate) round: u64,
}

impl SearchLabels {
    pub fn new(n: usize) -> Self {
        let blank = VertexState { dist_s: UNLABELLED, dist_t: UNLABELLED, next_arc: 0, stamp: 0 };
        Self { states: vec![blank; n], queue: Vec::with_capacity(n), round: 0 }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    #[inline]
    pub(crate) fn valid(&self, v: VertexId) -> bool {
        self.states[v].stamp == self.round
    }

    pub fn dist_s(&self, v: VertexId) -> Option<u32> {
        let d = self.states[v].dist_s;
        (self.valid(v) && d != UNLABELLED).then_some(d)
    }

    pub fn dist_t(&self, v: VertexId) -> Option<u32> {
        let d = self.states[v].dist_t;
        (self.valid(v) && d != UNLABELLED).then_some(d)
    }

    pub fn next_arc(&self, v: VertexId) -> Option<usize> {
        self.valid(v).then_some(self.states[v].next_arc)
    }

    /// Starts a new round; every record becomes stale.
    pub(crate) fn advance_round(&mut self) {
        self.round += 1;
    }

    #[inline]
    pub(crate) fn fresh(&mut self, net: &FlowNetwork, v: VertexId) {
        self.states[v] = VertexState {
            dist_s: UNLABELLED,
            dist_t: UNLABELLED,
            next_arc: net.arc_range(v).start,
            stamp: self.round,
        };
    }

    /// Eagerly initialises every vertex record; returns the number written.
    pub(crate) fn init_all(&mut self, net: &FlowNetwork) -> u64 {
        for v in 0..self.states.len() {
            self.fresh(net, v);
        }
        self.states.len() as u64
    }

    pub(crate) fn ensure_len(&mut self, n: usize) {
        if self.states.len() != n {
            *self = Self::new(n);
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FlowResult {
    pub value: i64,
    /// BFS invocations, including the final one that proves optimality.
    pub rounds: usize,
    pub stats: SearchSpaceStats,
    pub times: StageTimes,
}

/// Source side of a minimum cut and its capacity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CutResult {
    pub value: i64,
    pub source_side: Vec<VertexId>,
}

impl CutResult {
    pub fn contains(&self, v: VertexId) -> bool {
        self.source_side.contains(&v)
    }

    pub fn side_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.source_side {
            mask[v] = true;
        }
        mask
    }
}

/// Augments a blocking flow of the layered network defined by `admissible`.
///
/// Iterative DFS from `s`; after each augmentation the path is cut back to
/// the tail of its first saturated arc. Arcs behind a vertex's next-arc
/// counter are never scanned again in this round.
pub(crate) fn augment_blocking_flow(
    net: &mut FlowNetwork,
    labels: &mut SearchLabels,
    path: &mut Vec<usize>,
    pair: TerminalPair,
    stats: &mut SearchSpaceStats,
    admissible: impl Fn(&FlowNetwork, &SearchLabels, VertexId, usize) -> bool,
) -> i64 {
    let TerminalPair { source: s, sink: t } = pair;
    path.clear();
    let mut total = 0;
    let mut scans = 0u64;
    let mut u = s;
    loop {
        if u == t {
            let delta = path.iter().map(|&a| net.residual(a)).min().expect("non-empty path");
            for &a in path.iter() {
                net.augment(a, delta);
            }
            total += delta;
            stats.augmenting_paths += 1;
            let k = path.iter().position(|&a| net.residual(a) == 0).expect("bottleneck saturates");
            path.truncate(k);
            u = if k == 0 { s } else { net.head(path[k - 1]) };
            continue;
        }
        let end = net.arc_range(u).end;
        let mut a = labels.states[u].next_arc;
        let mut found = false;
        while a < end {
            scans += 1;
            if admissible(net, labels, u, a) {
                found = true;
                break;
            }
            a += 1;
        }
        labels.states[u].next_arc = a;
        if found {
            path.push(a);
            u = net.head(a);
        } else {
            match path.pop() {
                None => break,
                Some(back) => {
                    u = net.tail(back);
                    labels.states[u].next_arc += 1;
                }
            }
        }
    }
    *stats.dfs_edges.last_mut().expect("round started") += scans;
    *stats.flow_per_round.last_mut().expect("round started") += total;
    total
}

#[derive(Debug, Clone)]
pub struct Dinitz {
    labels: SearchLabels,
    path: Vec<usize>,
    marks: VertexMarks,
    times: StageTimes,
    timing: bool,
    solved: Option<(TerminalPair, i64)>,
}

impl Dinitz {
    pub fn new(n: usize) -> Self {
        Self {
            labels: SearchLabels::new(n),
            path: Vec::new(),
            marks: VertexMarks::new(n),
            times: StageTimes::default(),
            timing: false,
            solved: None,
        }
    }

    /// Enables stage timers for subsequent flow computations.
    pub fn with_timing(mut self, timing: bool) -> Self {
        self.timing = timing;
        self
    }

    pub fn labels(&self) -> &SearchLabels {
        &self.labels
    }

    fn prepare(&mut self, n: usize) {
        self.labels.ensure_len(n);
        if self.path.capacity() < n {
            self.path.reserve(n);
        }
        if self.marks.len() != n {
            self.marks = VertexMarks::new(n);
        }
    }

    /// Starts a round: initialises all labels, then labels vertices by BFS
    /// from the source until the layer containing the sink is discovered.
    /// The layer being expanded when the sink shows up is finished.
    pub fn bfs_layered(&mut self, net: &FlowNetwork, pair: TerminalPair, stats: &mut SearchSpaceStats) -> bool {
        pair.check(net.n());
        self.prepare(net.n());
        stats.begin_round();

        let clock = Stopwatch::start(self.timing);
        self.labels.advance_round();
        let writes = self.labels.init_all(net);
        *stats.init_writes.last_mut().unwrap() = writes;
        clock.add_to(&mut self.times.init);

        let clock = Stopwatch::start(self.timing);
        let TerminalPair { source: s, sink: t } = pair;
        let labels = &mut self.labels;
        labels.queue.clear();
        labels.states[s].dist_s = 0;
        labels.queue.push(s);
        let mut head = 0;
        let mut layer_end = 1;
        let mut found = false;
        let mut scans = 0u64;
        let mut layer_scans = 0u64;
        while head < labels.queue.len() {
            if head == layer_end {
                if found {
                    break;
                }
                layer_end = labels.queue.len();
                layer_scans = 0;
            }
            let u = labels.queue[head];
            head += 1;
            let next = labels.states[u].dist_s + 1;
            for a in net.arc_range(u) {
                scans += 1;
                layer_scans += 1;
                let arc = net.arc(a);
                if arc.residual() > 0 && labels.states[arc.head].dist_s == UNLABELLED {
                    labels.states[arc.head].dist_s = next;
                    labels.queue.push(arc.head);
                    found |= arc.head == t;
                }
            }
        }
        let pending: u64 = labels.queue[head..].iter().map(|&v| net.degree(v) as u64).sum();

        *stats.bfs_edges.last_mut().unwrap() = scans;
        *stats.last_layer_edges.last_mut().unwrap() = layer_scans;
        *stats.seen_vertices.last_mut().unwrap() = labels.queue.len() as u64;
        stats.forward += scans;
        stats.next_forward += pending;
        if found {
            *stats.distance_per_round.last_mut().unwrap() = Some(labels.states[t].dist_s);
        }
        clock.add_to(&mut self.times.bfs);
        found
    }

    /// Saturates the layered network built by the last
    /// [`bfs_layered`](Self::bfs_layered); returns the flow added.
    pub fn blocking_flow(&mut self, net: &mut FlowNetwork, pair: TerminalPair, stats: &mut SearchSpaceStats) -> i64 {
        let clock = Stopwatch::start(self.timing);
        let added = augment_blocking_flow(net, &mut self.labels, &mut self.path, pair, stats, |net, labels, u, a| {
            let arc = net.arc(a);
            arc.residual() > 0 && labels.states[arc.head].dist_s == labels.states[u].dist_s + 1
        });
        clock.add_to(&mut self.times.dfs);
        added
    }

    pub fn max_flow(&mut self, net: &mut FlowNetwork, pair: TerminalPair) -> FlowResult {
        self.times = StageTimes::default();
        let mut stats = SearchSpaceStats::default();
        let mut value = 0;
        while self.bfs_layered(net, pair, &mut stats) {
            value += self.blocking_flow(net, pair, &mut stats);
        }
        self.solved = Some((pair, value));
        FlowResult { value, rounds: stats.rounds(), stats, times: self.times }
    }

    /// Vertices reachable from the source in the residual network of the
    /// maximum flow just computed for `pair`.
    pub fn min_cut_source_side(&mut self, net: &FlowNetwork, pair: TerminalPair) -> Result<CutResult> {
        let value = match self.solved {
            Some((solved, value)) if solved == pair => value,
            _ => return Err(FlowError::Contract(format!("no maximum flow computed for {pair:?}"))),
        };
        source_side_cut(net, pair, value, &mut self.marks)
    }
}

/// Residual reachability from the source, checked against the flow value.
pub(crate) fn source_side_cut(
    net: &FlowNetwork,
    pair: TerminalPair,
    flow_value: i64,
    marks: &mut VertexMarks,
) -> Result<CutResult> {
    let mut source_side = net.residual_reachable(pair.source, marks);
    if marks.is_marked(pair.sink) {
        return Err(FlowError::Contract("sink still reachable; flow is not maximum".into()));
    }
    let value = net.cut_capacity_of(&source_side, marks);
    if value != flow_value {
        return Err(FlowError::Contract(format!(
            "cut capacity {value} differs from flow value {flow_value}"
        )));
    }
    source_side.sort_unstable();
    Ok(CutResult { value, source_side })
}
