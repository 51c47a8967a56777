//! Deterministic search-space counters and stage timers.

use std::time::Duration;

/// Arc-scan counters collected by a flow computation.
///
/// Per-round vectors have one entry per BFS invocation, including the final
/// one that fails to reach the sink. The region totals split BFS work the way
/// a bidirectional search sees the graph: arcs scanned by the forward and
/// backward searches, and the arc volume of the vertices that would be
/// expanded next on either side. Vertices pending on both sides count towards
/// `intersection` only. An arc scanned by both directions is counted once per
/// scan.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchSpaceStats {
    pub bfs_edges: Vec<u64>,
    pub dfs_edges: Vec<u64>,
    pub flow_per_round: Vec<i64>,
    /// s-t distance established by each round's BFS; `None` when unreachable.
    pub distance_per_round: Vec<Option<u32>>,
    /// Vertices labelled by each round's BFS.
    pub seen_vertices: Vec<u64>,
    /// Per-vertex record initialisations performed in each round.
    pub init_writes: Vec<u64>,
    /// Arcs scanned by the last layer expansion of each round's BFS.
    pub last_layer_edges: Vec<u64>,
    pub forward: u64,
    pub backward: u64,
    pub next_forward: u64,
    pub next_backward: u64,
    pub intersection: u64,
    pub augmenting_paths: u64,
}

impl SearchSpaceStats {
    pub fn rounds(&self) -> usize {
        self.bfs_edges.len()
    }

    pub fn bfs_total(&self) -> u64 {
        self.bfs_edges.iter().sum()
    }

    pub fn dfs_total(&self) -> u64 {
        self.dfs_edges.iter().sum()
    }

    /// All arc scans of the flow computation.
    pub fn total(&self) -> u64 {
        self.bfs_total() + self.dfs_total()
    }

    pub(crate) fn begin_round(&mut self) {
        self.bfs_edges.push(0);
        self.dfs_edges.push(0);
        self.flow_per_round.push(0);
        self.distance_per_round.push(None);
        self.seen_vertices.push(0);
        self.init_writes.push(0);
        self.last_layer_edges.push(0);
    }
}

/// Wall-clock time spent in the phases of one flow computation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StageTimes {
    pub init: Duration,
    pub bfs: Duration,
    pub dfs: Duration,
    /// Push-relabel first stage.
    pub preflow: Duration,
    /// Push-relabel preflow-to-flow conversion.
    pub convert: Duration,
    /// Extraction of the cut's source side.
    pub cut: Duration,
}

impl StageTimes {
    /// Time needed to determine the flow value.
    pub fn flow(&self) -> Duration {
        self.init + self.bfs + self.dfs + self.preflow
    }
}

impl std::ops::AddAssign for StageTimes {
    fn add_assign(&mut self, t: Self) {
        self.init += t.init;
        self.bfs += t.bfs;
        self.dfs += t.dfs;
        self.preflow += t.preflow;
        self.convert += t.convert;
        self.cut += t.cut;
    }
}

/// Optional stopwatch; a disabled one never reads the clock.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Stopwatch(Option<std::time::Instant>);

impl Stopwatch {
    #[inline]
    pub(crate) fn start(enabled: bool) -> Self {
        Self(enabled.then(std::time::Instant::now))
    }

    #[inline]
    pub(crate) fn add_to(self, slot: &mut Duration) {
        if let Some(t) = self.0 {
            *slot += t.elapsed();
        }
    }
}
