//! Highest-label push-relabel with the gap heuristic.
//!
//! The solver runs in two stages. [`PushRelabel::preflow`] computes a maximum
//! preflow: it stops once no vertex below height `n` holds excess, at which
//! point the sink's excess is the max-flow value. Excess stranded at heights
//! `>= n` is sent back to the source by [`PushRelabel::convert_to_flow`],
//! which cancels flow cycles and then returns excess along incoming flow in
//! reverse topological order.
//!
//! Initial heights are exact residual distances to the sink. No periodic
//! global relabelling is done.

use crate::dinitz::{CutResult, FlowResult};
use crate::error::{FlowError, Result};
use crate::network::{FlowNetwork, TerminalPair, VertexId, VertexMarks};
use crate::stats::{SearchSpaceStats, StageTimes, Stopwatch};

const NIL: usize = usize::MAX;

/// How the source side of a minimum cut is obtained from push-relabel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum CutStrategy {
    /// Preflow, conversion to a flow, then BFS from the source.
    #[default]
    Convert,
    /// Preflow, backward BFS from the sink, then the complement.
    TSide,
    /// Preflow from sink to source, then backward BFS from the source.
    /// Undirected networks only.
    Swap,
}

impl CutStrategy {
    pub fn name(self) -> &'static str {
        match self {
            CutStrategy::Convert => "convert",
            CutStrategy::TSide => "tside",
            CutStrategy::Swap => "swap",
        }
    }
}

impl std::str::FromStr for CutStrategy {
    type Err = FlowError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "convert" => Ok(CutStrategy::Convert),
            "tside" | "t-side" => Ok(CutStrategy::TSide),
            "swap" => Ok(CutStrategy::Swap),
            other => Err(FlowError::Input(format!("unknown cut strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PushRelabelCounters {
    pub pushes: u64,
    pub relabels: u64,
    pub gaps: u64,
    /// Arcs examined while discharging.
    pub arc_scans: u64,
    /// Arcs examined by the initial height labelling.
    pub label_scans: u64,
}

#[derive(Debug, Clone)]
pub struct PushRelabel {
    height: Vec<usize>,
    excess: Vec<i64>,
    current: Vec<usize>,
    active: Vec<Vec<VertexId>>,
    is_active: Vec<bool>,
    highest: usize,
    // Doubly linked lists of all vertices per height below n, for gaps.
    level_head: Vec<usize>,
    level_next: Vec<usize>,
    level_prev: Vec<usize>,
    max_level: usize,
    marks: VertexMarks,
    queue: Vec<VertexId>,
    counters: PushRelabelCounters,
    times: StageTimes,
    timing: bool,
    check_validity: bool,
    pending: Option<TerminalPair>,
}

impl PushRelabel {
    pub fn new(n: usize) -> Self {
        Self {
            height: vec![0; n],
            excess: vec![0; n],
            current: vec![0; n],
            active: vec![Vec::new(); n.max(1)],
            is_active: vec![false; n],
            highest: 0,
            level_head: vec![NIL; n.max(1)],
            level_next: vec![NIL; n],
            level_prev: vec![NIL; n],
            max_level: 0,
            marks: VertexMarks::new(n),
            queue: Vec::with_capacity(n),
            counters: PushRelabelCounters::default(),
            times: StageTimes::default(),
            timing: false,
            check_validity: false,
            pending: None,
        }
    }

    pub fn with_timing(mut self, timing: bool) -> Self {
        self.timing = timing;
        self
    }

    /// Verifies the height invariant and the highest-label rule after every
    /// operation. Quadratic; meant for small test instances.
    pub fn with_validity_checks(mut self, check: bool) -> Self {
        self.check_validity = check;
        self
    }

    pub fn counters(&self) -> PushRelabelCounters {
        self.counters
    }

    pub fn times(&self) -> StageTimes {
        self.times
    }

    pub fn height(&self, v: VertexId) -> usize {
        self.height[v]
    }

    pub fn excess(&self, v: VertexId) -> i64 {
        self.excess[v]
    }

    fn level_insert(&mut self, v: VertexId, h: usize) {
        self.level_prev[v] = NIL;
        self.level_next[v] = self.level_head[h];
        if self.level_head[h] != NIL {
            self.level_prev[self.level_head[h]] = v;
        }
        self.level_head[h] = v;
        self.max_level = self.max_level.max(h);
    }

    fn level_remove(&mut self, v: VertexId, h: usize) {
        let (prev, next) = (self.level_prev[v], self.level_next[v]);
        if prev == NIL {
            self.level_head[h] = next;
        } else {
            self.level_next[prev] = next;
        }
        if next != NIL {
            self.level_prev[next] = prev;
        }
    }

    fn activate(&mut self, v: VertexId, n: usize) {
        let h = self.height[v];
        if !self.is_active[v] && h < n {
            self.is_active[v] = true;
            self.active[h].push(v);
            self.highest = self.highest.max(h);
        }
    }

    fn init(&mut self, net: &mut FlowNetwork, pair: TerminalPair) {
        let n = net.n();
        if self.height.len() != n {
            *self = Self { timing: self.timing, check_validity: self.check_validity, ..Self::new(n) };
        }
        self.counters = PushRelabelCounters::default();
        self.times = StageTimes::default();
        let TerminalPair { source: s, sink: t } = pair;

        self.height.fill(n);
        self.excess.fill(0);
        self.is_active.fill(false);
        for bucket in &mut self.active {
            bucket.clear();
        }
        self.level_head.fill(NIL);
        self.highest = 0;
        self.max_level = 0;
        for v in 0..n {
            self.current[v] = net.arc_range(v).start;
        }

        // exact distances to the sink over residual arcs
        self.height[t] = 0;
        self.queue.clear();
        self.queue.push(t);
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            for a in net.arc_range(u) {
                self.counters.label_scans += 1;
                let v = net.head(a);
                if v != s && self.height[v] == n && net.residual(net.twin(a)) > 0 {
                    self.height[v] = self.height[u] + 1;
                    self.queue.push(v);
                }
            }
        }
        for i in 0..self.queue.len() {
            let v = self.queue[i];
            self.level_insert(v, self.height[v]);
        }

        for a in net.arc_range(s) {
            let r = net.residual(a);
            if r > 0 {
                let v = net.head(a);
                net.augment(a, r);
                self.excess[s] -= r;
                self.excess[v] += r;
                if v != t {
                    self.activate(v, n);
                }
            }
        }
    }

    /// First stage: a maximum preflow. Returns the flow value, which is the
    /// sink's excess. Expects all flows to be zero.
    pub fn preflow(&mut self, net: &mut FlowNetwork, pair: TerminalPair) -> i64 {
        pair.check(net.n());
        let clock = Stopwatch::start(self.timing);
        self.init(net, pair);
        let mut init_time = std::time::Duration::ZERO;
        clock.add_to(&mut init_time);

        let clock = Stopwatch::start(self.timing);
        let n = net.n();
        loop {
            while self.highest > 0 && self.active[self.highest].is_empty() {
                self.highest -= 1;
            }
            let Some(u) = self.active[self.highest].pop() else {
                break;
            };
            self.is_active[u] = false;
            if self.height[u] != self.highest || self.excess[u] == 0 {
                continue;
            }
            if self.check_validity {
                self.assert_highest(u, n);
            }
            self.discharge(net, u, pair, n);
        }
        clock.add_to(&mut self.times.preflow);
        self.times.init = init_time;
        self.pending = Some(pair);
        self.excess[pair.sink]
    }

    fn discharge(&mut self, net: &mut FlowNetwork, u: VertexId, pair: TerminalPair, n: usize) {
        loop {
            let end = net.arc_range(u).end;
            let mut a = self.current[u];
            while a < end {
                self.counters.arc_scans += 1;
                let arc = *net.arc(a);
                let v = arc.head;
                if arc.residual() > 0 && self.height[u] == self.height[v] + 1 {
                    let delta = self.excess[u].min(arc.residual());
                    net.augment(a, delta);
                    self.counters.pushes += 1;
                    self.excess[u] -= delta;
                    self.excess[v] += delta;
                    if v != pair.source && v != pair.sink {
                        self.activate(v, n);
                    }
                    if self.check_validity {
                        self.assert_valid(net);
                    }
                    if self.excess[u] == 0 {
                        break;
                    }
                }
                a += 1;
            }
            self.current[u] = a.min(end);
            if self.excess[u] == 0 {
                return;
            }
            self.relabel(net, u, n);
            if self.check_validity {
                self.assert_valid(net);
            }
            if self.height[u] >= n {
                return;
            }
        }
    }

    fn relabel(&mut self, net: &FlowNetwork, u: VertexId, n: usize) {
        self.counters.relabels += 1;
        let old = self.height[u];
        self.level_remove(u, old);
        if self.level_head[old] == NIL {
            // Nothing left at `old`: everything above can no longer reach
            // the sink.
            self.counters.gaps += 1;
            for h in old + 1..=self.max_level {
                let mut v = self.level_head[h];
                while v != NIL {
                    self.height[v] = n;
                    v = self.level_next[v];
                }
                self.level_head[h] = NIL;
            }
            self.max_level = old.saturating_sub(1);
            self.height[u] = n;
            return;
        }
        let mut lowest = n;
        for a in net.arc_range(u) {
            self.counters.arc_scans += 1;
            if net.residual(a) > 0 {
                lowest = lowest.min(self.height[net.head(a)] + 1);
            }
        }
        self.height[u] = lowest.min(n);
        self.current[u] = net.arc_range(u).start;
        if self.height[u] < n {
            self.level_insert(u, self.height[u]);
        }
    }

    fn assert_valid(&self, net: &FlowNetwork) {
        for u in 0..net.n() {
            for a in net.arc_range(u) {
                if net.residual(a) > 0 {
                    let v = net.head(a);
                    assert!(
                        self.height[u] <= self.height[v] + 1,
                        "residual arc {u}->{v} spans heights {} and {}",
                        self.height[u],
                        self.height[v]
                    );
                }
            }
        }
    }

    fn assert_highest(&self, u: VertexId, n: usize) {
        for v in 0..self.height.len() {
            if self.is_active[v] && self.height[v] < n && self.excess[v] > 0 {
                assert!(self.height[v] <= self.height[u], "discharging {u} below active {v}");
            }
        }
    }

    /// Second stage: returns stranded excess to the source so the preflow
    /// becomes a flow of the same value.
    pub fn convert_to_flow(&mut self, net: &mut FlowNetwork, pair: TerminalPair) -> Result<()> {
        if self.pending != Some(pair) {
            return Err(FlowError::Contract(format!("no preflow computed for {pair:?}")));
        }
        let clock = Stopwatch::start(self.timing);
        let n = net.n();
        let TerminalPair { source: s, sink: t } = pair;
        const WHITE: u8 = 0;
        const GRAY: u8 = 1;
        const BLACK: u8 = 2;
        let mut color = vec![WHITE; n];
        let mut parent_arc = vec![NIL; n];
        let mut finished = Vec::new();
        let mut stack: Vec<VertexId> = Vec::new();

        // DFS over "reverse flow" arcs: `a` out of u with flow(a) < 0 means
        // flow enters u from head(a).
        for root in 0..n {
            if root == s || root == t || self.excess[root] <= 0 || color[root] != WHITE {
                continue;
            }
            color[root] = GRAY;
            self.current[root] = net.arc_range(root).start;
            stack.push(root);
            while let Some(&u) = stack.last() {
                let end = net.arc_range(u).end;
                let mut descended = false;
                while self.current[u] < end {
                    let a = self.current[u];
                    let v = net.head(a);
                    if net.flow(a) >= 0 || v == s || v == t || color[v] == BLACK {
                        self.current[u] += 1;
                        continue;
                    }
                    if color[v] == WHITE {
                        color[v] = GRAY;
                        parent_arc[v] = a;
                        self.current[v] = net.arc_range(v).start;
                        stack.push(v);
                        descended = true;
                        break;
                    }
                    // v is gray: cancel the cycle v -> ... -> u -> v
                    let pos = stack.iter().rposition(|&w| w == v).expect("gray vertex on stack");
                    let cycle: Vec<usize> =
                        stack[pos + 1..].iter().map(|&w| parent_arc[w]).chain(std::iter::once(a)).collect();
                    let delta = cycle.iter().map(|&c| -net.flow(c)).min().unwrap();
                    for &c in &cycle {
                        net.augment(c, delta);
                    }
                    // unwind to the tail of the first emptied arc
                    let cut = cycle.iter().position(|&c| net.flow(c) == 0).unwrap();
                    for &w in &stack[pos + cut + 1..] {
                        color[w] = WHITE;
                    }
                    stack.truncate(pos + cut + 1);
                    descended = true;
                    break;
                }
                if !descended {
                    color[u] = BLACK;
                    finished.push(u);
                    stack.pop();
                }
            }
        }

        for &v in finished.iter().rev() {
            let mut a = net.arc_range(v).start;
            let end = net.arc_range(v).end;
            while self.excess[v] > 0 && a < end {
                let inflow = -net.flow(a);
                if inflow > 0 {
                    let delta = inflow.min(self.excess[v]);
                    let u = net.head(a);
                    net.augment(a, delta);
                    self.excess[v] -= delta;
                    self.excess[u] += delta;
                }
                a += 1;
            }
            debug_assert_eq!(self.excess[v], 0);
        }
        clock.add_to(&mut self.times.convert);
        Ok(())
    }

    /// Flow value via the preflow stage only, in the shape of a Dinitz
    /// result: one round whose DFS counter holds the discharge arc scans.
    pub fn max_flow(&mut self, net: &mut FlowNetwork, pair: TerminalPair) -> FlowResult {
        let value = self.preflow(net, pair);
        let mut stats = SearchSpaceStats::default();
        stats.begin_round();
        stats.bfs_edges[0] = self.counters.label_scans;
        stats.dfs_edges[0] = self.counters.arc_scans;
        stats.flow_per_round[0] = value;
        FlowResult { value, rounds: 1, stats, times: self.times }
    }

    /// Minimum cut by one of the three extraction strategies. Expects all
    /// flows to be zero; leaves the computed (pre)flow in `net`.
    pub fn min_cut(&mut self, net: &mut FlowNetwork, pair: TerminalPair, strategy: CutStrategy) -> Result<CutResult> {
        if strategy == CutStrategy::Swap && net.is_directed() {
            return Err(FlowError::Input("the swap cut strategy needs an undirected network".into()));
        }
        let value = match strategy {
            CutStrategy::Convert | CutStrategy::TSide => self.preflow(net, pair),
            CutStrategy::Swap => self.preflow(net, pair.swapped()),
        };
        if strategy == CutStrategy::Convert {
            self.convert_to_flow(net, pair)?;
        }
        let clock = Stopwatch::start(self.timing);
        if self.marks.len() != net.n() {
            self.marks = VertexMarks::new(net.n());
        }
        let mut source_side = match strategy {
            CutStrategy::Convert => net.residual_reachable(pair.source, &mut self.marks),
            CutStrategy::TSide => {
                net.residual_coreachable(pair.sink, &mut self.marks);
                (0..net.n()).filter(|&v| !self.marks.is_marked(v)).collect()
            }
            CutStrategy::Swap => net.residual_coreachable(pair.source, &mut self.marks),
        };
        source_side.sort_unstable();
        let cut_value = net.cut_capacity_of(&source_side, &mut self.marks);
        clock.add_to(&mut self.times.cut);
        if source_side.binary_search(&pair.sink).is_ok() || source_side.binary_search(&pair.source).is_err() {
            return Err(FlowError::Contract(format!("{strategy:?} cut does not separate {pair:?}")));
        }
        if cut_value != value {
            return Err(FlowError::Contract(format!(
                "{strategy:?} cut capacity {cut_value} differs from flow value {value}"
            )));
        }
        Ok(CutResult { value, source_side })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn checked(n: usize) -> PushRelabel {
        PushRelabel::new(n).with_validity_checks(true)
    }

    fn assert_conserved(net: &FlowNetwork, pair: TerminalPair) {
        for v in 0..net.n() {
            if v != pair.source && v != pair.sink {
                assert_eq!(net.net_outflow(v), 0, "conservation at {v}");
            }
        }
    }

    #[test]
    fn single_edge_preflow() {
        let mut net = FlowNetwork::build(2, &[(0, 1, 5)], true).unwrap();
        let pair = TerminalPair::new(0, 1).unwrap();
        let mut pr = checked(2);
        assert_eq!(pr.preflow(&mut net, pair), 5);
        pr.convert_to_flow(&mut net, pair).unwrap();
        assert_eq!(net.excess(1), 5);
    }

    #[test]
    fn diamond_preflow_value() {
        let (mut net, pair) = fixtures::diamond();
        assert_eq!(checked(4).preflow(&mut net, pair), 5);
        net.verify_arcs().unwrap();
    }

    /// The source pushes 10 into a branch that can only pass 1 to the sink,
    /// and 10 into a dead end. The stranded excess must go back.
    #[test]
    fn conversion_returns_dead_end_excess() {
        // s=0, t=4; 0->1 (10), 1->4 (1), 0->2 (10), 2->3 (10), 3 is a dead end
        let edges = [(0, 1, 10), (1, 4, 1), (0, 2, 10), (2, 3, 10)];
        let mut net = FlowNetwork::build(5, &edges, true).unwrap();
        let pair = TerminalPair::new(0, 4).unwrap();
        let mut pr = checked(5);
        assert_eq!(pr.preflow(&mut net, pair), 1);
        assert!((1..4).any(|v| pr.excess(v) > 0));
        pr.convert_to_flow(&mut net, pair).unwrap();
        assert_conserved(&net, pair);
        assert_eq!(net.net_outflow(0), 1);
        net.verify_arcs().unwrap();
    }

    #[test]
    fn conversion_cancels_flow_cycles() {
        // undirected cycle 1-2-3 hanging off a narrow sink edge
        let edges = [(0, 1, 5), (1, 2, 5), (2, 3, 5), (3, 1, 5), (3, 4, 1)];
        let mut net = FlowNetwork::build(5, &edges, false).unwrap();
        let pair = TerminalPair::new(0, 4).unwrap();
        let mut pr = checked(5);
        assert_eq!(pr.preflow(&mut net, pair), 1);
        pr.convert_to_flow(&mut net, pair).unwrap();
        assert_conserved(&net, pair);
        assert_eq!(net.net_outflow(0), 1);
    }

    #[test]
    fn all_strategies_agree_on_single_edge() {
        for strategy in [CutStrategy::Convert, CutStrategy::TSide, CutStrategy::Swap] {
            let mut net = FlowNetwork::build(2, &[(0, 1, 5)], false).unwrap();
            let pair = TerminalPair::new(0, 1).unwrap();
            let cut = checked(2).min_cut(&mut net, pair, strategy).unwrap();
            assert_eq!((cut.value, cut.source_side), (5, vec![0]), "{strategy:?}");
        }
    }

    #[test]
    fn tside_on_star_is_complement_of_sink_side() {
        let (mut net, pair) = fixtures::star5();
        let cut = checked(5).min_cut(&mut net, pair, CutStrategy::TSide).unwrap();
        // after the preflow only the sink reaches itself
        assert_eq!(cut.value, 1);
        assert_eq!(cut.source_side, vec![0, 1, 3, 4]);
    }

    #[test]
    fn swap_rejected_on_directed() {
        let (mut net, pair) = fixtures::diamond();
        assert!(matches!(checked(4).min_cut(&mut net, pair, CutStrategy::Swap), Err(FlowError::Input(_))));
    }

    #[test]
    fn conversion_needs_preflow() {
        let (mut net, pair) = fixtures::diamond();
        assert!(PushRelabel::new(4).convert_to_flow(&mut net, pair).is_err());
    }

    #[test]
    fn strategy_names_round_trip() {
        for strategy in [CutStrategy::Convert, CutStrategy::TSide, CutStrategy::Swap] {
            assert_eq!(strategy.name().parse::<CutStrategy>().unwrap(), strategy);
        }
    }
}
