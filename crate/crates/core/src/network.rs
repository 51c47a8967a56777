//! Arc-paired adjacency array backing every solver in the crate.
//!
//! Each input edge `(u, v, c)` becomes two arcs: `u -> v` with capacity `c`
//! and its twin `v -> u` with capacity `0` (directed) or `c` (undirected).
//! Arcs are stored contiguously and grouped by tail vertex, so the residual
//! network is implicit in `capacity - flow` and no structural change is ever
//! needed during a flow computation.
//!
//! Every arc pair whose flow leaves zero is appended to a touched list, which
//! lets [`FlowNetwork::reset_flows`] clear a flow in time proportional to the
//! arcs that actually carried flow instead of the whole network.

use std::ops::Range;

use crate::error::{FlowError, Result};

pub type VertexId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub head: VertexId,
    pub twin: usize,
    pub capacity: i64,
    pub flow: i64,
}

impl Arc {
    #[inline]
    pub fn residual(&self) -> i64 {
        self.capacity - self.flow
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TerminalPair {
    pub source: VertexId,
    pub sink: VertexId,
}

impl TerminalPair {
    pub fn new(source: VertexId, sink: VertexId) -> Result<Self> {
        if source == sink {
            return Err(FlowError::Input(format!("source and sink are both {source}")));
        }
        Ok(Self { source, sink })
    }

    pub fn swapped(self) -> Self {
        Self { source: self.sink, sink: self.source }
    }

    /// Errors unless both terminals are vertices of an `n`-vertex network.
    pub fn check_bounds(&self, n: usize) -> Result<()> {
        if self.source >= n || self.sink >= n || self.source == self.sink {
            return Err(FlowError::Input(format!("invalid terminal pair {self:?} for {n} vertices")));
        }
        Ok(())
    }

    pub(crate) fn check(&self, n: usize) {
        assert!(
            self.source < n && self.sink < n && self.source != self.sink,
            "invalid terminal pair {self:?} for {n} vertices"
        );
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    n: usize,
    arcs: Vec<Arc>,
    /// `first[v]..first[v + 1]` is the arc range of `v`.
    first: Vec<usize>,
    directed: bool,
    touched: Vec<usize>,
    augmented_arcs: u64,
}

impl FlowNetwork {
    /// Builds the network in one counting-sort pass over `edges`.
    ///
    /// Within a vertex, arcs keep the order of the edges that produced them.
    /// Self-loops are dropped and parallel edges are kept.
    pub fn build(n: usize, edges: &[(VertexId, VertexId, i64)], directed: bool) -> Result<Self> {
        let mut first = vec![0usize; n + 1];
        for (i, &(u, v, c)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(FlowError::Input(format!(
                    "edge {i} ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if c < 0 {
                return Err(FlowError::Input(format!("edge {i} ({u}, {v}) has negative capacity {c}")));
            }
            if u != v {
                first[u + 1] += 1;
                first[v + 1] += 1;
            }
        }
        for v in 0..n {
            first[v + 1] += first[v];
        }
        let placeholder = Arc { head: 0, twin: 0, capacity: 0, flow: 0 };
        let mut arcs = vec![placeholder; first[n]];
        let mut next = first[..n].to_vec();
        for &(u, v, c) in edges {
            if u == v {
                continue;
            }
            let a = next[u];
            next[u] += 1;
            let b = next[v];
            next[v] += 1;
            arcs[a] = Arc { head: v, twin: b, capacity: c, flow: 0 };
            arcs[b] = Arc { head: u, twin: a, capacity: if directed { 0 } else { c }, flow: 0 };
        }
        Ok(Self { n, arcs, first, directed, touched: Vec::new(), augmented_arcs: 0 })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of stored arcs, twice the number of kept input edges.
    #[inline]
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn edge_count(&self) -> usize {
        self.arcs.len() / 2
    }

    #[inline]
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    #[inline]
    pub fn arc(&self, a: usize) -> &Arc {
        &self.arcs[a]
    }

    #[inline]
    pub fn arc_range(&self, v: VertexId) -> Range<usize> {
        self.first[v]..self.first[v + 1]
    }

    /// Size of the arc range of `v`: out-arcs plus twins of in-arcs.
    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.first[v + 1] - self.first[v]
    }

    /// Sum of capacities over the arc range of `v`.
    pub fn weighted_degree(&self, v: VertexId) -> i64 {
        self.arcs[self.arc_range(v)].iter().map(|a| a.capacity).sum()
    }

    #[inline]
    pub fn head(&self, a: usize) -> VertexId {
        self.arcs[a].head
    }

    #[inline]
    pub fn tail(&self, a: usize) -> VertexId {
        self.arcs[self.arcs[a].twin].head
    }

    #[inline]
    pub fn twin(&self, a: usize) -> usize {
        self.arcs[a].twin
    }

    #[inline]
    pub fn capacity(&self, a: usize) -> i64 {
        self.arcs[a].capacity
    }

    #[inline]
    pub fn flow(&self, a: usize) -> i64 {
        self.arcs[a].flow
    }

    #[inline]
    pub fn residual(&self, a: usize) -> i64 {
        self.arcs[a].residual()
    }

    /// Residual capacity of `twin(a)` computed from `a` alone.
    ///
    /// Only valid on undirected networks, where both arcs of a pair share
    /// their capacity and carry opposite flows.
    #[inline]
    pub fn residual_of_incoming(&self, a: usize) -> i64 {
        assert!(!self.directed, "residual_of_incoming requires an undirected network");
        let arc = &self.arcs[a];
        arc.capacity + arc.flow
    }

    /// Pushes `delta` units along `a`, adjusting the twin.
    pub fn augment(&mut self, a: usize, delta: i64) {
        let arc = self.arcs[a];
        assert!(
            delta > 0 && delta <= arc.residual(),
            "augment of {delta} exceeds residual {} on arc {a}",
            arc.residual()
        );
        if arc.flow == 0 {
            self.touched.push(a);
        }
        self.arcs[a].flow += delta;
        self.arcs[arc.twin].flow -= delta;
        self.augmented_arcs += 2;
    }

    /// Clears the flow on every touched arc pair and returns the number of
    /// arcs written.
    pub fn reset_flows(&mut self) -> usize {
        let mut visited = 0;
        for a in self.touched.drain(..) {
            let twin = self.arcs[a].twin;
            self.arcs[a].flow = 0;
            self.arcs[twin].flow = 0;
            visited += 2;
        }
        self.augmented_arcs = 0;
        visited
    }

    /// Clears every arc by a full scan. Returns the number of arcs written.
    pub fn reset_all_flows(&mut self) -> usize {
        for arc in &mut self.arcs {
            arc.flow = 0;
        }
        self.touched.clear();
        self.augmented_arcs = 0;
        self.arcs.len()
    }

    /// Pending entries of the touched list.
    pub fn touched(&self) -> &[usize] {
        &self.touched
    }

    /// Arc flow updates (two per augment) since the last reset.
    pub fn augmented_arcs(&self) -> u64 {
        self.augmented_arcs
    }

    /// Net flow leaving `v`.
    pub fn net_outflow(&self, v: VertexId) -> i64 {
        self.arcs[self.arc_range(v)].iter().map(|a| a.flow).sum()
    }

    /// Net flow entering `v`; the excess of a preflow.
    pub fn excess(&self, v: VertexId) -> i64 {
        -self.net_outflow(v)
    }

    /// Total capacity of arcs leaving the vertex set marked in `side`.
    pub fn cut_capacity(&self, side: &[bool]) -> i64 {
        let mut total = 0;
        for v in (0..self.n).filter(|&v| side[v]) {
            for arc in &self.arcs[self.arc_range(v)] {
                if !side[arc.head] {
                    total += arc.capacity;
                }
            }
        }
        total
    }

    /// Same as [`cut_capacity`](Self::cut_capacity) for a cut given by its
    /// member list; runs in the volume of the members.
    pub fn cut_capacity_of(&self, members: &[VertexId], marks: &mut VertexMarks) -> i64 {
        marks.clear();
        for &v in members {
            marks.mark(v);
        }
        let mut total = 0;
        for &v in members {
            for arc in &self.arcs[self.arc_range(v)] {
                if !marks.is_marked(arc.head) {
                    total += arc.capacity;
                }
            }
        }
        total
    }

    /// Vertices reachable from `from` over arcs with positive residual, in
    /// BFS order.
    pub fn residual_reachable(&self, from: VertexId, marks: &mut VertexMarks) -> Vec<VertexId> {
        self.residual_search(from, marks, false)
    }

    /// Vertices that reach `to` over arcs with positive residual, in BFS order.
    pub fn residual_coreachable(&self, to: VertexId, marks: &mut VertexMarks) -> Vec<VertexId> {
        self.residual_search(to, marks, true)
    }

    fn residual_search(&self, root: VertexId, marks: &mut VertexMarks, backward: bool) -> Vec<VertexId> {
        marks.clear();
        marks.mark(root);
        let mut order = vec![root];
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for a in self.arc_range(u) {
                let open = if backward {
                    self.arcs[self.arcs[a].twin].residual() > 0
                } else {
                    self.arcs[a].residual() > 0
                };
                let v = self.arcs[a].head;
                if open && marks.mark(v) {
                    order.push(v);
                }
            }
        }
        order
    }

    /// Full-scan consistency check of the arc invariants: twin involution,
    /// flow asymmetry, capacity constraint and touched-list coverage.
    pub fn verify_arcs(&self) -> std::result::Result<(), String> {
        let mut covered = vec![false; self.arcs.len()];
        for &a in &self.touched {
            covered[a] = true;
            covered[self.arcs[a].twin] = true;
        }
        for (a, arc) in self.arcs.iter().enumerate() {
            if self.arcs[arc.twin].twin != a {
                return Err(format!("twin of twin of arc {a} is not {a}"));
            }
            if arc.flow != -self.arcs[arc.twin].flow {
                return Err(format!("arc {a} flow {} is not the negated twin flow", arc.flow));
            }
            if arc.residual() < 0 {
                return Err(format!("arc {a} flow {} exceeds capacity {}", arc.flow, arc.capacity));
            }
            if arc.flow != 0 && !covered[a] {
                return Err(format!("arc {a} carries flow but is not in the touched list"));
            }
        }
        Ok(())
    }
}

/// Reusable vertex set with O(1) clearing, backed by epoch stamps.
#[derive(Debug, Clone)]
pub struct VertexMarks {
    stamp: Vec<u32>,
    epoch: u32,
}

impl VertexMarks {
    pub fn new(n: usize) -> Self {
        Self { stamp: vec![0; n], epoch: 1 }
    }

    pub fn len(&self) -> usize {
        self.stamp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stamp.is_empty()
    }

    pub fn clear(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
    }

    /// Marks `v`; returns false if it was already marked.
    #[inline]
    pub fn mark(&mut self, v: VertexId) -> bool {
        if self.stamp[v] == self.epoch {
            false
        } else {
            self.stamp[v] = self.epoch;
            true
        }
    }

    #[inline]
    pub fn is_marked(&self, v: VertexId) -> bool {
        self.stamp[v] == self.epoch
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directed_edge_gets_zero_capacity_twin() {
        let net = FlowNetwork::build(2, &[(0, 1, 5)], true).unwrap();
        assert_eq!(net.arc_count(), 2);
        let a = net.arc_range(0).start;
        assert_eq!((net.head(a), net.capacity(a)), (1, 5));
        let b = net.twin(a);
        assert_eq!((net.head(b), net.capacity(b)), (0, 0));
    }

    #[test]
    fn undirected_edge_twin_shares_capacity() {
        let net = FlowNetwork::build(2, &[(0, 1, 5)], false).unwrap();
        let b = net.arc_range(1).start;
        assert_eq!((net.head(b), net.capacity(b)), (0, 5));
    }

    #[test]
    fn arcs_are_grouped_by_tail() {
        let net = FlowNetwork::build(3, &[(0, 1, 1), (1, 2, 1)], true).unwrap();
        let mut heads: Vec<_> = net.arc_range(1).map(|a| (net.head(a), net.capacity(a))).collect();
        heads.sort();
        assert_eq!(heads, vec![(0, 0), (2, 1)]);
        for v in 0..3 {
            for a in net.arc_range(v) {
                assert_eq!(net.tail(a), v);
            }
        }
    }

    #[test]
    fn self_loops_dropped_parallel_edges_kept() {
        let net = FlowNetwork::build(2, &[(0, 0, 3), (0, 1, 1), (0, 1, 2)], true).unwrap();
        assert_eq!(net.arc_count(), 4);
        assert_eq!(net.edge_count(), 2);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(matches!(FlowNetwork::build(2, &[(0, 2, 1)], true), Err(FlowError::Input(_))));
        assert!(matches!(FlowNetwork::build(2, &[(0, 1, -1)], true), Err(FlowError::Input(_))));
    }

    #[test]
    fn residual_bookkeeping() {
        let mut net = FlowNetwork::build(2, &[(0, 1, 5)], false).unwrap();
        let a = net.arc_range(0).start;
        let b = net.twin(a);
        assert_eq!(net.residual(a), 5);
        net.augment(a, 3);
        assert_eq!(net.residual(a), 2);
        assert_eq!(net.residual(b), 5 + 3);
        net.augment(a, 2);
        assert_eq!(net.residual(a), 0);
        // f(twin) = -5, so residual(twin) = 5 - (-5)
        assert_eq!(net.residual(b), 10);
        net.verify_arcs().unwrap();
    }

    #[test]
    fn augment_and_undo_cancels() {
        let mut net = FlowNetwork::build(2, &[(0, 1, 5)], true).unwrap();
        let a = net.arc_range(0).start;
        net.augment(a, 3);
        net.augment(net.twin(a), 3);
        assert_eq!(net.arc(a).flow, 0);
        assert_eq!(net.arc(net.twin(a)).flow, 0);
    }

    #[test]
    #[should_panic(expected = "exceeds residual")]
    fn augment_past_residual_panics() {
        let mut net = FlowNetwork::build(2, &[(0, 1, 5)], true).unwrap();
        let a = net.arc_range(0).start;
        net.augment(a, 6);
    }

    #[test]
    fn incoming_residual_from_outgoing_arc() {
        let mut net = FlowNetwork::build(2, &[(0, 1, 5)], false).unwrap();
        let a = net.arc_range(0).start;
        assert_eq!(net.residual_of_incoming(a), 5);
        net.augment(a, 2);
        assert_eq!(net.residual_of_incoming(a), 7);
        assert_eq!(net.residual_of_incoming(a), net.residual(net.twin(a)));
        net.augment(a, 3);
        assert_eq!(net.residual_of_incoming(a), 10);
    }

    #[test]
    #[should_panic(expected = "undirected")]
    fn incoming_residual_rejects_directed() {
        let net = FlowNetwork::build(2, &[(0, 1, 5)], true).unwrap();
        net.residual_of_incoming(0);
    }

    #[test]
    fn reset_visits_only_touched_arcs() {
        let mut net = FlowNetwork::build(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 4)], true).unwrap();
        assert_eq!(net.reset_flows(), 0);
        let a = net.arc_range(0).start;
        net.augment(a, 1);
        assert_eq!(net.augmented_arcs(), 2);
        assert_eq!(net.reset_flows(), 2);
        assert!(net.arcs().iter().all(|arc| arc.flow == 0));
        assert_eq!(net.reset_flows(), 0);
    }

    #[test]
    fn marks_clear_in_constant_time() {
        let mut marks = VertexMarks::new(3);
        assert!(marks.mark(1));
        assert!(!marks.mark(1));
        marks.clear();
        assert!(!marks.is_marked(1));
    }

    #[test]
    fn cut_capacity_routes_agree() {
        let net = FlowNetwork::build(4, &[(0, 1, 3), (0, 2, 2), (1, 3, 2), (2, 3, 3), (1, 2, 1)], true).unwrap();
        let mut marks = VertexMarks::new(4);
        assert_eq!(net.cut_capacity(&[true, false, false, false]), 5);
        assert_eq!(net.cut_capacity_of(&[0, 1], &mut marks), 2 + 2 + 1);
        assert_eq!(net.cut_capacity(&[true, true, false, false]), 5);
    }
}
