//! Gusfield's Gomory-Hu tree construction.
//!
//! [`gusfield`] needs `n - 1` minimum-cut computations on the unmodified
//! network. Vertex 0 is the root and the initial parent of every vertex.

use std::io::Write;

use crate::dinitz::{CutResult, Dinitz};
use crate::error::{FlowError, Result};
use crate::network::{FlowNetwork, TerminalPair, VertexId};
use crate::stats::StageTimes;

/// A minimum-cut source shared by all Gusfield iterations. Implementations
/// clear any flow left on `net` before computing the cut.
pub trait CutOracle {
    fn cut(&mut self, net: &mut FlowNetwork, pair: TerminalPair) -> Result<CutResult>;

    /// Stage times of the last call, if the oracle records them.
    fn stage_times(&self) -> StageTimes {
        StageTimes::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GomoryHuTree {
    parent: Vec<VertexId>,
    weight: Vec<i64>,
}

/// Per-construction counters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GusfieldStats {
    pub oracle_calls: usize,
    /// Oracle pairs in call order.
    pub pairs: Vec<TerminalPair>,
    pub source_degree_sum: u64,
    pub sink_degree_sum: u64,
    /// Cuts whose value equals the smaller weighted terminal degree.
    pub trivial_cuts: usize,
    pub reparented: usize,
    pub times: StageTimes,
}

/// Builds a Gomory-Hu tree of an undirected network. Leaves all flows zero.
pub fn gusfield(net: &mut FlowNetwork, oracle: &mut impl CutOracle) -> Result<(GomoryHuTree, GusfieldStats)> {
    if net.is_directed() {
        return Err(FlowError::Input("Gomory-Hu trees need an undirected network".into()));
    }
    let n = net.n();
    if n == 0 {
        return Err(FlowError::Input("empty network".into()));
    }
    let mut parent = vec![0; n];
    let mut weight = vec![0; n];
    let mut stats = GusfieldStats::default();
    let mut in_side = vec![false; n];

    for i in 1..n {
        let pair = TerminalPair { source: i, sink: parent[i] };
        let cut = oracle.cut(net, pair)?;
        stats.oracle_calls += 1;
        stats.pairs.push(pair);
        stats.times += oracle.stage_times();
        stats.source_degree_sum += net.degree(pair.source) as u64;
        stats.sink_degree_sum += net.degree(pair.sink) as u64;
        if cut.value == net.weighted_degree(pair.source).min(net.weighted_degree(pair.sink)) {
            stats.trivial_cuts += 1;
        }

        for &v in &cut.source_side {
            if v >= n {
                return Err(FlowError::Construction(format!("cut for {pair:?} names vertex {v}")));
            }
            in_side[v] = true;
        }
        if !in_side[i] || in_side[parent[i]] {
            return Err(FlowError::Construction(format!("cut for {pair:?} does not separate the terminals")));
        }
        weight[i] = cut.value;
        let p = parent[i];
        for j in i + 1..n {
            if parent[j] == p && in_side[j] {
                parent[j] = i;
                stats.reparented += 1;
            }
        }
        for &v in &cut.source_side {
            in_side[v] = false;
        }
    }
    net.reset_flows();
    Ok((GomoryHuTree { parent, weight }, stats))
}

impl GomoryHuTree {
    /// Tree from explicit parent links; `parent[0]` must be 0.
    pub fn from_parts(parent: Vec<VertexId>, weight: Vec<i64>) -> Result<Self> {
        let n = parent.len();
        if n == 0 || weight.len() != n || parent[0] != 0 {
            return Err(FlowError::Input("malformed tree: root must be vertex 0".into()));
        }
        if let Some(v) = (1..n).find(|&v| parent[v] >= n || weight[v] < 0) {
            return Err(FlowError::Input(format!("malformed tree entry for vertex {v}")));
        }
        // every vertex must reach the root
        let mut state = vec![0u8; n];
        state[0] = 2;
        for v in 1..n {
            let mut chain = Vec::new();
            let mut u = v;
            while state[u] == 0 {
                state[u] = 1;
                chain.push(u);
                u = parent[u];
            }
            if state[u] == 1 {
                return Err(FlowError::Input(format!("parent links of vertex {v} form a cycle")));
            }
            for w in chain {
                state[w] = 2;
            }
        }
        Ok(Self { parent, weight })
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: VertexId) -> VertexId {
        self.parent[v]
    }

    /// Weight of the edge to the parent; 0 at the root.
    pub fn weight(&self, v: VertexId) -> i64 {
        self.weight[v]
    }

    pub fn set_weight(&mut self, v: VertexId, w: i64) {
        self.weight[v] = w;
    }

    /// Minimum edge weight on the tree path between `u` and `v`.
    pub fn min_cut(&self, u: VertexId, v: VertexId) -> Result<i64> {
        if u == v {
            return Err(FlowError::Input(format!("min cut query with identical vertices {u}")));
        }
        let n = self.n();
        if u >= n || v >= n {
            return Err(FlowError::Input(format!("vertex out of range in query ({u}, {v})")));
        }
        // best[x] = min weight from u up to its ancestor x
        let mut best = vec![None; n];
        let mut x = u;
        let mut acc = i64::MAX;
        best[x] = Some(acc);
        while x != 0 {
            acc = acc.min(self.weight[x]);
            x = self.parent[x];
            best[x] = Some(acc);
        }
        let mut y = v;
        let mut acc_v = i64::MAX;
        while best[y].is_none() {
            acc_v = acc_v.min(self.weight[y]);
            y = self.parent[y];
        }
        Ok(acc_v.min(best[y].unwrap()))
    }

    /// Compares every pair against a direct maximum flow. Refuses networks
    /// with more than `max_n` vertices.
    pub fn validate(&self, net: &FlowNetwork, max_n: usize) -> Result<bool> {
        let n = net.n();
        if n > max_n {
            return Err(FlowError::Input(format!("validation limited to {max_n} vertices, got {n}")));
        }
        if n != self.n() {
            return Ok(false);
        }
        let mut work = net.clone();
        let mut dinitz = Dinitz::new(n);
        for u in 0..n {
            for v in u + 1..n {
                work.reset_all_flows();
                let flow = dinitz.max_flow(&mut work, TerminalPair { source: u, sink: v }).value;
                if self.min_cut(u, v)? != flow {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// "child parent weight" lines, one per non-root vertex.
    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        for v in 1..self.n() {
            writeln!(w, "{} {} {}", v, self.parent[v], self.weight[v])?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Reads the format of [`write_to`](Self::write_to). `n` is taken as one
    /// more than the largest child id unless given.
    pub fn parse(text: &str, n: Option<usize>) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed: Option<Vec<i64>> = fields.iter().map(|f| f.parse().ok()).collect();
            match parsed.as_deref() {
                Some(&[c, p, w]) if c > 0 && p >= 0 => rows.push((c as usize, p as usize, w)),
                _ => return Err(FlowError::Input(format!("line {}: expected \"child parent weight\"", i + 1))),
            }
        }
        let n = n.unwrap_or_else(|| rows.iter().map(|r| r.0 + 1).max().unwrap_or(1));
        let mut parent = vec![usize::MAX; n];
        let mut weight = vec![0; n];
        parent[0] = 0;
        for (c, p, w) in rows {
            if c >= n || parent[c] != usize::MAX {
                return Err(FlowError::Input(format!("vertex {c} listed twice or out of range")));
            }
            parent[c] = p;
            weight[c] = w;
        }
        if let Some(v) = parent.iter().position(|&p| p == usize::MAX) {
            return Err(FlowError::Input(format!("vertex {v} has no parent line")));
        }
        Self::from_parts(parent, weight)
    }
}
