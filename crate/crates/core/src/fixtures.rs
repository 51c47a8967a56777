//! Small canonical networks used by examples and tests.
//!
//! * `PATH4`: undirected unit path 0-1-2-3, terminals (0, 3).
//! * `DIAMOND`: directed s=0, a=1, b=2, t=3 with s→a:3, s→b:2, a→t:2,
//!   b→t:3, a→b:1; max flow 5.
//! * `STAR5`: undirected unit star, center 0, leaves 1-4, terminals (1, 2).
//! * `TRIANGLE`: undirected unit triangle, terminals (0, 1).

use crate::network::{FlowNetwork, TerminalPair, VertexId};

pub type EdgeList = Vec<(VertexId, VertexId, i64)>;

pub fn path4_edges() -> EdgeList {
    vec![(0, 1, 1), (1, 2, 1), (2, 3, 1)]
}

pub fn diamond_edges() -> EdgeList {
    vec![(0, 1, 3), (0, 2, 2), (1, 3, 2), (2, 3, 3), (1, 2, 1)]
}

pub fn star5_edges() -> EdgeList {
    (1..5).map(|leaf| (0, leaf, 1)).collect()
}

pub fn triangle_edges() -> EdgeList {
    vec![(0, 1, 1), (1, 2, 1), (0, 2, 1)]
}

fn make(n: usize, edges: EdgeList, directed: bool, s: VertexId, t: VertexId) -> (FlowNetwork, TerminalPair) {
    let net = FlowNetwork::build(n, &edges, directed).expect("fixture is valid");
    (net, TerminalPair { source: s, sink: t })
}

pub fn path4() -> (FlowNetwork, TerminalPair) {
    make(4, path4_edges(), false, 0, 3)
}

pub fn diamond() -> (FlowNetwork, TerminalPair) {
    make(4, diamond_edges(), true, 0, 3)
}

pub fn star5() -> (FlowNetwork, TerminalPair) {
    make(5, star5_edges(), false, 1, 2)
}

pub fn triangle() -> (FlowNetwork, TerminalPair) {
    make(3, triangle_edges(), false, 0, 1)
}
