//! Test support: brute-force cut oracles, flow constraint checks and seeded
//! small-graph corpora.
//!
//! Nothing here depends on the solver crates. Every oracle works from plain
//! edge lists so it stays independent of the code paths it is used to check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Edge = (usize, usize, i64);

/// A small flow instance with designated terminals.
#[derive(Debug, Clone)]
pub struct SmallGraph {
    pub n: usize,
    pub edges: Vec<Edge>,
    pub directed: bool,
    pub source: usize,
    pub sink: usize,
}

/// Capacity of the cut `(S, V \ S)` where `in_source(v)` tells membership in S.
pub fn cut_capacity(edges: &[Edge], directed: bool, in_source: impl Fn(usize) -> bool) -> i64 {
    let mut total = 0;
    for &(u, v, c) in edges {
        if u == v {
            continue;
        }
        if (in_source(u) && !in_source(v)) || (!directed && in_source(v) && !in_source(u)) {
            total += c;
        }
    }
    total
}

/// Minimum s-t cut by enumerating all `2^(n-2)` partitions.
pub fn brute_min_cut(n: usize, edges: &[Edge], directed: bool, s: usize, t: usize) -> i64 {
    assert!(s != t && s < n && t < n);
    assert!(n <= 24, "exhaustive enumeration only for tiny graphs");
    let others: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut best = i64::MAX;
    for mask in 0u64..(1u64 << others.len()) {
        let mut side = vec![false; n];
        side[s] = true;
        for (bit, &v) in others.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                side[v] = true;
            }
        }
        best = best.min(cut_capacity(edges, directed, |v| side[v]));
    }
    best
}

/// All-pairs minimum cut of an undirected graph by enumerating every vertex
/// bipartition once. Entry `[u][v]` is the min u-v cut; the diagonal is 0.
pub fn brute_all_pairs_min_cut(n: usize, edges: &[Edge]) -> Vec<Vec<i64>> {
    assert!((2..=20).contains(&n));
    let mut best = vec![vec![i64::MAX; n]; n];
    for v in 0..n {
        best[v][v] = 0;
    }
    // Vertex 0 is pinned to one side; the cut is symmetric.
    for mask in 0u32..(1u32 << (n - 1)) {
        let full = (mask << 1) | 1;
        if full == (1u32 << n) - 1 {
            continue;
        }
        let inside = |v: usize| full >> v & 1 == 1;
        let value = cut_capacity(edges, false, inside);
        for u in 0..n {
            if !inside(u) {
                continue;
            }
            for v in 0..n {
                if inside(v) {
                    continue;
                }
                if value < best[u][v] {
                    best[u][v] = value;
                    best[v][u] = value;
                }
            }
        }
    }
    best
}

/// Checks capacity and conservation of a flow given as directed arcs
/// `(tail, head, capacity, flow)`. Returns the flow value out of `s`.
pub fn check_flow(n: usize, arcs: &[(usize, usize, i64, i64)], s: usize, t: usize) -> Result<i64, String> {
    let mut net_out = vec![0i64; n];
    for (i, &(u, _, cap, flow)) in arcs.iter().enumerate() {
        if flow > cap {
            return Err(format!("arc {i} carries {flow} over capacity {cap}"));
        }
        net_out[u] += flow;
    }
    for v in 0..n {
        if v != s && v != t && net_out[v] != 0 {
            return Err(format!("conservation violated at {v}: net outflow {}", net_out[v]));
        }
    }
    Ok(net_out[s])
}

/// BFS distances over arcs `(tail, head)`; `None` for unreachable vertices.
pub fn bfs_distances(n: usize, arcs: &[(usize, usize)], from: usize) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in arcs {
        adj[u].push(v);
    }
    let mut dist = vec![None; n];
    dist[from] = Some(0);
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(d + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Enumerates every shortest s-t path over the indexed arcs `(tail, head)`
/// and returns the set of arc indices that lie on at least one of them.
pub fn shortest_path_arc_indices(n: usize, arcs: &[(usize, usize)], s: usize, t: usize) -> Vec<usize> {
    let dist = bfs_distances(n, arcs, s);
    let Some(target) = dist[t] else {
        return Vec::new();
    };
    let mut out_arcs = vec![Vec::new(); n];
    for (i, &(u, _)) in arcs.iter().enumerate() {
        out_arcs[u].push(i);
    }
    let mut on_path = vec![false; arcs.len()];
    let mut path = Vec::new();
    fn walk(
        u: usize,
        t: usize,
        remaining: usize,
        arcs: &[(usize, usize)],
        out_arcs: &[Vec<usize>],
        path: &mut Vec<usize>,
        on_path: &mut [bool],
    ) {
        if u == t && remaining == 0 {
            for &a in path.iter() {
                on_path[a] = true;
            }
            return;
        }
        if remaining == 0 {
            return;
        }
        for &a in &out_arcs[u] {
            path.push(a);
            walk(arcs[a].1, t, remaining - 1, arcs, out_arcs, path, on_path);
            path.pop();
        }
    }
    walk(s, t, target, arcs, &out_arcs, &mut path, &mut on_path);
    (0..arcs.len()).filter(|&i| on_path[i]).collect()
}

/// Seeded corpus of random graphs with `2..=max_n` vertices and capacities
/// in `0..=max_cap`. Directed and undirected instances alternate randomly,
/// and parallel edges and self-loops appear occasionally.
pub fn random_corpus(count: usize, seed: u64, max_n: usize, max_cap: i64) -> Vec<SmallGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_small_graph(&mut rng, max_n, max_cap)).collect()
}

pub fn random_small_graph(rng: &mut impl Rng, max_n: usize, max_cap: i64) -> SmallGraph {
    let n = rng.gen_range(2..=max_n);
    let directed = rng.gen_bool(0.5);
    let max_edges = 3 * n;
    let m = rng.gen_range(0..=max_edges);
    let edges = (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n);
            let v = if rng.gen_bool(0.03) { u } else { rng.gen_range(0..n) };
            (u, v, rng.gen_range(0..=max_cap))
        })
        .collect();
    let source = rng.gen_range(0..n);
    let mut sink = rng.gen_range(0..n - 1);
    if sink >= source {
        sink += 1;
    }
    SmallGraph { n, edges, directed, source, sink }
}

/// Random connected undirected graph: a random spanning tree plus
/// `extra` random edges, capacities in `1..=max_cap`.
pub fn random_connected_undirected(rng: &mut impl Rng, n: usize, extra: usize, max_cap: i64) -> Vec<Edge> {
    let mut edges = Vec::with_capacity(n - 1 + extra);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v, rng.gen_range(1..=max_cap)));
    }
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.push((u, v, rng.gen_range(1..=max_cap)));
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diamond_min_cut_is_five() {
        // s=0, a=1, b=2, t=3
        let edges = [(0, 1, 3), (0, 2, 2), (1, 3, 2), (2, 3, 3), (1, 2, 1)];
        assert_eq!(brute_min_cut(4, &edges, true, 0, 3), 5);
    }

    #[test]
    fn triangle_all_pairs_are_two() {
        let edges = [(0, 1, 1), (1, 2, 1), (0, 2, 1)];
        let cuts = brute_all_pairs_min_cut(3, &edges);
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(cuts[u][v], if u == v { 0 } else { 2 });
            }
        }
    }

    #[test]
    fn all_pairs_matches_pairwise_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let n = rng.gen_range(2..=7);
            let edges = random_connected_undirected(&mut rng, n, 4, 3);
            let table = brute_all_pairs_min_cut(n, &edges);
            for u in 0..n {
                for v in 0..n {
                    if u != v {
                        assert_eq!(table[u][v], brute_min_cut(n, &edges, false, u, v));
                    }
                }
            }
        }
    }

    #[test]
    fn shortest_path_arcs_on_diamond() {
        let arcs = [(0, 1), (0, 2), (1, 3), (2, 3), (1, 2)];
        assert_eq!(shortest_path_arc_indices(4, &arcs, 0, 3), vec![0, 1, 2, 3]);
    }
}
