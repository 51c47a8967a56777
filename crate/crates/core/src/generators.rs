//! Seeded instance generators and terminal-pair sampling.
//!
//! Every generator is a pure function of its parameters, seed included, and
//! returns edges in a canonical sorted order.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dinitz_opt::{DinitzOpt, OptConfig};
use crate::dinitz::CutResult;
use crate::error::{FlowError, Result};
use crate::gomory_hu::{gusfield, CutOracle};
use crate::network::{FlowNetwork, TerminalPair, VertexId};

pub type Edge = (VertexId, VertexId, i64);

/// A generated instance as a plain edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeGraph {
    pub n: usize,
    pub edges: Vec<Edge>,
    pub directed: bool,
    /// Designated terminals, for instances that come with them.
    pub terminals: Option<TerminalPair>,
}

impl EdgeGraph {
    pub fn build(&self) -> Result<FlowNetwork> {
        FlowNetwork::build(self.n, &self.edges, self.directed)
    }

    pub fn average_degree(&self) -> f64 {
        let ends = if self.directed { 1.0 } else { 2.0 };
        ends * self.edges.len() as f64 / self.n.max(1) as f64
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_range(range: (i64, i64)) -> Result<()> {
    if range.0 < 0 || range.0 > range.1 {
        return Err(FlowError::Input(format!("bad capacity range [{}, {}]", range.0, range.1)));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ErDensity {
    /// Each ordered pair independently with this probability.
    P(f64),
    /// Exactly this many distinct ordered pairs.
    M(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErParams {
    pub n: usize,
    pub density: ErDensity,
    /// Uniform capacities in `[lo, hi]`; unit capacities when absent.
    pub weights: Option<(i64, i64)>,
    pub super_terminals: bool,
    pub seed: u64,
}

/// Directed Erdős–Rényi graph without self-loops or parallel arcs.
///
/// With `super_terminals`, vertex `n` feeds 10 random vertices and vertex
/// `n + 1` drains 10 others; both use the total capacity plus one.
pub fn gen_er(params: &ErParams) -> Result<EdgeGraph> {
    let n = params.n;
    if let Some(range) = params.weights {
        check_range(range)?;
    }
    let slots = n.checked_mul(n.saturating_sub(1)).ok_or_else(|| FlowError::Input("n too large".into()))?;
    let mut rng = rng_for(params.seed);
    let mut picks: Vec<usize> = match params.density {
        ErDensity::P(p) => {
            if !(0.0..=1.0).contains(&p) {
                return Err(FlowError::Input(format!("edge probability {p} outside [0, 1]")));
            }
            geometric_slots(&mut rng, slots, p)
        }
        ErDensity::M(m) => {
            if m > slots {
                return Err(FlowError::Input(format!("{m} edges requested but only {slots} ordered pairs exist")));
            }
            index::sample(&mut rng, slots, m).into_vec()
        }
    };
    picks.sort_unstable();

    let mut edges: Vec<Edge> = picks
        .into_iter()
        .map(|k| {
            let u = k / (n - 1);
            let r = k % (n - 1);
            (u, if r >= u { r + 1 } else { r }, 1)
        })
        .collect();
    if let Some((lo, hi)) = params.weights {
        for e in &mut edges {
            e.2 = rng.gen_range(lo..=hi);
        }
    }

    let mut graph = EdgeGraph { n, edges, directed: true, terminals: None };
    if params.super_terminals {
        if n < 2 {
            return Err(FlowError::Input("super terminals need at least two vertices".into()));
        }
        let huge = graph.edges.iter().map(|e| e.2).sum::<i64>() + 1;
        let k = 10.min(n / 2);
        let chosen = index::sample(&mut rng, n, 2 * k).into_vec();
        let (s, t) = (n, n + 1);
        let mut feeds: Vec<usize> = chosen[..k].to_vec();
        let mut drains: Vec<usize> = chosen[k..].to_vec();
        feeds.sort_unstable();
        drains.sort_unstable();
        graph.edges.extend(feeds.into_iter().map(|v| (s, v, huge)));
        graph.edges.extend(drains.into_iter().map(|v| (v, t, huge)));
        graph.n = n + 2;
        graph.terminals = Some(TerminalPair { source: s, sink: t });
    }
    Ok(graph)
}

/// Indices in `0..slots` kept independently with probability `p`, found by
/// geometric skipping.
fn geometric_slots(rng: &mut impl Rng, slots: usize, p: f64) -> Vec<usize> {
    if p <= 0.0 || slots == 0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return (0..slots).collect();
    }
    let log_q = (1.0 - p).ln();
    let mut out = Vec::with_capacity((slots as f64 * p * 1.1) as usize + 16);
    let mut k: f64 = -1.0;
    loop {
        let u: f64 = rng.gen();
        k += 1.0 + ((1.0 - u).ln() / log_q).floor();
        if k >= slots as f64 {
            return out;
        }
        out.push(k as usize);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayeredParams {
    pub width: usize,
    pub length: usize,
    pub degree: usize,
    pub capacity: (i64, i64),
    pub seed: u64,
}

/// Layered hard instance: `length` layers of `width` vertices, source 0,
/// interior vertex `1 + layer * width + w`, sink `1 + width * length`.
///
/// Vertex `w` of a layer always links to vertex `w` of the next layer, plus
/// `degree - 1` distinct random others, so every vertex lies on an s-t path.
pub fn gen_layered(params: &LayeredParams) -> Result<EdgeGraph> {
    let LayeredParams { width, length, degree, capacity, seed } = *params;
    check_range(capacity)?;
    if width == 0 || length == 0 || degree == 0 || degree > width {
        return Err(FlowError::Input(format!(
            "layered instance needs 1 <= degree <= width and length >= 1 (W={width}, L={length}, d={degree})"
        )));
    }
    let mut rng = rng_for(seed);
    let id = |layer: usize, w: usize| 1 + layer * width + w;
    let (s, t) = (0, 1 + width * length);
    let (lo, hi) = capacity;
    let mut edges = Vec::with_capacity(width * ((length - 1) * degree + 2));
    for w in 0..width {
        edges.push((s, id(0, w), degree as i64 * hi));
    }
    for layer in 0..length - 1 {
        for w in 0..width {
            let mut heads: Vec<usize> = index::sample(&mut rng, width - 1, degree - 1)
                .into_iter()
                .map(|x| if x >= w { x + 1 } else { x })
                .collect();
            heads.push(w);
            heads.sort_unstable();
            for x in heads {
                edges.push((id(layer, w), id(layer + 1, x), rng.gen_range(lo..=hi)));
            }
        }
    }
    for w in 0..width {
        edges.push((id(length - 1, w), t, width as i64 * hi));
    }
    Ok(EdgeGraph { n: t + 1, edges, directed: true, terminals: Some(TerminalPair { source: s, sink: t }) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GirgParams {
    pub n: usize,
    pub avg_degree: f64,
    /// Power-law exponent of the weight distribution; must exceed 2.
    pub beta: f64,
    pub seed: u64,
    /// Skips calibration and uses this threshold constant.
    pub c: Option<f64>,
}

/// Result of [`gen_girg_1d`]: the graph and the constant it was built with.
#[derive(Debug, Clone, PartialEq)]
pub struct Girg {
    pub graph: EdgeGraph,
    pub c: f64,
    pub weights: Vec<f64>,
    pub positions: Vec<f64>,
}

const C_MIN: f64 = 1.0 / (1u64 << 20) as f64;
const C_MAX: f64 = (1u64 << 20) as f64;

/// One-dimensional threshold GIRG with unit capacities: `u ~ v` iff their
/// circular distance is at most `c * w_u * w_v / W`.
///
/// Unless `c` is given it is calibrated so the average degree lands within
/// 1% of the target, and an error is returned if 5% cannot be reached.
pub fn gen_girg_1d(params: &GirgParams) -> Result<Girg> {
    let GirgParams { n, avg_degree, beta, seed, c } = *params;
    if beta.is_nan() || beta <= 2.0 || avg_degree.is_nan() || avg_degree <= 0.0 || n < 2 {
        return Err(FlowError::Input(format!(
            "GIRG needs beta > 2, a positive degree and n >= 2 (beta={beta}, degree={avg_degree}, n={n})"
        )));
    }
    let mut rng = rng_for(seed);
    let weights: Vec<f64> = (0..n).map(|_| (1.0 - rng.gen::<f64>()).powf(-1.0 / (beta - 1.0))).collect();
    let positions: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let space = GirgSpace::new(&weights, &positions);

    let c = match c {
        Some(c) if c > 0.0 => c,
        Some(c) => return Err(FlowError::Input(format!("threshold constant {c} must be positive"))),
        None => space.calibrate(avg_degree)?,
    };
    let mut edges = Vec::new();
    space.for_each_edge(c, |u, v| {
        edges.push((u.min(v), u.max(v), 1));
        true
    });
    edges.sort_unstable();
    Ok(Girg { graph: EdgeGraph { n, edges, directed: false, terminals: None }, c, weights, positions })
}

/// Vertices grouped into power-of-two weight classes, each sorted by
/// position.
struct GirgSpace<'a> {
    weights: &'a [f64],
    positions: &'a [f64],
    total: f64,
    classes: Vec<Vec<(f64, VertexId)>>,
    class_max: Vec<f64>,
}

impl<'a> GirgSpace<'a> {
    fn new(weights: &'a [f64], positions: &'a [f64]) -> Self {
        let mut classes: Vec<Vec<(f64, VertexId)>> = Vec::new();
        for (v, &w) in weights.iter().enumerate() {
            let k = w.log2().floor().max(0.0) as usize;
            if classes.len() <= k {
                classes.resize_with(k + 1, Vec::new);
            }
            classes[k].push((positions[v], v));
        }
        for class in &mut classes {
            class.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        }
        let class_max = classes.iter().map(|c| c.iter().map(|&(_, v)| weights[v]).fold(0.0, f64::max)).collect();
        Self { weights, positions, total: weights.iter().sum(), classes, class_max }
    }

    /// Calls `f(u, v)` once per edge with `u < v`; stops early when `f`
    /// returns false.
    fn for_each_edge(&self, c: f64, mut f: impl FnMut(VertexId, VertexId) -> bool) {
        let scale = c / self.total;
        for u in 0..self.weights.len() {
            let (wu, xu) = (self.weights[u], self.positions[u]);
            for (k, class) in self.classes.iter().enumerate() {
                if class.is_empty() {
                    continue;
                }
                let reach = scale * wu * self.class_max[k];
                let mut visit = |v: VertexId| {
                    if v > u && circular_distance(xu, self.positions[v]) <= scale * wu * self.weights[v] {
                        f(u, v)
                    } else {
                        true
                    }
                };
                if reach >= 0.5 {
                    for &(_, v) in class {
                        if !visit(v) {
                            return;
                        }
                    }
                    continue;
                }
                // positions in [xu - reach, xu + reach] modulo 1
                let (lo, hi) = (xu - reach, xu + reach);
                let windows = if lo < 0.0 {
                    [(0.0, hi), (lo + 1.0, 1.0)]
                } else if hi > 1.0 {
                    [(lo, 1.0), (0.0, hi - 1.0)]
                } else {
                    [(lo, hi), (1.0, 0.0)]
                };
                for (a, b) in windows {
                    let start = class.partition_point(|p| p.0 < a);
                    for &(x, v) in &class[start..] {
                        if x > b {
                            break;
                        }
                        if !visit(v) {
                            return;
                        }
                    }
                }
            }
        }
    }

    /// Number of edges at constant `c`, or `None` once it exceeds `limit`.
    fn count_edges(&self, c: f64, limit: usize) -> Option<usize> {
        let mut m = 0;
        let mut within = true;
        self.for_each_edge(c, |_, _| {
            m += 1;
            within = m <= limit;
            within
        });
        within.then_some(m)
    }

    fn calibrate(&self, target: f64) -> Result<f64> {
        let n = self.weights.len() as f64;
        let degree = |m: usize| 2.0 * m as f64 / n;
        // far above the target counts as "too dense"
        let limit = (4.0 * target * n) as usize + 16;
        let measure = |c: f64| self.count_edges(c, limit).map(degree);

        // expected degree is about 2c * W / n for small c
        let guess = (target * n / (2.0 * self.total)).clamp(C_MIN, C_MAX);
        let (mut lo, mut hi) = (C_MIN, C_MAX);
        let mut best = (f64::INFINITY, guess);
        let mut c = guess;
        for _ in 0..50 {
            let d = measure(c);
            let err = d.map_or(f64::INFINITY, |d| (d - target).abs() / target);
            if err < best.0 {
                best = (err, c);
            }
            if err <= 0.01 {
                break;
            }
            match d {
                Some(d) if d < target => lo = c,
                _ => hi = c,
            }
            // step outwards from the guess until bracketed, then bisect
            c = if hi == C_MAX && lo > C_MIN {
                (2.0 * c).min(C_MAX)
            } else if lo == C_MIN && hi < C_MAX {
                (c / 2.0).max(C_MIN)
            } else {
                (lo * hi).sqrt()
            };
            if hi / lo < 1.0 + 1e-12 {
                break;
            }
        }
        if best.0 <= 0.05 {
            Ok(best.1)
        } else {
            Err(FlowError::Generation(format!(
                "average degree {target} not reachable within 5% (best relative error {:.3})",
                best.0
            )))
        }
    }
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

/// How terminal pairs are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairMode {
    /// Both terminals with degree in `[0.75, 1.25]` times the average.
    Low,
    /// Both terminals with degree in `[10, 100]` times the average.
    High,
    /// Both terminals with degree in the given inclusive range.
    DegreeRange(usize, usize),
    Uniform,
    /// Pairs from the call schedule of a Gusfield construction.
    GhLike,
    Fixed(TerminalPair),
}

/// Draws `count` terminal pairs. Degrees are arc counts per vertex, so for
/// undirected networks they are ordinary vertex degrees.
pub fn sample_terminals(net: &FlowNetwork, mode: PairMode, count: usize, seed: u64) -> Result<Vec<TerminalPair>> {
    let n = net.n();
    let mut rng = rng_for(seed);
    let avg = net.arc_count() as f64 / n.max(1) as f64;
    let band = |lo: f64, hi: f64| -> Result<Vec<VertexId>> {
        let eligible: Vec<VertexId> =
            (0..n).filter(|&v| (lo..=hi).contains(&(net.degree(v) as f64))).collect();
        if eligible.len() < 2 {
            return Err(FlowError::Sampling(format!(
                "degree band [{lo:.2}, {hi:.2}] holds {} vertices, need at least 2",
                eligible.len()
            )));
        }
        Ok(eligible)
    };
    let pool = match mode {
        PairMode::Low => band(0.75 * avg, 1.25 * avg)?,
        PairMode::High => band(10.0 * avg, 100.0 * avg)?,
        PairMode::DegreeRange(lo, hi) => band(lo as f64, hi as f64)?,
        PairMode::Uniform => band(f64::NEG_INFINITY, f64::INFINITY)?,
        PairMode::Fixed(pair) => {
            pair.check_bounds(n)?;
            return Ok(vec![pair; count]);
        }
        PairMode::GhLike => {
            let schedule = gusfield_schedule(net)?;
            if schedule.is_empty() {
                return Err(FlowError::Sampling("Gusfield schedule is empty".into()));
            }
            let picks: Vec<usize> = if count <= schedule.len() {
                index::sample(&mut rng, schedule.len(), count).into_vec()
            } else {
                (0..count).map(|_| rng.gen_range(0..schedule.len())).collect()
            };
            return Ok(picks.into_iter().map(|i| schedule[i]).collect());
        }
    };
    Ok((0..count)
        .map(|_| {
            let pick = index::sample(&mut rng, pool.len(), 2);
            TerminalPair { source: pool[pick.index(0)], sink: pool[pick.index(1)] }
        })
        .collect())
}

struct OptOracle(DinitzOpt);

impl CutOracle for OptOracle {
    fn cut(&mut self, net: &mut FlowNetwork, pair: TerminalPair) -> Result<CutResult> {
        net.reset_flows();
        self.0.max_flow(net, pair);
        self.0.min_cut_source_side(net, pair)
    }
}

/// The `n - 1` (source, sink) pairs a Gusfield construction queries.
pub fn gusfield_schedule(net: &FlowNetwork) -> Result<Vec<TerminalPair>> {
    if net.is_directed() {
        return Err(FlowError::Sampling("Gusfield pairs need an undirected network".into()));
    }
    let mut work = net.clone();
    work.reset_all_flows();
    let mut oracle = OptOracle(DinitzOpt::new(net.n(), OptConfig::FULL));
    Ok(gusfield(&mut work, &mut oracle)?.1.pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn er(n: usize, density: ErDensity, seed: u64) -> EdgeGraph {
        gen_er(&ErParams { n, density, weights: None, super_terminals: false, seed }).unwrap()
    }

    #[test]
    fn er_complete_graph() {
        let g = er(4, ErDensity::P(1.0), 1);
        assert_eq!(g.edges.len(), 12);
        assert!(g.edges.iter().all(|&(u, v, c)| u != v && c == 1));
    }

    #[test]
    fn er_exact_edge_count() {
        let g = er(1000, ErDensity::M(5000), 9);
        assert_eq!(g.edges.len(), 5000);
        let mut pairs: Vec<_> = g.edges.iter().map(|e| (e.0, e.1)).collect();
        pairs.dedup();
        assert_eq!(pairs.len(), 5000);
        assert_eq!(g, er(1000, ErDensity::M(5000), 9));
    }

    #[test]
    fn er_rejects_contradictions() {
        let bad = |density, weights| {
            gen_er(&ErParams { n: 5, density, weights, super_terminals: false, seed: 0 }).is_err()
        };
        assert!(bad(ErDensity::P(1.5), None));
        assert!(bad(ErDensity::M(21), None));
        assert!(bad(ErDensity::M(3), Some((5, 2))));
    }

    #[test]
    fn er_super_terminals() {
        let params =
            ErParams { n: 50, density: ErDensity::M(200), weights: Some((500, 10000)), super_terminals: true, seed: 4 };
        let g = gen_er(&params).unwrap();
        let pair = g.terminals.unwrap();
        assert_eq!((g.n, pair.source, pair.sink), (52, 50, 51));
        let huge = g.edges.iter().filter(|e| e.0 < 50 && e.1 < 50).map(|e| e.2).sum::<i64>() + 1;
        assert_eq!(g.edges.iter().filter(|e| e.0 == 50 && e.2 == huge).count(), 10);
        assert_eq!(g.edges.iter().filter(|e| e.1 == 51 && e.2 == huge).count(), 10);
    }

    #[test]
    fn layered_single_path() {
        let g = gen_layered(&LayeredParams { width: 1, length: 3, degree: 1, capacity: (1, 5), seed: 0 }).unwrap();
        let arcs: Vec<_> = g.edges.iter().map(|e| (e.0, e.1)).collect();
        assert_eq!(arcs, vec![(0, 1), (1, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn layered_complete_block() {
        let g = gen_layered(&LayeredParams { width: 2, length: 2, degree: 2, capacity: (1, 1), seed: 0 }).unwrap();
        let middle: Vec<_> = g.edges.iter().filter(|e| e.0 != 0 && e.1 != 5).map(|e| (e.0, e.1)).collect();
        assert_eq!(middle, vec![(1, 3), (1, 4), (2, 3), (2, 4)]);
    }

    #[test]
    fn layered_counts() {
        let g = gen_layered(&LayeredParams { width: 71, length: 141, degree: 10, capacity: (1, 100), seed: 2 }).unwrap();
        assert_eq!(g.n, 71 * 141 + 2);
        let interior = g.edges.iter().filter(|e| e.0 != 0 && e.1 != g.n - 1).count();
        assert_eq!(interior, 71 * 140 * 10);
    }

    #[test]
    fn girg_forced_constant_pair() {
        let girg = gen_girg_1d(&GirgParams { n: 2, avg_degree: 1.0, beta: 2.8, seed: 0, c: Some(1e6) }).unwrap();
        assert_eq!(girg.graph.edges, vec![(0, 1, 1)]);
    }

    #[test]
    fn girg_edges_match_brute_force() {
        let girg = gen_girg_1d(&GirgParams { n: 400, avg_degree: 6.0, beta: 2.5, seed: 7, c: None }).unwrap();
        let total: f64 = girg.weights.iter().sum();
        let mut expected = Vec::new();
        for u in 0..400 {
            for v in u + 1..400 {
                let d = circular_distance(girg.positions[u], girg.positions[v]);
                if d <= girg.c * girg.weights[u] * girg.weights[v] / total {
                    expected.push((u, v, 1));
                }
            }
        }
        assert_eq!(girg.graph.edges, expected);
    }

    #[test]
    fn girg_calibrated_degree() {
        let girg = gen_girg_1d(&GirgParams { n: 10_000, avg_degree: 10.0, beta: 2.8, seed: 1, c: None }).unwrap();
        let d = girg.graph.average_degree();
        assert!((9.5..=10.5).contains(&d), "average degree {d}");
    }

    #[test]
    fn girg_rejects_bad_exponent() {
        assert!(gen_girg_1d(&GirgParams { n: 10, avg_degree: 3.0, beta: 2.0, seed: 0, c: None }).is_err());
    }

    #[test]
    fn uniform_pairs_on_star() {
        let (net, _) = fixtures::star5();
        let pairs = sample_terminals(&net, PairMode::Uniform, 200, 3).unwrap();
        assert!(pairs.iter().all(|p| p.source != p.sink && p.source < 5 && p.sink < 5));
        let mut distinct: Vec<_> = pairs.iter().map(|p| (p.source.min(p.sink), p.source.max(p.sink))).collect();
        distinct.sort_unstable();
        distinct.dedup();
        assert_eq!(distinct.len(), 10);
    }

    #[test]
    fn low_band_on_regular_graph() {
        // 10-regular circulant on 30 vertices
        let edges: Vec<_> = (0..30).flat_map(|v| (1..=5).map(move |k| (v, (v + k) % 30, 1))).collect();
        let net = FlowNetwork::build(30, &edges, false).unwrap();
        let pairs = sample_terminals(&net, PairMode::Low, 500, 0).unwrap();
        let mut used: Vec<_> = pairs.iter().flat_map(|p| [p.source, p.sink]).collect();
        used.sort_unstable();
        used.dedup();
        assert_eq!(used.len(), 30);
    }

    #[test]
    fn empty_high_band_is_an_error() {
        let (net, _) = fixtures::path4();
        let err = sample_terminals(&net, PairMode::High, 1, 0).unwrap_err();
        assert!(matches!(err, FlowError::Sampling(ref msg) if msg.contains("degree band")));
    }

    #[test]
    fn gh_pairs_come_from_the_schedule() {
        let (net, _) = fixtures::star5();
        let schedule = gusfield_schedule(&net).unwrap();
        assert_eq!(schedule.len(), 4);
        let pairs = sample_terminals(&net, PairMode::GhLike, 3, 5).unwrap();
        assert!(pairs.iter().all(|p| schedule.contains(p)));
    }

    #[test]
    fn fixed_pairs_repeat() {
        let (net, pair) = fixtures::path4();
        assert_eq!(sample_terminals(&net, PairMode::Fixed(pair), 2, 0).unwrap(), vec![pair; 2]);
    }
}
