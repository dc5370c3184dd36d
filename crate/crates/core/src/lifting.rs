//! Social networks and the four ways of lifting them into weighted
//! affinity systems: direct weights, inverse shortest-path distance,
//! personalized PageRank and effective resistance.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use nalgebra::DMatrix;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::members::{MemberId, MemberSet};
use crate::params::CommunityParams;
use crate::rational::{int, ratio, to_f64, Rational};
use crate::system::{cap_entries, WeightedSystem};

/// A directed or undirected graph with edge weights in `(0, 1]`.
///
/// Undirected graphs store every edge in both adjacency lists. A self-loop
/// is an ordinary edge `(i, i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SocialGraph {
    directed: bool,
    adj: Vec<Vec<(MemberId, Rational)>>,
}

impl SocialGraph {
    pub fn new(n: usize, directed: bool, edges: impl IntoIterator<Item = (MemberId, MemberId, Rational)>) -> Result<Self> {
        let mut adj: Vec<Vec<(MemberId, Rational)>> = vec![Vec::new(); n];
        for (i, j, w) in edges {
            if i as usize >= n || j as usize >= n {
                return Err(Error::invalid(format!("edge ({i}, {j}) out of range for n={n}")));
            }
            if w <= Rational::zero() || w > Rational::one() {
                return Err(Error::invalid(format!("edge ({i}, {j}) weight {w} outside (0, 1]")));
            }
            adj[i as usize].push((j, w.clone()));
            if !directed && i != j {
                adj[j as usize].push((i, w));
            }
        }
        for (i, list) in adj.iter_mut().enumerate() {
            list.sort_by_key(|(j, _)| *j);
            if let Some(pair) = list.windows(2).find(|p| p[0].0 == p[1].0) {
                return Err(Error::invalid(format!("parallel edge ({i}, {})", pair[0].0)));
            }
        }
        Ok(SocialGraph { directed, adj })
    }

    /// Unit-weight graph from an edge list.
    pub fn unweighted(n: usize, directed: bool, edges: impl IntoIterator<Item = (MemberId, MemberId)>) -> Result<Self> {
        Self::new(n, directed, edges.into_iter().map(|(i, j)| (i, j, Rational::one())))
    }

    /// Adds a unit self-loop to every node lacking one.
    pub fn with_self_loops(mut self) -> Self {
        for (i, list) in self.adj.iter_mut().enumerate() {
            let i = i as MemberId;
            if let Err(pos) = list.binary_search_by_key(&i, |(j, _)| *j) {
                list.insert(pos, (i, Rational::one()));
            }
        }
        self
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Out-neighbours of `i` with weights, ascending by id.
    pub fn neighbors(&self, i: MemberId) -> &[(MemberId, Rational)] {
        &self.adj[i as usize]
    }

    pub fn has_edge(&self, i: MemberId, j: MemberId) -> bool {
        self.neighbors(i).binary_search_by_key(&j, |(k, _)| *k).is_ok()
    }

    pub fn has_self_loop(&self, i: MemberId) -> bool {
        self.has_edge(i, i)
    }

    pub fn all_self_loops(&self) -> bool {
        (0..self.len() as MemberId).all(|i| self.has_self_loop(i))
    }

    pub fn is_unweighted(&self) -> bool {
        self.adj.iter().flatten().all(|(_, w)| w.is_one())
    }

    /// Out-degree `d_i`.
    pub fn degree(&self, i: MemberId) -> usize {
        self.neighbors(i).len()
    }

    /// Edges `(i, j, w)`; undirected edges are listed once with `i ≤ j`.
    pub fn edges(&self) -> impl Iterator<Item = (MemberId, MemberId, &Rational)> {
        self.adj.iter().enumerate().flat_map(move |(i, list)| {
            let i = i as MemberId;
            list.iter()
                .filter(move |(j, _)| self.directed || i <= *j)
                .map(move |(j, w)| (i, *j, w))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftMethod {
    Direct,
    ShortestPath,
    Ppr,
    Resistance,
}

impl LiftMethod {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "direct" => Ok(LiftMethod::Direct),
            "shortest-path" | "shortest_path" => Ok(LiftMethod::ShortestPath),
            "ppr" => Ok(LiftMethod::Ppr),
            "resistance" => Ok(LiftMethod::Resistance),
            other => Err(Error::invalid(format!("unknown lift method {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftConfig {
    pub method: LiftMethod,
    /// Probability of jumping back to the source at each PageRank step.
    pub teleport: f64,
    /// L1 change at which power iteration stops; also the output grid.
    pub ppr_tolerance: f64,
    pub max_iterations: usize,
    /// Output grid for resistance ratios.
    pub resistance_tolerance: f64,
}

impl LiftConfig {
    pub fn new(method: LiftMethod) -> Self {
        LiftConfig {
            method,
            teleport: 0.15,
            ppr_tolerance: 1e-9,
            max_iterations: 100_000,
            resistance_tolerance: 1e-9,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.teleport > 0.0 && self.teleport < 1.0) {
            return Err(Error::invalid("teleport probability must lie in (0, 1)"));
        }
        if !(self.ppr_tolerance > 0.0 && self.resistance_tolerance > 0.0) {
            return Err(Error::invalid("tolerances must be positive"));
        }
        Ok(())
    }
}

/// Lifts `graph` with the configured method.
pub fn lift(graph: &SocialGraph, config: &LiftConfig) -> Result<WeightedSystem> {
    config.validate()?;
    match config.method {
        LiftMethod::Direct => direct_lift(graph),
        LiftMethod::ShortestPath => shortest_path_lift(graph),
        LiftMethod::Ppr => ppr_lift(graph, config),
        LiftMethod::Resistance => resistance_lift(graph, config),
    }
}

/// `a_{i,j} = w_{i,j}` on edges, 0 elsewhere.
pub fn direct_lift(graph: &SocialGraph) -> Result<WeightedSystem> {
    WeightedSystem::new(
        graph.len(),
        graph
            .adj
            .iter()
            .enumerate()
            .flat_map(|(i, list)| list.iter().map(move |(j, w)| (i as MemberId, *j, w.clone()))),
    )
}

/// Exact single-source distances, edge weight read as length.
fn distances_from(graph: &SocialGraph, source: MemberId) -> Vec<Option<Rational>> {
    let mut dist: Vec<Option<Rational>> = vec![None; graph.len()];
    let mut done = vec![false; graph.len()];
    let mut heap = BinaryHeap::new();
    dist[source as usize] = Some(Rational::zero());
    heap.push(Reverse((Rational::zero(), source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if std::mem::replace(&mut done[u as usize], true) {
            continue;
        }
        for (v, w) in graph.neighbors(u) {
            let candidate = &d + w;
            let slot = &mut dist[*v as usize];
            if slot.as_ref().is_none_or(|cur| candidate < *cur) {
                *slot = Some(candidate.clone());
                heap.push(Reverse((candidate, *v)));
            }
        }
    }
    dist
}

/// `a_{i,j} = d_min / d_{i,j}` where `d_min` is the smallest positive
/// distance in the graph; `a_{i,i} = 1`, unreachable pairs 0.
pub fn shortest_path_lift(graph: &SocialGraph) -> Result<WeightedSystem> {
    let n = graph.len();
    let rows: Vec<Vec<Option<Rational>>> = (0..n as MemberId)
        .into_par_iter()
        .map(|s| distances_from(graph, s))
        .collect();
    let d_min = rows
        .iter()
        .flatten()
        .flatten()
        .filter(|d| !d.is_zero())
        .min()
        .cloned()
        .unwrap_or_else(Rational::one);
    let mut triples = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        for (j, d) in row.into_iter().enumerate() {
            let weight = match d {
                _ if i == j => Rational::one(),
                Some(d) => &d_min / d,
                None => continue,
            };
            triples.push((i as MemberId, j as MemberId, weight));
        }
    }
    WeightedSystem::new(n, triples)
}

/// Personalized PageRank vector from `source` by power iteration.
///
/// Each step keeps `teleport` mass at the source and spreads the rest
/// along out-edges proportionally to weight; nodes without out-edges send
/// their mass back to the source.
pub fn personalized_pagerank(graph: &SocialGraph, source: MemberId, config: &LiftConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let n = graph.len();
    let s = source as usize;
    if s >= n {
        return Err(Error::invalid(format!("source {source} out of range for n={n}")));
    }
    let out_weight: Vec<f64> = graph.adj.iter().map(|l| l.iter().map(|(_, w)| to_f64(w)).sum()).collect();
    let mut p = vec![0.0; n];
    p[s] = 1.0;
    for _ in 0..config.max_iterations {
        let mut next = vec![0.0; n];
        next[s] += config.teleport;
        let spread = 1.0 - config.teleport;
        for u in 0..n {
            if p[u] == 0.0 {
                continue;
            }
            if out_weight[u] == 0.0 {
                next[s] += spread * p[u];
                continue;
            }
            for (v, w) in &graph.adj[u] {
                next[*v as usize] += spread * p[u] * to_f64(w) / out_weight[u];
            }
        }
        let change: f64 = p.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        p = next;
        if change < config.ppr_tolerance {
            return Ok(p);
        }
    }
    Err(Error::SolverFailure(format!(
        "personalized PageRank from {source} did not converge in {} iterations",
        config.max_iterations
    )))
}

/// Rounds `x ∈ [0, 1]` to the nearest multiple of `grid`, exactly.
fn quantize(x: f64, grid: f64) -> Rational {
    let steps = (1.0 / grid).round().max(1.0);
    let num = (x * steps).round().clamp(0.0, steps);
    ratio(num as i64, steps as i64)
}

/// `a_{i,j} = p_{i,j} / max_k p_{i,k}`, quantized to the PageRank
/// tolerance; the row maximum is exactly 1.
pub fn ppr_lift(graph: &SocialGraph, config: &LiftConfig) -> Result<WeightedSystem> {
    config.validate()?;
    let rows: Vec<Vec<f64>> = (0..graph.len() as MemberId)
        .into_par_iter()
        .map(|s| personalized_pagerank(graph, s, config))
        .collect::<Result<_>>()?;
    let mut triples = Vec::new();
    for (i, p) in rows.iter().enumerate() {
        let (argmax, max) = p
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |best, (j, &v)| if v > best.1 { (j, v) } else { best });
        for (j, &v) in p.iter().enumerate() {
            let a = if j == argmax { Rational::one() } else { quantize(v / max, config.ppr_tolerance) };
            if !a.is_zero() {
                triples.push((i as MemberId, j as MemberId, a));
            }
        }
    }
    WeightedSystem::new(graph.len(), triples)
}

/// Symmetric conductances `c_{i,j} = w_{i,j}`; directed edges are averaged
/// with their reverse.
fn conductances(graph: &SocialGraph) -> Vec<Vec<(usize, f64)>> {
    let n = graph.len();
    let mut c: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, list) in graph.adj.iter().enumerate() {
        for (j, w) in list {
            let j = *j as usize;
            if i == j {
                continue;
            }
            let w = to_f64(w);
            if graph.directed {
                c[i].push((j, w / 2.0));
                c[j].push((i, w / 2.0));
            } else {
                c[i].push((j, w));
            }
        }
    }
    c
}

fn components(adj: &[Vec<(usize, f64)>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    for start in 0..adj.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut k = 0;
        while k < comp.len() {
            for &(v, _) in &adj[comp[k]] {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// All-pairs effective resistance with each edge a resistor of
/// resistance `1/w`. Entry `(i, j)` is `None` across components.
pub fn effective_resistances(graph: &SocialGraph) -> Result<Vec<Vec<Option<f64>>>> {
    let n = graph.len();
    let adj = conductances(graph);
    let mut r = vec![vec![None; n]; n];
    for comp in components(&adj) {
        let m = comp.len();
        let mut index = vec![usize::MAX; n];
        for (k, &v) in comp.iter().enumerate() {
            index[v] = k;
        }
        // Grounded Laplacian: drop the component's first node.
        let mut lap = DMatrix::<f64>::zeros(m - 1, m - 1);
        for &u in &comp[1..] {
            let a = index[u] - 1;
            for &(v, c) in &adj[u] {
                lap[(a, a)] += c;
                if index[v] > 0 {
                    lap[(a, index[v] - 1)] -= c;
                }
            }
        }
        let g = if m > 1 {
            lap.try_inverse()
                .ok_or_else(|| Error::SolverFailure("singular grounded Laplacian".into()))?
        } else {
            DMatrix::zeros(0, 0)
        };
        let entry = |a: usize, b: usize| if a == 0 || b == 0 { 0.0 } else { g[(a - 1, b - 1)] };
        for &u in &comp {
            for &v in &comp {
                let (a, b) = (index[u], index[v]);
                let value = if u == v { 0.0 } else { entry(a, a) + entry(b, b) - 2.0 * entry(a, b) };
                if !value.is_finite() {
                    return Err(Error::SolverFailure("non-finite resistance".into()));
                }
                r[u][v] = Some(value.max(0.0));
            }
        }
    }
    Ok(r)
}

/// `a_{i,j} = min_{k≠i} r_{i,k} / r_{i,j}` within `i`'s component,
/// quantized to the resistance tolerance; `a_{i,i} = 1`.
pub fn resistance_lift(graph: &SocialGraph, config: &LiftConfig) -> Result<WeightedSystem> {
    config.validate()?;
    let r = effective_resistances(graph)?;
    let mut triples = Vec::new();
    for (i, row) in r.iter().enumerate() {
        triples.push((i as MemberId, i as MemberId, Rational::one()));
        let min = row
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .filter_map(|(_, d)| *d)
            .fold(f64::INFINITY, f64::min);
        for (j, d) in row.iter().enumerate() {
            let Some(d) = d else { continue };
            if j == i || *d <= 0.0 {
                continue;
            }
            let a = quantize(min / d, config.resistance_tolerance);
            if !a.is_zero() {
                triples.push((i as MemberId, j as MemberId, a));
            }
        }
    }
    WeightedSystem::new(graph.len(), triples)
}

/// Graph community test: every voter `i ∈ S` spends `θ|S|` across its
/// out-edges, heaviest first. For unit weights this is
/// `min(1, θ|S|/d_i)` per out-edge.
pub fn verify_graph_community(graph: &SocialGraph, set: &MemberSet, params: &CommunityParams) -> Result<bool> {
    if set.is_empty() {
        return Err(Error::invalid("candidate set is empty"));
    }
    crate::system::check_members(set.as_slice(), graph.len())?;
    let t = set.len();
    let cap = params.vote_cap(t);
    let mut votes: Vec<Rational> = vec![Rational::zero(); graph.len()];
    for i in set {
        let out = graph.neighbors(i);
        if graph.is_unweighted() {
            let d = out.len();
            if d == 0 {
                continue;
            }
            let share = if int(d) <= cap { Rational::one() } else { &cap / int(d) };
            for (j, _) in out {
                votes[*j as usize] += &share;
            }
        } else {
            for (j, w) in cap_entries(out, &cap) {
                votes[j as usize] += w;
            }
        }
    }
    let inside = params.alpha() * int(t);
    let outside = params.beta() * int(t);
    Ok(votes
        .iter()
        .enumerate()
        .all(|(m, v)| if set.contains(m as MemberId) { *v >= inside } else { *v <= outside }))
}

/// `(α, β)`-cluster test on an undirected graph where every vertex has a
/// self-loop: insiders have at least `α|S|` neighbours in `S`, outsiders
/// at most `β|S|`.
pub fn verify_alpha_beta_cluster(graph: &SocialGraph, set: &MemberSet, alpha: &Rational, beta: &Rational) -> Result<bool> {
    if graph.is_directed() {
        return Err(Error::invalid("cluster test needs an undirected graph"));
    }
    if !graph.all_self_loops() {
        return Err(Error::invalid("cluster test needs a self-loop on every vertex"));
    }
    if set.is_empty() {
        return Err(Error::invalid("candidate set is empty"));
    }
    crate::system::check_members(set.as_slice(), graph.len())?;
    let t = int(set.len());
    let inside = alpha * &t;
    let outside = beta * &t;
    Ok((0..graph.len() as MemberId).all(|i| {
        let hits = int(graph.neighbors(i).iter().filter(|(j, _)| set.contains(*j)).count());
        if set.contains(i) {
            hits >= inside
        } else {
            hits <= outside
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_rational;

    fn r(text: &str) -> Rational {
        parse_rational(text).unwrap()
    }

    fn unit(n: usize, edges: &[(MemberId, MemberId)]) -> SocialGraph {
        SocialGraph::unweighted(n, false, edges.iter().copied()).unwrap()
    }

    #[test]
    fn graph_validation() {
        assert!(SocialGraph::new(2, false, [(0, 1, r("0"))]).is_err());
        assert!(SocialGraph::new(2, false, [(0, 1, r("1.5"))]).is_err());
        assert!(SocialGraph::unweighted(2, false, [(0, 1), (1, 0)]).is_err());
        assert!(SocialGraph::unweighted(2, true, [(0, 1), (1, 0)]).is_ok());
        let g = unit(3, &[(0, 1)]).with_self_loops();
        assert!(g.all_self_loops());
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn direct_lift_copies_weights() {
        let g = SocialGraph::new(3, true, [(0, 1, r("0.8"))]).unwrap();
        let a = direct_lift(&g).unwrap();
        assert_eq!(a.weight(0, 1), r("0.8"));
        assert_eq!(a.weight(1, 0), r("0"));
        let u = SocialGraph::new(2, false, [(0, 1, r("0.3"))]).unwrap();
        let a = direct_lift(&u).unwrap();
        assert_eq!(a.weight(0, 1), a.weight(1, 0));
        assert!(direct_lift(&unit(3, &[])).unwrap().row(0).is_empty());
    }

    #[test]
    fn shortest_path_examples() {
        let a = shortest_path_lift(&unit(3, &[(0, 1), (1, 2)])).unwrap();
        assert_eq!(a.weight(0, 1), r("1"));
        assert_eq!(a.weight(0, 2), r("1/2"));
        assert_eq!(a.weight(0, 0), r("1"));
        let split = shortest_path_lift(&unit(3, &[(0, 1)])).unwrap();
        assert_eq!(split.weight(0, 2), r("0"));
        let weighted = SocialGraph::new(3, false, [(0, 1, r("0.5")), (1, 2, r("0.5"))]).unwrap();
        let a = shortest_path_lift(&weighted).unwrap();
        assert_eq!(a.weight(0, 1), r("1"));
        assert_eq!(a.weight(0, 2), r("1/2"));
    }

    #[test]
    fn ppr_examples() {
        let config = LiftConfig::new(LiftMethod::Ppr);
        let pair = unit(2, &[(0, 1)]);
        let p = personalized_pagerank(&pair, 0, &config).unwrap();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let a = ppr_lift(&pair, &config).unwrap();
        assert_eq!(a.weight(0, 0), r("1"));
        assert!(a.weight(0, 1) > r("0") && a.weight(0, 1) < r("1"));
        let lonely = ppr_lift(&unit(3, &[(1, 2)]), &config).unwrap();
        assert_eq!(lonely.row(0), &[(0, r("1"))]);
    }

    #[test]
    fn resistance_examples() {
        let config = LiftConfig::new(LiftMethod::Resistance);
        let tri = resistance_lift(&unit(3, &[(0, 1), (1, 2), (0, 2)]), &config).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(tri.weight(i, j), r("1"));
            }
        }
        let r3 = effective_resistances(&unit(3, &[(0, 1), (1, 2), (0, 2)])).unwrap();
        assert!((r3[0][1].unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let path = resistance_lift(&unit(3, &[(0, 1), (1, 2)]), &config).unwrap();
        assert_eq!(path.weight(0, 1), r("1"));
        assert_eq!(path.weight(0, 2), r("1/2"));
        let edge = resistance_lift(&unit(2, &[(0, 1)]), &config).unwrap();
        assert_eq!(edge.weight(0, 1), r("1"));
        assert_eq!(edge.weight(1, 0), r("1"));
        let apart = resistance_lift(&unit(4, &[(0, 1), (2, 3)]), &config).unwrap();
        assert_eq!(apart.weight(0, 2), r("0"));
    }

    #[test]
    fn heavier_edges_conduct_better() {
        let g = SocialGraph::new(3, false, [(0, 1, r("1")), (0, 2, r("0.25"))]).unwrap();
        let res = effective_resistances(&g).unwrap();
        assert!((res[0][1].unwrap() - 1.0).abs() < 1e-12);
        assert!((res[0][2].unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn graph_community_examples() {
        let triangles =
            SocialGraph::unweighted(6, true, [(0, 1), (1, 2), (2, 0), (1, 0), (2, 1), (0, 2), (3, 4), (4, 5), (5, 3), (4, 3), (5, 4), (3, 5)])
                .unwrap();
        let p = CommunityParams::parse("1", "2/3", "1/3").unwrap();
        assert!(verify_graph_community(&triangles, &MemberSet::from([0, 1, 2]), &p).unwrap());
        let k4 = SocialGraph::unweighted(4, true, (0..4).flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))).unwrap();
        let p = CommunityParams::parse("1", "2/3", "1/2").unwrap();
        assert!(!verify_graph_community(&k4, &MemberSet::from([0, 1, 2]), &p).unwrap());
        let p = CommunityParams::parse("1", "3/4", "1/2").unwrap();
        assert!(verify_graph_community(&k4, &MemberSet::range(0, 4), &p).unwrap());
    }

    #[test]
    fn cluster_examples() {
        let tri = unit(3, &[(0, 1), (1, 2), (0, 2)]).with_self_loops();
        let (one, half) = (r("1"), r("0.5"));
        assert!(verify_alpha_beta_cluster(&tri, &MemberSet::range(0, 3), &one, &half).unwrap());
        let cycle = unit(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).with_self_loops();
        assert!(verify_alpha_beta_cluster(&cycle, &MemberSet::from([0, 1]), &one, &half).unwrap());
        let empty = unit(3, &[]).with_self_loops();
        assert!(verify_alpha_beta_cluster(&empty, &MemberSet::from([1]), &one, &half).unwrap());
        assert!(verify_alpha_beta_cluster(&unit(3, &[]), &MemberSet::from([1]), &one, &half).is_err());
    }
}
