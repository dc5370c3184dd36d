//! Seeded instance generators with planted communities.

use std::fmt::Write as _;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::community::Community;
use crate::error::{Error, Result};
use crate::lifting::{verify_alpha_beta_cluster, SocialGraph};
use crate::members::{MemberId, MemberSet};
use crate::multifacet::FacetedSystem;
use crate::params::CommunityParams;
use crate::rational::{from_f64, int, ratio, Rational};
use crate::rng::stream;
use crate::system::{RankedSystem, WeightedSystem};

/// A generated ranked system and the communities it was built to contain.
#[derive(Clone, Debug)]
pub struct PlantedRanked {
    pub system: RankedSystem,
    pub planted: Vec<Community>,
}

fn params(theta: Rational, alpha: Rational, beta: Rational) -> CommunityParams {
    CommunityParams::new(theta, alpha, beta).expect("generator parameters are valid")
}

/// `blobs` groups of `blob_size` consecutive ids. Every member ranks
/// itself, then the rest of its blob in id order, then all outsiders in
/// uniformly random order.
///
/// Planted: each blob at `(1, 1, 1/2)` and each union of `l` blobs,
/// `2 ≤ l ≤ max_union`, at `(1, 1/l, 1/(2l))`. Unions only hold with high
/// probability over the outsider shuffles.
pub fn blob_instance(blobs: usize, blob_size: usize, max_union: usize, seed: u64) -> Result<PlantedRanked> {
    if blobs == 0 || blob_size == 0 {
        return Err(Error::invalid("blob count and blob size must be positive"));
    }
    let n = blobs * blob_size;
    let rankings: Vec<Vec<MemberId>> = (0..n)
        .into_par_iter()
        .map(|m| {
            let blob = m / blob_size;
            let start = (blob * blob_size) as MemberId;
            let end = start + blob_size as MemberId;
            let mut ranking = Vec::with_capacity(n);
            ranking.push(m as MemberId);
            ranking.extend((start..end).filter(|&j| j as usize != m));
            let mut outside: Vec<MemberId> = (0..start).chain(end..n as MemberId).collect();
            outside.shuffle(&mut stream(seed, &[m as u64]));
            ranking.extend(outside);
            ranking
        })
        .collect();
    let blob_set = |b: usize| MemberSet::range((b * blob_size) as MemberId, ((b + 1) * blob_size) as MemberId);
    let mut planted = Vec::new();
    for l in 1..=max_union.clamp(1, blobs) {
        let p = params(int(1), ratio(1, l as i64), ratio(1, 2 * l as i64));
        for combo in (0..blobs).combinations(l) {
            let members = combo.iter().fold(MemberSet::default(), |acc, &b| acc.union(&blob_set(b)));
            planted.push(Community::unverified(members, p.clone()));
        }
    }
    Ok(PlantedRanked {
        system: RankedSystem::new(rankings)?,
        planted,
    })
}

/// Two overlapping halves of `n` members.
#[derive(Clone, Debug)]
pub struct OverlapPair {
    pub system: RankedSystem,
    pub first: MemberSet,
    pub second: MemberSet,
    pub params: CommunityParams,
}

/// `A1 = [0, n/2)` and `A2 = [3n/8, 7n/8)`, sharing `n/8` members.
/// Members of exactly one set rank it first, then the other set; shared
/// members rank `A1 ∪ A2` first; everything else follows in id order.
/// Both sets are `(1, 3/4, 1/4)` communities.
pub fn overlap_pair(n: usize) -> Result<OverlapPair> {
    if n == 0 || !n.is_multiple_of(16) {
        return Err(Error::invalid(format!("overlap pair needs n divisible by 16, got {n}")));
    }
    let (half, eighth) = (n / 2, n / 8);
    let first = MemberSet::range(0, half as MemberId);
    let second = MemberSet::range((half - eighth) as MemberId, (n - eighth) as MemberId);
    let rankings = (0..n as MemberId)
        .map(|m| {
            let mut ranking: Vec<MemberId> = match (first.contains(m), second.contains(m)) {
                (true, true) => first.union(&second).into_vec(),
                (false, false) => Vec::new(),
                (true, false) => first.iter().chain(second.difference(&first).iter()).collect(),
                (false, true) => second.iter().chain(first.difference(&second).iter()).collect(),
            };
            let listed = MemberSet::new(ranking.iter().copied());
            ranking.extend((0..n as MemberId).filter(|j| !listed.contains(*j)));
            ranking
        })
        .collect();
    Ok(OverlapPair {
        system: RankedSystem::new(rankings)?,
        first,
        second,
        params: params(int(1), ratio(3, 4), ratio(1, 4)),
    })
}

/// Disjoint groups of the given sizes placed on a random subset of
/// `[0, n)`. Group members rank themselves, then the rest of the group
/// shuffled, then everyone else shuffled; ungrouped members rank everyone
/// at random. With `θ = 1` every group is a `(1, 1, 0)` community.
pub fn planted_ranked(n: usize, group_sizes: &[usize], seed: u64) -> Result<PlantedRanked> {
    if group_sizes.iter().sum::<usize>() > n || group_sizes.contains(&0) {
        return Err(Error::invalid("group sizes must be positive and fit in n"));
    }
    let mut rng = stream(seed, &[]);
    let mut order: Vec<MemberId> = (0..n as MemberId).collect();
    order.shuffle(&mut rng);
    let mut group_of = vec![usize::MAX; n];
    let mut groups = Vec::new();
    let mut rest = &order[..];
    for (g, &size) in group_sizes.iter().enumerate() {
        let (head, tail) = rest.split_at(size);
        for &m in head {
            group_of[m as usize] = g;
        }
        groups.push(MemberSet::new(head.iter().copied()));
        rest = tail;
    }
    let rankings = (0..n as MemberId)
        .map(|m| {
            let mut rng = stream(seed, &[1, m as u64]);
            let own = groups.get(group_of[m as usize]).cloned().unwrap_or_default();
            let mut inner: Vec<MemberId> = own.iter().filter(|&j| j != m).collect();
            inner.shuffle(&mut rng);
            let mut outer: Vec<MemberId> = (0..n as MemberId).filter(|&j| j != m && !own.contains(j)).collect();
            outer.shuffle(&mut rng);
            let mut ranking = Vec::with_capacity(n);
            if own.is_empty() {
                outer.push(m);
                outer.shuffle(&mut rng);
            } else {
                ranking.push(m);
            }
            ranking.extend(inner);
            ranking.extend(outer);
            ranking
        })
        .collect();
    let p = params(int(1), int(1), ratio(0, 1));
    Ok(PlantedRanked {
        system: RankedSystem::new(rankings)?,
        planted: groups.into_iter().map(|g| Community::unverified(g, p.clone())).collect(),
    })
}

/// A uniformly random weighted system with a planted community.
#[derive(Clone, Debug)]
pub struct PlantedWeighted {
    pub system: WeightedSystem,
    pub community: MemberSet,
    /// `θ = 1` with the tightest `α`, `β` the community satisfies.
    pub params: CommunityParams,
}

/// `n` members, a random community of size `t`. Inside pairs weigh
/// between 0.6 and 1, outside pairs are present with probability 0.3 and
/// weigh at most 0.3 (two decimals). `α` and `β` are read off the exact
/// tally, so the community verifies at exactly the returned parameters.
pub fn planted_weighted(n: usize, t: usize, seed: u64) -> Result<PlantedWeighted> {
    if t == 0 || t >= n {
        return Err(Error::invalid("community size must lie in [1, n)"));
    }
    for attempt in 0u64.. {
        let mut rng = stream(seed, &[attempt]);
        let mut ids: Vec<MemberId> = (0..n as MemberId).collect();
        ids.shuffle(&mut rng);
        let community = MemberSet::new(ids[..t].iter().copied());
        let mut triples = Vec::new();
        for i in 0..n as MemberId {
            for j in 0..n as MemberId {
                let w = if community.contains(i) && community.contains(j) {
                    rng.random_range(60..=100)
                } else if rng.random_bool(0.3) {
                    rng.random_range(1..=30)
                } else {
                    0
                };
                if w > 0 {
                    triples.push((i, j, ratio(w, 100)));
                }
            }
        }
        let system = WeightedSystem::new(n, triples)?;
        let tally = system.vote_tally(community.as_slice(), t, &int(1))?;
        let tt = int(t);
        let alpha = community.iter().map(|m| tally.get(m)).min().expect("nonempty") / &tt;
        let beta = tally
            .entries()
            .iter()
            .filter(|(m, _)| !community.contains(*m))
            .map(|(_, v)| v.clone())
            .max()
            .unwrap_or_default()
            / &tt;
        if beta < alpha && alpha <= int(1) {
            return Ok(PlantedWeighted {
                system,
                community,
                params: params(int(1), alpha, beta),
            });
        }
    }
    unreachable!()
}

/// Two facets per member on `n` members with a random community `S` of
/// size `t`. Facet 0 of each member of `S` lists itself, then `S` in id
/// order, then the rest shuffled; every other ranking is a uniform random
/// permutation. `(S, ψ ≡ 0)` is a `(1, 1, 0)` multifaceted community.
pub fn faceted_blob(n: usize, t: usize, seed: u64) -> Result<(FacetedSystem, MemberSet)> {
    if t == 0 || t > n {
        return Err(Error::invalid("community size must lie in [1, n]"));
    }
    let mut rng = stream(seed, &[]);
    let mut ids: Vec<MemberId> = (0..n as MemberId).collect();
    ids.shuffle(&mut rng);
    let community = MemberSet::new(ids[..t].iter().copied());
    let facets = (0..n as MemberId)
        .map(|m| {
            let mut rng = stream(seed, &[1, m as u64]);
            let mut random: Vec<MemberId> = (0..n as MemberId).collect();
            random.shuffle(&mut rng);
            let first = if community.contains(m) {
                let mut ranking = vec![m];
                ranking.extend(community.iter().filter(|&j| j != m));
                let mut rest: Vec<MemberId> = (0..n as MemberId).filter(|&j| !community.contains(j)).collect();
                rest.shuffle(&mut rng);
                ranking.extend(rest);
                ranking
            } else {
                let mut other: Vec<MemberId> = (0..n as MemberId).collect();
                other.shuffle(&mut rng);
                other
            };
            vec![first, random]
        })
        .collect();
    Ok((FacetedSystem::new(facets)?, community))
}

/// `G(n, p)`: each unordered pair is an edge independently with
/// probability `p`.
pub fn gnp(n: usize, p: f64, self_loops: bool, seed: u64) -> Result<SocialGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} outside [0, 1]")));
    }
    let edges: Vec<(MemberId, MemberId)> = (0..n as MemberId)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut rng = stream(seed, &[i as u64]);
            ((i + 1)..n as MemberId)
                .filter(move |_| rng.random_bool(p))
                .map(move |j| (i, j))
                .collect::<Vec<_>>()
        })
        .collect();
    let g = SocialGraph::unweighted(n, false, edges)?;
    Ok(if self_loops { g.with_self_loops() } else { g })
}

/// `G(n, p)` with a clique on `k` uniformly chosen vertices.
pub fn gnp_planted_clique(n: usize, p: f64, k: usize, self_loops: bool, seed: u64) -> Result<(SocialGraph, MemberSet)> {
    if k > n {
        return Err(Error::invalid(format!("clique size {k} exceeds n={n}")));
    }
    let base = gnp(n, p, false, seed)?;
    let mut ids: Vec<MemberId> = (0..n as MemberId).collect();
    ids.shuffle(&mut stream(seed, &[u64::MAX]));
    let clique = MemberSet::new(ids[..k].iter().copied());
    let mut edges: Vec<(MemberId, MemberId)> = base.edges().map(|(i, j, _)| (i, j)).collect();
    for (a, b) in clique.as_slice().iter().copied().tuple_combinations() {
        if !base.has_edge(a, b) {
            edges.push((a, b));
        }
    }
    let g = SocialGraph::unweighted(n, false, edges)?;
    Ok((if self_loops { g.with_self_loops() } else { g }, clique))
}

/// Clique size `k = ⌈ln n / ε²⌉`, clipped to `⌊n/4⌋`, and edge
/// probability `p = 1 − γ − ε` for the planted-clique cluster experiment.
pub fn hardness_clique_params(n: usize, gamma: f64, epsilon: f64) -> Result<(usize, f64)> {
    let p = 1.0 - gamma - epsilon;
    if !(epsilon > 0.0 && gamma > 0.0 && (0.0..=1.0).contains(&p)) {
        return Err(Error::invalid("need gamma, epsilon > 0 with gamma + epsilon <= 1"));
    }
    let k = ((n as f64).ln() / (epsilon * epsilon)).ceil() as usize;
    Ok((k.min(n / 4).max(1), p))
}

/// `C(n, k)`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Every `(α, β)`-cluster whose size lies in `sizes`, in lexicographic
/// order.
pub fn count_alpha_beta_clusters(
    graph: &SocialGraph,
    alpha: &Rational,
    beta: &Rational,
    sizes: &[usize],
    budget: u64,
) -> Result<Vec<MemberSet>> {
    let n = graph.len();
    let work: u128 = sizes.iter().map(|&k| binomial(n, k)).sum();
    if work > budget as u128 {
        return Err(Error::budget(work, budget, "shrink n or the size range"));
    }
    let mut sizes: Vec<usize> = sizes.iter().copied().filter(|&k| k >= 1 && k <= n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let mut hits = Vec::new();
    for k in sizes {
        let combos: Vec<Vec<MemberId>> = (0..n as MemberId).combinations(k).collect();
        let found: Vec<Option<MemberSet>> = combos
            .into_par_iter()
            .map(|c| {
                let set = MemberSet::from(c);
                verify_alpha_beta_cluster(graph, &set, alpha, beta).map(|ok| ok.then_some(set))
            })
            .collect::<Result<_>>()?;
        hits.extend(found.into_iter().flatten());
    }
    hits.sort();
    Ok(hits)
}

/// Monte-Carlo companion to the cluster-counting construction: in
/// `G(n, 2^{-l})` with self-loops, count `(1, 1/2 + ε)`-clusters of size
/// `k = round(2 log₂ n (1 − δ) / l)` and compare with the expected lower
/// bound `0.5 · C(n, k) · n^{−k(1−δ)}`. Returns CSV text.
pub fn counting_report(n: usize, l: u32, delta: f64, epsilon: f64, trials: usize, seed: u64, budget: u64) -> Result<String> {
    if l == 0 || !(0.0..1.0).contains(&delta) || !(0.0..0.5).contains(&epsilon) {
        return Err(Error::invalid("need l >= 1, delta in [0, 1), epsilon in [0, 1/2)"));
    }
    let p = 0.5f64.powi(l as i32);
    let k = ((2.0 * (n as f64).log2() * (1.0 - delta) / l as f64).round() as usize).max(1);
    let bound = 0.5 * binomial(n, k) as f64 * (n as f64).powf(-(k as f64) * (1.0 - delta));
    let beta = from_f64(0.5 + epsilon)?;
    let mut csv = String::from("trial,n,l,p,delta,epsilon,k,edges,clusters,expected_lower_bound\n");
    for trial in 0..trials {
        let g = gnp(n, p, true, crate::rng::derive_seed(seed, &[trial as u64]))?;
        let clusters = count_alpha_beta_clusters(&g, &int(1), &beta, &[k], budget)?;
        let edges = g.edge_count() - n;
        writeln!(csv, "{trial},{n},{l},{p},{delta},{epsilon},{k},{edges},{},{bound:.6e}", clusters.len())
            .expect("writing to a String");
    }
    Ok(csv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::AffinitySystem;

    #[test]
    fn blob_singles_verify_and_layout_is_fixed() {
        let inst = blob_instance(4, 4, 1, 3).unwrap();
        assert_eq!(inst.system.len(), 16);
        assert_eq!(&inst.system.ranking(5)[..4], &[5, 4, 6, 7]);
        assert_eq!(inst.planted.len(), 4);
        for c in &inst.planted {
            assert!(inst.system.is_community(c.members(), c.params()).unwrap());
        }
        let again = blob_instance(4, 4, 1, 3).unwrap();
        assert_eq!(again.system, inst.system);
        let singles = blob_instance(5, 1, 1, 0).unwrap();
        assert!(singles.planted.iter().all(|c| singles.system.is_community(c.members(), c.params()).unwrap()));
    }

    #[test]
    fn overlap_pairs_verify() {
        for n in [16, 32, 48] {
            let pair = overlap_pair(n).unwrap();
            assert!(pair.system.is_community(&pair.first, &pair.params).unwrap());
            assert!(pair.system.is_community(&pair.second, &pair.params).unwrap());
            assert_eq!(pair.first.intersection(&pair.second).len(), n / 8);
        }
        assert!(overlap_pair(24).is_err());
    }

    #[test]
    fn planted_generators_verify() {
        let inst = planted_ranked(12, &[4, 3], 9).unwrap();
        for c in &inst.planted {
            assert!(inst.system.is_community(c.members(), c.params()).unwrap());
        }
        let w = planted_weighted(10, 4, 2).unwrap();
        assert!(w.system.is_community(&w.community, &w.params).unwrap());
        let (f, s) = faceted_blob(20, 6, 1).unwrap();
        assert_eq!(f.len(), 20);
        assert_eq!(s.len(), 6);
    }

    #[test]
    fn hardness_parameters() {
        let (k, p) = hardness_clique_params(300, 0.3, 0.1).unwrap();
        assert_eq!(k, 75);
        assert!((p - 0.6).abs() < 1e-12);
        assert_eq!(hardness_clique_params(1_000_000, 0.3, 0.1).unwrap().0, 1382);
        assert!(hardness_clique_params(10, 0.7, 0.5).is_err());
    }

    #[test]
    fn gnp_extremes_and_cliques() {
        assert_eq!(gnp(10, 0.0, false, 1).unwrap().edge_count(), 0);
        assert_eq!(gnp(10, 1.0, false, 1).unwrap().edge_count(), 45);
        let (g, clique) = gnp_planted_clique(30, 0.2, 8, true, 4).unwrap();
        for (a, b) in clique.iter().tuple_combinations() {
            assert!(g.has_edge(a, b));
        }
        assert!(gnp_planted_clique(5, 0.5, 6, false, 0).is_err());
        assert!(gnp(3, 1.5, false, 0).is_err());
    }

    #[test]
    fn cluster_counts() {
        let g = SocialGraph::unweighted(6, false, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
            .unwrap()
            .with_self_loops();
        let found = count_alpha_beta_clusters(&g, &int(1), &ratio(1, 3), &[3], 1000).unwrap();
        assert_eq!(found, vec![MemberSet::from([0, 1, 2]), MemberSet::from([3, 4, 5])]);
        let empty = SocialGraph::unweighted(5, false, []).unwrap().with_self_loops();
        assert_eq!(count_alpha_beta_clusters(&empty, &int(1), &ratio(1, 2), &[1], 1000).unwrap().len(), 5);
        assert!(count_alpha_beta_clusters(&empty, &int(1), &ratio(1, 2), &[], 1000).unwrap().is_empty());
        assert!(count_alpha_beta_clusters(&empty, &int(1), &ratio(1, 2), &[2], 3).is_err());
    }

    #[test]
    fn report_has_header_and_rows() {
        let csv = counting_report(12, 2, 0.1, 0.1, 2, 5, 1_000_000).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("trial,n,l"));
    }
}
