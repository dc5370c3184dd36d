//! Reduction from weighted to ranked systems.
//!
//! Each member `s` becomes a blob `B_s` of `k = ⌈1/ε⌉` nodes. For a target
//! size `t`, blob `B_s` is wired to `B_s̃` by a `d`-regular bipartite graph
//! with `d = ⌊k · a^{θt}_{s,s̃}⌋`, and each node ranks exactly its
//! out-neighbours. A weighted `(θ, α, β)` community `S` of size `t` then
//! maps to the ranked `(θ, α − ε, β)` community `∪_{s∈S} B_s`.

use std::ops::Range;

use num_traits::Zero;

use crate::community::{Community, CommunitySet, Strategy};
use crate::error::{Error, Result};
use crate::members::{MemberId, MemberSet};
use crate::params::CommunityParams;
use crate::rational::{ceil_usize, floor_usize, int, Rational};
use crate::system::{RankedSystem, WeightedSystem};

/// The blob layout: member `s` owns nodes `[s·k, (s+1)·k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlobMap {
    members: usize,
    k: usize,
}

impl BlobMap {
    pub fn new(members: usize, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("blob size must be positive"));
        }
        if members.checked_mul(k).is_none_or(|total| total > MemberId::MAX as usize) {
            return Err(Error::invalid("reduced instance too large"));
        }
        Ok(BlobMap { members, k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Members of the original system.
    pub fn members(&self) -> usize {
        self.members
    }

    /// Nodes of the reduced system, `n·k`.
    pub fn nodes(&self) -> usize {
        self.members * self.k
    }

    pub fn blob(&self, member: MemberId) -> Range<MemberId> {
        let start = member * self.k as MemberId;
        start..start + self.k as MemberId
    }

    /// `f(node)`: the member whose blob contains `node`.
    pub fn owner(&self, node: MemberId) -> MemberId {
        node / self.k as MemberId
    }

    /// `∪_{s ∈ set} B_s`.
    pub fn image(&self, set: &MemberSet) -> MemberSet {
        set.iter().flat_map(|s| self.blob(s)).collect()
    }

    /// Members with at least half of their blob in `nodes`.
    pub fn round(&self, nodes: &MemberSet) -> MemberSet {
        let mut counts = vec![0usize; self.members];
        for node in nodes {
            counts[self.owner(node) as usize] += 1;
        }
        counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0 && 2 * c >= self.k)
            .map(|(s, _)| s as MemberId)
            .collect()
    }
}

/// Circulant `d`-regular bipartite graph on `k + k` nodes: left `i` links to
/// right `(i + r) mod k` for `0 ≤ r < d`.
pub fn build_bipartite_regular(k: usize, d: usize) -> Result<Vec<(usize, usize)>> {
    if d > k {
        return Err(Error::invalid(format!("degree {d} exceeds side size {k}")));
    }
    Ok((0..k).flat_map(|i| (0..d).map(move |r| (i, (i + r) % k))).collect())
}

/// `k = ⌈1/ε⌉`.
pub fn blob_size(epsilon: &Rational) -> Result<usize> {
    if *epsilon <= Rational::zero() {
        return Err(Error::invalid("epsilon must be positive"));
    }
    Ok(ceil_usize(&(int(1) / epsilon)))
}

/// `ε = γ/2`: the reduced instance keeps a gap of `γ/2`.
pub fn default_epsilon(params: &CommunityParams) -> Rational {
    params.gamma() / int(2)
}

/// `(θ, α − ε, β)`, the parameters the image of a community satisfies.
pub fn reduced_params(params: &CommunityParams, epsilon: &Rational) -> Result<CommunityParams> {
    params.shifted(epsilon, &Rational::zero())
}

/// Builds the ranked instance for target size `t`.
///
/// Node lists are partial: a node ranks only its out-neighbours, blocks
/// ordered by the capped weight of their target member (heaviest first,
/// ties by member id), nodes within a block ascending.
pub fn reduce(system: &WeightedSystem, params: &CommunityParams, size: usize, epsilon: &Rational) -> Result<(RankedSystem, BlobMap)> {
    if size == 0 {
        return Err(Error::invalid("target size must be at least 1"));
    }
    if epsilon >= params.alpha() {
        return Err(Error::invalid(format!("epsilon {epsilon} must be below alpha {}", params.alpha())));
    }
    let k = blob_size(epsilon)?;
    let map = BlobMap::new(system.len(), k)?;
    let cap = params.vote_cap(size);
    let mut rankings = Vec::with_capacity(map.nodes());
    for s in 0..system.len() as MemberId {
        let mut blocks: Vec<(Rational, MemberId, usize)> = system
            .capped_row(s, &cap)
            .into_iter()
            .map(|(target, p)| {
                let d = floor_usize(&(&p * int(k)));
                (p, target, d)
            })
            .filter(|(_, _, d)| *d > 0)
            .collect();
        blocks.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for i in 0..k {
            let mut ranking = Vec::new();
            for (_, target, d) in &blocks {
                let base = map.blob(*target).start;
                let mut nodes: Vec<MemberId> = (0..*d).map(|r| base + ((i + r) % k) as MemberId).collect();
                nodes.sort_unstable();
                ranking.extend(nodes);
            }
            rankings.push(ranking);
        }
    }
    Ok((RankedSystem::new(rankings)?, map))
}

/// Rounds each reduced community to members (a blob is selected when at
/// least half its nodes are present) and keeps those that verify on the
/// original weighted system.
pub fn map_back<'a>(
    communities: impl IntoIterator<Item = &'a MemberSet>,
    map: &BlobMap,
    original: &WeightedSystem,
    params: &CommunityParams,
) -> Result<CommunitySet> {
    let mut out = CommunitySet::new();
    for nodes in communities {
        let members = map.round(nodes);
        if members.is_empty() {
            continue;
        }
        let community = Community::check(original, members, params.clone())?;
        out.insert(community, Strategy::Reduction);
    }
    Ok(out)
}
