//! Ranked and weighted affinity systems, vote tallies and community
//! verification.
//!
//! A member `s` of a candidate set `S` *votes for* `i` when `i` sits in the
//! first `⌈θ|S|⌉` entries of `s`'s ranking. In a weighted system each voter
//! instead spends a budget of `θ|S|` across its affinity row, heaviest
//! entries first (see [`capped_vote_vector`]). `S` is a `(θ, α, β)`
//! community when every insider collects at least `α|S|` votes from `S`
//! and every outsider at most `β|S|`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::members::{MemberId, MemberSet};
use crate::params::{prefix_len, CommunityParams};
use crate::rational::{ceil_usize, int, Rational};

/// Per-member vote totals received from a (multi)set of voters.
///
/// Stored sparsely: members absent from [`VoteTally::entries`] received
/// nothing.
#[derive(Clone, Debug, PartialEq)]
pub struct VoteTally<V> {
    member_count: usize,
    voters: usize,
    entries: Vec<(MemberId, V)>,
}

impl<V> VoteTally<V> {
    pub(crate) fn from_entries(member_count: usize, voters: usize, entries: Vec<(MemberId, V)>) -> Self {
        VoteTally {
            member_count,
            voters,
            entries,
        }
    }

    /// Nonzero totals, ascending by member.
    pub fn entries(&self) -> &[(MemberId, V)] {
        &self.entries
    }
}

impl<V: Clone + Zero> VoteTally<V> {
    pub fn get(&self, member: MemberId) -> V {
        match self.entries.binary_search_by_key(&member, |(m, _)| *m) {
            Ok(idx) => self.entries[idx].1.clone(),
            Err(_) => V::zero(),
        }
    }

    /// Number of votes cast (multiset size of the voters).
    pub fn voters(&self) -> usize {
        self.voters
    }

    pub fn member_count(&self) -> usize {
        self.member_count
    }

    pub fn to_dense(&self) -> Vec<V> {
        let mut dense = vec![V::zero(); self.member_count];
        for (m, v) in &self.entries {
            dense[*m as usize] = v.clone();
        }
        dense
    }

    pub fn total(&self) -> V {
        self.entries
            .iter()
            .fold(V::zero(), |acc, (_, v)| acc + v.clone())
    }
}

/// Outcome of a verification together with the tally that certifies it.
#[derive(Clone, Debug, PartialEq)]
pub struct Verification<V> {
    pub is_community: bool,
    pub tally: VoteTally<V>,
}

/// Operations the generic enumerators need from a system.
pub trait AffinitySystem: Sync {
    fn member_count(&self) -> usize;

    /// Whether `set` is a `(θ, α, β)` community at its own size.
    fn is_community(&self, set: &MemberSet, params: &CommunityParams) -> Result<bool>;

    /// Members collecting at least `fraction · |voters|` votes from the
    /// multiset `voters` when votes are cast for a community of size `size`.
    fn supported_set(
        &self,
        voters: &[MemberId],
        size: usize,
        theta: &Rational,
        fraction: &Rational,
    ) -> Result<MemberSet>;
}

fn check_set(set: &MemberSet, n: usize) -> Result<()> {
    if set.is_empty() {
        return Err(Error::invalid("candidate set is empty"));
    }
    check_members(set.as_slice(), n)
}

pub(crate) fn check_members(members: &[MemberId], n: usize) -> Result<()> {
    match members.iter().find(|&&m| m as usize >= n) {
        Some(m) => Err(Error::invalid(format!("member {m} out of range for n={n}"))),
        None => Ok(()),
    }
}

/// Run-length counts of member ids gathered from several prefixes.
pub(crate) fn count_votes<'a>(prefixes: impl Iterator<Item = &'a [MemberId]>) -> Vec<(MemberId, u32)> {
    let mut all: Vec<MemberId> = prefixes.flatten().copied().collect();
    all.sort_unstable();
    let mut counts: Vec<(MemberId, u32)> = Vec::new();
    for m in all {
        match counts.last_mut() {
            Some((last, c)) if *last == m => *c += 1,
            _ => counts.push((m, 1)),
        }
    }
    counts
}

/// Preference lists `π_0 … π_{n−1}`, possibly partial.
///
/// Rankings are stored back to back; member ids are `u32` so that total
/// rankings over a few thousand members stay compact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedSystem {
    n: usize,
    offsets: Vec<usize>,
    entries: Vec<MemberId>,
}

impl RankedSystem {
    /// Builds a system from one ranking per member. Rankings may be partial
    /// and may or may not contain their owner, but must not repeat an id.
    pub fn new(rankings: Vec<Vec<MemberId>>) -> Result<Self> {
        let n = rankings.len();
        if n > MemberId::MAX as usize {
            return Err(Error::invalid("too many members"));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut entries = Vec::with_capacity(rankings.iter().map(Vec::len).sum());
        let mut seen = vec![usize::MAX; n];
        for (owner, ranking) in rankings.into_iter().enumerate() {
            for &m in &ranking {
                let slot = seen
                    .get_mut(m as usize)
                    .ok_or_else(|| Error::invalid(format!("ranking of {owner} lists {m}, out of range for n={n}")))?;
                if *slot == owner {
                    return Err(Error::invalid(format!("ranking of {owner} lists {m} twice")));
                }
                *slot = owner;
            }
            entries.extend(ranking);
            offsets.push(entries.len());
        }
        Ok(RankedSystem { n, offsets, entries })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn ranking(&self, member: MemberId) -> &[MemberId] {
        let m = member as usize;
        &self.entries[self.offsets[m]..self.offsets[m + 1]]
    }

    /// The first `min(len, |π_member|)` entries.
    pub fn prefix(&self, member: MemberId, len: usize) -> &[MemberId] {
        let ranking = self.ranking(member);
        &ranking[..len.min(ranking.len())]
    }

    /// `v^ℓ_U(i)` for every `i`: how many of `voters` (a multiset) list `i`
    /// among their first `prefix_len` entries.
    pub fn vote_count(&self, voters: &[MemberId], prefix_len: usize) -> Result<VoteTally<u32>> {
        if prefix_len == 0 {
            return Err(Error::invalid("prefix length must be at least 1"));
        }
        check_members(voters, self.n)?;
        Ok(self.tally_unchecked(voters, prefix_len))
    }

    pub(crate) fn tally_unchecked(&self, voters: &[MemberId], prefix_len: usize) -> VoteTally<u32> {
        VoteTally {
            member_count: self.n,
            voters: voters.len(),
            entries: count_votes(voters.iter().map(|&s| self.prefix(s, prefix_len))),
        }
    }

    /// Checks `set` against the community definition and returns the tally
    /// `φ^θ_S` as a certificate.
    pub fn verify(&self, set: &MemberSet, params: &CommunityParams) -> Result<Verification<u32>> {
        check_set(set, self.n)?;
        Ok(self.verify_unchecked(set, params))
    }

    pub(crate) fn verify_unchecked(&self, set: &MemberSet, params: &CommunityParams) -> Verification<u32> {
        let t = set.len();
        let tally = self.tally_unchecked(set.as_slice(), params.prefix_len(t));
        let inside = params.min_inside_votes(t) as u64;
        let outside = params.max_outside_votes(t) as u64;
        let is_community = set.iter().all(|m| u64::from(tally.get(m)) >= inside)
            && tally
                .entries()
                .iter()
                .all(|&(m, v)| u64::from(v) <= outside || set.contains(m));
        Verification { is_community, tally }
    }

    /// Whether `v ∈ S` votes for at least half of `S`, i.e.
    /// `|π_v(1:⌈θ|S|⌉) ∩ S| ≥ |S|/2`.
    pub fn is_good_seed(&self, set: &MemberSet, v: MemberId, theta: &Rational) -> Result<bool> {
        check_set(set, self.n)?;
        if !set.contains(v) {
            return Err(Error::invalid(format!("seed {v} is not in the set")));
        }
        let hits = self
            .prefix(v, prefix_len(theta, set.len()))
            .iter()
            .filter(|&&m| set.contains(m))
            .count();
        Ok(2 * hits >= set.len())
    }
}

impl AffinitySystem for RankedSystem {
    fn member_count(&self) -> usize {
        self.n
    }

    fn is_community(&self, set: &MemberSet, params: &CommunityParams) -> Result<bool> {
        Ok(self.verify(set, params)?.is_community)
    }

    fn supported_set(
        &self,
        voters: &[MemberId],
        size: usize,
        theta: &Rational,
        fraction: &Rational,
    ) -> Result<MemberSet> {
        if voters.is_empty() {
            return Ok(MemberSet::default());
        }
        let tally = self.vote_count(voters, prefix_len(theta, size).max(1))?;
        let needed = ceil_usize(&(fraction * int(voters.len()))) as u32;
        Ok(tally
            .entries()
            .iter()
            .filter(|(_, v)| *v >= needed)
            .map(|(m, _)| *m)
            .collect())
    }
}

/// Caps a nonnegative weight vector to total `cap`.
///
/// Weights are taken heaviest first and kept whole while the running sum
/// stays within `cap`; the group of entries tied at the first value that
/// would overflow shares the remaining budget equally; everything lighter
/// is zeroed. The output is indexed like the input and sums to
/// `min(cap, Σ weights)`.
pub fn capped_vote_vector(weights: &[Rational], cap: &Rational) -> Result<Vec<Rational>> {
    if !cap_is_positive(cap) {
        return Err(Error::invalid("cap must be positive"));
    }
    if weights.iter().any(|w| *w < Rational::zero()) {
        return Err(Error::invalid("weights must be nonnegative"));
    }
    let keyed: Vec<(usize, Rational)> = weights.iter().cloned().enumerate().collect();
    let mut out = vec![Rational::zero(); weights.len()];
    for (i, w) in cap_entries(&keyed, cap) {
        out[i] = w;
    }
    Ok(out)
}

fn cap_is_positive(cap: &Rational) -> bool {
    *cap > Rational::zero()
}

/// Sparse form of [`capped_vote_vector`]; zero outputs are dropped.
pub(crate) fn cap_entries<K: Copy + Ord>(entries: &[(K, Rational)], cap: &Rational) -> Vec<(K, Rational)> {
    let total: Rational = entries.iter().map(|(_, w)| w.clone()).sum();
    if total <= *cap {
        return entries.iter().filter(|(_, w)| !w.is_zero()).cloned().collect();
    }
    let mut order: Vec<&(K, Rational)> = entries.iter().filter(|(_, w)| !w.is_zero()).collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let mut out = Vec::new();
    let mut running = Rational::zero();
    let mut i = 0;
    while i < order.len() {
        let value = &order[i].1;
        let end = i + order[i..].iter().take_while(|(_, w)| w == value).count();
        let group_sum = value * int(end - i);
        if &running + &group_sum <= *cap {
            running += group_sum;
            out.extend(order[i..end].iter().map(|(k, w)| (*k, w.clone())));
            i = end;
        } else {
            let share = (cap - &running) / int(end - i);
            if !share.is_zero() {
                out.extend(order[i..end].iter().map(|(k, _)| (*k, share.clone())));
            }
            break;
        }
    }
    out.sort_by_key(|a| a.0);
    out
}

/// Affinity weights `a_{i,j} ∈ [0, 1]`, stored as sparse rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedSystem {
    rows: Vec<Vec<(MemberId, Rational)>>,
}

impl WeightedSystem {
    /// Builds a system from `(i, j, a_ij)` triples; absent pairs weigh 0.
    pub fn new(n: usize, weights: impl IntoIterator<Item = (MemberId, MemberId, Rational)>) -> Result<Self> {
        let mut rows: Vec<Vec<(MemberId, Rational)>> = vec![Vec::new(); n];
        for (i, j, w) in weights {
            if i as usize >= n || j as usize >= n {
                return Err(Error::invalid(format!("pair ({i}, {j}) out of range for n={n}")));
            }
            if w < Rational::zero() || w > Rational::from_integer(1.into()) {
                return Err(Error::invalid(format!("weight a[{i},{j}]={w} outside [0, 1]")));
            }
            rows[i as usize].push((j, w));
        }
        for (i, row) in rows.iter_mut().enumerate() {
            row.sort_by_key(|(j, _)| *j);
            if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::invalid(format!("weight a[{i},{}] given twice", w[0].0)));
            }
            row.retain(|(_, w)| !w.is_zero());
        }
        Ok(WeightedSystem { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Nonzero entries of `a_i`, ascending by column.
    pub fn row(&self, member: MemberId) -> &[(MemberId, Rational)] {
        &self.rows[member as usize]
    }

    pub fn weight(&self, i: MemberId, j: MemberId) -> Rational {
        let row = self.row(i);
        match row.binary_search_by_key(&j, |(m, _)| *m) {
            Ok(idx) => row[idx].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// `a_i^{cap}`: the row after capping its total to `cap`.
    pub fn capped_row(&self, member: MemberId, cap: &Rational) -> Vec<(MemberId, Rational)> {
        cap_entries(self.row(member), cap)
    }

    /// `Σ_{s ∈ voters} a_s^{θ t}` for every member, `t = target_size`.
    pub fn vote_tally(&self, voters: &[MemberId], target_size: usize, theta: &Rational) -> Result<VoteTally<Rational>> {
        if target_size == 0 {
            return Err(Error::invalid("target size must be at least 1"));
        }
        if !cap_is_positive(theta) {
            return Err(Error::invalid("theta must be positive"));
        }
        check_members(voters, self.len())?;
        let cap = theta * int(target_size);
        let mut sums: Vec<(MemberId, Rational)> = voters.iter().flat_map(|&s| self.capped_row(s, &cap)).collect();
        sums.sort_by_key(|(m, _)| *m);
        let mut entries: Vec<(MemberId, Rational)> = Vec::new();
        for (m, w) in sums {
            match entries.last_mut() {
                Some((last, acc)) if *last == m => *acc += w,
                _ => entries.push((m, w)),
            }
        }
        Ok(VoteTally {
            member_count: self.len(),
            voters: voters.len(),
            entries,
        })
    }

    pub fn verify(&self, set: &MemberSet, params: &CommunityParams) -> Result<Verification<Rational>> {
        check_set(set, self.len())?;
        let t = set.len();
        let tally = self.vote_tally(set.as_slice(), t, params.theta())?;
        let inside = params.alpha() * int(t);
        let outside = params.beta() * int(t);
        let is_community = set.iter().all(|m| tally.get(m) >= inside)
            && tally
                .entries()
                .iter()
                .all(|(m, v)| *v <= outside || set.contains(*m));
        Ok(Verification { is_community, tally })
    }
}

impl AffinitySystem for WeightedSystem {
    fn member_count(&self) -> usize {
        self.len()
    }

    fn is_community(&self, set: &MemberSet, params: &CommunityParams) -> Result<bool> {
        Ok(self.verify(set, params)?.is_community)
    }

    fn supported_set(
        &self,
        voters: &[MemberId],
        size: usize,
        theta: &Rational,
        fraction: &Rational,
    ) -> Result<MemberSet> {
        if voters.is_empty() {
            return Ok(MemberSet::default());
        }
        let tally = self.vote_tally(voters, size.max(1), theta)?;
        let needed = fraction * int(voters.len());
        Ok(tally
            .entries()
            .iter()
            .filter(|(_, v)| *v >= needed)
            .map(|(m, _)| *m)
            .collect())
    }
}
