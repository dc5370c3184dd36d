//! Global enumeration of communities: rough supersets from prefix unions
//! or two-hop sampling probabilities, sampling-based purification, the
//! multiset baseline, and an exhaustive oracle.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use itertools::Itertools;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;

use crate::community::{Community, CommunitySet, Strategy};
use crate::error::{Error, Result};
use crate::generators::binomial;
use crate::members::{MemberId, MemberSet};
use crate::params::CommunityParams;
use crate::rational::{int, to_f64, Rational};
use crate::rng::stream;
use crate::system::{check_members, AffinitySystem, RankedSystem};

/// Budgets and constants for [`enumerate_main`] and friends.
///
/// `k1`, `k2` and `n2` default to the worst-case formulas; `n2` is capped
/// at `n2_cap` because the formula is astronomically large.
#[derive(Clone, Debug, PartialEq)]
pub struct EnumConfig {
    pub params: CommunityParams,
    /// Community size `t` being searched for.
    pub size: usize,
    pub delta: f64,
    pub k1: Option<usize>,
    /// Size of the two-hop rough seed sets.
    pub k1_alt: Option<usize>,
    pub k2: Option<usize>,
    pub n2: Option<usize>,
    pub n2_cap: usize,
    /// Largest number of rough candidates to generate.
    pub candidate_budget: u64,
    /// Stop purifying a candidate once a size-`t` community has come out
    /// of purification twice.
    pub early_exit: bool,
    pub rng_seed: u64,
}

impl EnumConfig {
    pub fn new(params: CommunityParams, size: usize) -> Self {
        EnumConfig {
            params,
            size,
            delta: 0.1,
            k1: None,
            k1_alt: None,
            k2: None,
            n2: None,
            n2_cap: 32,
            candidate_budget: 2_000_000,
            early_exit: true,
            rng_seed: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    /// `⌈ln(16/γ)/α⌉`.
    pub fn k1(&self) -> usize {
        self.k1.unwrap_or_else(|| {
            let (a, g) = (self.params.alpha_f64(), self.params.gamma_f64());
            ((16.0 / g).ln() / a).ceil().max(1.0) as usize
        })
    }

    /// `⌈ln(1/α)/α⌉ + 1`.
    pub fn k1_alt(&self) -> usize {
        self.k1_alt.unwrap_or_else(|| {
            let a = self.params.alpha_f64();
            ((1.0 / a).ln() / a).ceil().max(0.0) as usize + 1
        })
    }

    /// `⌈(8/γ²) ln(32 θ k1 / (γ δ))⌉`.
    pub fn k2(&self) -> usize {
        self.k2.unwrap_or_else(|| {
            let (t, g) = (self.params.theta_f64(), self.params.gamma_f64());
            let m = t * self.k1() as f64;
            lemma2_k2(g, 32.0 * m / (g * self.delta))
        })
    }

    /// `min(⌈(2θk1)^{k2} ln(1/δ)⌉, n2_cap)`.
    pub fn n2(&self) -> usize {
        self.n2.unwrap_or_else(|| {
            let base = 2.0 * self.params.theta_f64() * self.k1() as f64;
            let log = self.k2() as f64 * base.ln() + (1.0 / self.delta).ln().ln();
            if log >= (self.n2_cap as f64).ln() {
                self.n2_cap
            } else {
                (log.exp().ceil() as usize).clamp(1, self.n2_cap)
            }
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.size == 0 {
            return Err(Error::invalid("community size must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::invalid(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        for (name, value) in [("k1", self.k1), ("k1_alt", self.k1_alt), ("k2", self.k2), ("n2", self.n2)] {
            if value == Some(0) {
                return Err(Error::invalid(format!("{name} override must be at least 1")));
            }
        }
        if self.n2_cap == 0 {
            return Err(Error::invalid("n2 cap must be at least 1"));
        }
        Ok(())
    }
}

/// Sample size `⌈(8/γ²) ln(arg)⌉` for a purification step.
pub(crate) fn lemma2_k2(gamma: f64, arg: f64) -> usize {
    ((8.0 / (gamma * gamma)) * arg.max(1.0).ln()).ceil().max(1.0) as usize
}

/// Result of [`greedy_cover`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyCover {
    /// Chosen members of `S` in pick order.
    pub pickers: Vec<MemberId>,
    /// Union of the pickers' prefixes (may include outsiders).
    pub covered: MemberSet,
    /// `|S ∖ covered|`.
    pub uncovered: usize,
}

/// Greedily picks members of `S` whose `⌈θ|S|⌉`-prefixes cover the most
/// still-uncovered members of `S`, until at most `(γ/16)|S|` remain or
/// `⌈ln(16/γ)/α⌉` members are picked. Ties go to the lowest id.
pub fn greedy_cover(system: &RankedSystem, set: &MemberSet, params: &CommunityParams) -> Result<GreedyCover> {
    if set.is_empty() {
        return Err(Error::invalid("candidate set is empty"));
    }
    check_members(set.as_slice(), system.len())?;
    let limit = EnumConfig::new(params.clone(), set.len()).k1();
    let prefix = params.prefix_len(set.len());
    let budget = params.gamma() * int(set.len());
    let mut remaining: BTreeSet<MemberId> = set.iter().collect();
    let mut pickers = Vec::new();
    let mut covered = BTreeSet::new();
    while pickers.len() < limit && int(16 * remaining.len()) > budget {
        let (gain, best) = set
            .iter()
            .map(|i| {
                let gain = system.prefix(i, prefix).iter().filter(|m| remaining.contains(m)).count();
                (gain, std::cmp::Reverse(i))
            })
            .max()
            .expect("set is nonempty");
        if gain == 0 {
            break;
        }
        let best = best.0;
        for &m in system.prefix(best, prefix) {
            remaining.remove(&m);
            covered.insert(m);
        }
        pickers.push(best);
    }
    Ok(GreedyCover {
        pickers,
        covered: covered.into_iter().collect(),
        uncovered: remaining.len(),
    })
}

fn prefix_union(system: &RankedSystem, voters: &[MemberId], len: usize) -> MemberSet {
    voters.iter().flat_map(|&v| system.prefix(v, len).iter().copied()).collect()
}

/// For every `k1`-subset `U` of members, the union of the `⌈θt⌉`-prefixes
/// of `U`. The list has `C(n, k1)` entries, duplicates included.
pub fn rough_list_exhaustive(system: &RankedSystem, config: &EnumConfig) -> Result<Vec<MemberSet>> {
    config.validate()?;
    let n = system.len();
    let k1 = config.k1().min(n);
    let count = binomial(n, k1);
    if count > config.candidate_budget as u128 {
        return Err(Error::budget(
            count,
            config.candidate_budget,
            "lower k1, or use the local or two-hop strategy",
        ));
    }
    let prefix = config.params.prefix_len(config.size);
    let subsets: Vec<Vec<MemberId>> = (0..n as MemberId).combinations(k1).collect();
    Ok(subsets.par_iter().map(|u| prefix_union(system, u, prefix)).collect())
}

/// Sets produced by one purification round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Purification {
    /// Members of `S1` voted by enough of the sample.
    pub s2: MemberSet,
    /// Members of `V` voted by enough of `S2`.
    pub s3: MemberSet,
}

/// Purification with a given sample `U2` (a multiset drawn from `S1`):
/// `S2 = {i ∈ S1 : v_{U2}(i) ≥ (α − γ/2)|U2|}` and
/// `S3 = {i : v_{S2}(i) ≥ (α − γ/2)|S2|}`, votes at prefix `⌈θt⌉`.
pub fn purify_with_sample<A: AffinitySystem + ?Sized>(
    system: &A,
    s1: &MemberSet,
    sample: &[MemberId],
    size: usize,
    params: &CommunityParams,
) -> Result<Purification> {
    let fraction = params.purification_fraction();
    let s2 = system
        .supported_set(sample, size, params.theta(), &fraction)?
        .intersection(s1);
    let s3 = system.supported_set(s2.as_slice(), size, params.theta(), &fraction)?;
    Ok(Purification { s2, s3 })
}

pub(crate) fn sample_with_replacement(set: &MemberSet, k: usize, rng: &mut impl Rng) -> Vec<MemberId> {
    let members = set.as_slice();
    (0..k).map(|_| members[rng.random_range(0..members.len())]).collect()
}

pub(crate) fn purify_sampled<A: AffinitySystem + ?Sized>(
    system: &A,
    s1: &MemberSet,
    k2: usize,
    size: usize,
    params: &CommunityParams,
    rng: &mut impl Rng,
) -> Result<Purification> {
    if s1.is_empty() {
        return Err(Error::invalid("rough set is empty"));
    }
    let sample = sample_with_replacement(s1, k2, rng);
    purify_with_sample(system, s1, &sample, size, params)
}

/// One purification round: samples `k2` members of `S1` with replacement
/// and returns `S3`. The result is not verified.
pub fn purify<A: AffinitySystem + ?Sized>(
    system: &A,
    s1: &MemberSet,
    config: &EnumConfig,
    rng: &mut impl Rng,
) -> Result<MemberSet> {
    Ok(purify_sampled(system, s1, config.k2(), config.size, &config.params, rng)?.s3)
}

fn purify_candidate<A: AffinitySystem + ?Sized>(
    system: &A,
    s1: &MemberSet,
    index: usize,
    config: &EnumConfig,
) -> Result<Vec<MemberSet>> {
    let mut checked: BTreeMap<MemberSet, (bool, usize)> = BTreeMap::new();
    let mut found = Vec::new();
    for rep in 0..config.n2() {
        let mut rng = stream(config.rng_seed, &[index as u64, rep as u64]);
        let s3 = purify(system, s1, config, &mut rng)?;
        if s3.is_empty() {
            continue;
        }
        let entry = match checked.get_mut(&s3) {
            Some(entry) => entry,
            None => {
                let ok = system.is_community(&s3, &config.params)?;
                if ok {
                    found.push(s3.clone());
                }
                checked.entry(s3.clone()).or_insert((ok, 0))
            }
        };
        entry.1 += 1;
        if config.early_exit && entry.0 && entry.1 >= 2 && s3.len() == config.size {
            break;
        }
    }
    Ok(found)
}

fn purify_candidates<A: AffinitySystem + ?Sized>(
    system: &A,
    candidates: &[MemberSet],
    config: &EnumConfig,
    strategy: Strategy,
) -> Result<CommunitySet> {
    let found: Vec<Vec<MemberSet>> = candidates
        .par_iter()
        .enumerate()
        .filter(|(_, s1)| !s1.is_empty())
        .map(|(i, s1)| purify_candidate(system, s1, i, config))
        .collect::<Result<_>>()?;
    let mut out = CommunitySet::new();
    for members in found.into_iter().flatten() {
        out.insert(Community::trusted(members, config.params.clone()), strategy);
    }
    Ok(out)
}

fn distinct(candidates: Vec<MemberSet>) -> Vec<MemberSet> {
    candidates.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

/// Exhaustive rough candidates, each purified `n2` times; every verified
/// `S3` is kept. Repeat with fresh seeds to drive the failure rate down.
pub fn enumerate_main(system: &RankedSystem, config: &EnumConfig) -> Result<CommunitySet> {
    let candidates = distinct(rough_list_exhaustive(system, config)?);
    purify_candidates(system, &candidates, config, Strategy::Exhaustive)
}

fn hop_len(system: &RankedSystem, member: MemberId, prefix: usize) -> usize {
    system.prefix(member, prefix).len()
}

/// Exact distribution of `R(R(y))`, where `R(v)` is uniform over the first
/// `⌈θt⌉` entries of `π_v` (or all of `π_v` if shorter). Mass that would
/// step into an empty list is lost.
pub fn two_hop_distribution(system: &RankedSystem, y: MemberId, size: usize, theta: &Rational) -> Result<Vec<(MemberId, Rational)>> {
    check_members(&[y], system.len())?;
    let prefix = crate::params::prefix_len(theta, size);
    let first = system.prefix(y, prefix);
    if first.is_empty() {
        return Err(Error::invalid(format!("member {y} has an empty prefix")));
    }
    let mut mass: BTreeMap<MemberId, Rational> = BTreeMap::new();
    for &z in first {
        let len = hop_len(system, z, prefix);
        if len == 0 {
            continue;
        }
        let share = Rational::new(1.into(), (first.len() * len).into());
        for &x in system.prefix(z, prefix) {
            *mass.entry(x).or_insert_with(Rational::zero) += &share;
        }
    }
    Ok(mass.into_iter().collect())
}

/// `Pr[R(R(y)) = x]`, exactly.
pub fn rr_probability(system: &RankedSystem, y: MemberId, x: MemberId, size: usize, theta: &Rational) -> Result<Rational> {
    check_members(&[x], system.len())?;
    let dist = two_hop_distribution(system, y, size, theta)?;
    Ok(dist
        .binary_search_by_key(&x, |(m, _)| *m)
        .map(|i| dist[i].1.clone())
        .unwrap_or_else(|_| Rational::zero()))
}

/// `2θ²t/α³`, the size bound on two-hop rough sets.
pub fn alt_size_bound(params: &CommunityParams, size: usize) -> Rational {
    let a = params.alpha();
    int(2) * params.theta() * params.theta() * int(size) / (a * a * a)
}

/// For every `k1'`-subset `U0`, the members `x` with
/// `Σ_{y ∈ U0} Pr[R(R(y)) = x] ≥ α/(2θ²t)`.
pub fn rough_list_alt(system: &RankedSystem, config: &EnumConfig) -> Result<Vec<MemberSet>> {
    config.validate()?;
    let n = system.len();
    let k = config.k1_alt().min(n);
    let count = binomial(n, k);
    if count > config.candidate_budget as u128 {
        return Err(Error::budget(count, config.candidate_budget, "lower k1_alt or use the local strategy"));
    }
    let theta = config.params.theta();
    let dists: Vec<Vec<(MemberId, Rational)>> = (0..n as MemberId)
        .into_par_iter()
        .map(|y| two_hop_distribution(system, y, config.size, theta).unwrap_or_default())
        .collect();
    let threshold = config.params.alpha() / (int(2) * theta * theta * int(config.size));
    let subsets: Vec<Vec<MemberId>> = (0..n as MemberId).combinations(k).collect();
    Ok(subsets
        .par_iter()
        .map(|u| {
            let mut score: BTreeMap<MemberId, Rational> = BTreeMap::new();
            for &y in u {
                for (x, p) in &dists[y as usize] {
                    *score.entry(*x).or_insert_with(Rational::zero) += p;
                }
            }
            score.into_iter().filter(|(_, s)| *s >= threshold).map(|(x, _)| x).collect()
        })
        .collect())
}

/// [`rough_list_alt`] candidates, purified like [`enumerate_main`].
pub fn enumerate_two_hop(system: &RankedSystem, config: &EnumConfig) -> Result<CommunitySet> {
    let candidates = distinct(rough_list_alt(system, config)?);
    purify_candidates(system, &candidates, config, Strategy::TwoHop)
}

/// Configuration of the multiset baseline.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiPolyConfig {
    pub params: CommunityParams,
    /// Multiset size; defaults to [`quasipoly_k`].
    pub k: Option<usize>,
    pub sizes: Vec<usize>,
    /// Largest number of `(multiset, size)` pairs to examine.
    pub budget: u64,
}

impl QuasiPolyConfig {
    pub fn new(params: CommunityParams, sizes: Vec<usize>) -> Self {
        QuasiPolyConfig {
            params,
            k: None,
            sizes,
            budget: 5_000_000,
        }
    }
}

/// `⌈2 ln(4n)/γ²⌉`.
pub fn quasipoly_k(params: &CommunityParams, n: usize) -> usize {
    let g = params.gamma_f64();
    (2.0 * (4.0 * n as f64).ln() / (g * g)).ceil().max(1.0) as usize
}

/// `S_U`: members receiving at least `(α − γ/2)|U|` votes from the
/// multiset `U` at prefix `⌈θt⌉`.
pub fn multiset_support<A: AffinitySystem + ?Sized>(
    system: &A,
    multiset: &[MemberId],
    size: usize,
    params: &CommunityParams,
) -> Result<MemberSet> {
    system.supported_set(multiset, size, params.theta(), &params.purification_fraction())
}

/// Every multiset `U` of size `k` and every size `t`: keep `S_U` when it
/// verifies.
pub fn enumerate_quasipoly<A: AffinitySystem + ?Sized>(system: &A, config: &QuasiPolyConfig) -> Result<CommunitySet> {
    let n = system.member_count();
    if n == 0 {
        return Err(Error::invalid("system is empty"));
    }
    let k = config.k.unwrap_or_else(|| quasipoly_k(&config.params, n));
    if k == 0 || config.sizes.contains(&0) {
        return Err(Error::invalid("multiset size and community sizes must be positive"));
    }
    let work = binomial(n + k - 1, k).saturating_mul(config.sizes.len() as u128);
    if work > config.budget as u128 {
        return Err(Error::budget(work, config.budget, "pass a smaller k override or fewer sizes"));
    }
    let multisets: Vec<Vec<MemberId>> = (0..n as MemberId).combinations_with_replacement(k).collect();
    let found: Vec<Vec<MemberSet>> = multisets
        .par_iter()
        .map(|u| {
            let mut hits = Vec::new();
            for &t in &config.sizes {
                let s = multiset_support(system, u, t, &config.params)?;
                if !s.is_empty() && system.is_community(&s, &config.params)? {
                    hits.push(s);
                }
            }
            Ok(hits)
        })
        .collect::<Result<_>>()?;
    let mut out = CommunitySet::new();
    for members in found.into_iter().flatten() {
        out.insert(Community::trusted(members, config.params.clone()), Strategy::QuasiPoly);
    }
    Ok(out)
}

pub const DEFAULT_ORACLE_LIMIT: usize = 14;

/// Every community whose size lies in `sizes`, by testing all subsets.
/// Refuses systems above [`DEFAULT_ORACLE_LIMIT`] members.
pub fn brute_force_oracle<A: AffinitySystem + ?Sized>(
    system: &A,
    params: &CommunityParams,
    sizes: RangeInclusive<usize>,
) -> Result<CommunitySet> {
    brute_force_oracle_with_limit(system, params, sizes, DEFAULT_ORACLE_LIMIT)
}

pub fn brute_force_oracle_with_limit<A: AffinitySystem + ?Sized>(
    system: &A,
    params: &CommunityParams,
    sizes: RangeInclusive<usize>,
    limit: usize,
) -> Result<CommunitySet> {
    let n = system.member_count();
    if n == 0 {
        return Err(Error::invalid("system is empty"));
    }
    if n > limit.min(30) {
        return Err(Error::budget(
            format!("2^{n}"),
            1u64 << limit.min(30),
            format!("the oracle only handles up to {limit} members"),
        ));
    }
    let masks: Vec<u64> = (1u64..1 << n)
        .filter(|m| sizes.contains(&(m.count_ones() as usize)))
        .collect();
    let hits: Vec<Option<MemberSet>> = masks
        .par_iter()
        .map(|&m| {
            let set = MemberSet::from_mask(m);
            system.is_community(&set, params).map(|ok| ok.then_some(set))
        })
        .collect::<Result<_>>()?;
    let mut out = CommunitySet::new();
    for members in hits.into_iter().flatten() {
        out.insert(Community::trusted(members, params.clone()), Strategy::Oracle);
    }
    Ok(out)
}

/// Two-hop mass every member of `S` receives from `v`, as `f64`, for
/// reporting.
pub fn min_two_hop_mass(system: &RankedSystem, v: MemberId, set: &MemberSet, theta: &Rational) -> Result<f64> {
    let dist = two_hop_distribution(system, v, set.len(), theta)?;
    let lookup: BTreeMap<MemberId, &Rational> = dist.iter().map(|(m, p)| (*m, p)).collect();
    Ok(set
        .iter()
        .map(|u| lookup.get(&u).map(|p| to_f64(p)).unwrap_or(0.0))
        .fold(f64::INFINITY, f64::min))
}
