//! Local community discovery from a seed member via two-hop sampling, and
//! whole-system enumeration built from it.
//!
//! `R(v)` picks a uniform member of `v`'s `⌈θt⌉`-prefix. When `v` votes
//! for at least half of its community `S` (a *good seed*), every member of
//! `S` is reached by `R(R(v))` with probability at least
//! `(α − 1/2)/(θ²t)`, so a few thousand draws expose `S` without looking at
//! anything beyond the prefixes they touch.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::community::{Community, CommunitySet, Strategy};
use crate::enumerate::{lemma2_k2, purify_sampled};
use crate::error::{Error, Result};
use crate::members::{MemberId, MemberSet};
use crate::params::{prefix_len, CommunityParams};
use crate::rational::{ceil_usize, floor_usize, from_f64, int, ratio, to_f64, Rational};
use crate::rng::stream;
use crate::system::{check_members, RankedSystem};

#[derive(Clone, Debug, PartialEq)]
pub struct LocalConfig {
    pub params: CommunityParams,
    pub size: usize,
    pub delta: f64,
    pub draws: Option<usize>,
    pub hit_threshold: Option<usize>,
    pub k2: Option<usize>,
    pub n2: Option<usize>,
    /// When set, also search at `⌊t/(1+ε)⌋` and `⌈t(1+ε)⌉`.
    pub size_slack: Option<Rational>,
    pub rng_seed: u64,
}

impl LocalConfig {
    pub fn new(params: CommunityParams, size: usize) -> Self {
        LocalConfig {
            params,
            size,
            delta: 0.1,
            draws: None,
            hit_threshold: None,
            k2: None,
            n2: None,
            size_slack: None,
            rng_seed: 0,
        }
    }

    /// `⌈4 ln(2t/δ)⌉`.
    pub fn hit_threshold(&self) -> usize {
        self.hit_threshold.unwrap_or_else(|| default_hits(self.size, self.delta))
    }

    /// `2θ²t/(α − 1/2)`: no more members than this can be hit often enough.
    pub fn size_cap(&self) -> Rational {
        size_cap(&self.params, self.size)
    }

    /// `⌊size_cap · hit_threshold⌋`, about `(8θ²t/(α − 1/2)) ln(2t/δ)`.
    pub fn draws(&self) -> usize {
        self.draws
            .unwrap_or_else(|| floor_usize(&(self.size_cap() * int(self.hit_threshold()))))
    }

    pub fn k2(&self) -> usize {
        self.k2.unwrap_or_else(|| default_k2(&self.params, self.delta))
    }

    pub fn n2(&self) -> usize {
        self.n2.unwrap_or(16)
    }

    pub fn validate(&self) -> Result<()> {
        require_majority(&self.params)?;
        if self.size == 0 {
            return Err(Error::invalid("community size must be at least 1"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::invalid(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        if self.hit_threshold() == 0 || self.k2() == 0 || self.n2() == 0 {
            return Err(Error::invalid("hit threshold, k2 and n2 must be at least 1"));
        }
        if self.draws() < self.hit_threshold() {
            return Err(Error::invalid("draws must be at least the hit threshold"));
        }
        if let Some(eps) = &self.size_slack {
            if *eps <= Rational::zero() {
                return Err(Error::invalid("size slack must be positive"));
            }
        }
        Ok(())
    }

    fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![self.size];
        if let Some(eps) = &self.size_slack {
            let grow = Rational::one() + eps;
            sizes.push(floor_usize(&(int(self.size) / &grow)).max(1));
            sizes.push(ceil_usize(&(int(self.size) * &grow)));
        }
        sizes.dedup();
        sizes
    }
}

fn require_majority(params: &CommunityParams) -> Result<()> {
    if *params.alpha() <= ratio(1, 2) {
        return Err(Error::UnsupportedParameters(format!(
            "local search needs alpha > 1/2, got {}; use the exhaustive or two-hop strategy",
            params.alpha()
        )));
    }
    Ok(())
}

fn default_hits(size: usize, delta: f64) -> usize {
    (4.0 * (2.0 * size as f64 / delta).ln()).ceil().max(1.0) as usize
}

fn size_cap(params: &CommunityParams, size: usize) -> Rational {
    int(2) * params.theta() * params.theta() * int(size) / (params.alpha() - ratio(1, 2))
}

fn default_k2(params: &CommunityParams, delta: f64) -> usize {
    let g = params.gamma_f64();
    let slack = params.alpha_f64() - 0.5;
    lemma2_k2(g, 32.0 * params.theta_f64() / (slack * g * delta))
}

/// One draw of `R(v)`: a uniform member of `π_v(1:⌈θt⌉)`.
pub fn sample_r(system: &RankedSystem, v: MemberId, size: usize, theta: &Rational, rng: &mut impl Rng) -> Result<MemberId> {
    check_members(&[v], system.len())?;
    let prefix = system.prefix(v, prefix_len(theta, size));
    if prefix.is_empty() {
        return Err(Error::invalid(format!("member {v} has an empty prefix")));
    }
    Ok(prefix[rng.random_range(0..prefix.len())])
}

/// Members hit at least `hits` times by `draws` samples of `R(R(v))`,
/// truncated to the `⌊2θ²t/(α − 1/2)⌋` most-hit ones (ties by id).
fn rough_at(
    system: &RankedSystem,
    v: MemberId,
    size: usize,
    params: &CommunityParams,
    draws: usize,
    hits: usize,
    rng: &mut impl Rng,
) -> Result<MemberSet> {
    check_members(&[v], system.len())?;
    let len = params.prefix_len(size);
    let first = system.prefix(v, len);
    if first.is_empty() {
        return Err(Error::invalid(format!("member {v} has an empty prefix")));
    }
    let mut counts: HashMap<MemberId, usize> = HashMap::new();
    for _ in 0..draws {
        let z = first[rng.random_range(0..first.len())];
        let second = system.prefix(z, len);
        if second.is_empty() {
            continue;
        }
        *counts.entry(second[rng.random_range(0..second.len())]).or_default() += 1;
    }
    let mut hit: Vec<(usize, MemberId)> = counts.into_iter().filter(|&(_, c)| c >= hits).map(|(m, c)| (c, m)).collect();
    hit.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    hit.truncate(floor_usize(&size_cap(params, size)));
    Ok(hit.into_iter().map(|(_, m)| m).collect())
}

/// Rough superset of `v`'s community by two-hop sampling. Contains the
/// community with probability `1 − δ/2` when `v` is a good seed.
pub fn local_rough(system: &RankedSystem, v: MemberId, config: &LocalConfig, rng: &mut impl Rng) -> Result<MemberSet> {
    config.validate()?;
    rough_at(system, v, config.size, &config.params, config.draws(), config.hit_threshold(), rng)
}

/// Searches for a size-`t` community containing `v`: one rough step, then
/// up to `n2` purification rounds, returning the first verified result.
pub fn local_find(system: &RankedSystem, v: MemberId, config: &LocalConfig, rng: &mut impl Rng) -> Result<Option<Community>> {
    config.validate()?;
    let params = &config.params;
    for size in config.sizes() {
        let hits = config.hit_threshold.unwrap_or_else(|| default_hits(size, config.delta));
        let draws = config
            .draws
            .unwrap_or_else(|| floor_usize(&(size_cap(params, size) * int(hits))));
        let s1 = rough_at(system, v, size, params, draws, hits, rng)?;
        if s1.is_empty() {
            continue;
        }
        for _ in 0..config.n2() {
            let s3 = purify_sampled(system, &s1, config.k2(), size, params, rng)?.s3;
            if s3.len() == config.size && s3.contains(v) && system.verify_unchecked(&s3, params).is_community {
                return Ok(Some(Community::trusted(s3, params.clone())));
            }
        }
    }
    Ok(None)
}

/// Which seeds [`enumerate_all_local`] starts from.
#[derive(Clone, Debug, PartialEq)]
pub enum SeedSampling {
    /// Every member at every grid size.
    All,
    /// A fixed list of seeds.
    Members(Vec<MemberId>),
    /// At grid size `t'`, each member independently with probability
    /// `min(1, boost · ln(1/δ) / ((2α − 1)⌊t'/(1+ε)⌋))`, enough to hit a
    /// good seed of each size-`t'` community with probability `1 − δ^boost`.
    Adaptive { boost: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalEnumConfig {
    /// Defaults to `min(γ, α − 1/2)/100`.
    pub epsilon: Option<Rational>,
    pub delta: f64,
    pub seeds: SeedSampling,
    /// Rough-plus-purify rounds per `(seed, size)` cell.
    pub repetitions: usize,
    /// Largest grid size; defaults to `n`.
    pub max_size: Option<usize>,
    pub rng_seed: u64,
}

impl Default for LocalEnumConfig {
    fn default() -> Self {
        LocalEnumConfig {
            epsilon: None,
            delta: 0.1,
            seeds: SeedSampling::All,
            repetitions: 1,
            max_size: None,
            rng_seed: 0,
        }
    }
}

/// Distinct values `round((1+ε)^i) ≤ max`, ascending.
pub fn size_grid(epsilon: &Rational, max: usize) -> Vec<usize> {
    let base = 1.0 + to_f64(epsilon);
    let mut grid = Vec::new();
    let mut x = 1.0f64;
    while x.round() as usize <= max {
        let t = x.round() as usize;
        if t >= 1 && grid.last() != Some(&t) {
            grid.push(t);
        }
        x *= base;
    }
    grid
}

/// For each member `v`, the members listing `v` and `v`'s position in
/// their ranking, sorted by lister.
struct InRanks(Vec<Vec<(MemberId, u32)>>);

impl InRanks {
    fn build(system: &RankedSystem) -> Self {
        let mut lists: Vec<Vec<(MemberId, u32)>> = vec![Vec::new(); system.len()];
        for z in 0..system.len() as MemberId {
            for (pos, &v) in system.ranking(z).iter().enumerate() {
                lists[v as usize].push((z, pos as u32));
            }
        }
        InRanks(lists)
    }

    fn position(&self, v: MemberId, lister: MemberId) -> Option<usize> {
        let list = &self.0[v as usize];
        list.binary_search_by_key(&lister, |(z, _)| *z)
            .ok()
            .map(|i| list[i].1 as usize)
    }

    /// `#{z ∈ π_v(1:L) : v ∈ π_z(1:L)}`.
    fn reciprocal(&self, system: &RankedSystem, v: MemberId, len: usize) -> usize {
        system
            .prefix(v, len)
            .iter()
            .filter(|&&z| self.position(v, z).is_some_and(|p| p < len))
            .count()
    }
}

/// Local search from every seed at every size `t'` of a geometric grid.
/// Each `(seed, t')` cell runs rough-plus-one-purification rounds at the
/// original parameters and at the relaxed `(θ(1+ε), α − 4ε, β + 4ε)`;
/// results are verified at the original parameters. The exact round is
/// what finds communities whose size sits exactly on the grid, such as
/// singletons, where the relaxed prefix `⌈θ(1+ε)t'⌉` overshoots.
///
/// A `(seed, t')` cell is skipped when fewer than
/// `(α − 1/2)⌊t'/(1+ε)⌋` members of `π_v(1:⌈θ(1+ε)²t'⌉)` list `v` back
/// within the same length; no good seed of a community of size within a
/// `1+ε` factor of `t'` fails that test.
pub fn enumerate_all_local(system: &RankedSystem, params: &CommunityParams, config: &LocalEnumConfig) -> Result<CommunitySet> {
    require_majority(params)?;
    if !(config.delta > 0.0 && config.delta < 1.0) {
        return Err(Error::invalid("delta must lie in (0, 1)"));
    }
    if config.repetitions == 0 {
        return Err(Error::invalid("repetitions must be at least 1"));
    }
    let n = system.len();
    let half = ratio(1, 2);
    let eps = match &config.epsilon {
        Some(e) if *e > Rational::zero() => e.clone(),
        Some(_) => return Err(Error::invalid("epsilon must be positive")),
        None => params.gamma().min(params.alpha() - &half) / int(100),
    };
    let grow = Rational::one() + &eps;
    let relaxed = CommunityParams::new(
        params.theta() * &grow,
        params.alpha() - int(4) * &eps,
        params.beta() + int(4) * &eps,
    )
    .and_then(|p| require_majority(&p).map(|_| p))
    .map_err(|e| Error::invalid(format!("epsilon {eps} too large for these parameters: {e}")))?;
    let seeds: Vec<MemberId> = match &config.seeds {
        SeedSampling::Members(list) => {
            check_members(list, n)?;
            list.clone()
        }
        _ => (0..n as MemberId).collect(),
    };
    let grid = size_grid(&eps, config.max_size.unwrap_or(n).min(n));
    let index = InRanks::build(system);
    let exact_k2 = default_k2(params, config.delta);
    let relaxed_k2 = default_k2(&relaxed, config.delta);
    let majority = params.alpha() - &half;
    let tasks: Vec<(usize, MemberId)> = grid
        .iter()
        .flat_map(|&t| seeds.iter().map(move |&v| (t, v)))
        .collect();
    let found: Vec<Vec<MemberSet>> = tasks
        .par_iter()
        .map(|&(t, v)| -> Result<Vec<MemberSet>> {
            let lower = floor_usize(&(int(t) / &grow));
            if let SeedSampling::Adaptive { boost } = config.seeds {
                let rate = boost * (1.0 / config.delta).ln() / ((2.0 * to_f64(&majority)) * lower.max(1) as f64);
                if rate < 1.0 && !stream(config.rng_seed, &[u64::MAX, v as u64, t as u64]).random_bool(rate) {
                    return Ok(Vec::new());
                }
            }
            let reach = prefix_len(&(relaxed.theta() * &grow), t);
            if int(index.reciprocal(system, v, reach)) < &majority * int(lower) {
                return Ok(Vec::new());
            }
            if system.prefix(v, 1).is_empty() {
                return Ok(Vec::new());
            }
            let hits = default_hits(t, config.delta);
            let mut out = Vec::new();
            for (variant, (run, k2)) in [(params, exact_k2), (&relaxed, relaxed_k2)].into_iter().enumerate() {
                let draws = floor_usize(&(size_cap(run, t) * int(hits)));
                for rep in 0..config.repetitions {
                    let mut rng = stream(config.rng_seed, &[v as u64, t as u64, rep as u64, variant as u64]);
                    let s1 = rough_at(system, v, t, run, draws, hits, &mut rng)?;
                    if s1.is_empty() {
                        continue;
                    }
                    let s3 = purify_sampled(system, &s1, k2, t, run, &mut rng)?.s3;
                    if !s3.is_empty() && !out.contains(&s3) && system.verify_unchecked(&s3, params).is_community {
                        out.push(s3);
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut out = CommunitySet::new();
    for members in found.into_iter().flatten() {
        out.insert(Community::trusted(members, params.clone()), Strategy::Local);
    }
    Ok(out)
}

/// Default `ε` of [`enumerate_all_local`] as a float, for reporting.
pub fn default_epsilon(params: &CommunityParams) -> Result<Rational> {
    require_majority(params)?;
    from_f64(params.gamma_f64().min(params.alpha_f64() - 0.5) / 100.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::brute_force_oracle;
    use crate::fixtures::inst_a;

    fn p(t: &str, a: &str, b: &str) -> CommunityParams {
        CommunityParams::parse(t, a, b).unwrap()
    }

    #[test]
    fn defaults() {
        let c = LocalConfig::new(p("1", "1", "0.5"), 50);
        assert_eq!(c.hit_threshold(), 28);
        assert_eq!(c.size_cap(), int(200));
        assert_eq!(c.draws(), 5600);
        let bad = LocalConfig::new(p("1", "0.5", "0.1"), 5);
        assert!(matches!(bad.validate(), Err(Error::UnsupportedParameters(_))));
    }

    #[test]
    fn sample_r_is_uniform_on_prefix() {
        let a = inst_a();
        let mut rng = stream(1, &[]);
        let mut counts = [0usize; 4];
        let draws = 10_000;
        for _ in 0..draws {
            counts[sample_r(&a, 0, 2, &int(1), &mut rng).unwrap() as usize] += 1;
        }
        assert_eq!(counts[2] + counts[3], 0);
        // χ² with one degree of freedom; 10.83 is the 0.1% critical value.
        let expected = draws as f64 / 2.0;
        let chi2: f64 = counts[..2].iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        assert!(chi2 < 10.83, "chi2 = {chi2}");
        let empty = RankedSystem::new(vec![vec![]]).unwrap();
        assert!(sample_r(&empty, 0, 1, &int(1), &mut rng).is_err());
    }

    #[test]
    fn rough_and_find_on_inst_a() {
        let a = inst_a();
        let mut c = LocalConfig::new(p("1", "1", "0.5"), 2);
        let mut rough_hits = 0;
        let mut found = 0;
        for trial in 0..100 {
            let mut rng = stream(trial, &[]);
            if local_rough(&a, 0, &c, &mut rng).unwrap() == MemberSet::from([0, 1]) {
                rough_hits += 1;
            }
            if local_find(&a, 0, &c, &mut rng).unwrap().map(|x| x.members().clone()) == Some(MemberSet::from([0, 1])) {
                found += 1;
            }
        }
        assert!(rough_hits >= 95);
        assert!(found >= 90);
        let got = local_find(&a, 2, &c, &mut stream(0, &[])).unwrap().unwrap();
        assert_eq!(got.members(), &MemberSet::from([2, 3]));
        c.size = 3;
        assert!(local_find(&a, 0, &c, &mut stream(0, &[])).unwrap().is_none());
    }

    #[test]
    fn grid_is_geometric() {
        assert_eq!(size_grid(&ratio(1, 2), 10), vec![1, 2, 3, 5, 8]);
        assert_eq!(size_grid(&ratio(1, 100), 4), vec![1, 2, 3, 4]);
    }

    #[test]
    fn enumerate_all_local_matches_oracle_on_inst_a() {
        let a = inst_a();
        let params = p("1", "1", "0.5");
        let found = enumerate_all_local(&a, &params, &LocalEnumConfig::default()).unwrap();
        let oracle = brute_force_oracle(&a, &params, 1..=4).unwrap();
        assert_eq!(
            found.member_sets().collect::<Vec<_>>(),
            oracle.member_sets().collect::<Vec<_>>()
        );
    }
}
