//! Multi-faceted systems: every member holds one ranking per facet, and a
//! community comes with a facet assignment `ψ` choosing which ranking each
//! insider votes with.
//!
//! Facets are numbered from 0 here; the text format numbers them from 1.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use microlp::{ComparisonOp, OptimizationDirection, Problem};
use rand::Rng;
use rayon::prelude::*;

use crate::enumerate::{sample_with_replacement, EnumConfig};
use crate::error::{Error, Result};
use crate::generators::binomial;
use crate::members::{MemberId, MemberSet};
use crate::params::{prefix_len, CommunityParams};
use crate::rational::{ceil_usize, int, Rational};
use crate::rng::stream;
use crate::system::{check_members, count_votes, RankedSystem, VoteTally};

/// Rankings `π_i^1 … π_i^{f_i}` for each member `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetedSystem {
    facets: Vec<Vec<Vec<MemberId>>>,
}

impl FacetedSystem {
    pub fn new(facets: Vec<Vec<Vec<MemberId>>>) -> Result<Self> {
        let n = facets.len();
        if n == 0 {
            return Err(Error::invalid("system has no members"));
        }
        if n > MemberId::MAX as usize {
            return Err(Error::invalid("too many members"));
        }
        for (m, lists) in facets.iter().enumerate() {
            if lists.is_empty() {
                return Err(Error::invalid(format!("member {m} has no facets")));
            }
            for (f, ranking) in lists.iter().enumerate() {
                check_members(ranking, n)?;
                if ranking.iter().duplicates().next().is_some() {
                    return Err(Error::invalid(format!("member {m} facet {f} repeats an entry")));
                }
            }
        }
        Ok(FacetedSystem { facets })
    }

    /// The one-facet system with `system`'s rankings.
    pub fn from_ranked(system: &RankedSystem) -> Self {
        let facets = (0..system.len() as MemberId)
            .map(|m| vec![system.ranking(m).to_vec()])
            .collect();
        FacetedSystem { facets }
    }

    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn facet_count(&self, member: MemberId) -> usize {
        self.facets[member as usize].len()
    }

    /// Largest facet count over all members.
    pub fn max_facets(&self) -> usize {
        self.facets.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn ranking(&self, member: MemberId, facet: usize) -> &[MemberId] {
        &self.facets[member as usize][facet]
    }

    pub fn prefix(&self, member: MemberId, facet: usize, len: usize) -> &[MemberId] {
        let ranking = self.ranking(member, facet);
        &ranking[..len.min(ranking.len())]
    }

    /// Number of facet assignments on `set`, saturating at `u128::MAX`.
    pub fn assignment_count(&self, set: &MemberSet) -> u128 {
        set.iter()
            .try_fold(1u128, |acc, m| acc.checked_mul(self.facet_count(m) as u128))
            .unwrap_or(u128::MAX)
    }

    fn votes(&self, voters: &[(MemberId, usize)], len: usize) -> Vec<(MemberId, u32)> {
        count_votes(voters.iter().map(|&(m, f)| self.prefix(m, f, len)))
    }

    fn supported(&self, voters: &[(MemberId, usize)], weight: usize, len: usize, fraction: &Rational) -> MemberSet {
        if weight == 0 {
            return MemberSet::default();
        }
        let needed = ceil_usize(&(fraction * int(weight))) as u32;
        self.votes(voters, len)
            .into_iter()
            .filter(|&(_, v)| v >= needed)
            .map(|(m, _)| m)
            .collect()
    }
}

/// A facet choice `ψ(i)` for each member of a set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FacetAssignment {
    members: MemberSet,
    facets: Vec<usize>,
}

impl FacetAssignment {
    /// `facets[k]` is the facet of the `k`-th smallest member of `members`.
    pub fn new(members: MemberSet, facets: Vec<usize>) -> Result<Self> {
        if members.len() != facets.len() {
            return Err(Error::invalid(format!(
                "{} members but {} facet choices",
                members.len(),
                facets.len()
            )));
        }
        Ok(FacetAssignment { members, facets })
    }

    pub fn uniform(members: MemberSet, facet: usize) -> Self {
        let facets = vec![facet; members.len()];
        FacetAssignment { members, facets }
    }

    pub fn members(&self) -> &MemberSet {
        &self.members
    }

    pub fn get(&self, member: MemberId) -> Option<usize> {
        self.members
            .as_slice()
            .binary_search(&member)
            .ok()
            .map(|k| self.facets[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (MemberId, usize)> + '_ {
        self.members.iter().zip(self.facets.iter().copied())
    }

    fn pairs(&self) -> Vec<(MemberId, usize)> {
        self.iter().collect()
    }
}

fn check_assignment(system: &FacetedSystem, psi: &FacetAssignment) -> Result<()> {
    if psi.members.is_empty() {
        return Err(Error::invalid("candidate set is empty"));
    }
    check_members(psi.members.as_slice(), system.len())?;
    for (m, f) in psi.iter() {
        if f >= system.facet_count(m) {
            return Err(Error::invalid(format!(
                "member {m} has {} facets, facet {} requested",
                system.facet_count(m),
                f + 1
            )));
        }
    }
    Ok(())
}

/// `φ^{θ,ψ}_S`: votes from `S = dom ψ`, each insider using its chosen facet.
pub fn faceted_vote_tally(system: &FacetedSystem, psi: &FacetAssignment, theta: &Rational) -> Result<VoteTally<u32>> {
    check_assignment(system, psi)?;
    let len = prefix_len(theta, psi.members.len());
    Ok(VoteTally::from_entries(
        system.len(),
        psi.members.len(),
        system.votes(&psi.pairs(), len),
    ))
}

fn passes(tally: &[(MemberId, u32)], set: &MemberSet, params: &CommunityParams) -> bool {
    let t = set.len();
    let inside = params.min_inside_votes(t) as u32;
    let outside = params.max_outside_votes(t) as u32;
    let mut present = 0;
    for &(m, v) in tally {
        if set.contains(m) {
            if v < inside {
                return false;
            }
            present += 1;
        } else if v > outside {
            return false;
        }
    }
    present == t || inside == 0
}

/// Whether `(dom ψ, ψ)` is a `(θ, α, β)` multifaceted community.
pub fn verify_multifaceted(system: &FacetedSystem, psi: &FacetAssignment, params: &CommunityParams) -> Result<bool> {
    let tally = faceted_vote_tally(system, psi, params.theta())?;
    Ok(passes(tally.entries(), &psi.members, params))
}

/// How [`recover_facets`] searches for `ψ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecoverMethod {
    /// Every assignment is tried; the result verifies at the original
    /// parameters.
    Exhaustive,
    /// LP relaxation with randomized rounding; the result verifies at
    /// `(θ, α − γ/4, β + γ/4)`.
    Lp,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoverConfig {
    /// Largest assignment space searched exhaustively.
    pub exhaustive_budget: u128,
    pub max_retries: usize,
    /// Forces a method regardless of the assignment space.
    pub method: Option<RecoverMethod>,
}

impl Default for RecoverConfig {
    fn default() -> Self {
        RecoverConfig {
            exhaustive_budget: 1 << 16,
            max_retries: 64,
            method: None,
        }
    }
}

impl RecoverConfig {
    pub fn method_for(&self, system: &FacetedSystem, set: &MemberSet) -> RecoverMethod {
        self.method.unwrap_or_else(|| {
            if system.assignment_count(set) <= self.exhaustive_budget {
                RecoverMethod::Exhaustive
            } else {
                RecoverMethod::Lp
            }
        })
    }
}

/// Threshold `8 ln n / γ²` separating small communities (where all
/// assignments can be tried) from large ones (where the LP concentrates).
pub fn small_community_threshold(n: usize, params: &CommunityParams) -> f64 {
    let g = params.gamma_f64();
    8.0 * (n as f64).ln() / (g * g)
}

/// Finds `ψ` making `S` a multifaceted community.
///
/// Fails with [`Error::Infeasible`] when no assignment (exhaustive) or no
/// fractional point (LP) exists, and with [`Error::RetryExhausted`] when
/// rounding keeps missing.
pub fn recover_facets(
    system: &FacetedSystem,
    set: &MemberSet,
    params: &CommunityParams,
    config: &RecoverConfig,
    rng: &mut impl Rng,
) -> Result<FacetAssignment> {
    if set.is_empty() {
        return Err(Error::invalid("candidate set is empty"));
    }
    check_members(set.as_slice(), system.len())?;
    match config.method_for(system, set) {
        RecoverMethod::Exhaustive => {
            let count = system.assignment_count(set);
            if count > config.exhaustive_budget {
                return Err(Error::budget(count, config.exhaustive_budget as u64, "use the LP method"));
            }
            exhaustive_assignment(system, set, params)
                .ok_or_else(|| Error::Infeasible(format!("no facet assignment makes this {}-member set a community", set.len())))
        }
        RecoverMethod::Lp => {
            let lp = FacetLp::build(system, set, params);
            let point = lp.solve()?;
            let relaxed = params.shifted(&(params.gamma() / int(4)), &(params.gamma() / int(4)))?;
            for _ in 0..config.max_retries {
                let psi = lp.round(&point, rng);
                if verify_multifaceted(system, &psi, &relaxed)? {
                    return Ok(psi);
                }
            }
            Err(Error::RetryExhausted {
                attempts: config.max_retries,
            })
        }
    }
}

/// First assignment (in odometer order, last member fastest) that makes
/// `set` a community.
fn exhaustive_assignment(system: &FacetedSystem, set: &MemberSet, params: &CommunityParams) -> Option<FacetAssignment> {
    let members = set.as_slice();
    let len = prefix_len(params.theta(), set.len());
    let t = set.len();
    let inside = params.min_inside_votes(t) as u32;
    let outside = params.max_outside_votes(t) as u32;
    let n = system.len();
    let mut votes = vec![0u32; n];
    let mut choice = vec![0usize; members.len()];
    for &m in members {
        for &j in system.prefix(m, 0, len) {
            votes[j as usize] += 1;
        }
    }
    let ok = |votes: &[u32]| {
        votes.iter().enumerate().all(|(j, &v)| {
            if set.contains(j as MemberId) {
                v >= inside
            } else {
                v <= outside
            }
        })
    };
    loop {
        if ok(&votes) {
            return Some(FacetAssignment {
                members: set.clone(),
                facets: choice,
            });
        }
        let mut k = members.len();
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            let m = members[k];
            for &j in system.prefix(m, choice[k], len) {
                votes[j as usize] -= 1;
            }
            choice[k] += 1;
            if choice[k] == system.facet_count(m) {
                choice[k] = 0;
            }
            for &j in system.prefix(m, choice[k], len) {
                votes[j as usize] += 1;
            }
            if choice[k] != 0 {
                break;
            }
        }
    }
}

/// `(target, voters (member index, facet), is_insider)`.
type LpRow = (MemberId, Vec<(usize, usize)>, bool);

/// The relaxation `Σ_f x_{s,f} = 1`, insiders receiving at least `αt` and
/// voted outsiders at most `βt − 1/(4t)` fractional votes, `0 ≤ x ≤ 1`.
#[derive(Clone, Debug)]
pub struct FacetLp {
    members: MemberSet,
    counts: Vec<usize>,
    rows: Vec<LpRow>,
    inside_rhs: f64,
    outside_rhs: f64,
}

impl FacetLp {
    pub fn build(system: &FacetedSystem, set: &MemberSet, params: &CommunityParams) -> Self {
        let t = set.len();
        let len = prefix_len(params.theta(), t);
        let counts: Vec<usize> = set.iter().map(|m| system.facet_count(m)).collect();
        let mut by_target: BTreeMap<MemberId, Vec<(usize, usize)>> = set.iter().map(|m| (m, Vec::new())).collect();
        for (k, m) in set.iter().enumerate() {
            for f in 0..counts[k] {
                for &j in system.prefix(m, f, len) {
                    by_target.entry(j).or_default().push((k, f));
                }
            }
        }
        let tf = t as f64;
        FacetLp {
            members: set.clone(),
            counts,
            rows: by_target
                .into_iter()
                .map(|(j, voters)| (j, voters, set.contains(j)))
                .collect(),
            inside_rhs: params.alpha_f64() * tf,
            outside_rhs: params.beta_f64() * tf - 1.0 / (4.0 * tf),
        }
    }

    pub fn variable_count(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Whether `point[k][f]` (member index `k`, facet `f`) satisfies every
    /// constraint within `tolerance`.
    pub fn is_feasible(&self, point: &[Vec<f64>], tolerance: f64) -> bool {
        if point.len() != self.counts.len() || point.iter().zip(&self.counts).any(|(row, &c)| row.len() != c) {
            return false;
        }
        let bounds = point.iter().flatten().all(|&x| (-tolerance..=1.0 + tolerance).contains(&x));
        let simplex = point.iter().all(|row| (row.iter().sum::<f64>() - 1.0).abs() <= tolerance);
        let rows = self.rows.iter().all(|(_, voters, insider)| {
            let sum: f64 = voters.iter().map(|&(k, f)| point[k][f]).sum();
            if *insider {
                sum >= self.inside_rhs - tolerance
            } else {
                sum <= self.outside_rhs + tolerance
            }
        });
        bounds && simplex && rows
    }

    /// The indicator point of an integral assignment.
    pub fn indicator(&self, psi: &FacetAssignment) -> Vec<Vec<f64>> {
        self.members
            .iter()
            .zip(&self.counts)
            .map(|(m, &c)| {
                let chosen = psi.get(m);
                (0..c).map(|f| if chosen == Some(f) { 1.0 } else { 0.0 }).collect()
            })
            .collect()
    }

    pub fn solve(&self) -> Result<Vec<Vec<f64>>> {
        let mut problem = Problem::new(OptimizationDirection::Minimize);
        let vars: Vec<Vec<microlp::Variable>> = self
            .counts
            .iter()
            .map(|&c| (0..c).map(|_| problem.add_var(0.0, (0.0, 1.0))).collect())
            .collect();
        for row in &vars {
            problem.add_constraint(row.iter().map(|&v| (v, 1.0)), ComparisonOp::Eq, 1.0);
        }
        for (_, voters, insider) in &self.rows {
            let expr = voters.iter().map(|&(k, f)| (vars[k][f], 1.0));
            if *insider {
                problem.add_constraint(expr, ComparisonOp::Ge, self.inside_rhs);
            } else {
                problem.add_constraint(expr, ComparisonOp::Le, self.outside_rhs);
            }
        }
        let outcome = problem.solve().map_err(|e| match e {
            microlp::Error::Infeasible => Error::Infeasible("facet relaxation has no feasible point".into()),
            other => Error::SolverFailure(other.to_string()),
        })?;
        let solution = outcome
            .solution()
            .ok_or_else(|| Error::SolverFailure("LP solve was interrupted".into()))?;
        Ok(vars
            .iter()
            .map(|row| row.iter().map(|&v| solution.var_value(v).clamp(0.0, 1.0)).collect())
            .collect())
    }

    /// Draws `ψ(s) = f` with probability `x_{s,f}`, independently per member.
    pub fn round(&self, point: &[Vec<f64>], rng: &mut impl Rng) -> FacetAssignment {
        let facets = point
            .iter()
            .map(|row| {
                let total: f64 = row.iter().sum();
                let mut u = rng.random::<f64>() * total;
                for (f, &x) in row.iter().enumerate() {
                    if u < x {
                        return f;
                    }
                    u -= x;
                }
                row.iter().rposition(|&x| x > 0.0).unwrap_or(0)
            })
            .collect();
        FacetAssignment {
            members: self.members.clone(),
            facets,
        }
    }
}

/// A community found by [`enumerate_multifaceted`] with the facet
/// assignment certifying it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetedCommunity {
    pub members: MemberSet,
    pub assignment: FacetAssignment,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultifacetConfig {
    pub base: EnumConfig,
    /// Largest number of facet guesses tried exhaustively on a sample;
    /// beyond it, the best-overlap guess plus `random_guesses` random ones.
    pub guess_budget: u128,
    pub random_guesses: usize,
    /// Refinement sample size; defaults to `⌈8 ln n / γ²⌉`.
    pub refine_size: Option<usize>,
    pub recover: RecoverConfig,
}

impl MultifacetConfig {
    pub fn new(params: CommunityParams, size: usize) -> Self {
        MultifacetConfig {
            base: EnumConfig::new(params, size),
            guess_budget: 256,
            random_guesses: 8,
            refine_size: None,
            recover: RecoverConfig::default(),
        }
    }

    pub fn refine_size(&self, n: usize) -> usize {
        self.refine_size
            .unwrap_or_else(|| small_community_threshold(n, &self.base.params).ceil().max(1.0) as usize)
    }
}

/// All facet assignments of `members` in odometer order.
fn all_guesses(system: &FacetedSystem, members: &[MemberId]) -> Vec<Vec<(MemberId, usize)>> {
    members
        .iter()
        .map(|&m| (0..system.facet_count(m)).map(move |f| (m, f)))
        .multi_cartesian_product()
        .collect()
}

/// Facet guesses for the distinct members of a sample: every assignment
/// when there are at most `budget`, otherwise the facet overlapping
/// `reference` most for each member followed by random assignments.
fn guesses(
    system: &FacetedSystem,
    members: &[MemberId],
    reference: &MemberSet,
    len: usize,
    config: &MultifacetConfig,
    rng: &mut impl Rng,
) -> Vec<Vec<(MemberId, usize)>> {
    let count = system.assignment_count(&MemberSet::new(members.iter().copied()));
    if count <= config.guess_budget {
        return all_guesses(system, members);
    }
    let best = members
        .iter()
        .map(|&m| {
            let f = (0..system.facet_count(m))
                .max_by_key(|&f| {
                    let hits = system.prefix(m, f, len).iter().filter(|&&j| reference.contains(j)).count();
                    (hits, std::cmp::Reverse(f))
                })
                .unwrap_or(0);
            (m, f)
        })
        .collect();
    let mut out = vec![best];
    for _ in 0..config.random_guesses {
        out.push(
            members
                .iter()
                .map(|&m| (m, rng.random_range(0..system.facet_count(m))))
                .collect(),
        );
    }
    out
}

/// Expands a multiset sample into voter pairs under a guess on its
/// distinct members.
fn with_guess(sample: &[MemberId], guess: &[(MemberId, usize)]) -> Vec<(MemberId, usize)> {
    sample
        .iter()
        .map(|&m| {
            let k = guess.binary_search_by_key(&m, |&(g, _)| g).expect("guessed member");
            (m, guess[k].1)
        })
        .collect()
}

/// Rough candidates: for each `k1`-subset `U` and each facet guess on `U`,
/// the union of the chosen `⌈θt⌉`-prefixes.
pub fn faceted_rough_list(system: &FacetedSystem, config: &MultifacetConfig) -> Result<Vec<MemberSet>> {
    let base = &config.base;
    base.validate()?;
    let n = system.len();
    let k1 = base.k1().min(n);
    let per_subset = (system.max_facets() as u128).checked_pow(k1 as u32).unwrap_or(u128::MAX);
    let count = binomial(n, k1).saturating_mul(per_subset);
    if count > base.candidate_budget as u128 {
        return Err(Error::budget(count, base.candidate_budget, "lower k1"));
    }
    let len = base.params.prefix_len(base.size);
    let subsets: Vec<Vec<MemberId>> = (0..n as MemberId).combinations(k1).collect();
    let lists: Vec<Vec<MemberSet>> = subsets
        .par_iter()
        .map(|u| {
            all_guesses(system, u)
                .into_iter()
                .map(|guess| {
                    guess
                        .iter()
                        .flat_map(|&(m, f)| system.prefix(m, f, len).iter().copied())
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(lists.into_iter().flatten().collect())
}

/// One purification round with facet guessing. Returns every distinct
/// nonempty set emitted across guesses.
pub fn faceted_purify(
    system: &FacetedSystem,
    s1: &MemberSet,
    config: &MultifacetConfig,
    rng: &mut impl Rng,
) -> Result<Vec<MemberSet>> {
    if s1.is_empty() {
        return Err(Error::invalid("rough set is empty"));
    }
    let base = &config.base;
    let len = base.params.prefix_len(base.size).max(1);
    let fraction = base.params.purification_fraction();
    let sample = sample_with_replacement(s1, base.k2(), rng);
    let distinct: Vec<MemberId> = sample.iter().copied().sorted_unstable().dedup().collect();
    let mut s2s = BTreeSet::new();
    for guess in guesses(system, &distinct, s1, len, config, rng) {
        let voters = with_guess(&sample, &guess);
        let s2 = system.supported(&voters, voters.len(), len, &fraction).intersection(s1);
        if !s2.is_empty() {
            s2s.insert(s2);
        }
    }
    let m = config.refine_size(system.len());
    let mut out = BTreeSet::new();
    for s2 in s2s {
        let refine: Vec<MemberId> = if system.max_facets() == 1 || m >= s2.len() {
            s2.as_slice().to_vec()
        } else {
            sample_with_replacement(&s2, m, rng)
        };
        let distinct: Vec<MemberId> = refine.iter().copied().sorted_unstable().dedup().collect();
        for guess in guesses(system, &distinct, &s2, len, config, rng) {
            let voters = with_guess(&refine, &guess);
            let s3 = system.supported(&voters, voters.len(), len, &fraction);
            if !s3.is_empty() {
                out.insert(s3);
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn purify_faceted_candidate(
    system: &FacetedSystem,
    s1: &MemberSet,
    index: usize,
    config: &MultifacetConfig,
) -> Result<Vec<FacetedCommunity>> {
    let base = &config.base;
    let mut checked: BTreeMap<MemberSet, (bool, usize)> = BTreeMap::new();
    let mut found = Vec::new();
    for rep in 0..base.n2() {
        let mut rng = stream(base.rng_seed, &[index as u64, rep as u64]);
        let mut stop = false;
        for s3 in faceted_purify(system, s1, config, &mut rng)? {
            let entry = match checked.get_mut(&s3) {
                Some(entry) => entry,
                None => {
                    let mut recover_rng = stream(base.rng_seed, &[index as u64, rep as u64, 1]);
                    let ok = match recover_facets(system, &s3, &base.params, &config.recover, &mut recover_rng) {
                        Ok(psi) => {
                            let ok = verify_multifaceted(system, &psi, &base.params)?;
                            if ok {
                                found.push(FacetedCommunity {
                                    members: s3.clone(),
                                    assignment: psi,
                                });
                            }
                            ok
                        }
                        Err(Error::Infeasible(_) | Error::RetryExhausted { .. }) => false,
                        Err(e) => return Err(e),
                    };
                    checked.entry(s3.clone()).or_insert((ok, 0))
                }
            };
            entry.1 += 1;
            stop |= base.early_exit && entry.0 && entry.1 >= 2 && s3.len() == base.size;
        }
        if stop {
            break;
        }
    }
    Ok(found)
}

/// Enumerates multifaceted communities of size about `t`: rough candidates
/// over facet guesses, purification with facet guessing, then facet
/// recovery on each emitted set. Only communities whose recovered `ψ`
/// verifies at the requested parameters are returned, keyed by members.
pub fn enumerate_multifaceted(system: &FacetedSystem, config: &MultifacetConfig) -> Result<Vec<FacetedCommunity>> {
    let candidates: Vec<MemberSet> = faceted_rough_list(system, config)?
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let found: Vec<Vec<FacetedCommunity>> = candidates
        .par_iter()
        .enumerate()
        .filter(|(_, s1)| !s1.is_empty())
        .map(|(i, s1)| purify_faceted_candidate(system, s1, i, config))
        .collect::<Result<_>>()?;
    let mut out: BTreeMap<MemberSet, FacetedCommunity> = BTreeMap::new();
    for c in found.into_iter().flatten() {
        out.entry(c.members.clone()).or_insert(c);
    }
    Ok(out.into_values().collect())
}
