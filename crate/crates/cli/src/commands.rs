use std::fmt::Write as _;
use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use affinity::enumerate::{brute_force_oracle_with_limit, enumerate_two_hop, QuasiPolyConfig};
use affinity::format::{
    parse_communities, parse_faceted, parse_graph, parse_ranked, parse_weighted, write_communities, write_faceted, write_graph,
    write_ranked, write_reduced, write_weighted,
};
use affinity::generators::{
    blob_instance, counting_report, faceted_blob, gnp, gnp_planted_clique, hardness_clique_params, overlap_pair, planted_ranked,
    planted_weighted,
};
use affinity::lifting::{direct_lift, verify_alpha_beta_cluster, verify_graph_community};
use affinity::multifacet::{enumerate_multifaceted, faceted_vote_tally, RecoverMethod};
use affinity::rational::{format_rational, from_f64, parse_rational, Rational};
use affinity::reduction::{default_epsilon, reduced_params};
use affinity::rng::{derive_seed, stream};
use affinity::{
    enumerate_all_local, enumerate_main, enumerate_quasipoly, lift, local_find, map_back, recover_facets, reduce, verify_multifaceted,
    AffinitySystem, CommunityParams, CommunitySet, EnumConfig, Error, FacetAssignment, LiftConfig, LiftMethod, LocalConfig,
    LocalEnumConfig, MemberId, MemberSet, MultifacetConfig, RankedSystem, RecoverConfig, SeedSampling, VoteTally, WeightedSystem,
};

use crate::args::*;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Lib(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    File { path: PathBuf, source: Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        let lib = match self {
            CliError::Lib(e) | CliError::File { source: e, .. } => e,
            CliError::Io { .. } | CliError::Usage(_) => return 2,
        };
        match lib {
            Error::InvalidInput(_) | Error::Parse { .. } | Error::UnsupportedParameters(_) => 2,
            Error::BudgetExceeded { .. } | Error::SolverFailure(_) | Error::Infeasible(_) | Error::RetryExhausted { .. } => 3,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load<T>(path: &Path, parse: fn(&str) -> affinity::Result<T>) -> Result<T> {
    parse(&read(path)?).map_err(|source| CliError::File {
        path: path.to_owned(),
        source,
    })
}

/// Writes machine output to `path`, or to stdout when there is none.
fn emit(path: Option<&Path>, text: &str, summary: &str) -> Result<()> {
    match path {
        Some(path) => {
            fs::write(path, text).map_err(|source| CliError::Io {
                path: path.to_owned(),
                source,
            })?;
            if !summary.is_empty() {
                println!("{summary}");
            }
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn params(args: &ParamArgs) -> Result<CommunityParams> {
    Ok(CommunityParams::parse(&args.theta, &args.alpha, &args.beta)?)
}

fn rational(text: &str) -> Result<Rational> {
    Ok(parse_rational(text)?)
}

fn ids(text: &str) -> Result<Vec<MemberId>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| usage(format!("`{t}` is not a member id"))))
        .collect()
}

fn member_set(text: &str) -> Result<MemberSet> {
    let list = ids(text)?;
    if list.is_empty() {
        return Err(usage("--set is empty"));
    }
    Ok(MemberSet::new(list))
}

/// `"2 3 5"` or `"2..6"` (inclusive); every size `1..=n` by default.
fn sizes(text: Option<&str>, n: usize) -> Result<Vec<usize>> {
    let Some(text) = text else {
        return Ok((1..=n).collect());
    };
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| usage(format!("`{t}` is not a size")));
    let out: Vec<usize> = match text.split_once("..") {
        Some((a, b)) => (parse(a)?..=parse(b)?).collect(),
        None => text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(parse)
            .collect::<Result<_>>()?,
    };
    if out.is_empty() || out.contains(&0) || out.iter().any(|&t| t > n) {
        return Err(usage(format!("sizes must lie in 1..={n}")));
    }
    Ok(out)
}

fn size_range(sizes: &[usize]) -> RangeInclusive<usize> {
    *sizes.iter().min().expect("nonempty")..=*sizes.iter().max().expect("nonempty")
}

fn communities_text(params: &CommunityParams, set: &CommunitySet) -> String {
    write_communities(params, set.member_sets(), false)
}

fn tally_line<V>(tally: &VoteTally<V>, show: impl Fn(&V) -> String) -> String {
    let mut out = String::from("tally:");
    for (m, v) in tally.entries() {
        let _ = write!(out, " {m}:{}", show(v));
    }
    out
}

fn report_verdict(ok: bool, set: &MemberSet, params: &CommunityParams) -> u8 {
    println!("{} {{{set}}} at {params}", if ok { "community" } else { "not a community" });
    if ok {
        0
    } else {
        1
    }
}

fn thresholds(params: &CommunityParams, t: usize) {
    println!(
        "size {t}, prefix {}, inside >= {}, outside <= {}",
        params.prefix_len(t),
        format_rational(&(params.alpha() * Rational::from_integer(t.into()))),
        format_rational(&(params.beta() * Rational::from_integer(t.into())))
    );
}

pub fn generate(kind: GenerateKind, seed: u64) -> Result<u8> {
    let (instance, planted, files) = match kind {
        GenerateKind::Blob {
            blobs,
            blob_size,
            max_union,
            files,
        } => {
            let g = blob_instance(blobs, blob_size, max_union, seed)?;
            let first = g.planted[0].params().clone();
            let singles: Vec<&MemberSet> = g.planted.iter().filter(|c| *c.params() == first).map(|c| c.members()).collect();
            (write_ranked(&g.system), write_communities(&first, singles, true), files)
        }
        GenerateKind::OverlapPair { n, files } => {
            let g = overlap_pair(n)?;
            (write_ranked(&g.system), write_communities(&g.params, [&g.first, &g.second], true), files)
        }
        GenerateKind::PlantedRanked { n, groups, files } => {
            let g = planted_ranked(n, &groups, seed)?;
            let params = CommunityParams::parse("1", "1", "0")?;
            (write_ranked(&g.system), write_communities(&params, g.planted.iter().map(|c| c.members()), true), files)
        }
        GenerateKind::PlantedWeighted { n, size, files } => {
            let g = planted_weighted(n, size, seed)?;
            (write_weighted(&g.system), write_communities(&g.params, [&g.community], true), files)
        }
        GenerateKind::FacetedBlob { n, size, files } => {
            let (system, set) = faceted_blob(n, size, seed)?;
            let params = CommunityParams::parse("1", "1", "0")?;
            let mut planted = write_communities(&params, [&set], true);
            planted.insert_str(0, "# facets 1 for every member\n");
            (write_faceted(&system), planted, files)
        }
        GenerateKind::Gnp { n, p, selfloops, files } => (write_graph(&gnp(n, p, selfloops, seed)?), String::new(), files),
        GenerateKind::GnpClique {
            n,
            k,
            p,
            gamma,
            epsilon,
            selfloops,
            files,
        } => {
            let (dk, dp) = hardness_clique_params(n, gamma, epsilon)?;
            let (graph, clique) = gnp_planted_clique(n, p.unwrap_or(dp), k.unwrap_or(dk), selfloops, seed)?;
            let params = CommunityParams::new(Rational::from_integer(1.into()), Rational::from_integer(1.into()), from_f64(1.0 - gamma)?)?;
            (write_graph(&graph), write_communities(&params, [&clique], true), files)
        }
    };
    emit(files.out.as_deref(), &instance, "")?;
    if let Some(path) = files.planted.as_deref() {
        if planted.is_empty() {
            return Err(usage("this generator plants no communities"));
        }
        emit(Some(path), &planted, "")?;
    }
    Ok(0)
}

pub fn lift_cmd(args: Lift) -> Result<u8> {
    let graph = load(&args.graph, parse_graph)?;
    let method = match args.method {
        LiftKind::Direct => LiftMethod::Direct,
        LiftKind::ShortestPath => LiftMethod::ShortestPath,
        LiftKind::Ppr => LiftMethod::Ppr,
        LiftKind::Resistance => LiftMethod::Resistance,
    };
    let mut config = LiftConfig::new(method);
    config.teleport = args.teleport;
    config.ppr_tolerance = args.tolerance;
    config.resistance_tolerance = args.tolerance;
    let system = lift(&graph, &config)?;
    emit(args.output.out.as_deref(), &write_weighted(&system), &format!("lifted {} members", system.len()))?;
    Ok(0)
}

pub fn verify(args: Verify) -> Result<u8> {
    let params = params(&args.params)?;
    let set = member_set(&args.set)?;
    let t = set.len();
    let input = &args.input;
    if let Some(path) = &input.ranked {
        let system = load(path, parse_ranked)?;
        let v = system.verify(&set, &params)?;
        thresholds(&params, t);
        println!("{}", tally_line(&v.tally, |c| c.to_string()));
        return Ok(report_verdict(v.is_community, &set, &params));
    }
    if let Some(path) = &input.weighted {
        let system = load(path, parse_weighted)?;
        let v = system.verify(&set, &params)?;
        thresholds(&params, t);
        println!("{}", tally_line(&v.tally, format_rational));
        return Ok(report_verdict(v.is_community, &set, &params));
    }
    if let Some(path) = &input.faceted {
        let system = load(path, parse_faceted)?;
        let order = ids(&args.set)?;
        let facets = ids(args.facets.as_deref().ok_or_else(|| usage("faceted input needs --facets"))?)?;
        if facets.len() != order.len() || facets.contains(&0) {
            return Err(usage("--facets needs one 1-based facet per member of --set"));
        }
        let mut pairs: Vec<(MemberId, usize)> = order.into_iter().zip(facets.into_iter().map(|f| f as usize - 1)).collect();
        pairs.sort();
        pairs.dedup_by_key(|p| p.0);
        let psi = FacetAssignment::new(set.clone(), pairs.into_iter().map(|p| p.1).collect())?;
        let tally = faceted_vote_tally(&system, &psi, params.theta())?;
        thresholds(&params, t);
        println!("{}", tally_line(&tally, |c| c.to_string()));
        return Ok(report_verdict(verify_multifaceted(&system, &psi, &params)?, &set, &params));
    }
    let path = input.graph.as_ref().expect("clap requires one input");
    let graph = load(path, parse_graph)?;
    if args.cluster {
        let ok = verify_alpha_beta_cluster(&graph, &set, params.alpha(), params.beta())?;
        println!(
            "{} {{{set}}} at alpha={} beta={}",
            if ok { "cluster" } else { "not a cluster" },
            format_rational(params.alpha()),
            format_rational(params.beta())
        );
        return Ok(if ok { 0 } else { 1 });
    }
    let ok = verify_graph_community(&graph, &set, &params)?;
    thresholds(&params, t);
    println!("{}", tally_line(&direct_lift(&graph)?.verify(&set, &params)?.tally, format_rational));
    Ok(report_verdict(ok, &set, &params))
}

fn exhaustive_config(args: &Enumerate, params: &CommunityParams, t: usize, seed: u64) -> EnumConfig {
    let mut config = EnumConfig::new(params.clone(), t).with_seed(seed);
    config.delta = args.delta;
    config.k1 = args.k1;
    config.k2 = args.k2;
    config.n2 = args.n2;
    if let Some(b) = args.budget {
        config.candidate_budget = b;
    }
    config
}

fn enumerate_ranked(args: &Enumerate, system: &RankedSystem, params: &CommunityParams, sizes: &[usize], seed: u64) -> Result<CommunitySet> {
    let mut out = CommunitySet::new();
    match args.strategy {
        EnumStrategy::Exhaustive | EnumStrategy::TwoHop => {
            for &t in sizes {
                let config = exhaustive_config(args, params, t, seed);
                out.merge(if args.strategy == EnumStrategy::TwoHop {
                    enumerate_two_hop(system, &config)?
                } else {
                    enumerate_main(system, &config)?
                });
            }
        }
        EnumStrategy::Quasipoly => out.merge(quasipoly(args, system, params, sizes)?),
        EnumStrategy::Reduction => return Err(usage("the reduction strategy needs a weighted system")),
    }
    Ok(out)
}

fn quasipoly<A: AffinitySystem>(args: &Enumerate, system: &A, params: &CommunityParams, sizes: &[usize]) -> Result<CommunitySet> {
    let mut config = QuasiPolyConfig::new(params.clone(), sizes.to_vec());
    config.k = args.k;
    if let Some(b) = args.budget {
        config.budget = b;
    }
    Ok(enumerate_quasipoly(system, &config)?)
}

fn enumerate_weighted(args: &Enumerate, system: &WeightedSystem, params: &CommunityParams, sizes: &[usize], seed: u64) -> Result<CommunitySet> {
    match args.strategy {
        EnumStrategy::Quasipoly => quasipoly(args, system, params, sizes),
        EnumStrategy::Reduction => {
            let eps = match &args.epsilon {
                Some(e) => rational(e)?,
                None => default_epsilon(params),
            };
            let reduced = reduced_params(params, &eps)?;
            let mut out = CommunitySet::new();
            for &t in sizes {
                let (ranked, map) = reduce(system, params, t, &eps)?;
                let found = enumerate_main(&ranked, &exhaustive_config(args, &reduced, t * map.k(), seed))?;
                out.merge(map_back(found.member_sets(), &map, system, params)?);
            }
            Ok(out)
        }
        _ => Err(usage("weighted systems support the quasipoly and reduction strategies")),
    }
}

pub fn enumerate(args: Enumerate, seed: u64) -> Result<u8> {
    let params = params(&args.params)?;
    if args.runs == 0 {
        return Err(usage("--runs must be at least 1"));
    }
    let mut out = CommunitySet::new();
    if let Some(path) = &args.input.ranked {
        let system = load(path, parse_ranked)?;
        let sizes = sizes(args.sizes.as_deref(), system.len())?;
        for run in 0..args.runs {
            out.merge(enumerate_ranked(&args, &system, &params, &sizes, derive_seed(seed, &[run]))?);
        }
    } else {
        let path = args.input.weighted.as_ref().expect("clap requires one input");
        let system = load(path, parse_weighted)?;
        let sizes = sizes(args.sizes.as_deref(), system.len())?;
        for run in 0..args.runs {
            out.merge(enumerate_weighted(&args, &system, &params, &sizes, derive_seed(seed, &[run]))?);
        }
    }
    emit(args.output.out.as_deref(), &communities_text(&params, &out), &format!("{} communities", out.len()))?;
    Ok(0)
}

pub fn local(args: Local, seed: u64) -> Result<u8> {
    let params = params(&args.params)?;
    let system = load(&args.ranked, parse_ranked)?;
    if args.all {
        let config = LocalEnumConfig {
            epsilon: args.epsilon.as_deref().map(rational).transpose()?,
            delta: args.delta,
            seeds: match args.seeds {
                SeedKind::All => SeedSampling::All,
                SeedKind::Adaptive => SeedSampling::Adaptive { boost: args.boost },
            },
            repetitions: args.repetitions,
            max_size: args.max_size,
            rng_seed: seed,
        };
        let found = enumerate_all_local(&system, &params, &config)?;
        emit(args.output.out.as_deref(), &communities_text(&params, &found), &format!("{} communities", found.len()))?;
        return Ok(0);
    }
    let (v, t) = (args.seed_member.expect("clap"), args.size.expect("clap"));
    let mut config = LocalConfig::new(params.clone(), t);
    config.delta = args.delta;
    config.draws = args.draws;
    config.hit_threshold = args.hit_threshold;
    config.k2 = args.k2;
    config.n2 = args.n2;
    config.size_slack = args.slack.as_deref().map(rational).transpose()?;
    config.rng_seed = seed;
    let found = local_find(&system, v, &config, &mut stream(seed, &[v as u64, t as u64]))?;
    let mut set = CommunitySet::new();
    if let Some(c) = found {
        set.insert(c, affinity::Strategy::Local);
    }
    let summary = if set.is_empty() { "no community found" } else { "1 community" };
    emit(args.output.out.as_deref(), &communities_text(&params, &set), summary)?;
    Ok(0)
}

pub fn reduce_cmd(args: Reduce) -> Result<u8> {
    let params = params(&args.params)?;
    let system = load(&args.weighted, parse_weighted)?;
    let eps = match &args.epsilon {
        Some(e) => rational(e)?,
        None => default_epsilon(&params),
    };
    let (ranked, map) = reduce(&system, &params, args.size, &eps)?;
    match &args.map_back {
        None => {
            let summary = format!(
                "{} members -> {} nodes (blob size {}); look for size {} at {}",
                system.len(),
                map.nodes(),
                map.k(),
                args.size * map.k(),
                reduced_params(&params, &eps)?
            );
            emit(args.output.out.as_deref(), &write_reduced(&ranked, &map), &summary)?;
        }
        Some(path) => {
            let found = load(path, parse_communities)?;
            if let Some(bad) = found.communities.iter().flat_map(|s| s.iter()).find(|&m| m as usize >= map.nodes()) {
                return Err(usage(format!("node {bad} is outside the reduced instance")));
            }
            let back = map_back(found.communities.iter(), &map, &system, &params)?;
            emit(args.output.out.as_deref(), &communities_text(&params, &back), &format!("{} communities", back.len()))?;
        }
    }
    Ok(0)
}

pub fn facets(args: Facets, seed: u64) -> Result<u8> {
    let params = params(&args.params)?;
    let system = load(&args.faceted, parse_faceted)?;
    let recover = RecoverConfig {
        max_retries: args.max_retries,
        method: args.method.map(|m| match m {
            RecoverKind::Exhaustive => RecoverMethod::Exhaustive,
            RecoverKind::Lp => RecoverMethod::Lp,
        }),
        ..RecoverConfig::default()
    };
    let facet_line = |psi: &FacetAssignment| {
        let list: Vec<String> = psi.iter().map(|(m, f)| format!("{m}/{}", f + 1)).collect();
        list.join(" ")
    };
    if let Some(text) = &args.set {
        let set = member_set(text)?;
        let psi = recover_facets(&system, &set, &params, &recover, &mut stream(seed, &[]))?;
        let ok = verify_multifaceted(&system, &psi, &params)?;
        println!("facets: {}", facet_line(&psi));
        println!(
            "{} at {params}",
            if ok { "verifies" } else { "verifies only at the rounding-relaxed parameters" }
        );
        return Ok(0);
    }
    let t = args.size.expect("clap");
    let mut config = MultifacetConfig::new(params.clone(), t);
    config.base.k1 = args.k1;
    config.base.k2 = args.k2;
    config.base.n2 = args.n2;
    config.base.rng_seed = seed;
    config.recover = recover;
    let found = enumerate_multifaceted(&system, &config)?;
    let mut text = String::new();
    for c in &found {
        let _ = writeln!(text, "# facets {}", facet_line(&c.assignment));
    }
    text.push_str(&write_communities(&params, found.iter().map(|c| &c.members), false));
    emit(args.output.out.as_deref(), &text, &format!("{} faceted communities", found.len()))?;
    Ok(0)
}

pub fn oracle(args: Oracle) -> Result<u8> {
    let params = params(&args.params)?;
    let found = if let Some(path) = &args.input.ranked {
        let system = load(path, parse_ranked)?;
        let sizes = sizes(args.sizes.as_deref(), system.len())?;
        filter_sizes(brute_force_oracle_with_limit(&system, &params, size_range(&sizes), args.limit)?, &sizes)
    } else {
        let system = load(args.input.weighted.as_ref().expect("clap"), parse_weighted)?;
        let sizes = sizes(args.sizes.as_deref(), system.len())?;
        filter_sizes(brute_force_oracle_with_limit(&system, &params, size_range(&sizes), args.limit)?, &sizes)
    };
    emit(args.output.out.as_deref(), &communities_text(&params, &found), &format!("{} communities", found.len()))?;
    Ok(0)
}

fn filter_sizes(set: CommunitySet, sizes: &[usize]) -> CommunitySet {
    let mut out = CommunitySet::new();
    for c in set.communities().filter(|c| sizes.contains(&c.len())) {
        out.insert(c, affinity::Strategy::Oracle);
    }
    out
}

pub fn report(args: Report, seed: u64) -> Result<u8> {
    match args {
        Report::Counting {
            n,
            l,
            delta,
            epsilon,
            trials,
            budget,
            output,
        } => {
            let csv = counting_report(n, l, delta, epsilon, trials, seed, budget)?;
            emit(output.out.as_deref(), &csv, "")?;
        }
        Report::Clique {
            n,
            gamma,
            epsilon,
            seeds,
            output,
        } => {
            let (k, p) = hardness_clique_params(n, gamma, epsilon)?;
            let beta = from_f64(1.0 - gamma)?;
            let one = Rational::from_integer(1.into());
            let mut csv = String::from("seed,n,k,p,beta,is_cluster,max_outsider_degree\n");
            for s in 0..seeds {
                let (graph, clique) = gnp_planted_clique(n, p, k, true, derive_seed(seed, &[s]))?;
                let ok = verify_alpha_beta_cluster(&graph, &clique, &one, &beta)?;
                let worst = (0..n as MemberId)
                    .filter(|&i| !clique.contains(i))
                    .map(|i| graph.neighbors(i).iter().filter(|(j, _)| clique.contains(*j)).count())
                    .max()
                    .unwrap_or(0);
                let _ = writeln!(csv, "{s},{n},{k},{p},{},{ok},{worst}", format_rational(&beta));
            }
            emit(output.out.as_deref(), &csv, "")?;
        }
    }
    Ok(0)
}
