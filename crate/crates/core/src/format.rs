//! Line-oriented text formats.
//!
//! Every format starts with a header line; blank lines and lines starting
//! with `#` are ignored. Errors carry 1-based line numbers.
//!
//! ```text
//! ranked <n>                    <i>: <j1> <j2> ...
//! weighted <n>                  <i> <j> <w>
//! faceted <n> <f>               <i>/<facet>: <j1> <j2> ...
//! graph <n> directed|undirected [selfloops]
//!                               <i> <j> [w]
//! communities theta=<v> alpha=<v> beta=<v>
//!                               <i1> <i2> ...
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::members::{MemberId, MemberSet};
use crate::multifacet::FacetedSystem;
use crate::params::CommunityParams;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::reduction::BlobMap;
use crate::lifting::SocialGraph;
use crate::system::{RankedSystem, WeightedSystem};

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Content lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, kind: &str) -> Result<(usize, Vec<&'a str>)> {
    let (no, line) = lines.next().ok_or_else(|| err(1, format!("missing `{kind}` header")))?;
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.first() != Some(&kind) {
        return Err(err(no, format!("expected `{kind}` header, found `{line}`")));
    }
    Ok((no, tokens[1..].to_vec()))
}

fn parse_count(token: Option<&&str>, line: usize, what: &str) -> Result<usize> {
    let token = token.ok_or_else(|| err(line, format!("missing {what}")))?;
    token
        .parse::<usize>()
        .map_err(|_| err(line, format!("{what} must be a nonnegative integer, got `{token}`")))
}

fn parse_member(token: &str, n: usize, line: usize) -> Result<MemberId> {
    let id: u64 = token
        .parse()
        .map_err(|_| err(line, format!("`{token}` is not a member id")))?;
    if id >= n as u64 {
        return Err(err(line, format!("member {id} out of range for n={n}")));
    }
    Ok(id as MemberId)
}

fn parse_list(text: &str, n: usize, line: usize) -> Result<Vec<MemberId>> {
    let list: Vec<MemberId> = text
        .split_whitespace()
        .map(|t| parse_member(t, n, line))
        .collect::<Result<_>>()?;
    let mut seen = HashSet::new();
    if let Some(dup) = list.iter().find(|&&m| !seen.insert(m)) {
        return Err(err(line, format!("member {dup} listed twice")));
    }
    Ok(list)
}

fn join(ids: &[MemberId]) -> String {
    ids.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ")
}

/// Members not mentioned get an empty ranking.
pub fn parse_ranked(text: &str) -> Result<RankedSystem> {
    let mut it = lines(text);
    let (no, args) = header(&mut it, "ranked")?;
    if args.len() != 1 {
        return Err(err(no, "header must be `ranked <n>`"));
    }
    let n = parse_count(args.first(), no, "member count")?;
    let mut rankings: Vec<Option<Vec<MemberId>>> = vec![None; n];
    for (no, line) in it {
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| err(no, "expected `<i>: <j1> <j2> ...`"))?;
        let i = parse_member(head.trim(), n, no)?;
        if rankings[i as usize].is_some() {
            return Err(err(no, format!("ranking of member {i} given twice")));
        }
        rankings[i as usize] = Some(parse_list(rest, n, no)?);
    }
    RankedSystem::new(rankings.into_iter().map(Option::unwrap_or_default).collect())
}

pub fn write_ranked(system: &RankedSystem) -> String {
    let mut out = format!("ranked {}\n", system.len());
    for m in 0..system.len() as MemberId {
        let ranking = system.ranking(m);
        if ranking.is_empty() {
            let _ = writeln!(out, "{m}:");
        } else {
            let _ = writeln!(out, "{m}: {}", join(ranking));
        }
    }
    out
}

/// Weights are decimals or `p/q` fractions in `[0, 1]`.
pub fn parse_weighted(text: &str) -> Result<WeightedSystem> {
    let mut it = lines(text);
    let (no, args) = header(&mut it, "weighted")?;
    if args.len() != 1 {
        return Err(err(no, "header must be `weighted <n>`"));
    }
    let n = parse_count(args.first(), no, "member count")?;
    let mut seen = HashSet::new();
    let mut triples = Vec::new();
    for (no, line) in it {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(err(no, "expected `<i> <j> <w>`"));
        }
        let i = parse_member(tokens[0], n, no)?;
        let j = parse_member(tokens[1], n, no)?;
        let w = parse_rational(tokens[2]).map_err(|e| err(no, e.to_string()))?;
        if w < Rational::from_integer(0.into()) || w > Rational::from_integer(1.into()) {
            return Err(err(no, format!("weight {} outside [0, 1]", tokens[2])));
        }
        if !seen.insert((i, j)) {
            return Err(err(no, format!("weight a[{i},{j}] given twice")));
        }
        triples.push((i, j, w));
    }
    WeightedSystem::new(n, triples)
}

/// Zero weights are omitted; non-terminating fractions are written `p/q`.
pub fn write_weighted(system: &WeightedSystem) -> String {
    let mut out = format!("weighted {}\n", system.len());
    for i in 0..system.len() as MemberId {
        for (j, w) in system.row(i) {
            let _ = writeln!(out, "{i} {j} {}", format_rational(w));
        }
    }
    out
}

/// Facets are numbered from 1 in the file. Each member's facets must be
/// `1..=k` for some `k ≤ f`; a member with no lines gets one empty facet.
pub fn parse_faceted(text: &str) -> Result<FacetedSystem> {
    let mut it = lines(text);
    let (no, args) = header(&mut it, "faceted")?;
    if args.len() != 2 {
        return Err(err(no, "header must be `faceted <n> <f>`"));
    }
    let n = parse_count(args.first(), no, "member count")?;
    let f = parse_count(args.get(1), no, "facet bound")?;
    if f == 0 {
        return Err(err(no, "facet bound must be at least 1"));
    }
    let mut facets: Vec<BTreeMap<usize, (usize, Vec<MemberId>)>> = vec![BTreeMap::new(); n];
    for (no, line) in it {
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| err(no, "expected `<i>/<facet>: <j1> <j2> ...`"))?;
        let (i, facet) = head
            .trim()
            .split_once('/')
            .ok_or_else(|| err(no, "expected `<i>/<facet>` before the colon"))?;
        let i = parse_member(i.trim(), n, no)?;
        let facet: usize = facet
            .trim()
            .parse()
            .map_err(|_| err(no, format!("`{facet}` is not a facet number")))?;
        if facet == 0 || facet > f {
            return Err(err(no, format!("facet {facet} outside 1..={f}")));
        }
        let list = parse_list(rest, n, no)?;
        if facets[i as usize].insert(facet, (no, list)).is_some() {
            return Err(err(no, format!("member {i} facet {facet} given twice")));
        }
    }
    let mut out = Vec::with_capacity(n);
    for (i, map) in facets.into_iter().enumerate() {
        if map.is_empty() {
            out.push(vec![Vec::new()]);
            continue;
        }
        let mut lists = Vec::with_capacity(map.len());
        for (expected, (facet, (no, list))) in map.into_iter().enumerate() {
            if facet != expected + 1 {
                return Err(err(no, format!("member {i} skips facet {}", expected + 1)));
            }
            lists.push(list);
        }
        out.push(lists);
    }
    FacetedSystem::new(out)
}

pub fn write_faceted(system: &FacetedSystem) -> String {
    let mut out = format!("faceted {} {}\n", system.len(), system.max_facets());
    for m in 0..system.len() as MemberId {
        for f in 0..system.facet_count(m) {
            let ranking = system.ranking(m, f);
            if ranking.is_empty() {
                let _ = writeln!(out, "{m}/{}:", f + 1);
            } else {
                let _ = writeln!(out, "{m}/{}: {}", f + 1, join(ranking));
            }
        }
    }
    out
}

/// Missing weights are 1. `selfloops` adds a unit loop at every node that
/// lacks one.
pub fn parse_graph(text: &str) -> Result<SocialGraph> {
    let mut it = lines(text);
    let (no, args) = header(&mut it, "graph")?;
    let n = parse_count(args.first(), no, "node count")?;
    let directed = match args.get(1) {
        Some(&"directed") => true,
        Some(&"undirected") => false,
        _ => return Err(err(no, "header must be `graph <n> directed|undirected [selfloops]`")),
    };
    let loops = match args.get(2) {
        None => false,
        Some(&"selfloops") if args.len() == 3 => true,
        _ => return Err(err(no, "header must be `graph <n> directed|undirected [selfloops]`")),
    };
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for (no, line) in it {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&tokens.len()) {
            return Err(err(no, "expected `<i> <j> [w]`"));
        }
        let i = parse_member(tokens[0], n, no)?;
        let j = parse_member(tokens[1], n, no)?;
        let w = match tokens.get(2) {
            Some(t) => parse_rational(t).map_err(|e| err(no, e.to_string()))?,
            None => Rational::from_integer(1.into()),
        };
        if w <= Rational::from_integer(0.into()) || w > Rational::from_integer(1.into()) {
            return Err(err(no, format!("edge weight {w} outside (0, 1]")));
        }
        let key = if directed { (i, j) } else { (i.min(j), i.max(j)) };
        if !seen.insert(key) {
            return Err(err(no, format!("edge ({i}, {j}) given twice")));
        }
        edges.push((i, j, w));
    }
    let graph = SocialGraph::new(n, directed, edges)?;
    Ok(if loops { graph.with_self_loops() } else { graph })
}

/// Unit weights are left implicit.
pub fn write_graph(graph: &SocialGraph) -> String {
    let kind = if graph.is_directed() { "directed" } else { "undirected" };
    let mut out = format!("graph {} {kind}\n", graph.len());
    for (i, j, w) in graph.edges() {
        if *w == Rational::from_integer(1.into()) {
            let _ = writeln!(out, "{i} {j}");
        } else {
            let _ = writeln!(out, "{i} {j} {}", format_rational(w));
        }
    }
    out
}

/// A parsed community file.
#[derive(Clone, Debug, PartialEq)]
pub struct CommunityFile {
    pub params: CommunityParams,
    /// Sorted and deduplicated.
    pub communities: Vec<MemberSet>,
}

pub fn parse_communities(text: &str) -> Result<CommunityFile> {
    let mut it = lines(text);
    let (no, args) = header(&mut it, "communities")?;
    let mut values: BTreeMap<&str, &str> = BTreeMap::new();
    for arg in &args {
        let (key, value) = arg
            .split_once('=')
            .ok_or_else(|| err(no, format!("expected key=value, found `{arg}`")))?;
        if !matches!(key, "theta" | "alpha" | "beta") {
            return Err(err(no, format!("unknown header key `{key}`")));
        }
        if values.insert(key, value).is_some() {
            return Err(err(no, format!("`{key}` given twice")));
        }
    }
    let get = |key: &str| values.get(key).copied().ok_or_else(|| err(no, format!("header lacks `{key}=`")));
    let params = CommunityParams::parse(get("theta")?, get("alpha")?, get("beta")?).map_err(|e| err(no, e.to_string()))?;
    let mut communities = Vec::new();
    for (no, line) in it {
        let ids: Vec<MemberId> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| err(no, format!("`{t}` is not a member id"))))
            .collect::<Result<_>>()?;
        communities.push(MemberSet::new(ids));
    }
    communities.sort();
    communities.dedup();
    Ok(CommunityFile { params, communities })
}

/// One community per line, ascending ids, lines in lexicographic order.
pub fn write_communities<'a>(
    params: &CommunityParams,
    communities: impl IntoIterator<Item = &'a MemberSet>,
    planted: bool,
) -> String {
    let mut sets: Vec<&MemberSet> = communities.into_iter().collect();
    sets.sort();
    sets.dedup();
    let mut out = String::new();
    if planted {
        out.push_str("# planted\n");
    }
    let _ = writeln!(
        out,
        "communities theta={} alpha={} beta={}",
        format_rational(params.theta()),
        format_rational(params.alpha()),
        format_rational(params.beta())
    );
    for set in sets {
        let _ = writeln!(out, "{}", join(set.as_slice()));
    }
    out
}

/// A ranked file preceded by a `# blobmap` comment block recording which
/// member owns each node.
pub fn write_reduced(system: &RankedSystem, map: &BlobMap) -> String {
    let mut out = format!("# blobmap n={} k={}\n", map.members(), map.k());
    for s in 0..map.members() as MemberId {
        let blob = map.blob(s);
        let _ = writeln!(out, "# blob {s}: {}-{}", blob.start, blob.end - 1);
    }
    out + &write_ranked(system)
}

/// Reads the `# blobmap n=<n> k=<k>` line of a reduced instance, if any.
pub fn parse_blobmap(text: &str) -> Result<Option<BlobMap>> {
    for (i, line) in text.lines().enumerate() {
        let Some(rest) = line.trim().strip_prefix("# blobmap") else {
            continue;
        };
        let mut n = None;
        let mut k = None;
        for arg in rest.split_whitespace() {
            let value = |v: &str| v.parse::<usize>().map_err(|_| err(i + 1, format!("bad blobmap value `{v}`")));
            match arg.split_once('=') {
                Some(("n", v)) => n = Some(value(v)?),
                Some(("k", v)) => k = Some(value(v)?),
                _ => return Err(err(i + 1, format!("unexpected blobmap field `{arg}`"))),
            }
        }
        let (Some(n), Some(k)) = (n, k) else {
            return Err(err(i + 1, "blobmap needs n= and k="));
        };
        return BlobMap::new(n, k).map(Some).map_err(|e| err(i + 1, e.to_string()));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{f_inst, inst_a, inst_w};
    use crate::system::AffinitySystem;

    #[test]
    fn ranked_round_trip() {
        let a = inst_a();
        let text = write_ranked(&a);
        assert!(text.starts_with("ranked 4\n0: 0 1 2 3\n"));
        assert_eq!(parse_ranked(&text).unwrap(), a);
        let partial = parse_ranked("# comment\nranked 3\n\n2: 1\n").unwrap();
        assert!(partial.ranking(0).is_empty());
        assert_eq!(partial.ranking(2), &[1]);
    }

    #[test]
    fn ranked_errors_have_line_numbers() {
        let cases = [
            ("rankd 4\n", 1),
            ("ranked x\n", 1),
            ("ranked 2\n0: 0 1\n0: 1\n", 3),
            ("ranked 2\n0: 0 2\n", 2),
            ("ranked 2\n\n1 0 1\n", 3),
            ("ranked 2\n1: 0 0\n", 2),
            ("", 1),
        ];
        for (text, line) in cases {
            match parse_ranked(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn weighted_round_trip() {
        let w = inst_w();
        let text = write_weighted(&w);
        assert!(text.contains("0 2 0.2\n"));
        assert_eq!(parse_weighted(&text).unwrap(), w);
        let third = parse_weighted("weighted 2\n0 1 1/3\n").unwrap();
        assert!(write_weighted(&third).contains("0 1 1/3"));
        assert!(matches!(parse_weighted("weighted 2\n0 1 1.5\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_weighted("weighted 2\n0 1 0.5\n0 1 0.5\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn faceted_round_trip() {
        let f = f_inst();
        let text = write_faceted(&f);
        assert!(text.starts_with("faceted 4 2\n0/1: 0 1 2 3\n0/2: 3 2 1 0\n"));
        assert_eq!(parse_faceted(&text).unwrap(), f);
        assert!(matches!(parse_faceted("faceted 2 2\n0/2: 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_faceted("faceted 2 1\n0/2: 1\n"), Err(Error::Parse { line: 2, .. })));
        assert_eq!(parse_faceted("faceted 2 1\n").unwrap().facet_count(1), 1);
    }

    #[test]
    fn graph_round_trip() {
        let g = parse_graph("graph 3 undirected selfloops\n0 1\n1 2 1/2\n").unwrap();
        assert!(g.all_self_loops());
        assert!(g.has_edge(1, 0));
        let again = parse_graph(&write_graph(&g)).unwrap();
        assert_eq!(again, g);
        assert!(matches!(parse_graph("graph 3 sideways\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("graph 3 undirected\n0 1\n1 0\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_graph("graph 3 directed\n0 1 0\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn community_round_trip() {
        let params = CommunityParams::parse("1", "1", "0.5").unwrap();
        let sets = [MemberSet::from([2, 3]), MemberSet::from([0, 1]), MemberSet::from([0, 1])];
        let text = write_communities(&params, &sets, true);
        assert_eq!(text, "# planted\ncommunities theta=1 alpha=1 beta=0.5\n0 1\n2 3\n");
        let file = parse_communities(&text).unwrap();
        assert_eq!(file.params, params);
        assert_eq!(file.communities, vec![MemberSet::from([0, 1]), MemberSet::from([2, 3])]);
        let a = inst_a();
        assert!(file.communities.iter().all(|s| a.is_community(s, &file.params).unwrap()));
        assert!(matches!(
            parse_communities("communities theta=1 alpha=0.5\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn reduced_instances_keep_their_blob_map() {
        let map = BlobMap::new(2, 3).unwrap();
        let system = RankedSystem::new(vec![vec![0, 1, 2]; 6]).unwrap();
        let text = write_reduced(&system, &map);
        assert!(text.contains("# blob 1: 3-5\n"));
        assert_eq!(parse_blobmap(&text).unwrap(), Some(map));
        assert_eq!(parse_ranked(&text).unwrap(), system);
        assert_eq!(parse_blobmap("ranked 1\n").unwrap(), None);
    }
}
