//! Small hand-built instances used throughout the docs and tests.

use crate::generators::overlap_pair;
use crate::members::MemberSet;
use crate::multifacet::FacetedSystem;
use crate::rational::parse_rational;
use crate::system::{RankedSystem, WeightedSystem};

/// Four members in two mutually-preferring pairs: `{0, 1}` and `{2, 3}`.
pub fn inst_a() -> RankedSystem {
    RankedSystem::new(vec![vec![0, 1, 2, 3], vec![1, 0, 2, 3], vec![2, 3, 0, 1], vec![3, 2, 0, 1]])
        .expect("valid rankings")
}

/// Sixteen members forming two overlapping communities `A1 = {0..7}` and
/// `A2 = {6..13}`, both `(1, 3/4, 1/4)` communities.
pub fn inst_b() -> (RankedSystem, MemberSet, MemberSet) {
    let pair = overlap_pair(16).expect("16 is divisible by 16");
    (pair.system, pair.first, pair.second)
}

/// Three members; `0` and `1` like each other fully and `2` a little.
pub fn inst_w() -> WeightedSystem {
    let w = |s: &str| parse_rational(s).expect("literal");
    WeightedSystem::new(
        3,
        [
            (0, 1, w("1")),
            (0, 2, w("0.2")),
            (1, 0, w("1")),
            (1, 2, w("0.2")),
            (2, 0, w("0.5")),
            (2, 1, w("0.5")),
        ],
    )
    .expect("valid weights")
}

/// [`inst_a`] as facet 0 plus every list reversed as facet 1.
pub fn f_inst() -> FacetedSystem {
    let a = inst_a();
    let facets = (0..4)
        .map(|m| {
            let forward = a.ranking(m).to_vec();
            let backward = forward.iter().rev().copied().collect();
            vec![forward, backward]
        })
        .collect();
    FacetedSystem::new(facets).expect("valid facets")
}
