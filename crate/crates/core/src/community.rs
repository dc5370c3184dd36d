use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::members::MemberSet;
use crate::params::CommunityParams;
use crate::system::AffinitySystem;

/// Which procedure produced a community.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    Exhaustive,
    TwoHop,
    QuasiPoly,
    Local,
    Oracle,
    Reduction,
    Multifacet,
    Planted,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::TwoHop => "two-hop",
            Strategy::QuasiPoly => "quasipoly",
            Strategy::Local => "local",
            Strategy::Oracle => "oracle",
            Strategy::Reduction => "reduction",
            Strategy::Multifacet => "multifacet",
            Strategy::Planted => "planted",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A member set tagged with the parameters it is claimed to satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Community {
    members: MemberSet,
    params: CommunityParams,
    verified: bool,
}

impl Community {
    /// Runs the verifier and records its verdict.
    pub fn check<A: AffinitySystem + ?Sized>(system: &A, members: MemberSet, params: CommunityParams) -> Result<Self> {
        let verified = system.is_community(&members, &params)?;
        Ok(Community { members, params, verified })
    }

    /// A claim that has not been checked, e.g. a planted set.
    pub fn unverified(members: MemberSet, params: CommunityParams) -> Self {
        Community {
            members,
            params,
            verified: false,
        }
    }

    pub(crate) fn trusted(members: MemberSet, params: CommunityParams) -> Self {
        Community {
            members,
            params,
            verified: true,
        }
    }

    pub fn members(&self) -> &MemberSet {
        &self.members
    }

    pub fn params(&self) -> &CommunityParams {
        &self.params
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Entry {
    params: CommunityParams,
    strategy: Strategy,
}

/// Verified communities keyed by member set, in lexicographic order.
///
/// The first insertion of a member set wins; later duplicates are ignored
/// even when they carry different parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommunitySet {
    entries: BTreeMap<MemberSet, Entry>,
}

impl CommunitySet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a verified community. Returns `false` for duplicates and for
    /// communities whose verification failed or never ran.
    pub fn insert(&mut self, community: Community, strategy: Strategy) -> bool {
        if !community.verified || community.members.is_empty() || self.entries.contains_key(&community.members) {
            return false;
        }
        self.entries.insert(
            community.members,
            Entry {
                params: community.params,
                strategy,
            },
        );
        true
    }

    /// Adds every entry of `other` not already present.
    pub fn merge(&mut self, other: CommunitySet) {
        for (members, entry) in other.entries {
            self.entries.entry(members).or_insert(entry);
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, members: &MemberSet) -> bool {
        self.entries.contains_key(members)
    }

    pub fn strategy(&self, members: &MemberSet) -> Option<Strategy> {
        self.entries.get(members).map(|e| e.strategy)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MemberSet, &CommunityParams, Strategy)> {
        self.entries.iter().map(|(m, e)| (m, &e.params, e.strategy))
    }

    pub fn member_sets(&self) -> impl Iterator<Item = &MemberSet> {
        self.entries.keys()
    }

    pub fn communities(&self) -> impl Iterator<Item = Community> + '_ {
        self.entries
            .iter()
            .map(|(m, e)| Community::trusted(m.clone(), e.params.clone()))
    }
}
