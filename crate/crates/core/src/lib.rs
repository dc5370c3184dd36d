//! Self-determined communities in affinity systems.
//!
//! A set `S` of members is a `(θ, α, β)` community when, with every member
//! of `S` voting for the first `⌈θ|S|⌉` entries of its ranking, each
//! insider collects at least `α|S|` votes and each outsider at most
//! `β|S|`. The crate verifies such sets, enumerates them globally or from a
//! seed member, extends the notion to weighted and multi-faceted systems,
//! and lifts social graphs into affinity systems.
//!
//! ```
//! use affinity::{CommunityParams, MemberSet, RankedSystem};
//!
//! let system = RankedSystem::new(vec![
//!     vec![0, 1, 2, 3],
//!     vec![1, 0, 2, 3],
//!     vec![2, 3, 0, 1],
//!     vec![3, 2, 0, 1],
//! ])?;
//! let params = CommunityParams::parse("1", "1", "0.5")?;
//! assert!(system.verify(&MemberSet::from([0, 1]), &params)?.is_community);
//! assert!(!system.verify(&MemberSet::from([0, 2]), &params)?.is_community);
//! # Ok::<(), affinity::Error>(())
//! ```

pub mod community;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod generators;
pub mod lifting;
pub mod local;
pub mod members;
pub mod multifacet;
pub mod params;
pub mod rational;
pub mod reduction;
pub mod rng;
pub mod system;

pub use community::{Community, CommunitySet, Strategy};
pub use enumerate::{brute_force_oracle, enumerate_main, enumerate_quasipoly, enumerate_two_hop, EnumConfig, QuasiPolyConfig};
pub use error::{Error, Result};
pub use lifting::{lift, LiftConfig, LiftMethod, SocialGraph};
pub use local::{enumerate_all_local, local_find, LocalConfig, LocalEnumConfig, SeedSampling};
pub use members::{MemberId, MemberSet};
pub use multifacet::{
    enumerate_multifaceted, recover_facets, verify_multifaceted, FacetAssignment, FacetedSystem, MultifacetConfig, RecoverConfig,
};
pub use params::CommunityParams;
pub use rational::Rational;
pub use reduction::{map_back, reduce, BlobMap};
pub use system::{AffinitySystem, RankedSystem, VoteTally, WeightedSystem};

#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/communities.md")]
    pub mod communities {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    pub mod enumeration {}
    #[doc = include_str!("../../../book/src/local.md")]
    pub mod local {}
    #[doc = include_str!("../../../book/src/weighted.md")]
    pub mod weighted {}
    #[doc = include_str!("../../../book/src/multifacet.md")]
    pub mod multifacet {}
    #[doc = include_str!("../../../book/src/lifting.md")]
    pub mod lifting {}
    #[doc = include_str!("../../../book/src/generators.md")]
    pub mod generators {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
