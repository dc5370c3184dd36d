use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "affinity", version, about = "Self-determined communities in ranked, weighted and faceted affinity systems")]
pub struct Cli {
    /// Worker threads; defaults to one per core. Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub rng_seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a generated instance and its planted communities.
    Generate(Generate),
    /// Turn a social graph into a weighted affinity system.
    Lift(Lift),
    /// Check one candidate set and print the vote tally.
    Verify(Verify),
    /// Enumerate communities of a ranked or weighted system.
    Enumerate(Enumerate),
    /// Local search from a seed member, or the all-seeds enumeration.
    Local(Local),
    /// Reduce a weighted system to a ranked one, or map communities back.
    Reduce(Reduce),
    /// Recover facet choices for a set, or enumerate faceted communities.
    Facets(Facets),
    /// Exhaustive search over all subsets of a small system.
    Oracle(Oracle),
    /// CSV experiment reports.
    #[command(subcommand)]
    Report(Report),
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long, default_value = "1")]
    pub theta: String,
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub beta: String,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Generate {
    #[command(subcommand)]
    pub kind: GenerateKind,
}

#[derive(Args, Debug)]
pub struct GenerateFiles {
    /// Instance file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the planted communities.
    #[arg(long)]
    pub planted: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GenerateKind {
    /// Blocks of consecutive ids that rank their own block first.
    Blob {
        #[arg(long)]
        blobs: usize,
        #[arg(long)]
        blob_size: usize,
        #[arg(long, default_value_t = 1)]
        max_union: usize,
        #[command(flatten)]
        files: GenerateFiles,
    },
    /// Two overlapping halves, both (1, 3/4, 1/4) communities.
    OverlapPair {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        files: GenerateFiles,
    },
    /// Disjoint (1, 1, 0) groups on random ids.
    PlantedRanked {
        #[arg(long)]
        n: usize,
        /// Group sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        groups: Vec<usize>,
        #[command(flatten)]
        files: GenerateFiles,
    },
    /// A weighted system with one planted community.
    PlantedWeighted {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        files: GenerateFiles,
    },
    /// Two facets per member with a community on facet 1.
    FacetedBlob {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        files: GenerateFiles,
    },
    /// An Erdős–Rényi graph.
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        selfloops: bool,
        #[command(flatten)]
        files: GenerateFiles,
    },
    /// G(n, p) with a planted clique. Without --k and --p they follow from
    /// --gamma and --epsilon.
    GnpClique {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0.3)]
        gamma: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long)]
        selfloops: bool,
        #[command(flatten)]
        files: GenerateFiles,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum LiftKind {
    Direct,
    ShortestPath,
    Ppr,
    Resistance,
}

#[derive(Args, Debug)]
pub struct Lift {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub method: LiftKind,
    /// PageRank restart probability.
    #[arg(long, default_value_t = 0.15)]
    pub teleport: f64,
    /// Solver tolerance and output grid for ppr and resistance.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
#[group(id = "input", required = true, multiple = false)]
pub struct AnyInput {
    #[arg(long, group = "input")]
    pub ranked: Option<PathBuf>,
    #[arg(long, group = "input")]
    pub weighted: Option<PathBuf>,
    #[arg(long, group = "input")]
    pub faceted: Option<PathBuf>,
    #[arg(long, group = "input")]
    pub graph: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Verify {
    #[command(flatten)]
    pub input: AnyInput,
    /// Member ids, space or comma separated.
    #[arg(long)]
    pub set: String,
    /// Facet per member of --set, 1-based, same order (faceted input).
    #[arg(long)]
    pub facets: Option<String>,
    /// Graph input: test the (alpha, beta)-cluster property instead.
    #[arg(long)]
    pub cluster: bool,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Args, Debug)]
#[group(id = "system", required = true, multiple = false)]
pub struct SystemInput {
    #[arg(long, group = "system")]
    pub ranked: Option<PathBuf>,
    #[arg(long, group = "system")]
    pub weighted: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum EnumStrategy {
    /// Prefix unions of k1-subsets (ranked).
    Exhaustive,
    /// Two-hop probability seeds (ranked).
    TwoHop,
    /// All multisets of size k (ranked or weighted).
    Quasipoly,
    /// Blob reduction, then exhaustive (weighted).
    Reduction,
}

#[derive(Args, Debug)]
pub struct Enumerate {
    #[command(flatten)]
    pub input: SystemInput,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Sizes as a list ("2 3 5") or inclusive range ("2..6"); all sizes by default.
    #[arg(long)]
    pub sizes: Option<String>,
    #[arg(long, value_enum, default_value_t = EnumStrategy::Exhaustive)]
    pub strategy: EnumStrategy,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long)]
    pub k1: Option<usize>,
    #[arg(long)]
    pub k2: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    /// Multiset size for the quasipoly strategy.
    #[arg(long)]
    pub k: Option<usize>,
    /// Reduction blob parameter; defaults to gamma/2.
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Independent runs whose outputs are merged.
    #[arg(long, default_value_t = 1)]
    pub runs: u64,
    /// Work budget for candidate lists.
    #[arg(long)]
    pub budget: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SeedKind {
    All,
    Adaptive,
}

#[derive(Args, Debug)]
pub struct Local {
    #[arg(long)]
    pub ranked: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Run the all-seeds enumeration instead of one search.
    #[arg(long, conflicts_with_all = ["seed_member", "size"])]
    pub all: bool,
    #[arg(long, required_unless_present = "all")]
    pub seed_member: Option<u32>,
    #[arg(long, required_unless_present = "all")]
    pub size: Option<usize>,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    #[arg(long)]
    pub draws: Option<usize>,
    #[arg(long)]
    pub hit_threshold: Option<usize>,
    #[arg(long)]
    pub k2: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    /// Also try sizes t/(1+slack) and t(1+slack).
    #[arg(long)]
    pub slack: Option<String>,
    /// Size-grid ratio for --all; defaults to min(gamma, alpha - 1/2)/100.
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long, value_enum, default_value_t = SeedKind::All)]
    pub seeds: SeedKind,
    #[arg(long, default_value_t = 1.0)]
    pub boost: f64,
    #[arg(long, default_value_t = 1)]
    pub repetitions: usize,
    #[arg(long)]
    pub max_size: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct Reduce {
    #[arg(long)]
    pub weighted: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Target community size t.
    #[arg(long)]
    pub size: usize,
    /// Blob parameter; blobs have ceil(1/epsilon) nodes. Defaults to gamma/2.
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Communities found on the reduced instance to map back.
    #[arg(long)]
    pub map_back: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum RecoverKind {
    Exhaustive,
    Lp,
}

#[derive(Args, Debug)]
pub struct Facets {
    #[arg(long)]
    pub faceted: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Recover facets for this set.
    #[arg(long, conflicts_with = "size", required_unless_present = "size")]
    pub set: Option<String>,
    /// Enumerate faceted communities of this size.
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long, value_enum)]
    pub method: Option<RecoverKind>,
    #[arg(long, default_value_t = 64)]
    pub max_retries: usize,
    #[arg(long)]
    pub k1: Option<usize>,
    #[arg(long)]
    pub k2: Option<usize>,
    #[arg(long)]
    pub n2: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct Oracle {
    #[command(flatten)]
    pub input: SystemInput,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub sizes: Option<String>,
    /// Largest system size searched.
    #[arg(long, default_value_t = 14)]
    pub limit: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Subcommand, Debug)]
pub enum Report {
    /// Monte-Carlo count of (1, 1/2 + epsilon)-clusters in G(n, 2^-l).
    Counting {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        l: u32,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 5_000_000)]
        budget: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Whether planted cliques are (1, 1 - gamma)-clusters, per seed.
    Clique {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        gamma: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}
