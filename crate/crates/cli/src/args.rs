use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "cauchon", version, about = "Cauchon diagrams, restricted permutations and their minor families")]
pub struct Cli {
    /// Number of rows.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Number of columns.
    #[arg(long, global = true)]
    pub p: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Identity-testing trials for vanishing sets.
    #[arg(long, global = true, default_value_t = cauchon::oracle::DEFAULT_TRIALS)]
    pub trials: usize,
    /// `prime` or `rational`.
    #[arg(long, global = true, default_value = "prime")]
    pub field: String,
    /// Directory for cached results; caching is off when unset.
    #[arg(long, global = true, env = "CAUCHON_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Diagrams,
    Permutations,
    Minors,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    /// Counts, Bruhat interval and bijection.
    Quick,
    /// Everything in `quick` plus the family equivalence and the sweeps.
    Full,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
pub enum Command {
    /// List diagrams, restricted permutations or minors of a shape.
    Enumerate {
        #[arg(value_enum)]
        kind: Kind,
    },
    /// Map a diagram to its permutation, or a permutation to its diagram.
    Map {
        #[arg(long, conflicts_with = "permutation", required_unless_present = "permutation")]
        diagram: Option<String>,
        #[arg(long)]
        permutation: Option<String>,
    },
    /// Minor family attached to a restricted permutation.
    Family {
        #[arg(long)]
        permutation: String,
    },
    /// Minors vanishing on the restoration of a diagram.
    Vanish {
        #[arg(long)]
        diagram: String,
    },
    /// Totally nonnegative witness matrix for a diagram.
    Witness {
        #[arg(long)]
        diagram: String,
        /// Independent positive samples to compare.
        #[arg(long, default_value_t = cauchon::harness::DEFAULT_WITNESS_SAMPLES)]
        samples: usize,
    },
    /// Run the verification suite for a shape.
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
        /// Positive samples per diagram for witness zero sets.
        #[arg(long, default_value_t = cauchon::harness::DEFAULT_WITNESS_SAMPLES)]
        samples: usize,
        /// Check this many random diagrams instead of all of them.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Sweep the local stage relations of the restoration algorithm.
    IdentityCheck {
        /// Random assignments per diagram.
        #[arg(long, default_value_t = 3)]
        assignments: usize,
        #[arg(long)]
        sample: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Enumerate { .. } => "enumerate",
            Command::Map { .. } => "map",
            Command::Family { .. } => "family",
            Command::Vanish { .. } => "vanish",
            Command::Witness { .. } => "witness",
            Command::Verify { .. } => "verify",
            Command::IdentityCheck { .. } => "identity-check",
        }
    }
}
