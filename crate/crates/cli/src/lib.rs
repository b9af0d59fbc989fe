//! Front end for `slk-core`: argument parsing, the tree cache, and JSON, CSV
//! and text emitters.
//!
//! # Output grammar
//!
//! Trees print as nested parentheses over leaf labels, children sorted by
//! smallest leaf, e.g. `((1,2),3)`. Basis elements print as operation words
//! followed by a bracket word on generator names: `bQ^6 bQ^2 i`,
//! `Q^2 [i,i]`, `[x,[x,y]]`. `Q^s` is a power operation and `bQ^s` its
//! Bockstein; the leftmost operation is applied last.

pub mod cache;
mod commands;
pub mod format;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use slk_core::ErrorKind;

pub use commands::execute;
pub use format::{Document, Format, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_INTEGRITY: i32 = 4;

const AFTER_HELP: &str = "\
Exit status: 0 success, 2 usage error, 3 unsupported case, 4 integrity failure.

Environment:
  SLK_CACHE_DIR  default for --cache-dir

Cache files are named trees-n<n>.slk. Each starts with the line 'SLK1 n=<n>'
followed by one canonical tree string per line, ordered by internal vertex
count. A file with a bad header or incomplete contents is recomputed and
replaced; writes go through a temporary file and a rename.

JSON documents have the keys prime, object, policy, dims {degree: rank},
labels {degree: [label]}, certified and truncated, plus sections specific to
the subcommand. CSV prints one row per label, or the subcommand's table.";

#[derive(Debug, Parser)]
#[command(
    name = "slk",
    version,
    about = "Mod-p homology of tree complexes, free spectral Lie algebra layers, and their bases",
    after_help = AFTER_HELP
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Odd prime for all coefficients.
    #[arg(long, global = true, default_value_t = 3)]
    pub prime: u64,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Excess rule for the innermost operation: rational, am-literal or strict.
    #[arg(long, global = true, default_value = "rational")]
    pub policy: String,
    /// Lowest degree reported.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub min_degree: Option<i64>,
    /// Highest degree reported.
    #[arg(long, global = true, allow_hyphen_values = true, default_value_t = 40)]
    pub max_degree: i64,
    /// Directory holding tree enumeration files.
    #[arg(long, global = true, env = "SLK_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Ignore the cache directory entirely.
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// List trees on n leaves by internal vertex count, or their orbits under --group.
    Trees {
        /// Number of leaves.
        #[arg(long)]
        n: u32,
        /// Number of internal vertices; the tree has degree -k.
        #[arg(long)]
        k: Option<usize>,
        /// sigma<n>, sigma<n-1>-fixing-1 or trivial.
        #[arg(long)]
        group: Option<String>,
    },
    /// Orbit census of a group on trees: representatives, stabilizer orders, orbit sizes.
    Census {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: Option<usize>,
        /// Defaults to the full symmetric group.
        #[arg(long)]
        group: Option<String>,
    },
    /// The tree cell complex on n leaves: cells, sparse differentials, homology.
    Complex {
        #[arg(long)]
        n: u32,
        /// Incidence sign rule.
        #[arg(long, value_enum, default_value_t = Convention::EdgePreorder)]
        convention: Convention,
    },
    /// Homology of the n-th layer on a sphere by the orbit spectral sequence.
    Layer {
        #[arg(long)]
        n: u32,
        /// Dimension j of the sphere S^j.
        #[arg(long, allow_hyphen_values = true)]
        sphere: i64,
        /// Replace the symmetric group by a subgroup.
        #[arg(long)]
        group: Option<String>,
        /// Include the E1 columns, d1 scalars and E2 ranks.
        #[arg(long)]
        page: bool,
    },
    /// Labelled basis of the free algebra on --gens, or of the n-th layer on S^sphere.
    Basis {
        /// Generators as name:degree[,name:degree...].
        #[arg(long, allow_hyphen_values = true)]
        gens: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        sphere: Option<i64>,
        /// Weight cap for inputs whose degrees do not grow with weight.
        #[arg(long)]
        weight_cap: Option<usize>,
    },
    /// Ranks by degree of the free algebra on --gens.
    Poincare {
        #[arg(long, allow_hyphen_values = true)]
        gens: String,
        /// Also split the ranks by weight.
        #[arg(long)]
        by_weight: bool,
        #[arg(long)]
        weight_cap: Option<usize>,
    },
    /// Degreewise comparison of sphere layers along the EHP sequences.
    Ehp {
        /// Layer index m.
        #[arg(long)]
        n: usize,
        /// Source sphere for odd-iso; the even sphere S^2l for even-les.
        #[arg(long, allow_hyphen_values = true)]
        sphere: i64,
        #[arg(long, value_enum, default_value_t = EhpMode::OddIso)]
        mode: EhpMode,
        /// Reading of the even sequence: shift-2 or odd-source.
        #[arg(long, default_value = "shift-2")]
        form: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    EdgePreorder,
    EdgeClade,
    SplitVertex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EhpMode {
    /// D_m(S^n) against D_m(S^(n+1)) one degree up, for odd m.
    OddIso,
    /// D_m on an odd sphere against the bracket part of D_2m(S^2l).
    EvenLes,
}

/// A refusal, tagged with the module whose rule refused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub module: &'static str,
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(module: &'static str, message: impl Into<String>) -> Self {
        Failure { module, code: EXIT_USAGE, message: message.into() }
    }

    pub fn from_core(module: &'static str, e: slk_core::Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Usage => EXIT_USAGE,
            ErrorKind::Unsupported => EXIT_UNSUPPORTED,
            ErrorKind::Integrity => EXIT_INTEGRITY,
        };
        Failure { module, code, message: e.to_string() }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.module, self.message)
    }
}

/// Parses `args`, runs the command, and writes the document to stdout or
/// the refusal to stderr. Returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(doc) => {
            print!("{}", doc.render(cli.common.format));
            EXIT_OK
        }
        Err(f) => {
            eprintln!("slk: {f}");
            f.code
        }
    }
}
