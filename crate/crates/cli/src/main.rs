mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use commands::{CliError, Outcome};

#[derive(Parser, Debug)]
#[command(name = "plgcat", version, about = "PL geometric category of 2-dimensional polyhedra")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Node budget for searches.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized helpers. The engines are deterministic and ignore it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file.
    #[arg(short = 'o', long = "output", global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structural invariants of a complex.
    Analyze { input: String },
    /// Integral homology.
    Homology { input: String },
    /// Collapse to a point, or to a stuck subcomplex.
    Collapse {
        input: String,
        /// Use strong collapses (dominated vertex removals).
        #[arg(long)]
        strong: bool,
    },
    /// Covers by collapsible subcomplexes.
    Cover {
        #[command(subcommand)]
        mode: CoverMode,
    },
    /// Checks whether no triangulation is a union of two collapsible subcomplexes.
    Criterion { input: String },
    /// One-relator presentation complexes.
    Presentation {
        #[command(subcommand)]
        action: PresentationAction,
    },
    /// Polygonal presentations.
    Polygonal {
        #[command(subcommand)]
        action: PolygonalAction,
    },
    /// Built-in examples.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
    /// Replays a .clps, .cover, .poly or .sc file.
    Verify { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum CoverMode {
    /// Strong-collapsible cover of the second subdivision.
    Strong { input: String },
    /// Exact search for a cover by two collapsible subcomplexes.
    Search2 {
        input: String,
        /// Search every assignment of simplices, not only triangle partitions.
        #[arg(long)]
        full: bool,
    },
    /// Makes the intersection of a cover a graph.
    Normalize { cover: PathBuf },
    /// Moves leaves of the intersection graph into a single piece.
    Relocate { cover: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum PresentationAction {
    /// Triangulates the presentation complex.
    Build { presentation: String },
    /// Bounds plgcat of the presentation complex.
    Classify { presentation: String },
}

#[derive(Subcommand, Debug)]
pub enum PolygonalAction {
    /// Triangulates a polygonal presentation.
    Realize { input: PathBuf },
    /// Reduces a triangulation to a one-word presentation.
    Reduce {
        input: String,
        /// Paste along any inner edge, skipping the subdivision.
        #[arg(long)]
        any_inner_edge: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum CorpusAction {
    List,
    Get { name: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let first = e.to_string();
            let line = first.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error[usage]: {line}");
            return ExitCode::from(1);
        }
    };
    match commands::run(&cli) {
        Ok(Outcome { text, definitive }) => {
            print!("{text}");
            if definitive {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error[{}]: {}", e.code, e.msg);
            ExitCode::from(1)
        }
    }
}
