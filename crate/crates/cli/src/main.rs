//! `mcg`: batch front end for building presentations, replaying proof
//! scripts and running the oracles.
//!
//! Exit codes: 0 when every requested check passes, 1 when a check fails,
//! 2 for usage, parse and I/O errors.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{CheckArgs, CliError, OracleArgs, SearchArgs, SurfaceQuery};
use mcg_core::presentations::Mode;
use mcg_core::prover::SearchConfig;
use report::RunReport;

#[derive(Parser, Debug)]
#[command(name = "mcg", version, about = "Verify presentations of surface mapping class groups")]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Include elapsed times in the report.
    #[arg(long, global = true)]
    timings: bool,
    /// Worker threads for parallel checking (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build the presentation for a surface of genus g with n boundary
    /// components and write it in the presentation file format.
    Presentation {
        #[arg(short = 'g', long)]
        genus: u32,
        #[arg(short = 'n', long, default_value_t = 0)]
        boundary: u32,
        #[arg(long, default_value = "full", value_parser = parse_mode)]
        mode: Mode,
        /// Add both lantern forms for every distinct triple.
        #[arg(long)]
        lanterns: bool,
        /// Keep all three rotations of every star relator instead of one.
        #[arg(long = "all-stars")]
        all_stars: bool,
        /// Output file; standard output when absent.
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Replay proof scripts.
    Check {
        /// Script files, or directories of `*.script` files.
        paths: Vec<PathBuf>,
        /// Also check the corpus (MCG_CORPUS_DIR or the bundled one).
        #[arg(long)]
        corpus: bool,
        /// Extra presentation files scripts may refer to by name.
        #[arg(long = "presentation")]
        presentations: Vec<PathBuf>,
        /// Also run the single step mutation suite.
        #[arg(long)]
        mutations: bool,
    },
    /// Search for a derivation between two words.
    Search {
        /// Presentation file or name, such as `gervais(2,0)`.
        #[arg(short = 'p', long)]
        presentation: String,
        from: String,
        to: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long = "max-length", default_value_t = 40)]
        max_length: usize,
        #[arg(long = "max-states", default_value_t = 200_000)]
        max_states: usize,
    },
    /// Verify the genus two homomorphisms `phi` (Birman-Hilden to Gervais)
    /// or `psi` (the inverse direction) relator by relator.
    Homomorphism {
        map: String,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long = "max-states", default_value_t = 200_000)]
        max_states: usize,
    },
    /// Run the representation oracles on a presentation.
    Oracles {
        #[arg(short = 'p', long, default_value = "gervais(2,0)")]
        presentation: String,
        /// Check every relator acts trivially on homology.
        #[arg(long)]
        homology: bool,
        /// Order of the generated group mod this prime.
        #[arg(long, value_name = "P")]
        closure: Option<u32>,
        /// Invariant factors of the abelianization.
        #[arg(long)]
        abelianize: bool,
        /// Fail unless the abelianization is this, e.g. `[10]`.
        #[arg(long = "expect-abelian")]
        expect_abelian: Option<String>,
        /// Fail unless the closure has this order.
        #[arg(long = "expect-order")]
        expect_order: Option<usize>,
        #[arg(long, default_value_t = mcg_core::reps::CLOSURE_CAP)]
        cap: usize,
    },
    /// Decide equality of two braid words in s1, s2, ...
    Braid {
        w1: String,
        w2: String,
        #[arg(short = 'm', long, default_value_t = 6)]
        strands: usize,
        /// Read the words over a1, b, a2, b1, c{1,2} and map them to s1..s5.
        #[arg(long)]
        chain: bool,
    },
    /// Surface group computations in genus two.
    Surface {
        #[command(subcommand)]
        query: SurfaceCmd,
    },
    /// Compile the corpus chains into scripts and compare with the
    /// shipped scripts, or rewrite them with --write.
    Derive {
        #[arg(long)]
        write: bool,
        /// Only chains whose name starts with this prefix.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum SurfaceCmd {
    /// Apply a twist word to a word in x0..x3: `act <twist> on <x>`.
    Act {
        twist: String,
        #[arg(value_parser = ["on"], hide_possible_values = true)]
        on: String,
        x: String,
    },
    /// Whether two words are equal in the surface group.
    Equal { w1: String, w2: String },
    /// Whether the action of a twist word is inner.
    Inner {
        twist: String,
        #[arg(long, default_value_t = 6)]
        bound: usize,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

fn run(cli: Cli) -> Result<Option<RunReport>, CliError> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let report = match cli.cmd {
        Cmd::Presentation { genus, boundary, mode, lanterns, all_stars, out } => {
            let p = commands::presentation(genus, boundary, mode, lanterns, !all_stars)?;
            let text = p.emit();
            match out {
                Some(path) => {
                    std::fs::write(&path, &text)
                        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                    let item = report::Item::pass(&p.name)
                        .with_detail(format!("{} generators, {} relators", p.generators.len(), p.relators.len()));
                    RunReport::new("presentation", vec![report::InputDigest::of(&path, text.as_bytes())], vec![item])
                }
                None => {
                    print!("{text}");
                    return Ok(None);
                }
            }
        }
        Cmd::Check { paths, corpus, presentations, mutations } => {
            commands::check(&CheckArgs { paths, corpus, presentations, mutations })?
        }
        Cmd::Search { presentation, from, to, depth, max_length, max_states } => {
            commands::search(&SearchArgs { presentation, from, to, depth, max_length, max_states })?
        }
        Cmd::Homomorphism { map, depth, max_states } => {
            let cfg = SearchConfig { max_depth: depth, max_states, ..Default::default() };
            commands::homomorphism(&map, &cfg)?
        }
        Cmd::Oracles { presentation, homology, closure, abelianize, expect_abelian, expect_order, cap } => {
            commands::oracles(&OracleArgs { presentation, homology, closure, abelianize, expect_abelian, expect_order, cap })?
        }
        Cmd::Braid { w1, w2, strands, chain } => commands::braid(&w1, &w2, strands, chain)?,
        Cmd::Surface { query } => commands::surface(&match query {
            SurfaceCmd::Act { twist, x, .. } => SurfaceQuery::Act { twist, x },
            SurfaceCmd::Equal { w1, w2 } => SurfaceQuery::Equal { w1, w2 },
            SurfaceCmd::Inner { twist, bound } => SurfaceQuery::Inner { twist, bound },
        })?,
        Cmd::Derive { write, only } => commands::derive(write, only.as_deref())?,
    };
    Ok(Some(report))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (json, timings) = (cli.json, cli.timings);
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(mut report)) => {
            if !timings {
                report.strip_timings();
            }
            let text = if json { report.render_json() } else { report.render_text() };
            let _ = std::io::stdout().write_all(text.as_bytes());
            if report.all_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
