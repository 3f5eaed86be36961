//! Command implementations behind the `covfun` binary.
//!
//! Every subcommand loads its inputs, runs the corresponding library
//! routine, and emits a single JSON report on stdout: the command name, a
//! digest of the inputs, the outcome, the seed, the tool version, and the
//! wall time.  Reports for identical inputs and seed are byte-identical
//! except for the wall-time field.
//!
//! Exit codes: 0, 1, 2 mirror the three cover verdicts (covered, uncovered,
//! unknown); commands without a verdict use 0 for success and 1 for a failed
//! check; 3 covers usage and I/O errors.  `COVFUN_THREADS` caps the size of
//! the global thread pool.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use covfun_core::error::GeomError;
use serde_json::Value;

mod borsuk_cmd;
mod commands;
mod io;
mod net;
mod program;
mod report;
mod svg;
mod tables;

pub use program::PipelineReport;
pub use report::CommandReport;

/// Errors that terminate a run with exit code 3.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Parser, Debug)]
#[command(
    name = "covfun",
    version,
    about = "Covering-functional toolkit: verified covers, ratio searches, nets, and diameter partitions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Suppress the JSON report on stdout.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Wall-clock budget per search, in seconds.
    #[arg(long, global = true)]
    pub budget_seconds: Option<f64>,
    /// Subdivision depth limit for cover verification.
    #[arg(long, global = true)]
    pub depth: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a covering configuration against a body.
    Verify {
        /// Body JSON file.
        #[arg(long)]
        body: PathBuf,
        /// Covering configuration JSON file (ratio + centers).
        #[arg(long)]
        config: PathBuf,
        /// Also render the configuration to this SVG file (2-D bodies only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Search for a verified upper bound on the m-translate covering ratio.
    Gamma {
        /// Body JSON file.
        #[arg(long)]
        body: PathBuf,
        /// Number of translates.
        #[arg(short, long)]
        m: usize,
    },
    /// Bound the Banach-Mazur distance between two bodies.
    Bm {
        /// First body JSON file.
        body1: PathBuf,
        /// Second body JSON file.
        body2: PathBuf,
    },
    /// Net construction: cap covers, parameters, snapping, cardinality.
    Net {
        #[command(subcommand)]
        cmd: NetCmd,
    },
    /// Diameter partitions and constant-width checks.
    Borsuk {
        #[command(subcommand)]
        cmd: BorsukCmd,
    },
    /// Run the full covering pipeline over a directory of bodies.
    Program {
        /// Dimension (2 or 3).
        #[arg(long)]
        n: usize,
        /// Target covering-ratio threshold in (0, 1).
        #[arg(long)]
        c: f64,
        /// Directory of body JSON files.
        #[arg(long)]
        bodies: PathBuf,
        /// Also snap each normalized body to the net and record its distance bound.
        #[arg(long)]
        snap: bool,
    },
    /// Reproduce the tabulated covering-ratio bounds.
    Tables {
        /// Which table to reproduce: 1, 2, 3, or all.
        #[arg(long, default_value = "all")]
        which: String,
    },
    /// Render a covering configuration to an SVG file.
    Render {
        /// Body JSON file.
        #[arg(long)]
        body: PathBuf,
        /// Covering configuration JSON file.
        #[arg(long)]
        config: PathBuf,
        /// Output SVG path.
        out: PathBuf,
        /// Cross-section height for 3-D bodies.
        #[arg(long)]
        slice: Option<f64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum NetCmd {
    /// Normalize a body and snap it to the radial net, certifying the distance.
    Snap {
        /// Body JSON file.
        #[arg(long)]
        body: PathBuf,
        /// Target distance gap on the log scale.
        #[arg(long)]
        beta: f64,
        /// Write the full snapped polytope JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cap radius and grid depth certified for a given gap.
    Params {
        /// Dimension.
        #[arg(long)]
        n: usize,
        /// Target distance gap on the log scale.
        #[arg(long)]
        beta: f64,
    },
    /// Build a spherical cap cover and report its size.
    Caps {
        /// Dimension (2 or 3).
        #[arg(long)]
        n: usize,
        /// Cap radius.
        #[arg(long)]
        theta: f64,
    },
    /// Log of the counting bound on the full net cardinality.
    Cardinality {
        /// Dimension.
        #[arg(long)]
        n: usize,
        /// Target distance gap on the log scale.
        #[arg(long)]
        beta: f64,
        /// Counting constant.
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
}

#[derive(Subcommand, Debug)]
pub enum BorsukCmd {
    /// Partition a point cloud into parts of small diameter.
    Phi {
        /// Point cloud JSON file.
        #[arg(long)]
        cloud: Option<PathBuf>,
        /// Body JSON file; its boundary is sampled instead of reading a cloud.
        #[arg(long)]
        body: Option<PathBuf>,
        /// Number of boundary samples when --body is given.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Number of parts.
        #[arg(short, long)]
        m: usize,
    },
    /// Emit a Reuleaux polygon body with its area and width residual.
    Reuleaux {
        /// Number of arcs (odd, between 3 and 21).
        #[arg(long)]
        k: usize,
        /// Write the body JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the inradius/circumradius window for a constant-width body.
    Check {
        /// Body JSON file.
        #[arg(long)]
        body: PathBuf,
        /// Dimension for the radius window.
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

/// What a run produced: the report (unless quieted), an error message for
/// stderr, and the process exit code.
#[derive(Debug)]
pub struct RunOutput {
    pub report: Option<String>,
    pub error: Option<String>,
    pub exit: i32,
}

/// Outcome of one dispatched subcommand.
pub(crate) struct CommandResult {
    pub command: &'static str,
    pub digest: String,
    pub outcome: Value,
    pub exit: i32,
}

/// Entry point for the binary: parse real argv, print, return the exit code.
pub fn run() -> i32 {
    let out = run_from(std::env::args_os());
    if let Some(report) = &out.report {
        println!("{report}");
    }
    if let Some(error) = &out.error {
        eprintln!("error: {error}");
    }
    out.exit
}

/// Run the CLI on an explicit argument list; used by the binary and tests.
pub fn run_from<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                RunOutput { report: Some(rendered), error: None, exit: 0 }
            } else {
                RunOutput { report: None, error: Some(rendered), exit: 3 }
            };
        }
    };
    if let Err(msg) = init_threads() {
        return RunOutput { report: None, error: Some(msg), exit: 3 };
    }
    let start = Instant::now();
    match dispatch(&cli) {
        Ok(result) => {
            let report = CommandReport {
                command: result.command.to_string(),
                inputs_digest: result.digest,
                outcome: result.outcome,
                seed: cli.seed,
                version: env!("CARGO_PKG_VERSION").to_string(),
                wall_time_s: start.elapsed().as_secs_f64(),
            };
            let rendered = serde_json::to_string_pretty(&report)
                .unwrap_or_else(|e| format!("{{\"error\":\"report serialization: {e}\"}}"));
            RunOutput {
                report: (!cli.quiet).then_some(rendered),
                error: None,
                exit: result.exit,
            }
        }
        Err(e) => RunOutput { report: None, error: Some(e.to_string()), exit: 3 },
    }
}

fn dispatch(cli: &Cli) -> Result<CommandResult, CliError> {
    match &cli.command {
        Command::Verify { body, config, svg } => commands::verify(cli, body, config, svg.as_deref()),
        Command::Gamma { body, m } => commands::gamma(cli, body, *m),
        Command::Bm { body1, body2 } => commands::bm(cli, body1, body2),
        Command::Net { cmd } => net::dispatch(cli, cmd),
        Command::Borsuk { cmd } => borsuk_cmd::dispatch(cli, cmd),
        Command::Program { n, c, bodies, snap } => program::run(cli, *n, *c, bodies, *snap),
        Command::Tables { which } => tables::run(cli, which),
        Command::Render { body, config, out, slice } => {
            commands::render(cli, body, config, out, *slice)
        }
    }
}

/// Apply `COVFUN_THREADS` to the global thread pool.  A pool that is already
/// initialized (repeated calls within one process) is left as it is.
fn init_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("COVFUN_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("COVFUN_THREADS must be a positive integer, got {raw:?}"))?;
    if threads == 0 {
        return Err("COVFUN_THREADS must be a positive integer, got 0".to_string());
    }
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}
