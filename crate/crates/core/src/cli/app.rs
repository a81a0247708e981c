use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::run::{self, PipelineOptions};
use super::{CliError, RunReport, EXIT_INPUT_ERROR};

#[derive(Debug, Parser)]
#[command(
    name = "trunkweave",
    version,
    about = "Trunk numbers of knots and satellites"
)]
pub struct Cli {
    /// Also write the full report as JSON.
    #[arg(long, global = true, value_name = "FILE")]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Pipeline {
    /// Companion knot: a knot file or a catalog name.
    pub knot: String,
    /// Pattern: a pattern file or a catalog name.
    pub pattern: String,
    /// Extra full twists of the tube framing.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub twist: i64,
    /// Boundary mesh rings along the core.
    #[arg(long, default_value_t = 64)]
    pub rings: usize,
    /// Boundary mesh vertices around each ring.
    #[arg(long, default_value_t = 16)]
    pub around: usize,
    /// Satellite vertices per pattern edge.
    #[arg(long, default_value_t = 4)]
    pub samples: usize,
}

impl Pipeline {
    fn options(&self) -> PipelineOptions {
        PipelineOptions {
            twist: self.twist,
            longitudinal_res: self.rings,
            meridional_res: self.around,
            samples_per_edge: self.samples,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximum level count of a knot presentation.
    Trunk { knot: String },
    /// Winding number and norm bounds of a pattern.
    PatternNorm { pattern: String },
    /// Build a satellite and report its trunk.
    Satellite {
        #[command(flatten)]
        pipeline: Pipeline,
        /// Write the satellite as a knot file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-level sections of the companion tube.
    Levels {
        #[command(flatten)]
        pipeline: Pipeline,
        /// Write the per-level table as CSV.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Check the trunk inequality for a satellite, level by level.
    VerifyInequality {
        #[command(flatten)]
        pipeline: Pipeline,
        /// Write the per-level table as CSV.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Exhaustively check circle configurations on the sphere.
    LemmaCheck {
        #[arg(long, default_value_t = 9)]
        max_circles: usize,
    },
    /// Connected sum presentation of two knots.
    Sum {
        a: String,
        b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the catalog fixtures as files.
    Export { dir: PathBuf },
}

fn dispatch(cli: &Cli, echo: Vec<String>) -> Result<RunReport, CliError> {
    match &cli.command {
        Command::Trunk { knot } => run::run_trunk(echo, &run::resolve_knot(knot)?),
        Command::PatternNorm { pattern } => {
            Ok(run::run_pattern_norm(echo, &run::resolve_pattern(pattern)?))
        }
        Command::Satellite { pipeline, out } => run::run_satellite(
            echo,
            &run::resolve_knot(&pipeline.knot)?,
            &run::resolve_pattern(&pipeline.pattern)?,
            &pipeline.options(),
            out.as_deref(),
        ),
        Command::Levels { pipeline, plot } => run::run_levels(
            echo,
            &run::resolve_knot(&pipeline.knot)?,
            &run::resolve_pattern(&pipeline.pattern)?,
            &pipeline.options(),
            plot.as_deref(),
        ),
        Command::VerifyInequality { pipeline, plot } => run::run_verify_inequality(
            echo,
            &run::resolve_knot(&pipeline.knot)?,
            &run::resolve_pattern(&pipeline.pattern)?,
            &pipeline.options(),
            plot.as_deref(),
        ),
        Command::LemmaCheck { max_circles } => run::run_lemma_check(echo, *max_circles),
        Command::Sum { a, b, out } => run::run_sum(
            echo,
            &run::resolve_knot(a)?,
            &run::resolve_knot(b)?,
            out.as_deref(),
        ),
        Command::Export { dir } => run::export_catalog(echo, dir),
    }
}

/// Parses `args` (without the program name), runs the command, prints the
/// summary to `out` and errors to `err`; returns the exit code.
pub fn main_with_args(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(
        std::iter::once("trunkweave".to_string()).chain(args.iter().cloned()),
    ) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                let _ = write!(err, "{e}");
            }
            return code;
        }
    };
    let report = match dispatch(&cli, args.to_vec()) {
        Ok(report) => report,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT_ERROR;
        }
    };
    let _ = out.write_all(report.summary().as_bytes());
    if let Some(path) = &cli.report {
        if let Err(e) = report.write_json(path) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT_ERROR;
        }
    }
    report.exit_code()
}
