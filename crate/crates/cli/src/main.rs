//! Command-line front end for the spline / ANCF conversion kernel.

mod commands;
mod format;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use format::Kind;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "ancf-geom",
    version,
    about = "Convert tensor-product Bezier/B-spline surfaces to ANCF thin-plate elements and back"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Target {
    Ancf48,
    Ancf36,
    Bezier,
}

impl Target {
    fn kind(self) -> Kind {
        match self {
            Target::Ancf48 => Kind::Ancf48,
            Target::Ancf36 => Kind::Ancf36,
            Target::Bezier => Kind::Bezier,
        }
    }
}

#[derive(Copy, Clone)]
struct SegmentRef {
    e: usize,
    f: usize,
}

fn parse_segment(s: &str) -> Result<SegmentRef, String> {
    let (e, f) = s
        .split_once(',')
        .ok_or_else(|| "expected two indices as e,f".to_string())?;
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("'{t}' is not a segment index"))
    };
    Ok(SegmentRef {
        e: parse(e)?,
        f: parse(f)?,
    })
}

#[derive(Subcommand)]
enum Command {
    /// Convert a geometry file to another representation
    Convert {
        /// Target representation
        #[arg(long, value_enum)]
        to: Target,
        /// Element length for ANCF targets (default: 1 for Bezier input,
        /// knot-span width for B-spline input)
        #[arg(long)]
        a: Option<f64>,
        /// Element width for ANCF targets
        #[arg(long)]
        b: Option<f64>,
        /// One B-spline segment, as its left knot indices e,f
        #[arg(long, value_parser = parse_segment, conflicts_with = "all")]
        segment: Option<SegmentRef>,
        /// Convert every non-degenerate segment
        #[arg(long)]
        all: bool,
        /// Relative tolerance for mixed-slope reduction and degree reduction
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        input: PathBuf,
        output: PathBuf,
    },
    /// Compare two geometries pointwise on the normalized unit square
    Compare {
        /// Grid resolution per side (at least 2)
        #[arg(long)]
        grid: usize,
        /// Pass threshold, relative to the larger bounding-box diagonal
        #[arg(long)]
        tol: f64,
        a: PathBuf,
        b: PathBuf,
    },
    /// Test a bicubic Bezier net for the corner parallelogram conditions
    CheckPolygon {
        /// Relative residual tolerance
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        input: PathBuf,
    },
    /// Dump surface points on a grid for external plotting
    Sample {
        /// Grid resolution per side (at least 2)
        #[arg(long)]
        grid: usize,
        input: PathBuf,
        output: PathBuf,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };

    let result = match cli.command {
        Command::Convert {
            to,
            a,
            b,
            segment,
            all,
            tol,
            input,
            output,
        } => commands::convert(
            &input,
            &output,
            &commands::ConvertOpts {
                to: to.kind(),
                a,
                b,
                segment: segment.map(|s| (s.e, s.f)),
                all,
                tol,
            },
        ),
        Command::Compare { grid, tol, a, b } => commands::compare(grid, tol, &a, &b),
        Command::CheckPolygon { tol, input } => commands::check_polygon(tol, &input),
        Command::Sample {
            grid,
            input,
            output,
        } => commands::sample(grid, &input, &output),
    };

    match result {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {}", err.message());
            err.exit_code()
        }
    }
}
