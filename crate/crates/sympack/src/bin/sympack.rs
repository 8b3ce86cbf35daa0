//! Symplectic ball-packing toolkit: construct the example packings, verify
//! them numerically, extract supporting surfaces, compute packing
//! certificates, and export geometry for inspection.
//!
//! Exit codes: 0 = success, 1 = a verification check failed (the report is
//! still written), 2 = usage or parse error.

use clap::{Parser, Subcommand};
use num_rational::Ratio;
use std::path::PathBuf;
use std::process::ExitCode;

use sympack::cli;
use sympack::Error;

#[derive(Parser)]
#[command(
    name = "sympack",
    version,
    about = "Maximal symplectic ball packings of the projective plane: \
             construction, verification, surfaces, and certificates"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a packing description file for a built-in example
    Construct {
        /// One of: karshon2, karshon3, full1, full4, regular5
        #[arg(long)]
        example: String,
        /// First radius for karshon2 (the second is √(1−r₁²))
        #[arg(long)]
        r1: Option<f64>,
        /// Sampling seed recorded in the file (flag > SYMPACK_SEED > 42)
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the numerical verification suites on a packing file
    Verify {
        #[arg(long)]
        packing: PathBuf,
        /// Sample budget per suite
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Where to write the JSON report
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Detect shared boundary arcs and assemble supporting surfaces
    Surfaces {
        #[arg(long)]
        packing: PathBuf,
        /// Samples per boundary fiber
        #[arg(long, default_value_t = 360)]
        resolution: usize,
        /// Where to write the graph + surfaces JSON
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional OBJ mesh of the supporting discs
        #[arg(long)]
        obj: Option<PathBuf>,
    },
    /// Enumerate candidate supporting-surface disc multisets
    Certify {
        /// Number of balls
        #[arg(long)]
        balls: usize,
        /// Use the equal-radius packing table value of r²
        #[arg(long, default_value_t = false)]
        from_table: bool,
        /// Squared radius as a rational a/b (alternative to --from-table)
        #[arg(long)]
        r2: Option<String>,
        /// Highest surface degree to enumerate
        #[arg(long)]
        dmax: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export geometry: polytope.svg, surface.obj, or trace.json
    Export {
        /// One of: polytope.svg, surface.obj, trace.json
        #[arg(long)]
        what: String,
        #[arg(long)]
        packing: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Samples per boundary fiber (surface.obj)
        #[arg(long, default_value_t = 360)]
        resolution: usize,
    },
}

fn parse_ratio(s: &str) -> Result<Ratio<i64>, Error> {
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| Error::Parameter(format!("invalid rational '{s}'")))
    };
    match s.split_once('/') {
        Some((a, b)) => {
            let den = parse(b)?;
            if den == 0 {
                return Err(Error::Parameter("rational with zero denominator".into()));
            }
            Ok(Ratio::new(parse(a)?, den))
        }
        None => Ok(Ratio::from_integer(parse(s)?)),
    }
}

fn run() -> Result<i32, Error> {
    let args = Args::parse();
    match args.command {
        Command::Construct {
            example,
            r1,
            seed,
            out,
        } => {
            cli::cmd_construct(&example, r1, cli::resolve_seed(seed), &out)?;
            Ok(0)
        }
        Command::Verify {
            packing,
            samples,
            seed,
            report,
        } => {
            let (_, exit) = cli::cmd_verify(
                &packing,
                samples,
                cli::resolve_seed(seed),
                report.as_deref(),
            )?;
            Ok(exit)
        }
        Command::Surfaces {
            packing,
            resolution,
            out,
            obj,
        } => {
            let json = cli::cmd_surfaces(&packing, resolution, out.as_deref(), obj.as_deref())?;
            print!("{json}");
            Ok(0)
        }
        Command::Certify {
            balls,
            from_table,
            r2,
            dmax,
            out,
        } => {
            let r2 = r2.as_deref().map(parse_ratio).transpose()?;
            let json = cli::cmd_certify(balls, from_table, r2, dmax, out.as_deref())?;
            print!("{json}");
            Ok(0)
        }
        Command::Export {
            what,
            packing,
            out,
            resolution,
        } => {
            cli::cmd_export(&what, &packing, &out, resolution)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
