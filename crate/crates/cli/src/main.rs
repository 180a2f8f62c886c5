//! `hvconic` command-line tool.
//!
//! Exit status: 0 on success, 1 on a domain error or a failed check (with an
//! `ERROR <code>: <message>` line on stderr for errors), 2 on usage errors.

mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hvconic::grid_geometry::{enumerate_hv_connected, read_hvset, sample_hv_convex, to_hvset_string, write_hvset};
use hvconic::metrics::hausdorff;
use hvconic::reconstruct::{exhaustive, load_problem, local_search, parse_dims, write_result};
use hvconic::xray_conic::{conic_of, sample_field, write_field_csv, write_field_pgm, write_profile_csv, xray_h, xray_v};
use hvconic::{Error, GridGeometry, Rect, Result};

#[derive(Parser)]
#[command(name = "hvconic", version, about = "Conic functions of hv-convex grid sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a random hv-convex connected set.
    Gen {
        #[arg(long, value_name = "MxN")]
        dims: String,
        /// Reference box `a,b,c,d`; defaults to unit cells.
        #[arg(long = "box", value_name = "A,B,C,D")]
        bounds: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Make the bounding box the whole reference box.
        #[arg(long)]
        full_box: bool,
        /// Output file; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write both X-ray profiles as `<prefix>.vertical.csv` and `<prefix>.horizontal.csv`.
    Xray {
        file: PathBuf,
        /// Defaults to the input path without its extension.
        #[arg(long)]
        prefix: Option<PathBuf>,
    },
    /// Sample the conic function on a lattice over the reference box.
    Conic {
        file: PathBuf,
        #[arg(long, value_name = "PxQ")]
        samples: String,
        /// CSV output; standard output if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write a 16-bit PGM image.
        #[arg(long)]
        pgm: Option<PathBuf>,
    },
    /// Print a Hausdorff distance bracket as `lower upper`.
    Dist {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value_t = hvconic::metrics::DEFAULT_SUBSAMPLES)]
        subsamples: usize,
    },
    /// Run a batch of checks and print one JSON report per line.
    Verify(verify::VerifyArgs),
    /// Solve a reconstruction problem file.
    Reconstruct {
        problem: PathBuf,
        /// Enumerate all feasible sets instead of annealing.
        #[arg(long)]
        oracle: bool,
    },
    /// Count the hv-convex connected sets of a grid.
    Enum {
        #[arg(long, value_name = "MxN")]
        dims: String,
        #[arg(long)]
        full_box: bool,
        /// Directory receiving one HVSET file per set.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

fn parse_box(text: &str) -> Result<Rect> {
    let v: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidParameter(format!("box '{text}' is not a,b,c,d")))?;
    match v.as_slice() {
        [a, b, c, d] => Rect::new(*a, *b, *c, *d),
        _ => Err(Error::InvalidParameter(format!("box '{text}' is not a,b,c,d"))),
    }
}

pub(crate) fn unit_geometry(dims: &str) -> Result<GridGeometry> {
    let (m, n) = parse_dims(dims)?;
    GridGeometry::unit(m, n)
}

fn output_writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(suffix);
    PathBuf::from(name)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen {
            dims,
            bounds,
            seed,
            full_box,
            output,
        } => {
            let (m, n) = parse_dims(&dims)?;
            let rect = match bounds {
                Some(b) => parse_box(&b)?,
                None => Rect::new(0.0, m as f64, 0.0, n as f64)?,
            };
            let set = sample_hv_convex(GridGeometry::new(rect, m, n)?, seed, full_box);
            match output {
                Some(path) => write_hvset(&set, path)?,
                None => print!("{}", to_hvset_string(&set)),
            }
        }
        Command::Xray { file, prefix } => {
            let set = read_hvset(&file)?;
            let prefix = prefix.unwrap_or_else(|| file.with_extension(""));
            write_profile_csv(&xray_v(&set), File::create(with_suffix(&prefix, ".vertical.csv"))?)?;
            write_profile_csv(&xray_h(&set), File::create(with_suffix(&prefix, ".horizontal.csv"))?)?;
        }
        Command::Conic {
            file,
            samples,
            output,
            pgm,
        } => {
            let set = read_hvset(&file)?;
            let (p, q) = parse_dims(&samples)?;
            let field = sample_field(&conic_of(&set), &set.geometry().rect(), p, q)?;
            write_field_csv(&field, output_writer(output.as_deref())?)?;
            if let Some(path) = pgm {
                write_field_pgm(&field, p, q, BufWriter::new(File::create(path)?))?;
            }
        }
        Command::Dist {
            first,
            second,
            subsamples,
        } => {
            let b = hausdorff(&read_hvset(first)?, &read_hvset(second)?, subsamples)?;
            println!("{} {}", b.lower, b.upper);
        }
        Command::Verify(args) => return verify::run(args),
        Command::Reconstruct { problem, oracle } => {
            let job = load_problem(problem)?;
            let result = if oracle {
                exhaustive(&job.problem)?
            } else {
                local_search(&job.problem, &job.params)?
            };
            let summary = write_result(&result, &job, oracle)?;
            println!(
                "{}",
                serde_json::to_string(&summary).map_err(|e| Error::InvalidParameter(e.to_string()))?
            );
        }
        Command::Enum { dims, full_box, dump } => {
            let sets = enumerate_hv_connected(unit_geometry(&dims)?, full_box)?;
            println!("{}", sets.len());
            if let Some(dir) = dump {
                std::fs::create_dir_all(&dir)?;
                for (k, set) in sets.iter().enumerate() {
                    write_hvset(set, dir.join(format!("set_{k:05}.hv")))?;
                }
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("ERROR {}: {e}", e.code());
            ExitCode::from(1)
        }
    }
}
