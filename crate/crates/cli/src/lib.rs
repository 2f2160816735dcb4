//! `acceptmax`: solve instance files, run amendment procedures, measure
//! worst-case acceptance rates and generate random instances.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 input error.

mod gen;
mod solve;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use acceptmax_core::amendment::{amend_iterative, amend_one_step, check_universal_acceptance, AmendmentTrace};
use acceptmax_core::bounds::{verify_row, InstanceClass, ModeChoice, DEFAULT_SAMPLES};
use acceptmax_core::schema::{Instance, InstanceFile};
use acceptmax_core::Threshold;
use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use solve::Mechanism;

#[derive(Parser, Debug)]
#[command(name = "acceptmax", version, about = "Acceptance-maximizing collective decisions")]
pub struct Cli {
    /// Worker threads for the parallel sweeps (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Pick an acceptance-maximizing decision for an instance file
    Solve {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Mechanism::Auto)]
        mechanism: Mechanism,
    },
    /// Run the amendment procedure on an amendment instance file
    Amend {
        path: PathBuf,
        /// Propose the h-rule directly instead of stepping one threshold at a time
        #[arg(long)]
        one_step: bool,
    },
    /// Worst-case acceptance rate of an instance class, one JSON line per n
    Bounds {
        class: String,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        n: Vec<u32>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
    },
    /// Generate random instances of a class
    Gen {
        class: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Write one file per instance here instead of JSON lines on stdout
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Randomized,
    Auto,
}

impl From<ModeArg> for ModeChoice {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exhaustive => ModeChoice::Exhaustive,
            ModeArg::Randomized => ModeChoice::Randomized,
            ModeArg::Auto => ModeChoice::Auto,
        }
    }
}

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Mismatch,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Mismatch => 1,
        }
    }
}

/// Exit code for errors returned by [`run`].
pub const INPUT_ERROR: i32 = 2;

pub fn read_instance(path: &Path) -> anyhow::Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: InstanceFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.validate().with_context(|| format!("validating {}", path.display()))
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct IterativeOutput<'a> {
    h: String,
    #[serde(flatten)]
    trace: &'a AmendmentTrace,
    universal: bool,
}

/// Runs one command, writing results to `out` and warnings to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<Status> {
    if let Some(threads) = cli.threads {
        // A pool may already exist when called repeatedly in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match cli.command {
        Command::Solve { path, mechanism } => {
            let report = solve::solve(read_instance(&path)?, mechanism)?;
            write_json(out, &report)?;
            Ok(Status::Ok)
        }
        Command::Amend { path, one_step } => {
            let Instance::Amendment(instance) = read_instance(&path)? else {
                bail!("{}: `amend` needs an instance of kind \"amendment\"", path.display());
            };
            if one_step {
                let report = amend_one_step(&instance);
                write_json(out, &report)?;
                return Ok(if report.universal == Some(false) { Status::Mismatch } else { Status::Ok });
            }
            let trace = amend_iterative(&instance);
            let universal = check_universal_acceptance(&trace, &instance);
            let h: Threshold = instance.h();
            write_json(out, &IterativeOutput { h: h.to_string(), trace: &trace, universal })?;
            Ok(if universal { Status::Ok } else { Status::Mismatch })
        }
        Command::Bounds { class, n, k, mode, seed, samples } => {
            let class = InstanceClass::parse(&class, k)?;
            let mut status = Status::Ok;
            for report in verify_row(&class, &n, mode.into(), seed, samples)? {
                serde_json::to_writer(&mut *out, &report)?;
                writeln!(out)?;
                if !report.matches {
                    status = Status::Mismatch;
                } else if !report.equality_witnessed {
                    writeln!(
                        err,
                        "warning: {} n={}: no instance at the formula rate {} was found (best {})",
                        report.class, report.n, report.formula_rate, report.observed_min_rate
                    )?;
                }
            }
            Ok(status)
        }
        Command::Gen { class, n, k, seed, count, out_dir } => {
            let class = InstanceClass::parse(&class, k)?;
            gen::generate(&class, n, seed, count, out_dir.as_deref(), out)?;
            Ok(Status::Ok)
        }
    }
}
