//! Command line interface. The binary stays thin: parsing and dispatch live
//! here, all computation in the library modules.
//!
//! Exit codes: 0 all checks pass, 1 some check failed, 2 configuration error.

use crate::error::{Error, Result};
use crate::group::GroupDescriptor;
use crate::jobs::{self, JobConfig, JobName};
use crate::quotient::{match_subgroups, phi_iso, structure_report, FiniteQuotient};
use crate::symplectic::{MatrixJson, SymplecticMatrix};
use clap::{Args, Parser, Subcommand};
use std::io::Read;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "siegel",
    about = "Verification jobs for Siegel modular threefolds: theta constants, congruence quotients, and gradient forms"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonJobArgs {
    /// PRNG seed (SplitMix64)
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Residual tolerance for the checks
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Sample count, where the job takes one
    #[arg(long)]
    samples: Option<usize>,
    /// Genus, where the job is genus-parametric
    #[arg(long)]
    genus: Option<usize>,
    /// Write the JSON report here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification job (or `all`)
    Run {
        #[arg(long)]
        job: String,
        #[command(flatten)]
        common: CommonJobArgs,
    },
    /// Theta function evaluation
    Theta {
        #[command(subcommand)]
        cmd: ThetaCmd,
    },
    /// End-to-end verification suites
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// Finite quotient groups
    Quotient {
        #[command(subcommand)]
        cmd: QuotientCmd,
    },
    /// Genus-2 checks
    Genus2 {
        #[command(subcommand)]
        cmd: Genus2Cmd,
    },
    /// Genus-3 checks
    Genus3 {
        #[command(subcommand)]
        cmd: Genus3Cmd,
    },
    /// Write the canonical golden files
    EmitGoldens {
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ThetaCmd {
    /// Evaluate theta from a JSON request {characteristic, tau, z, tol};
    /// reads stdin unless --input names a file
    Eval {
        #[arg(long)]
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// The classical transformation formula on random group elements
    Transformation {
        #[command(flatten)]
        common: CommonJobArgs,
    },
}

#[derive(Subcommand)]
enum QuotientCmd {
    /// Enumerate big/small by coset BFS and print the order
    Enumerate {
        #[arg(long)]
        big: String,
        #[arg(long)]
        small: String,
        #[arg(long, default_value_t = 2)]
        genus: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structure report of Gamma_0(2)/Gamma_2^2(2,4)
    Structure {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Match a subgroup H (generators in a JSON file, matrices on the
    /// Gamma_0^0(2) side) with named intermediate groups on both sides
    Match {
        #[arg(long)]
        generators: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Genus2Cmd {
    /// Run one genus-2 check suite
    Verify {
        /// one of: signs, gmodule, fricke, fibers
        #[arg(long)]
        check: String,
        #[command(flatten)]
        common: CommonJobArgs,
    },
}

#[derive(Subcommand)]
enum Genus3Cmd {
    /// Classify all 378 odd pairs by vanishing of the symmetrized form
    Classify {
        #[command(flatten)]
        common: CommonJobArgs,
    },
    /// The R_16 theta relation at random points
    R16 {
        #[command(flatten)]
        common: CommonJobArgs,
    },
    /// Invariance of q = prod f_a under the quotient generators
    QInvariance {
        #[command(flatten)]
        common: CommonJobArgs,
    },
}

fn job_config(job: JobName, common: &CommonJobArgs) -> JobConfig {
    JobConfig {
        job,
        seed: common.seed,
        tol: common.tol,
        samples: common.samples,
        genus: common.genus,
        out: common.out.clone(),
    }
}

fn print_report(report: &jobs::Report) -> Result<i32> {
    println!("{}", serde_json::to_string_pretty(report)?);
    Ok(if report.passed { 0 } else { 1 })
}

fn run_job(job: JobName, common: &CommonJobArgs) -> Result<i32> {
    let cfg = job_config(job, common);
    let report = jobs::run(&cfg)?;
    print_report(&report)
}

fn parse_group(name: &str, genus: usize) -> Result<GroupDescriptor> {
    GroupDescriptor::from_json(&crate::group::GroupJson {
        group: name.to_string(),
        g: genus,
    })
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    // honor the documented thread-count env var when rayon is in play
    if let Ok(threads) = std::env::var("SIEGEL_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version through this path as well
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(Error::UnknownJob(j)) => {
            eprintln!("unknown job {j:?}");
            2
        }
        Err(Error::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Run { job, common } => run_job(JobName::parse(&job)?, &common),
        Command::Theta { cmd } => match cmd {
            ThetaCmd::Eval { input } => {
                let text = match input {
                    Some(path) => std::fs::read_to_string(path)?,
                    None => {
                        let mut buf = String::new();
                        std::io::stdin().read_to_string(&mut buf)?;
                        buf
                    }
                };
                let req: jobs::ThetaEvalInput = serde_json::from_str(&text)?;
                let out = jobs::theta_eval(&req)?;
                println!("{}", serde_json::to_string_pretty(&out)?);
                Ok(0)
            }
        },
        Command::Verify { cmd } => match cmd {
            VerifyCmd::Transformation { common } => run_job(JobName::Transformation, &common),
        },
        Command::Quotient { cmd } => match cmd {
            QuotientCmd::Enumerate {
                big,
                small,
                genus,
                out,
            } => {
                let big = parse_group(&big, genus)?;
                let small = parse_group(&small, genus)?;
                let q = FiniteQuotient::enumerate(big, small)?;
                let summary = serde_json::json!({
                    "ambient": big.to_json().group,
                    "kernel": small.to_json().group,
                    "genus": genus,
                    "modulus": q.modulus,
                    "order": q.order(),
                    "abelian": q.is_abelian(),
                    "exponent": q.exponent(),
                });
                if let Some(path) = out {
                    // the file form carries the whole element table
                    std::fs::write(path, serde_json::to_string_pretty(&q.to_json()?)?)?;
                }
                println!("{}", serde_json::to_string_pretty(&summary)?);
                Ok(0)
            }
            QuotientCmd::Structure { out } => {
                let q = FiniteQuotient::enumerate(
                    GroupDescriptor::gamma0(2, 2),
                    GroupDescriptor::igusa_upper(2),
                )?;
                let st = structure_report(&q, 16);
                let payload = serde_json::to_value(&st)?;
                if let Some(path) = out {
                    std::fs::write(path, serde_json::to_string_pretty(&payload)?)?;
                }
                println!("{}", serde_json::to_string_pretty(&payload)?);
                Ok(0)
            }
            QuotientCmd::Match { generators, out } => {
                let text = std::fs::read_to_string(generators)?;
                let mats: Vec<MatrixJson> = serde_json::from_str(&text)?;
                let gens = mats
                    .iter()
                    .map(SymplecticMatrix::from_json)
                    .collect::<Result<Vec<_>>>()?;
                let dom = FiniteQuotient::enumerate(
                    GroupDescriptor::gamma0(2, 2),
                    GroupDescriptor::igusa_upper(2),
                )?;
                let cod = FiniteQuotient::enumerate(
                    GroupDescriptor::gamma00(2),
                    GroupDescriptor::igusa(2),
                )?;
                let map = phi_iso(&dom, &cod)?;
                let m = match_subgroups(&dom, &cod, &map, &gens)?;
                let payload = serde_json::json!({
                    "h_order": m.h_order,
                    "gamma": m.gamma.map(|d| d.to_json().group),
                    "gamma_prime": m.gamma_prime.map(|d| d.to_json().group),
                    "fingerprints_equal": m.fingerprints_equal,
                });
                if let Some(path) = out {
                    std::fs::write(path, serde_json::to_string_pretty(&payload)?)?;
                }
                println!("{}", serde_json::to_string_pretty(&payload)?);
                Ok(0)
            }
        },
        Command::Genus2 { cmd } => match cmd {
            Genus2Cmd::Verify { check, common } => {
                let job = match check.as_str() {
                    "signs" | "gmodule" => JobName::GModule,
                    "fricke" => JobName::Fricke,
                    "fibers" => JobName::Fibers,
                    other => {
                        return Err(Error::Config(format!(
                            "unknown check {other:?}; use signs|gmodule|fricke|fibers"
                        )))
                    }
                };
                run_job(job, &common)
            }
        },
        Command::Genus3 { cmd } => match cmd {
            Genus3Cmd::Classify { common } => run_job(JobName::Classify, &common),
            Genus3Cmd::R16 { common } => run_job(JobName::R16, &common),
            Genus3Cmd::QInvariance { common } => run_job(JobName::QInvariance, &common),
        },
        Command::EmitGoldens { out } => {
            let files = jobs::emit_goldens(&out)?;
            for f in files {
                println!("{}", f.display());
            }
            Ok(0)
        }
    }
}
