use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use log::error;
use serde::Serialize;
use weightlab::chains::DEFAULT_BUDGET;
use weightlab::perm::DEFAULT_CAP;
use weightlab_cli::cache::DiskCache;
use weightlab_cli::corpus::{parse_corpus, run_corpus};
use weightlab_cli::report;
use weightlab_cli::run::{self, exit_code, RunConfig, EXIT_FAIL, EXIT_INPUT, EXIT_OK};

#[derive(Parser)]
#[command(
    name = "weightlab",
    version,
    about = "Block theory and weight-conjecture checks for small finite groups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Machine-readable JSON output
    #[arg(long, global = true)]
    json: bool,
    /// Maximum number of chains to enumerate
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Maximum group order
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Directory for cached character tables and blocks
    #[arg(long, global = true, env = "WEIGHTLAB_CACHE")]
    cache: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Alternating chain sum for every block
    VerifyAwc {
        spec: String,
        #[arg(short)]
        p: u64,
    },
    /// K0 coordinates and fixed-point checks for every block
    Functorial {
        spec: String,
        #[arg(short)]
        p: u64,
        #[arg(long = "max-L", default_value_t = 16)]
        max_l: usize,
    },
    /// p-blocks with defects and numbers of simple modules
    Blocks {
        spec: String,
        #[arg(short)]
        p: u64,
    },
    /// Ordinary character table
    Chartable { spec: String },
    /// Orbit representatives of p-subgroup chains
    Chains {
        spec: String,
        #[arg(short)]
        p: u64,
    },
    /// Isomorphism classes of pairs (L, u) with |L| bounded
    Dpairs {
        #[arg(short)]
        p: u64,
        #[arg(long = "max-L")]
        max_l: usize,
    },
    /// Run every entry of a corpus file
    Corpus {
        file: PathBuf,
        /// Also compute K0 coordinates
        #[arg(long)]
        functorial: bool,
        #[arg(long = "max-L", default_value_t = 16)]
        max_l: usize,
    },
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce(&T) -> String) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("reports serialize")
        );
    } else {
        print!("{}", text(value));
    }
}

fn verdict(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let c = &cli.common;
    if c.cap == 0 || c.budget == 0 {
        error!("--cap and --budget must be positive");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    let mut cfg = RunConfig {
        cap: c.cap,
        budget: c.budget,
        ..Default::default()
    };
    if let Some(dir) = &c.cache {
        match DiskCache::open(dir) {
            Ok(store) => cfg.store = Some(Arc::new(store)),
            Err(e) => {
                error!("cache directory {}: {e}", dir.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
    }
    let code = match &cli.cmd {
        Cmd::VerifyAwc { spec, p } => run::verify_awc(spec, *p, &cfg).map(|r| {
            emit(c.json, &r, |r| report::awc(r));
            verdict(r.iter().all(|x| x.passed()))
        }),
        Cmd::Functorial { spec, p, max_l } => {
            cfg.max_l = *max_l;
            run::functorial(spec, *p, &cfg).map(|r| {
                emit(c.json, &r, |r| report::fawc(r));
                verdict(r.iter().all(|x| x.consistent()))
            })
        }
        Cmd::Blocks { spec, p } => run::blocks(spec, *p, &cfg).map(|r| {
            emit(c.json, &r, report::blocks);
            EXIT_OK
        }),
        Cmd::Chartable { spec } => run::chartable(spec, &cfg).map(|r| {
            emit(c.json, &r, report::chartable);
            EXIT_OK
        }),
        Cmd::Chains { spec, p } => run::chains(spec, *p, &cfg).map(|r| {
            emit(c.json, &r, report::chains);
            EXIT_OK
        }),
        Cmd::Dpairs { p, max_l } => run::dpairs(*p, *max_l).map(|r| {
            emit(c.json, &r, |r| report::dpairs(r));
            EXIT_OK
        }),
        Cmd::Corpus {
            file,
            functorial,
            max_l,
        } => {
            cfg.max_l = *max_l;
            let lines = std::fs::read_to_string(file)
                .map_err(|e| format!("{}: {e}", file.display()))
                .and_then(|t| parse_corpus(&t));
            match lines {
                Ok(lines) => {
                    let r = run_corpus(&lines, &cfg, *functorial);
                    emit(c.json, &r, report::corpus);
                    // entries that could not be run are reported, not failed
                    let failed = r.entries.iter().any(|e| {
                        matches!(
                            e.status,
                            weightlab_cli::corpus::Status::Fail
                                | weightlab_cli::corpus::Status::Error
                        )
                    });
                    Ok(verdict(!failed))
                }
                Err(m) => {
                    error!("{m}");
                    Ok(EXIT_INPUT)
                }
            }
        }
    };
    let code = code.unwrap_or_else(|e| {
        error!("{e}");
        exit_code(&e)
    });
    ExitCode::from(code as u8)
}
