use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qdof::experiment::suites::{run_oracle, ORACLE_FAMILIES};
use qdof::experiment::{run, Check, ExperimentConfig, ExperimentKind};
use qdof::Error;

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "qdof", version, about = "Quantumness generation and dynamical symmetry experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config
    Run {
        config: PathBuf,
        /// Overrides `output_dir` of the config
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Parse and check a config, printing the resolved parameters
    Validate { config: PathBuf },
    /// List the available experiments
    ListExperiments,
    /// Run an oracle suite (or `all`)
    Oracle {
        family: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn exit_code(e: &Error) -> u8 {
    if e.is_numerical() || matches!(e, Error::Domain(_) | Error::Inconclusive(_)) {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

fn print_checks(checks: &[Check]) {
    for c in checks {
        let tag = if c.pass { "PASS" } else { "FAIL" };
        println!("{tag}  {}: {:.3e} {} {:.3e}", c.name, c.value, c.relation, c.bound);
    }
}

fn load(path: &PathBuf) -> Result<ExperimentConfig, Error> {
    ExperimentConfig::from_path(path)
}

fn execute(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Run { config, output_dir } => {
            let mut cfg = load(&config)?;
            if let Some(dir) = output_dir {
                cfg.output_dir = dir;
            }
            let manifest = run(&cfg)?;
            println!("{} finished in {:.1} s; outputs in {}", cfg.experiment.name(), manifest.wall_time_s, cfg.output_dir.display());
            Ok(match &manifest.verdict {
                Some(v) => {
                    print_checks(&v.checks);
                    println!("verdict: {}", if v.pass { "PASS" } else { "FAIL" });
                    if v.pass {
                        EXIT_PASS
                    } else {
                        EXIT_FAIL
                    }
                }
                None => EXIT_PASS,
            })
        }
        Command::Validate { config } => {
            let cfg = load(&config)?;
            let plan = cfg.resolve()?;
            println!("{} is valid", config.display());
            println!("{}", serde_json::to_string_pretty(&plan)?);
            Ok(EXIT_PASS)
        }
        Command::ListExperiments => {
            for kind in ExperimentKind::ALL {
                println!("{:<18} {}", kind.name(), kind.description());
            }
            Ok(EXIT_PASS)
        }
        Command::Oracle { family, seed } => {
            let families: Vec<&str> = if family == "all" { ORACLE_FAMILIES.to_vec() } else { vec![family.as_str()] };
            let mut pass = true;
            for fam in families {
                let report = run_oracle(fam, seed)?;
                println!("[{fam}]");
                print_checks(&report.checks);
                for (k, v) in &report.notes {
                    println!("NOTE  {k}: {v:.3e}");
                }
                pass &= report.pass();
            }
            Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
