use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cutintro::pipeline::{emit_stats, run_corpus, run_pipeline, Mode, OracleChoice, RunConfig, DEFAULT_TIMEOUT};
use cutintro::proofbuild::{check_proof_with, LKProof};

#[derive(Parser)]
#[command(name = "cutintro", version, about = "Introduce a universal cut into a cut-free proof given as a Herbrand sequent")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline on one `.cis` file and print its report as JSON.
    Run {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run every `.cis` file of a directory and print the aggregate as JSON.
    Corpus {
        dir: PathBuf,
        #[command(flatten)]
        opts: Opts,
        /// Files processed concurrently.
        #[arg(long, default_value_t = 4)]
        workers: usize,
    },
    /// Check a proof written by `run --out`.
    Check {
        proof: PathBuf,
        #[arg(long, default_value = "internal")]
        oracle: OracleChoice,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ci1,
    Cistar,
}

#[derive(Args)]
struct Opts {
    #[arg(long, value_enum, default_value_t = ModeArg::Cistar)]
    mode: ModeArg,
    /// Seconds.
    #[arg(long, default_value_t = DEFAULT_TIMEOUT.as_secs())]
    timeout: u64,
    /// Largest subset of the term set generalized.
    #[arg(long)]
    max_subset: Option<usize>,
    /// Node cap of the solution improvement.
    #[arg(long)]
    sf_cap: Option<usize>,
    /// `internal`, or `cmd:<template>` where `{}` stands for an SMT-LIB2 file.
    #[arg(long, default_value = "internal")]
    oracle: OracleChoice,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Opts {
    fn config(self) -> RunConfig {
        let defaults = RunConfig::default();
        RunConfig {
            mode: match self.mode {
                ModeArg::Ci1 => Mode::Ci1,
                ModeArg::Cistar => Mode::CiStar,
            },
            oracle: self.oracle,
            max_subset: self.max_subset,
            sf_node_cap: self.sf_cap.unwrap_or(defaults.sf_node_cap),
            timeout: Duration::from_secs(self.timeout),
            out_dir: self.out,
            ..defaults
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { file, opts } => {
            let cfg = opts.config();
            if let Err(e) = cfg.validate() {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            let report = run_pipeline(&cfg, &file);
            println!("{}", emit_stats(&report));
            ExitCode::from(report.status.exit_code() as u8)
        }
        Command::Corpus { dir, opts, workers } => {
            let cfg = opts.config();
            if let Err(e) = cfg.validate() {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            match run_corpus(&cfg, &dir, workers) {
                Ok(rep) => {
                    println!("{}", serde_json::to_string_pretty(&rep.aggregate).expect("aggregates serialize"));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {}: {e}", dir.display());
                    ExitCode::from(2)
                }
            }
        }
        Command::Check { proof, oracle } => {
            let cfg = RunConfig { oracle, ..RunConfig::default() };
            let parsed = fs::read_to_string(&proof).map_err(|e| e.to_string()).and_then(|t| LKProof::from_json(&t).map_err(|e| e.to_string()));
            let p = match parsed {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {}: {e}", proof.display());
                    return ExitCode::from(2);
                }
            };
            match check_proof_with(&p, cfg.make_oracle().as_ref()) {
                Ok(()) => {
                    let m = p.metrics();
                    println!("ok: {} inferences, comq {}", m.length, m.comq);
                    ExitCode::SUCCESS
                }
                Err(f) => {
                    println!("rejected {f}");
                    ExitCode::from(1)
                }
            }
        }
    }
}
