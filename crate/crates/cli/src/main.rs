use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use supercong_core::rational::parse_rational;
use supercong_core::report::{emit_to, run_single, run_suite, Format, RandomTrials, Selection, SuiteConfig};
use supercong_core::verifier::{Params, StatementId};
use supercong_core::BigRational;

#[derive(Parser)]
#[command(name = "supercong", version, about = "Check binomial-sum identities and supercongruences exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Output {
    /// Report format.
    #[arg(long, global = true, default_value = "text", value_parser = parse_format)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core). Overrides the config file.
    #[arg(long, global = true, env = "SUPERCONG_JOBS")]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite from a JSON config, or one statement instance.
    Verify(Verify),
    /// Exact checks of the sum identities over random (x, d) pairs.
    Identity {
        #[arg(long, default_value_t = 25)]
        n_max: u64,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Verify {
    #[arg(long, conflicts_with_all = ["statement", "p", "x", "d", "k", "n"], required_unless_present = "statement")]
    config: Option<PathBuf>,
    #[arg(long, value_parser = parse_statement)]
    statement: Option<StatementId>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    x: Option<BigRational>,
    #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
    d: Option<BigRational>,
    /// Index for the reflection statements.
    #[arg(long)]
    k: Option<u64>,
    /// Upper summation index for the exact identities.
    #[arg(long)]
    n: Option<u64>,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: supercong_core::Error| e.to_string())
}

fn parse_statement(s: &str) -> Result<StatementId, String> {
    s.parse().map_err(|e: supercong_core::Error| e.to_string())
}

fn parse_rat(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    let jobs = cli.output.jobs;
    let report = match cli.command {
        Command::Verify(v) => match (v.config, v.statement) {
            (Some(path), _) => {
                let mut config =
                    SuiteConfig::from_path(&path).with_context(|| format!("loading {}", path.display()))?;
                if let Some(j) = jobs {
                    config.parallelism = j;
                }
                run_suite(&config)?
            }
            (None, Some(id)) => {
                if !id.is_identity() && v.p.is_none() {
                    bail!("--p is required for {id}");
                }
                let params = Params {
                    x: v.x,
                    d: v.d,
                    k: v.k,
                    n: v.n,
                };
                run_single(id, v.p, params)?
            }
            (None, None) => bail!("either --config or --statement is required"),
        },
        Command::Identity { n_max, trials, seed } => {
            let mut config = SuiteConfig::new(
                Selection::List(vec![StatementId::Lemma2_1, StatementId::Theorem1_5]),
                3,
                3,
            );
            config.x_set.clear();
            config.d_set.clear();
            config.identity_n_max = n_max;
            config.random_trials = Some(RandomTrials { count: trials, seed });
            config.parallelism = jobs.unwrap_or(1);
            run_suite(&config)?
        }
    };
    emit_to(&report, cli.output.format, cli.output.out.as_deref())?;
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
