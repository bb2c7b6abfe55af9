use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ffgscon::harness::{
    load_source, render_report, run_lemma_suite, run_monte_carlo, ExperimentConfig, InstanceSource, ReportFormat,
    RunMode, RunReport,
};
use ffgscon::instance::{builtin_instances, validate_instance};
use ffgscon::ledger::{derive_parameters, gap_order_estimate, ledger_report};
use ffgscon::witness::AdversarySpec;
use ffgscon::Error;

#[derive(Parser)]
#[command(name = "ffgscon", version, about = "Four-witness verifier simulator for ground state connectivity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance's structure and promises.
    Validate { instance: String },
    /// Print the protocol constants derived for an instance.
    Ledger { instance: String },
    /// Run the verifier against an honest or forged witness tuple.
    Verify {
        instance: String,
        /// KIND:MAGNITUDE[:SEED], repeatable; applied in order.
        #[arg(long = "adversary")]
        adversaries: Vec<AdversarySpec>,
        #[arg(long, default_value = "both")]
        mode: RunMode,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
        /// Comma-separated gate indices, overriding the built-in certificate.
        #[arg(long, value_delimiter = ',')]
        certificate: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: ReportFormat,
        /// Include wall-clock timings (reports then differ between runs).
        #[arg(long)]
        timings: bool,
    },
    /// Boundary adversaries against every rejection threshold.
    Lemmas {
        instance: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: ReportFormat,
    },
    /// Built-in instances.
    Fixtures {
        #[command(subcommand)]
        action: FixturesAction,
    },
}

#[derive(Subcommand)]
enum FixturesAction {
    List,
}

fn source(instance: &str) -> InstanceSource {
    let path = Path::new(instance);
    if path.exists() || instance.ends_with(".json") {
        InstanceSource::File(path.to_path_buf())
    } else {
        InstanceSource::Builtin(instance.to_string())
    }
}

fn write_report(report: &RunReport, format: ReportFormat, out: Option<&Path>) -> Result<(), Error> {
    let text = render_report(report, format);
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Validate { instance } => {
            let (inst, _) = load_source(&source(&instance), None)?;
            let report = validate_instance(&inst);
            print!("{}", report.to_text());
            Ok(report.passed())
        }
        Command::Ledger { instance } => {
            let (inst, _) = load_source(&source(&instance), None)?;
            let ledger = derive_parameters(&inst)?;
            let estimate = gap_order_estimate(&inst, &ledger);
            print!("{}", ledger_report(&ledger, Some(&estimate)));
            Ok(true)
        }
        Command::Verify { instance, adversaries, mode, trials, seed, threads, certificate, out, format, timings } => {
            let cfg = ExperimentConfig {
                source: source(&instance),
                certificate,
                mode,
                trials,
                seed,
                adversaries,
                threads,
                timings,
            };
            let report = run_monte_carlo(&cfg)?;
            write_report(&report, format, out.as_deref())?;
            Ok(true)
        }
        Command::Lemmas { instance, out, format } => {
            let (inst, cert) = load_source(&source(&instance), None)?;
            let report = run_lemma_suite(&inst, cert.as_ref())?;
            for row in &report.lemmas {
                eprintln!(
                    "[{}] {:<12} reject={:e} threshold={:e}",
                    if row.passed { "PASS" } else { "FAIL" },
                    row.row,
                    row.reject,
                    row.threshold_f64
                );
            }
            write_report(&report, format, out.as_deref())?;
            Ok(report.lemmas.iter().all(|r| r.passed))
        }
        Command::Fixtures { action: FixturesAction::List } => {
            for f in builtin_instances() {
                let i = &f.instance;
                let label = if f.is_yes() { "yes" } else { "no" };
                println!("{:<16} {label:<4} n={} m={} G={} R={}", f.name(), i.n, i.m, i.g(), i.r());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Io(_)) { 2 } else { 1 })
        }
    }
}
