//! Experiments: exact and sampled runs of the verifier, the lemma-boundary
//! suite, and machine-readable reports.
//!
//! Sampled trial `k` of test `i` always draws from the stream
//! `(seed, i, k)` (the protocol round uses channel [`ROUND_CHANNEL`]), so
//! tallies do not depend on how trials are spread over threads.

mod lemmas;
mod report;

pub use lemmas::{lemma_boundary_specs, run_lemma_suite, LemmaRow};
pub use report::{emit_report, parse_report, render_report, ReportFormat, CSV_HEADER};

use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{builtin_instance, format::load_instance, GsconInstance, TraversalCertificate};
use crate::ledger::{derive_parameters, ParameterLedger};
use crate::rng::trial_rng;
use crate::verifier::{BranchTree, Protocol, ROUND_CHANNEL, TEST_NAMES};
use crate::witness::{forge_composite, AdversarySpec, Deviation};

pub const MAX_QUBITS: usize = 6;
pub const MAX_STEPS: usize = 4;
pub const MAX_GATES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceSource {
    Builtin(String),
    File(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Exact,
    Sampled,
    Both,
}

impl RunMode {
    pub fn exact(self) -> bool {
        matches!(self, RunMode::Exact | RunMode::Both)
    }

    pub fn sampled(self) -> bool {
        matches!(self, RunMode::Sampled | RunMode::Both)
    }
}

impl std::str::FromStr for RunMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(RunMode::Exact),
            "sampled" => Ok(RunMode::Sampled),
            "both" => Ok(RunMode::Both),
            _ => Err(Error::Config(format!("mode must be exact, sampled or both, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub source: InstanceSource,
    /// Overrides the built-in certificate; required for an honest base on file instances.
    pub certificate: Option<Vec<usize>>,
    pub mode: RunMode,
    pub trials: u64,
    pub seed: u64,
    /// Applied in order to the base tuple.
    pub adversaries: Vec<AdversarySpec>,
    /// Worker threads for sampled trials; `None` uses the default pool.
    pub threads: Option<usize>,
    /// Adds wall-clock timings, which makes reports differ between runs.
    pub timings: bool,
}

impl ExperimentConfig {
    pub fn new(source: InstanceSource) -> Self {
        Self {
            source,
            certificate: None,
            mode: RunMode::Both,
            trials: 10_000,
            seed: 0,
            adversaries: Vec::new(),
            threads: None,
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mode.sampled() && self.trials == 0 {
            return Err(Error::Config("sampled mode needs at least one trial".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("thread count must be positive".into()));
        }
        Ok(())
    }
}

/// Loads the instance and its certificate.
pub fn load_source(
    source: &InstanceSource,
    certificate: Option<&[usize]>,
) -> Result<(GsconInstance, Option<TraversalCertificate>)> {
    let (inst, cert) = match source {
        InstanceSource::Builtin(name) => {
            let f = builtin_instance(name)
                .ok_or_else(|| Error::Config(format!("no built-in instance named {name:?}")))?;
            let cert = f.certificate().cloned();
            (f.instance, cert)
        }
        InstanceSource::File(path) => (load_instance(path)?, None),
    };
    let cert = certificate.map(|c| TraversalCertificate::new(c.to_vec())).or(cert);
    Ok((inst, cert))
}

pub fn check_desk_scale(inst: &GsconInstance) -> Result<()> {
    if inst.n > MAX_QUBITS || inst.m > MAX_STEPS || inst.g() > MAX_GATES {
        return Err(Error::DeskScale(format!(
            "n = {}, m = {}, G = {} (limits n <= {MAX_QUBITS}, m <= {MAX_STEPS}, G <= {MAX_GATES})",
            inst.n,
            inst.m,
            inst.g()
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub name: String,
    /// 60 significant digits.
    pub exact: String,
    pub approx: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactRow {
    /// `"1"` to `"8"`, or `"ROUND"`.
    pub test: String,
    pub name: String,
    pub accept: f64,
    pub reject: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledRow {
    pub test: String,
    pub name: String,
    pub trials: u64,
    pub accepts: u64,
    pub rate: f64,
    /// `sqrt(rate (1 - rate) / trials)`; absent for a single trial.
    pub sigma: Option<f64>,
    /// Exact acceptance, when it was also computed.
    pub exact: Option<f64>,
    /// `|rate - exact| / sqrt(exact (1 - exact) / trials)`.
    pub deviation_sigmas: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub exact_ms: f64,
    pub sampled_ms: f64,
    pub lemmas_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub mode: RunMode,
    pub trials: u64,
    pub seed: u64,
    pub adversaries: Vec<AdversarySpec>,
    pub deviations: Vec<Deviation>,
    pub ledger: Vec<LedgerEntry>,
    pub exact: Vec<ExactRow>,
    pub sampled: Vec<SampledRow>,
    pub lemmas: Vec<LemmaRow>,
    pub timings: Option<Timings>,
}

pub fn ledger_entries(l: &ParameterLedger) -> Vec<LedgerEntry> {
    let mut out = Vec::new();
    let mut push = |name: String, v: &crate::instance::Real| {
        out.push(LedgerEntry { name, exact: crate::exact::to_sci_string(v.exact(), 60), approx: v.value() });
    };
    push("h".into(), &l.h);
    push("mu".into(), &l.mu);
    push("t".into(), &l.t);
    push("z".into(), &l.z);
    push("c".into(), &l.c);
    push("x".into(), &l.x);
    push("delta".into(), &l.delta_small);
    for (i, th) in l.r.iter().enumerate() {
        push(format!("r{}", i + 1), &th.value);
    }
    for (i, p) in l.p.iter().enumerate() {
        push(format!("p{}", i + 1), p);
    }
    push("s_prime".into(), &l.s_prime);
    push("one_minus_s_prime".into(), &l.one_minus_s_prime);
    push("c_prime_lower".into(), &l.c_prime_lower);
    push("one_minus_c_prime_lower".into(), &l.one_minus_c_prime_lower);
    push("gamma_lower".into(), &l.gamma_lower);
    push("gap_lower".into(), &l.gap_lower);
    push("gap".into(), &l.gap);
    out
}

fn row_names() -> impl Iterator<Item = (String, &'static str)> {
    (1..=8).map(|i| (i.to_string(), TEST_NAMES[i - 1])).chain(std::iter::once(("ROUND".to_string(), "round")))
}

/// Number of accepting trials among `0..trials` on channel `channel`.
pub fn tally(tree: &BranchTree, seed: u64, channel: u16, trials: u64) -> u64 {
    let one = |k: u64| tree.sample(&mut trial_rng(seed, channel, k));
    count_trials(trials, one)
}

pub fn tally_rounds(protocol: &Protocol, seed: u64, trials: u64) -> u64 {
    count_trials(trials, |k| protocol.sample(&mut trial_rng(seed, ROUND_CHANNEL, k)).1)
}

#[cfg(feature = "parallel")]
fn count_trials(trials: u64, one: impl Fn(u64) -> bool + Sync) -> u64 {
    use rayon::prelude::*;
    (0..trials).into_par_iter().filter(|&k| one(k)).count() as u64
}

#[cfg(not(feature = "parallel"))]
fn count_trials(trials: u64, one: impl Fn(u64) -> bool + Sync) -> u64 {
    (0..trials).filter(|&k| one(k)).count() as u64
}

/// Sequential tally, whatever the feature set.
pub fn tally_sequential(tree: &BranchTree, seed: u64, channel: u16, trials: u64) -> u64 {
    (0..trials).filter(|&k| tree.sample(&mut trial_rng(seed, channel, k))).count() as u64
}

fn sampled_row(test: String, name: &str, trials: u64, accepts: u64, exact: Option<f64>) -> SampledRow {
    let n = trials as f64;
    let rate = accepts as f64 / n;
    let sigma = (trials > 1).then(|| (rate * (1.0 - rate) / n).sqrt());
    let deviation_sigmas = exact.map(|p| {
        let s = (p * (1.0 - p) / n).sqrt();
        let d = (rate - p).abs();
        if s > 0.0 {
            d / s
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    });
    SampledRow { test, name: name.into(), trials, accepts, rate, sigma, exact, deviation_sigmas }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    #[cfg(feature = "parallel")]
    if let Some(k) = threads {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        return Ok(pool.install(f));
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(f())
}

pub fn run_monte_carlo(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let (inst, cert) = load_source(&cfg.source, cfg.certificate.as_deref())?;
    check_desk_scale(&inst)?;
    let ledger = derive_parameters(&inst)?;
    let forged = forge_composite(&inst, cert.as_ref(), &cfg.adversaries)?;
    let protocol = Protocol::new(&inst, &ledger, &forged.tuple)?;

    let start = Instant::now();
    let mut exact = Vec::new();
    if cfg.mode.exact() {
        for (i, (test, name)) in row_names().enumerate() {
            let (accept, reject) = if i < 8 {
                let t = protocol.tree(i + 1);
                (t.accept_probability(), t.reject_probability())
            } else {
                (protocol.exact_accept(), crate::exact::to_f64(&protocol.exact_reject()))
            };
            exact.push(ExactRow { test, name: name.into(), accept, reject });
        }
    }
    let exact_ms = start.elapsed().as_secs_f64() * 1e3;

    let start = Instant::now();
    let mut sampled = Vec::new();
    if cfg.mode.sampled() {
        let counts = with_threads(cfg.threads, || {
            let mut counts: Vec<u64> =
                (1..=8).map(|i| tally(protocol.tree(i), cfg.seed, i as u16, cfg.trials)).collect();
            counts.push(tally_rounds(&protocol, cfg.seed, cfg.trials));
            counts
        })?;
        for (i, ((test, name), accepts)) in row_names().zip(counts).enumerate() {
            let reference = cfg.mode.exact().then(|| if i < 8 { protocol.tree(i + 1).accept_probability() } else { protocol.exact_accept() });
            sampled.push(sampled_row(test, name, cfg.trials, accepts, reference));
        }
    }
    let sampled_ms = start.elapsed().as_secs_f64() * 1e3;

    Ok(RunReport {
        instance: inst.name.clone(),
        mode: cfg.mode,
        trials: cfg.trials,
        seed: cfg.seed,
        adversaries: cfg.adversaries.clone(),
        deviations: forged.deviations,
        ledger: ledger_entries(&ledger),
        exact,
        sampled,
        lemmas: Vec::new(),
        timings: cfg.timings.then_some(Timings { exact_ms, sampled_ms, lemmas_ms: 0.0 }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::AdversaryKind;

    fn cfg(name: &str) -> ExperimentConfig {
        ExperimentConfig { trials: 2000, seed: 42, ..ExperimentConfig::new(InstanceSource::Builtin(name.into())) }
    }

    #[test]
    fn same_seed_gives_identical_reports() {
        let mut c = cfg("blockade-3q");
        c.adversaries = vec![AdversarySpec::new(AdversaryKind::WrongEnd, 0.5)];
        let a = run_monte_carlo(&c).unwrap();
        c.threads = Some(3);
        let b = run_monte_carlo(&c).unwrap();
        assert_eq!(render_report(&a, ReportFormat::Json), render_report(&b, ReportFormat::Json));
        assert_eq!(a.sampled.len(), 9);
        for row in &a.sampled {
            assert!(row.deviation_sigmas.unwrap() <= 4.0, "{row:?}");
        }
    }

    #[test]
    fn parallel_and_sequential_tallies_match() {
        let c = cfg("superposed-2q");
        let (inst, cert) = load_source(&c.source, None).unwrap();
        let spec = AdversarySpec::new(AdversaryKind::SmearedGate, 0.4);
        let t = crate::witness::forge_adversary(&inst, cert.as_ref(), &spec).unwrap().tuple;
        let tree = crate::verifier::compile_test(2, &inst, &t).unwrap();
        assert_eq!(tally(&tree, 9, 2, 5000), tally_sequential(&tree, 9, 2, 5000));
    }

    #[test]
    fn single_trial_has_no_sigma() {
        let mut c = cfg("trivial-1q");
        c.trials = 1;
        c.mode = RunMode::Sampled;
        let r = run_monte_carlo(&c).unwrap();
        assert!(r.exact.is_empty());
        assert!(r.sampled.iter().all(|s| s.sigma.is_none() && s.trials == 1));
    }

    #[test]
    fn config_errors() {
        let mut c = cfg("trivial-1q");
        c.trials = 0;
        c.mode = RunMode::Sampled;
        assert!(matches!(run_monte_carlo(&c), Err(Error::Config(_))));
        assert!(matches!(run_monte_carlo(&cfg("nope")), Err(Error::Config(_))));
        let mut big = builtin_instance("blockade-4q").unwrap().instance;
        big.m = 5;
        assert!(matches!(check_desk_scale(&big), Err(Error::DeskScale(_))));
    }
}
