//! `stochpl`: sampling, envelopes, sup-convolutions, rearrangements and
//! dominance experiments from the command line.

mod config;
mod identity;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use stochpl::dominance::{check_steiner_convexity, run_groemer_experiment, run_pl_experiment, Verdict};
use stochpl::functionals::sup_convolution;
use stochpl::logconcave::{rearrange, LogConcaveFunction};
use stochpl::stochastic::{random_envelope, read_samples_csv, sample_under_graph, write_samples_csv, SampleConfig};

use config::{Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(name = "stochpl", version, about = "Random log-concave envelopes and stochastic dominance experiments")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// RNG seed; overrides the config file for `experiment`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file, or output directory for `experiment`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Draw uniform samples under the graph of a function.
    Sample {
        /// Function spec (JSON).
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        count: usize,
    },
    /// Build the random envelope [f]_N from a sample CSV.
    Envelope {
        #[arg(long)]
        samples: PathBuf,
    },
    /// Sup-convolution of two function specs.
    Supconv {
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        lambda: f64,
    },
    /// Symmetric decreasing rearrangement of a function spec.
    Rearrange {
        #[arg(long)]
        function: PathBuf,
    },
    /// Run an experiment config and write report.json, survival.csv and manifest.json.
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
}

fn read_function(path: &Path) -> Result<LogConcaveFunction> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{}: invalid function spec", path.display()))
}

/// Writes to `--out` if given, stdout otherwise.
fn emit(out: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(p) => {
            let mut file = io::BufWriter::new(fs::File::create(p).with_context(|| format!("creating {}", p.display()))?);
            body(&mut file)?;
            file.flush()?;
        }
        None => body(&mut io::stdout().lock())?,
    }
    Ok(())
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

fn json_only(format: Option<Format>, what: &str) -> Result<()> {
    if format == Some(Format::Csv) {
        bail!("{what} output is JSON only");
    }
    Ok(())
}

#[derive(Serialize)]
struct EnvelopeOutput<'a> {
    function: &'a LogConcaveFunction,
    integral: f64,
    support_measure: f64,
    cells: &'a [stochpl::geometry::EnvelopeCell],
}

#[derive(Serialize)]
struct Manifest<'a> {
    kind: &'a str,
    config: String,
    config_sha256: String,
    report_sha256: String,
    seed: u64,
    version: &'a str,
    threads: usize,
    verdict: Verdict,
    files: Vec<&'a str>,
    timestamp: u64,
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn run_experiment(path: &Path, global: &Global) -> Result<Verdict> {
    let raw = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let mut cfg: ExperimentConfig = serde_json::from_slice(&raw).map_err(|e| {
        anyhow::anyhow!("{}: {e}", path.display())
    })?;
    if let Some(seed) = global.seed {
        cfg.seed = seed;
    }
    cfg.validate().with_context(|| path.display().to_string())?;
    let dir = global.out.clone().or_else(|| cfg.output.clone()).unwrap_or_else(|| PathBuf::from("results"));
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;

    let mut files = vec!["report.json"];
    let (report, verdict, summary) = match &cfg.experiment {
        Experiment::Groemer { f, n, banding } | Experiment::Pl { f, n, banding, .. } => {
            let settings = cfg.settings(banding);
            let report = match &cfg.experiment {
                Experiment::Pl { g, m_samples, lambda, .. } => run_pl_experiment(f, g, *n, *m_samples, *lambda, &settings)?,
                _ => run_groemer_experiment(f, *n, &settings)?,
            };
            let mut csv = Vec::new();
            report.write_survival_csv(&mut csv)?;
            fs::write(dir.join("survival.csv"), csv)?;
            files.push("survival.csv");
            let summary = format!(
                "min margin {:.4}, ε = {:.5}, mean {:.5} vs {:.5}",
                report.min_margin, report.epsilon, report.mean, report.mean_star
            );
            (report.to_json()?, report.verdict, summary)
        }
        Experiment::SteinerConvexity { functional, n, points, trials } => {
            let r = check_steiner_convexity(functional, *n, *points, *trials, cfg.seed)?;
            let verdict = if r.passed() { Verdict::Pass } else { Verdict::Fail };
            let summary = format!(
                "{} evenness and {} convexity failures in {} trials",
                r.evenness_failures, r.convexity_failures, r.trials
            );
            (serde_json::to_string_pretty(&r)?, verdict, summary)
        }
        Experiment::IdentitySuite { functions, s, mc_samples } => {
            let r = identity::run_identity_suite(functions, s, *mc_samples, cfg.seed)?;
            let failed = r.checks.iter().filter(|c| !c.pass).count();
            let summary = format!("{failed} of {} checks failed", r.checks.len());
            (serde_json::to_string_pretty(&r)?, r.verdict, summary)
        }
    };
    let report = report + "\n";
    fs::write(dir.join("report.json"), &report)?;
    files.push("manifest.json");
    let manifest = Manifest {
        kind: cfg.kind(),
        config: path.display().to_string(),
        config_sha256: sha256(&raw),
        report_sha256: sha256(report.as_bytes()),
        seed: cfg.seed,
        version: env!("CARGO_PKG_VERSION"),
        threads: rayon::current_num_threads(),
        verdict,
        files,
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
    };
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    let word = if verdict == Verdict::Pass { "pass" } else { "fail" };
    println!("{}: {word} ({summary}) -> {}", cfg.kind(), dir.display());
    Ok(verdict)
}

fn run(cli: Cli) -> Result<Verdict> {
    let g = &cli.global;
    if let Some(k) = g.threads {
        rayon::ThreadPoolBuilder::new().num_threads(k).build_global().context("configuring thread pool")?;
    }
    let out = g.out.as_deref();
    match cli.command {
        Command::Sample { function, count } => {
            let f = read_function(&function)?;
            let samples = sample_under_graph(&f, &SampleConfig::new(g.seed.unwrap_or(0), count))?;
            emit(out, |w| match g.format.unwrap_or(Format::Csv) {
                Format::Csv => Ok(write_samples_csv(&samples, w)?),
                Format::Json => write_json(w, &samples),
            })?;
        }
        Command::Envelope { samples } => {
            json_only(g.format, "envelope")?;
            let file = fs::File::open(&samples).with_context(|| format!("reading {}", samples.display()))?;
            let samples = read_samples_csv(io::BufReader::new(file))?;
            let f = random_envelope(&samples)?;
            let LogConcaveFunction::Envelope(e) = &f else { unreachable!("random envelopes are polytopal") };
            let integral = f.integral();
            let body = EnvelopeOutput { function: &f, integral, support_measure: e.support_measure(), cells: e.cells() };
            emit(out, |w| write_json(w, &body))?;
            if out.is_some() {
                println!("integral {integral}");
            } else {
                eprintln!("integral {integral}");
            }
        }
        Command::Supconv { f, g: gpath, lambda } => {
            json_only(g.format, "supconv")?;
            let h = sup_convolution(&read_function(&f)?, &read_function(&gpath)?, lambda)?;
            emit(out, |w| write_json(w, &h))?;
        }
        Command::Rearrange { function } => {
            let profile = rearrange(&read_function(&function)?)?;
            emit(out, |w| match g.format.unwrap_or(Format::Csv) {
                Format::Csv => Ok(profile.write_csv(w)?),
                Format::Json => write_json(w, &LogConcaveFunction::Radial(profile.clone())),
            })?;
        }
        Command::Experiment { config } => return run_experiment(&config, g),
    }
    Ok(Verdict::Pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(2),
        Err(e) if e.downcast_ref::<io::Error>().is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
