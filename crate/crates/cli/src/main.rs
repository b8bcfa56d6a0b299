//! `qdistill`: stabilizer enumeration, distillation runs, parameter sweeps
//! and verification suites.
//!
//! Exit codes: 0 success, 1 the protocol could not reach the target or a
//! verification check failed, 2 usage or input error.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use qudit_distill::protocol::{distill, DistillOptions, NonBdsMode};
use qudit_distill::states::{isotropic, offline, random_pure, State};
use qudit_distill::sweep::{grid, parameter_sweep, random_sweep, Family, RandomSweepConfig, SweepRow};
use qudit_distill::verify::{run_suite, Suite, VerifyConfig};
use qudit_distill::{enumerate_stabilizers, Prime};

#[derive(Parser)]
#[command(name = "qdistill", version, about = "Stabilizer-based entanglement distillation for qudits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct RunArgs {
    /// Target fidelity with the maximally entangled state.
    #[arg(long, default_value_t = 0.999)]
    target: f64,
    /// Iteration cap; runs that hit it count as failures.
    #[arg(long = "max-iter", default_value_t = 200)]
    max_iter: usize,
    /// How non-Bell-diagonal inputs are handled: diag or twirl.
    #[arg(long, default_value_t = NonBdsMode::Twirl)]
    nonbds: NonBdsMode,
}

impl RunArgs {
    fn options(&self) -> Result<DistillOptions> {
        if !(self.target > 0.0 && self.target < 1.0) {
            bail!("--target must lie strictly between 0 and 1");
        }
        if self.max_iter == 0 {
            bail!("--max-iter must be at least 1");
        }
        Ok(DistillOptions { target: self.target, max_iterations: self.max_iter, nonbds: self.nonbds })
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the canonical generator of every two-copy stabilizer as CSV.
    Enumerate {
        #[arg(long)]
        d: u32,
    },
    /// Run FIMAX on a state file and print the run as JSON.
    Distill {
        #[arg(long)]
        state: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a state family and write one CSV row per state.
    Sweep {
        /// isotropic, offline or random.
        #[arg(long)]
        family: Family,
        #[arg(long)]
        d: u32,
        #[arg(long = "p-from", default_value_t = 0.0)]
        p_from: f64,
        #[arg(long = "p-to", default_value_t = 1.0)]
        p_to: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
        /// Random family: samples per fidelity bin.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Random family: number of 0.01-wide bins starting at fidelity 0.
        #[arg(long)]
        bins: Option<usize>,
        /// Random family: cap on candidate draws.
        #[arg(long = "max-draws", default_value_t = 10_000_000)]
        max_draws: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a numerical invariant suite.
    Verify {
        /// algebra, encodings, oracle or maximality.
        #[arg(long)]
        suite: Suite,
        /// Comma-separated list of dimensions.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        d: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a state file for one member of a family.
    State {
        /// isotropic, offline or random (Haar-random pure state).
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 3)]
        d: u32,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn prime(d: u32) -> Result<Prime> {
    Ok(Prime::new(d)?)
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Enumerate { d } => enumerate(prime(d)?),
        Command::Distill { state, run, out } => distill_file(&state, &run.options()?, out.as_deref()),
        Command::Sweep { family, d, p_from, p_to, step, samples, bins, max_draws, seed, run, out } => {
            let d = prime(d)?;
            let opts = run.options()?;
            let rows = if family == Family::Random {
                let cfg = RandomSweepConfig {
                    d,
                    samples_per_bin: samples,
                    bins: bins.unwrap_or_else(|| RandomSweepConfig::default_bins(d)),
                    seed,
                    options: opts,
                    max_draws,
                };
                let result = random_sweep(&cfg)?;
                if !result.underfilled.is_empty() {
                    eprintln!(
                        "warning: {} bins below {} samples after {} draws: {:?}",
                        result.underfilled.len(),
                        samples,
                        result.draws,
                        result.underfilled
                    );
                }
                result.rows
            } else {
                parameter_sweep(family, d, &grid(p_from, p_to, step)?, &opts)?
            };
            write_csv(&rows, family == Family::Random, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, d, seed } => {
            let cfg = VerifyConfig { seed, ..Default::default() };
            let mut all_passed = true;
            for d in d {
                let report = run_suite(suite, prime(d)?, &cfg)?;
                print!("{report}");
                all_passed &= report.passed();
            }
            println!("{}", if all_passed { "PASS" } else { "FAIL" });
            Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::State { family, d, p, seed, out } => {
            let d = prime(d)?;
            let state = match family {
                Family::Isotropic => State::Bds(isotropic(d, p)?),
                Family::Offline if d.get() == 3 => State::Bds(offline(p)?),
                Family::Offline => bail!("the offline family is defined for d = 3"),
                Family::Random => State::Dense(random_pure(d, seed)),
            };
            emit(&(state.to_json() + "\n"), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn enumerate(d: Prime) -> Result<ExitCode> {
    let stabs = enumerate_stabilizers(d);
    let mut text = String::from("index,k1,k2,l1,l2\n");
    for (i, s) in stabs.iter().enumerate() {
        let c = s.generator().coords();
        text.push_str(&format!("{i},{},{},{},{}\n", c[0], c[1], c[2], c[3]));
    }
    emit(&text, None)?;
    eprintln!("total: {}", stabs.len());
    Ok(ExitCode::SUCCESS)
}

fn distill_file(path: &Path, opts: &DistillOptions, out: Option<&Path>) -> Result<ExitCode> {
    let state = State::read(path).with_context(|| format!("reading {}", path.display()))?;
    let run = distill(&state, opts)?;
    emit(&(run.to_json() + "\n"), out)?;
    Ok(if run.reached_target { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn write_csv(rows: &[SweepRow], random: bool, out: Option<&Path>) -> Result<()> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path).with_context(|| format!("writing {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    let mut header = vec!["family", "d", "parameter", "input_fidelity", "reached", "n_iterations", "efficiency"];
    if random {
        header.extend(["seed", "bin", "bin_mean_efficiency", "bin_std_error"]);
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.family.to_string(),
            r.d.to_string(),
            r.parameter.to_string(),
            r.input_fidelity.to_string(),
            r.reached.to_string(),
            r.n_iterations.to_string(),
            r.efficiency.to_string(),
        ];
        if let Some(x) = &r.random {
            rec.extend([
                x.seed.to_string(),
                x.bin.to_string(),
                x.bin_mean_efficiency.to_string(),
                x.bin_std_error.to_string(),
            ]);
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
