//! `had` — dimensions of Hadamard products of projective varieties by
//! randomized exact arithmetic.
//!
//! Exit codes: 0 when the computed verdict is the expected-dimension one
//! (MATCH, counts hold, twists all succeed), 1 when it is DEFECT or EMPTY
//! (or an `--expect` mismatch), 2 on usage and input errors.

mod report;
mod table;

use clap::{Parser, Subcommand, ValueEnum};
use had_core::counts::i4_parameter_counts;
use had_core::field::is_prime_u64;
use had_core::hadamard::Verdict;
use had_core::runner::{self, RunOptions};
use had_core::variety::SpecKind;
use had_core::{catalogue, TwistMode, VarietySpec};
use report::{CatalogueEntry, InputRef, InputSource, Report, ResultBody, SCHEMA_ID};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "had", version, about = "Hadamard products of projective varieties: exact randomized dimension computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Root seed; every random choice, including prime selection, derives
    /// from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Bit size of the working prime.
    #[arg(long, global = true, default_value_t = 62, value_parser = clap::value_parser!(u32).range(3..=62))]
    prime_bits: u32,

    /// Independent sampling trials per dimension computation.
    #[arg(long, global = true, default_value_t = 8)]
    trials: usize,

    /// Write the machine-readable report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Enumeration prime for the point-count oracle.
    #[arg(long, global = true, default_value_t = 101)]
    q: u64,

    /// Worker threads for independent trials (results do not depend on it).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    FixLast,
    TwistAll,
    None,
}

impl From<ModeArg> for TwistMode {
    fn from(m: ModeArg) -> TwistMode {
        match m {
            ModeArg::FixLast => TwistMode::FixLast,
            ModeArg::TwistAll => TwistMode::TwistAll,
            ModeArg::None => TwistMode::None,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpectArg {
    Found,
    None,
}

#[derive(Subcommand)]
enum Command {
    /// Observed vs expected dimension of X * Y
    Dim { x: String, y: String },
    /// Observed vs expected dimension of a product of several varieties
    Multi {
        #[arg(required = true)]
        inputs: Vec<String>,
    },
    /// Re-measure the product dimension under fresh random coordinate
    /// changes of the chosen factors, one draw per trial
    Twist {
        #[arg(required = true)]
        inputs: Vec<String>,
        #[arg(long, value_enum, default_value = "twist-all")]
        mode: ModeArg,
    },
    /// Dimension of the k-fold product of Y with itself
    Power {
        y: String,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Search for a binomial hypersurface containing Y, up to a degree bound
    Binomial {
        y: String,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
        /// Samples per degree level (default: 2 + log2 of the pair count,
        /// capped at 64)
        #[arg(long)]
        samples: Option<usize>,
        /// Exit 1 unless the outcome matches
        #[arg(long, value_enum)]
        expect: Option<ExpectArg>,
    },
    /// Parameter counts for degree-d product surfaces in P^3
    Counts {
        #[arg(long, value_parser = clap::value_parser!(u32).range(4..))]
        d: u32,
        /// Also check every degree up to this one
        #[arg(long)]
        to: Option<u32>,
    },
    /// Sample one generic point
    Sample { x: String },
    /// Count points of the product of the inputs over F_q and estimate its
    /// dimension
    Oracle {
        #[arg(required = true)]
        inputs: Vec<String>,
        /// Repeat the whole product this many times
        #[arg(long, default_value_t = 1)]
        power: usize,
    },
    /// List the shipped variety catalogue
    Catalogue,
}

struct Input {
    reference: InputRef,
    spec: VarietySpec,
}

fn resolve_input(arg: &str) -> Result<Input, String> {
    if let Some(name) = arg.strip_prefix("catalogue:") {
        let spec = catalogue::spec(name).map_err(|e| e.to_string())?;
        return Ok(Input {
            reference: InputRef {
                given: arg.to_string(),
                source: InputSource::Catalogue,
                name: spec.name.clone(),
            },
            spec,
        });
    }
    let text = std::fs::read_to_string(arg)
        .map_err(|e| format!("cannot read variety file `{arg}`: {e}"))?;
    let spec = VarietySpec::parse(&text).map_err(|e| format!("{arg}: {e}"))?;
    Ok(Input {
        reference: InputRef {
            given: arg.to_string(),
            source: InputSource::File,
            name: spec.name.clone(),
        },
        spec,
    })
}

fn resolve_inputs(args: &[String]) -> Result<(Vec<InputRef>, Vec<VarietySpec>), String> {
    let mut refs = Vec::new();
    let mut specs = Vec::new();
    for a in args {
        let input = resolve_input(a)?;
        refs.push(input.reference);
        specs.push(input.spec);
    }
    Ok((refs, specs))
}

fn main() -> ExitCode {
    // die quietly when the consumer of a pipe goes away
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let opts = RunOptions {
        seed: cli.seed,
        prime_bits: cli.prime_bits,
        trials: cli.trials,
        threads: cli.threads.max(1),
        hedge: true,
    };
    let mut report = Report {
        schema: SCHEMA_ID,
        command: "",
        seed: cli.seed,
        prime_bits: cli.prime_bits,
        trials: cli.trials,
        threads: opts.threads,
        prime: None,
        q: None,
        inputs: Vec::new(),
        result: ResultBody::Catalogue { entries: Vec::new() },
    };

    let exit = match &cli.command {
        Command::Dim { x, y } => {
            report.command = "dim";
            let (refs, specs) = resolve_inputs(&[x.clone(), y.clone()])?;
            report.inputs = refs;
            let held: Vec<&VarietySpec> = specs.iter().collect();
            let run = runner::run_multi_dim(&held, &opts).map_err(|e| e.to_string())?;
            report.prime = Some(run.prime);
            table::print_dimension(&report.inputs, &run);
            let code = verdict_code(run.report.verdict);
            report.result = ResultBody::Dimension { run };
            code
        }
        Command::Multi { inputs } => {
            report.command = "multi";
            let (refs, specs) = resolve_inputs(inputs)?;
            report.inputs = refs;
            let held: Vec<&VarietySpec> = specs.iter().collect();
            let run = runner::run_multi_dim(&held, &opts).map_err(|e| e.to_string())?;
            report.prime = Some(run.prime);
            table::print_dimension(&report.inputs, &run);
            let code = verdict_code(run.report.verdict);
            report.result = ResultBody::Dimension { run };
            code
        }
        Command::Power { y, k } => {
            report.command = "power";
            let (refs, specs) = resolve_inputs(std::slice::from_ref(y))?;
            report.inputs = refs;
            let run = runner::run_power(&specs[0], *k, &opts).map_err(|e| e.to_string())?;
            report.prime = Some(run.prime);
            table::print_dimension(&report.inputs, &run);
            let code = verdict_code(run.report.verdict);
            report.result = ResultBody::Dimension { run };
            code
        }
        Command::Twist { inputs, mode } => {
            report.command = "twist";
            let (refs, specs) = resolve_inputs(inputs)?;
            report.inputs = refs;
            let held: Vec<&VarietySpec> = specs.iter().collect();
            let (prime, summary) =
                runner::run_twist(&held, (*mode).into(), &opts).map_err(|e| e.to_string())?;
            report.prime = Some(prime);
            table::print_twist(&report.inputs, prime, &summary);
            let code = if summary.successes == summary.trials {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
            report.result = ResultBody::Twist { summary };
            code
        }
        Command::Binomial { y, max_degree, samples, expect } => {
            report.command = "binomial";
            let (refs, specs) = resolve_inputs(std::slice::from_ref(y))?;
            report.inputs = refs;
            let (prime, scan) = runner::run_binomial(&specs[0], *max_degree, *samples, &opts)
                .map_err(|e| e.to_string())?;
            report.prime = Some(prime);
            table::print_binomial(&report.inputs, prime, &scan);
            let found =
                matches!(scan.outcome, had_core::binomial::BinomialOutcome::Found { .. });
            let code = match expect {
                Some(ExpectArg::Found) if !found => ExitCode::from(1),
                Some(ExpectArg::None) if found => ExitCode::from(1),
                _ => ExitCode::SUCCESS,
            };
            report.result = ResultBody::Binomial { scan };
            code
        }
        Command::Counts { d, to } => {
            report.command = "counts";
            let hi = to.unwrap_or(*d).max(*d);
            let mut reports = Vec::new();
            for deg in *d..=hi {
                reports.push(i4_parameter_counts(deg).map_err(|e| e.to_string())?);
            }
            table::print_counts(&reports);
            let code = if reports.iter().all(|r| r.holds) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
            report.result = ResultBody::Counts { reports };
            code
        }
        Command::Sample { x } => {
            report.command = "sample";
            let (refs, specs) = resolve_inputs(std::slice::from_ref(x))?;
            report.inputs = refs;
            let (prime, point) =
                runner::run_sample(&specs[0], &opts).map_err(|e| e.to_string())?;
            report.prime = Some(prime);
            table::print_sample(&report.inputs, prime, &point);
            report.result = ResultBody::Sample { point };
            ExitCode::SUCCESS
        }
        Command::Oracle { inputs, power } => {
            report.command = "oracle";
            if !is_prime_u64(cli.q) {
                return Err(format!("--q must be prime, got {}", cli.q));
            }
            report.q = Some(cli.q);
            let (refs, specs) = resolve_inputs(inputs)?;
            report.inputs = refs;
            let held: Vec<&VarietySpec> = specs.iter().collect();
            let oracle_report = runner::run_oracle(&held, *power, cli.q, cli.seed)
                .map_err(|e| e.to_string())?;
            table::print_oracle(&report.inputs, *power, &oracle_report);
            report.result = ResultBody::Oracle { report: oracle_report };
            ExitCode::SUCCESS
        }
        Command::Catalogue => {
            report.command = "catalogue";
            let mut entries = Vec::new();
            for name in catalogue::NAMES {
                let spec = catalogue::spec(name).map_err(|e| e.to_string())?;
                let (kind, polys) = match &spec.kind {
                    SpecKind::Param { polys, .. } => ("param", polys.len()),
                    SpecKind::Implicit { polys, .. } => ("implicit", polys.len()),
                };
                entries.push(CatalogueEntry {
                    name: name.to_string(),
                    kind,
                    n: spec.ambient,
                    polys,
                });
            }
            table::print_catalogue(&entries);
            report.result = ResultBody::Catalogue { entries };
            ExitCode::SUCCESS
        }
    };

    if let Some(path) = &cli.json {
        std::fs::write(path, report.to_json_bytes())
            .map_err(|e| format!("cannot write report to `{}`: {e}", path.display()))?;
    }
    Ok(exit)
}

fn verdict_code(v: Verdict) -> ExitCode {
    match v {
        Verdict::Match => ExitCode::SUCCESS,
        Verdict::Defect(_) | Verdict::Empty => ExitCode::from(1),
    }
}
