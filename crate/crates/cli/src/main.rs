use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use orthlab_core::scenario::generate::split_factor_list;
use orthlab_core::scenario::{generate, golden, run_verifications, GenerateParams, Scenario, VerificationReport};
use orthlab_core::verdict::Status;
use orthlab_core::Error;

#[derive(Parser)]
#[command(name = "orthlab", version, about = "Verify orthogonal Λ-module scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run the requested checks of a scenario file.
    Verify {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a random scenario with the given invariants.
    Generate {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        r_plus: u32,
        #[arg(long)]
        r_minus: u32,
        /// Comma-separated factors of B, e.g. "T^2" or "T^2, T".
        #[arg(long, default_value = "")]
        anti_torsion: String,
        #[arg(long, allow_negative_numbers = true)]
        sign: Option<i8>,
        #[arg(long, default_value_t = 5)]
        prime: u64,
        #[arg(long, default_value_t = 8)]
        coeff_prec: u32,
        #[arg(long, default_value_t = 12)]
        degree_cap: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a built-in scenario.
    Demo {
        #[arg(long, default_value = "rank3-worked")]
        example: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the scenario file.
        #[arg(long)]
        emit_scenario: Option<PathBuf>,
    },
    /// Generate and verify a range of seeds.
    Batch {
        /// `N0..N1` (exclusive) or `N0..=N1`.
        #[arg(long)]
        seeds: String,
        /// JSON generation parameters.
        #[arg(long)]
        params: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit(report: &VerificationReport, format: Format, out: Option<&Path>) -> ExitCode {
    let text = match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    if let Err(e) = write_output(out, &text) {
        return fail(e);
    }
    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn parse_seeds(text: &str) -> Result<std::ops::Range<u64>, String> {
    let bad = || format!("expected N0..N1 or N0..=N1, got {text:?}");
    let (a, b, inclusive) = if let Some((a, b)) = text.split_once("..=") {
        (a, b, true)
    } else {
        let (a, b) = text.split_once("..").ok_or_else(bad)?;
        (a, b, false)
    };
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    let end = if inclusive { b + 1 } else { b };
    if end <= a {
        return Err(format!("empty seed range {text:?}"));
    }
    Ok(a..end)
}

#[derive(Serialize, Default, Clone, Copy)]
struct Tally {
    pass: usize,
    fail: usize,
    skipped: usize,
}

#[derive(Serialize)]
struct BatchSummary {
    seeds: String,
    params: GenerateParams,
    scenarios: usize,
    generation_errors: Vec<(u64, String)>,
    checks: Vec<(String, Tally)>,
    failing_seeds: Vec<u64>,
    flags: Vec<(String, usize)>,
}

fn batch(seeds: &str, params: &Path, format: Format, out: Option<&Path>) -> ExitCode {
    let range = match parse_seeds(seeds) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let text = match fs::read_to_string(params) {
        Ok(t) => t,
        Err(e) => return fail(format!("cannot read {}: {e}", params.display())),
    };
    let params: GenerateParams = match serde_json::from_str(&text) {
        Ok(p) => p,
        Err(e) => return fail(format!("{}: line {}, column {}: {e}", params.display(), e.line(), e.column())),
    };
    let results: Vec<(u64, Result<VerificationReport, Error>)> = range
        .clone()
        .into_par_iter()
        .map(|seed| (seed, generate(&params, seed).map(|s| run_verifications(&s))))
        .collect();

    let mut checks: Vec<(String, Tally)> = Vec::new();
    let mut flags: Vec<(String, usize)> = Vec::new();
    let mut generation_errors = Vec::new();
    let mut failing_seeds = Vec::new();
    for (seed, r) in &results {
        let rep = match r {
            Ok(rep) => rep,
            Err(e) => {
                generation_errors.push((*seed, e.to_string()));
                continue;
            }
        };
        if !rep.all_passed() {
            failing_seeds.push(*seed);
        }
        for c in &rep.checks {
            let idx = match checks.iter().position(|(n, _)| *n == c.name) {
                Some(i) => i,
                None => {
                    checks.push((c.name.clone(), Tally::default()));
                    checks.len() - 1
                }
            };
            let t = &mut checks[idx].1;
            match c.status {
                Status::Pass => t.pass += 1,
                Status::Fail => t.fail += 1,
                Status::Skipped => t.skipped += 1,
            }
        }
        for f in &rep.flags {
            match flags.iter_mut().find(|(n, _)| n == f) {
                Some((_, k)) => *k += 1,
                None => flags.push((f.clone(), 1)),
            }
        }
    }
    let ok = generation_errors.is_empty() && failing_seeds.is_empty();
    let summary = BatchSummary {
        seeds: seeds.to_string(),
        params,
        scenarios: results.len(),
        generation_errors,
        checks,
        failing_seeds,
        flags,
    };
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&summary).expect("summary serialises") + "\n",
        Format::Text => {
            let mut s = format!("{} scenarios from seeds {}\n", summary.scenarios, summary.seeds);
            for (name, t) in &summary.checks {
                s += &format!("{name:<30} pass {:>5} fail {:>5} skipped {:>5}\n", t.pass, t.fail, t.skipped);
            }
            for (seed, e) in &summary.generation_errors {
                s += &format!("seed {seed}: {e}\n");
            }
            for (f, k) in &summary.flags {
                s += &format!("flag x{k}: {f}\n");
            }
            s
        }
    };
    if let Err(e) = write_output(out, &text) {
        return fail(e);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { scenario, format, out } => {
            let text = match fs::read_to_string(&scenario) {
                Ok(t) => t,
                Err(e) => return fail(format!("cannot read {}: {e}", scenario.display())),
            };
            match Scenario::from_json(&text) {
                Ok(s) => emit(&run_verifications(&s), format, out.as_deref()),
                Err(e) => fail(format!("{}: {e}", scenario.display())),
            }
        }
        Command::Generate {
            rank,
            r_plus,
            r_minus,
            anti_torsion,
            sign,
            prime,
            coeff_prec,
            degree_cap,
            seed,
            out,
        } => {
            let params = GenerateParams {
                rank,
                r_plus,
                r_minus,
                anti_torsion: split_factor_list(&anti_torsion),
                sign,
                prime,
                coeff_prec,
                degree_cap,
                randomize_basis: true,
            };
            match generate(&params, seed) {
                Ok(s) => match write_output(out.as_deref(), &(s.to_json() + "\n")) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => fail(e),
                },
                Err(e) => fail(e),
            }
        }
        Command::Demo {
            example,
            format,
            out,
            emit_scenario,
        } => {
            let s = match golden::by_name(&example) {
                Some(Ok(s)) => s,
                Some(Err(e)) => return fail(e),
                None => return fail(format!("unknown example {example:?}; known: {}", golden::EXAMPLES.join(", "))),
            };
            if let Some(p) = emit_scenario {
                if let Err(e) = write_output(Some(&p), &(s.to_json() + "\n")) {
                    return fail(e);
                }
            }
            emit(&run_verifications(&s), format, out.as_deref())
        }
        Command::Batch {
            seeds,
            params,
            format,
            out,
        } => batch(&seeds, &params, format, out.as_deref()),
    }
}
