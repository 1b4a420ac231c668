use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use overlapsc::experiments::{self, ConformanceConfig, ExperimentError, ExperimentRecord};
use overlapsc::format::{dfa_to_dot, epsilon_nfa_to_dot, parse_dfa, render_dfa};
use overlapsc::oracle::enumerate_language;
use overlapsc::overlap::build_overlap_nfa;
use overlapsc::witnesses::WitnessKind;
use overlapsc::{Dfa, Execution};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(
    name = "overlapsc",
    version,
    about = "Overlap assembly of regular languages and its state complexity"
)]
struct Cli {
    /// Run experiment sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    General,
    Unary,
    Binary,
    Alphabet,
    Conformance,
}

#[derive(Subcommand)]
enum Command {
    /// Minimal DFA for the overlap assembly of two automata; prints its state count.
    Overlap {
        left: PathBuf,
        right: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Minimize an automaton; prints its state count.
    Minimize {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Print the state complexity of an automaton.
    Sc { input: PathBuf },
    /// List accepted words up to the horizon, shortest first.
    Enumerate {
        input: PathBuf,
        #[arg(long, default_value_t = 6)]
        horizon: usize,
    },
    /// Generate a witness automaton, e.g. `witness general-left 3 4`.
    Witness {
        kind: String,
        params: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutputFormat,
    },
    /// Run an experiment suite and write its CSV.
    Experiment {
        #[arg(value_enum)]
        suite: Suite,
        /// Left state complexities, `A..B` inclusive or a single value.
        #[arg(long, value_parser = parse_range)]
        m: Option<RangeInclusive<usize>>,
        /// Right state complexities, `A..B` inclusive or a single value.
        #[arg(long, value_parser = parse_range)]
        n: Option<RangeInclusive<usize>>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        horizon: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Conformance: largest operand size.
        #[arg(long, default_value_t = 4)]
        max_states: usize,
        /// Conformance: alphabet sizes to draw from.
        #[arg(long, value_parser = parse_range, default_value = "2..3")]
        alphabet: RangeInclusive<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graphviz description of an automaton, or with `--overlap-nfa` of the
    /// overlap ε-NFA of both automata.
    ExportDot {
        input: PathBuf,
        #[arg(long, value_name = "RIGHT")]
        overlap_nfa: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected `A..B` or a single number, got `{s}`");
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(format!("empty range `{s}`"));
    }
    Ok(lo..=hi)
}

fn read_dfa(path: &Path) -> Result<Dfa> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_dfa(&text).with_context(|| format!("{}", path.display()))
}

fn render(dfa: &Dfa, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => render_dfa(dfa),
        OutputFormat::Dot => dfa_to_dot(dfa),
    }
}

fn write_out(out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
        }
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn finish_records(
    result: Result<Vec<ExperimentRecord>, ExperimentError>,
    out: Option<&Path>,
) -> Result<()> {
    let records = result?;
    write_out(out, &experiments::render_csv(&records))?;
    if out.is_some() {
        println!("{} records", records.len());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Overlap {
            left,
            right,
            out,
            format,
        } => {
            let (left, right) = (read_dfa(&left)?, read_dfa(&right)?);
            let result = overlapsc::overlap_dfa(&left, &right)?;
            if let Some(path) = &out {
                write_out(Some(path), &render(&result, format))?;
            }
            println!("{}", result.state_count());
        }
        Command::Minimize { input, out, format } => {
            let result = read_dfa(&input)?.minimize();
            if let Some(path) = &out {
                write_out(Some(path), &render(&result, format))?;
            }
            println!("{}", result.state_count());
        }
        Command::Sc { input } => println!("{}", read_dfa(&input)?.state_complexity()),
        Command::Enumerate { input, horizon } => {
            for w in enumerate_language(&read_dfa(&input)?, horizon).words {
                println!("{w}");
            }
        }
        Command::Witness {
            kind,
            params,
            out,
            format,
        } => {
            let kind: WitnessKind = kind.parse()?;
            let dfa = kind.with_params(&params)?.build()?;
            write_out(out.as_deref(), &render(&dfa, format))?;
        }
        Command::Experiment {
            suite,
            m,
            n,
            seed,
            horizon,
            trials,
            max_states,
            alphabet,
            out,
        } => {
            match suite {
                Suite::General => finish_records(
                    experiments::run_general_grid(m.unwrap_or(2..=4), n.unwrap_or(3..=4), exec),
                    out.as_deref(),
                )?,
                Suite::Unary => finish_records(
                    experiments::run_unary_grid(m.unwrap_or(1..=6), n.unwrap_or(1..=6), exec),
                    out.as_deref(),
                )?,
                Suite::Binary => finish_records(
                    experiments::run_binary_grid(m.unwrap_or(2..=3), n.unwrap_or(3..=5), exec),
                    out.as_deref(),
                )?,
                Suite::Alphabet => {
                    if m.is_some() || n.is_some() {
                        bail!("the alphabet sweep is fixed at m = 2, n = 3");
                    }
                    let check = experiments::exhaustive_alphabet_check(exec)?;
                    let record = check.record()?;
                    if let Some(path) = &out {
                        write_out(Some(path), &experiments::render_csv(&[record]))?;
                    }
                    println!(
                    "max {} over {} pairs with exact operands ({} enumerated); general bound {}",
                    check.max_state_complexity, check.pairs_measured, check.pairs_total, check.general_bound
                );
                }
                Suite::Conformance => {
                    if out.is_some() {
                        bail!("the conformance suite produces a summary, not CSV records");
                    }
                    if m.is_some() || n.is_some() {
                        bail!("the conformance suite takes --max-states and --alphabet instead of --m and --n");
                    }
                    let config = ConformanceConfig {
                        trials,
                        max_states,
                        alphabet,
                        horizon,
                        seed,
                    };
                    let summary = experiments::random_conformance(&config, exec)?;
                    println!(
                    "{} trials, {} failures, {} words compared, {} subsets decomposed, {} ceiling checks",
                    summary.trials,
                    summary.failures.len(),
                    summary.words_compared,
                    summary.subsets_decomposed,
                    summary.ceiling_checks
                );
                    if let Some(first) = summary.failures.first() {
                        bail!("{} failing trials, first:\n{first}", summary.failures.len());
                    }
                }
            }
        }
        Command::ExportDot {
            input,
            overlap_nfa,
            out,
        } => {
            let left = read_dfa(&input)?;
            let dot = match overlap_nfa {
                Some(right) => epsilon_nfa_to_dot(&build_overlap_nfa(&left, &read_dfa(&right)?)?),
                None => dfa_to_dot(&left),
            };
            write_out(out.as_deref(), &dot)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
