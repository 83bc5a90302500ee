use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use besynth::bench::{run_bench, to_json, write_csv, BenchAlg, BenchConfig, CounterGameSpec};
use besynth::besteffort::{synth_with, Algorithm, Problem, SynthOptions, Verdict};
use besynth::dfa::translate;
use besynth::ltlf::{parse, Partition};
use besynth::runtime::{transducer_dot, validate_with, ValidationBounds};
use clap::{Args, Parser, Subcommand};

const EXIT_USAGE: u8 = 1;
const EXIT_LIMIT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

/// Best-effort synthesis for LTLf goals under environment specifications.
#[derive(Parser, Debug)]
#[command(name = "besynth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize a best-effort strategy.
    Synth(SynthArgs),
    /// Run benchmark families.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Check by enumeration that the synthesized strategy is not dominated.
    Validate(ValidateArgs),
    /// Translate a formula and write its minimal automaton.
    Dfa(DfaArgs),
}

#[derive(Args, Debug)]
struct ProblemFiles {
    /// File holding the environment specification.
    #[arg(long)]
    env: PathBuf,
    /// File holding the goal formula.
    #[arg(long)]
    goal: PathBuf,
    /// Partition file with `.inputs:` and `.outputs:` lines.
    #[arg(long)]
    part: PathBuf,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[command(flatten)]
    files: ProblemFiles,
    #[arg(long, default_value = "3")]
    alg: Algorithm,
    /// Write the strategy as a Graphviz transducer.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the run summary as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Give up after this many seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum BenchCommand {
    /// The counter-game grid.
    Counter(CounterArgs),
}

#[derive(Args, Debug)]
struct CounterArgs {
    #[arg(long)]
    n_max: usize,
    #[arg(long)]
    k_max: usize,
    /// Comma-separated list drawn from 1, 2, 3 and `reactive`.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    algs: Vec<BenchAlg>,
    /// Per-instance budget in seconds.
    #[arg(long, default_value_t = 1000.0)]
    timeout: f64,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    /// Instances run at once.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[command(flatten)]
    files: ProblemFiles,
    #[arg(long, default_value = "3")]
    alg: Algorithm,
    #[arg(long, default_value_t = ValidationBounds::default().max_states)]
    max_states: usize,
    #[arg(long, default_value_t = ValidationBounds::default().max_env_props)]
    max_env_props: usize,
}

#[derive(Args, Debug)]
struct DfaArgs {
    #[arg(long)]
    formula: PathBuf,
    #[arg(long)]
    part: PathBuf,
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write the line-based text format.
    #[arg(long)]
    text: Option<PathBuf>,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn load_problem(files: &ProblemFiles) -> anyhow::Result<Problem> {
    let part = Partition::parse(&read(&files.part)?)?;
    let env = read(&files.env)?;
    let goal = read(&files.goal)?;
    Ok(Problem::parse(env.trim(), goal.trim(), part)?)
}

fn seconds(s: f64) -> anyhow::Result<Duration> {
    Duration::try_from_secs_f64(s).map_err(|_| anyhow::anyhow!("invalid timeout {s}"))
}

fn verdict_line(v: Verdict) -> &'static str {
    match v {
        Verdict::Realizable => "REALIZABLE",
        Verdict::BestEffortOnly => "BEST_EFFORT_ONLY",
    }
}

fn run_synth(args: &SynthArgs) -> anyhow::Result<()> {
    let problem = load_problem(&args.files)?;
    let opts = match args.timeout {
        Some(t) => SynthOptions::with_timeout(seconds(t)?),
        None => SynthOptions::default(),
    };
    let strategy = synth_with(&problem, args.alg, &opts)?;
    for w in &strategy.warnings {
        eprintln!("warning: {w}");
    }
    let json = serde_json::to_string(&strategy.record())?;
    println!("{}", verdict_line(strategy.verdict));
    println!("{json}");
    if let Some(path) = &args.json {
        write(path, &format!("{json}\n"))?;
    }
    if let Some(path) = &args.dot {
        write(path, &transducer_dot(&strategy))?;
    }
    Ok(())
}

fn run_counter(args: &CounterArgs) -> anyhow::Result<()> {
    let grid = CounterGameSpec::grid(args.n_max, args.k_max)?;
    let config = BenchConfig { algorithms: args.algs.clone(), timeout: seconds(args.timeout)?, jobs: args.jobs };
    let records = run_bench(&grid, &config);
    match &args.csv {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
            write_csv(file, &records)?;
        }
        None => write_csv(std::io::stdout().lock(), &records)?,
    }
    if let Some(path) = &args.json {
        write(path, &to_json(&records))?;
    }
    let timeouts = records.iter().filter(|r| r.timeout).count();
    eprintln!("{} runs, {timeouts} timeouts", records.len());
    Ok(())
}

fn run_validate(args: &ValidateArgs) -> anyhow::Result<()> {
    let problem = load_problem(&args.files)?;
    let strategy = synth_with(&problem, args.alg, &SynthOptions::default())?;
    let bounds = ValidationBounds {
        max_states: args.max_states,
        max_env_props: args.max_env_props,
        ..ValidationBounds::default()
    };
    let report = validate_with(&problem, &strategy, &bounds)?;
    println!("{}", verdict_line(strategy.verdict));
    println!("{}", if report.undominated { "UNDOMINATED" } else { "DOMINATED" });
    println!("{}", serde_json::to_string(&report)?);
    Ok(())
}

fn run_dfa(args: &DfaArgs) -> anyhow::Result<()> {
    let part = Partition::parse(&read(&args.part)?)?;
    let formula = parse(read(&args.formula)?.trim(), &part)?;
    let dfa = translate(&formula, &part)?;
    println!("states {}", dfa.num_states());
    if let Some(path) = &args.dot {
        write(path, &dfa.to_dot())?;
    }
    if let Some(path) = &args.text {
        write(path, &dfa.to_text())?;
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use besynth::Error as E;
    match err.downcast_ref::<E>() {
        Some(E::ResourceLimit(_) | E::Timeout | E::BoundsExceeded(_)) => EXIT_LIMIT,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = std::panic::catch_unwind(|| match &cli.command {
        Command::Synth(a) => run_synth(a),
        Command::Bench(BenchCommand::Counter(a)) => run_counter(a),
        Command::Validate(a) => run_validate(a),
        Command::Dfa(a) => run_dfa(a),
    });
    match outcome {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
        Err(_) => {
            eprintln!("error: internal invariant violated");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}
