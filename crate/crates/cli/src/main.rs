use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use smlab_core::census::{
    CensusError, CensusMode, CensusOptions, CensusRun, Checkpoint, EnumerationError, TheoremStatus,
};
use smlab_core::conditions::{check, classify_with, ClassifyOptions, Condition, ConditionError, DEFAULT_NCC_CEILING};
use smlab_core::format::{parse_profile, render_profile, ParseError};
use smlab_core::report::{classification_json, condition_report_json, da_outcome_json, stable_set_json, to_pretty};
use smlab_core::stability::{enumerate_stable_with_ceiling, StabilityError, DEFAULT_BRUTE_CEILING};
use smlab_core::{fixtures, run_da, PreferenceProfile, ProposingSide};

const BRUTE_CEILING_VAR: &str = "SMLAB_BRUTE_CEILING";

#[derive(Parser)]
#[command(name = "smlab", version, about = "Deferred acceptance, unique-stable-matching conditions and profile census")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check one condition (or all of them) on a profile file.
    Check {
        file: PathBuf,
        /// usm, spc, ncc, m-maxprop, w-maxprop, m-maxrou, w-maxrou or all.
        #[arg(long, default_value = "all")]
        condition: String,
        /// Exit with status 1 when a verdict is false.
        #[arg(long)]
        assert: bool,
    },
    /// Run deferred acceptance.
    Da {
        file: PathBuf,
        #[arg(long, value_enum)]
        proposing: Side,
        /// Include every proposal.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// List every stable matching by brute force.
    Stable {
        file: PathBuf,
        /// Largest n to attempt (default 8, or $SMLAB_BRUTE_CEILING).
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Region membership with all condition reports.
    Classify { file: PathBuf },
    /// Classify profile space exhaustively or by seeded sampling.
    #[command(group(ArgGroup::new("mode").args(["exhaustive", "sample", "resume"]).required(true)))]
    Census {
        #[arg(long, required_unless_present = "resume")]
        n: Option<usize>,
        #[arg(long)]
        exhaustive: bool,
        /// Number of samples.
        #[arg(long, requires = "seed")]
        sample: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Continue from a checkpoint file.
        #[arg(long, conflicts_with_all = ["n", "exhaustive", "sample", "seed"])]
        resume: Option<PathBuf>,
        /// Where to write the table (default stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        /// Stop after this many profiles and write a checkpoint.
        #[arg(long, requires = "checkpoint")]
        stop_after: Option<u64>,
        /// Checkpoint file written when stopping early.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Evaluate NCC up to this n (default 3).
        #[arg(long)]
        ncc_up_to: Option<usize>,
        /// Permit exhaustive runs at n = 4.
        #[arg(long)]
        allow_large: bool,
    },
    /// Run every theorem check at size n; exits 1 on any violation.
    Verify {
        #[arg(long)]
        n: usize,
        /// Samples used when n is too large to enumerate.
        #[arg(long, default_value_t = 10_000)]
        sample: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print a profile file.
    #[command(group(ArgGroup::new("what").args(["n", "name"]).required(true)))]
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Men,
    Women,
}

impl From<Side> for ProposingSide {
    fn from(s: Side) -> Self {
        match s {
            Side::Men => ProposingSide::Men,
            Side::Women => ProposingSide::Women,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Extremal,
    Fixture,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    TooLarge(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::TooLarge(_) => 3,
            _ => 2,
        }
    }
}

/// What a successful command wants the process to exit with.
enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("smlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load(path: &Path) -> Result<PreferenceProfile, CliError> {
    parse_profile(&read(path)?).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn brute_ceiling() -> Result<usize, CliError> {
    match std::env::var(BRUTE_CEILING_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{BRUTE_CEILING_VAR}=`{v}` is not an integer"))),
        Err(_) => Ok(DEFAULT_BRUTE_CEILING),
    }
}

fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Check { file, condition, assert } => cmd_check(&file, &condition, assert),
        Command::Da { file, proposing, trace, json } => cmd_da(&file, proposing.into(), trace, json),
        Command::Stable { file, max_n } => cmd_stable(&file, max_n),
        Command::Classify { file } => {
            let p = load(&file)?;
            let c = classify_with(&p, ClassifyOptions { ncc_ceiling: DEFAULT_NCC_CEILING });
            print!("{}", to_pretty(&classification_json(&c)));
            Ok(Outcome::Ok)
        }
        Command::Census { n, exhaustive, sample, seed, resume, out, format, stop_after, checkpoint, ncc_up_to, allow_large } => {
            let run = match resume {
                Some(path) => {
                    let cp = Checkpoint::from_json(&read(&path)?)
                        .map_err(|e| CliError::Usage(format!("{}: bad checkpoint: {e}", path.display())))?;
                    CensusRun::resume(cp).map_err(census_error)?
                }
                None => {
                    let n = n.expect("clap requires --n");
                    let mode = if exhaustive {
                        CensusMode::Exhaustive
                    } else {
                        CensusMode::Sampled { count: sample.expect("clap group"), seed: seed.expect("clap requires") }
                    };
                    let mut opts = CensusOptions::default();
                    if let Some(k) = ncc_up_to {
                        opts.ncc_up_to = k;
                    }
                    if allow_large {
                        opts.enumeration_limit = smlab_core::census::MAX_CENSUS_EXHAUSTIVE_N;
                    }
                    CensusRun::start(n, mode, opts).map_err(census_error)?
                }
            };
            cmd_census(run, out.as_deref(), format, stop_after, checkpoint.as_deref())
        }
        Command::Verify { n, sample, seed } => cmd_verify(n, sample, seed),
        Command::Gen { family, n, name } => {
            let p = match (family, n, name) {
                (Family::Extremal, Some(n), None) => {
                    fixtures::gen_extremal(n).map_err(|e| CliError::Usage(e.to_string()))?
                }
                (Family::Fixture, None, Some(name)) => {
                    fixtures::gen_fixture(&name).map_err(|e| CliError::Usage(e.to_string()))?
                }
                (Family::Extremal, _, _) => return Err(CliError::Usage("--family extremal takes --n".into())),
                (Family::Fixture, _, _) => return Err(CliError::Usage("--family fixture takes --name".into())),
            };
            print!("{}", render_profile(&p));
            Ok(Outcome::Ok)
        }
    }
}

fn cmd_check(file: &Path, condition: &str, assert: bool) -> Result<Outcome, CliError> {
    let p = load(file)?;
    let conditions: Vec<Condition> = if condition.eq_ignore_ascii_case("all") {
        Condition::ALL.to_vec()
    } else {
        vec![condition.parse().map_err(CliError::Usage)?]
    };
    let single = conditions.len() == 1;
    let mut all_true = true;
    let mut reports = Vec::new();
    for c in conditions {
        match check(&p, c) {
            Ok(r) => {
                all_true &= r.verdict;
                reports.push(condition_report_json(&r));
            }
            Err(ConditionError::InstanceTooLarge { n, ceiling }) if !single => {
                reports.push(json!({ "condition": c.id(), "skipped": format!("n = {n} exceeds the search ceiling of {ceiling}") }));
            }
            Err(e @ ConditionError::InstanceTooLarge { .. }) => return Err(CliError::TooLarge(e.to_string())),
            Err(e) => return Err(CliError::Usage(e.to_string())),
        }
    }
    let out = if single { reports.pop().expect("one report") } else { Value::Array(reports) };
    print!("{}", to_pretty(&out));
    Ok(if assert && !all_true { Outcome::Failed } else { Outcome::Ok })
}

fn cmd_da(file: &Path, side: ProposingSide, trace: bool, as_json: bool) -> Result<Outcome, CliError> {
    let p = load(file)?;
    let o = run_da(&p, side);
    if as_json {
        print!("{}", to_pretty(&da_outcome_json(&o, trace)));
        return Ok(Outcome::Ok);
    }
    let n = p.n();
    let pairs: Vec<String> =
        (0..n).map(|m| format!("m{}-w{}", m + 1, o.matching.wife(m) + 1)).collect();
    println!("matching: {}", pairs.join(" "));
    println!("proposal_count: {} (max {})", o.proposal_count, smlab_core::DaOutcome::max_proposals(n));
    println!("round_count: {} (max {})", o.round_count, smlab_core::DaOutcome::max_rounds(n));
    if trace {
        for ev in &o.trace {
            let result = match ev.result {
                smlab_core::da::ProposalResult::AcceptedTentatively => "accepted".to_string(),
                smlab_core::da::ProposalResult::Rejected => "rejected".to_string(),
                smlab_core::da::ProposalResult::DisplacedPrevious(h) => format!("accepted, displacing {h}"),
            };
            println!("round {}: {} -> {}: {}", ev.round, ev.proposer, ev.target, result);
        }
    }
    Ok(Outcome::Ok)
}

fn cmd_stable(file: &Path, max_n: Option<usize>) -> Result<Outcome, CliError> {
    let p = load(file)?;
    let ceiling = match max_n {
        Some(k) => k,
        None => brute_ceiling()?,
    };
    let set = enumerate_stable_with_ceiling(&p, ceiling).map_err(|e| match e {
        StabilityError::InstanceTooLarge { .. } => {
            CliError::TooLarge(format!("{e}; raise it with --max-n or {BRUTE_CEILING_VAR}"))
        }
        other => CliError::Usage(other.to_string()),
    })?;
    print!("{}", to_pretty(&stable_set_json(&set)));
    Ok(Outcome::Ok)
}

fn census_error(e: CensusError) -> CliError {
    match e {
        CensusError::Enumeration(EnumerationError::InstanceTooLarge { .. }) | CensusError::InstanceTooLarge { .. } => {
            CliError::TooLarge(e.to_string())
        }
        other => CliError::Usage(other.to_string()),
    }
}

fn cmd_census(
    mut run: CensusRun,
    out: Option<&Path>,
    format: OutputFormat,
    stop_after: Option<u64>,
    checkpoint: Option<&Path>,
) -> Result<Outcome, CliError> {
    if let Some(k) = stop_after {
        if !run.advance(u128::from(k)) {
            let path = checkpoint.expect("clap requires --checkpoint");
            write(path, &run.checkpoint().to_json())?;
            eprintln!("smlab: stopped at cursor {}; resume with --resume {}", run.cursor(), path.display());
            return Ok(Outcome::Ok);
        }
    }
    let table = run.finish();
    let text = match format {
        OutputFormat::Json => table.to_json(),
        OutputFormat::Csv => table.to_csv(),
    };
    match out {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(Outcome::Ok)
}

fn cmd_verify(n: usize, sample: u64, seed: u64) -> Result<Outcome, CliError> {
    let mode = if n <= smlab_core::census::DEFAULT_ENUMERATION_LIMIT {
        CensusMode::Exhaustive
    } else {
        CensusMode::Sampled { count: sample, seed }
    };
    let table = CensusRun::start(n, mode, CensusOptions::default()).map_err(census_error)?.finish();
    match mode {
        CensusMode::Exhaustive => println!("n = {n}, exhaustive, {} profiles", table.total),
        CensusMode::Sampled { count, seed } => println!("n = {n}, {count} samples, seed {seed}"),
    }
    for e in &table.theorems {
        match &e.status {
            TheoremStatus::Holds { checked } => println!("holds      {:<34} checked {checked}", e.id),
            TheoremStatus::NotApplicable => println!("n/a        {}", e.id),
            TheoremStatus::Violated { checked, cursor, profile } => {
                println!("VIOLATED   {:<34} checked {checked}, first at cursor {cursor}", e.id);
                println!("           men {:?} women {:?}", profile.men, profile.women);
            }
        }
    }
    Ok(if table.all_hold() { Outcome::Ok } else { Outcome::Failed })
}
