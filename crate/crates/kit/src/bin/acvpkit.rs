//! Command-line front end. Exit codes: 0 success, 1 findings (schema
//! violations, validation failures, runner failures), 2 infrastructure
//! errors (unreadable files, unspawnable runner, bad usage).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use acvp_core::generator::{translate, TargetSpec};
use acvp_core::model::{
    expand_groups, parse_response_set, parse_vector_set, serialize_response_set,
    serialize_vector_set, TestGroup, VectorSet,
};
use acvp_core::subspec::validate_schema;
use acvp_kit::fuzz::{fuzz_loop, minimize_corpus, FuzzConfig};
use acvp_kit::protocol::{spawn_runner, RunnerReply, DEFAULT_TIMEOUT_MS};
use acvp_kit::validator::{validate_library, ValidateConfig};

/// Environment variable holding the default runner executable path.
const RUNNER_ENV: &str = "ACVPKIT_RUNNER";

#[derive(Parser)]
#[command(name = "acvpkit", about = "ACVP test-vector toolkit", version)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Args, Clone)]
struct RunnerArgs {
    /// Runner executable (default: $ACVPKIT_RUNNER)
    #[arg(long)]
    runner: Option<String>,
    /// Extra argument passed to the runner (repeatable)
    #[arg(long = "runner-arg")]
    runner_args: Vec<String>,
    /// Per-request timeout in milliseconds
    #[arg(long, default_value_t = DEFAULT_TIMEOUT_MS)]
    timeout_ms: u64,
}

impl RunnerArgs {
    fn command(&self) -> Result<String, String> {
        self.runner
            .clone()
            .or_else(|| std::env::var(RUNNER_ENV).ok())
            .ok_or_else(|| format!("no runner given: pass --runner or set {RUNNER_ENV}"))
    }
}

#[derive(Subcommand)]
enum CliCommand {
    /// Check a vector-set file against its subspecification schema
    Lint { file: PathBuf },
    /// Flatten shared fields and recursive groups to the official layout
    Expand { file: PathBuf },
    /// Hoist fields common to all cases of a group up to the group level
    Group { file: PathBuf },
    /// Translate a raw byte file into a vector set
    Generate {
        /// Subspecification: sha, gcm, rsa, or bn
        #[arg(long)]
        spec: String,
        /// File whose bytes drive the translation
        #[arg(long)]
        input: PathBuf,
        /// Apply restriction bits from the input prefix
        #[arg(long)]
        restrictions: bool,
    },
    /// Execute vector sets on a runner and print the responses
    Run {
        #[command(flatten)]
        runner: RunnerArgs,
        files: Vec<PathBuf>,
    },
    /// Diff runner responses against expected response sets
    Validate {
        #[command(flatten)]
        runner: RunnerArgs,
        /// Directory of expected response-set files
        #[arg(long)]
        expected: PathBuf,
        /// Directory of vector-set files
        vectors: PathBuf,
        /// Emit the machine-readable JSON report instead of text
        #[arg(long)]
        json: bool,
    },
    /// Coverage-guided fuzzing against a runner
    Fuzz {
        #[command(flatten)]
        runner: RunnerArgs,
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        #[arg(long)]
        restrictions: bool,
        /// Run directory for corpus, crashes, and stats
        #[arg(long)]
        out: PathBuf,
    },
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_file(path: &Path) -> Result<VectorSet, String> {
    parse_vector_set(&read_file(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_spec(name: &str) -> Result<TargetSpec, String> {
    TargetSpec::from_name(name)
        .ok_or_else(|| format!("unknown spec `{name}` (expected sha, gcm, rsa, or bn)"))
}

fn cmd_lint(file: &Path) -> Result<ExitCode, String> {
    let vs = match parse_vector_set(&read_file(file)?) {
        Ok(vs) => vs,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return Ok(ExitCode::from(1));
        }
    };
    let violations = validate_schema(&vs);
    if violations.is_empty() {
        println!("{}: ok", file.display());
        return Ok(ExitCode::SUCCESS);
    }
    for v in &violations {
        match v.tc_id {
            Some(tc) => println!("{}: tcId {}: {}", file.display(), tc, v.message),
            None => println!("{}: {}", file.display(), v.message),
        }
    }
    Ok(ExitCode::from(1))
}

fn hoist_common_fields(group: &mut TestGroup) {
    for sub in &mut group.subgroups {
        hoist_common_fields(sub);
    }
    let Some(first) = group.tests.first() else { return };
    let candidates: Vec<String> = first
        .fields
        .iter()
        .filter(|(name, value)| {
            group.tests[1..]
                .iter()
                .all(|t| t.fields.get(*name) == Some(value))
        })
        .map(|(name, _)| name.clone())
        .collect();
    for name in candidates {
        let mut hoisted = None;
        for test in &mut group.tests {
            hoisted = test.fields.remove(&name).or(hoisted);
        }
        if let Some(value) = hoisted {
            group.shared_fields.insert(name, value);
        }
    }
}

fn cmd_group(file: &Path) -> Result<ExitCode, String> {
    let mut vs = parse_file(file)?;
    for group in &mut vs.groups {
        hoist_common_fields(group);
    }
    println!("{}", serialize_vector_set(&vs));
    Ok(ExitCode::SUCCESS)
}

fn cmd_run(runner: &RunnerArgs, files: &[PathBuf]) -> Result<ExitCode, String> {
    let command = runner.command()?;
    let mut session = spawn_runner(&command, &runner.runner_args, runner.timeout_ms, false)
        .map_err(|e| e.to_string())?;
    let mut failed = false;
    for file in files {
        let vs = parse_file(file)?;
        match session.run_vector_set(&vs) {
            Ok(RunnerReply::Responses(rs)) => println!("{}", serialize_response_set(&rs)),
            Ok(RunnerReply::Refused { message }) => {
                eprintln!("{}: runner refused: {message}", file.display());
                failed = true;
            }
            Err(e) => {
                eprintln!("{}: {e}", file.display());
                failed = true;
                session = spawn_runner(&command, &runner.runner_args, runner.timeout_ms, false)
                    .map_err(|e| e.to_string())?;
            }
        }
    }
    session.close();
    Ok(if failed { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| format!("{}: {e}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn cmd_validate(
    runner: &RunnerArgs,
    expected_dir: &Path,
    vectors_dir: &Path,
    as_json: bool,
) -> Result<ExitCode, String> {
    let command = runner.command()?;

    // pair files by vsId
    let mut expected_by_id: BTreeMap<u64, PathBuf> = BTreeMap::new();
    for path in json_files(expected_dir)? {
        let rs = parse_response_set(&read_file(&path)?).map_err(|e| format!("{}: {e}", path.display()))?;
        expected_by_id.insert(rs.vs_id, path);
    }
    let mut pairs = Vec::new();
    for path in json_files(vectors_dir)? {
        let vs = parse_file(&path)?;
        let expected = expected_by_id
            .get(&vs.vs_id)
            .ok_or_else(|| format!("no expected responses for vsId {}", vs.vs_id))?;
        pairs.push((path, expected.clone()));
    }

    let report = validate_library(
        &pairs,
        &command,
        &runner.runner_args,
        &ValidateConfig { timeout_ms: runner.timeout_ms },
    )?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&report.to_json()).unwrap());
    } else {
        print!("{}", report.to_text());
    }
    Ok(if report.overall_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_fuzz(
    runner: &RunnerArgs,
    spec_name: &str,
    seed: u64,
    budget: u64,
    restrictions: bool,
    out_dir: &Path,
) -> Result<ExitCode, String> {
    let command = runner.command()?;
    let spec = parse_spec(spec_name)?;
    let mut config = FuzzConfig::new(seed, budget, spec, restrictions);
    config.timeout_ms = runner.timeout_ms;

    let (corpus, stats) = fuzz_loop(&config, &command, &runner.runner_args)?;
    let corpus = minimize_corpus(&corpus);

    let corpus_dir = out_dir.join("corpus");
    let crashes_dir = out_dir.join("crashes");
    for dir in [out_dir, &corpus_dir, &crashes_dir] {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    for (i, entry) in corpus.iter().enumerate() {
        write_file(&corpus_dir.join(format!("{i:05}.bin")), &entry.input)?;
    }
    for (i, crash) in stats.crashes.iter().enumerate() {
        write_file(&crashes_dir.join(format!("{i:05}.bin")), &crash.input)?;
        let vs = translate(&crash.input, spec, restrictions);
        let record = json!({
            "kind": crash.failure_kind,
            "failure": crash.failure,
            "iteration": crash.iteration,
            "vectorSet": serde_json::from_str::<serde_json::Value>(&serialize_vector_set(&vs)).unwrap(),
        });
        write_file(
            &crashes_dir.join(format!("{i:05}.json")),
            serde_json::to_string_pretty(&record).unwrap().as_bytes(),
        )?;
    }
    let mut stats_out = stats.clone();
    stats_out.corpus_size = corpus.len();
    write_file(
        &out_dir.join("stats.json"),
        serde_json::to_string_pretty(&stats_out.to_json()).unwrap().as_bytes(),
    )?;
    let coverage = json!({
        "branchIds": stats.branches.iter().collect::<Vec<_>>(),
        "registrySize": acvp_core::probe::REGISTRY.len(),
    });
    write_file(
        &out_dir.join("coverage.json"),
        serde_json::to_string_pretty(&coverage).unwrap().as_bytes(),
    )?;

    println!(
        "fuzz done: {} iterations, {} branches, {} corpus entries, {} crashes",
        stats.iterations,
        stats.branches.len(),
        corpus.len(),
        stats.crashes.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        CliCommand::Lint { file } => cmd_lint(&file),
        CliCommand::Expand { file } => {
            let vs = parse_file(&file)?;
            let expanded = expand_groups(&vs).map_err(|e| e.to_string())?;
            println!("{}", serialize_vector_set(&expanded));
            Ok(ExitCode::SUCCESS)
        }
        CliCommand::Group { file } => cmd_group(&file),
        CliCommand::Generate { spec, input, restrictions } => {
            let spec = parse_spec(&spec)?;
            let bytes = std::fs::read(&input).map_err(|e| format!("{}: {e}", input.display()))?;
            println!("{}", serialize_vector_set(&translate(&bytes, spec, restrictions)));
            Ok(ExitCode::SUCCESS)
        }
        CliCommand::Run { runner, files } => cmd_run(&runner, &files),
        CliCommand::Validate { runner, expected, vectors, json } => {
            cmd_validate(&runner, &expected, &vectors, json)
        }
        CliCommand::Fuzz { runner, spec, seed, budget, restrictions, out } => {
            cmd_fuzz(&runner, &spec, seed, budget, restrictions, &out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
