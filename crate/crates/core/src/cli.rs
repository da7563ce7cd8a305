//! `pep run | check | parse`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::engine::explore::explore;
use crate::engine::policy::PolicyKind;
use crate::engine::{Outcome, SystemState};
use crate::frontend::{dump_program, parse_program, ProgramDef};
use crate::trace::{MscBuilder, TraceMeta, TraceWriter};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_STEP_CAP: i32 = 2;
pub const EXIT_DEADLOCK: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "pep",
    version,
    about = "Run and check PEP state-machine programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Execute a program under a scheduling policy.
    Run(RunArgs),
    /// Explore every interleaving up to a depth and report deadlocks.
    Check(CheckArgs),
    /// Parse and validate a program.
    Parse(ParseArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    file: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "seeded")]
    policy: PolicyKind,
    #[arg(long = "max-steps", default_value_t = 1_000_000)]
    max_steps: u64,
    /// Write the JSONL trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write a Mermaid sequence diagram here.
    #[arg(long)]
    msc: Option<PathBuf>,
    /// Include queue and table traffic in the diagram.
    #[arg(long)]
    verbose: bool,
}

#[derive(Debug, Args)]
struct CheckArgs {
    file: PathBuf,
    #[arg(long)]
    depth: usize,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ParseArgs {
    file: PathBuf,
    #[arg(long = "dump-ast")]
    dump_ast: bool,
}

fn load(path: &Path, err: &mut dyn Write) -> Option<ProgramDef> {
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            return None;
        }
    };
    match parse_program(&src) {
        Ok(p) => Some(p),
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", path.display());
            None
        }
    }
}

fn create(path: &Path) -> std::io::Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new)
}

/// Runs the CLI and returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(a) => run(a, out, err),
        Command::Check(a) => check(a, out, err),
        Command::Parse(a) => parse(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

type CliResult = Result<i32, Box<dyn std::error::Error>>;

fn run(a: RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let Some(program) = load(&a.file, err) else {
        return Ok(EXIT_INVALID);
    };
    let entry = program.entry.to_string();
    let mut state = SystemState::boot(program)?;
    let meta = TraceMeta {
        program: a.file.display().to_string(),
        entry: entry.clone(),
        policy: a.policy.to_string(),
        seed: a.seed,
    };
    let mut trace = match &a.trace {
        Some(p) => Some(TraceWriter::new(create(p)?, &meta)?),
        None => None,
    };
    let mut msc = a.msc.as_ref().map(|_| MscBuilder::new(&entry, a.verbose));
    let mut policy = a.policy.build(a.seed);
    let mut io_error = None;
    let outcome = state.run_with(policy.as_mut(), a.max_steps, |e| {
        if let Some(t) = trace.as_mut() {
            if let Err(x) = t.write(e) {
                io_error.get_or_insert(x);
            }
        }
        if let Some(m) = msc.as_mut() {
            m.push(e);
        }
    })?;
    if let Some(x) = io_error {
        return Err(x.into());
    }
    if let Some(t) = trace {
        t.finish()?;
    }
    if let (Some(m), Some(p)) = (msc, &a.msc) {
        m.finish(&mut create(p)?)?;
    }
    writeln!(
        out,
        "{} after {} steps",
        outcome.as_str(),
        state.step_count()
    )?;
    Ok(match outcome {
        Outcome::Terminated => EXIT_OK,
        Outcome::StepCapReached => EXIT_STEP_CAP,
        Outcome::Deadlocked => EXIT_DEADLOCK,
    })
}

fn check(a: CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let Some(program) = load(&a.file, err) else {
        return Ok(EXIT_INVALID);
    };
    let state = SystemState::boot(program)?;
    let report = explore(&state, a.depth)?;
    if let Some(p) = &a.report {
        let mut w = create(p)?;
        serde_json::to_writer_pretty(&mut w, &report)?;
        w.write_all(b"\n")?;
        w.flush()?;
    }
    writeln!(
        out,
        "depth {}: {} states, {} deadlocks, {} teardown violations{}",
        report.max_depth,
        report.state_count,
        report.deadlocks.len(),
        report.teardown_violations.len(),
        if report.truncated { " (truncated)" } else { "" }
    )?;
    Ok(if report.deadlocks.is_empty() {
        EXIT_OK
    } else {
        EXIT_DEADLOCK
    })
}

fn parse(a: ParseArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let Some(program) = load(&a.file, err) else {
        return Ok(EXIT_INVALID);
    };
    if a.dump_ast {
        out.write_all(dump_program(&program).as_bytes())?;
    } else {
        writeln!(
            out,
            "ok: {} machines, entry {}",
            program.machines.len(),
            program.entry
        )?;
    }
    Ok(EXIT_OK)
}
