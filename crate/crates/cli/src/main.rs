use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tvgdisp::batch::run_batch;
use tvgdisp::engine::{JsonlSink, NullSink, TraceSink};
use tvgdisp::runner::{emit_summary_csv, run_with_sink, trace_header, verify_schedule, RunError, RunSummary};
use tvgdisp::scenario::Scenario;

/// Run, sweep and verify dispersion scenarios.
#[derive(Parser, Debug)]
#[command(name = "tvgdisp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one scenario; prints a JSON summary and exits with the outcome code.
    Run {
        file: PathBuf,
        /// Write the JSONL trace here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include the per-round series in the printed summary.
        #[arg(long)]
        series: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run every `*.toml` scenario in a directory and write one CSV row per run.
    Sweep {
        dir: PathBuf,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Check the realized schedule prefix against the declared connectivity class.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 50)]
        rounds: u64,
        /// Write the per-round JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct Overrides {
    /// Replace the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Replace the scenario round budget.
    #[arg(long)]
    max_rounds: Option<u64>,
}

const EXIT_CLASS_VIOLATION: u8 = 4;
const EXIT_OTHER: u8 = 5;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run {
            file,
            out,
            series,
            overrides,
        } => cmd_run(&file, out.as_deref(), series, overrides),
        Command::Sweep { dir, out, overrides } => cmd_sweep(&dir, out.as_deref(), overrides),
        Command::Verify {
            file,
            rounds,
            out,
            overrides,
        } => cmd_verify(&file, rounds, out.as_deref(), overrides),
    };
    ExitCode::from(code)
}

fn load(path: &Path, ov: Overrides) -> Result<Scenario, RunError> {
    let text = fs::read_to_string(path).map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
    let mut sc = Scenario::parse(&text)?;
    if let Some(seed) = ov.seed {
        sc.seed = seed;
    }
    if let Some(m) = ov.max_rounds {
        sc.max_rounds = m;
    }
    sc.validate()?;
    Ok(sc)
}

fn fail(e: &RunError) -> u8 {
    eprintln!("error: {e}");
    match e {
        RunError::Io(_) => EXIT_OTHER,
        _ => e.exit_code() as u8,
    }
}

fn create(path: &Path) -> Result<BufWriter<fs::File>, RunError> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| RunError::Io(format!("{}: {e}", path.display())))
}

fn cmd_run(file: &Path, out: Option<&Path>, series: bool, ov: Overrides) -> u8 {
    let result = (|| -> Result<RunSummary, RunError> {
        let sc = load(file, ov)?;
        match out {
            Some(path) => {
                let header = trace_header(&sc)?;
                let mut sink = JsonlSink::new(create(path)?, &header)?;
                let summary = run_with_sink(&sc, &mut sink as &mut dyn TraceSink)?;
                sink.into_inner().flush().map_err(|e| RunError::Io(e.to_string()))?;
                Ok(summary)
            }
            None => run_with_sink(&sc, &mut NullSink),
        }
    })();
    match result {
        Ok(mut summary) => {
            if !series {
                summary.holes.clear();
                summary.multinodes.clear();
                summary.max_counts.clear();
            }
            println!("{}", serde_json::to_string(&summary).expect("summary serializes"));
            eprintln!(
                "{}: {} after {} rounds (max memory {} bits)",
                summary.scenario_id, summary.outcome, summary.rounds, summary.max_memory_bits
            );
            summary.outcome.exit_code() as u8
        }
        Err(e) => fail(&e),
    }
}

fn scenario_files(dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    let entries = fs::read_dir(dir).map_err(|e| RunError::Io(format!("{}: {e}", dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    files.sort();
    Ok(files)
}

fn cmd_sweep(dir: &Path, out: Option<&Path>, ov: Overrides) -> u8 {
    let files = match scenario_files(dir) {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let mut scenarios = Vec::with_capacity(files.len());
    for f in &files {
        match load(f, ov) {
            Ok(sc) => scenarios.push(sc),
            Err(e) => {
                eprintln!("{}:", f.display());
                return fail(&e);
            }
        }
    }
    let mut summaries = Vec::with_capacity(scenarios.len());
    let mut code = 0;
    for (f, r) in files.iter().zip(run_batch(&scenarios)) {
        match r {
            Ok(s) => {
                eprintln!("{}: {} after {} rounds", s.scenario_id, s.outcome, s.rounds);
                summaries.push(s);
            }
            Err(e) => {
                eprintln!("{}:", f.display());
                code = code.max(fail(&e));
            }
        }
    }
    let written = match out {
        Some(path) => create(path).and_then(|w| emit_summary_csv(&summaries, w)),
        None => emit_summary_csv(&summaries, io::stdout().lock()),
    };
    match written {
        Ok(()) => code,
        Err(e) => fail(&e),
    }
}

fn cmd_verify(file: &Path, rounds: u64, out: Option<&Path>, ov: Overrides) -> u8 {
    let report = match load(file, ov).and_then(|sc| verify_schedule(&sc, rounds)) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let checked = report.rounds.len();
    let failed = report.rounds.iter().filter(|r| !r.pass).count();
    if let Some(path) = out {
        let written = create(path).and_then(|mut w| {
            serde_json::to_writer_pretty(&mut w, &report).map_err(|e| RunError::Io(e.to_string()))?;
            w.flush().map_err(|e| RunError::Io(e.to_string()))
        });
        if let Err(e) = written {
            return fail(&e);
        }
    }
    for v in report.rounds.iter().filter(|r| !r.pass) {
        println!("round {}: FAIL {}", v.round, v.reason.as_deref().unwrap_or(""));
    }
    match report.first_failure() {
        None => {
            println!(
                "{}: {} pass on {checked} checked rounds ({} realized)",
                report.scenario_id, report.class, report.realized_rounds
            );
            0
        }
        Some(r) => {
            println!(
                "{}: {} FAIL on {failed} of {checked} rounds, first at round {r}",
                report.scenario_id, report.class
            );
            EXIT_CLASS_VIOLATION
        }
    }
}
