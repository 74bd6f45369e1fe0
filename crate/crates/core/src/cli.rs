//! Command-line interface behind the `rr` binary.

use crate::capability::{build_matrix, compare, verbalize, Matrix, DEFAULT_SEEDS};
use crate::dsl::{parse, print_canonical, SourceText};
use crate::fixtures;
use crate::interp::{dump_trace, ExecOptions};
use crate::ir::{ConceptUnit, Level, UnitKind};
use crate::kb::{KnowledgeBase, DEFAULT_THRESHOLD};
use crate::redescribe::{antiunify_instances, decompose_to_e3, generalize_to_e2, PhaseReport};
use crate::tasks::{build_task_with, run_task_with, TaskId, TaskParams};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIAGNOSTICS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Tsv,
}

/// Concept units at four levels of explicitness: parse, redescribe, run tasks.
#[derive(Debug, Parser)]
#[command(name = "rr", version)]
pub struct Cli {
    #[command(flatten)]
    pub config: CliConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CliConfig {
    /// Knowledge-base directory; the built-in canonical knowledge when absent.
    #[arg(long, env = "RR_KB", global = true)]
    pub kb: Option<PathBuf>,
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    #[arg(long, default_value_t = crate::interp::DEFAULT_STEP_LIMIT as u64, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub step_limit: u64,
    /// Distinct successful worlds before a phase fires in `--auto`.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD as u64, value_parser = clap::value_parser!(u64).range(1..), global = true)]
    pub threshold: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub output: OutputFormat,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a DSL file and print it in canonical form.
    Parse { file: PathBuf },
    /// Run redescription passes over the knowledge base.
    Redescribe {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3), conflicts_with = "auto", required_unless_present = "auto")]
        phase: Option<u8>,
        /// Fire whichever phases the practice log justifies.
        #[arg(long)]
        auto: bool,
        /// Print the pass reports instead of the produced units.
        #[arg(long)]
        report: bool,
    },
    /// Run one task at one level.
    Run {
        #[arg(long)]
        task: TaskId,
        #[arg(long)]
        level: Level,
        /// Number of objects for T3, T4 and T5.
        #[arg(long)]
        objects: Option<usize>,
    },
    /// Build the capability matrix.
    Matrix {
        /// Compare with the golden matrix and exit 1 on any difference.
        #[arg(long)]
        diff: bool,
        /// Golden matrix file; the built-in one when absent.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Print the event trace of one task run.
    Trace {
        #[arg(long)]
        task: TaskId,
        #[arg(long)]
        level: Level,
        #[arg(long)]
        objects: Option<usize>,
    },
    /// Describe a unit in plain words.
    Verbalize {
        unit: String,
        #[arg(long)]
        level: Option<Level>,
    },
}

struct Failure(i32, String);

type Res = Result<i32, Failure>;

fn io_fail(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure(EXIT_IO, format!("{}: {e}", path.display()))
}

/// Run the CLI on `args` (including the program name), writing to `out`
/// and `err`, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn options(c: &CliConfig) -> ExecOptions {
    ExecOptions { step_limit: c.step_limit as usize, ..ExecOptions::default() }
}

fn load_kb(c: &CliConfig) -> Result<KnowledgeBase, Failure> {
    match &c.kb {
        None => Ok(KnowledgeBase::canonical()),
        Some(p) if !p.exists() => Err(io_fail(p, "no such knowledge-base directory")),
        Some(p) => KnowledgeBase::load(p).map_err(|e| match e {
            crate::kb::KbError::Io(m) => Failure(EXIT_IO, m),
            other => Failure(EXIT_DIAGNOSTICS, other.to_string()),
        }),
    }
}

fn save_kb(c: &CliConfig, kb: &KnowledgeBase) -> Result<(), Failure> {
    match &c.kb {
        Some(p) => kb.save(p).map_err(|e| Failure(EXIT_IO, e.to_string())),
        None => Ok(()),
    }
}

fn w(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure(EXIT_IO, format!("writing output: {e}")))
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Res {
    let c = &cli.config;
    match &cli.command {
        Command::Parse { file } => {
            let src = SourceText::read(file).map_err(|e| io_fail(file, e))?;
            match parse(&src) {
                Ok(units) => {
                    w(out, &print_canonical(&units))?;
                    Ok(EXIT_OK)
                }
                Err(errs) => {
                    for e in errs {
                        let _ = writeln!(err, "{}:{e}", file.display());
                    }
                    Ok(EXIT_DIAGNOSTICS)
                }
            }
        }
        Command::Redescribe { phase, auto, report } => {
            let mut kb = load_kb(c)?;
            let (reports, produced) = if *auto {
                let before: Vec<ConceptUnit> = kb.all();
                let reports = kb.advance(c.threshold as usize);
                let produced = kb.all().into_iter().filter(|u| !before.contains(u)).collect();
                (reports, produced)
            } else {
                explicit_phase(&mut kb, phase.unwrap_or(1))?
            };
            save_kb(c, &kb)?;
            if *report || c.output == OutputFormat::Tsv {
                for r in &reports {
                    w(out, &r.to_text())?;
                }
            } else {
                w(out, &print_canonical(&produced))?;
            }
            if reports.is_empty() {
                let _ = writeln!(err, "no phase fired");
                // An explicit request with nothing to work on is a diagnostic.
                if !*auto {
                    return Ok(EXIT_DIAGNOSTICS);
                }
            }
            Ok(EXIT_OK)
        }
        Command::Run { task, level, objects } => {
            let kb = load_kb(c)?;
            let params = TaskParams { objects: *objects, ..TaskParams::default() };
            let t = build_task_with(*task, c.seed, &params);
            let r = run_task_with(&t, &kb.all(), *level, &options(c));
            let path = std::env::temp_dir().join(format!("rr-trace-{task}-{level}-{}.tsv", c.seed));
            std::fs::write(&path, dump_trace(&r.trace)).map_err(|e| io_fail(&path, e))?;
            match c.output {
                OutputFormat::Tsv => w(out, &format!("{level}\t{task}\t{}\t{}\t{}\n", c.seed, r.outcome.kind(), path.display()))?,
                OutputFormat::Text => w(out, &format!("{task} at {level} (seed {}): {}\ntrace: {}\n", c.seed, r.outcome, path.display()))?,
            }
            Ok(EXIT_OK)
        }
        Command::Trace { task, level, objects } => {
            let kb = load_kb(c)?;
            let params = TaskParams { objects: *objects, ..TaskParams::default() };
            let r = run_task_with(&build_task_with(*task, c.seed, &params), &kb.all(), *level, &options(c));
            w(out, &dump_trace(&r.trace))?;
            Ok(EXIT_OK)
        }
        Command::Matrix { diff, golden } => {
            let kb = load_kb(c)?;
            let m = build_matrix(&kb.all(), &DEFAULT_SEEDS, &options(c));
            w(out, &match c.output {
                OutputFormat::Text => m.render_text(),
                OutputFormat::Tsv => m.to_tsv(),
            })?;
            if !*diff {
                return Ok(EXIT_OK);
            }
            let text = match golden {
                Some(p) => std::fs::read_to_string(p).map_err(|e| io_fail(p, e))?,
                None => fixtures::GOLDEN_MATRIX.to_string(),
            };
            let expected = Matrix::from_tsv(&text).map_err(|e| Failure(EXIT_DIAGNOSTICS, format!("golden matrix {e}")))?;
            let diffs = compare(&expected, &m);
            for d in &diffs {
                let _ = writeln!(err, "{d}");
            }
            Ok(if diffs.is_empty() { EXIT_OK } else { EXIT_DIAGNOSTICS })
        }
        Command::Verbalize { unit, level } => {
            let kb = load_kb(c)?;
            let found: Vec<&ConceptUnit> = kb.named(unit).into_iter().filter(|u| level.is_none_or(|l| u.level == l)).collect();
            if found.is_empty() {
                return Err(Failure(EXIT_DIAGNOSTICS, format!("no unit named {unit}")));
            }
            let text: Vec<String> = found.into_iter().map(verbalize).collect();
            w(out, &text.join("\n"))?;
            Ok(EXIT_OK)
        }
    }
}

/// Run one phase on everything it applies to, adding outputs to the kb.
fn explicit_phase(kb: &mut KnowledgeBase, phase: u8) -> Result<(Vec<PhaseReport>, Vec<ConceptUnit>), Failure> {
    let mut reports = Vec::new();
    let mut produced = Vec::new();
    let mut keep = |kb: &mut KnowledgeBase, units: Vec<ConceptUnit>, report: PhaseReport, produced: &mut Vec<ConceptUnit>| {
        for u in units {
            if !kb.contains(&u.name, u.level) {
                let _ = kb.insert(u.clone());
            }
            produced.push(u);
        }
        reports.push(report);
    };
    let fail = |e: crate::redescribe::RedescribeError| Failure(EXIT_DIAGNOSTICS, e.to_string());
    match phase {
        1 => {
            let mut by_domain: BTreeMap<String, Vec<ConceptUnit>> = BTreeMap::new();
            for u in kb.at_level(Level::I).into_iter().filter(|u| u.kind == UnitKind::Instance) {
                by_domain.entry(u.domain.clone()).or_default().push(u.clone());
            }
            for instances in by_domain.into_values().filter(|v| v.len() >= 2) {
                let (unit, report) = antiunify_instances(&instances).map_err(fail)?;
                keep(kb, vec![unit], report, &mut produced);
            }
        }
        2 => {
            let e1: Vec<ConceptUnit> = kb.at_level(Level::E1).into_iter().cloned().collect();
            for u in e1 {
                let (units, report) = generalize_to_e2(&u).map_err(fail)?;
                keep(kb, units, report, &mut produced);
            }
        }
        _ => {
            let e2: Vec<ConceptUnit> = kb.at_level(Level::E2).into_iter().filter(|u| u.domain == "numbers").cloned().collect();
            if !e2.is_empty() {
                let (units, report) = decompose_to_e3(&e2).map_err(fail)?;
                keep(kb, units, report, &mut produced);
            }
        }
    }
    Ok((reports, produced))
}
