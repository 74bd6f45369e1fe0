//! Capability matrix: which tasks the knowledge of each level can do.

mod verbalize;

pub use verbalize::verbalize;

use crate::interp::ExecOptions;
use crate::ir::{ConceptUnit, Level};
use crate::tasks::{build_task, run_task_with, Outcome, TaskId};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Seeds every cell is run with.
pub const DEFAULT_SEEDS: [u64; 3] = [0, 1, 2];

const TSV_HEADER: &str = "level\ttask\toutcome";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matrix {
    pub cells: BTreeMap<(Level, TaskId), Outcome>,
}

/// One cell where two matrices disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellDiff {
    pub level: Level,
    pub task: TaskId,
    pub expected: Option<String>,
    pub actual: Option<String>,
}

impl std::fmt::Display for CellDiff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = |o: &Option<String>| o.clone().unwrap_or_else(|| "missing".into());
        write!(f, "{} {}: expected {}, got {}", self.level, self.task, show(&self.expected), show(&self.actual))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct MatrixParseError {
    pub line: usize,
    pub message: String,
}

impl Matrix {
    pub fn get(&self, level: Level, task: TaskId) -> Option<&Outcome> {
        self.cells.get(&(level, task))
    }

    /// Tasks solved at a level, in task order.
    pub fn solved_at(&self, level: Level) -> Vec<TaskId> {
        TaskId::ALL.into_iter().filter(|t| self.get(level, *t).is_some_and(Outcome::is_solved)).collect()
    }

    /// `level<TAB>task<TAB>outcome` lines under a header; outcomes without
    /// reasons so the file is stable.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("{TSV_HEADER}\n");
        for ((level, task), o) in &self.cells {
            let _ = writeln!(out, "{level}\t{task}\t{}", o.kind());
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Matrix, MatrixParseError> {
        let mut m = Matrix::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.is_empty() || line == TSV_HEADER || line.starts_with('#') {
                continue;
            }
            let err = |message: String| MatrixParseError { line: i + 1, message };
            let cols: Vec<&str> = line.split('\t').collect();
            let [level, task, outcome] = cols[..] else {
                return Err(err(format!("expected 3 tab-separated columns, found {}", cols.len())));
            };
            let level: Level = level.parse().map_err(err)?;
            let task: TaskId = task.parse().map_err(|e: crate::tasks::UnknownTaskId| err(e.to_string()))?;
            let outcome = match outcome {
                "Solved" => Outcome::Solved,
                "Inaccessible" => Outcome::Inaccessible,
                "Failed" => Outcome::Failed(String::new()),
                other => return Err(err(format!("unknown outcome `{other}`"))),
            };
            m.cells.insert((level, task), outcome);
        }
        Ok(m)
    }

    /// Grid with one row per level: `+` solved, `x` failed, `-` inaccessible.
    pub fn render_text(&self) -> String {
        let mut out = String::from("     ");
        for t in TaskId::ALL {
            let _ = write!(out, " {t}");
        }
        out.push('\n');
        let levels: Vec<Level> = Level::ALL.into_iter().filter(|l| self.cells.keys().any(|(cl, _)| cl == l)).collect();
        for level in levels {
            let _ = write!(out, "{:<5}", level.to_string());
            for t in TaskId::ALL {
                let mark = match self.get(level, t) {
                    Some(Outcome::Solved) => '+',
                    Some(Outcome::Failed(_)) => 'x',
                    Some(Outcome::Inaccessible) => '-',
                    None => ' ',
                };
                let _ = write!(out, "  {mark}");
            }
            out.push('\n');
        }
        out.push_str("(+ solved, x failed, - inaccessible)\n");
        out
    }
}

/// Merge per-seed outcomes: solved only if every seed solved, otherwise the
/// first failure, otherwise inaccessible.
fn merge(outcomes: Vec<Outcome>) -> Outcome {
    if outcomes.iter().all(Outcome::is_solved) {
        return Outcome::Solved;
    }
    outcomes
        .iter()
        .find(|o| matches!(o, Outcome::Failed(_)))
        .cloned()
        .unwrap_or(Outcome::Inaccessible)
}

/// Run every task at every level that has units in `kb`.
pub fn build_matrix(kb: &[ConceptUnit], seeds: &[u64], opts: &ExecOptions) -> Matrix {
    let levels: Vec<Level> = Level::ALL.into_iter().filter(|l| kb.iter().any(|u| u.level == *l && !u.is_globals())).collect();
    build_matrix_for(kb, &levels, seeds, opts)
}

pub fn build_matrix_for(kb: &[ConceptUnit], levels: &[Level], seeds: &[u64], opts: &ExecOptions) -> Matrix {
    let cells: Vec<(Level, TaskId)> = levels.iter().flat_map(|l| TaskId::ALL.into_iter().map(move |t| (*l, t))).collect();
    let results: Vec<((Level, TaskId), Outcome)> = cells
        .into_par_iter()
        .map(|(level, task)| {
            let outcomes = seeds.iter().map(|s| run_task_with(&build_task(task, *s), kb, level, opts).outcome).collect();
            ((level, task), merge(outcomes))
        })
        .collect();
    Matrix { cells: results.into_iter().collect() }
}

/// The matrix the chain of levels is meant to produce: each level keeps
/// everything below it and adds a band of tasks.
pub fn expected_matrix() -> Matrix {
    let reach = |l: Level| match l {
        Level::I => 1,
        Level::E1 => 3,
        Level::E2 => 6,
        Level::E3 => 9,
    };
    let mut m = Matrix::default();
    for level in Level::ALL {
        for (i, t) in TaskId::ALL.into_iter().enumerate() {
            let o = if i < reach(level) { Outcome::Solved } else { Outcome::Inaccessible };
            m.cells.insert((level, t), o);
        }
    }
    m
}

/// Cells whose outcome kinds differ. Only solved versus not solved and the
/// kind of failure are compared; reasons are ignored.
pub fn compare(expected: &Matrix, actual: &Matrix) -> Vec<CellDiff> {
    let keys: std::collections::BTreeSet<_> = expected.cells.keys().chain(actual.cells.keys()).collect();
    keys.into_iter()
        .filter_map(|k| {
            let e = expected.cells.get(k).map(|o| o.kind().to_string());
            let a = actual.cells.get(k).map(|o| o.kind().to_string());
            (e != a).then(|| CellDiff { level: k.0, task: k.1, expected: e, actual: a })
        })
        .collect()
}

/// Like [`compare`] but only on solvedness, which is what the capability
/// chain promises.
pub fn compare_solved(expected: &Matrix, actual: &Matrix) -> Vec<CellDiff> {
    compare(expected, actual)
        .into_iter()
        .filter(|d| (d.expected.as_deref() == Some("Solved")) != (d.actual.as_deref() == Some("Solved")))
        .collect()
}
