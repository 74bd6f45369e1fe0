use super::{KbError, KnowledgeBase};
use crate::dsl::{parse, print_canonical, SourceText};
use crate::ir::Level;
use crate::redescribe::MasteryEntry;
use crate::tasks::Outcome;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

pub const MANIFEST: &str = "manifest.tsv";
const UNITS_HEADER: &str = "# units";
const LOG_HEADER: &str = "# log";

fn io(path: &Path, e: std::io::Error) -> KbError {
    KbError::Io(format!("{}: {e}", path.display()))
}

fn file_name(name: &str, level: Level) -> String {
    format!("{name}.{level}.rr")
}

impl KnowledgeBase {
    /// Write the knowledge base as a directory: `manifest.tsv` plus one
    /// canonical `.rr` file per unit.
    pub fn save(&self, dir: &Path) -> Result<(), KbError> {
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let mut manifest = format!("{UNITS_HEADER}\n");
        for u in self.units() {
            let file = file_name(&u.name, u.level);
            let _ = writeln!(manifest, "{file}\t{}\t{}\t{}", u.name, u.level, u.domain);
            let path = dir.join(&file);
            fs::write(&path, print_canonical(std::slice::from_ref(u))).map_err(|e| io(&path, e))?;
        }
        let _ = writeln!(manifest, "{LOG_HEADER}");
        for e in self.log.entries() {
            let _ = writeln!(manifest, "{}\t{}\t{}\t{}", e.unit, e.task, e.outcome.kind(), e.tick);
        }
        let path = dir.join(MANIFEST);
        fs::write(&path, manifest).map_err(|e| io(&path, e))
    }

    /// Read a directory written by [`save`](Self::save). A directory
    /// without a manifest is an empty knowledge base.
    pub fn load(dir: &Path) -> Result<KnowledgeBase, KbError> {
        if !dir.is_dir() {
            return Err(KbError::Io(format!("{}: not a directory", dir.display())));
        }
        let mut kb = KnowledgeBase::new();
        let path = dir.join(MANIFEST);
        if !path.exists() {
            return Ok(kb);
        }
        let manifest = fs::read_to_string(&path).map_err(|e| io(&path, e))?;
        let bad = |line: usize, msg: &str| KbError::Parse(format!("{}:{line}: {msg}", path.display()));
        let mut section = "";
        for (i, line) in manifest.lines().enumerate() {
            let n = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            if line == UNITS_HEADER || line == LOG_HEADER {
                section = line;
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            match section {
                UNITS_HEADER => {
                    let [file, name, level, domain] = cols[..] else { return Err(bad(n, "expected file, unit, level, domain")) };
                    let level: Level = level.parse().map_err(|e: String| bad(n, &e))?;
                    let unit_path = dir.join(file);
                    let text = SourceText::read(&unit_path).map_err(|e| io(&unit_path, e))?;
                    let mut units = parse(&text).map_err(|errs| KbError::Parse(errs[0].to_string()))?;
                    if units.len() != 1 {
                        return Err(bad(n, &format!("{file} holds {} units", units.len())));
                    }
                    let unit = units.remove(0);
                    if unit.name != name || unit.level != level || unit.domain != domain {
                        return Err(bad(n, &format!("{file} does not hold {name} at level {level} in {domain}")));
                    }
                    kb.insert(unit)?;
                }
                LOG_HEADER => {
                    let [unit, task, outcome, tick] = cols[..] else { return Err(bad(n, "expected unit, task, outcome, tick")) };
                    let outcome = match outcome {
                        "Solved" => Outcome::Solved,
                        "Inaccessible" => Outcome::Inaccessible,
                        "Failed" => Outcome::Failed(String::new()),
                        other => return Err(bad(n, &format!("unknown outcome `{other}`"))),
                    };
                    let tick = tick.parse().map_err(|_| bad(n, "tick is not a number"))?;
                    let entry = MasteryEntry { unit: unit.to_string(), task: task.to_string(), outcome, tick };
                    kb.log.push(entry).map_err(|_| bad(n, "ticks must increase"))?;
                }
                _ => return Err(bad(n, "line before any section header")),
            }
        }
        Ok(kb)
    }
}
