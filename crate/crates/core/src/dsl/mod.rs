//! Textual syntax for concept units: a parser into the IR and a canonical printer.
//!
//! ```
//! use rr_core::dsl::{parse, print_canonical, SourceText};
//!
//! let src = SourceText::memory("@level(I)\ninstance Tiny {\nprivate:\n    const Person ME;\n    const Apple A;\n    ME.PointTo(A);\n}\n");
//! let units = parse(&src).unwrap();
//! assert_eq!(print_canonical(&units), src.text);
//! ```

mod lexer;
mod parser;
mod printer;

pub use parser::{DEFAULT_DOMAIN, GLOBALS_DOMAIN};
pub use printer::{print_canonical, print_expr, print_unit};

use crate::ir::{validate, ConceptUnit};
use std::fmt;
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceText {
    pub text: String,
    /// File path, or `<memory>`.
    pub origin: String,
}

impl SourceText {
    pub fn memory(text: impl Into<String>) -> Self {
        SourceText { text: text.into(), origin: "<memory>".to_string() }
    }

    pub fn read(path: &Path) -> std::io::Result<Self> {
        let bytes = std::fs::read(path)?;
        Ok(SourceText { text: String::from_utf8_lossy(&bytes).into_owned(), origin: path.display().to_string() })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, expected: impl Into<String>, found: impl Into<String>) -> Self {
        ParseError { line, column, expected: expected.into(), found: found.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: expected {}, found {}", self.line, self.column, self.expected, self.found)
    }
}

impl std::error::Error for ParseError {}

/// Parse and validate each unit. Either every unit is returned or none is.
/// Cross-unit checks are left to [`crate::ir::validate_set`], since a file
/// may refer to units defined elsewhere.
pub fn parse(src: &SourceText) -> Result<Vec<ConceptUnit>, Vec<ParseError>> {
    let units = parse_unvalidated(src)?;
    let mut errs = Vec::new();
    for u in &units {
        let pos = u.origin.unwrap_or_default();
        for d in validate(u) {
            errs.push(ParseError::new(pos.line.max(1), pos.column.max(1), format!("a unit satisfying {}", d.rule), d.to_string()));
        }
    }
    if errs.is_empty() {
        Ok(units)
    } else {
        Err(errs)
    }
}

/// Syntax only; the units may violate level discipline.
pub fn parse_unvalidated(src: &SourceText) -> Result<Vec<ConceptUnit>, Vec<ParseError>> {
    parser::parse_units(&src.text).map_err(|e| vec![e])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unclosed_unit_reports_end_of_input() {
        let errs = parse(&SourceText::memory("@level(I)\ninstance X {")).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].found, "end of input");
        assert_eq!(errs[0].line, 2);
    }

    #[test]
    fn empty_source_is_empty_set() {
        assert_eq!(parse(&SourceText::memory("")).unwrap(), Vec::new());
        assert_eq!(print_canonical(&[]), "");
    }

    #[test]
    fn missing_level_is_an_error() {
        let errs = parse(&SourceText::memory("instance X {\n}")).unwrap_err();
        assert!(errs[0].expected.contains("@level"));
    }

    #[test]
    fn deep_nesting_is_rejected_not_overflowed() {
        let src = format!("@level(E1)\nclass X {{\nprotected:\n    int f() {{\n        return {}1;\n    }}\n}}\n", "(".repeat(100_000));
        assert!(parse(&SourceText::memory(src)).is_err());
    }
}
