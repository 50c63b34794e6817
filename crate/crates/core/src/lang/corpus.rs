//! Line-oriented corpus files: one formula or term per line. Blank lines and
//! lines whose first non-blank text is `#` followed by whitespace (or nothing)
//! are comments; `#a0` and `#{...}` at line start are element literals.

use super::{parse_formula, parse_term, Formula, LangError, Term};

/// Closed formulas for the equivariance suite.
pub const FORMULA_CORPUS: &str = include_str!("../../corpus/formulas.zfa");
/// Closed terms for term equivariance.
pub const TERM_CORPUS: &str = include_str!("../../corpus/terms.zfa");
/// Pure formulas with one or two free variables.
pub const PURE_CORPUS: &str = include_str!("../../corpus/pure.zfa");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry<T> {
    /// 1-based line number in the source.
    pub line: usize,
    pub source: String,
    pub item: T,
}

fn is_comment(line: &str) -> bool {
    match line.strip_prefix('#') {
        Some(rest) => rest.is_empty() || rest.starts_with(char::is_whitespace),
        None => false,
    }
}

fn parse_lines<T>(
    src: &str,
    parse: impl Fn(&str) -> Result<T, LangError>,
) -> Result<Vec<CorpusEntry<T>>, LangError> {
    let mut out = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let text = raw.trim();
        if text.is_empty() || is_comment(text) {
            continue;
        }
        let line = idx + 1;
        let indent = raw.len() - raw.trim_start().len();
        let item = parse(text).map_err(|e| match e {
            LangError::Syntax { col, message, .. } => LangError::Syntax {
                line,
                col: col + indent,
                message,
            },
            LangError::UnknownElement { col, message, .. } => LangError::UnknownElement {
                line,
                col: col + indent,
                message,
            },
            other => other,
        })?;
        out.push(CorpusEntry {
            line,
            source: text.to_owned(),
            item,
        });
    }
    Ok(out)
}

pub fn parse_formula_corpus(src: &str) -> Result<Vec<CorpusEntry<Formula>>, LangError> {
    parse_lines(src, parse_formula)
}

pub fn parse_term_corpus(src: &str) -> Result<Vec<CorpusEntry<Term>>, LangError> {
    parse_lines(src, parse_term)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{print_formula, print_term};

    #[test]
    fn comments_and_literals() {
        let src = "# heading\n\n  #\n#a0 in Atoms\n   #{} = empty\n";
        let parsed = parse_formula_corpus(src).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0].line, 4);
        assert_eq!(parsed[1].line, 5);
    }

    #[test]
    fn errors_report_corpus_line() {
        let err = parse_formula_corpus("x = x\n  x = \n").unwrap_err();
        assert_eq!(
            err,
            LangError::Syntax {
                line: 2,
                col: 6,
                message: "expected a term, found end of input".into()
            }
        );
    }

    #[test]
    fn shipped_corpora_parse_and_round_trip() {
        let formulas = parse_formula_corpus(FORMULA_CORPUS).unwrap();
        assert!(formulas.len() >= 30);
        for e in &formulas {
            assert!(e.item.is_closed(), "line {} is open", e.line);
            assert_eq!(parse_formula(&print_formula(&e.item)).unwrap(), e.item);
        }
        let terms = parse_term_corpus(TERM_CORPUS).unwrap();
        for e in &terms {
            assert!(e.item.is_closed(), "line {} is open", e.line);
            assert_eq!(parse_term(&print_term(&e.item)).unwrap(), e.item);
        }
        let pure = parse_formula_corpus(PURE_CORPUS).unwrap();
        assert!(pure.len() >= 10);
        for e in &pure {
            let n = e.item.free_vars().len();
            assert!(e.item.is_pure() && (1..=2).contains(&n), "line {}", e.line);
            assert_eq!(parse_formula(&print_formula(&e.item)).unwrap(), e.item);
        }
    }
}
