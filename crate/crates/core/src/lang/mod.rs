//! The first-order language of sets with atoms: syntax trees, the ASCII
//! concrete syntax, free variables, substitution of element constants, and
//! the meta-level permutation action on closed syntax.

mod ast;
mod corpus;
mod parser;
mod printer;

use thiserror::Error;

pub use ast::{Formula, Term};
pub use corpus::{
    parse_formula_corpus, parse_term_corpus, CorpusEntry, FORMULA_CORPUS, PURE_CORPUS,
    TERM_CORPUS,
};
pub use parser::{parse_formula, parse_term};
pub use printer::{print_formula, print_term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("unknown element literal at {line}:{col}: {message}")]
    UnknownElement {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("open syntax, free variables {}: substitute constants first", .0.join(", "))]
    Open(Vec<String>),
}
