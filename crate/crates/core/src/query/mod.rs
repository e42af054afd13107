//! TEG-QL: syntax tree, parser, canonical rendering and alias resolution.

mod ast;
mod bindings;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

pub use ast::*;
pub use bindings::{resolve_bindings, BindingTable, SemanticError, StepRef, VarId, Variable};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;

/// A parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at line {}, column {}: ", self.line, self.column)?;
        if !self.message.is_empty() {
            write!(f, "{}", self.message)?;
            if self.expected.is_empty() {
                return write!(f, " (found {})", self.found);
            }
            f.write_str("; ")?;
        }
        match self.expected.as_slice() {
            [] => write!(f, "unexpected {}", self.found),
            [one] => write!(f, "expected {one}, found {}", self.found),
            many => write!(f, "expected one of {}, found {}", many.join(", "), self.found),
        }
    }
}

/// Canonical text for `q`.
pub fn render(q: &Query) -> String {
    q.to_string()
}
