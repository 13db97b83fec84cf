//! The textual expression language.
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | power
//! power := atom ("^" unary)?
//! atom  := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
//! ```
//!
//! Numbers are exact decimals (`2.5`, `1e-3`). Exponents must fold to an
//! integer constant. Identifiers are the declared variables of a
//! [`PhaseSpace`](crate::canonical::PhaseSpace) (`x1`, `p1`, `t`, `xdot1`,
//! `pdot1`, ...) or one of `sin cos exp log sqrt` applied to a single
//! argument.

mod lexer;
mod parser;
mod render;

use std::fmt;

use thiserror::Error;

pub use parser::parse;
pub use render::render;

use crate::canonical::PhaseSpace;
use crate::symcore::Expr;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected token at byte {offset}")]
    UnexpectedToken { offset: usize },
    #[error("unexpected end of input at byte {offset}")]
    UnexpectedEnd { offset: usize },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("`{name}` takes exactly one argument (byte {offset})")]
    ArityMismatch { name: String, offset: usize },
    #[error("exponent at byte {offset} is not an integer constant")]
    NonIntegerExponent { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::UnexpectedToken { offset }
            | ParseError::UnexpectedEnd { offset }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::ArityMismatch { offset, .. }
            | ParseError::NonIntegerExponent { offset } => *offset,
        }
    }
}

/// Expression text together with a label naming where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceExpr {
    pub text: String,
    pub origin: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct SourceError {
    pub origin: String,
    pub text: String,
    #[source]
    pub error: ParseError,
}

impl fmt::Display for SourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} in {:?}", self.origin, self.error, self.text)
    }
}

impl SourceExpr {
    pub fn new(text: impl Into<String>, origin: impl Into<String>) -> Self {
        SourceExpr { text: text.into(), origin: origin.into() }
    }

    pub fn parse(&self, space: &PhaseSpace) -> Result<Expr, SourceError> {
        parse(&self.text, space).map_err(|error| SourceError {
            origin: self.origin.clone(),
            text: self.text.clone(),
            error,
        })
    }
}
