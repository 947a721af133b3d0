//! The term expression language: lexing, parsing, printing, classification
//! and evaluation of a formula for `a_n` as a function of the index `n`.

mod ast;
mod eval;
mod lex;
mod parse;
mod print;

pub use ast::{ExprKind, Node, Rationality, TermExpr};
pub use lex::{tokenize, Token, TokenKind};
