//! Expression and problem-file parsing.

mod expr;
mod lexer;
mod problem;

pub use crate::poly::VarContext;
pub use expr::{
    parse_in_ring, parse_polynomial, parse_rational, parse_tokens, DEFAULT_MAX_EXPONENT,
};
pub use lexer::{tokenize, Token, TokenKind};
pub use problem::{parse_problem_file, DeformationProblem, ProblemOverrides};
