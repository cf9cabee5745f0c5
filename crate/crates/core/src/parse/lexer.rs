use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

/// Splits an expression into tokens, tracking 1-based line/column positions.
pub fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let kind = if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            column += i - start;
            TokenKind::Int(digits.parse().expect("digit run parses"))
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            column += i - start;
            TokenKind::Ident(chars[start..i].iter().collect())
        } else {
            let kind = match c {
                '+' => TokenKind::Plus,
                '-' => TokenKind::Minus,
                '*' => TokenKind::Star,
                '/' => TokenKind::Slash,
                '^' => TokenKind::Caret,
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                other => {
                    return Err(Error::Lex {
                        line,
                        column,
                        message: format!("illegal character `{other}`"),
                    })
                }
            };
            i += 1;
            column += 1;
            kind
        };
        tokens.push(Token {
            kind,
            line: tl,
            column: tc,
        });
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<TokenKind> {
        tokenize(s).unwrap().into_iter().map(|t| t.kind).collect()
    }

    fn id(s: &str) -> TokenKind {
        TokenKind::Ident(s.into())
    }

    fn int(n: i64) -> TokenKind {
        TokenKind::Int(BigInt::from(n))
    }

    #[test]
    fn lexes_power_sum() {
        assert_eq!(
            kinds("x^2 + y"),
            vec![id("x"), TokenKind::Caret, int(2), TokenKind::Plus, id("y")]
        );
    }

    #[test]
    fn lexes_parenthesized_difference() {
        assert_eq!(
            kinds("(x - t)"),
            vec![
                TokenKind::LParen,
                id("x"),
                TokenKind::Minus,
                id("t"),
                TokenKind::RParen
            ]
        );
    }

    #[test]
    fn lexes_rational_literal() {
        assert_eq!(
            kinds("3/2*x"),
            vec![int(3), TokenKind::Slash, int(2), TokenKind::Star, id("x")]
        );
    }

    #[test]
    fn reports_position_of_illegal_character() {
        let err = tokenize("x +\n  y $").unwrap_err();
        assert_eq!(
            err,
            Error::Lex {
                line: 2,
                column: 5,
                message: "illegal character `$`".into()
            }
        );
    }
}
