//! Recursive-descent parser for single-variable expressions.
//!
//! ```text
//! expr     = term { ("+" | "-") term } ;
//! term     = unary { ("*" | "/") unary } ;
//! unary    = "-" unary | power ;
//! power    = primary [ "^" exponent ] ;
//! exponent = [ "-" ] digits ;
//! primary  = number | "x" | ident "(" expr ")" | "(" expr ")" ;
//! number   = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
//! ident    = "sin" | "cos" | "exp" | "ln" | "arctan" | "atan" | "sqrt" | "abs" ;
//! ```
//!
//! Positions in errors are byte offsets from the start of the input.

use thiserror::Error;

use super::ast::{BinOp, Expr, UnaryFn};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("empty expression")]
    Empty,
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected {0:?}")]
    UnexpectedToken(String),
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("exponent must be an integer literal")]
    NonIntegerExponent,
    #[error("chained exponents need parentheses")]
    ChainedExponent,
    #[error("malformed number {0:?}")]
    BadNumber(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at position {position}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Number(s) | Token::Ident(s) => s.clone(),
            Token::Plus => "+".into(),
            Token::Minus => "-".into(),
            Token::Star => "*".into(),
            Token::Slash => "/".into(),
            Token::Caret => "^".into(),
            Token::LParen => "(".into(),
            Token::RParen => ")".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Token::Plus),
            b'-' => Some(Token::Minus),
            b'*' => Some(Token::Star),
            b'/' => Some(Token::Slash),
            b'^' => Some(Token::Caret),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, start));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == b'.' {
            i = scan_number(bytes, i);
            let lexeme = &text[start..i];
            if !is_valid_number(lexeme) {
                return Err(ParseError {
                    kind: ParseErrorKind::BadNumber(lexeme.to_string()),
                    position: start,
                });
            }
            out.push((Token::Number(lexeme.to_string()), start));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Token::Ident(text[start..i].to_string()), start));
        } else {
            let ch = text[start..].chars().next().unwrap_or('?');
            return Err(ParseError {
                kind: ParseErrorKind::UnexpectedChar(ch),
                position: start,
            });
        }
    }
    out.push((Token::End, text.len()));
    Ok(out)
}

fn scan_number(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
        i += 1;
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        if j < bytes.len() && bytes[j].is_ascii_digit() {
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            i = j;
        }
    }
    i
}

fn is_valid_number(lexeme: &str) -> bool {
    let mantissa = lexeme.split(['e', 'E']).next().unwrap_or("");
    let mut parts = mantissa.split('.');
    let whole = parts.next().unwrap_or("");
    let frac = parts.next();
    if parts.next().is_some() {
        return false;
    }
    !(whole.is_empty() && frac.is_none_or(str::is_empty))
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].0.clone();
        if tok != Token::End {
            self.pos += 1;
        }
        tok
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            position: self.offset(),
        }
    }

    fn unexpected(&self) -> ParseError {
        match self.peek() {
            Token::End => self.error_here(ParseErrorKind::UnexpectedEnd),
            tok => self.error_here(ParseErrorKind::UnexpectedToken(tok.describe())),
        }
    }

    fn expect(&mut self, want: Token) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Plus => BinOp::Add,
                Token::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Token::Star => BinOp::Mul,
                Token::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Token::Minus {
            self.bump();
            return Ok(Expr::unary(UnaryFn::Neg, self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if *self.peek() != Token::Caret {
            return Ok(base);
        }
        self.bump();
        let exponent = self.exponent()?;
        if *self.peek() == Token::Caret {
            return Err(self.error_here(ParseErrorKind::ChainedExponent));
        }
        Ok(Expr::pow(base, exponent))
    }

    fn exponent(&mut self) -> Result<i32, ParseError> {
        let start = self.offset();
        let negative = *self.peek() == Token::Minus;
        if negative {
            self.bump();
        }
        let non_integer = ParseError {
            kind: ParseErrorKind::NonIntegerExponent,
            position: start,
        };
        match self.peek() {
            Token::Number(text) if text.bytes().all(|b| b.is_ascii_digit()) => {
                let magnitude: i32 = text.parse().map_err(|_| non_integer.clone())?;
                self.bump();
                Ok(if negative { -magnitude } else { magnitude })
            }
            Token::End => Err(self.error_here(ParseErrorKind::UnexpectedEnd)),
            _ => Err(non_integer),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Token::Number(text) => {
                self.bump();
                Ok(Expr::Literal(text))
            }
            Token::Ident(name) if name == "x" => {
                self.bump();
                Ok(Expr::Var)
            }
            Token::Ident(name) => {
                let op = UnaryFn::from_name(&name).ok_or(ParseError {
                    kind: ParseErrorKind::UnknownIdentifier(name.clone()),
                    position: at,
                })?;
                self.bump();
                self.expect(Token::LParen)?;
                let arg = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(Expr::unary(op, arg))
            }
            Token::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Parses `text` into an expression tree.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError {
            kind: ParseErrorKind::Empty,
            position: 0,
        });
    }
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let expr = parser.expr()?;
    match parser.peek() {
        Token::End => Ok(expr),
        _ => Err(parser.unexpected()),
    }
}
