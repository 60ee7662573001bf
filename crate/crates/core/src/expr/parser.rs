use std::fmt;

use thiserror::Error;

use super::ast::{Ast, BinOp, Exponent, Func, Literal};

#[derive(Clone, Debug, PartialEq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    UnknownSymbol { name: String, suggestions: Vec<String> },
    UnknownFunction { name: String, suggestions: Vec<String> },
    BadNumber(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn hint(f: &mut fmt::Formatter<'_>, s: &[String]) -> fmt::Result {
            if s.is_empty() {
                Ok(())
            } else {
                write!(f, " (did you mean {}?)", s.join(", "))
            }
        }
        match self {
            Self::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            Self::UnexpectedToken { found, expected } => {
                write!(f, "expected {expected}, found {found:?}")
            }
            Self::UnexpectedEnd { expected } => write!(f, "expected {expected}, found end of input"),
            Self::UnknownSymbol { name, suggestions } => {
                write!(f, "unknown symbol {name:?}")?;
                hint(f, suggestions)
            }
            Self::UnknownFunction { name, suggestions } => {
                write!(f, "unknown function {name:?}")?;
                hint(f, suggestions)
            }
            Self::BadNumber(s) => write!(f, "invalid number {s:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => v.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Op(c) => c.to_string(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
        } else if b.is_ascii_digit() || b == b'.' {
            let start = i;
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
            let s = &text[start..i];
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => out.push((start, Tok::Num(v))),
                _ => {
                    return Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::BadNumber(s.to_string()),
                    })
                }
            }
        } else if b.is_ascii_alphabetic() || b == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if b"+-*/^()".contains(&b) {
            out.push((i, Tok::Op(b as char)));
            i += 1;
        } else {
            let c = text[i..].chars().next().expect("in bounds");
            return Err(ParseError {
                offset: i,
                kind: ParseErrorKind::UnexpectedChar(c),
            });
        }
    }
    Ok(out)
}

/// Names close to `name` (edit distance ≤ 2 or sharing a prefix).
fn suggest<'a>(name: &str, candidates: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut scored: Vec<(usize, &str)> = candidates
        .filter_map(|c| {
            let d = strsim::levenshtein(name, c);
            (d <= 2 || c.starts_with(name) || name.starts_with(c)).then_some((d, c))
        })
        .collect();
    scored.sort();
    scored.dedup();
    scored.into_iter().map(|(_, c)| c.to_string()).collect()
}

pub(crate) struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    coords: &'a [String],
    params: &'a [String],
}

impl<'a> Parser<'a> {
    pub(crate) fn new(
        text: &str,
        coords: &'a [String],
        params: &'a [String],
    ) -> Result<Self, ParseError> {
        Ok(Self {
            toks: lex(text)?,
            pos: 0,
            end: text.len(),
            coords,
            params,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn error(&self, expected: &'static str) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind: match self.peek() {
                Some(t) => ParseErrorKind::UnexpectedToken {
                    found: t.describe(),
                    expected,
                },
                None => ParseErrorKind::UnexpectedEnd { expected },
            },
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, expected: &'static str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    pub(crate) fn parse_all(mut self) -> Result<Ast, ParseError> {
        let ast = self.expr()?;
        if self.pos < self.toks.len() {
            return Err(self.error("operator or end of input"));
        }
        Ok(ast)
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat('+') {
                BinOp::Add
            } else if self.eat('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            lhs = Ast::Binary(op, Box::new(lhs), Box::new(self.term()?));
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat('*') {
                BinOp::Mul
            } else if self.eat('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            lhs = Ast::Binary(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if self.eat('-') {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Ast, ParseError> {
        let base = self.base()?;
        if self.eat('^') {
            return Ok(Ast::Pow(Box::new(base), self.exponent()?));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<Exponent, ParseError> {
        let base = self.literal()?;
        let next = if self.eat('^') {
            Some(Box::new(self.exponent()?))
        } else {
            None
        };
        Ok(Exponent { base, next })
    }

    fn signed_number(&mut self, expected: &'static str) -> Result<f64, ParseError> {
        let sign = if self.eat('-') { -1.0 } else { 1.0 };
        match self.peek() {
            Some(Tok::Num(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(sign * v)
            }
            _ => Err(self.error(expected)),
        }
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        if self.eat('(') {
            let p = self.signed_number("numerator of a constant exponent")?;
            self.expect('/', "'/' in a ratio exponent")?;
            let q = match self.peek() {
                Some(Tok::Num(v)) => *v,
                _ => return Err(self.error("denominator of a constant exponent")),
            };
            self.pos += 1;
            self.expect(')', "')'")?;
            return Ok(Literal::Ratio(p, q));
        }
        Ok(Literal::Number(self.signed_number("constant exponent")?))
    }

    fn base(&mut self) -> Result<Ast, ParseError> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Ast::Number(v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(')', "')'")?;
                Ok(Ast::Group(Box::new(inner)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Op('(')) {
                    let func = Func::from_name(&name).ok_or_else(|| ParseError {
                        offset,
                        kind: ParseErrorKind::UnknownFunction {
                            suggestions: suggest(&name, Func::ALL.iter().map(|f| f.name())),
                            name: name.clone(),
                        },
                    })?;
                    self.pos += 1;
                    let arg = self.expr()?;
                    self.expect(')', "')'")?;
                    return Ok(Ast::Call(func, Box::new(arg)));
                }
                self.symbol(&name, offset)
            }
            _ => Err(self.error("number, symbol, function call or '('")),
        }
    }

    fn symbol(&self, name: &str, offset: usize) -> Result<Ast, ParseError> {
        if let Some(i) = self.coords.iter().position(|c| c == name) {
            return Ok(Ast::Coord(i));
        }
        if let Some(i) = self.params.iter().position(|c| c == name) {
            return Ok(Ast::Param(i));
        }
        if let Some(i) = name
            .strip_prefix('x')
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&i| i < self.coords.len())
        {
            return Ok(Ast::Coord(i));
        }
        let generic: Vec<String> = (0..self.coords.len()).map(|i| format!("x{i}")).collect();
        let candidates = self
            .coords
            .iter()
            .chain(self.params)
            .chain(&generic)
            .map(String::as_str);
        Err(ParseError {
            offset,
            kind: ParseErrorKind::UnknownSymbol {
                name: name.to_string(),
                suggestions: suggest(name, candidates),
            },
        })
    }
}
