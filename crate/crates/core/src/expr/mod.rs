//! Expression language for metric and connection components.
//!
//! ```text
//! expr     = term { ("+" | "-") term }
//! term     = unary { ("*" | "/") unary }
//! unary    = "-" unary | factor
//! factor   = base [ "^" exponent ]
//! exponent = literal [ "^" exponent ]
//! literal  = ["-"] number | "(" ["-"] number "/" number ")"
//! base     = number | symbol | func "(" expr ")" | "(" expr ")"
//! ```
//!
//! Symbols are the declared coordinate names, the generic names `x0`,
//! `x1`, ... and declared parameters. Parentheses are kept in the tree so
//! printing and reparsing gives back the same tree.

mod ast;
mod parser;

use std::fmt;

pub use ast::{Ast, BinOp, Exponent, Func, Literal};
pub use parser::{ParseError, ParseErrorKind};

use crate::geometry::Real;

/// A parsed expression together with the symbol tables it was resolved
/// against.
#[derive(Clone, Debug, PartialEq)]
pub struct Expression {
    pub ast: Ast,
    pub coords: Vec<String>,
    pub params: Vec<String>,
}

impl Expression {
    pub fn eval<R: Real>(&self, x: &[R], params: &[f64]) -> R {
        self.ast.eval(x, params)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ast.write(f, &self.coords, &self.params)
    }
}

fn owned(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

pub fn parse_expression(text: &str, coords: &[&str], params: &[&str]) -> Result<Expression, ParseError> {
    let (coords, params) = (owned(coords), owned(params));
    let ast = parser::Parser::new(text, &coords, &params)?.parse_all()?;
    Ok(Expression { ast, coords, params })
}

fn shift(mut e: ParseError, by: usize) -> ParseError {
    e.offset += by;
    e
}

/// Splits `text` at top-level commas, returning pieces with their byte
/// offsets.
fn split_top_level(text: &str, base: usize) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, b) in text.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b',' if depth == 0 => {
                out.push((base + start, &text[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((base + start, &text[start..]));
    out
}

/// An n×n component table: either `diag(e1, ..., en)` or n rows of n
/// comma-separated entries, rows separated by newlines or `;`. Returns
/// the entries row-major; off-diagonal entries of `diag` are the literal 0.
/// Error offsets refer to `text`.
pub fn parse_matrix(
    text: &str,
    coords: &[&str],
    params: &[&str],
) -> Result<Vec<Expression>, ParseError> {
    let n = coords.len();
    let trimmed = text.trim_start();
    let lead = text.len() - trimmed.len();
    let parse_at = |(offset, piece): (usize, &str)| {
        parse_expression(piece, coords, params).map_err(|e| shift(e, offset))
    };
    let dims_error = |offset: usize, found: usize, what: &'static str| ParseError {
        offset,
        kind: ParseErrorKind::UnexpectedToken {
            found: format!("{found} {what}"),
            expected: "one entry per coordinate",
        },
    };
    if let Some(rest) = trimmed.strip_prefix("diag") {
        let rest_trim = rest.trim_start();
        let open = lead + 4 + (rest.len() - rest_trim.len());
        let inner = rest_trim
            .strip_prefix('(')
            .and_then(|r| r.trim_end().strip_suffix(')'))
            .ok_or(ParseError {
                offset: open,
                kind: ParseErrorKind::UnexpectedToken {
                    found: rest_trim.chars().take(1).collect(),
                    expected: "'(' ... ')' around diagonal entries",
                },
            })?;
        let pieces = split_top_level(inner, open + 1);
        if pieces.len() != n {
            return Err(dims_error(open, pieces.len(), "diagonal entries"));
        }
        let diag = pieces.into_iter().map(parse_at).collect::<Result<Vec<_>, _>>()?;
        let zero = parse_expression("0", coords, params)?;
        return Ok((0..n * n)
            .map(|i| {
                if i / n == i % n {
                    diag[i / n].clone()
                } else {
                    zero.clone()
                }
            })
            .collect());
    }
    let mut rows = Vec::new();
    let mut start = 0;
    for (i, b) in text.bytes().enumerate().chain(std::iter::once((text.len(), b'\n'))) {
        if b == b'\n' || b == b';' {
            let row = &text[start..i.min(text.len())];
            if !row.trim().is_empty() {
                rows.push((start, row));
            }
            start = i + 1;
        }
    }
    if rows.len() != n {
        return Err(dims_error(0, rows.len(), "rows"));
    }
    let mut out = Vec::with_capacity(n * n);
    for (offset, row) in rows {
        let pieces = split_top_level(row, offset);
        if pieces.len() != n {
            return Err(dims_error(offset, pieces.len(), "entries in a row"));
        }
        for p in pieces {
            out.push(parse_at(p)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Jet2;
    use std::f64::consts::FRAC_PI_2;

    const X: [&str; 4] = ["x0", "x1", "x2", "x3"];

    #[test]
    fn sine_squared() {
        let e = parse_expression("sin(x2)^2", &X, &[]).unwrap();
        assert_eq!(e.eval(&[0.0, 0.0, FRAC_PI_2, 0.0], &[]), 1.0);
    }

    #[test]
    fn schwarzschild_factor() {
        let e = parse_expression("1 - 2*M/r", &["t", "r", "theta", "phi"], &["M"]).unwrap();
        assert_eq!(e.eval(&[0.0, 4.0, 1.0, 0.0], &[1.0]), 0.5);
        // generic name resolves to the same slot
        let g = parse_expression("1 - 2*M/x1", &["t", "r", "theta", "phi"], &["M"]).unwrap();
        assert_eq!(g.ast, e.ast);
    }

    #[test]
    fn syntax_error_offset() {
        let err = parse_expression("2*+x", &["x"], &[]).unwrap_err();
        assert_eq!(err.offset, 2);
        let err = parse_expression("(1 + x", &["x"], &[]).unwrap_err();
        assert_eq!(err.offset, 6);
        assert!(matches!(err.kind, ParseErrorKind::UnexpectedEnd { .. }));
    }

    #[test]
    fn unknown_symbol_suggests() {
        let err = parse_expression("sin(thet)", &["r", "theta"], &[]).unwrap_err();
        assert_eq!(err.offset, 4);
        match err.kind {
            ParseErrorKind::UnknownSymbol { suggestions, .. } => {
                assert_eq!(suggestions, vec!["theta".to_string()])
            }
            k => panic!("{k:?}"),
        }
        let err = parse_expression("sn(x)", &["x"], &[]).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::UnknownFunction { .. }));
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse_expression("-x^2 + 8/4/2 - 2^3^2", &["x"], &[]).unwrap();
        // -(9) + 1 - 2^9
        assert_eq!(e.eval(&[3.0], &[]), -9.0 + 1.0 - 512.0);
        let r = parse_expression("x^(1/2) * x^-1", &["x"], &[]).unwrap();
        assert!((r.eval(&[4.0], &[]) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn print_reparse() {
        let src = "-(a + 2.5)*sin(b)^(-3/2) - exp(-a)/b^2^-1";
        let e = parse_expression(src, &["a", "b"], &[]).unwrap();
        let printed = e.to_string();
        assert_eq!(parse_expression(&printed, &["a", "b"], &[]).unwrap(), e);
    }

    #[test]
    fn jet_matches_closure() {
        let e = parse_expression("sqrt(x0)*cosh(x1) - log(x0)/x1", &["x0", "x1"], &[]).unwrap();
        let x = [1.7, 0.4];
        let j = e.eval(&Jet2::variables(&x), &[]);
        let direct = |a: f64, b: f64| a.sqrt() * b.cosh() - a.ln() / b;
        assert!((j.value() - direct(x[0], x[1])).abs() < 1e-14);
        let dx0 = 0.5 / x[0].sqrt() * x[1].cosh() - 1.0 / (x[0] * x[1]);
        assert!((j.grad()[0] - dx0).abs() < 1e-14);
    }

    #[test]
    fn matrix_tables() {
        let d = parse_matrix("diag(1, -r^2)", &["t", "r"], &[]).unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(d[3].eval(&[0.0, 3.0], &[]), -9.0);
        assert_eq!(d[1].eval(&[0.0, 3.0], &[]), 0.0);
        assert!(parse_matrix("1, t\nt", &["t", "r"], &[]).is_err());
        let full = parse_matrix("1, t\nt, 2", &["t", "r"], &[]).unwrap();
        assert_eq!(full[1].eval(&[5.0, 0.0], &[]), 5.0);
        let err = parse_matrix("1, t\nt, 2*+r", &["t", "r"], &[]).unwrap_err();
        assert_eq!(err.offset, 10);
    }
}
