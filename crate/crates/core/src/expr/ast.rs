use std::fmt;

use crate::geometry::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply<R: Real>(self, x: &R) -> R {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

/// Constant exponent: a signed number or a parenthesised signed ratio.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Literal {
    Number(f64),
    Ratio(f64, f64),
}

impl Literal {
    pub fn value(self) -> f64 {
        match self {
            Literal::Number(v) => v,
            Literal::Ratio(p, q) => p / q,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Number(v) => write!(f, "{v}"),
            Literal::Ratio(p, q) => write!(f, "({p}/{q})"),
        }
    }
}

/// Right-associative chain `l1 ^ l2 ^ ...` of literals.
#[derive(Clone, Debug, PartialEq)]
pub struct Exponent {
    pub base: Literal,
    pub next: Option<Box<Exponent>>,
}

impl Exponent {
    pub fn value(&self) -> f64 {
        match &self.next {
            None => self.base.value(),
            Some(e) => self.base.value().powf(e.value()),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        if let Some(e) = &self.next {
            write!(f, "^{e}")?;
        }
        Ok(())
    }
}

/// Parsed expression. Symbols are resolved to coordinate or parameter
/// slots at parse time; `names` on the enclosing [`super::Expression`]
/// keep the spelling for printing.
#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Number(f64),
    Coord(usize),
    Param(usize),
    Call(Func, Box<Ast>),
    Neg(Box<Ast>),
    Binary(BinOp, Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, Exponent),
    Group(Box<Ast>),
}

impl Ast {
    /// Evaluates at coordinates `x`. `x` must be non-empty; its first
    /// entry fixes the jet dimension of constants.
    pub fn eval<R: Real>(&self, x: &[R], params: &[f64]) -> R {
        match self {
            Ast::Number(v) => x[0].lift(*v),
            Ast::Coord(i) => x[*i].clone(),
            Ast::Param(i) => x[0].lift(params[*i]),
            Ast::Call(f, a) => f.apply(&a.eval(x, params)),
            Ast::Neg(a) => -a.eval(x, params),
            Ast::Binary(op, a, b) => {
                let (a, b) = (a.eval(x, params), b.eval(x, params));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                }
            }
            Ast::Pow(a, e) => {
                let base = a.eval(x, params);
                let p = e.value();
                if p.fract() == 0.0 && p.abs() <= i32::MAX as f64 {
                    base.powi(p as i32)
                } else {
                    base.powf(p)
                }
            }
            Ast::Group(a) => a.eval(x, params),
        }
    }

    pub(crate) fn write(
        &self,
        f: &mut fmt::Formatter<'_>,
        coords: &[String],
        params: &[String],
    ) -> fmt::Result {
        match self {
            Ast::Number(v) => write!(f, "{v}"),
            Ast::Coord(i) => f.write_str(&coords[*i]),
            Ast::Param(i) => f.write_str(&params[*i]),
            Ast::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write(f, coords, params)?;
                f.write_str(")")
            }
            Ast::Neg(a) => {
                f.write_str("-")?;
                a.write(f, coords, params)
            }
            Ast::Binary(op, a, b) => {
                a.write(f, coords, params)?;
                f.write_str(op.symbol())?;
                b.write(f, coords, params)
            }
            Ast::Pow(a, e) => {
                a.write(f, coords, params)?;
                write!(f, "^{e}")
            }
            Ast::Group(a) => {
                f.write_str("(")?;
                a.write(f, coords, params)?;
                f.write_str(")")
            }
        }
    }
}
