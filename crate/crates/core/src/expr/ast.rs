use std::fmt;

use crate::precision::PrecisionContext;
use crate::scalar::{DomainError, Scalar};

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryFn {
    Neg,
    Sin,
    Cos,
    Exp,
    Ln,
    Atan,
    Sqrt,
    Abs,
}

impl UnaryFn {
    /// Function-call spelling; `None` for negation.
    pub fn name(self) -> Option<&'static str> {
        match self {
            UnaryFn::Neg => None,
            UnaryFn::Sin => Some("sin"),
            UnaryFn::Cos => Some("cos"),
            UnaryFn::Exp => Some("exp"),
            UnaryFn::Ln => Some("ln"),
            UnaryFn::Atan => Some("arctan"),
            UnaryFn::Sqrt => Some("sqrt"),
            UnaryFn::Abs => Some("abs"),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryFn::Sin,
            "cos" => UnaryFn::Cos,
            "exp" => UnaryFn::Exp,
            "ln" => UnaryFn::Ln,
            "arctan" | "atan" => UnaryFn::Atan,
            "sqrt" => UnaryFn::Sqrt,
            "abs" => UnaryFn::Abs,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => PREC_SUM,
            BinOp::Mul | BinOp::Div => PREC_PRODUCT,
        }
    }
}

/// Expression tree over the single variable `x`.
///
/// Literals keep their decimal source text so they can be materialised at
/// whatever precision the evaluation runs at.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Literal(String),
    Var,
    Unary(UnaryFn, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Integer power; the exponent is always a literal.
    Pow(Box<Expr>, i32),
}

const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

impl Expr {
    pub fn literal(text: impl Into<String>) -> Self {
        Expr::Literal(text.into())
    }

    pub fn unary(op: UnaryFn, arg: Expr) -> Self {
        Expr::Unary(op, Box::new(arg))
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Self {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn pow(base: Expr, exponent: i32) -> Self {
        Expr::Pow(Box::new(base), exponent)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Literal(_) | Expr::Var => PREC_ATOM,
            Expr::Unary(UnaryFn::Neg, _) => PREC_NEG,
            Expr::Unary(..) => PREC_ATOM,
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Pow(..) => PREC_POW,
        }
    }

    /// Evaluates the expression with `x` bound to `at`. Works for any
    /// [`Scalar`]: plain reals give `f(x)`, seeded jets give the Taylor
    /// expansion of `f` about `x`.
    pub fn eval<T: Scalar>(&self, at: &T, ctx: &PrecisionContext) -> Result<T, EvalError> {
        let wrap = |kind: DomainError| EvalError {
            kind,
            subexpr: self.to_string(),
        };
        Ok(match self {
            Expr::Var => at.clone(),
            Expr::Literal(text) => {
                let value = ctx
                    .parse_decimal(text)
                    .expect("literals are validated by the parser");
                at.constant_like(value)
            }
            Expr::Unary(op, arg) => {
                let a = arg.eval(at, ctx)?;
                match op {
                    UnaryFn::Neg => a.neg(),
                    UnaryFn::Sin => a.sin(),
                    UnaryFn::Cos => a.cos(),
                    UnaryFn::Exp => a.exp().map_err(wrap)?,
                    UnaryFn::Ln => a.ln().map_err(wrap)?,
                    UnaryFn::Atan => a.atan(),
                    UnaryFn::Sqrt => a.sqrt().map_err(wrap)?,
                    UnaryFn::Abs => a.abs().map_err(wrap)?,
                }
            }
            Expr::Binary(op, lhs, rhs) => {
                let a = lhs.eval(at, ctx)?;
                let b = rhs.eval(at, ctx)?;
                match op {
                    BinOp::Add => a.add(&b),
                    BinOp::Sub => a.sub(&b),
                    BinOp::Mul => a.mul(&b),
                    BinOp::Div => a.div(&b).map_err(wrap)?,
                }
            }
            Expr::Pow(base, exponent) => base.eval(at, ctx)?.powi(*exponent).map_err(wrap)?,
        })
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Prints with the minimum parentheses needed for the parser to rebuild the
/// identical tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Literal(text) => f.write_str(text),
            Expr::Var => f.write_str("x"),
            Expr::Unary(UnaryFn::Neg, arg) => {
                f.write_str("-")?;
                arg.fmt_child(f, PREC_NEG)
            }
            Expr::Unary(op, arg) => write!(f, "{}({arg})", op.name().unwrap_or_default()),
            Expr::Binary(op, lhs, rhs) => {
                let p = op.precedence();
                lhs.fmt_child(f, p)?;
                write!(f, " {} ", op.symbol())?;
                rhs.fmt_child(f, p + 1)
            }
            Expr::Pow(base, exponent) => {
                base.fmt_child(f, PREC_ATOM)?;
                write!(f, "^{exponent}")
            }
        }
    }
}
