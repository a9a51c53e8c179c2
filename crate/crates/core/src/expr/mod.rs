//! Single-variable expressions: parsing, generic evaluation, and the
//! built-in test functions `f1`..`f7`.

mod ast;
mod builtins;
mod parser;

use thiserror::Error;

use crate::jet::TaylorJet;
use crate::precision::PrecisionContext;
use crate::scalar::{DomainError, HpReal};

pub use ast::{BinOp, Expr, UnaryFn};
pub use builtins::{builtin, builtins, BUILTIN_SOURCES};
pub use parser::{parse, ParseError, ParseErrorKind};

/// A domain error together with the sub-expression that raised it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} in `{subexpr}`")]
pub struct EvalError {
    pub kind: DomainError,
    pub subexpr: String,
}

/// A named real function of one variable.
///
/// `reference_root` and `default_x0` are decimal text and are materialised
/// at the caller's precision.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFunction {
    name: String,
    ast: Expr,
    reference_root: Option<String>,
    default_x0: Option<String>,
}

impl ScalarFunction {
    pub fn new(name: impl Into<String>, ast: Expr) -> Self {
        Self {
            name: name.into(),
            ast,
            reference_root: None,
            default_x0: None,
        }
    }

    /// Parses `text`; the function is named after its source.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Ok(Self::new(text.trim(), parse(text)?))
    }

    pub fn with_reference_root(mut self, root: impl Into<String>) -> Self {
        self.reference_root = Some(root.into());
        self
    }

    pub fn with_default_x0(mut self, x0: impl Into<String>) -> Self {
        self.default_x0 = Some(x0.into());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ast(&self) -> &Expr {
        &self.ast
    }

    pub fn reference_root_text(&self) -> Option<&str> {
        self.reference_root.as_deref()
    }

    pub fn default_x0_text(&self) -> Option<&str> {
        self.default_x0.as_deref()
    }

    pub fn reference_root(&self, ctx: &PrecisionContext) -> Option<HpReal> {
        self.reference_root
            .as_deref()
            .and_then(|t| ctx.parse_decimal(t))
    }

    pub fn default_x0(&self, ctx: &PrecisionContext) -> Option<HpReal> {
        self.default_x0
            .as_deref()
            .and_then(|t| ctx.parse_decimal(t))
    }

    /// `f(x)` at working precision.
    pub fn eval(&self, x: &HpReal, ctx: &PrecisionContext) -> Result<HpReal, EvalError> {
        let x = HpReal::with_val(ctx.bits(), x);
        self.ast.eval(&x, ctx)
    }

    /// Taylor expansion of `f` about `p` to `order`: coefficient `k` is
    /// `f^(k)(p) / k!`.
    pub fn jet(
        &self,
        p: &HpReal,
        order: usize,
        ctx: &PrecisionContext,
    ) -> Result<TaylorJet, EvalError> {
        let seed = TaylorJet::variable(HpReal::with_val(ctx.bits(), p), order);
        self.ast.eval(&seed, ctx)
    }

    /// `f'(x)` from a first-order jet.
    pub fn derivative(&self, x: &HpReal, ctx: &PrecisionContext) -> Result<HpReal, EvalError> {
        Ok(self.jet(x, 1, ctx)?.into_coeffs().swap_remove(1))
    }
}

/// Free-function form of [`ScalarFunction::jet`].
pub fn jet_eval(
    f: &ScalarFunction,
    p: &HpReal,
    order: usize,
    ctx: &PrecisionContext,
) -> Result<TaylorJet, EvalError> {
    f.jet(p, order, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    #[test]
    fn errors_name_the_offending_subexpression() {
        let ctx = PrecisionContext::default();
        let f = ScalarFunction::parse("1 + ln(x - 2)").unwrap();
        let err = f.eval(&ctx.int(1), &ctx).unwrap_err();
        assert_eq!(err.kind, DomainError::LogOfNonPositive);
        assert_eq!(err.subexpr, "ln(x - 2)");

        let g = ScalarFunction::parse("x / (x - 1)").unwrap();
        let err = g.eval(&ctx.int(1), &ctx).unwrap_err();
        assert_eq!(err.kind, DomainError::DivisionByZero);
        assert_eq!(err.subexpr, "x / (x - 1)");
    }

    #[test]
    fn jet_of_exp_and_sin_at_zero() {
        let ctx = PrecisionContext::default();
        let zero = ctx.zero();
        let e = jet_eval(&ScalarFunction::parse("exp(x)").unwrap(), &zero, 3, &ctx).unwrap();
        let s = jet_eval(&ScalarFunction::parse("sin(x)").unwrap(), &zero, 3, &ctx).unwrap();
        let third = Float::with_val(512, 1) / 6u32;
        assert_eq!(e.coeff(0), &1);
        assert_eq!(e.coeff(1), &1);
        assert_eq!(*e.coeff(2), 0.5);
        assert_eq!(e.coeff(3), &third);
        assert_eq!(s.coeff(0), &0);
        assert_eq!(s.coeff(1), &1);
        assert_eq!(s.coeff(2), &0);
        assert_eq!(*s.coeff(3), -third);
    }

    #[test]
    fn precision_follows_context() {
        let ctx = PrecisionContext::new(128).unwrap();
        let f = ScalarFunction::parse("cos(x) - x").unwrap();
        let x = Float::with_val(1024, 1);
        assert_eq!(f.eval(&x, &ctx).unwrap().prec(), 128);
        assert_eq!(f.eval(&ctx.zero(), &ctx).unwrap(), 1);
    }
}
