//! The arithmetic contract shared by plain high-precision reals and Taylor
//! jets, so expressions can be evaluated over either.

use rug::ops::Pow;
use rug::Float;
use thiserror::Error;

/// A real number carried at the working precision of a
/// [`PrecisionContext`](crate::PrecisionContext).
pub type HpReal = Float;

/// Non-finite or undefined results. Never propagated silently as NaN/Inf.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DomainError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm of a non-positive number")]
    LogOfNonPositive,
    #[error("square root of a negative number")]
    SqrtOfNegative,
    #[error("function is not differentiable at this point")]
    NotDifferentiable,
    #[error("result is not finite")]
    NonFinite,
}

/// Arithmetic and elementary functions required by the expression
/// evaluator. Implemented for [`HpReal`] and [`TaylorJet`](crate::TaylorJet).
pub trait Scalar: Clone + Sized {
    /// A constant with the same shape (precision, jet order) as `self`.
    fn constant_like(&self, value: HpReal) -> Self;
    /// Point value (coefficient 0 for jets).
    fn point(&self) -> &HpReal;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Result<Self, DomainError>;
    fn neg(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn exp(&self) -> Result<Self, DomainError>;
    fn ln(&self) -> Result<Self, DomainError>;
    fn atan(&self) -> Self;
    fn sqrt(&self) -> Result<Self, DomainError>;
    fn abs(&self) -> Result<Self, DomainError>;
    fn powi(&self, exponent: i32) -> Result<Self, DomainError>;
}

pub(crate) fn finite(x: Float) -> Result<Float, DomainError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(DomainError::NonFinite)
    }
}

impl Scalar for Float {
    fn constant_like(&self, value: HpReal) -> Self {
        Float::with_val(self.prec(), value)
    }

    fn point(&self) -> &HpReal {
        self
    }

    fn add(&self, rhs: &Self) -> Self {
        Float::with_val(self.prec(), self + rhs)
    }

    fn sub(&self, rhs: &Self) -> Self {
        Float::with_val(self.prec(), self - rhs)
    }

    fn mul(&self, rhs: &Self) -> Self {
        Float::with_val(self.prec(), self * rhs)
    }

    fn div(&self, rhs: &Self) -> Result<Self, DomainError> {
        if rhs.is_zero() {
            return Err(DomainError::DivisionByZero);
        }
        finite(Float::with_val(self.prec(), self / rhs))
    }

    fn neg(&self) -> Self {
        -self.clone()
    }

    fn sin(&self) -> Self {
        self.clone().sin()
    }

    fn cos(&self) -> Self {
        self.clone().cos()
    }

    fn exp(&self) -> Result<Self, DomainError> {
        finite(self.clone().exp())
    }

    fn ln(&self) -> Result<Self, DomainError> {
        if *self <= 0 {
            return Err(DomainError::LogOfNonPositive);
        }
        finite(self.clone().ln())
    }

    fn atan(&self) -> Self {
        self.clone().atan()
    }

    fn sqrt(&self) -> Result<Self, DomainError> {
        if *self < 0 {
            return Err(DomainError::SqrtOfNegative);
        }
        Ok(self.clone().sqrt())
    }

    fn abs(&self) -> Result<Self, DomainError> {
        Ok(self.clone().abs())
    }

    fn powi(&self, exponent: i32) -> Result<Self, DomainError> {
        if exponent < 0 && self.is_zero() {
            return Err(DomainError::DivisionByZero);
        }
        finite(self.clone().pow(exponent))
    }
}
