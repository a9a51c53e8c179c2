//! One-step kernels for the derivative-free Steffensen-type iterations.
//!
//! Every kernel evaluates the formula exactly as written, with no damping,
//! fallbacks or safeguards. A denominator whose magnitude drops below the
//! context's breakdown floor is reported as [`StepError::DenominatorBreakdown`].
//!
//! `D = f(x + f(x)) - f(x - f(x))` is evaluated once per step and shared by
//! both lines of the two-line methods.

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

use rug::Float;
use thiserror::Error;

use crate::expr::{EvalError, ScalarFunction};
use crate::precision::PrecisionContext;
use crate::scalar::HpReal;

/// Something that can be evaluated at a point at working precision.
pub trait Objective {
    fn value(&self, x: &HpReal, ctx: &PrecisionContext) -> Result<HpReal, EvalError>;
}

impl Objective for ScalarFunction {
    fn value(&self, x: &HpReal, ctx: &PrecisionContext) -> Result<HpReal, EvalError> {
        self.eval(x, ctx)
    }
}

/// Adapts an infallible closure into an [`Objective`].
pub struct FnObjective<F>(pub F);

impl<F: Fn(&HpReal) -> HpReal> Objective for FnObjective<F> {
    fn value(&self, x: &HpReal, ctx: &PrecisionContext) -> Result<HpReal, EvalError> {
        let x = Float::with_val(ctx.bits(), x);
        Ok(Float::with_val(ctx.bits(), (self.0)(&x)))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StepError {
    #[error("{method}: denominator {denominator} fell below the breakdown floor")]
    DenominatorBreakdown {
        method: &'static str,
        denominator: &'static str,
    },
    #[error("|f(x)| is already below the convergence floor")]
    ResidualBelowFloor,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Result of one kernel application.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    /// `x_{n+1}`.
    pub next: HpReal,
    /// The intermediate point `y_n`, for methods that define one.
    pub aux: Option<HpReal>,
    /// Number of `f` evaluations consumed.
    pub evaluations: usize,
}

/// A derivative estimate held as the unevaluated quotient
/// `numerator / denominator`.
///
/// Keeping the quotient lets [`kou_step`] reproduce the printed
/// derivative-free formulas operation for operation; an analytic slope is
/// `s / 1`. Breakdown is judged on the numerator.
#[derive(Debug, Clone, PartialEq)]
pub struct Slope {
    pub numerator: HpReal,
    pub denominator: HpReal,
}

impl Slope {
    pub fn exact(value: HpReal) -> Self {
        let one = Float::with_val(value.prec(), 1);
        Self {
            numerator: value,
            denominator: one,
        }
    }

    pub fn value(&self) -> HpReal {
        Float::with_val(self.numerator.prec(), &self.numerator / &self.denominator)
    }
}

/// Iteration kernels, by stable lowercase identifier.
#[derive(Debug, Clone, PartialEq)]
pub enum MethodKind {
    Steffensen,
    Jain,
    Dehghan1,
    Dehghan2,
    Dehghan3,
    Cordero,
    Mkdf,
    /// Kou family with parameter `theta`; the slope is the exact derivative
    /// from a first-order jet.
    Kou {
        theta: HpReal,
    },
    /// Kou with `theta = -1` and a forward-difference slope.
    KouFd,
}

pub const METHOD_NAMES: [&str; 9] = [
    "steffensen",
    "jain",
    "dehghan1",
    "dehghan2",
    "dehghan3",
    "cordero",
    "mkdf",
    "kou",
    "kou_fd",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown method {0:?} (expected one of: {names})", names = METHOD_NAMES.join(", "))]
pub struct UnknownMethod(pub String);

impl MethodKind {
    /// The fourth-order Kou member, `theta = -1`.
    pub fn kou_fourth_order() -> Self {
        MethodKind::Kou {
            theta: Float::with_val(64, -1),
        }
    }

    pub fn kou(theta: HpReal) -> Self {
        MethodKind::Kou { theta }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MethodKind::Steffensen => "steffensen",
            MethodKind::Jain => "jain",
            MethodKind::Dehghan1 => "dehghan1",
            MethodKind::Dehghan2 => "dehghan2",
            MethodKind::Dehghan3 => "dehghan3",
            MethodKind::Cordero => "cordero",
            MethodKind::Mkdf => "mkdf",
            MethodKind::Kou { .. } => "kou",
            MethodKind::KouFd => "kou_fd",
        }
    }

    /// Order of convergence claimed for the method.
    pub fn claimed_order(&self) -> u32 {
        match self {
            MethodKind::Steffensen => 2,
            MethodKind::Jain
            | MethodKind::Dehghan1
            | MethodKind::Dehghan2
            | MethodKind::Dehghan3
            | MethodKind::KouFd => 3,
            MethodKind::Cordero | MethodKind::Mkdf => 4,
            MethodKind::Kou { theta } => {
                if *theta == -1 {
                    4
                } else {
                    3
                }
            }
        }
    }

    /// Applies one step of this method to `f` at `x`.
    pub fn step(
        &self,
        f: &ScalarFunction,
        x: &HpReal,
        ctx: &PrecisionContext,
    ) -> Result<StepOutcome, StepError> {
        match self {
            MethodKind::Steffensen => steffensen_step(f, x, ctx),
            MethodKind::Jain => jain_step(f, x, ctx),
            MethodKind::Dehghan1 => dehghan1_step(f, x, ctx),
            MethodKind::Dehghan2 => dehghan2_step(f, x, ctx),
            MethodKind::Dehghan3 => dehghan3_step(f, x, ctx),
            MethodKind::Cordero => cordero_step(f, x, ctx),
            MethodKind::Mkdf => mkdf_step(f, x, ctx),
            MethodKind::Kou { theta } => {
                let slope = Slope::exact(f.derivative(x, ctx)?);
                kou_step(f, x, theta, &slope, ctx)
            }
            MethodKind::KouFd => kou_fd_step(f, x, ctx),
        }
    }
}

impl FromStr for MethodKind {
    type Err = UnknownMethod;

    /// `kou` parses to the fourth-order member; use [`MethodKind::kou`] for
    /// other parameters.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "steffensen" => MethodKind::Steffensen,
            "jain" => MethodKind::Jain,
            "dehghan1" => MethodKind::Dehghan1,
            "dehghan2" => MethodKind::Dehghan2,
            "dehghan3" => MethodKind::Dehghan3,
            "cordero" => MethodKind::Cordero,
            "mkdf" => MethodKind::Mkdf,
            "kou" => MethodKind::kou_fourth_order(),
            "kou_fd" => MethodKind::KouFd,
            _ => return Err(UnknownMethod(s.to_string())),
        })
    }
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodKind::Kou { theta } if *theta != -1 => {
                write!(f, "kou(theta={})", theta.to_f64())
            }
            other => f.write_str(other.name()),
        }
    }
}

/// Counts `f` evaluations made through it.
struct Counted<'a, F: ?Sized> {
    f: &'a F,
    ctx: &'a PrecisionContext,
    calls: Cell<usize>,
}

impl<'a, F: Objective + ?Sized> Counted<'a, F> {
    fn new(f: &'a F, ctx: &'a PrecisionContext) -> Self {
        Self {
            f,
            ctx,
            calls: Cell::new(0),
        }
    }

    fn at(&self, x: &HpReal) -> Result<HpReal, EvalError> {
        self.calls.set(self.calls.get() + 1);
        self.f.value(x, self.ctx)
    }

    fn done(&self, next: HpReal, aux: Option<HpReal>) -> StepOutcome {
        StepOutcome {
            next,
            aux,
            evaluations: self.calls.get(),
        }
    }

    /// `f(x)`, refusing to continue when it is already at the root.
    fn residual(&self, x: &HpReal) -> Result<HpReal, StepError> {
        let fx = self.at(x)?;
        if fx.clone().abs() < *self.ctx.convergence_floor() {
            return Err(StepError::ResidualBelowFloor);
        }
        Ok(fx)
    }

    /// `f(x + h) - f(x - h)`.
    fn central(&self, x: &HpReal, h: &HpReal) -> Result<HpReal, EvalError> {
        let plus = self.at(&(x.clone() + h))?;
        let minus = self.at(&(x.clone() - h))?;
        Ok(plus - minus)
    }
}

fn guard(
    value: &HpReal,
    ctx: &PrecisionContext,
    method: &'static str,
    denominator: &'static str,
) -> Result<(), StepError> {
    if value.clone().abs() < *ctx.breakdown_floor() {
        Err(StepError::DenominatorBreakdown {
            method,
            denominator,
        })
    } else {
        Ok(())
    }
}

fn at_prec(x: &HpReal, ctx: &PrecisionContext) -> HpReal {
    Float::with_val(ctx.bits(), x)
}

/// Symmetric difference quotient `[f(x+f(x)) - f(x-f(x))] / (2 f(x))`,
/// returned as an unevaluated [`Slope`].
pub fn central_diff_slope<F: Objective + ?Sized>(
    f: &F,
    x: &HpReal,
    ctx: &PrecisionContext,
) -> Result<Slope, StepError> {
    let f = Counted::new(f, ctx);
    let x = at_prec(x, ctx);
    let fx = f.residual(&x)?;
    let d = f.central(&x, &fx)?;
    guard(&d, ctx, "central_diff_slope", "f(x+f(x)) - f(x-f(x))")?;
    Ok(Slope {
        numerator: d,
        denominator: fx * 2u32,
    })
}

/// Forward difference quotient `[f(x+f(x)) - f(x)] / f(x)`.
pub fn forward_diff_slope<F: Objective + ?Sized>(
    f: &F,
    x: &HpReal,
    ctx: &PrecisionContext,
) -> Result<Slope, StepError> {
    let f = Counted::new(f, ctx);
    let x = at_prec(x, ctx);
    let fx = f.residual(&x)?;
    forward_slope_from(&f, &x, fx)
}

fn forward_slope_from<F: Objective + ?Sized>(
    f: &Counted<'_, F>,
    x: &HpReal,
    fx: HpReal,
) -> Result<Slope, StepError> {
    let d = f.at(&(x.clone() + &fx))? - &fx;
    guard(&d, f.ctx, "forward_diff_slope", "f(x+f(x)) - f(x)")?;
    Ok(Slope {
        numerator: d,
        denominator: fx,
    })
}

/// `x' = x - f(x)^2 / [f(x+f(x)) - f(x)]`.
pub fn steffensen_step<F: Objective + ?Sized>(
    f: &F,
    x: &HpReal,
    ctx: &PrecisionContext,
) -> Result<StepOutcome, StepError> {
    let f = Counted::new(f, ctx);
    let x = at_prec(x, ctx);
    let fx = f.residual(&x)?;
    let d = f.at(&(x.clone() + &fx))? - &fx;
    guard(&d, ctx, "steffensen", "f(x+f(x)) - f(x)")?;
    let next = x - (fx.clone() * &fx) / d;
    Ok(f.done(next, None))
}

/// Steffensen predictor `y`, then
/// `x' = x - f(x)^3 / ([f(x+f(x)) - f(x)] [f(x) - f(y)])`.
pub fn jain_step<F: Objective + ?Sized>(
    f: &F,
    x: &HpReal,
    ctx: &PrecisionContext,
) -> Result<StepOutcome, StepError> {
    let f = Counted::new(f, ctx);
    let x = at_prec(x, ctx);
    let fx = f.residual(&x)?;
    let d = f.at(&(x.clone() + &fx))? - &fx;
    guard(&d, ctx, "jain", "f(x+f(x)) - f(x)")?;
    let fx2 = fx.clone() * &fx;
    let y = x.clone() - fx2.clone() / &d;
    let fy = f.at(&y)?;
    let diff = fx.clone() - &fy;
    guard(&diff, ctx, "jain", "f(x) - f(y)")?;
    let next = x - (fx2 * &fx) / (d * diff);
    Ok(f.done(next, Some(y)))
}

/// `y = x - 2f(x)^2/D`, `x' = x - 2f(x)[f(x)+f(y)]/D`.
pub fn dehghan1_step<F: Objective + ?Sized>(
    f: &F,
    x: &HpReal,
    ctx: &PrecisionContext,
) -> Result<StepOutcome, StepError> {
    let f = Counted::new(f, ctx);
    let x = at_prec(x, ctx);
    let fx = f.residual(&x)?;
    let d = f.central(&x, &fx)?;
    guard(&d, ctx, "dehghan1", "D")?;
    let two_fx = fx.clone() * 2u32;
    let y = x.clone() - (two_fx.clone() * &fx) / &d;
    let fy = f.at(&y)?;
    let next = x - (two_fx * (fx + &fy)) / d;
    Ok(f.done(next, Some(y)))
}

/// `y = x + 2f(x)^2/D`, `x' = x - 2f(x)[f(y)-f(x)]/D`.
pub fn dehghan2_step<F: Objective + ?Sized>(
    f: &F,
    x: &HpReal,
    ctx: &PrecisionContext,
) -> Result<StepOutcome, StepError> {
    let f = Counted::new(f, ctx);
    let x = at_prec(x, ctx);
    let fx = f.residual(&x)?;
    let d = f.central(&x, &fx)?;
    guard(&d, ctx, "dehghan2", "D")?;
    let two_fx = fx.clone() * 2u32;
    let y = x.clone() + (two_fx.clone() * &fx) / &d;
    let fy = f.at(&y)?;
    let next = x - (two_fx * (fy - &fx)) / d;
    Ok(f.done(next, Some(y)))
}

/// `y = x + 2f(x)^2/D`, `x' = x - 2f(x) / [f(y) f(u) + f(x) f(v)]` with
/// `f(u) = D` and `f(v) = f(y+f(y)) - f(y-f(y))`.
///
/// This is the formula as published. It is not exact on affine functions
/// (`f(x) = x` from `x = 1` gives `3/4`).
pub fn dehghan3_step<F: Objective + ?Sized>(
    f: &F,
    x: &HpReal,
    ctx: &PrecisionContext,
) -> Result<StepOutcome, StepError> {
    let f = Counted::new(f, ctx);
    let x = at_prec(x, ctx);
    let fx = f.residual(&x)?;
    let fu = f.central(&x, &fx)?;
    guard(&fu, ctx, "dehghan3", "D")?;
    let two_fx = fx.clone() * 2u32;
    let y = x.clone() + (two_fx.clone() * &fx) / &fu;
    let fy = f.at(&y)?;
    let fv = f.central(&y, &fy)?;
    let den = fy * fu + fx * fv;
    guard(&den, ctx, "dehghan3", "f(y)f(u) + f(x)f(v)")?;
    let next = x - two_fx / den;
    Ok(f.done(next, Some(y)))
}

/// `y = x - 2f(x)^2/D`, `x' = x - (2f(x)^2/D) [f(y)-f(x)] / [2f(y)-f(x)]`.
pub fn cordero_step<F: Objective + ?Sized>(
    f: &F,
    x: &HpReal,
    ctx: &PrecisionContext,
) -> Result<StepOutcome, StepError> {
    let f = Counted::new(f, ctx);
    let x = at_prec(x, ctx);
    let fx = f.residual(&x)?;
    let d = f.central(&x, &fx)?;
    guard(&d, ctx, "cordero", "D")?;
    let correction = (fx.clone() * &fx * 2u32) / d;
    let y = x.clone() - &correction;
    let fy = f.at(&y)?;
    let den = fy.clone() * 2u32 - &fx;
    guard(&den, ctx, "cordero", "2f(y) - f(x)")?;
    let next = x - correction * (fy - fx) / den;
    Ok(f.done(next, Some(y)))
}

/// Derivative-free fourth-order step:
/// `y = x - 2f(x)^2/D`,
/// `x' = x + 2f(x)[f(x)+f(y)]/D - 4f(x)^3 / (D [f(x) - f(y)])`.
///
/// The operations are ordered so the result is bit-identical to
/// [`kou_step`] with `theta = -1` and the central slope.
pub fn mkdf_step<F: Objective + ?Sized>(
    f: &F,
    x: &HpReal,
    ctx: &PrecisionContext,
) -> Result<StepOutcome, StepError> {
    let f = Counted::new(f, ctx);
    let x = at_prec(x, ctx);
    let fx = f.residual(&x)?;
    let d = f.central(&x, &fx)?;
    guard(&d, ctx, "mkdf", "D")?;
    let two_fx = fx.clone() * 2u32;
    let fx2 = fx.clone() * &fx;
    let y = x.clone() - (fx.clone() * &two_fx) / &d;
    let fy = f.at(&y)?;
    let diff = fx.clone() - &fy;
    guard(&diff, ctx, "mkdf", "f(x) - f(y)")?;
    let first = ((fx + &fy) * &two_fx) / &d;
    let second = (fx2 * &two_fx) / (d * diff) * 2u32;
    let next = x + first - second;
    Ok(f.done(next, Some(y)))
}

/// Kou family step with a caller-supplied slope `s`:
/// `y = x - f(x)/s`,
/// `x' = x - theta [f(x)+f(y)]/s - (1-theta) f(x)^2 / (s [f(x)-f(y)])`.
///
/// Evaluations count only the two `f` calls made here; producing the slope
/// is the caller's cost.
pub fn kou_step<F: Objective + ?Sized>(
    f: &F,
    x: &HpReal,
    theta: &HpReal,
    slope: &Slope,
    ctx: &PrecisionContext,
) -> Result<StepOutcome, StepError> {
    let f = Counted::new(f, ctx);
    let x = at_prec(x, ctx);
    let fx = f.residual(&x)?;
    kou_from(&f, x, fx, theta, slope)
}

fn kou_from<F: Objective + ?Sized>(
    f: &Counted<'_, F>,
    x: HpReal,
    fx: HpReal,
    theta: &HpReal,
    slope: &Slope,
) -> Result<StepOutcome, StepError> {
    let ctx = f.ctx;
    guard(&slope.numerator, ctx, "kou", "s")?;
    let theta = at_prec(theta, ctx);
    let one_minus_theta = ctx.int(1) - &theta;
    let (num, den) = (&slope.numerator, &slope.denominator);
    let y = x.clone() - (fx.clone() * den) / num;
    let fy = f.at(&y)?;
    let diff = fx.clone() - &fy;
    guard(&diff, ctx, "kou", "f(x) - f(y)")?;
    let fx2 = fx.clone() * &fx;
    let first = ((fx + &fy) * den) / num * &theta;
    let second = (fx2 * den) / (num.clone() * diff) * one_minus_theta;
    let next = x - first - second;
    Ok(f.done(next, Some(y)))
}

/// Kou step (`theta = -1`) with the forward-difference slope
/// `[f(x+f(x)) - f(x)] / f(x)`. Third order.
pub fn kou_fd_step<F: Objective + ?Sized>(
    f: &F,
    x: &HpReal,
    ctx: &PrecisionContext,
) -> Result<StepOutcome, StepError> {
    let f = Counted::new(f, ctx);
    let x = at_prec(x, ctx);
    let fx = f.residual(&x)?;
    let slope = forward_slope_from(&f, &x, fx.clone())?;
    kou_from(&f, x, fx, &ctx.int(-1), &slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::builtin;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn affine(a: i64, b: i64) -> FnObjective<impl Fn(&HpReal) -> HpReal> {
        FnObjective(move |x: &HpReal| x.clone() * a + b)
    }

    fn q(num: i64, den: i64) -> HpReal {
        ctx().int(num) / den
    }

    #[test]
    fn steffensen_examples() {
        let c = ctx();
        let s = steffensen_step(&affine(1, -3), &c.int(10), &c).unwrap();
        assert_eq!(s.next, 3);
        assert_eq!(s.evaluations, 2);
        assert!(s.aux.is_none());
        let sq = FnObjective(|x: &HpReal| x.clone() * x - 1u32);
        let s = steffensen_step(&sq, &c.int(2), &c).unwrap();
        assert_eq!(s.next, q(11, 7));
    }

    #[test]
    fn steffensen_reduces_f1_residual() {
        let c = ctx();
        let f1 = builtin("f1").unwrap();
        let x1 = steffensen_step(&f1, &c.int(1), &c).unwrap().next;
        let r0 = f1.eval(&c.int(1), &c).unwrap().abs();
        assert!(f1.eval(&x1, &c).unwrap().abs() < r0);
    }

    #[test]
    fn jain_examples() {
        let c = ctx();
        let s = jain_step(&affine(1, -3), &c.int(10), &c).unwrap();
        assert_eq!(s.next, 3);
        assert_eq!(s.aux.unwrap(), 3);
        let sq = FnObjective(|x: &HpReal| x.clone() * x - 1u32);
        let s = jain_step(&sq, &c.int(2), &c).unwrap();
        assert_eq!(s.aux.unwrap(), q(11, 7));
        let err = (s.next - q(29, 25)).abs();
        assert!(err < Float::with_val(512, 1) >> 505);
        assert_eq!(s.evaluations, 3);
    }

    #[test]
    fn dehghan_affine_examples() {
        let c = ctx();
        let lin = affine(2, -6);
        assert_eq!(dehghan1_step(&lin, &c.int(5), &c).unwrap().next, 3);
        assert_eq!(dehghan2_step(&lin, &c.int(5), &c).unwrap().next, 3);
        let id = affine(1, 0);
        assert_eq!(dehghan1_step(&id, &c.int(1), &c).unwrap().next, 0);
        let s = dehghan2_step(&id, &c.int(1), &c).unwrap();
        assert_eq!(s.aux.unwrap(), 2);
        assert_eq!(s.next, 0);
    }

    #[test]
    fn dehghan3_as_printed_misses_affine_root() {
        let c = ctx();
        let s = dehghan3_step(&affine(1, 0), &c.int(1), &c).unwrap();
        assert_eq!(s.next, 0.75);
        assert_eq!(s.evaluations, 6);
    }

    #[test]
    fn cordero_and_mkdf_affine() {
        let c = ctx();
        let lin = affine(2, -6);
        let s = cordero_step(&lin, &c.int(5), &c).unwrap();
        // f(x), f(x+f), f(x-f), f(y)
        assert_eq!((s.next, s.evaluations), (c.int(3), 4));
        let s = mkdf_step(&lin, &c.int(5), &c).unwrap();
        assert_eq!(s.aux.unwrap(), 3);
        assert_eq!((s.next, s.evaluations), (c.int(3), 4));
    }

    #[test]
    fn kou_affine_with_exact_slope() {
        let c = ctx();
        let s = kou_step(
            &affine(1, -3),
            &c.int(10),
            &c.int(-1),
            &Slope::exact(c.int(1)),
            &c,
        )
        .unwrap();
        assert_eq!((s.next, s.evaluations), (c.int(3), 2));
        let s = kou_fd_step(&affine(1, -3), &c.int(10), &c).unwrap();
        assert_eq!((s.next, s.evaluations), (c.int(3), 3));
    }

    #[test]
    fn mkdf_is_kou_with_central_slope() {
        let c = ctx();
        let f1 = builtin("f1").unwrap();
        let x = c.int(1);
        let slope = central_diff_slope(&f1, &x, &c).unwrap();
        let kou = kou_step(&f1, &x, &c.int(-1), &slope, &c).unwrap();
        let mkdf = mkdf_step(&f1, &x, &c).unwrap();
        assert_eq!(kou.next, mkdf.next);
        assert_eq!(kou.aux, mkdf.aux);
    }

    #[test]
    fn central_slope_examples() {
        let c = ctx();
        let s = central_diff_slope(&affine(2, -6), &c.int(5), &c).unwrap();
        assert_eq!(s.value(), 2);
        let sq = FnObjective(|x: &HpReal| x.clone() * x);
        assert_eq!(central_diff_slope(&sq, &c.int(1), &c).unwrap().value(), 2);

        let f3 = builtin("f3").unwrap();
        let one = c.int(1);
        let approx = central_diff_slope(&f3, &one, &c).unwrap().value();
        let exact = f3.jet(&one, 1, &c).unwrap().coeff(1).clone();
        assert!((approx - exact).abs() < 0.1);
    }

    #[test]
    fn kou_fd_improves_f3() {
        let c = ctx();
        let f3 = builtin("f3").unwrap();
        let s = kou_fd_step(&f3, &c.int(1), &c).unwrap();
        assert!(f3.eval(&s.next, &c).unwrap().abs() < 0.01);
    }

    #[test]
    fn kou_theta_zero_with_exact_slope_squares_residual() {
        let c = ctx();
        let f3 = builtin("f3").unwrap();
        let one = c.int(1);
        let s = MethodKind::kou(c.int(0)).step(&f3, &one, &c).unwrap();
        let r0 = f3.eval(&one, &c).unwrap().abs();
        let r1 = f3.eval(&s.next, &c).unwrap().abs();
        assert!(r1 < r0.clone() * r0);
    }

    #[test]
    fn even_function_breaks_down_instead_of_overflowing() {
        let c = ctx();
        let center = c.parse_decimal("0.3").unwrap();
        let cc = center.clone();
        // cos(t - center) - 2 is even about `center` and never vanishes.
        let even = FnObjective(move |t: &HpReal| (t.clone() - &cc).cos() - 2u32);
        match central_diff_slope(&even, &center, &c) {
            Err(StepError::DenominatorBreakdown { .. }) => {}
            Ok(s) => assert!(s.value().abs() < c.breakdown_floor().clone() * 2u32),
            Err(other) => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn breakdown_and_root_guards() {
        let c = ctx();
        let flat = FnObjective(|_: &HpReal| Float::with_val(512, 1));
        assert!(matches!(
            mkdf_step(&flat, &c.int(0), &c),
            Err(StepError::DenominatorBreakdown { method: "mkdf", .. })
        ));
        assert!(matches!(
            steffensen_step(&affine(1, 0), &c.int(0), &c),
            Err(StepError::ResidualBelowFloor)
        ));
        // x + f(x) = 0.1 + ln(0.1) < 0
        let g = ScalarFunction::parse("ln(x)").unwrap();
        assert!(matches!(
            steffensen_step(&g, &c.parse_decimal("0.1").unwrap(), &c),
            Err(StepError::Eval(_))
        ));
    }

    #[test]
    fn method_names_round_trip() {
        for name in METHOD_NAMES {
            let m: MethodKind = name.parse().unwrap();
            assert_eq!(m.name(), name);
            assert_eq!(m.to_string(), name);
        }
        assert!("newton".parse::<MethodKind>().is_err());
        assert_eq!(MethodKind::kou(ctx().int(0)).to_string(), "kou(theta=0)");
        assert_eq!(MethodKind::kou(ctx().int(0)).claimed_order(), 3);
        assert_eq!(MethodKind::kou_fourth_order().claimed_order(), 4);
    }
}
