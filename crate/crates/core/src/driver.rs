//! Runs a kernel from an initial guess and records the iteration trace.

use std::fmt;

use rug::Float;
use serde::Serialize;
use thiserror::Error;

use crate::expr::ScalarFunction;
use crate::methods::{MethodKind, StepError};
use crate::precision::PrecisionContext;
use crate::scalar::HpReal;

/// Iteration cap used by [`refine_root`].
pub const REFINE_MAX_ITERATIONS: usize = 60;

/// Stopping rules for [`solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub max_iterations: usize,
    /// Benchmark mode: run exactly this many steps, ignoring `f_tolerance`.
    /// A step is still refused once `|f|` reaches the convergence floor,
    /// and breakdown still terminates.
    pub fixed_iterations: Option<usize>,
    /// Stop when `|f(x_n)|` is at or below this; `None` means the context's
    /// convergence floor. Values below the floor are raised to it.
    pub f_tolerance: Option<HpReal>,
    /// Abort when `|x_n|` exceeds this.
    pub divergence_bound: HpReal,
    /// When present, every trace entry carries `e_n = x_n - reference_root`.
    pub reference_root: Option<HpReal>,
}

impl SolveConfig {
    pub fn converge(max_iterations: usize) -> Self {
        Self {
            max_iterations,
            fixed_iterations: None,
            f_tolerance: None,
            divergence_bound: Float::with_val(64, 1e10),
            reference_root: None,
        }
    }

    pub fn fixed(iterations: usize) -> Self {
        Self {
            fixed_iterations: Some(iterations),
            ..Self::converge(iterations)
        }
    }

    pub fn with_reference_root(mut self, root: HpReal) -> Self {
        self.reference_root = Some(root);
        self
    }

    pub fn with_tolerance(mut self, tol: HpReal) -> Self {
        self.f_tolerance = Some(tol);
        self
    }
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self::converge(100)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStatus {
    Converged,
    MaxIterationsReached,
    FixedCountCompleted,
    DenominatorBreakdown,
    Diverged,
    DomainError,
}

impl TraceStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceStatus::Converged => "converged",
            TraceStatus::MaxIterationsReached => "max_iterations_reached",
            TraceStatus::FixedCountCompleted => "fixed_count_completed",
            TraceStatus::DenominatorBreakdown => "denominator_breakdown",
            TraceStatus::Diverged => "diverged",
            TraceStatus::DomainError => "domain_error",
        }
    }

    /// Whether the run ended without a numerical failure.
    pub fn is_success(self) -> bool {
        matches!(
            self,
            TraceStatus::Converged | TraceStatus::FixedCountCompleted
        )
    }
}

impl fmt::Display for TraceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Iterate {
    pub n: usize,
    pub x: HpReal,
    pub fx: HpReal,
    pub error: Option<HpReal>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub method: String,
    pub iterates: Vec<Iterate>,
    pub status: TraceStatus,
    pub f_call_total: usize,
    /// Why the run stopped, for failure statuses.
    pub detail: Option<String>,
}

impl IterationTrace {
    pub fn last(&self) -> Option<&Iterate> {
        self.iterates.last()
    }

    /// `|f|` at the final recorded iterate.
    pub fn final_residual(&self) -> Option<HpReal> {
        self.last().map(|it| it.fx.clone().abs())
    }

    /// Number of completed steps.
    pub fn steps(&self) -> usize {
        self.iterates.len().saturating_sub(1)
    }

    /// The `e_n` column, if every entry has one.
    pub fn errors(&self) -> Option<Vec<HpReal>> {
        self.iterates.iter().map(|it| it.error.clone()).collect()
    }
}

/// Iterates `method` on `f` from `x0`. Never fails: every failure mode is
/// captured in the trace status.
pub fn solve(
    method: &MethodKind,
    f: &ScalarFunction,
    x0: &HpReal,
    cfg: &SolveConfig,
    ctx: &PrecisionContext,
) -> IterationTrace {
    let floor = ctx.convergence_floor().clone();
    let tolerance = match &cfg.f_tolerance {
        Some(t) if *t > floor => Float::with_val(ctx.bits(), t),
        _ => floor.clone(),
    };
    let reference = cfg
        .reference_root
        .as_ref()
        .map(|r| Float::with_val(ctx.bits(), r));
    let entry = |n: usize, x: HpReal, fx: HpReal| Iterate {
        n,
        error: reference.as_ref().map(|r| x.clone() - r),
        x,
        fx,
    };

    let mut trace = IterationTrace {
        method: method.to_string(),
        iterates: Vec::new(),
        status: TraceStatus::DomainError,
        f_call_total: 0,
        detail: None,
    };

    let mut x = Float::with_val(ctx.bits(), x0);
    trace.f_call_total += 1;
    let mut fx = match f.eval(&x, ctx) {
        Ok(v) => v,
        Err(e) => {
            trace.detail = Some(e.to_string());
            return trace;
        }
    };
    trace.iterates.push(entry(0, x.clone(), fx.clone()));

    for n in 1.. {
        let done = n - 1;
        let residual = fx.clone().abs();
        let stop = match cfg.fixed_iterations {
            Some(_) if residual <= floor => Some(TraceStatus::Converged),
            Some(count) if done >= count => Some(TraceStatus::FixedCountCompleted),
            Some(_) => None,
            None if residual <= tolerance => Some(TraceStatus::Converged),
            None if done >= cfg.max_iterations => Some(TraceStatus::MaxIterationsReached),
            None => None,
        };
        if let Some(status) = stop {
            trace.status = status;
            return trace;
        }

        let outcome = match method.step(f, &x, ctx) {
            Ok(o) => o,
            Err(err) => {
                trace.status = match err {
                    StepError::Eval(_) => TraceStatus::DomainError,
                    StepError::DenominatorBreakdown { .. } => TraceStatus::DenominatorBreakdown,
                    StepError::ResidualBelowFloor => TraceStatus::Converged,
                };
                trace.detail = Some(err.to_string());
                return trace;
            }
        };
        trace.f_call_total += outcome.evaluations;
        x = outcome.next;
        if !x.is_finite() || x.clone().abs() > cfg.divergence_bound {
            trace.status = TraceStatus::Diverged;
            trace.detail = Some(format!(
                "|x_{n}| = {} exceeds the divergence bound",
                x.to_string_radix(10, Some(6))
            ));
            return trace;
        }
        trace.f_call_total += 1;
        fx = match f.eval(&x, ctx) {
            Ok(v) => v,
            Err(e) => {
                trace.status = TraceStatus::DomainError;
                trace.detail = Some(e.to_string());
                return trace;
            }
        };
        trace.iterates.push(entry(n, x.clone(), fx.clone()));
    }
    unreachable!("the loop only exits by returning")
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("root refinement from {seed} failed: {reason}")]
pub struct RefineError {
    pub seed: String,
    pub reason: String,
}

/// Polishes `seed` into a root with `|f(x*)| <= convergence_floor` at the
/// context's precision.
///
/// The iteration is `mkdf` at twice the working precision (at most
/// [`REFINE_MAX_ITERATIONS`] steps), then rounded back; this keeps the
/// breakdown floor of the inner run well below the outer convergence floor.
pub fn refine_root(
    f: &ScalarFunction,
    seed: &HpReal,
    ctx: &PrecisionContext,
) -> Result<HpReal, RefineError> {
    let fail = |reason: String| RefineError {
        seed: seed.to_string_radix(10, Some(10)),
        reason,
    };
    let wide = ctx.scaled(2);
    let target = Float::with_val(wide.bits(), ctx.convergence_floor()) >> ctx.bits();
    let cfg = SolveConfig::converge(REFINE_MAX_ITERATIONS).with_tolerance(target);
    let trace = solve(&MethodKind::Mkdf, f, seed, &cfg, &wide);
    let last = trace
        .last()
        .ok_or_else(|| fail(trace.detail.clone().unwrap_or_default()))?;
    let root = Float::with_val(ctx.bits(), &last.x);
    let residual = f.eval(&root, ctx).map_err(|e| fail(e.to_string()))?.abs();
    if residual <= *ctx.convergence_floor() {
        Ok(root)
    } else {
        Err(fail(format!(
            "{} after {} steps, residual {}",
            trace.status,
            trace.steps(),
            residual.to_string_radix(10, Some(6))
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::builtin;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn starting_at_the_root_is_immediately_converged() {
        let c = ctx();
        let f3 = builtin("f3").unwrap();
        let root = refine_root(&f3, &c.parse_decimal("0.739085").unwrap(), &c).unwrap();
        let trace = solve(&MethodKind::Mkdf, &f3, &root, &SolveConfig::fixed(3), &c);
        assert_eq!(trace.iterates.len(), 1);
        assert_eq!(trace.status, TraceStatus::Converged);
        assert_eq!(trace.f_call_total, 1);
    }

    #[test]
    fn refine_f3_matches_bisection() {
        let c = ctx();
        let f3 = builtin("f3").unwrap();
        let root = refine_root(&f3, &c.parse_decimal("0.739085").unwrap(), &c).unwrap();
        let r = f3.eval(&root, &c).unwrap().abs();
        assert!(r < Float::with_val(512, 1) >> 486);

        // bisection on [0.7390, 0.7391]; cos(x) - x is decreasing
        let mut lo = c.parse_decimal("0.7390").unwrap();
        let mut hi = c.parse_decimal("0.7391").unwrap();
        for _ in 0..600 {
            let mid = Float::with_val(512, &lo + &hi) / 2u32;
            if f3.eval(&mid, &c).unwrap() > 0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let gap = (root - lo).abs();
        assert!(gap < Float::with_val(512, 1) >> 500);
    }

    #[test]
    fn refine_f1_keeps_six_decimals() {
        let c = ctx();
        let f1 = builtin("f1").unwrap();
        let root = refine_root(&f1, &c.parse_decimal("1.404492").unwrap(), &c).unwrap();
        let rounded = (root.to_f64() * 1e6).round() / 1e6;
        assert_eq!(rounded, 1.404492);
    }

    #[test]
    fn refine_affine_is_exact() {
        let c = ctx();
        let f = ScalarFunction::parse("x - 3").unwrap();
        let root = refine_root(&f, &c.parse_decimal("2.9").unwrap(), &c).unwrap();
        assert_eq!(root, 3);
    }

    #[test]
    fn refine_reports_failure() {
        let c = ctx();
        let f = ScalarFunction::parse("x^2 + 1").unwrap();
        assert!(refine_root(&f, &c.int(3), &c).is_err());
    }

    #[test]
    fn mkdf_three_steps_on_f1() {
        let c = ctx();
        let f1 = builtin("f1").unwrap();
        let trace = solve(
            &MethodKind::Mkdf,
            &f1,
            &c.int(1),
            &SolveConfig::fixed(3),
            &c,
        );
        assert_eq!(trace.status, TraceStatus::FixedCountCompleted);
        assert_eq!(trace.iterates.len(), 4);
        let log10 = trace.final_residual().unwrap().log10().to_f64();
        let reference = (0.47200e-25f64).log10();
        assert!((log10 - reference).abs() <= 2.0, "log10 |f| = {log10}");
        // 1 + 3 x (4 kernel calls + 1 residual)
        assert_eq!(trace.f_call_total, 16);
    }

    #[test]
    fn steffensen_on_f6_stays_large() {
        let c = ctx();
        let f6 = builtin("f6").unwrap();
        let trace = solve(
            &MethodKind::Steffensen,
            &f6,
            &c.int(1),
            &SolveConfig::fixed(3),
            &c,
        );
        let log10 = trace.final_residual().unwrap().log10().to_f64();
        assert!(
            (log10 - 0.77299e1f64.log10()).abs() <= 2.0,
            "log10 |f| = {log10}"
        );
    }

    #[test]
    fn errors_are_against_the_reference() {
        let c = ctx();
        let f = ScalarFunction::parse("x^2 - 2").unwrap();
        let root = c.int(2).sqrt();
        let cfg = SolveConfig::converge(30).with_reference_root(root.clone());
        let trace = solve(&MethodKind::Steffensen, &f, &c.int(1), &cfg, &c);
        assert_eq!(trace.status, TraceStatus::Converged);
        for it in &trace.iterates {
            assert_eq!(it.error.clone().unwrap(), it.x.clone() - &root);
        }
        for (k, it) in trace.iterates.iter().enumerate() {
            assert_eq!(it.n, k);
        }
        let last = trace.final_residual().unwrap();
        assert!(last <= *c.convergence_floor());
    }

    #[test]
    fn far_start_walks_back_to_the_root() {
        // f1 is even and quadratic at infinity: each step shrinks x by
        // roughly 3.4 until the basin of 1.4044916 is reached.
        let c = ctx();
        let f1 = builtin("f1").unwrap();
        let trace = solve(
            &MethodKind::Mkdf,
            &f1,
            &c.parse_decimal("1e9").unwrap(),
            &SolveConfig::default(),
            &c,
        );
        assert_eq!(trace.status, TraceStatus::Converged);
        assert!(trace.steps() > 15);
        let x = trace.last().unwrap().x.to_f64();
        assert!((x - 1.4044916).abs() < 1e-6, "{x}");
        for pair in trace.iterates.windows(2).take(10) {
            assert!(pair[1].x < pair[0].x);
        }
    }

    #[test]
    fn domain_errors_end_the_trace() {
        let c = ctx();
        let f = ScalarFunction::parse("ln(x)").unwrap();
        let trace = solve(
            &MethodKind::Steffensen,
            &f,
            &c.int(-1),
            &SolveConfig::default(),
            &c,
        );
        assert_eq!(trace.status, TraceStatus::DomainError);
        assert!(trace.iterates.is_empty());
        assert!(trace.detail.unwrap().contains("ln(x)"));
    }

    #[test]
    fn max_iterations_is_reported() {
        let c = ctx();
        let f3 = builtin("f3").unwrap();
        let trace = solve(
            &MethodKind::Steffensen,
            &f3,
            &c.int(1),
            &SolveConfig::converge(2),
            &c,
        );
        assert_eq!(trace.status, TraceStatus::MaxIterationsReached);
        assert_eq!(trace.steps(), 2);
    }
}
