//! Empirical order of convergence, Taylor coefficients at a root, and the
//! asymptotic error constant of the fourth-order derivative-free method.

use rug::Float;
use thiserror::Error;

use crate::driver::{refine_root, solve, IterationTrace, RefineError, SolveConfig};
use crate::expr::{EvalError, ScalarFunction};
use crate::jet::DEFAULT_ORDER;
use crate::methods::MethodKind;
use crate::precision::PrecisionContext;
use crate::scalar::HpReal;

/// Errors at or below `2^(USABLE_FRACTION * bits)` are dominated by
/// roundoff and excluded from order estimates.
pub const USABLE_FRACTION: f64 = -0.8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("insufficient data: {usable} usable {what}, need {needed}")]
    InsufficientData {
        what: &'static str,
        usable: usize,
        needed: usize,
    },
    #[error("trace has no error column (no reference root)")]
    MissingErrors,
    #[error("{0} has no reference root or initial guess; supply one")]
    MissingSeed(String),
    #[error("not a simple root: |f'(x*)| is below the breakdown floor")]
    NotSimpleRoot,
    #[error(transparent)]
    Refine(#[from] RefineError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CocStep {
    /// Index of the middle error of the triple.
    pub n: usize,
    pub rho: HpReal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CocEstimate {
    pub per_step: Vec<CocStep>,
    /// The last well-conditioned estimate.
    pub estimate: HpReal,
    pub usable_steps: usize,
}

fn usable_threshold(ctx: &PrecisionContext) -> Float {
    ctx.pow2_of_bits(USABLE_FRACTION)
}

fn is_usable(e: &HpReal, threshold: &Float) -> bool {
    e.is_finite() && e.clone().abs() > *threshold
}

/// Computational order of convergence from a trace with an error column.
pub fn coc(trace: &IterationTrace, ctx: &PrecisionContext) -> Result<CocEstimate, AnalysisError> {
    let errors = trace.errors().ok_or(AnalysisError::MissingErrors)?;
    coc_from_errors(&errors, ctx)
}

/// `rho_n = ln(|e_{n+1}|/|e_n|) / ln(|e_n|/|e_{n-1}|)` over every triple of
/// consecutive usable errors.
pub fn coc_from_errors(
    errors: &[HpReal],
    ctx: &PrecisionContext,
) -> Result<CocEstimate, AnalysisError> {
    let threshold = usable_threshold(ctx);
    let bits = ctx.bits();
    let abs: Vec<Float> = errors
        .iter()
        .map(|e| Float::with_val(bits, e).abs())
        .collect();
    let mut per_step = Vec::new();
    for (i, w) in abs.windows(3).enumerate() {
        if !w.iter().all(|e| is_usable(e, &threshold)) {
            continue;
        }
        let num = Float::with_val(bits, &w[2] / &w[1]).ln();
        let den = Float::with_val(bits, &w[1] / &w[0]).ln();
        if den.is_zero() {
            continue;
        }
        per_step.push(CocStep {
            n: i + 1,
            rho: num / den,
        });
    }
    let usable_entries = abs.iter().filter(|e| is_usable(e, &threshold)).count();
    match per_step.last() {
        Some(last) => Ok(CocEstimate {
            estimate: last.rho.clone(),
            usable_steps: per_step.len(),
            per_step,
        }),
        None => Err(AnalysisError::InsufficientData {
            what: "error entries",
            usable: usable_entries.min(2),
            needed: 3,
        }),
    }
}

/// `e_{n+1} / e_n^order` for every pair of consecutive usable errors.
///
/// The list is empty when the trace reaches the roundoff floor too quickly
/// to leave a usable pair (e.g. one-step exactness on affine functions).
pub fn empirical_ratio(
    trace: &IterationTrace,
    order: i32,
    ctx: &PrecisionContext,
) -> Result<Vec<HpReal>, AnalysisError> {
    let errors = trace.errors().ok_or(AnalysisError::MissingErrors)?;
    Ok(ratios_from_errors(&errors, order, ctx))
}

pub fn ratios_from_errors(errors: &[HpReal], order: i32, ctx: &PrecisionContext) -> Vec<HpReal> {
    let threshold = usable_threshold(ctx);
    let bits = ctx.bits();
    errors
        .windows(2)
        .filter(|w| w.iter().all(|e| is_usable(e, &threshold)))
        .map(|w| {
            let denom = Float::with_val(bits, rug::ops::Pow::pow(&w[0], order));
            Float::with_val(bits, &w[1] / &denom)
        })
        .collect()
}

/// Whether the last two ratios agree to within `relative`.
pub fn ratios_stabilize(ratios: &[HpReal], relative: f64) -> Result<bool, AnalysisError> {
    match ratios {
        [.., a, b] => Ok(relative_gap(a, b) <= relative),
        _ => Err(AnalysisError::InsufficientData {
            what: "error pairs",
            usable: ratios.len(),
            needed: 2,
        }),
    }
}

/// `|a - b| / max(|a|, |b|)`, or 0 when both vanish.
pub fn relative_gap(a: &HpReal, b: &HpReal) -> f64 {
    let prec = a.prec().max(b.prec());
    let diff = Float::with_val(prec, a - b).abs();
    let scale = Float::with_val(prec, a.clone().abs().max(&b.clone().abs()));
    if scale.is_zero() {
        0.0
    } else {
        (diff / scale).to_f64()
    }
}

/// Asymptotic error constant of the fourth-order derivative-free method,
/// `-4 c1 c4 - 3 c2 c3 - 11 c4/c1 - 2 c2^3/c1^3 - 17 c2 c3/c1^2`.
pub fn error_constant_formula(c: &[HpReal; 4]) -> HpReal {
    let [c1, c2, c3, c4] = c;
    let bits = c1.prec();
    let c1sq = Float::with_val(bits, c1 * c1);
    let c1cu = Float::with_val(bits, &c1sq * c1);
    let c2cu = Float::with_val(bits, c2 * c2) * c2;
    let c2c3 = Float::with_val(bits, c2 * c3);
    let c1c4 = Float::with_val(bits, c1 * c4);
    let value = -(c1c4 * 4u32)
        - c2c3.clone() * 3u32
        - Float::with_val(bits, c4 * 11u32) / c1
        - c2cu * 2u32 / c1cu
        - c2c3 * 17u32 / c1sq;
    if value.is_zero() {
        Float::new(bits)
    } else {
        value
    }
}

/// `c_1..c_4` with `c_k = f^(k)(x*)/k!`, from an order-8 jet.
pub fn taylor_coefficients(
    f: &ScalarFunction,
    root: &HpReal,
    ctx: &PrecisionContext,
) -> Result<[HpReal; 4], AnalysisError> {
    let jet = f.jet(root, DEFAULT_ORDER, ctx)?;
    let c = jet.into_coeffs();
    Ok([c[1].clone(), c[2].clone(), c[3].clone(), c[4].clone()])
}

/// Independent estimate of `c_1..c_4` from central finite-difference
/// stencils with step `2^(-bits/4)`, evaluated at twice the working
/// precision so the fourth-difference roundoff stays far below the
/// `O(h^2)` truncation error.
pub fn stencil_coefficients(
    f: &ScalarFunction,
    root: &HpReal,
    ctx: &PrecisionContext,
) -> Result<[HpReal; 4], AnalysisError> {
    let wide = ctx.scaled(2);
    let bits = wide.bits();
    let x = Float::with_val(bits, root);
    let h = Float::with_val(bits, 1) >> (ctx.bits() / 4);
    let at = |k: i32| -> Result<Float, EvalError> {
        let shifted = Float::with_val(bits, &h * k) + &x;
        f.eval(&shifted, &wide)
    };
    let (m2, m1, p0, p1, p2) = (at(-2)?, at(-1)?, at(0)?, at(1)?, at(2)?);
    let h2 = Float::with_val(bits, &h * &h);
    let h3 = Float::with_val(bits, &h2 * &h);
    let h4 = Float::with_val(bits, &h2 * &h2);

    let d1 = (p1.clone() - &m1) / (h.clone() * 2u32);
    let d2 = (p1.clone() - p0.clone() * 2u32 + &m1) / &h2;
    let d3 = (p2.clone() - p1.clone() * 2u32 + m1.clone() * 2u32 - &m2) / (h3 * 2u32);
    let d4 = (p2 - p1 * 4u32 + p0 * 6u32 - m1 * 4u32 + m2) / h4;

    let narrow = |v: Float, factorial: u32| Float::with_val(ctx.bits(), v / factorial);
    Ok([narrow(d1, 1), narrow(d2, 2), narrow(d3, 6), narrow(d4, 24)])
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorConstantReport {
    pub root: HpReal,
    /// `c_1..c_4` from the jet path.
    pub c: [HpReal; 4],
    /// Largest relative gap between the jet and stencil coefficients.
    pub stencil_gap: f64,
    pub formula_value: HpReal,
    /// `e_{n+1} / e_n^4` along an `mkdf` run.
    pub empirical_ratios: Vec<HpReal>,
    /// `|last empirical ratio / formula value|`, when both exist.
    pub agreement: Option<HpReal>,
}

/// Iterations of the empirical `mkdf` run in [`error_constant_with`].
pub const CONSTANT_RUN_ITERATIONS: usize = 10;

/// Error-constant report for a function with a built-in reference root and
/// initial guess.
pub fn error_constant(
    f: &ScalarFunction,
    ctx: &PrecisionContext,
) -> Result<ErrorConstantReport, AnalysisError> {
    let seed = f
        .reference_root(ctx)
        .ok_or_else(|| AnalysisError::MissingSeed(f.name().to_string()))?;
    let x0 = f.default_x0(ctx).unwrap_or_else(|| seed.clone());
    error_constant_with(f, &seed, &x0, ctx)
}

/// Refines the root from `seed`, extracts `c_1..c_4`, evaluates the
/// constant formula, and measures `e_{n+1}/e_n^4` on an `mkdf` run from
/// `x0`. The comparison is diagnostic only.
pub fn error_constant_with(
    f: &ScalarFunction,
    seed: &HpReal,
    x0: &HpReal,
    ctx: &PrecisionContext,
) -> Result<ErrorConstantReport, AnalysisError> {
    let root = refine_root(f, seed, ctx)?;
    let c = taylor_coefficients(f, &root, ctx)?;
    if c[0].clone().abs() < *ctx.breakdown_floor() {
        return Err(AnalysisError::NotSimpleRoot);
    }
    let stencil = stencil_coefficients(f, &root, ctx)?;
    let stencil_gap = c
        .iter()
        .zip(&stencil)
        .map(|(a, b)| relative_gap(a, b))
        .fold(0.0, f64::max);
    let formula_value = error_constant_formula(&c);

    let cfg = SolveConfig::converge(CONSTANT_RUN_ITERATIONS).with_reference_root(root.clone());
    let trace = solve(&MethodKind::Mkdf, f, x0, &cfg, ctx);
    let empirical_ratios = empirical_ratio(&trace, 4, ctx)?;
    let agreement = match empirical_ratios.last() {
        Some(last) if !formula_value.is_zero() => {
            Some(Float::with_val(ctx.bits(), last / &formula_value).abs())
        }
        _ => None,
    };
    Ok(ErrorConstantReport {
        root,
        c,
        stencil_gap,
        formula_value,
        empirical_ratios,
        agreement,
    })
}

/// A convergence-mode run with its COC estimate.
#[derive(Debug, Clone)]
pub struct CocStudy {
    pub root: HpReal,
    pub trace: IterationTrace,
    pub estimate: Result<CocEstimate, AnalysisError>,
}

/// Refines the root from `seed`, runs `method` from `x0` for at most
/// `max_iterations` steps with errors recorded, and estimates the order.
pub fn coc_study(
    method: &MethodKind,
    f: &ScalarFunction,
    x0: &HpReal,
    seed: &HpReal,
    max_iterations: usize,
    ctx: &PrecisionContext,
) -> Result<CocStudy, AnalysisError> {
    let root = refine_root(f, seed, ctx)?;
    let cfg = SolveConfig::converge(max_iterations).with_reference_root(root.clone());
    let trace = solve(method, f, x0, &cfg, ctx);
    let estimate = coc(&trace, ctx);
    Ok(CocStudy {
        root,
        trace,
        estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::builtin;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    fn decimals(c: &PrecisionContext, xs: &[&str]) -> Vec<HpReal> {
        xs.iter().map(|s| c.parse_decimal(s).unwrap()).collect()
    }

    fn near(a: &HpReal, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol
    }

    #[test]
    fn coc_of_quartic_pattern() {
        let c = ctx();
        let est = coc_from_errors(&decimals(&c, &["1e-1", "1e-4", "1e-16"]), &c).unwrap();
        assert_eq!(est.usable_steps, 1);
        assert!(near(&est.estimate, 4.0, 1e-100));
    }

    #[test]
    fn coc_of_quadratic_pattern() {
        let c = ctx();
        let est = coc_from_errors(&decimals(&c, &["1e-1", "1e-2", "1e-4", "1e-8"]), &c).unwrap();
        assert_eq!(est.per_step.len(), 2);
        for step in &est.per_step {
            assert!(near(&step.rho, 2.0, 1e-100));
        }
    }

    #[test]
    fn coc_needs_three_usable_errors() {
        let c = ctx();
        let err = coc_from_errors(&decimals(&c, &["1e-1", "1e-4"]), &c).unwrap_err();
        assert!(matches!(err, AnalysisError::InsufficientData { .. }));
        // the last error sits below the 2^(-0.8 bits) guard band
        let err = coc_from_errors(&decimals(&c, &["1e-1", "1e-4", "1e-200"]), &c).unwrap_err();
        assert!(matches!(err, AnalysisError::InsufficientData { .. }));
    }

    #[test]
    fn ratio_examples() {
        let c = ctx();
        let r = ratios_from_errors(&decimals(&c, &["1e-1", "2e-4"]), 4, &c);
        assert_eq!(r.len(), 1);
        assert!(near(&r[0], 2.0, 1e-100));
        assert!(ratios_stabilize(&r, 0.1).is_err());
    }

    #[test]
    fn affine_traces_leave_no_ratios() {
        let c = ctx();
        let f = ScalarFunction::parse("2*x - 6").unwrap();
        let cfg = SolveConfig::converge(5).with_reference_root(c.int(3));
        let trace = solve(&MethodKind::Mkdf, &f, &c.int(5), &cfg, &c);
        assert!(empirical_ratio(&trace, 4, &c).unwrap().is_empty());
        let bare = solve(
            &MethodKind::Mkdf,
            &f,
            &c.int(5),
            &SolveConfig::converge(5),
            &c,
        );
        assert_eq!(
            empirical_ratio(&bare, 4, &c),
            Err(AnalysisError::MissingErrors)
        );
    }

    #[test]
    fn formula_special_cases() {
        let c = ctx();
        let one = c.int(1);
        let zero = c.zero();
        let v = error_constant_formula(&[one.clone(), one.clone(), zero.clone(), zero.clone()]);
        assert_eq!(v, -2);
        let v = error_constant_formula(&[one, zero.clone(), zero.clone(), zero]);
        assert_eq!(v, 0);
    }

    #[test]
    fn mkdf_on_f3_is_fourth_order() {
        let c = ctx();
        let f3 = builtin("f3").unwrap();
        let study = coc_study(
            &MethodKind::Mkdf,
            &f3,
            &c.int(1),
            &f3.reference_root(&c).unwrap(),
            6,
            &c,
        )
        .unwrap();
        let est = study.estimate.unwrap();
        let rho = est.estimate.to_f64();
        assert!((3.7..=4.3).contains(&rho), "rho = {rho}");

        // exponents of |f(x_n)| roughly quadruple
        let exps: Vec<f64> = study
            .trace
            .iterates
            .iter()
            .map(|it| it.fx.clone().abs().log10().to_f64())
            .collect();
        assert!(exps[3] / exps[2] > 3.0, "{exps:?}");

        let ratios = empirical_ratio(&study.trace, 4, &c).unwrap();
        assert!(ratios.len() >= 2);
        assert!(ratios_stabilize(&ratios, 0.10).unwrap(), "{ratios:?}");
    }

    #[test]
    fn stencils_agree_with_jets_on_f3() {
        let c = ctx();
        let f3 = builtin("f3").unwrap();
        let root = refine_root(&f3, &f3.reference_root(&c).unwrap(), &c).unwrap();
        let jet = taylor_coefficients(&f3, &root, &c).unwrap();
        let fd = stencil_coefficients(&f3, &root, &c).unwrap();
        for (a, b) in jet.iter().zip(&fd) {
            assert!(relative_gap(a, b) < 1e-10);
        }
        // c1 = -sin(x*) - 1
        let want = -(root.clone().sin()) - 1u32;
        assert!(relative_gap(&jet[0], &want) < 1e-150);
    }

    #[test]
    fn constant_report_for_simple_expressions() {
        let c = ctx();
        let f = ScalarFunction::parse("x + x^2").unwrap();
        let report = error_constant_with(&f, &c.zero(), &c.zero(), &c).unwrap();
        assert_eq!(report.formula_value, -2);
        let g = ScalarFunction::parse("x").unwrap();
        let report = error_constant_with(&g, &c.zero(), &c.int(1), &c).unwrap();
        assert_eq!(report.formula_value, 0);
        assert!(report.formula_value.is_sign_positive());
        assert!(report.empirical_ratios.is_empty());
        assert!(report.agreement.is_none());
    }

    #[test]
    fn double_root_is_rejected() {
        let c = ctx();
        let f = ScalarFunction::parse("(x - 1)^2").unwrap();
        let err = error_constant_with(&f, &c.int(1), &c.int(1), &c).unwrap_err();
        assert_eq!(err, AnalysisError::NotSimpleRoot);
    }
}
