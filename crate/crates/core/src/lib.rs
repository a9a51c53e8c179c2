//! High-precision derivative-free root finding.
//!
//! `stefbench` implements a family of Steffensen-type iterations for simple
//! roots of `f: R -> R`: Steffensen, Jain, three Dehghan variants, Cordero,
//! the Kou family (with a caller-chosen slope) and `mkdf`, the fourth-order
//! Kou member with the symmetric difference quotient `[f(x+f) - f(x-f)]/(2f)`
//! in place of `f'`. All arithmetic is carried out in MPFR at a configurable
//! precision (512 bits by default).
//!
//! Around the kernels sit
//!
//! * an expression parser and the seven built-in test functions `f1`..`f7`,
//! * Taylor jets for exact derivatives `f^(k)(x)/k!`,
//! * a driver that records full iteration traces,
//! * convergence analysis (COC, error-equation ratios and constants),
//! * a benchmark harness that compares three-step residuals against a
//!   bundled reference table.
//!
//! ```
//! use stefbench::{builtin, solve, MethodKind, PrecisionContext, SolveConfig};
//!
//! let ctx = PrecisionContext::default();
//! let f3 = builtin("f3").unwrap();
//! let trace = solve(&MethodKind::Mkdf, &f3, &ctx.int(1), &SolveConfig::fixed(3), &ctx);
//! let residual = trace.final_residual().unwrap();
//! assert!(residual < 1e-60);
//! ```

pub mod analysis;
pub mod bench;
pub mod cli;
pub mod driver;
pub mod expr;
pub mod format;
pub mod jet;
pub mod methods;
pub mod precision;
pub mod scalar;

pub use analysis::{coc, empirical_ratio, error_constant, CocEstimate, ErrorConstantReport};
pub use driver::{refine_root, solve, IterationTrace, SolveConfig, TraceStatus};
pub use expr::{builtin, builtins, jet_eval, parse, Expr, ScalarFunction};
pub use jet::TaylorJet;
pub use methods::{
    central_diff_slope, cordero_step, dehghan1_step, dehghan2_step, dehghan3_step, jain_step,
    kou_fd_step, kou_step, mkdf_step, steffensen_step, MethodKind, Slope, StepOutcome,
};
pub use precision::{make_context, PrecisionContext};
pub use scalar::{HpReal, Scalar};

/// Re-export so callers can build [`HpReal`] values without a direct `rug`
/// dependency.
pub use rug;
