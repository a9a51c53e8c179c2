//! Reproduction of the published three-step residual tables.
//!
//! Each [`ReferenceCell`] is re-run with `fixed_iterations = 3` and the
//! computed `|f(x_3)|` is compared with the published value on a log10
//! scale. A cell matches when the two agree within
//! [`BenchOptions::tolerance_orders`] orders of magnitude.

mod reference;
mod render;

use std::time::{Duration, Instant};

use crate::driver::{solve, SolveConfig, TraceStatus};
use crate::expr::builtin;
use crate::precision::PrecisionContext;
use crate::scalar::HpReal;

pub use reference::{
    parse_reference_csv, reference_cells, ReferenceCell, ReferenceError, REFERENCE_CSV,
};
pub use render::{render_csv, render_json, render_text, JSON_KEYS};

/// Iteration count behind every published residual.
pub const BENCH_ITERATIONS: usize = 3;

/// `|log10|` gap under which a mismatching value is taken to reproduce
/// another cell's published value.
pub const RESEMBLANCE_ORDERS: f64 = 0.05;

/// Iteration counts probed when a cell disagrees.
pub const ALTERNATIVE_COUNTS: std::ops::RangeInclusive<usize> = 1..=5;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub table: Option<u8>,
    pub method: Option<String>,
    pub function: Option<String>,
    /// Allowed `|log10 computed - log10 published|`.
    pub tolerance_orders: f64,
    /// Minimum fraction of matching cells for the run to pass.
    pub pass_rate: f64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            table: None,
            method: None,
            function: None,
            tolerance_orders: 2.0,
            pass_rate: 0.8,
        }
    }
}

impl BenchOptions {
    fn selects(&self, cell: &ReferenceCell) -> bool {
        self.table.is_none_or(|t| t == cell.table)
            && self
                .method
                .as_deref()
                .is_none_or(|m| m == cell.method.name())
            && self.function.as_deref().is_none_or(|f| f == cell.function)
    }
}

/// A different iteration count that lands closer to the published value.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternativeCount {
    pub iterations: usize,
    pub log10_discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRecord {
    pub cell: ReferenceCell,
    /// Final `|f(x_n)|` of the three-step run.
    pub computed_value: HpReal,
    /// `log10 computed - log10 published`; `None` when the computed value
    /// is exactly zero.
    pub log10_discrepancy: Option<f64>,
    pub status: TraceStatus,
    pub steps: usize,
    pub matched: bool,
    pub alternative: Option<AlternativeCount>,
    /// Another method in the same table whose published value this cell's
    /// computed value reproduces.
    pub resembles: Option<String>,
    pub detail: Option<String>,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub bits: u32,
    pub options: BenchOptions,
    pub records: Vec<BenchmarkRecord>,
    pub elapsed: Duration,
}

impl BenchReport {
    pub fn matched(&self) -> usize {
        self.records.iter().filter(|r| r.matched).count()
    }

    pub fn match_rate(&self) -> f64 {
        if self.records.is_empty() {
            0.0
        } else {
            self.matched() as f64 / self.records.len() as f64
        }
    }

    pub fn passed(&self) -> bool {
        !self.records.is_empty() && self.match_rate() >= self.options.pass_rate
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &BenchmarkRecord> {
        self.records.iter().filter(|r| !r.matched)
    }
}

fn log10_gap(computed: &HpReal, reference: &HpReal) -> Option<f64> {
    if computed.is_zero() || !computed.is_finite() {
        return None;
    }
    let c = computed.clone().abs().log10().to_f64();
    let p = reference.clone().abs().log10().to_f64();
    Some(c - p)
}

/// Runs one reference cell.
pub fn run_cell(
    cell: &ReferenceCell,
    tolerance_orders: f64,
    ctx: &PrecisionContext,
) -> BenchmarkRecord {
    let f = builtin(&cell.function).expect("reference cells name built-in functions");
    let x0 = cell.x0(ctx);
    let reference = cell.paper_value(ctx);

    let trace = solve(
        &cell.method,
        &f,
        &x0,
        &SolveConfig::fixed(BENCH_ITERATIONS),
        ctx,
    );
    let computed = trace
        .final_residual()
        .unwrap_or_else(|| HpReal::with_val(ctx.bits(), f64::NAN));
    let gap = log10_gap(&computed, &reference);
    let matched = gap.is_some_and(|g| g.abs() <= tolerance_orders);

    let alternative = {
        let long = solve(
            &cell.method,
            &f,
            &x0,
            &SolveConfig::fixed(*ALTERNATIVE_COUNTS.end()),
            ctx,
        );
        let current = gap.map_or(f64::INFINITY, f64::abs);
        long.iterates
            .iter()
            .filter(|it| ALTERNATIVE_COUNTS.contains(&it.n) && it.n != BENCH_ITERATIONS)
            .filter_map(|it| {
                log10_gap(&it.fx.clone().abs(), &reference).map(|g| AlternativeCount {
                    iterations: it.n,
                    log10_discrepancy: g,
                })
            })
            .filter(|alt| alt.log10_discrepancy.abs() + 0.5 < current)
            .min_by(|a, b| {
                a.log10_discrepancy
                    .abs()
                    .total_cmp(&b.log10_discrepancy.abs())
            })
    };

    BenchmarkRecord {
        cell: cell.clone(),
        computed_value: computed,
        log10_discrepancy: gap,
        status: trace.status,
        steps: trace.steps(),
        matched,
        alternative,
        resembles: None,
        detail: trace.detail,
    }
}

/// Runs every selected reference cell, ordered by (table, method).
pub fn run_benchmark(options: &BenchOptions, ctx: &PrecisionContext) -> BenchReport {
    let start = Instant::now();
    let cells: Vec<ReferenceCell> = reference_cells()
        .into_iter()
        .filter(|c| options.selects(c))
        .collect();
    let mut records: Vec<BenchmarkRecord> = std::thread::scope(|scope| {
        let handles: Vec<_> = cells
            .iter()
            .map(|cell| scope.spawn(move || run_cell(cell, options.tolerance_orders, ctx)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("benchmark cell panicked"))
            .collect()
    });
    let all = reference_cells();
    for r in records.iter_mut().filter(|r| !r.matched) {
        r.resembles = all
            .iter()
            .filter(|c| c.table == r.cell.table && c.method != r.cell.method)
            .find(|c| {
                log10_gap(&r.computed_value, &c.paper_value(ctx))
                    .is_some_and(|g| g.abs() <= RESEMBLANCE_ORDERS)
            })
            .map(|c| c.method.name().to_string());
    }
    BenchReport {
        bits: ctx.bits(),
        options: options.clone(),
        records,
        elapsed: start.elapsed(),
    }
}
