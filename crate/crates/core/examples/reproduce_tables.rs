//! Re-runs every bundled reference cell and prints the comparison.
//!
//! ```bash
//! cargo run --release --example reproduce_tables
//! STEFBENCH_PRECISION_BITS=1024 cargo run --release --example reproduce_tables
//! ```

use stefbench::bench::{render_text, run_benchmark, BenchOptions};
use stefbench::precision::{PrecisionContext, DEFAULT_BITS, PRECISION_ENV};

fn main() {
    let bits = std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_BITS);
    let ctx = PrecisionContext::new(bits).expect("at least 64 bits");
    let report = run_benchmark(&BenchOptions::default(), &ctx);
    print!("{}", render_text(&report));
}
