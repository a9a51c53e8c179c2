//! The closed-form error constant of `mkdf` next to the measured
//! `e_{n+1}/e_n^4`.

use stefbench::format::short;
use stefbench::{builtins, error_constant, PrecisionContext};

fn main() {
    let ctx = PrecisionContext::default();
    println!(
        "{:<3} {:>13} {:>13} {:>13}",
        "f", "formula", "measured", "ratio"
    );
    for f in builtins() {
        let report = error_constant(&f, &ctx).expect("built-in roots refine");
        let measured = report
            .empirical_ratios
            .last()
            .map_or_else(|| "-".to_string(), short);
        let agreement = report
            .agreement
            .as_ref()
            .map_or_else(|| "-".to_string(), short);
        println!(
            "{:<3} {:>13} {:>13} {:>13}",
            f.name(),
            short(&report.formula_value),
            measured,
            agreement
        );
    }
}
