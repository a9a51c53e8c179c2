//! Three `mkdf` steps on a built-in test function, printed as a trace.
//!
//! ```bash
//! cargo run --example solve_table_function            # f1 from x0 = 1
//! cargo run --example solve_table_function -- f7 3.6
//! ```

use stefbench::format::short;
use stefbench::{builtin, solve, MethodKind, PrecisionContext, SolveConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "f1".into());
    let ctx = PrecisionContext::default();
    let f = builtin(&name).unwrap_or_else(|| panic!("no built-in named {name}"));
    let x0 = match args.next() {
        Some(text) => ctx.parse_decimal(&text).expect("x0 is a decimal number"),
        None => f.default_x0(&ctx).unwrap(),
    };

    let trace = solve(&MethodKind::Mkdf, &f, &x0, &SolveConfig::fixed(3), &ctx);
    println!("{name}(x) = {}", f.ast());
    for it in &trace.iterates {
        println!(
            "x_{} = {}   |f| = {}",
            it.n,
            it.x.to_string_radix(10, Some(40)),
            short(&it.fx.clone().abs())
        );
    }
    println!("{} after {} evaluations", trace.status, trace.f_call_total);
}
