//! Computational order of convergence for every kernel on one function.
//!
//! ```bash
//! cargo run --example order_of_convergence -- f3
//! ```

use stefbench::analysis::coc_study;
use stefbench::methods::{MethodKind, METHOD_NAMES};
use stefbench::{builtin, PrecisionContext};

fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "f3".into());
    let f = builtin(&name).expect("a built-in function name");
    let ctx = PrecisionContext::default();
    let x0 = f.default_x0(&ctx).unwrap();
    let seed = f.reference_root(&ctx).unwrap();

    println!(
        "{name}(x) = {}, x0 = {}",
        f.ast(),
        f.default_x0_text().unwrap()
    );
    for method in METHOD_NAMES {
        let method: MethodKind = method.parse().unwrap();
        let study = coc_study(&method, &f, &x0, &seed, 12, &ctx).unwrap();
        let rho = match &study.estimate {
            Ok(est) => format!("{:.4}", est.estimate.to_f64()),
            Err(e) => format!("-- ({e})"),
        };
        println!(
            "{:<11} claimed {}  COC {rho:<8} {} steps, {}",
            method.name(),
            method.claimed_order(),
            study.trace.steps(),
            study.trace.status
        );
    }
}
