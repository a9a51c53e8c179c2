//! `c_k = f^(k)(x*)/k!` at refined roots, from jets and from finite
//! difference stencils.

use stefbench::analysis::{relative_gap, stencil_coefficients, taylor_coefficients};
use stefbench::{builtins, refine_root, PrecisionContext};

fn main() {
    let ctx = PrecisionContext::default();
    for f in builtins() {
        let seed = f.reference_root(&ctx).unwrap();
        let root = refine_root(&f, &seed, &ctx).expect("built-in roots are simple");
        let jet = taylor_coefficients(&f, &root, &ctx).unwrap();
        let stencil = stencil_coefficients(&f, &root, &ctx).unwrap();
        println!("{} root {}", f.name(), root.to_string_radix(10, Some(30)));
        for (k, (a, b)) in jet.iter().zip(&stencil).enumerate() {
            println!(
                "  c{} = {:>34}   stencil gap {:.1e}",
                k + 1,
                a.to_string_radix(10, Some(25)),
                relative_gap(a, b)
            );
        }
    }
}
