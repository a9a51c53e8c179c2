//! The Kou family: order four only at `theta = -1`, and `mkdf` is that
//! member with the symmetric difference slope.

use stefbench::analysis::coc_study;
use stefbench::methods::{central_diff_slope, kou_step, mkdf_step, MethodKind};
use stefbench::{builtin, PrecisionContext};

fn main() {
    let ctx = PrecisionContext::default();
    let f = builtin("f3").unwrap();
    let x0 = f.default_x0(&ctx).unwrap();
    let seed = f.reference_root(&ctx).unwrap();

    for theta in ["-2", "-1", "-0.5", "0", "0.5", "1"] {
        let method = MethodKind::kou(ctx.parse_decimal(theta).unwrap());
        let study = coc_study(&method, &f, &x0, &seed, 12, &ctx).unwrap();
        let rho = study.estimate.map_or(f64::NAN, |e| e.estimate.to_f64());
        println!("theta = {theta:>4}: COC {rho:.3}");
    }
    for method in [MethodKind::KouFd, MethodKind::Mkdf] {
        let study = coc_study(&method, &f, &x0, &seed, 12, &ctx).unwrap();
        let rho = study.estimate.map_or(f64::NAN, |e| e.estimate.to_f64());
        println!("{:>12}: COC {rho:.3}", method.name());
    }

    let slope = central_diff_slope(&f, &x0, &ctx).unwrap();
    let kou = kou_step(&f, &x0, &ctx.int(-1), &slope, &ctx).unwrap();
    let mkdf = mkdf_step(&f, &x0, &ctx).unwrap();
    println!("kou(-1, central slope) == mkdf: {}", kou.next == mkdf.next);
}
