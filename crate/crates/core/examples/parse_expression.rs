//! Parsing an expression, evaluating it, and reading exact derivatives off
//! a Taylor jet.
//!
//! ```bash
//! cargo run --example parse_expression -- "x^3 - 2*x - 5" 2
//! ```

use stefbench::{parse, PrecisionContext, ScalarFunction};

fn main() {
    let mut args = std::env::args().skip(1);
    let text = args.next().unwrap_or_else(|| "x^3 - 2*x - 5".into());
    let at = args.next().unwrap_or_else(|| "2".into());
    let ctx = PrecisionContext::new(128).unwrap();

    let ast = match parse(&text) {
        Ok(ast) => ast,
        Err(e) => {
            eprintln!("{text}\n{:>width$}\n{e}", "^", width = e.position + 1);
            std::process::exit(2);
        }
    };
    println!("parsed:   {ast}");
    println!("tree:     {ast:?}");

    let f = ScalarFunction::new("g", ast);
    let x = ctx.parse_decimal(&at).expect("a decimal point");
    match f.jet(&x, 4, &ctx) {
        Ok(jet) => {
            for (k, c) in jet.coeffs().iter().enumerate() {
                println!("g^({k})({at})/{k}! = {}", c.to_string_radix(10, Some(30)));
            }
        }
        Err(e) => println!("cannot expand at {at}: {e}"),
    }

    // a malformed input reports the byte offset of the problem
    let bad = "2 * (x + 1";
    let e = parse(bad).unwrap_err();
    println!("{bad:?}: {e}");
}
