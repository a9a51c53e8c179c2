use super::ScalarFunction;

/// `(name, source, six-decimal root, table initial guess)` for the seven
/// benchmark functions.
pub const BUILTIN_SOURCES: [(&str, &str, &str, &str); 7] = [
    ("f1", "sin(x)^2 - x^2 + 1", "1.404492", "1"),
    ("f2", "x^2 - exp(x) - 3*x + 2", "0.257530", "0.7"),
    ("f3", "cos(x) - x", "0.739085", "1"),
    ("f4", "cos(x) - x*exp(x) + x^2", "0.639154", "1"),
    ("f5", "exp(x) - 1.5 - arctan(x)", "0.767653", "1"),
    ("f6", "8*x - cos(x) - 2*x^2", "0.128077", "1"),
    ("f7", "ln(x^2 + x + 2) - x + 1", "4.152590", "3.6"),
];

/// All built-in functions, in order `f1`..`f7`.
pub fn builtins() -> Vec<ScalarFunction> {
    BUILTIN_SOURCES
        .iter()
        .map(|(name, src, root, x0)| {
            let ast = super::parse(src).expect("built-in sources parse");
            ScalarFunction::new(*name, ast)
                .with_reference_root(*root)
                .with_default_x0(*x0)
        })
        .collect()
}

/// Looks up a built-in by name (`"f1"`..`"f7"`).
pub fn builtin(name: &str) -> Option<ScalarFunction> {
    builtins().into_iter().find(|f| f.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, BinOp, Expr, UnaryFn};
    use crate::precision::PrecisionContext;

    #[test]
    fn registry_has_seven_functions_with_table_guesses() {
        let names: Vec<_> = builtins().iter().map(|f| f.name().to_string()).collect();
        assert_eq!(names, ["f1", "f2", "f3", "f4", "f5", "f6", "f7"]);
        let guesses: Vec<_> = builtins()
            .iter()
            .map(|f| f.default_x0_text().unwrap().to_string())
            .collect();
        assert_eq!(guesses, ["1", "0.7", "1", "1", "1", "1", "3.6"]);
        assert!(builtin("f8").is_none());
    }

    #[test]
    fn f1_tree_matches_user_text() {
        let f1 = builtin("f1").unwrap();
        assert_eq!(parse("sin(x)^2 - x^2 + 1").unwrap(), *f1.ast());
        let expected = Expr::binary(
            BinOp::Add,
            Expr::binary(
                BinOp::Sub,
                Expr::pow(Expr::unary(UnaryFn::Sin, Expr::Var), 2),
                Expr::pow(Expr::Var, 2),
            ),
            Expr::literal("1"),
        );
        assert_eq!(*f1.ast(), expected);
    }

    #[test]
    fn six_decimal_roots_are_near_zeros() {
        let ctx = PrecisionContext::default();
        let bound = ctx.parse_decimal("5e-6").unwrap();
        for f in builtins() {
            let root = f.reference_root(&ctx).unwrap();
            let r = f.eval(&root, &ctx).unwrap();
            assert!(r.abs() < bound, "{}", f.name());
        }
    }

    #[test]
    fn f3_at_zero_is_one() {
        let ctx = PrecisionContext::default();
        assert_eq!(builtin("f3").unwrap().eval(&ctx.zero(), &ctx).unwrap(), 1);
    }
}
