//! The prelude: logical connectives, equality, natural numbers and the
//! order lemmas used by the cycle rule, all checked by the kernel.

use std::sync::OnceLock;

use crate::kernel::Environment;
use crate::syntax::load_source;

pub const PRELUDE_SOURCE: &str = include_str!("prelude.ind");

/// A fresh copy of the checked prelude environment.
pub fn prelude() -> Environment {
    static ENV: OnceLock<Environment> = OnceLock::new();
    ENV.get_or_init(|| {
        let mut env = Environment::new();
        if let Err(e) = load_source(&mut env, PRELUDE_SOURCE) {
            panic!("prelude failed to check: {e}");
        }
        env
    })
    .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prelude_checks_and_has_derived_declarations() {
        let env = prelude();
        for n in [
            "nat.sizeof",
            "nat.succ.sizeof_lt_1",
            "nat.no_confusion",
            "list.cons.sizeof_lt_2",
            "prod.no_confusion",
            "eq.no_confusion",
            "lt_trans",
        ] {
            assert!(env.contains(n), "missing {n}");
        }
    }
}
