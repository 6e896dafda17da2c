mod common;

use common::{iota_failures, TC_REC};
use indtac::corpus::corpus_manifest;
use indtac::kernel::expr::scratch_fvar;
use indtac::kernel::inductive::recursor_type;
use indtac::kernel::{
    infer_type, is_def_eq, whnf, AuxNames, DeclKind, Environment, Expr, KernelError, Transparency,
};
use indtac::prelude::prelude;
use indtac::syntax::{load_source, parse_term, Elaborator, LoadError};

fn corpus_envs() -> Vec<(&'static str, Environment)> {
    let mut out = vec![("prelude", prelude())];
    for c in corpus_manifest() {
        let (r, env) = indtac::cli::run_script(c.source, indtac::cli::RunMode::Check);
        assert!(r.all_proved(), "{}", c.name);
        out.push((c.name, env));
    }
    out
}

fn term(env: &Environment, s: &str) -> Expr {
    Elaborator::new(env, Vec::new()).elab(&parse_term(s).unwrap(), None).unwrap()
}

fn numeral(k: u64) -> Expr {
    (0..k).fold(Expr::cnst("nat.zero"), |acc, _| Expr::app(Expr::cnst("nat.succ"), acc))
}

#[test]
fn tc_recursor_matches_the_hand_written_type() {
    let mut env = prelude();
    load_source(&mut env, include_str!("../corpus/tc_trans.ind").split("lemma").next().unwrap()).unwrap();
    let expected = term(&env, TC_REC);
    let info = env.inductive("tc").unwrap();
    assert_eq!(recursor_type(info), expected);
    assert_eq!(env.get("tc.rec").unwrap().ty, expected);
}

#[test]
fn nat_recursor_shape() {
    let env = prelude();
    let expected = term(
        &env,
        "∀ (M : ℕ → Type) (z : M 0) (s : ∀ (n : ℕ), M n → M (succ n)) (n : ℕ), M n",
    );
    assert_eq!(env.get("nat.rec").unwrap().ty, expected);
}

#[test]
fn base_constructor_type_has_explicit_parameters() {
    let mut env = prelude();
    load_source(&mut env, include_str!("../corpus/tc_trans.ind").split("lemma").next().unwrap()).unwrap();
    let expected = term(&env, "∀ (α : Type) (r : α → α → Type) (x y : α), r x y → tc α r x y");
    assert_eq!(env.get("tc.base").unwrap().ty, expected);
}

#[test]
fn iota_rules_for_every_corpus_constructor() {
    for (name, env) in corpus_envs() {
        assert_eq!(iota_failures(&env), Vec::<String>::new(), "{name}");
    }
}

/// Size counts constructors along the recursive spine only.
#[test]
fn sizeof_counts_recursive_constructors() {
    let env = prelude();
    for k in 0..6 {
        let e = Expr::app(Expr::cnst(&AuxNames::sizeof("nat")), numeral(k));
        let v = full_nf(&env, &e);
        assert_eq!(v, numeral(k + 1));
    }
    let list = term(&env, "list.cons ℕ 7 (list.cons ℕ 8 (list.nil ℕ))");
    let e = Expr::mk_app(Expr::cnst(&AuxNames::sizeof("list")), [Expr::cnst("nat"), list]);
    assert_eq!(full_nf(&env, &e), numeral(3));
}

/// Normal form of a closed first-order term.
fn full_nf(env: &Environment, e: &Expr) -> Expr {
    let w = whnf(env, e, Transparency::All);
    let (h, args) = w.app_parts();
    Expr::mk_app(h, args.iter().map(|a| full_nf(env, a)))
}

#[test]
fn every_derived_lemma_checks() {
    for (name, env) in corpus_envs() {
        for d in env.decls() {
            if let Some(v) = &d.value {
                let ty = infer_type(&env, v).unwrap_or_else(|e| panic!("{name}: {}: {e}", d.name));
                assert!(is_def_eq(&env, &ty, &d.ty, Transparency::All), "{name}: {}", d.name);
            }
            if d.name.contains("sizeof_lt") || d.name.ends_with("no_confusion") {
                assert!(d.value.is_some(), "{} has no proof", d.name);
                assert!(matches!(d.kind, DeclKind::Theorem | DeclKind::Definition), "{}", d.name);
            }
        }
    }
}

#[test]
fn whnf_is_idempotent_and_preserves_types_on_corpus_terms() {
    for (name, env) in corpus_envs() {
        for d in env.decls() {
            let Some(v) = &d.value else { continue };
            let mut todo = vec![v.clone()];
            // The value and its arguments at the head, a few levels deep.
            for _ in 0..2 {
                let more: Vec<Expr> = todo.iter().flat_map(|e| e.app_parts().1).filter(|a| a.is_locally_closed()).collect();
                todo.extend(more);
            }
            for e in todo.into_iter().filter(|e| e.fvars().is_empty() && !e.has_metas()) {
                for t in [Transparency::Reducible, Transparency::All] {
                    let w = whnf(&env, &e, t);
                    assert_eq!(whnf(&env, &w, t), w, "{name}: {}", d.name);
                }
                let (Ok(a), Ok(b)) = (infer_type(&env, &e), infer_type(&env, &whnf(&env, &e, Transparency::All))) else {
                    panic!("{name}: {} does not type-check", d.name)
                };
                assert!(is_def_eq(&env, &a, &b, Transparency::All), "{name}: {}", d.name);
            }
        }
    }
}

#[test]
fn definitional_equality_examples() {
    let env = prelude();
    let n = Expr::FVar(scratch_fvar());
    let zero_plus = Expr::mk_app(Expr::cnst("add"), [numeral(0), n.clone()]);
    assert!(is_def_eq(&env, &zero_plus, &n, Transparency::All));
    let plus_zero = Expr::mk_app(Expr::cnst("add"), [n.clone(), numeral(0)]);
    assert!(!is_def_eq(&env, &plus_zero, &n, Transparency::All));
    let id = term(&env, "λ (x : ℕ), x");
    assert_eq!(whnf(&env, &Expr::app(id, n.clone()), Transparency::Reducible), n);
    // lt is not reducible, so it only unfolds at All.
    let lt = term(&env, "0 < 1");
    assert_ne!(whnf(&env, &lt, Transparency::Reducible), Expr::cnst("true"));
    assert_eq!(whnf(&env, &lt, Transparency::All), Expr::cnst("true"));
}

#[test]
fn ill_typed_application_is_rejected() {
    let env = prelude();
    let bad = Expr::app(Expr::cnst("nat.zero"), Expr::cnst("nat.zero"));
    assert!(infer_type(&env, &bad).is_err());
    assert_eq!(infer_type(&env, &Expr::Sort).unwrap(), Expr::Sort);
}

fn load_err(src: &str) -> KernelError {
    let mut env = prelude();
    match load_source(&mut env, src) {
        Err(LoadError::Elab(indtac::syntax::ElabError::Kernel { err, .. })) => *err,
        other => panic!("expected a kernel error, got {other:?}"),
    }
}

#[test]
fn invalid_inductives_are_rejected() {
    assert!(matches!(load_err("inductive bad : Type\n| mk : (bad → false) → bad"), KernelError::Positivity(_)));
    assert!(matches!(load_err("inductive bad : Type\n| mk : list bad → bad"), KernelError::NestedOrMutual(_)));
    assert!(matches!(load_err("inductive bad : Type\n| mk : (ℕ → bad) → bad"), KernelError::UnsupportedRecursion(_)));
    assert!(matches!(
        load_err("inductive bad (A : Type) : Type\n| mk : bad ℕ"),
        KernelError::ParameterMismatch(_)
    ));
    assert!(matches!(load_err("inductive bad : Type\n| mk : ℕ"), KernelError::BadConstructorType(_)));
}
