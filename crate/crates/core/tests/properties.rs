use std::collections::HashSet;
use std::sync::Arc;

use indtac::kernel::{infer_type, is_def_eq, whnf, Environment, Expr, FVarId, Transparency};
use indtac::prelude::prelude;
use indtac::proofstate::{Goal, TacticState};
use indtac::qnify::{measure, qnify_step, Step};
use indtac::syntax::{elab_statement, parse_file, parse_term, Elaborator, Item, Printer};
use proptest::prelude::*;

/// Natural number expressions, with de Bruijn variables bound by
/// enclosing lambdas.
#[derive(Clone, Debug)]
enum Nat {
    Zero,
    Var(u32),
    Succ(Box<Nat>),
    Add(Box<Nat>, Box<Nat>),
    Pred(Box<Nat>),
}

impl Nat {
    fn eval(&self) -> u64 {
        match self {
            Nat::Zero => 0,
            Nat::Var(_) => unreachable!(),
            Nat::Succ(a) => a.eval() + 1,
            Nat::Add(a, b) => a.eval() + b.eval(),
            Nat::Pred(a) => a.eval().saturating_sub(1),
        }
    }

    fn expr(&self) -> Expr {
        match self {
            Nat::Zero => Expr::cnst("nat.zero"),
            Nat::Var(i) => Expr::BVar(*i),
            Nat::Succ(a) => Expr::app(Expr::cnst("nat.succ"), a.expr()),
            Nat::Add(a, b) => Expr::mk_app(Expr::cnst("add"), [a.expr(), b.expr()]),
            Nat::Pred(a) => Expr::app(Expr::cnst("pred"), a.expr()),
        }
    }

    fn source(&self) -> String {
        match self {
            Nat::Zero => "0".into(),
            Nat::Var(_) => unreachable!(),
            Nat::Succ(a) => format!("succ ({})", a.source()),
            Nat::Add(a, b) => format!("({}) + ({})", a.source(), b.source()),
            Nat::Pred(a) => format!("pred ({})", a.source()),
        }
    }
}

fn nat_term(vars: u32) -> BoxedStrategy<Nat> {
    let leaf = if vars == 0 {
        Just(Nat::Zero).boxed()
    } else {
        prop_oneof![Just(Nat::Zero), (0..vars).prop_map(Nat::Var)].boxed()
    };
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Nat::Succ(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Nat::Add(Box::new(a), Box::new(b))),
            inner.prop_map(|a| Nat::Pred(Box::new(a))),
        ]
    })
    .boxed()
}

fn numeral(k: u64) -> Expr {
    (0..k).fold(Expr::cnst("nat.zero"), |acc, _| Expr::app(Expr::cnst("nat.succ"), acc))
}

fn full_nf(env: &Environment, e: &Expr) -> Expr {
    let w = whnf(env, e, Transparency::All);
    let (h, args) = w.app_parts();
    Expr::mk_app(h, args.iter().map(|a| full_nf(env, a)).collect::<Vec<_>>())
}

/// A closed term built from nat expressions under up to three binders:
/// lambdas over ℕ, or a universally quantified equation.
fn closed_term() -> impl Strategy<Value = Expr> {
    (0u32..4, any::<bool>()).prop_flat_map(|(k, prop)| {
        (nat_term(k), nat_term(k)).prop_map(move |(a, b)| {
            let nat = Expr::cnst("nat");
            let body = if prop { Expr::mk_app(Expr::cnst("eq"), [nat.clone(), a.expr(), b.expr()]) } else { a.expr() };
            (0..k).fold(body, |acc, _| if prop { Expr::pi("x", nat.clone(), acc) } else { Expr::lam("x", nat.clone(), acc) })
        })
    })
}

fn start(env: Arc<Environment>, stmt: &str) -> TacticState {
    let file = parse_file(&format!("lemma x {stmt} := foo")).unwrap();
    let Item::Lemma { binders, ty, at, .. } = &file.items[0] else { panic!() };
    let (bs, t) = elab_statement(&env, binders, ty, at.0).unwrap();
    TacticState::new(env, &bs, &t)
}

fn ids(g: &Goal) -> HashSet<FVarId> {
    g.hyps.iter().map(|h| h.id).collect()
}

/// Surface syntax for equation sides over `x y z`: nat terms or pairs.
fn eq_side(pairs: bool) -> BoxedStrategy<String> {
    let nat = prop_oneof![Just("0".to_string()), Just("x".into()), Just("y".into()), Just("z".into())]
        .prop_recursive(3, 12, 1, |inner| inner.prop_map(|a| format!("succ ({a})")))
        .boxed();
    if pairs {
        (nat.clone(), nat).prop_map(|(a, b)| format!("({a}, {b})")).boxed()
    } else {
        nat
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closed_arithmetic_evaluates_like_the_reference(t in nat_term(0)) {
        let env = prelude();
        let e = t.expr();
        let elaborated = Elaborator::new(&env, Vec::new()).elab(&parse_term(&t.source()).unwrap(), None).unwrap();
        prop_assert_eq!(&elaborated, &e);
        prop_assert_eq!(full_nf(&env, &e), numeral(t.eval()));
        for tr in [Transparency::Reducible, Transparency::All] {
            let w = whnf(&env, &e, tr);
            prop_assert_eq!(whnf(&env, &w, tr), w.clone());
            let ty = infer_type(&env, &w).unwrap();
            prop_assert!(is_def_eq(&env, &ty, &Expr::cnst("nat"), Transparency::Reducible));
        }
    }

    #[test]
    fn printed_source_parses_back(e in closed_term()) {
        let env = prelude();
        prop_assume!(infer_type(&env, &e).is_ok());
        let src = Printer::source(&env, &e);
        let back = Elaborator::new(&env, Vec::new()).elab(&parse_term(&src).unwrap(), None);
        prop_assert_eq!(back.as_ref().ok(), Some(&e), "{}", src);
    }

    #[test]
    fn qnify_steps_decrease_the_measure_and_stay_sound(
        (l, r) in any::<bool>().prop_flat_map(|p| (eq_side(p), eq_side(p))),
    ) {
        let env = Arc::new(prelude());
        let ty = if l.starts_with('(') { "ℕ × ℕ" } else { "ℕ" };
        let mut st = start(env, &format!("(x y z : ℕ) (h : eq ({ty}) ({l}) ({r})) : true"));
        let g = st.main_goal().unwrap().clone();
        let mut queue = vec![g.find("h").unwrap().id];
        let mut gid = Some(g.id);
        while let (Some(cur), false) = (gid, queue.is_empty()) {
            let before = measure(&st.env, st.goal(cur).unwrap(), &queue);
            let eq = queue.remove(0);
            let (step, rule) = qnify_step(&mut st, cur, eq).unwrap();
            match step {
                Step::Closed => gid = None,
                Step::Open(ng, front) => {
                    let live = ids(st.goal(ng).unwrap());
                    queue.retain(|q| live.contains(q));
                    queue.splice(0..0, front);
                    let after = measure(&st.env, st.goal(ng).unwrap(), &queue);
                    prop_assert!(after < before, "{:?}: {:?} -> {:?}", rule, before, after);
                    gid = Some(ng);
                }
            }
        }
        if let Some(g) = gid {
            st.exact(g, &Expr::cnst("true.intro")).unwrap();
        }
        prop_assert!(st.check_proof().is_ok());
    }

    #[test]
    fn revert_then_intro_restores_the_goal(picks in proptest::collection::vec(any::<bool>(), 6)) {
        let env = Arc::new(prelude());
        let mut st = start(env, "(a b c : ℕ) (h₁ : a = b) (h₂ : b < c) (p : ℕ × ℕ) : a + c = prod.fst ℕ ℕ p");
        let g = st.main_goal().unwrap().clone();
        let chosen: Vec<FVarId> = g.hyps.iter().zip(&picks).filter(|(_, p)| **p).map(|(h, _)| h.id).collect();
        let (gid, moved) = st.revert(g.id, &chosen).unwrap();
        let untouched = ids(st.goal(gid).unwrap());
        let mut cur = gid;
        for h in &moved {
            cur = st.intro(cur, Some(&h.name)).unwrap().0;
        }
        let back = st.goal(cur).unwrap().clone();
        // Untouched hypotheses stay in place; reverted ones come back after
        // them, in their original order, under new ids.
        let kept: Vec<_> = g.hyps.iter().filter(|h| untouched.contains(&h.id)).collect();
        let expected: Vec<_> = kept.into_iter().chain(&moved).collect();
        prop_assert_eq!(back.hyps.len(), expected.len());
        let renaming: std::collections::HashMap<FVarId, Expr> =
            expected.iter().zip(&back.hyps).map(|(o, n)| (o.id, Expr::FVar(n.id))).collect();
        for (old, new) in expected.iter().zip(&back.hyps) {
            prop_assert_eq!(&old.name, &new.name);
            prop_assert_eq!(old.ty.replace_fvars(&renaming), new.ty.clone());
            if untouched.contains(&old.id) {
                prop_assert_eq!(old.id, new.id);
            }
        }
        prop_assert_eq!(g.target.replace_fvars(&renaming), back.target.clone());
    }

    #[test]
    fn subst_removes_exactly_the_variable_and_equation(flip in any::<bool>(), rhs in eq_side(false)) {
        prop_assume!(!rhs.contains('x'));
        let env = Arc::new(prelude());
        let eq = if flip { format!("({rhs}) = x") } else { format!("x = ({rhs})") };
        let mut st = start(env, &format!("(x y z : ℕ) (h : {eq}) (k : x = y) : x + z = y"));
        let g = st.main_goal().unwrap().clone();
        let (x, h) = (g.find("x").unwrap().id, g.find("h").unwrap().id);
        let ng = st.subst(g.id, h).unwrap();
        let mut expected = ids(&g);
        expected.remove(&x);
        expected.remove(&h);
        if rhs.trim() == "y" || rhs.trim() == "z" {
            // Either variable may be eliminated when both sides are variables.
            let got = ids(st.goal(ng).unwrap());
            prop_assert_eq!(got.len(), expected.len());
            prop_assert!(!got.contains(&h));
        } else {
            prop_assert_eq!(ids(st.goal(ng).unwrap()), expected);
        }
    }
}

/// Runs every corpus lemma tactic by tactic and checks each surfaced goal:
/// no temporary names, pairwise distinct display names, and a display that
/// determines the goal.
#[test]
fn surfaced_goals_are_well_named() {
    use indtac::cli::{run_script, run_tactic, start_lemma, RunMode};
    use indtac::syntax::Proof;
    let mut seen: std::collections::HashMap<String, Expr> = std::collections::HashMap::new();
    let mut goals = 0;
    for c in indtac::corpus::corpus_manifest() {
        let (_, env) = run_script(c.source, RunMode::Check);
        for item in &parse_file(c.source).unwrap().items {
            let Item::Lemma { proof: Proof::Tactics(ts), .. } = item else { continue };
            let mut st = start_lemma(&env, item).unwrap();
            for t in ts {
                run_tactic(&mut st, None, t).unwrap();
                for g in &st.goals {
                    goals += 1;
                    assert!(g.hyps.iter().all(|h| !h.temp), "{}: temporary name after {}", c.name, t.text);
                    let names: HashSet<_> = g.hyps.iter().map(|h| h.name.clone()).collect();
                    assert_eq!(names.len(), g.hyps.len(), "{}: duplicate names after {}", c.name, t.text);
                    let closed = indtac::kernel::expr::mk_pi(&g.decls(), g.target.clone());
                    let shown = indtac::proofstate::pp_goal(&st.env, g);
                    if let Some(prev) = seen.insert(shown.clone(), closed.clone()) {
                        assert_eq!(prev, closed, "two goals print as\n{shown}");
                    }
                }
            }
        }
    }
    assert!(goals > 10);
}
