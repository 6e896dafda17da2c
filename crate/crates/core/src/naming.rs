//! Naming of the hypotheses introduced by induction.

use std::collections::{HashMap, HashSet};

use crate::kernel::{whnf, CtorArg, Environment, Expr, Name, Transparency};
use crate::proofstate::Goal;

/// Preferred variable names per type head, plus heads (like `list`) whose
/// hint is the plural of their element type's hint.
#[derive(Clone, Debug, Default)]
pub struct NameHintRegistry {
    hints: HashMap<Name, Vec<Name>>,
    containers: HashSet<Name>,
}

impl NameHintRegistry {
    /// Later registrations replace earlier ones for the same head.
    pub fn register(&mut self, head: Name, names: Vec<Name>) {
        self.hints.insert(head, names);
    }

    pub fn register_container(&mut self, head: Name) {
        self.containers.insert(head);
    }

    pub fn hints_for(&self, head: &str) -> Option<&[Name]> {
        self.hints.get(head).map(|v| v.as_slice())
    }

    fn candidates(&self, env: &Environment, ty: &Expr) -> Vec<Name> {
        let ty = whnf(env, ty, Transparency::Reducible);
        let (head, args) = ty.app_parts();
        let Some(h) = head.as_const() else { return Vec::new() };
        if let Some(names) = self.hints.get(h) {
            return names.clone();
        }
        if self.containers.contains(h) {
            if let Some(elem) = args.last() {
                let elem = whnf(env, elem, Transparency::Reducible);
                if let Some(names) = elem.head_const().and_then(|e| self.hints.get(e)) {
                    return names.iter().map(|n| Name::from(format!("{n}s"))).collect();
                }
            }
        }
        Vec::new()
    }

    /// First registered hint for `ty` that is not in `used`.
    pub fn lookup(&self, env: &Environment, ty: &Expr, used: &HashSet<Name>) -> Option<Name> {
        self.candidates(env, ty).into_iter().find(|n| !used.contains(n))
    }

    /// Whether any hint is registered for `ty`.
    pub fn has_hints(&self, env: &Environment, ty: &Expr) -> bool {
        !self.candidates(env, ty).is_empty()
    }
}

/// `n` written with subscript digits.
pub fn subscript(n: usize) -> String {
    n.to_string().chars().map(|c| char::from_u32('₀' as u32 + c.to_digit(10).unwrap()).unwrap()).collect()
}

/// Which rule chose a hypothesis name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NameRule {
    User,
    Recursion,
    IndexAssociation,
    NamedArgument,
    TypeHint,
    Fallback,
    InductionHypothesis,
    Equation,
}

/// `base` if unused, else the first of `base_1`, `base_2`, ... that is.
pub fn fresh_name(base: &str, used: &HashSet<Name>) -> Name {
    if !used.contains(base) {
        return Name::from(base);
    }
    (1..).map(|i| Name::from(format!("{base}_{i}"))).find(|n| !used.contains(n)).unwrap()
}

/// Approximates whether `ty` is a proposition by looking at the head of its
/// conclusion: equalities, `true`/`false`, indexed families, and relations
/// (constants or hypotheses whose type is a function into `Type`).
pub fn is_prop(env: &Environment, g: &Goal, ty: &Expr) -> bool {
    let mut body = whnf(env, ty, Transparency::Reducible);
    while let Expr::Pi(_, _, b) = &body {
        body = b.instantiate1(&Expr::FVar(crate::kernel::expr::scratch_fvar()));
    }
    let head = body.app_fn().clone();
    let relation = |t: &Expr| {
        let mut t = t.clone();
        let mut arity = 0;
        while let Expr::Pi(_, _, b) = &t {
            arity += 1;
            t = (**b).clone();
        }
        arity > 0 && t.is_sort()
    };
    match &head {
        Expr::Const(c) => {
            if matches!(&**c, "eq" | "heq" | "false" | "true") {
                return true;
            }
            if let Some(info) = env.inductive(c) {
                return info.num_indices() > 0;
            }
            env.get(c).is_some_and(|d| relation(&d.ty))
        }
        Expr::FVar(x) => g.hyp(*x).is_some_and(|h| relation(&h.ty)),
        _ => false,
    }
}

/// What is known about the goal an induction started from, for naming the
/// constructor arguments of each case.
pub struct ArgNamer<'a> {
    pub env: &'a Environment,
    pub goal: &'a Goal,
    pub major: Name,
    /// Per index position, the hypothesis that occupied it, with its type.
    pub index_hyps: Vec<Option<(Name, Expr)>>,
}

impl ArgNamer<'_> {
    /// The preferred name of a constructor argument of type `ty` whose
    /// value occurs in the index positions `assoc`.
    pub fn arg_name(&self, arg: &CtorArg, ty: &Expr, assoc: &[usize], used: &HashSet<Name>) -> (Name, NameRule) {
        if arg.recursive {
            return (self.major.clone(), NameRule::Recursion);
        }
        if let Some(n) = self.associated(ty, assoc) {
            return (n, NameRule::IndexAssociation);
        }
        if arg.explicit_name {
            return (arg.name.clone(), NameRule::NamedArgument);
        }
        let hints = &self.env.hints;
        if let Some(n) = hints.lookup(self.env, ty, used) {
            return (n, NameRule::TypeHint);
        }
        if let Some(n) = hints.candidates(self.env, ty).into_iter().next() {
            return (n, NameRule::TypeHint);
        }
        let n = if is_prop(self.env, self.goal, ty) { "h" } else { "x" };
        (Name::from(n), NameRule::Fallback)
    }

    fn associated(&self, ty: &Expr, assoc: &[usize]) -> Option<Name> {
        let mut found: Option<&(Name, Expr)> = None;
        for &i in assoc {
            let h = self.index_hyps.get(i)?.as_ref()?;
            if found.is_some_and(|f| f.0 != h.0) {
                return None;
            }
            found = Some(h);
        }
        let (n, hty) = found?;
        crate::kernel::is_def_eq(self.env, hty, ty, Transparency::Reducible).then(|| n.clone())
    }
}

/// Name of an induction hypothesis: `ih` when the case has only one.
pub fn ih_name(count: usize, rec_arg: &str) -> Name {
    if count == 1 {
        Name::from("ih")
    } else {
        Name::from(format!("ih_{rec_arg}"))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::prelude::prelude;
    use crate::proofstate::TacticState;
    use crate::syntax::{elab_statement, load_source, parse_file, Item};

    fn used(ns: &[&str]) -> HashSet<Name> {
        ns.iter().map(|n| Name::from(*n)).collect()
    }

    fn start(defs: &str, binders: &str) -> TacticState {
        let mut env = prelude();
        load_source(&mut env, defs).unwrap();
        let file = parse_file(&format!("lemma x {binders} : true := foo")).unwrap();
        let Item::Lemma { binders, ty, at, .. } = &file.items[0] else { panic!() };
        let (bs, t) = elab_statement(&env, binders, ty, at.0).unwrap();
        TacticState::new(Arc::new(env), &bs, &t)
    }

    #[test]
    fn subscripts() {
        assert_eq!(subscript(1), "₁");
        assert_eq!(subscript(10), "₁₀");
        assert_eq!(subscript(907), "₉₀₇");
    }

    #[test]
    fn fresh_names_count_up() {
        assert_eq!(&*fresh_name("n", &used(&[])), "n");
        assert_eq!(&*fresh_name("n", &used(&["n"])), "n_1");
        assert_eq!(&*fresh_name("n", &used(&["n", "n_1", "n_3"])), "n_2");
    }

    #[test]
    fn ih_names() {
        assert_eq!(&*ih_name(1, "t"), "ih");
        assert_eq!(&*ih_name(2, "t"), "ih_t");
    }

    #[test]
    fn registry_hints_and_plurals() {
        let env = prelude();
        let nat = Expr::cnst("nat");
        assert_eq!(env.hints.lookup(&env, &nat, &used(&[])).as_deref(), Some("n"));
        assert_eq!(env.hints.lookup(&env, &nat, &used(&["n"])).as_deref(), Some("m"));
        assert_eq!(env.hints.lookup(&env, &nat, &used(&["n", "m", "k"])), None);
        assert!(env.hints.has_hints(&env, &nat));
        let nats = Expr::app(Expr::cnst("list"), nat);
        assert_eq!(env.hints.lookup(&env, &nats, &used(&[])).as_deref(), Some("ns"));
        let bools = Expr::app(Expr::cnst("list"), Expr::cnst("bool"));
        assert!(!env.hints.has_hints(&env, &bools));
    }

    #[test]
    fn later_registration_replaces_earlier() {
        let mut env = prelude();
        env.hints.register(Name::from("nat"), vec![Name::from("i")]);
        assert_eq!(env.hints.lookup(&env, &Expr::cnst("nat"), &used(&[])).as_deref(), Some("i"));
    }

    #[test]
    fn propositions() {
        let st = start(
            "inductive even : ℕ → Type\n| zero : even 0",
            "(α : Type) (r : α → α → Type) (a : α) (n : ℕ)",
        );
        let g = st.main_goal().unwrap();
        let env = &*st.env;
        let ty = |s: &str| {
            let e = crate::syntax::parse_term(s).unwrap();
            crate::syntax::Elaborator::new(env, g.decls()).elab(&e, None).unwrap()
        };
        for p in ["n = 0", "false", "true", "even n", "r a a", "∀ (m : ℕ), m = n", "¬ (n = 0)"] {
            assert!(is_prop(env, g, &ty(p)), "{p}");
        }
        for d in ["ℕ", "α", "list ℕ", "ℕ → ℕ", "Type"] {
            assert!(!is_prop(env, g, &ty(d)), "{d}");
        }
    }

    #[test]
    fn index_association_respects_types() {
        let st = start("", "(α : Type) (xs : list α) (n : ℕ)");
        let g = st.main_goal().unwrap();
        let env = &*st.env;
        let alpha = Expr::FVar(g.find("α").unwrap().id);
        let list_alpha = g.find("xs").unwrap().ty.clone();
        let namer = ArgNamer {
            env,
            goal: g,
            major: Name::from("h"),
            index_hyps: vec![Some((Name::from("xs"), list_alpha.clone())), Some((Name::from("n"), Expr::cnst("nat"))), None],
        };
        let arg = |explicit, recursive| CtorArg { name: Name::from("a"), ty: Expr::Sort, explicit_name: explicit, recursive };
        let none = HashSet::new();
        assert_eq!(namer.arg_name(&arg(false, false), &list_alpha, &[0], &none), (Name::from("xs"), NameRule::IndexAssociation));
        assert_eq!(namer.arg_name(&arg(true, false), &alpha, &[0], &none), (Name::from("a"), NameRule::NamedArgument));
        assert_eq!(namer.arg_name(&arg(false, false), &alpha, &[0], &none), (Name::from("x"), NameRule::Fallback));
        // Two different hypotheses, or an unknown index, give no association.
        assert_eq!(namer.arg_name(&arg(false, false), &Expr::cnst("nat"), &[1, 2], &none).1, NameRule::TypeHint);
        assert_eq!(namer.arg_name(&arg(false, true), &list_alpha, &[0], &none), (Name::from("h"), NameRule::Recursion));
        let eq = Expr::mk_app(Expr::cnst("eq"), [alpha.clone(), alpha.clone(), alpha.clone()]);
        assert_eq!(namer.arg_name(&arg(false, false), &eq, &[], &none), (Name::from("h"), NameRule::Fallback));
    }
}
