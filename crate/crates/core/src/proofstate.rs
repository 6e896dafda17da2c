//! Goals, hypotheses with stable identities, and the primitive tactics.
//!
//! Every primitive replaces one goal by zero or more new goals and records a
//! justification: a function from proofs of the new goals to a proof of the
//! old one. The whole proof is assembled on demand by running these
//! backwards from the root goal.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::kernel::{
    expr::{mk_lambda, mk_pi},
    name, whnf, Environment, Expr, FVarId, KernelError, LocalDecl, MetaId, Name, Transparency, TypeChecker,
};
use crate::syntax::{Mode, Printer};
use crate::unify::{descend, Descent};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyp {
    pub id: FVarId,
    pub name: Name,
    pub ty: Expr,
    /// Placeholder name awaiting the naming pass.
    pub temp: bool,
}

impl Hyp {
    pub fn decl(&self) -> LocalDecl {
        LocalDecl::new(self.id, self.name.clone(), self.ty.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Goal {
    pub id: MetaId,
    pub hyps: Vec<Hyp>,
    pub target: Expr,
    pub case_tag: Option<Name>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TacticError {
    #[error("no goals")]
    NoGoals,
    #[error("unknown goal {0:?}")]
    UnknownGoal(MetaId),
    #[error("target is not a function type: {0}")]
    NotAPi(String),
    #[error("unknown hypothesis {0}")]
    UnknownHypothesis(String),
    #[error("type error: {0}")]
    TypeError(String),
    #[error("cannot unify {0} with the goal")]
    UnificationFailure(String),
    #[error("occurs check: {0}")]
    OccursCheck(String),
    #[error("{0}")]
    DependencyError(String),
    #[error("cannot fix {0}: the major premise depends on it")]
    FixedHypothesisConflict(String),
    #[error("case {ctor} takes {expected} names, got {found}")]
    UserNameCountMismatch { ctor: String, expected: usize, found: usize },
    #[error("unknown case {0}")]
    UnknownCase(String),
    #[error("{0} is not an inductive type")]
    NotInductive(String),
    #[error("generalising indices made the goal ill-typed: {0}")]
    RewriteMadeGoalIllTyped(String),
    #[error("{0}")]
    Elab(String),
}

impl From<KernelError> for TacticError {
    fn from(e: KernelError) -> Self {
        TacticError::TypeError(e.to_string())
    }
}

pub type TResult<T> = Result<T, TacticError>;

type Build = Arc<dyn Fn(&[Expr]) -> Expr + Send + Sync>;

#[derive(Clone)]
enum Solution {
    Term(Expr),
    Split { children: Vec<MetaId>, build: Build },
}

impl fmt::Debug for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Solution::Term(e) => f.debug_tuple("Term").field(e).finish(),
            Solution::Split { children, .. } => f.debug_struct("Split").field("children", children).finish(),
        }
    }
}

impl Goal {
    pub fn hyp(&self, id: FVarId) -> Option<&Hyp> {
        self.hyps.iter().find(|h| h.id == id)
    }

    pub fn position(&self, id: FVarId) -> Option<usize> {
        self.hyps.iter().position(|h| h.id == id)
    }

    /// The innermost hypothesis with this display name.
    pub fn find(&self, n: &str) -> Option<&Hyp> {
        self.hyps.iter().rev().find(|h| &*h.name == n)
    }

    pub fn decls(&self) -> Vec<LocalDecl> {
        self.hyps.iter().map(Hyp::decl).collect()
    }

    pub fn checker<'a>(&self, env: &'a Environment) -> TypeChecker<'a> {
        TypeChecker::with_locals(env, self.hyps.iter().map(|h| (h.id, h.ty.clone())))
    }

    pub fn names(&self) -> HashSet<Name> {
        self.hyps.iter().map(|h| h.name.clone()).collect()
    }

    /// Display names, marking shadowed hypotheses with a dagger.
    pub fn display_names(&self) -> HashMap<FVarId, String> {
        let mut out = HashMap::new();
        for (i, h) in self.hyps.iter().enumerate() {
            let shadowed = self.hyps[i + 1..].iter().any(|k| k.name == h.name);
            let n = if shadowed { format!("{}✝", h.name) } else { h.name.to_string() };
            out.insert(h.id, n);
        }
        out
    }

    /// Hypotheses after `id` whose types depend on it, transitively, in
    /// context order.
    pub fn dependents(&self, ids: &[FVarId]) -> Vec<FVarId> {
        let mut set: HashSet<FVarId> = ids.iter().copied().collect();
        let mut out = Vec::new();
        for h in &self.hyps {
            if set.contains(&h.id) {
                continue;
            }
            if h.ty.fvars().iter().any(|x| set.contains(x)) {
                set.insert(h.id);
                out.push(h.id);
            }
        }
        out
    }

    /// Every hypothesis the given expression refers to, transitively through
    /// hypothesis types.
    pub fn closure_of(&self, e: &Expr) -> HashSet<FVarId> {
        let mut out = HashSet::new();
        let mut todo: Vec<FVarId> = e.fvars().into_iter().collect();
        while let Some(x) = todo.pop() {
            if out.insert(x) {
                if let Some(h) = self.hyp(x) {
                    todo.extend(h.ty.fvars());
                }
            }
        }
        out
    }

    /// Checks that every hypothesis and the target only refer to earlier
    /// hypotheses and are well-typed.
    pub fn check(&self, env: &Environment) -> TResult<()> {
        let mut tc = TypeChecker::new(env);
        let mut seen = HashSet::new();
        for h in &self.hyps {
            if let Some(x) = h.ty.fvars().into_iter().find(|x| !seen.contains(x)) {
                return Err(TacticError::DependencyError(format!("{} refers to a later hypothesis {x}", h.name)));
            }
            tc.ensure_sort(&h.ty)?;
            tc.add_local(h.id, h.ty.clone());
            seen.insert(h.id);
        }
        if let Some(x) = self.target.fvars().into_iter().find(|x| !seen.contains(x)) {
            return Err(TacticError::DependencyError(format!("target refers to unknown hypothesis {x}")));
        }
        tc.ensure_sort(&self.target)?;
        Ok(())
    }
}

/// Renders a goal: one line per group of consecutive hypotheses with the
/// same type, then the target after a turnstile.
pub fn pp_goal(env: &Environment, g: &Goal) -> String {
    let names = g.display_names();
    let p = Printer::with_names(env, Mode::Display, names.clone());
    let mut lines: Vec<(Vec<String>, String)> = Vec::new();
    for h in &g.hyps {
        let ty = p.expr(&h.ty);
        let n = names[&h.id].clone();
        match lines.last_mut() {
            Some((ns, t)) if *t == ty => ns.push(n),
            _ => lines.push((vec![n], ty)),
        }
    }
    let mut out = String::new();
    for (ns, ty) in lines {
        out.push_str(&format!("{} : {}\n", ns.join(" "), ty));
    }
    out.push_str(&format!("⊢ {}", p.expr(&g.target)));
    out
}

pub fn pp_expr(env: &Environment, g: &Goal, e: &Expr) -> String {
    Printer::with_names(env, Mode::Display, g.display_names()).expr(e)
}

#[derive(Clone)]
pub struct TacticState {
    pub env: Arc<Environment>,
    pub goals: Vec<Goal>,
    solutions: HashMap<MetaId, Solution>,
    root: MetaId,
    binders: Vec<LocalDecl>,
    statement: Expr,
    next_fvar: u64,
    next_goal: u64,
}

impl fmt::Debug for TacticState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TacticState").field("goals", &self.goals).field("solutions", &self.solutions).finish()
    }
}

impl TacticState {
    /// Starts a proof of `Π binders, target`, with the binders already
    /// introduced as hypotheses.
    pub fn new(env: Arc<Environment>, binders: &[LocalDecl], target: &Expr) -> Self {
        let statement = mk_pi(binders, target.clone());
        let mut st = TacticState {
            env,
            goals: Vec::new(),
            solutions: HashMap::new(),
            root: MetaId(0),
            binders: Vec::new(),
            statement,
            next_fvar: 0,
            next_goal: 0,
        };
        let mut map = HashMap::new();
        let mut hyps = Vec::new();
        for b in binders {
            let id = st.fresh_fvar();
            let ty = b.ty.replace_fvars(&map);
            map.insert(b.id, Expr::FVar(id));
            hyps.push(Hyp { id, name: b.name.clone(), ty, temp: false });
        }
        st.binders = hyps.iter().map(Hyp::decl).collect();
        let root = st.fresh_goal();
        st.root = root;
        st.goals.push(Goal { id: root, hyps, target: target.replace_fvars(&map), case_tag: None });
        st
    }

    pub fn fresh_fvar(&mut self) -> FVarId {
        self.next_fvar += 1;
        FVarId(self.next_fvar)
    }

    /// Goal and metavariable ids share one counter, separate from
    /// hypotheses, so closing goals never shifts later hypothesis ids.
    pub fn fresh_goal(&mut self) -> MetaId {
        self.next_goal += 1;
        MetaId(self.next_goal)
    }

    pub fn statement(&self) -> &Expr {
        &self.statement
    }

    pub fn is_done(&self) -> bool {
        self.goals.is_empty()
    }

    pub fn main_goal(&self) -> TResult<&Goal> {
        self.goals.first().ok_or(TacticError::NoGoals)
    }

    pub fn goal(&self, id: MetaId) -> TResult<&Goal> {
        self.goals.iter().find(|g| g.id == id).ok_or(TacticError::UnknownGoal(id))
    }

    /// Replaces goal `id` by `new`, keeping its place in the goal list.
    pub fn refine(&mut self, id: MetaId, new: Vec<Goal>, build: Build) -> TResult<()> {
        let pos = self.goals.iter().position(|g| g.id == id).ok_or(TacticError::UnknownGoal(id))?;
        let children = new.iter().map(|g| g.id).collect();
        self.goals.splice(pos..=pos, new);
        self.solutions.insert(id, Solution::Split { children, build });
        Ok(())
    }

    /// Closes goal `id` with a term, without checking it.
    pub fn assign(&mut self, id: MetaId, proof: Expr) -> TResult<()> {
        let pos = self.goals.iter().position(|g| g.id == id).ok_or(TacticError::UnknownGoal(id))?;
        self.goals.remove(pos);
        self.solutions.insert(id, Solution::Term(proof));
        Ok(())
    }

    /// Builds a successor goal that shares the case tag of `g`.
    pub fn derive(&mut self, g: &Goal, hyps: Vec<Hyp>, target: Expr) -> Goal {
        Goal { id: self.fresh_goal(), hyps, target, case_tag: g.case_tag.clone() }
    }

    /// The proof of goal `id` if it and all its descendants are closed.
    pub fn proof_of(&self, id: MetaId) -> Option<Expr> {
        match self.solutions.get(&id)? {
            Solution::Term(e) => Some(e.clone()),
            Solution::Split { children, build } => {
                let ps = children.iter().map(|c| self.proof_of(*c)).collect::<Option<Vec<_>>>()?;
                Some(build(&ps))
            }
        }
    }

    /// The closed proof term of the whole statement, once no goals remain.
    pub fn proof(&self) -> Option<Expr> {
        Some(mk_lambda(&self.binders, self.proof_of(self.root)?))
    }

    /// Type-checks the assembled proof against the statement.
    pub fn check_proof(&self) -> TResult<Expr> {
        let p = self.proof().ok_or_else(|| TacticError::DependencyError("proof is incomplete".into()))?;
        let mut tc = TypeChecker::new(&self.env);
        tc.check(&p, &self.statement)?;
        Ok(p)
    }

    pub fn intro(&mut self, gid: MetaId, nm: Option<&str>) -> TResult<(MetaId, FVarId)> {
        let id = self.fresh_fvar();
        self.intro_as(gid, id, nm.map(name), false)
    }

    /// Introduces the leading Pi binder as hypothesis `id`.
    pub fn intro_as(&mut self, gid: MetaId, id: FVarId, nm: Option<Name>, temp: bool) -> TResult<(MetaId, FVarId)> {
        let g = self.goal(gid)?.clone();
        let t = match &g.target {
            Expr::Pi(..) => g.target.clone(),
            other => whnf(&self.env, other, Transparency::All),
        };
        let Expr::Pi(bn, dom, body) = &t else {
            return Err(TacticError::NotAPi(pp_expr(&self.env, &g, &g.target)));
        };
        let n = nm.unwrap_or_else(|| bn.clone());
        let dom = dom.beta_normalize();
        let mut hyps = g.hyps.clone();
        hyps.push(Hyp { id, name: n.clone(), ty: dom.clone(), temp });
        let target = body.instantiate1(&Expr::FVar(id));
        let new = self.derive(&g, hyps, target);
        let nid = new.id;
        self.refine(gid, vec![new], Arc::new(move |ps| mk_lambda(&[LocalDecl::new(id, n.clone(), dom.clone())], ps[0].clone())))?;
        Ok((nid, id))
    }

    /// Moves the given hypotheses and everything depending on them into the
    /// target. Returns the new goal and the reverted hypotheses in order.
    pub fn revert(&mut self, gid: MetaId, ids: &[FVarId]) -> TResult<(MetaId, Vec<Hyp>)> {
        let g = self.goal(gid)?.clone();
        for id in ids {
            if g.hyp(*id).is_none() {
                return Err(TacticError::UnknownHypothesis(id.to_string()));
            }
        }
        let mut set: HashSet<FVarId> = ids.iter().copied().collect();
        set.extend(g.dependents(ids));
        let (moved, kept): (Vec<Hyp>, Vec<Hyp>) = g.hyps.iter().cloned().partition(|h| set.contains(&h.id));
        let decls: Vec<LocalDecl> = moved.iter().map(Hyp::decl).collect();
        let target = mk_pi(&decls, g.target.clone());
        let new = self.derive(&g, kept, target);
        let nid = new.id;
        let args: Vec<Expr> = moved.iter().map(|h| Expr::FVar(h.id)).collect();
        self.refine(gid, vec![new], Arc::new(move |ps| Expr::mk_app(ps[0].clone(), args.clone())))?;
        Ok((nid, moved))
    }

    /// Inserts `name : ty := value` right after `anchor` (or first, when
    /// `anchor` is `None`).
    pub fn assert_after(
        &mut self,
        gid: MetaId,
        anchor: Option<FVarId>,
        nm: &str,
        ty: Expr,
        value: Expr,
    ) -> TResult<(MetaId, FVarId)> {
        let g = self.goal(gid)?.clone();
        let at = match anchor {
            Some(a) => g.position(a).ok_or_else(|| TacticError::UnknownHypothesis(a.to_string()))? + 1,
            None => 0,
        };
        let visible: HashSet<FVarId> = g.hyps[..at].iter().map(|h| h.id).collect();
        if ty.fvars().iter().any(|x| !visible.contains(x)) {
            return Err(TacticError::DependencyError(format!("type of {nm} refers to a later hypothesis")));
        }
        let mut tc = g.checker(&self.env);
        tc.ensure_sort(&ty)?;
        tc.check(&value, &ty)?;
        let id = self.fresh_fvar();
        let mut hyps = g.hyps.clone();
        let n = name(nm);
        hyps.insert(at, Hyp { id, name: n.clone(), ty: ty.clone(), temp: false });
        let new = self.derive(&g, hyps, g.target.clone());
        let nid = new.id;
        self.refine(
            gid,
            vec![new],
            Arc::new(move |ps| {
                let f = mk_lambda(&[LocalDecl::new(id, n.clone(), ty.clone())], ps[0].clone());
                Expr::app(f, value.clone())
            }),
        )?;
        Ok((nid, id))
    }

    pub fn exact(&mut self, gid: MetaId, e: &Expr) -> TResult<()> {
        let g = self.goal(gid)?.clone();
        if e.has_metas() {
            return Err(TacticError::TypeError("term contains metavariables".into()));
        }
        let mut tc = g.checker(&self.env);
        let ty = tc.infer(e)?;
        if !tc.is_def_eq(&ty, &g.target) {
            return Err(TacticError::TypeError(format!(
                "{} has type {} but the goal is {}",
                pp_expr(&self.env, &g, e),
                pp_expr(&self.env, &g, &ty),
                pp_expr(&self.env, &g, &g.target)
            )));
        }
        self.assign(gid, e.clone())
    }

    /// Applies `e`, trying successively longer argument lists until the
    /// conclusion unifies with the target. Unsolved arguments become goals.
    pub fn apply(&mut self, gid: MetaId, e: &Expr) -> TResult<Vec<MetaId>> {
        let g = self.goal(gid)?.clone();
        let env = self.env.clone();
        let mut tc = g.checker(&env);
        let ty = tc.infer(e)?;
        let mut metas: Vec<(MetaId, Expr, Name)> = Vec::new();
        let mut cur = ty;
        loop {
            let ids: HashSet<MetaId> = metas.iter().map(|m| m.0).collect();
            if let Descent::Done(sigma) = descend(&self.env, &g.target, &cur, &ids, Transparency::Reducible) {
                let inst = cur.instantiate_metas(&sigma);
                if !inst.has_metas() && tc.is_def_eq(&inst, &g.target) {
                    return self.finish_apply(&g, e, metas, sigma);
                }
            }
            let w = match &cur {
                Expr::Pi(..) => cur.clone(),
                _ => whnf(&self.env, &cur, Transparency::All),
            };
            let Expr::Pi(n, dom, body) = w else {
                return Err(TacticError::UnificationFailure(pp_expr(&self.env, &g, e)));
            };
            let m = self.fresh_goal();
            metas.push((m, (*dom).clone(), n.clone()));
            cur = body.instantiate1(&Expr::Meta(m));
        }
    }

    fn finish_apply(
        &mut self,
        g: &Goal,
        e: &Expr,
        metas: Vec<(MetaId, Expr, Name)>,
        sigma: HashMap<MetaId, Expr>,
    ) -> TResult<Vec<MetaId>> {
        let mut new = Vec::new();
        let mut slots = Vec::new();
        for (m, dom, _) in &metas {
            if let Some(v) = sigma.get(m) {
                slots.push(Ok(v.clone()));
                continue;
            }
            let target = dom.instantiate_metas(&sigma);
            if target.has_metas() {
                return Err(TacticError::UnificationFailure(
                    "an unsolved argument's type depends on another unsolved argument".into(),
                ));
            }
            let goal = Goal { id: *m, hyps: g.hyps.clone(), target, case_tag: g.case_tag.clone() };
            slots.push(Err(new.len()));
            new.push(goal);
        }
        // Solved arguments may mention unsolved ones through their types only
        // if the unsolved ones were themselves metas; reject that case.
        if slots.iter().any(|s| matches!(s, Ok(v) if v.has_metas())) {
            return Err(TacticError::UnificationFailure("argument left undetermined".into()));
        }
        let ids = new.iter().map(|g| g.id).collect();
        let head = e.clone();
        self.refine(
            g.id,
            new,
            Arc::new(move |ps| {
                let args = slots.iter().map(|s| match s {
                    Ok(v) => v.clone(),
                    Err(i) => ps[*i].clone(),
                });
                Expr::mk_app(head.clone(), args)
            }),
        )?;
        Ok(ids)
    }

    pub fn clear(&mut self, gid: MetaId, id: FVarId) -> TResult<MetaId> {
        let g = self.goal(gid)?.clone();
        let h = g.hyp(id).ok_or_else(|| TacticError::UnknownHypothesis(id.to_string()))?;
        if let Some(d) = g.hyps.iter().find(|k| k.ty.has_fvar(id)) {
            return Err(TacticError::DependencyError(format!("cannot clear {}: {} depends on it", h.name, d.name)));
        }
        if g.target.has_fvar(id) {
            return Err(TacticError::DependencyError(format!("cannot clear {}: the target depends on it", h.name)));
        }
        let hyps = g.hyps.iter().filter(|k| k.id != id).cloned().collect();
        let new = self.derive(&g, hyps, g.target.clone());
        let nid = new.id;
        self.refine(gid, vec![new], Arc::new(|ps| ps[0].clone()))?;
        Ok(nid)
    }

    /// Changes only the display name; proofs are unaffected, so the goal
    /// keeps its identity.
    pub fn rename(&mut self, gid: MetaId, id: FVarId, nm: Name, temp: bool) -> TResult<()> {
        let pos = self.goals.iter().position(|g| g.id == gid).ok_or(TacticError::UnknownGoal(gid))?;
        let g = &mut self.goals[pos];
        let h = g.hyps.iter_mut().find(|h| h.id == id).ok_or_else(|| TacticError::UnknownHypothesis(id.to_string()))?;
        h.name = nm;
        h.temp = temp;
        Ok(())
    }

    /// Replaces hypothesis `id` by one of type `ty` with the same identity,
    /// given `value : ty` built from the old hypothesis.
    pub fn transform_hyp(&mut self, gid: MetaId, id: FVarId, ty: Expr, value: Expr) -> TResult<MetaId> {
        let g = self.goal(gid)?.clone();
        let pos = g.position(id).ok_or_else(|| TacticError::UnknownHypothesis(id.to_string()))?;
        if g.target.has_fvar(id) || g.hyps.iter().any(|k| k.ty.has_fvar(id)) {
            return Err(TacticError::DependencyError(format!("something depends on {}", g.hyps[pos].name)));
        }
        let mut tc = g.checker(&self.env);
        tc.check(&value, &ty)?;
        let mut hyps = g.hyps.clone();
        hyps[pos].ty = ty.clone();
        let nm = hyps[pos].name.clone();
        let new = self.derive(&g, hyps, g.target.clone());
        let nid = new.id;
        self.refine(
            gid,
            vec![new],
            Arc::new(move |ps| Expr::app(mk_lambda(&[LocalDecl::new(id, nm.clone(), ty.clone())], ps[0].clone()), value.clone())),
        )?;
        Ok(nid)
    }

    /// Reorders the context; `order` must be a permutation of the
    /// hypothesis ids that keeps every type well-scoped.
    pub fn reorder(&mut self, gid: MetaId, order: &[FVarId]) -> TResult<()> {
        let pos = self.goals.iter().position(|g| g.id == gid).ok_or(TacticError::UnknownGoal(gid))?;
        let g = &self.goals[pos];
        let mut hyps = Vec::new();
        let mut seen = HashSet::new();
        for id in order {
            let h = g.hyp(*id).ok_or_else(|| TacticError::UnknownHypothesis(id.to_string()))?;
            if h.ty.fvars().iter().any(|x| !seen.contains(x)) {
                return Err(TacticError::DependencyError(format!("{} would precede its dependencies", h.name)));
            }
            seen.insert(*id);
            hyps.push(h.clone());
        }
        if hyps.len() != g.hyps.len() {
            return Err(TacticError::DependencyError("reorder must keep every hypothesis".into()));
        }
        self.goals[pos].hyps = hyps;
        Ok(())
    }

    /// Replaces a hypothesis type by a definitionally equal one.
    pub fn change_hyp(&mut self, gid: MetaId, id: FVarId, ty: Expr) -> TResult<()> {
        let pos = self.goals.iter().position(|g| g.id == gid).ok_or(TacticError::UnknownGoal(gid))?;
        let env = self.env.clone();
        let g = &mut self.goals[pos];
        let h = g.hyps.iter_mut().find(|h| h.id == id).ok_or_else(|| TacticError::UnknownHypothesis(id.to_string()))?;
        if !crate::kernel::is_def_eq(&env, &h.ty, &ty, Transparency::All) {
            return Err(TacticError::TypeError("change: types are not definitionally equal".into()));
        }
        h.ty = ty;
        Ok(())
    }

    /// Uses `eq : x = t` or `eq : t = x` to replace the variable `x` by `t`
    /// everywhere, removing both `x` and `eq`.
    pub fn subst(&mut self, gid: MetaId, eq: FVarId) -> TResult<MetaId> {
        let g = self.goal(gid)?.clone();
        let h = g.hyp(eq).ok_or_else(|| TacticError::UnknownHypothesis(eq.to_string()))?.clone();
        let (head, args) = h.ty.app_parts();
        if head.as_const().map(|c| &**c) != Some("eq") || args.len() != 3 {
            return Err(TacticError::TypeError(format!("{} is not an equation", h.name)));
        }
        let (ty, l, r) = (args[0].clone(), args[1].clone(), args[2].clone());
        let local = |e: &Expr| e.as_fvar().filter(|x| g.hyp(*x).is_some());
        // `x_on_left` records which side the eliminated variable sits on.
        let (x, t, x_on_left) = match (local(&l), local(&r)) {
            (Some(a), Some(b)) if a != b => {
                if g.position(a) > g.position(b) {
                    (a, r.clone(), true)
                } else {
                    (b, l.clone(), false)
                }
            }
            (_, Some(b)) if !l.has_fvar(b) => (b, l.clone(), false),
            (Some(a), _) if !r.has_fvar(a) => (a, r.clone(), true),
            (Some(a), _) | (_, Some(a)) => {
                let n = g.hyp(a).map(|k| k.name.to_string()).unwrap_or_default();
                return Err(TacticError::OccursCheck(format!("{n} occurs in the other side of {}", h.name)));
            }
            _ => return Err(TacticError::TypeError(format!("{} does not equate a variable", h.name))),
        };
        let delta: Vec<FVarId> = g.dependents(&[x]).into_iter().filter(|d| *d != eq).collect();
        if g.dependents(&[eq]).iter().any(|d| *d != x) || g.target.has_fvar(eq) {
            return Err(TacticError::DependencyError(format!("something depends on {}", h.name)));
        }
        if t.fvars().iter().any(|y| delta.contains(y)) {
            return Err(TacticError::DependencyError("the replacement depends on the variable".into()));
        }
        let xe = Expr::FVar(x);
        let delta_hyps: Vec<Hyp> = g.hyps.iter().filter(|k| delta.contains(&k.id)).cloned().collect();
        let delta_decls: Vec<LocalDecl> = delta_hyps.iter().map(Hyp::decl).collect();
        let p_x = mk_pi(&delta_decls, g.target.clone());

        let mut hyps = Vec::new();
        for k in &g.hyps {
            if k.id == x || k.id == eq {
                continue;
            }
            let mut k = k.clone();
            if delta.contains(&k.id) {
                k.ty = k.ty.replace_fvar(x, &t).beta_normalize();
            }
            hyps.push(k);
        }
        let hyps = dependency_order(hyps);
        let target = g.target.replace_fvar(x, &t).beta_normalize();
        let new = self.derive(&g, hyps.clone(), target);
        let nid = new.id;

        let new_delta: Vec<LocalDecl> =
            hyps.iter().filter(|k| delta.contains(&k.id)).map(Hyp::decl).collect::<Vec<_>>();
        // Keep the original order of the reverted block for the lambda.
        let new_delta: Vec<LocalDecl> =
            delta.iter().filter_map(|d| new_delta.iter().find(|k| k.id == *d).cloned()).collect();
        let b = crate::kernel::expr::scratch_fvar();
        let w = crate::kernel::expr::scratch_fvar();
        let p_b = p_x.replace_fvar(x, &Expr::FVar(b));
        let delta_args: Vec<Expr> = delta.iter().map(|d| Expr::FVar(*d)).collect();
        self.refine(
            gid,
            vec![new],
            Arc::new(move |ps| {
                let p_t = mk_lambda(&new_delta, ps[0].clone());
                let (from, to) = if x_on_left { (xe.clone(), t.clone()) } else { (t.clone(), xe.clone()) };
                let eq_ty = Expr::mk_app(Expr::cnst("eq"), [ty.clone(), from.clone(), Expr::FVar(b)]);
                let bd = LocalDecl::new(b, "b", ty.clone());
                let wd = LocalDecl::new(w, "_", eq_ty);
                let transported = if x_on_left {
                    let motive = mk_lambda(&[bd, wd], Expr::arrow(p_b.clone(), p_x.clone()));
                    let id_fn = Expr::lam("p", p_x.clone(), Expr::BVar(0));
                    let r = Expr::mk_app(
                        Expr::cnst("eq.rec"),
                        [ty.clone(), from, motive, id_fn, to, Expr::FVar(eq)],
                    );
                    Expr::app(r, p_t)
                } else {
                    let motive = mk_lambda(&[bd, wd], p_b.clone());
                    Expr::mk_app(Expr::cnst("eq.rec"), [ty.clone(), from, motive, p_t, to, Expr::FVar(eq)])
                };
                Expr::mk_app(transported, delta_args.clone())
            }),
        )?;
        Ok(nid)
    }
}

/// Reorders hypotheses so each comes after everything its type mentions,
/// otherwise keeping the given order. A hypothesis whose dependencies are
/// not yet placed is deferred until they are.
pub fn dependency_order(hyps: Vec<Hyp>) -> Vec<Hyp> {
    let ids: HashSet<FVarId> = hyps.iter().map(|h| h.id).collect();
    let mut placed: HashSet<FVarId> = HashSet::new();
    let mut out: Vec<Hyp> = Vec::new();
    let mut pending: Vec<Hyp> = Vec::new();
    for h in hyps {
        pending.push(h);
        loop {
            let ready = pending
                .iter()
                .position(|p| p.ty.fvars().iter().all(|x| !ids.contains(x) || placed.contains(x)));
            match ready {
                Some(i) => {
                    let p = pending.remove(i);
                    placed.insert(p.id);
                    out.push(p);
                }
                None => break,
            }
        }
    }
    out.extend(pending);
    out
}
