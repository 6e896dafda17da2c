//! Unification of index equations in the context of a goal.
//!
//! The equations form a queue processed from the front. Each step tries the
//! rules in a fixed order: deletion, substitution, injection, conflict,
//! cycle, homogenisation. Every rule produces a proof, so no rewriting is
//! trusted.

use std::collections::HashSet;
use std::sync::Arc;

use crate::kernel::{
    expr::{mk_lambda, scratch_fvar},
    is_def_eq, name, whnf, AuxNames, Environment, Expr, FVarId, LocalDecl, MetaId, Transparency,
};
use crate::naming::subscript;
use crate::proofstate::{Goal, Hyp, TResult, TacticError, TacticState};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Substitution,
    Injection(usize),
    Conflict,
    Deletion,
    Cycle,
    Homogenisation,
    Stuck,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Closed,
    /// The goal after the step, and equations to push on the queue front.
    Open(MetaId, Vec<FVarId>),
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    /// The remaining goal, or `None` when the equations were contradictory.
    pub goal: Option<MetaId>,
    pub fired: Vec<Rule>,
    pub stuck: Vec<FVarId>,
}

/// The sides of an equation hypothesis.
#[derive(Clone, Debug)]
pub enum Equation {
    Eq { ty: Expr, lhs: Expr, rhs: Expr },
    HEq { lty: Expr, lhs: Expr, rty: Expr, rhs: Expr },
}

impl Equation {
    pub fn parse(ty: &Expr) -> Option<Equation> {
        let (head, args) = ty.app_parts();
        match (head.as_const().map(|c| &**c), args.as_slice()) {
            (Some("eq"), [t, l, r]) => Some(Equation::Eq { ty: t.clone(), lhs: l.clone(), rhs: r.clone() }),
            (Some("heq"), [a, l, b, r]) => {
                Some(Equation::HEq { lty: a.clone(), lhs: l.clone(), rty: b.clone(), rhs: r.clone() })
            }
            _ => None,
        }
    }

    pub fn sides(&self) -> (&Expr, &Expr) {
        match self {
            Equation::Eq { lhs, rhs, .. } | Equation::HEq { lhs, rhs, .. } => (lhs, rhs),
        }
    }
}

/// Exposes a constructor application, unfolding as far as needed.
fn as_ctor(env: &Environment, e: &Expr) -> Option<(String, Vec<Expr>)> {
    let w = whnf(env, e, Transparency::All);
    let (head, args) = w.app_parts();
    let c = head.as_const()?;
    let (info, ci) = env.constructor(c)?;
    (args.len() == info.num_params() + info.ctors[ci].arity()).then(|| (c.to_string(), args))
}

fn count_ctors(env: &Environment, e: &Expr) -> usize {
    let mut n = 0;
    e.for_each(&mut |s| {
        if let Expr::Const(c) = s {
            n += env.is_constructor(c) as usize;
        }
    });
    n
}

/// Lexicographic termination measure of a queue: distinct variables, then
/// constructor occurrences, then heterogeneous equations, then length.
pub fn measure(env: &Environment, g: &Goal, queue: &[FVarId]) -> (usize, usize, usize, usize) {
    let mut vars = HashSet::new();
    let (mut ctors, mut heqs) = (0, 0);
    for id in queue {
        let Some(eq) = g.hyp(*id).and_then(|h| Equation::parse(&h.ty)) else { continue };
        let (l, r) = eq.sides();
        vars.extend(l.fvars());
        vars.extend(r.fvars());
        ctors += count_ctors(env, l) + count_ctors(env, r);
        heqs += matches!(eq, Equation::HEq { .. }) as usize;
    }
    (vars.len(), ctors, heqs, queue.len())
}

/// Runs the rules on the queue until it is empty or the goal is closed.
pub fn qnify_all(st: &mut TacticState, gid: MetaId, queue: Vec<FVarId>) -> TResult<Report> {
    let mut report = Report { goal: Some(gid), ..Default::default() };
    let mut queue = queue;
    let mut gid = gid;
    while !queue.is_empty() {
        let eq = queue.remove(0);
        let (step, rule) = qnify_step(st, gid, eq)?;
        report.fired.push(rule);
        match step {
            Step::Closed => {
                report.goal = None;
                return Ok(report);
            }
            Step::Open(g, front) => {
                gid = g;
                if rule == Rule::Stuck {
                    report.stuck.push(eq);
                }
                let live: HashSet<FVarId> = st.goal(gid)?.hyps.iter().map(|h| h.id).collect();
                queue.retain(|q| live.contains(q));
                queue.splice(0..0, front);
            }
        }
    }
    report.goal = Some(gid);
    Ok(report)
}

/// Applies the first rule that fires to equation `eq`.
pub fn qnify_step(st: &mut TacticState, gid: MetaId, eq: FVarId) -> TResult<(Step, Rule)> {
    let g = st.goal(gid)?.clone();
    let h = g.hyp(eq).ok_or_else(|| TacticError::UnknownHypothesis(eq.to_string()))?.clone();
    let equation = Equation::parse(&h.ty).ok_or_else(|| TacticError::TypeError(format!("{} is not an equation", h.name)))?;
    let env = st.env.clone();

    if let Some(r) = deletion(st, &g, &h, &equation)? {
        return Ok(r);
    }
    if let Equation::Eq { ty, lhs, rhs } = &equation {
        if let Some(r) = substitution(st, &g, &h, lhs, rhs)? {
            return Ok(r);
        }
        let lc = as_ctor(&env, lhs);
        let rc = as_ctor(&env, rhs);
        if let (Some((c1, a1)), Some((c2, a2))) = (&lc, &rc) {
            if c1 == c2 {
                if let Some(r) = injection(st, &g, &h, ty, a1, a2)? {
                    return Ok(r);
                }
            } else if let Some(r) = conflict(st, &g, &h, ty, lhs, rhs)? {
                return Ok(r);
            }
        }
        if let Some(r) = cycle(st, &g, &h, ty, lhs, rhs)? {
            return Ok(r);
        }
    }
    if let Equation::HEq { lty, lhs, rty, rhs } = &equation {
        if is_def_eq(&env, lty, rty, Transparency::All) {
            return homogenise(st, &g, &h, lty, lhs, rhs);
        }
    }
    Ok((Step::Open(gid, vec![]), Rule::Stuck))
}

fn no_dependents(g: &Goal, h: &Hyp) -> bool {
    !g.target.has_fvar(h.id) && g.hyps.iter().all(|k| !k.ty.has_fvar(h.id))
}

fn deletion(st: &mut TacticState, g: &Goal, h: &Hyp, eq: &Equation) -> TResult<Option<(Step, Rule)>> {
    let env = st.env.clone();
    let same = match eq {
        Equation::Eq { lhs, rhs, .. } => is_def_eq(&env, lhs, rhs, Transparency::All),
        Equation::HEq { lty, lhs, rty, rhs } => {
            is_def_eq(&env, lty, rty, Transparency::All) && is_def_eq(&env, lhs, rhs, Transparency::All)
        }
    };
    if !same || !no_dependents(g, h) {
        return Ok(None);
    }
    let nid = st.clear(g.id, h.id)?;
    Ok(Some((Step::Open(nid, vec![]), Rule::Deletion)))
}

fn substitution(st: &mut TacticState, g: &Goal, h: &Hyp, lhs: &Expr, rhs: &Expr) -> TResult<Option<(Step, Rule)>> {
    let local = |e: &Expr, other: &Expr| e.as_fvar().is_some_and(|x| g.hyp(x).is_some() && !other.has_fvar(x));
    if !local(lhs, rhs) && !local(rhs, lhs) {
        return Ok(None);
    }
    match st.subst(g.id, h.id) {
        Ok(nid) => Ok(Some((Step::Open(nid, vec![]), Rule::Substitution))),
        Err(TacticError::DependencyError(_)) | Err(TacticError::OccursCheck(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `I params indices` for the type of an equation's sides.
fn family(env: &Environment, ty: &Expr) -> Option<(String, Vec<Expr>, Vec<Expr>)> {
    let w = whnf(env, ty, Transparency::All);
    let (head, args) = w.app_parts();
    let info = env.inductive(head.as_const()?)?;
    let np = info.num_params();
    (args.len() == np + info.num_indices())
        .then(|| (info.name.to_string(), args[..np].to_vec(), args[np..].to_vec()))
}

fn no_confusion_app(ind: &str, params: &[Expr], p: &Expr, indices: &[Expr], l: &Expr, r: &Expr, h: FVarId) -> Expr {
    Expr::mk_app(
        Expr::Const(AuxNames::no_confusion(ind)),
        params
            .iter()
            .cloned()
            .chain(std::iter::once(p.clone()))
            .chain(indices.iter().cloned())
            .chain([l.clone(), r.clone(), Expr::FVar(h)]),
    )
}

fn injection(
    st: &mut TacticState,
    g: &Goal,
    h: &Hyp,
    ty: &Expr,
    a1: &[Expr],
    a2: &[Expr],
) -> TResult<Option<(Step, Rule)>> {
    let env = st.env.clone();
    let Some((ind, params, indices)) = family(&env, ty) else { return Ok(None) };
    if !no_dependents(g, h) || !env.contains(&AuxNames::no_confusion(&ind)) {
        return Ok(None);
    }
    let np = params.len();
    let (l, r) = match Equation::parse(&h.ty) {
        Some(Equation::Eq { lhs, rhs, .. }) => (lhs, rhs),
        _ => unreachable!(),
    };
    // `no_confusion_type … (C a) (C b)` unfolds to `(Π eqs, T) → T`.
    let nct = Expr::mk_app(
        Expr::Const(AuxNames::no_confusion_type(&ind)),
        params
            .iter()
            .cloned()
            .chain(std::iter::once(g.target.clone()))
            .chain(indices.iter().cloned())
            .chain([l.clone(), r.clone()]),
    );
    let Expr::Pi(_, eqs_pi, _) = whnf(&env, &nct, Transparency::All) else { return Ok(None) };
    debug_assert_eq!(a1.len(), a2.len());
    let arity = a1.len() - np;
    let mut children = Vec::new();
    let mut cur = (*eqs_pi).clone();
    for k in 0..arity {
        let Expr::Pi(_, dom, body) = cur else { return Ok(None) };
        let id = st.fresh_fvar();
        let nm = name(&format!("{}{}", h.name, subscript(k + 1)));
        children.push(Hyp { id, name: nm, ty: dom.beta_normalize(), temp: h.temp });
        cur = body.instantiate1(&Expr::FVar(id));
    }
    let pos = g.position(h.id).expect("live hypothesis");
    let mut hyps = g.hyps.clone();
    hyps.splice(pos..=pos, children.clone());
    let new = st.derive(g, hyps, g.target.clone());
    let nid = new.id;
    let decls: Vec<LocalDecl> = children.iter().map(Hyp::decl).collect();
    let ids = children.iter().map(|c| c.id).collect();
    let head = no_confusion_app(&ind, &params, &g.target, &indices, &l, &r, h.id);
    st.refine(g.id, vec![new], Arc::new(move |ps| Expr::app(head.clone(), mk_lambda(&decls, ps[0].clone()))))?;
    Ok(Some((Step::Open(nid, ids), Rule::Injection(arity))))
}

fn conflict(st: &mut TacticState, g: &Goal, h: &Hyp, ty: &Expr, l: &Expr, r: &Expr) -> TResult<Option<(Step, Rule)>> {
    let env = st.env.clone();
    let Some((ind, params, indices)) = family(&env, ty) else { return Ok(None) };
    if !env.contains(&AuxNames::no_confusion(&ind)) {
        return Ok(None);
    }
    let proof = no_confusion_app(&ind, &params, &g.target, &indices, l, r, h.id);
    st.exact(g.id, &proof)?;
    Ok(Some((Step::Closed, Rule::Conflict)))
}

/// Path from `t` down to the variable `x` through recursive constructor
/// arguments: each entry is a constructor application and the argument
/// position taken.
fn recursive_spine(env: &Environment, x: FVarId, t: &Expr) -> Option<Vec<(String, Vec<Expr>, usize)>> {
    let (c, args) = as_ctor(env, t)?;
    let (info, ci) = env.constructor(&c)?;
    let np = info.num_params();
    for pos in info.ctors[ci].recursive_positions() {
        let child = &args[np + pos];
        let hit = child.as_fvar() == Some(x) || whnf(env, child, Transparency::All).as_fvar() == Some(x);
        if hit {
            return Some(vec![(c.clone(), args.clone(), pos)]);
        }
        if let Some(mut rest) = recursive_spine(env, x, child) {
            rest.insert(0, (c.clone(), args.clone(), pos));
            return Some(rest);
        }
    }
    None
}

/// A proof of `false` from `h : x = t` where `x` sits strictly inside `t`
/// along recursive arguments.
pub fn cycle_proof(st: &TacticState, g: &Goal, h: FVarId, ty: &Expr, x: FVarId, t: &Expr, x_on_left: bool) -> Option<Expr> {
    let env = &st.env;
    let spine = recursive_spine(env, x, t)?;
    let (ind, params, indices) = family(env, ty)?;
    for n in ["lt_trans", "lt_irrefl", "eq.symm", "eq.rec", "false"] {
        if !env.contains(n) {
            return None;
        }
    }
    let mut tc = g.checker(env);
    // Links of the chain: sizeof (child) < sizeof (node), innermost last.
    let mut links = Vec::new();
    for (c, args, pos) in &spine {
        let lemma = Expr::mk_app(Expr::Const(AuxNames::sizeof_lt(c, *pos)), args.iter().cloned());
        let lty = tc.infer(&lemma).ok()?;
        let (_, lt_args) = lty.app_parts();
        links.push((lemma, lt_args[0].clone(), lt_args[1].clone()));
    }
    let (mut acc, small, mut acc_hi) = links.pop()?;
    while let Some((link, lo, hi)) = links.pop() {
        debug_assert!(crate::kernel::is_def_eq(env, &lo, &acc_hi, Transparency::All));
        acc = Expr::mk_app(Expr::cnst("lt_trans"), [small.clone(), lo, hi.clone(), acc, link]);
        acc_hi = hi;
    }
    let sizeof_of = |v: Expr| {
        Expr::mk_app(
            Expr::Const(AuxNames::sizeof(&ind)),
            params.iter().cloned().chain(indices.iter().cloned()).chain(std::iter::once(v)),
        )
    };
    let xe = Expr::FVar(x);
    // h' : t = x
    let h_rev = if x_on_left {
        Expr::mk_app(Expr::cnst("eq.symm"), [ty.clone(), xe.clone(), t.clone(), Expr::FVar(h)])
    } else {
        Expr::FVar(h)
    };
    let b = LocalDecl::new(scratch_fvar(), "b", ty.clone());
    let w = LocalDecl::new(
        scratch_fvar(),
        "_",
        Expr::mk_app(Expr::cnst("eq"), [ty.clone(), t.clone(), Expr::FVar(b.id)]),
    );
    let motive = mk_lambda(&[b.clone(), w], Expr::mk_app(Expr::cnst("lt"), [small.clone(), sizeof_of(Expr::FVar(b.id))]));
    let self_lt = Expr::mk_app(Expr::cnst("eq.rec"), [ty.clone(), t.clone(), motive, acc, xe, h_rev]);
    Some(Expr::mk_app(Expr::cnst("lt_irrefl"), [small, self_lt]))
}

fn cycle(st: &mut TacticState, g: &Goal, h: &Hyp, ty: &Expr, l: &Expr, r: &Expr) -> TResult<Option<(Step, Rule)>> {
    let attempt = |x: &Expr, t: &Expr, left: bool| {
        let x = x.as_fvar()?;
        t.has_fvar(x).then_some(())?;
        cycle_proof(st, g, h.id, ty, x, t, left)
    };
    let Some(pf) = attempt(l, r, true).or_else(|| attempt(r, l, false)) else { return Ok(None) };
    let motive = Expr::lam("_", Expr::cnst("false"), g.target.clone());
    let proof = Expr::mk_app(Expr::cnst("false.rec"), [motive, pf]);
    st.exact(g.id, &proof)?;
    Ok(Some((Step::Closed, Rule::Cycle)))
}

/// Replaces `h : a == b` (with defeq types) by `h : a = b`, keeping its
/// identity, and requeues it.
fn homogenise(st: &mut TacticState, g: &Goal, h: &Hyp, ty: &Expr, l: &Expr, r: &Expr) -> TResult<(Step, Rule)> {
    let new_ty = Expr::mk_app(Expr::cnst("eq"), [ty.clone(), l.clone(), r.clone()]);
    let conv = Expr::mk_app(Expr::cnst("eq_of_heq"), [ty.clone(), l.clone(), r.clone(), Expr::FVar(h.id)]);
    let nid = st.transform_hyp(g.id, h.id, new_ty, conv)?;
    Ok((Step::Open(nid, vec![h.id]), Rule::Homogenisation))
}
