//! The `induction'` and `cases'` tactics.
//!
//! Both run the same pipeline: complex indices are replaced by placeholders
//! and equations, hypotheses are generalised, the recursor is applied, and
//! each case goal is cleaned up by unifying its index equations,
//! simplifying its induction hypotheses and naming its new hypotheses.
//! `cases'` finally drops the induction hypotheses.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::kernel::{
    expr::{mk_lambda, mk_pi, scratch_fvar},
    is_def_eq, whnf, Environment, Expr, FVarId, InductiveInfo, LocalDecl, MetaId, Name, Transparency,
};
use crate::naming::{fresh_name, ih_name, is_prop, ArgNamer, NameRule};
use crate::proofstate::{dependency_order, pp_expr, Goal, Hyp, TResult, TacticError, TacticState};
use crate::qnify::{qnify_all, Equation, Rule};
use crate::unify::{unify, Assignment, UnifyOutcome};

/// Which hypotheses must stay fixed rather than be generalised.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Fixing {
    #[default]
    Nothing,
    All,
    Hyps(Vec<FVarId>),
}

#[derive(Clone, Debug)]
pub struct InductionConfig {
    pub major: FVarId,
    pub fixing: Fixing,
    /// Names per constructor (short or full name) for its arguments, then
    /// its induction hypotheses. `None` or `_` keeps the automatic name.
    pub names: Vec<(String, Vec<Option<String>>)>,
    /// `false` for `cases'`.
    pub keep_ihs: bool,
}

impl InductionConfig {
    pub fn induction(major: FVarId) -> Self {
        InductionConfig { major, fixing: Fixing::Nothing, names: Vec::new(), keep_ihs: true }
    }

    pub fn cases(major: FVarId) -> Self {
        InductionConfig { keep_ihs: false, ..Self::induction(major) }
    }
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub ctor: Name,
    /// `None` when unification closed the case.
    pub goal: Option<MetaId>,
    pub qnify: Vec<Rule>,
    /// Final name of each named hypothesis and the rule that chose it.
    pub names: Vec<(Name, NameRule)>,
}

#[derive(Clone, Debug, Default)]
pub struct InductionReport {
    /// Positions of the indices that were replaced by placeholders.
    pub complex_indices: Vec<usize>,
    /// Names of the generalised hypotheses.
    pub generalised: Vec<Name>,
    pub cases: Vec<CaseReport>,
}

impl InductionReport {
    pub fn open_goals(&self) -> Vec<MetaId> {
        self.cases.iter().filter_map(|c| c.goal).collect()
    }
}

/// Splits `ty` into an inductive family applied to parameters and indices.
fn family_app(env: &Environment, ty: &Expr) -> Option<(InductiveInfo, Vec<Expr>, Vec<Expr>)> {
    let (head, args) = ty.app_parts();
    let info = env.inductive(head.as_const()?)?;
    if args.len() != info.num_params() + info.num_indices() {
        return None;
    }
    let (ps, is) = args.split_at(info.num_params());
    Some((info.clone(), ps.to_vec(), is.to_vec()))
}

pub fn induction(st: &mut TacticState, gid: MetaId, cfg: &InductionConfig) -> TResult<InductionReport> {
    let env = st.env.clone();
    let g = st.goal(gid)?.clone();
    let major = g.hyp(cfg.major).ok_or_else(|| TacticError::UnknownHypothesis(cfg.major.to_string()))?.clone();
    let (info, params, indices) = match family_app(&env, &major.ty) {
        Some(x) => x,
        None => {
            let w = whnf(&env, &major.ty, Transparency::All);
            let x = family_app(&env, &w).ok_or_else(|| TacticError::NotInductive(pp_expr(&env, &g, &major.ty)))?;
            st.change_hyp(gid, major.id, w)?;
            x
        }
    };
    check_user_names(&info, cfg)?;
    let g = st.goal(gid)?.clone();
    let fixed = fixed_set(&g, major.id, &cfg.fixing)?;
    let index_hyps: Vec<Option<(Name, Expr)>> = indices
        .iter()
        .map(|k| k.as_fvar().and_then(|x| g.hyp(x)).map(|h| (h.name.clone(), h.ty.clone())))
        .collect();

    let mut report = InductionReport::default();
    let (gid, new_idx, complex) = generalise_indices(st, gid, &info, &params, &indices, major.id, &fixed)?;
    report.complex_indices = complex.clone();
    let (gid, d) = generalise_hyps(st, gid, major.id, &fixed)?;
    report.generalised = d.iter().map(|h| h.name.clone()).collect();

    let cases = apply_recursor(st, gid, &info, &params, &new_idx, major.id)?;
    for case in cases {
        let mut gid = case.goal;
        for h in &d {
            gid = st.intro_as(gid, h.id, Some(h.name.clone()), false)?.0;
        }
        let mut eqs = Vec::new();
        for _ in &complex {
            let id = st.fresh_fvar();
            gid = st.intro_as(gid, id, Some(Name::from("ieq")), true)?.0;
            eqs.push(id);
        }
        let q = qnify_all(st, gid, eqs)?;
        let ctor = info.ctors[case.ctor].name.clone();
        let Some(mut gid) = q.goal else {
            report.cases.push(CaseReport { ctor, goal: None, qnify: q.fired, names: Vec::new() });
            continue;
        };
        if cfg.keep_ihs {
            if !complex.is_empty() {
                for ih in &case.ihs {
                    gid = simplify_ih(st, gid, *ih, d.len(), complex.len())?;
                }
            }
        } else {
            for ih in case.ihs.iter().rev() {
                gid = st.clear(gid, *ih)?;
            }
        }
        let cg = st.goal(gid)?.clone();
        let namer = ArgNamer {
            env: &env,
            goal: &cg,
            major: major.name.clone(),
            index_hyps: index_hyps.clone(),
        };
        let user = user_names(cfg, &info.ctors[case.ctor].name, info.ctors[case.ctor].short_name());
        let names = name_case(st, gid, &info, &case, &namer, &user)?;
        tidy(st, gid, &case.context)?;
        report.cases.push(CaseReport { ctor, goal: Some(gid), qnify: q.fired, names });
    }
    Ok(report)
}

fn check_user_names(info: &InductiveInfo, cfg: &InductionConfig) -> TResult<()> {
    for (c, names) in &cfg.names {
        let ctor = info
            .ctors
            .iter()
            .find(|k| *k.name == **c || k.short_name() == c)
            .ok_or_else(|| TacticError::UnknownCase(c.clone()))?;
        let expected = ctor.arity() + if cfg.keep_ihs { ctor.recursive_positions().len() } else { 0 };
        if names.len() > expected {
            return Err(TacticError::UserNameCountMismatch {
                ctor: ctor.short_name().to_string(),
                expected,
                found: names.len(),
            });
        }
    }
    Ok(())
}

fn user_names(cfg: &InductionConfig, full: &str, short: &str) -> Vec<Option<String>> {
    cfg.names
        .iter()
        .find(|(c, _)| c == full || c == short)
        .map(|(_, ns)| ns.iter().map(|n| n.clone().filter(|n| n != "_")).collect())
        .unwrap_or_default()
}

/// The fixed hypotheses together with everything their types mention.
fn fixed_set(g: &Goal, major: FVarId, fixing: &Fixing) -> TResult<HashSet<FVarId>> {
    let dependents: HashSet<FVarId> = g.dependents(&[major]).into_iter().collect();
    let mut fixed = HashSet::new();
    match fixing {
        Fixing::Nothing => {}
        Fixing::All => {
            fixed.extend(g.hyps.iter().map(|h| h.id).filter(|x| *x != major && !dependents.contains(x)));
        }
        Fixing::Hyps(ids) => {
            for id in ids {
                let h = g.hyp(*id).ok_or_else(|| TacticError::UnknownHypothesis(id.to_string()))?;
                if *id == major || dependents.contains(id) {
                    return Err(TacticError::FixedHypothesisConflict(h.name.to_string()));
                }
                fixed.insert(*id);
                fixed.extend(g.closure_of(&h.ty));
            }
        }
    }
    Ok(fixed)
}

/// Replaces every complex index of the major premise by a fresh placeholder
/// and adds an equation between the two to the front of the target.
fn generalise_indices(
    st: &mut TacticState,
    gid: MetaId,
    info: &InductiveInfo,
    params: &[Expr],
    indices: &[Expr],
    major: FVarId,
    fixed: &HashSet<FVarId>,
) -> TResult<(MetaId, Vec<Expr>, Vec<usize>)> {
    let env = st.env.clone();
    let g = st.goal(gid)?.clone();
    let mut tc = g.checker(&env);
    let major_hyp = g.hyp(major).unwrap().clone();
    let deps = g.closure_of(&major_hyp.ty);
    let index_vars: HashSet<FVarId> = indices.iter().filter_map(Expr::as_fvar).collect();
    let mentions = |x: FVarId, ids: &mut dyn Iterator<Item = &FVarId>| {
        ids.filter(|d| **d != x && !index_vars.contains(d) && **d != major)
            .any(|d| g.hyp(*d).is_some_and(|h| h.ty.has_fvar(x)))
    };

    let mut new_idx: Vec<Expr> = Vec::new();
    let mut complex = Vec::new();
    let mut placeholders = Vec::new();
    let mut eq_tys = Vec::new();
    let mut refls = Vec::new();
    let mut rewrites: Vec<(Expr, Expr)> = Vec::new();
    for (i, k) in indices.iter().enumerate() {
        let slot = info.index_types(params, &new_idx)[i].clone();
        let k_ty = tc.infer(k)?;
        let is_complex = match k.as_fvar() {
            None => true,
            Some(x) => {
                indices[..i].contains(k)
                    || params.iter().any(|p| p.has_fvar(x))
                    || mentions(x, &mut deps.iter())
                    || mentions(x, &mut fixed.iter())
                    || !is_def_eq(&env, &slot, &k_ty, Transparency::Reducible)
            }
        };
        if !is_complex {
            new_idx.push(k.clone());
            continue;
        }
        let id = st.fresh_fvar();
        let hp = Expr::FVar(id);
        complex.push(i);
        placeholders.push(Hyp { id, name: Name::from(format!("H{}", crate::naming::subscript(i + 1))), ty: slot.clone(), temp: true });
        if is_def_eq(&env, &slot, &k_ty, Transparency::Reducible) {
            eq_tys.push(Expr::mk_app(Expr::cnst("eq"), [slot.clone(), hp.clone(), k.clone()]));
            refls.push((false, k_ty.clone(), k.clone()));
        } else {
            eq_tys.push(Expr::mk_app(Expr::cnst("heq"), [slot.clone(), hp.clone(), k_ty.clone(), k.clone()]));
            refls.push((true, k_ty.clone(), k.clone()));
        }
        if k.as_fvar().is_none() {
            rewrites.push((k.clone(), hp.clone()));
        }
        new_idx.push(hp);
    }
    if complex.is_empty() {
        return Ok((gid, new_idx, complex));
    }

    let rewrite = |e: &Expr| rewrites.iter().fold(e.clone(), |acc, (k, h)| acc.replace_subterm(k, h));
    let pos = g.position(major).unwrap();
    let mut hyps: Vec<Hyp> = g.hyps[..pos].to_vec();
    hyps.extend(placeholders.iter().cloned());
    let new_major_ty = Expr::mk_app(Expr::cnst(&info.name), params.iter().chain(&new_idx).cloned());
    hyps.push(Hyp { ty: new_major_ty, ..major_hyp.clone() });
    for h in &g.hyps[pos + 1..] {
        hyps.push(Hyp { ty: rewrite(&h.ty), ..h.clone() });
    }
    let target = eq_tys.iter().rev().fold(rewrite(&g.target), |body, ty| Expr::pi("ieq", ty.clone(), body));
    let new = st.derive(&g, hyps, target);
    new.check(&env).map_err(|e| TacticError::RewriteMadeGoalIllTyped(e.to_string()))?;
    let nid = new.id;
    let back: HashMap<FVarId, Expr> =
        placeholders.iter().zip(&complex).map(|(p, i)| (p.id, indices[*i].clone())).collect();
    let args: Vec<Expr> = refls
        .into_iter()
        .map(|(hetero, ty, k)| {
            if hetero {
                Expr::mk_app(Expr::cnst("heq.refl"), [ty, k])
            } else {
                Expr::mk_app(Expr::cnst("eq.refl"), [ty, k])
            }
        })
        .collect();
    st.refine(gid, vec![new], Arc::new(move |ps| Expr::mk_app(ps[0].replace_fvars(&back), args.clone())))?;
    Ok((nid, new_idx, complex))
}

/// Reverts the hypotheses that must or should vary in the induction
/// hypotheses: everything depending on the major premise, and every unfixed
/// hypothesis that occurs in the target or whose type mentions the major
/// premise or one of its dependencies.
fn generalise_hyps(st: &mut TacticState, gid: MetaId, major: FVarId, fixed: &HashSet<FVarId>) -> TResult<(MetaId, Vec<Hyp>)> {
    let g = st.goal(gid)?.clone();
    let major_ty = &g.hyp(major).unwrap().ty;
    let mut deps = g.closure_of(major_ty);
    let dependents: HashSet<FVarId> = g.dependents(&[major]).into_iter().collect();
    let fixed: HashSet<FVarId> = fixed.iter().filter(|x| !dependents.contains(x)).copied().collect();
    deps.insert(major);
    let revert: Vec<FVarId> = g
        .hyps
        .iter()
        .filter(|h| !deps.contains(&h.id))
        .filter(|h| {
            dependents.contains(&h.id)
                || (!fixed.contains(&h.id)
                    && (g.target.has_fvar(h.id) || h.ty.fvars().iter().any(|x| deps.contains(x))))
        })
        .map(|h| h.id)
        .collect();
    if revert.is_empty() {
        return Ok((gid, Vec::new()));
    }
    st.revert(gid, &revert)
}

/// A case goal right after the recursor is applied.
struct Case {
    ctor: usize,
    goal: MetaId,
    /// The hypotheses the case shares with the goal before induction.
    context: Vec<FVarId>,
    args: Vec<FVarId>,
    arg_tys: Vec<Expr>,
    /// Per argument, the index positions whose instantiation mentions it.
    assoc: Vec<Vec<usize>>,
    ihs: Vec<FVarId>,
}

fn apply_recursor(
    st: &mut TacticState,
    gid: MetaId,
    info: &InductiveInfo,
    params: &[Expr],
    idx: &[Expr],
    major: FVarId,
) -> TResult<Vec<Case>> {
    let g = st.goal(gid)?.clone();
    let idx_ids: Vec<FVarId> = idx.iter().map(|e| e.as_fvar().unwrap()).collect();
    let removed: HashSet<FVarId> = idx_ids.iter().copied().chain([major]).collect();
    let context: Vec<Hyp> = g.hyps.iter().filter(|h| !removed.contains(&h.id)).cloned().collect();
    if let Some(h) = context.iter().find(|h| h.ty.fvars().iter().any(|x| removed.contains(x))) {
        return Err(TacticError::DependencyError(format!("{} depends on the major premise or its indices", h.name)));
    }
    let p = g.target.clone();
    let major_name = g.hyp(major).unwrap().name.clone();
    let inst = |is: &[Expr], x: &Expr| {
        let mut m: HashMap<FVarId, Expr> = idx_ids.iter().copied().zip(is.iter().cloned()).collect();
        m.insert(major, x.clone());
        p.replace_fvars(&m)
    };

    let mut binders = Vec::new();
    let mut bs = Vec::new();
    for (k, ty) in info.indices.iter().enumerate() {
        let b = scratch_fvar();
        binders.push(LocalDecl::new(b, ty.name.clone(), info.index_types(params, &bs)[k].clone()));
        bs.push(Expr::FVar(b));
    }
    let x = scratch_fvar();
    binders.push(LocalDecl::new(x, major_name, Expr::mk_app(Expr::cnst(&info.name), params.iter().chain(&bs).cloned())));
    let motive = mk_lambda(&binders, inst(&bs, &Expr::FVar(x)));

    let mut cases = Vec::new();
    let mut goals = Vec::new();
    let mut minors_binders = Vec::new();
    for (ci, c) in info.ctors.iter().enumerate() {
        let args: Vec<FVarId> = c.args.iter().map(|_| st.fresh_fvar()).collect();
        let arg_exprs: Vec<Expr> = args.iter().map(|a| Expr::FVar(*a)).collect();
        let (tys, j) = info.instantiate_ctor(ci, params, &arg_exprs);
        let mut hyps = context.clone();
        for ((a, id), ty) in c.args.iter().zip(&args).zip(&tys) {
            hyps.push(Hyp { id: *id, name: a.name.clone(), ty: ty.clone(), temp: true });
        }
        let mut ihs = Vec::new();
        for r in c.recursive_positions() {
            let ih_ty = ih_type(st, info, &tys[r], &arg_exprs[r], &inst);
            let id = st.fresh_fvar();
            hyps.push(Hyp { id, name: Name::from("ih"), ty: ih_ty, temp: true });
            ihs.push(id);
        }
        let ctor_app = Expr::mk_app(Expr::cnst(&c.name), params.iter().chain(&arg_exprs).cloned());
        let target = inst(&j, &ctor_app);
        minors_binders.push(hyps[context.len()..].iter().map(Hyp::decl).collect::<Vec<_>>());
        let goal = Goal { id: st.fresh_goal(), hyps, target, case_tag: Some(c.name.clone()) };
        let assoc = args.iter().map(|a| (0..j.len()).filter(|i| j[*i].has_fvar(*a)).collect()).collect();
        cases.push(Case {
            ctor: ci,
            goal: goal.id,
            context: context.iter().map(|h| h.id).collect(),
            args,
            arg_tys: tys,
            assoc,
            ihs,
        });
        goals.push(goal);
    }
    let head = Expr::mk_app(Expr::cnst(&info.rec_name()), params.iter().cloned().chain([motive]));
    let idx = idx.to_vec();
    st.refine(
        gid,
        goals,
        Arc::new(move |ps| {
            let minors = ps.iter().zip(&minors_binders).map(|(p, bs)| mk_lambda(bs, p.clone()));
            Expr::mk_app(Expr::mk_app(head.clone(), minors), idx.iter().cloned().chain([Expr::FVar(major)]))
        }),
    )?;
    Ok(cases)
}

/// The induction hypothesis for a recursive argument `a` of type
/// `Π ys, I params j`: `Π ys, P[j, a ys]`.
fn ih_type(st: &TacticState, info: &InductiveInfo, ty: &Expr, a: &Expr, inst: &dyn Fn(&[Expr], &Expr) -> Expr) -> Expr {
    let mut ys = Vec::new();
    let mut cur = ty.clone();
    loop {
        match &cur {
            Expr::Pi(n, d, b) => {
                let y = scratch_fvar();
                ys.push(LocalDecl::new(y, n.clone(), (**d).clone()));
                cur = b.instantiate1(&Expr::FVar(y));
            }
            _ => {
                let w = whnf(&st.env, &cur, Transparency::All);
                if matches!(w, Expr::Pi(..)) {
                    cur = w;
                } else {
                    break;
                }
            }
        }
    }
    let (_, args) = cur.app_parts();
    let j = &args[info.num_params()..];
    let app = Expr::mk_app(a.clone(), ys.iter().map(|y| Expr::FVar(y.id)));
    mk_pi(&ys, inst(j, &app))
}

/// Instantiates the generalised hypotheses of an induction hypothesis with
/// whatever its index equations determine, and drops the equations that
/// become trivial.
fn simplify_ih(st: &mut TacticState, gid: MetaId, ih: FVarId, n_gen: usize, n_eqs: usize) -> TResult<MetaId> {
    let env = st.env.clone();
    let g = st.goal(gid)?.clone();
    let Some(h) = g.hyp(ih).cloned() else { return Ok(gid) };
    let mut cur = h.ty.clone();
    let mut metas = Vec::new();
    for _ in 0..n_gen {
        let Expr::Pi(n, d, b) = &cur else { return Ok(gid) };
        let m = st.fresh_goal();
        metas.push((m, n.clone(), (**d).clone()));
        cur = b.instantiate1(&Expr::Meta(m));
    }
    let mut eqs = Vec::new();
    for _ in 0..n_eqs {
        let Expr::Pi(n, d, b) = &cur else { return Ok(gid) };
        if b.has_loose_bvar(0) {
            return Ok(gid);
        }
        eqs.push((n.clone(), (**d).clone()));
        cur = b.instantiate1(&Expr::Sort);
    }
    let rest = cur;

    let mut sigma = Assignment::new();
    for (_, ty) in &eqs {
        let ty = ty.instantiate_metas(&sigma);
        let Some(eq) = Equation::parse(&ty) else { continue };
        let mut pairs = vec![eq.sides()];
        if let Equation::HEq { lty, rty, .. } = &eq {
            pairs.push((lty, rty));
        }
        for (l, r) in pairs {
            if l.has_metas() {
                continue;
            }
            let open: HashSet<MetaId> = r.metas().into_iter().filter(|m| !sigma.contains_key(m)).collect();
            match unify(&env, l, r, &open, Transparency::Reducible) {
                UnifyOutcome::Solved(s) | UnifyOutcome::NoUniqueSolution(s) => {
                    sigma.extend(s.into_iter().filter(|(m, _)| open.contains(m)));
                }
                UnifyOutcome::Failure => {}
            }
        }
    }
    if sigma.is_empty() {
        return Ok(gid);
    }

    let mut full = sigma.clone();
    let mut kept = Vec::new();
    let mut args = Vec::new();
    for (m, n, d) in &metas {
        match sigma.get(m) {
            Some(v) => args.push(v.clone()),
            None => {
                let y = scratch_fvar();
                kept.push(LocalDecl::new(y, n.clone(), d.instantiate_metas(&full)));
                full.insert(*m, Expr::FVar(y));
                args.push(Expr::FVar(y));
            }
        }
    }
    for (n, ty) in &eqs {
        let ty = ty.instantiate_metas(&full);
        let refl = match Equation::parse(&ty) {
            Some(Equation::Eq { ty: a, lhs, rhs }) if is_def_eq(&env, &lhs, &rhs, Transparency::All) => {
                Some(Expr::mk_app(Expr::cnst("eq.refl"), [a, lhs]))
            }
            Some(Equation::HEq { lty, lhs, rty, rhs })
                if is_def_eq(&env, &lty, &rty, Transparency::All) && is_def_eq(&env, &lhs, &rhs, Transparency::All) =>
            {
                Some(Expr::mk_app(Expr::cnst("heq.refl"), [lty, lhs]))
            }
            _ => None,
        };
        match refl {
            Some(r) => args.push(r),
            None => {
                let y = scratch_fvar();
                kept.push(LocalDecl::new(y, n.clone(), ty));
                args.push(Expr::FVar(y));
            }
        }
    }
    let rest = rest.instantiate_metas(&full);
    let new_ty = mk_pi(&kept, rest);
    let value = mk_lambda(&kept, Expr::mk_app(Expr::FVar(ih), args));
    st.transform_hyp(gid, ih, new_ty, value)
}

/// Gives the temporary hypotheses of a case their final names.
fn name_case(
    st: &mut TacticState,
    gid: MetaId,
    info: &InductiveInfo,
    case: &Case,
    namer: &ArgNamer,
    user: &[Option<String>],
) -> TResult<Vec<(Name, NameRule)>> {
    let ctor = &info.ctors[case.ctor];
    let g = st.goal(gid)?.clone();
    let mut used: HashSet<Name> = g.hyps.iter().filter(|h| !h.temp).map(|h| h.name.clone()).collect();
    let mut out = Vec::new();
    let mut final_names: Vec<Name> = Vec::new();
    for (p, (arg, id)) in ctor.args.iter().zip(&case.args).enumerate() {
        let (n, rule) = match user.get(p).cloned().flatten() {
            Some(u) => (Name::from(u), NameRule::User),
            None => {
                let (want, rule) = namer.arg_name(arg, &case.arg_tys[p], &case.assoc[p], &used);
                (fresh_name(&want, &used), rule)
            }
        };
        final_names.push(n.clone());
        if g.hyp(*id).is_some() {
            st.rename(gid, *id, n.clone(), false)?;
            used.insert(n.clone());
            out.push((n, rule));
        }
    }
    let recs = ctor.recursive_positions();
    for (q, (ih, r)) in case.ihs.iter().zip(&recs).enumerate() {
        if g.hyp(*ih).is_none() {
            continue;
        }
        let (n, rule) = match user.get(ctor.arity() + q).cloned().flatten() {
            Some(u) => (Name::from(u), NameRule::User),
            None => (fresh_name(&ih_name(recs.len(), &final_names[*r]), &used), NameRule::InductionHypothesis),
        };
        st.rename(gid, *ih, n.clone(), false)?;
        used.insert(n.clone());
        out.push((n, rule));
    }
    let rest: Vec<FVarId> = st.goal(gid)?.hyps.iter().filter(|h| h.temp).map(|h| h.id).collect();
    for (i, id) in rest.into_iter().enumerate() {
        let n = fresh_name(&format!("induction_eq_{}", i + 1), &used);
        st.rename(gid, id, n.clone(), false)?;
        used.insert(n.clone());
        out.push((n, NameRule::Equation));
    }
    Ok(out)
}

/// Orders the new hypotheses of a case after the shared context, data
/// before propositions, respecting dependencies.
fn tidy(st: &mut TacticState, gid: MetaId, context: &[FVarId]) -> TResult<()> {
    let env = st.env.clone();
    let g = st.goal(gid)?.clone();
    let shared: HashSet<FVarId> = context.iter().copied().collect();
    let (old, new): (Vec<Hyp>, Vec<Hyp>) = g.hyps.iter().cloned().partition(|h| shared.contains(&h.id));
    let (props, data): (Vec<Hyp>, Vec<Hyp>) = new.into_iter().partition(|h| is_prop(&env, &g, &h.ty));
    let order = dependency_order(old.into_iter().chain(data).chain(props).collect());
    st.reorder(gid, &order.iter().map(|h| h.id).collect::<Vec<_>>())
}
