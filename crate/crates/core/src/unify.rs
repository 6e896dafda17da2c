//! First-order unification of a meta-free term against a pattern with
//! metavariables.
//!
//! Outcomes distinguish a definite constructor clash (`Failure`) from a
//! problem that is merely not decided by first-order descent
//! (`NoUniqueSolution`).

use std::collections::{HashMap, HashSet};

use crate::kernel::{whnf, Environment, Expr, MetaId, Transparency};

pub type Assignment = HashMap<MetaId, Expr>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnifyOutcome {
    Solved(Assignment),
    /// Carries whatever was determined before the procedure got stuck.
    NoUniqueSolution(Assignment),
    Failure,
}

impl UnifyOutcome {
    pub fn class(&self) -> &'static str {
        match self {
            UnifyOutcome::Solved(_) => "solved",
            UnifyOutcome::NoUniqueSolution(_) => "no-unique-solution",
            UnifyOutcome::Failure => "failure",
        }
    }
}

/// Result of the raw descent, before metas are checked for completeness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descent {
    /// Every constraint was discharged.
    Done(Assignment),
    /// Some constraint could not be decided.
    Stuck(Assignment),
    Clash,
}

/// Unifies `a` (meta-free) with `b`, assigning only metas in `metas`.
pub fn unify(env: &Environment, a: &Expr, b: &Expr, metas: &HashSet<MetaId>, t: Transparency) -> UnifyOutcome {
    match descend(env, a, b, metas, t) {
        Descent::Clash => UnifyOutcome::Failure,
        Descent::Stuck(s) => UnifyOutcome::NoUniqueSolution(s),
        Descent::Done(s) => {
            if metas.iter().all(|m| s.contains_key(m)) {
                UnifyOutcome::Solved(s)
            } else {
                UnifyOutcome::NoUniqueSolution(s)
            }
        }
    }
}

pub fn instantiate_metas(e: &Expr, s: &Assignment) -> Expr {
    e.instantiate_metas(s)
}

/// The structural descent shared by `unify` and goal-directed `apply`.
pub fn descend(env: &Environment, a: &Expr, b: &Expr, metas: &HashSet<MetaId>, t: Transparency) -> Descent {
    let mut sigma = Assignment::new();
    let mut stuck = false;
    // (lhs, rhs, rigid): a clash is definite only beneath constructors.
    let mut work = vec![(a.clone(), b.clone(), true)];
    while let Some((l, r, rigid)) = work.pop() {
        let r = r.instantiate_metas(&sigma);
        if l == r {
            continue;
        }
        if let Expr::Meta(m) = &r {
            if metas.contains(m) && l.is_locally_closed() && !l.has_metas() {
                sigma.insert(*m, l);
            } else {
                stuck = true;
            }
            continue;
        }
        let lw = whnf(env, &l, t);
        let rw = whnf(env, &r, t);
        if lw == rw {
            continue;
        }
        if let Expr::Meta(_) = rw {
            work.push((lw, rw, rigid));
            continue;
        }
        let mut pairs = Vec::new();
        match (&lw, &rw) {
            (Expr::Lam(_, d1, b1), Expr::Lam(_, d2, b2)) | (Expr::Pi(_, d1, b1), Expr::Pi(_, d2, b2)) => {
                pairs.push(((**b1).clone(), (**b2).clone(), false));
                pairs.push(((**d1).clone(), (**d2).clone(), false));
            }
            _ => {
                let (hl, al) = lw.app_parts();
                let (hr, ar) = rw.app_parts();
                let ctor = |h: &Expr| h.as_const().is_some_and(|c| env.is_constructor(c));
                if matches!(hr, Expr::Meta(_)) {
                    stuck = true;
                    continue;
                }
                if ctor(&hl) && ctor(&hr) {
                    if hl != hr || al.len() != ar.len() {
                        if rigid {
                            return Descent::Clash;
                        }
                        stuck = true;
                        continue;
                    }
                    for (x, y) in al.into_iter().zip(ar).rev() {
                        pairs.push((x, y, rigid));
                    }
                } else if hl == hr && al.len() == ar.len() && !al.is_empty() {
                    for (x, y) in al.into_iter().zip(ar).rev() {
                        pairs.push((x, y, false));
                    }
                } else {
                    stuck = true;
                    continue;
                }
            }
        }
        work.extend(pairs);
    }
    if stuck {
        Descent::Stuck(sigma)
    } else {
        Descent::Done(sigma)
    }
}
