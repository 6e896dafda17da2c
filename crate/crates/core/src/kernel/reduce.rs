//! Weak head normalisation and definitional equality.

use super::env::{Environment, Transparency};
use super::expr::{scratch_fvar, Expr};

/// Weak head normal form under beta, iota and delta restricted by `t`.
/// Metavariables are treated as opaque atoms.
pub fn whnf(env: &Environment, e: &Expr, t: Transparency) -> Expr {
    let mut cur = e.clone();
    loop {
        let next = match whnf_step(env, &cur, t) {
            Some(n) => n,
            None => return cur,
        };
        cur = next;
    }
}

/// Beta and iota only, no unfolding of definitions.
pub fn whnf_core(env: &Environment, e: &Expr) -> Expr {
    let mut cur = e.clone();
    loop {
        let (head, args) = cur.app_parts();
        let next = match head {
            Expr::Lam(..) if !args.is_empty() => Some(cur.head_beta()),
            Expr::Const(ref c) => iota(env, c, &args, None),
            _ => None,
        };
        match next {
            Some(n) => cur = n,
            None => return cur,
        }
    }
}

fn whnf_step(env: &Environment, e: &Expr, t: Transparency) -> Option<Expr> {
    let (head, args) = e.app_parts();
    match head {
        Expr::Lam(..) if !args.is_empty() => Some(e.head_beta()),
        Expr::Const(ref c) => {
            if let Some(r) = iota(env, c, &args, Some(t)) {
                return Some(r);
            }
            let d = env.get(c)?;
            if d.unfolds_at(t) {
                Some(Expr::mk_app(d.value.clone()?, args))
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Recursor applied to a constructor: pick the minor premise and feed it the
/// constructor fields followed by one recursive call per recursive field.
fn iota(env: &Environment, c: &str, args: &[Expr], t: Option<Transparency>) -> Option<Expr> {
    let ind = env.recursor_of(c)?;
    let np = ind.num_params();
    let nc = ind.ctors.len();
    let ni = ind.num_indices();
    let major_idx = np + 1 + nc + ni;
    if args.len() <= major_idx {
        return None;
    }
    let major = match t {
        Some(t) => whnf(env, &args[major_idx], t),
        None => whnf_core(env, &args[major_idx]),
    };
    let (mhead, margs) = major.app_parts();
    let cname = mhead.as_const()?;
    let (cidx, ctor) = ind.ctor(cname)?;
    if margs.len() != np + ctor.arity() {
        return None;
    }
    let params = &args[..np];
    let motive = &args[np];
    let minors = &args[np + 1..np + 1 + nc];
    let fields = &margs[np..];
    let (field_tys, _) = ind.instantiate_ctor(cidx, params, fields);
    let mut out = Expr::mk_app(minors[cidx].clone(), fields.iter().cloned());
    for pos in ctor.recursive_positions() {
        let (_, targs) = field_tys[pos].app_parts();
        let idx = targs[np..].iter().cloned();
        let call = Expr::mk_app(
            Expr::Const(ind.rec_name()),
            params
                .iter()
                .cloned()
                .chain(std::iter::once(motive.clone()))
                .chain(minors.iter().cloned())
                .chain(idx)
                .chain(std::iter::once(fields[pos].clone())),
        );
        out = Expr::app(out, call);
    }
    Some(Expr::mk_app(out, args[major_idx + 1..].iter().cloned()))
}

/// Definitional equality under beta, iota, delta (at `t`), alpha and
/// function eta.
pub fn is_def_eq(env: &Environment, a: &Expr, b: &Expr, t: Transparency) -> bool {
    log::debug!(target: "transparency", "isDefEq at {:?}", t);
    def_eq(env, a, b, t)
}

fn def_eq(env: &Environment, a: &Expr, b: &Expr, t: Transparency) -> bool {
    if a == b {
        return true;
    }
    // Same constant head: try the arguments before unfolding anything.
    if let (Expr::App(..), Expr::App(..)) = (a, b) {
        let (ha, xs) = a.app_parts();
        let (hb, ys) = b.app_parts();
        if ha == hb && xs.len() == ys.len() && xs.iter().zip(&ys).all(|(x, y)| def_eq(env, x, y, t)) {
            return true;
        }
    }
    let a = whnf(env, a, t);
    let b = whnf(env, b, t);
    if a == b {
        return true;
    }
    match (&a, &b) {
        (Expr::Pi(_, t1, b1), Expr::Pi(_, t2, b2)) | (Expr::Lam(_, t1, b1), Expr::Lam(_, t2, b2)) => {
            if !def_eq(env, t1, t2, t) {
                return false;
            }
            let x = Expr::FVar(scratch_fvar());
            def_eq(env, &b1.instantiate1(&x), &b2.instantiate1(&x), t)
        }
        (Expr::Lam(_, _, body), other) | (other, Expr::Lam(_, _, body)) => {
            let x = Expr::FVar(scratch_fvar());
            def_eq(env, &body.instantiate1(&x), &Expr::app(other.clone(), x), t)
        }
        (Expr::App(..), Expr::App(..)) => {
            let (ha, xs) = a.app_parts();
            let (hb, ys) = b.app_parts();
            xs.len() == ys.len()
                && def_eq(env, &ha, &hb, t)
                && xs.iter().zip(&ys).all(|(x, y)| def_eq(env, x, y, t))
        }
        _ => false,
    }
}
