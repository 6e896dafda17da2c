//! Elaboration of surface terms and declarations into kernel expressions.
//!
//! Everything is explicit; the only inference is for the type argument of
//! `=`, `==`, pairs and unannotated `λ` binders (taken from the expected type).

use super::ast::*;
use super::lexer::Pos;
use crate::kernel::inductive::open_pis;
use crate::kernel::{
    self, add_axiom, add_definition, add_inductive, add_theorem, name, whnf, ConstructorDecl, Environment, Expr,
    InductiveDecl, Infix, KernelError, LocalDecl, Name, TelescopeEntry, Transparency, TypeChecker,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ElabError {
    #[error("{pos}: unknown identifier `{name}`")]
    UnknownIdent { name: String, pos: Pos },
    #[error("{pos}: {msg}")]
    Other { msg: String, pos: Pos },
    #[error("{pos}: {err}")]
    Kernel { err: Box<KernelError>, pos: Pos },
}

type EResult<T> = Result<T, ElabError>;

pub struct Elaborator<'a> {
    env: &'a Environment,
    locals: Vec<LocalDecl>,
    pos: Pos,
}

impl<'a> Elaborator<'a> {
    pub fn new(env: &'a Environment, locals: Vec<LocalDecl>) -> Self {
        Elaborator { env, locals, pos: Pos::default() }
    }

    pub fn at(mut self, pos: Pos) -> Self {
        self.pos = pos;
        self
    }

    fn err<T>(&self, msg: impl Into<String>) -> EResult<T> {
        Err(ElabError::Other { msg: msg.into(), pos: self.pos })
    }

    fn kerr(&self, err: KernelError) -> ElabError {
        ElabError::Kernel { err: Box::new(err), pos: self.pos }
    }

    fn tc(&self) -> TypeChecker<'a> {
        TypeChecker::with_locals(self.env, self.locals.iter().map(|d| (d.id, d.ty.clone())))
    }

    pub fn infer(&self, e: &Expr) -> EResult<Expr> {
        self.tc().infer(e).map_err(|e| self.kerr(e))
    }

    fn constant(&self, n: &str) -> EResult<Expr> {
        match self.env.resolve(n) {
            Some(c) => Ok(Expr::Const(c)),
            None => Err(ElabError::UnknownIdent { name: n.to_string(), pos: self.pos }),
        }
    }

    /// Elaborates a term that must be a type.
    pub fn elab_type(&mut self, t: &Term) -> EResult<Expr> {
        let e = self.elab(t, None)?;
        self.tc().ensure_sort(&e).map_err(|e| self.kerr(e))?;
        Ok(e)
    }

    pub fn elab(&mut self, t: &Term, expected: Option<&Expr>) -> EResult<Expr> {
        match t {
            Term::Ident(n, at) => {
                self.pos = at.0;
                if n == "_" {
                    return self.err("`_` cannot be used as a term");
                }
                if let Some(d) = self.locals.iter().rev().find(|d| &*d.name == n.as_str()) {
                    return Ok(Expr::FVar(d.id));
                }
                self.constant(n)
            }
            Term::Num(k, at) => {
                self.pos = at.0;
                let mut e = self.constant("nat.zero")?;
                let s = self.constant("nat.succ")?;
                for _ in 0..*k {
                    e = Expr::app(s.clone(), e);
                }
                Ok(e)
            }
            Term::Sort => Ok(Expr::Sort),
            Term::Nat => self.constant("nat"),
            Term::App(..) => {
                let mut args = Vec::new();
                let mut head = t;
                while let Term::App(f, a) = head {
                    args.push(&**a);
                    head = f;
                }
                args.reverse();
                let f = self.elab(head, None)?;
                self.apply(f, &args)
            }
            Term::Pi(bs, body) => {
                let depth = self.locals.len();
                let mut opened = Vec::new();
                for b in bs {
                    let Some(ty) = &b.ty else {
                        self.locals.truncate(depth);
                        return self.err(format!("cannot infer the type of binder `{}`", b.name));
                    };
                    let ty = match self.elab_type(ty) {
                        Ok(t) => t,
                        Err(e) => {
                            self.locals.truncate(depth);
                            return Err(e);
                        }
                    };
                    let d = LocalDecl::new(kernel::expr::scratch_fvar(), b.name.as_str(), ty);
                    self.locals.push(d.clone());
                    opened.push(d);
                }
                let body = self.elab_type(body);
                self.locals.truncate(depth);
                Ok(kernel::expr::mk_pi(&opened, body?))
            }
            Term::Lam(bs, body) => {
                let depth = self.locals.len();
                let mut opened = Vec::new();
                let mut exp = expected.cloned();
                for b in bs {
                    let from_expected = exp.as_ref().map(|e| whnf(self.env, e, Transparency::All));
                    let (dom, cod) = match from_expected {
                        Some(Expr::Pi(_, d, c)) => (Some(d.beta_normalize()), Some(c)),
                        _ => (None, None),
                    };
                    let ty = match (&b.ty, dom) {
                        (Some(t), _) => self.elab_type(t)?,
                        (None, Some(d)) => d,
                        (None, None) => {
                            self.locals.truncate(depth);
                            return self.err(format!("cannot infer the type of binder `{}`", b.name));
                        }
                    };
                    let d = LocalDecl::new(kernel::expr::scratch_fvar(), b.name.as_str(), ty);
                    exp = cod.map(|c| c.instantiate1(&Expr::FVar(d.id)));
                    self.locals.push(d.clone());
                    opened.push(d);
                }
                let body = self.elab(body, exp.as_ref());
                self.locals.truncate(depth);
                Ok(kernel::expr::mk_lambda(&opened, body?))
            }
            Term::Arrow(a, b) => {
                let a = self.elab_type(a)?;
                let b = self.elab_type(b)?;
                Ok(Expr::arrow(a, b))
            }
            Term::Not(p) => {
                let p = self.elab_type(p)?;
                Ok(Expr::arrow(p, self.constant("false")?))
            }
            Term::Op(op, sym, a, b) => self.op(*op, sym, a, b),
            Term::Pair(a, b) => {
                let exp = expected.map(|e| whnf(self.env, e, Transparency::All));
                let (ea, eb) = match exp.as_ref().map(|e| e.app_parts()) {
                    Some((h, args)) if h.as_const().map(|c| &**c) == Some("prod") && args.len() == 2 => {
                        (Some(args[0].clone()), Some(args[1].clone()))
                    }
                    _ => (None, None),
                };
                let x = self.elab(a, ea.as_ref())?;
                let y = self.elab(b, eb.as_ref())?;
                let tx = self.infer(&x)?;
                let ty = self.infer(&y)?;
                Ok(Expr::mk_app(self.constant("prod.mk")?, [tx, ty, x, y]))
            }
        }
    }

    fn apply(&mut self, mut f: Expr, args: &[&Term]) -> EResult<Expr> {
        for a in args {
            let fty = self.infer(&f)?;
            let fty = whnf(self.env, &fty, Transparency::All);
            let Expr::Pi(_, dom, _) = fty else {
                return self.err("function expected");
            };
            let ea = self.elab(a, Some(&dom))?;
            f = Expr::app(f, ea);
        }
        Ok(f)
    }

    fn op(&mut self, op: BinOp, sym: &str, a: &Term, b: &Term) -> EResult<Expr> {
        match op {
            BinOp::Eq => {
                let x = self.elab(a, None)?;
                let tx = self.infer(&x)?;
                let y = self.elab(b, Some(&tx))?;
                Ok(Expr::mk_app(self.constant("eq")?, [tx, x, y]))
            }
            BinOp::HEq => {
                let x = self.elab(a, None)?;
                let y = self.elab(b, None)?;
                let tx = self.infer(&x)?;
                let ty = self.infer(&y)?;
                Ok(Expr::mk_app(self.constant("heq")?, [tx, x, ty, y]))
            }
            BinOp::Add => {
                let f = self.constant("add")?;
                self.apply(f, &[a, b])
            }
            BinOp::Lt => {
                let f = self.constant("lt")?;
                self.apply(f, &[a, b])
            }
            BinOp::Gt => {
                let f = self.constant("lt")?;
                self.apply(f, &[b, a])
            }
            BinOp::Prod => {
                let f = self.constant("prod")?;
                self.apply(f, &[a, b])
            }
            BinOp::User => {
                let Some(i) = self.env.infixes.iter().rev().find(|i| i.symbol == sym) else {
                    return self.err(format!("unknown infix `{sym}`"));
                };
                let f = Expr::Const(i.constant.clone());
                self.apply(f, &[a, b])
            }
        }
    }

    /// Opens declaration binders as locals, returning them.
    pub fn open_binders(&mut self, bs: &[Binder]) -> EResult<Vec<LocalDecl>> {
        let mut out = Vec::new();
        for b in bs {
            let Some(ty) = &b.ty else {
                return self.err(format!("binder `{}` needs a type", b.name));
            };
            let ty = self.elab_type(ty)?;
            let d = LocalDecl::new(kernel::expr::scratch_fvar(), b.name.as_str(), ty);
            self.locals.push(d.clone());
            out.push(d);
        }
        Ok(out)
    }
}

/// Which binders of a surface Pi telescope carry a user-written name.
fn named_flags(t: &Term) -> Vec<bool> {
    match t {
        Term::Pi(bs, body) => {
            let mut v = vec![true; bs.len()];
            v.extend(named_flags(body));
            v
        }
        Term::Arrow(_, b) => {
            let mut v = vec![false];
            v.extend(named_flags(b));
            v
        }
        Term::Not(_) => vec![false],
        _ => Vec::new(),
    }
}

fn telescope(locals: &[LocalDecl], flags: &[bool]) -> Vec<TelescopeEntry> {
    let mut out = Vec::new();
    for (i, d) in locals.iter().enumerate() {
        let ids: Vec<_> = locals[..i].iter().map(|d| d.id).collect();
        out.push(TelescopeEntry {
            name: d.name.clone(),
            ty: d.ty.abstract_fvars(&ids),
            explicit_name: flags.get(i).copied().unwrap_or(true),
        });
    }
    out
}

/// Elaborates the statement of a lemma: its binders (which become the
/// initial hypotheses) and its target.
pub fn elab_statement(env: &Environment, binders: &[Binder], ty: &Term, pos: Pos) -> EResult<(Vec<LocalDecl>, Expr)> {
    let mut el = Elaborator::new(env, Vec::new()).at(pos);
    let locals = el.open_binders(binders)?;
    let target = el.elab_type(ty)?;
    Ok((locals, target))
}

fn item_pos(item: &Item) -> Pos {
    match item {
        Item::Inductive { at, .. }
        | Item::Axiom { at, .. }
        | Item::Def { at, .. }
        | Item::Lemma { at, .. }
        | Item::NameHints { at, .. }
        | Item::NameHintsContainer { at, .. }
        | Item::Infix { at, .. }
        | Item::Open { at, .. } => at.0,
    }
}

/// Adds a non-tactic item to the environment. Lemmas proved by tactics are
/// handled by the script runner.
pub fn elab_item(env: &mut Environment, item: &Item) -> EResult<()> {
    let pos = item_pos(item);
    let kerr = |err| ElabError::Kernel { err: Box::new(err), pos };
    match item {
        Item::Inductive { name: n, binders, ty, ctors, .. } => {
            let decl = elab_inductive(env, n, binders, ty.as_ref(), ctors, pos)?;
            add_inductive(env, &decl).map_err(kerr)?;
        }
        Item::Axiom { name: n, binders, ty, .. } => {
            let (locals, t) = elab_statement(env, binders, ty, pos)?;
            add_axiom(env, name(n), kernel::expr::mk_pi(&locals, t)).map_err(kerr)?;
        }
        Item::Def { name: n, binders, ty, value, reducible, .. } => {
            let mut el = Elaborator::new(env, Vec::new()).at(pos);
            let locals = el.open_binders(binders)?;
            let t = el.elab_type(ty)?;
            let v = el.elab(value, Some(&t))?;
            let (t, v) = (kernel::expr::mk_pi(&locals, t), kernel::expr::mk_lambda(&locals, v));
            add_definition(env, name(n), t, v, *reducible).map_err(kerr)?;
        }
        Item::Lemma { name: n, binders, ty, proof: Proof::Term(p), .. } => {
            let mut el = Elaborator::new(env, Vec::new()).at(pos);
            let locals = el.open_binders(binders)?;
            let t = el.elab_type(ty)?;
            let v = el.elab(p, Some(&t))?;
            let (t, v) = (kernel::expr::mk_pi(&locals, t), kernel::expr::mk_lambda(&locals, v));
            add_theorem(env, name(n), t, v).map_err(kerr)?;
        }
        Item::Lemma { .. } => {
            return Err(ElabError::Other { msg: "tactic proofs are checked by the script runner".into(), pos })
        }
        Item::NameHints { head, names, .. } => {
            let h = env.resolve(head).ok_or(ElabError::UnknownIdent { name: head.clone(), pos })?;
            env.hints.register(h, names.iter().map(|n| name(n)).collect());
        }
        Item::NameHintsContainer { head, .. } => {
            let h = env.resolve(head).ok_or(ElabError::UnknownIdent { name: head.clone(), pos })?;
            env.hints.register_container(h);
        }
        Item::Infix { symbol, constant, .. } => {
            let c = env.resolve(constant).ok_or(ElabError::UnknownIdent { name: constant.clone(), pos })?;
            env.infixes.push(Infix { symbol: symbol.clone(), constant: c });
        }
        Item::Open { namespace, .. } => env.open_namespace(namespace),
    }
    complete_auxiliaries(env).map_err(kerr)
}

/// Generates derived declarations for every inductive whose prerequisites
/// have become available.
pub fn complete_auxiliaries(env: &mut Environment) -> Result<(), KernelError> {
    let names: Vec<Name> = env.inductives().map(|i| i.name.clone()).collect();
    for n in names {
        kernel::add_auxiliary(env, &n)?;
    }
    Ok(())
}

fn elab_inductive(
    env: &Environment,
    n: &str,
    binders: &[Binder],
    ty: Option<&Term>,
    ctors: &[CtorSyn],
    pos: Pos,
) -> EResult<InductiveDecl> {
    let kerr = |err| ElabError::Kernel { err: Box::new(err), pos };
    let mut el = Elaborator::new(env, Vec::new()).at(pos);
    let params = el.open_binders(binders)?;
    let fam_ty = match ty {
        Some(t) => el.elab_type(t)?,
        None => Expr::Sort,
    };
    let (indices, sort) = open_pis(&fam_ty, None);
    if !whnf(env, &sort, Transparency::All).is_sort() {
        return Err(ElabError::Other { msg: format!("`{n}` must end in Type"), pos });
    }
    let index_flags = ty.map(named_flags).unwrap_or_default();
    let param_tele = telescope(&params, &vec![true; params.len()]);
    let mut all_idx = params.clone();
    all_idx.extend(indices.iter().cloned());
    let index_tele: Vec<TelescopeEntry> = telescope(&all_idx, &[])
        .into_iter()
        .skip(params.len())
        .zip(index_flags.iter().copied().chain(std::iter::repeat(false)))
        .map(|(mut e, f)| {
            e.explicit_name = f;
            e
        })
        .collect();

    // Constructor types mention the family itself.
    let mut tmp = env.clone();
    let full_ty = kernel::expr::mk_pi(&params, fam_ty.clone());
    add_axiom(&mut tmp, name(n), full_ty).map_err(kerr)?;
    let mut out = Vec::new();
    for c in ctors {
        let mut el = Elaborator::new(&tmp, params.clone()).at(c.at.0);
        let args = el.open_binders(&c.binders)?;
        let cty = el.elab_type(&c.ty)?;
        let whole = kernel::expr::mk_pi(&args, cty);
        let ids: Vec<_> = params.iter().map(|d| d.id).collect();
        let mut flags = vec![true; c.binders.len()];
        flags.extend(named_flags(&c.ty));
        out.push(ConstructorDecl {
            name: Name::from(format!("{n}.{}", c.name)),
            ty: whole.abstract_fvars(&ids),
            explicit_names: flags,
        });
    }
    Ok(InductiveDecl { name: name(n), params: param_tele, indices: index_tele, ctors: out })
}
