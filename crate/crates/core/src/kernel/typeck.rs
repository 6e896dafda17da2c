use std::collections::HashMap;

use super::env::{Environment, Transparency};
use super::expr::{scratch_fvar, Expr, FVarId, MetaId};
use super::reduce::{is_def_eq, whnf};
use super::KernelError;

/// Infers types relative to an environment, a set of typed free variables
/// and (optionally) typed metavariables.
pub struct TypeChecker<'a> {
    env: &'a Environment,
    locals: HashMap<FVarId, Expr>,
    metas: HashMap<MetaId, Expr>,
}

impl<'a> TypeChecker<'a> {
    pub fn new(env: &'a Environment) -> Self {
        TypeChecker { env, locals: HashMap::new(), metas: HashMap::new() }
    }

    pub fn with_locals<I: IntoIterator<Item = (FVarId, Expr)>>(env: &'a Environment, locals: I) -> Self {
        TypeChecker { env, locals: locals.into_iter().collect(), metas: HashMap::new() }
    }

    pub fn add_local(&mut self, id: FVarId, ty: Expr) {
        self.locals.insert(id, ty);
    }

    pub fn add_meta(&mut self, id: MetaId, ty: Expr) {
        self.metas.insert(id, ty);
    }

    pub fn env(&self) -> &Environment {
        self.env
    }

    pub fn whnf(&self, e: &Expr) -> Expr {
        whnf(self.env, e, Transparency::All)
    }

    pub fn is_def_eq(&self, a: &Expr, b: &Expr) -> bool {
        is_def_eq(self.env, a, b, Transparency::All)
    }

    pub fn infer(&mut self, e: &Expr) -> Result<Expr, KernelError> {
        match e {
            Expr::Sort => Ok(Expr::Sort),
            Expr::Const(c) => self
                .env
                .get(c)
                .map(|d| d.ty.clone())
                .ok_or_else(|| KernelError::UnknownConstant(c.to_string())),
            Expr::BVar(i) => Err(KernelError::LooseBVar(*i)),
            Expr::FVar(id) => self.locals.get(id).cloned().ok_or(KernelError::UnknownFVar(*id)),
            Expr::Meta(m) => self.metas.get(m).cloned().ok_or(KernelError::UnknownMeta(*m)),
            Expr::App(f, a) => {
                let ft = self.infer(f)?;
                let ft = self.whnf(&ft);
                let Expr::Pi(_, dom, body) = ft else {
                    return Err(KernelError::type_error("function expected", f));
                };
                let at = self.infer(a)?;
                if !self.is_def_eq(&at, &dom) {
                    return Err(KernelError::Mismatch {
                        term: (**a).clone(),
                        expected: (*dom).clone(),
                        found: at,
                    });
                }
                Ok(body.instantiate1(a))
            }
            Expr::Lam(n, dom, body) => {
                self.ensure_sort(dom)?;
                let x = scratch_fvar();
                self.locals.insert(x, (**dom).clone());
                let bt = self.infer(&body.instantiate1(&Expr::FVar(x)));
                self.locals.remove(&x);
                Ok(Expr::pi(n.clone(), (**dom).clone(), bt?.abstract_fvars(&[x])))
            }
            Expr::Pi(_, dom, body) => {
                self.ensure_sort(dom)?;
                let x = scratch_fvar();
                self.locals.insert(x, (**dom).clone());
                let r = self.ensure_sort(&body.instantiate1(&Expr::FVar(x)));
                self.locals.remove(&x);
                r?;
                Ok(Expr::Sort)
            }
        }
    }

    /// Checks that `e` is a type, i.e. its type reduces to `Sort`.
    pub fn ensure_sort(&mut self, e: &Expr) -> Result<(), KernelError> {
        let t = self.infer(e)?;
        if self.whnf(&t).is_sort() {
            Ok(())
        } else {
            Err(KernelError::type_error("type expected", e))
        }
    }

    /// Checks `e : expected`.
    pub fn check(&mut self, e: &Expr, expected: &Expr) -> Result<(), KernelError> {
        let t = self.infer(e)?;
        if self.is_def_eq(&t, expected) {
            Ok(())
        } else {
            Err(KernelError::Mismatch { term: e.clone(), expected: expected.clone(), found: t })
        }
    }
}

pub fn infer_type(env: &Environment, e: &Expr) -> Result<Expr, KernelError> {
    TypeChecker::new(env).infer(e)
}
