//! Locally nameless expressions.
//!
//! Bound variables are de Bruijn indices; whenever a binder is opened the
//! bound variable is replaced by a free variable that names a hypothesis
//! (or a scratch variable of the type checker).

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Name::from(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FVarId(pub u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MetaId(pub u64);

impl fmt::Display for FVarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for MetaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

// Scratch variables used while checking terms live far above the ids handed
// out to hypotheses so the two never collide.
static SCRATCH: AtomicU64 = AtomicU64::new(1 << 48);

pub fn scratch_fvar() -> FVarId {
    FVarId(SCRATCH.fetch_add(1, Ordering::Relaxed))
}

#[derive(Clone, Debug)]
pub enum Expr {
    Sort,
    Const(Name),
    BVar(u32),
    FVar(FVarId),
    App(Arc<Expr>, Arc<Expr>),
    Lam(Name, Arc<Expr>, Arc<Expr>),
    Pi(Name, Arc<Expr>, Arc<Expr>),
    Meta(MetaId),
}

/// Plain rendering without an environment, for kernel diagnostics. Free
/// variables appear as `%id`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(e: &Expr, names: &mut Vec<Name>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match e {
                Expr::Sort => write!(f, "Type"),
                Expr::Const(c) => write!(f, "{c}"),
                Expr::BVar(i) => match names.len().checked_sub(*i as usize + 1) {
                    Some(k) => write!(f, "{}", names[k]),
                    None => write!(f, "#{i}"),
                },
                Expr::FVar(x) => write!(f, "%{x}"),
                Expr::Meta(m) => write!(f, "?{m}"),
                Expr::App(a, b) => {
                    write!(f, "(")?;
                    go(a, names, f)?;
                    write!(f, " ")?;
                    go(b, names, f)?;
                    write!(f, ")")
                }
                Expr::Lam(n, d, b) | Expr::Pi(n, d, b) => {
                    let kw = if matches!(e, Expr::Lam(..)) { "λ" } else { "∀" };
                    write!(f, "({kw} ({n} : ")?;
                    go(d, names, f)?;
                    write!(f, "), ")?;
                    names.push(n.clone());
                    let r = go(b, names, f);
                    names.pop();
                    r?;
                    write!(f, ")")
                }
            }
        }
        go(self, &mut Vec::new(), f)
    }
}

/// Equality is alpha-equivalence: binder hints are ignored.
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use Expr::*;
        match (self, other) {
            (Sort, Sort) => true,
            (Const(a), Const(b)) => a == b,
            (BVar(a), BVar(b)) => a == b,
            (FVar(a), FVar(b)) => a == b,
            (Meta(a), Meta(b)) => a == b,
            (App(f, a), App(g, b)) => f == g && a == b,
            (Lam(_, t, b), Lam(_, u, c)) | (Pi(_, t, b), Pi(_, u, c)) => t == u && b == c,
            _ => false,
        }
    }
}

impl Eq for Expr {}

impl Hash for Expr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Expr::Sort => {}
            Expr::Const(n) => n.hash(state),
            Expr::BVar(i) => i.hash(state),
            Expr::FVar(id) => id.hash(state),
            Expr::Meta(id) => id.hash(state),
            Expr::App(f, a) => {
                f.hash(state);
                a.hash(state);
            }
            Expr::Lam(_, t, b) | Expr::Pi(_, t, b) => {
                t.hash(state);
                b.hash(state);
            }
        }
    }
}

impl Expr {
    pub fn cnst(n: &str) -> Expr {
        Expr::Const(name(n))
    }

    pub fn app(f: Expr, a: Expr) -> Expr {
        Expr::App(Arc::new(f), Arc::new(a))
    }

    pub fn mk_app<I: IntoIterator<Item = Expr>>(f: Expr, args: I) -> Expr {
        args.into_iter().fold(f, Expr::app)
    }

    pub fn lam(n: impl Into<Name>, ty: Expr, body: Expr) -> Expr {
        Expr::Lam(n.into(), Arc::new(ty), Arc::new(body))
    }

    pub fn pi(n: impl Into<Name>, ty: Expr, body: Expr) -> Expr {
        Expr::Pi(n.into(), Arc::new(ty), Arc::new(body))
    }

    /// Non-dependent arrow.
    pub fn arrow(a: Expr, b: Expr) -> Expr {
        Expr::pi("a", a, b.lift(1))
    }

    pub fn is_sort(&self) -> bool {
        matches!(self, Expr::Sort)
    }

    pub fn as_fvar(&self) -> Option<FVarId> {
        match self {
            Expr::FVar(id) => Some(*id),
            _ => None,
        }
    }

    pub fn as_const(&self) -> Option<&Name> {
        match self {
            Expr::Const(n) => Some(n),
            _ => None,
        }
    }

    pub fn app_fn(&self) -> &Expr {
        let mut e = self;
        while let Expr::App(f, _) = e {
            e = f;
        }
        e
    }

    /// Splits an application spine into head and arguments.
    pub fn app_parts(&self) -> (Expr, Vec<Expr>) {
        let mut args = Vec::new();
        let mut e = self;
        while let Expr::App(f, a) = e {
            args.push((**a).clone());
            e = f;
        }
        args.reverse();
        (e.clone(), args)
    }

    pub fn head_const(&self) -> Option<&Name> {
        self.app_fn().as_const()
    }

    /// One past the largest loose bound variable; zero when locally closed.
    pub fn loose_bvar_range(&self) -> u32 {
        match self {
            Expr::BVar(i) => i + 1,
            Expr::App(f, a) => f.loose_bvar_range().max(a.loose_bvar_range()),
            Expr::Lam(_, t, b) | Expr::Pi(_, t, b) => {
                t.loose_bvar_range().max(b.loose_bvar_range().saturating_sub(1))
            }
            _ => 0,
        }
    }

    pub fn is_locally_closed(&self) -> bool {
        self.loose_bvar_range() == 0
    }

    pub fn has_loose_bvar(&self, idx: u32) -> bool {
        match self {
            Expr::BVar(i) => *i == idx,
            Expr::App(f, a) => f.has_loose_bvar(idx) || a.has_loose_bvar(idx),
            Expr::Lam(_, t, b) | Expr::Pi(_, t, b) => {
                t.has_loose_bvar(idx) || b.has_loose_bvar(idx + 1)
            }
            _ => false,
        }
    }

    /// Shifts loose bound variables at or above `cutoff` up by `by`.
    fn lift_from(&self, by: u32, cutoff: u32) -> Expr {
        if by == 0 || self.loose_bvar_range() <= cutoff {
            return self.clone();
        }
        match self {
            Expr::BVar(i) if *i >= cutoff => Expr::BVar(i + by),
            Expr::App(f, a) => Expr::app(f.lift_from(by, cutoff), a.lift_from(by, cutoff)),
            Expr::Lam(n, t, b) => Expr::Lam(
                n.clone(),
                Arc::new(t.lift_from(by, cutoff)),
                Arc::new(b.lift_from(by, cutoff + 1)),
            ),
            Expr::Pi(n, t, b) => Expr::Pi(
                n.clone(),
                Arc::new(t.lift_from(by, cutoff)),
                Arc::new(b.lift_from(by, cutoff + 1)),
            ),
            _ => self.clone(),
        }
    }

    pub fn lift(&self, by: u32) -> Expr {
        self.lift_from(by, 0)
    }

    /// Replaces loose `BVar(i)` (i < subst.len()) by `subst[len - 1 - i]`.
    /// Remaining loose variables are lowered accordingly.
    pub fn instantiate(&self, subst: &[Expr]) -> Expr {
        if subst.is_empty() {
            return self.clone();
        }
        self.instantiate_at(subst, 0)
    }

    fn instantiate_at(&self, subst: &[Expr], depth: u32) -> Expr {
        if self.loose_bvar_range() <= depth {
            return self.clone();
        }
        let n = subst.len() as u32;
        match self {
            Expr::BVar(i) => {
                let i = *i;
                if i < depth {
                    self.clone()
                } else if i - depth < n {
                    subst[(n - 1 - (i - depth)) as usize].lift(depth)
                } else {
                    Expr::BVar(i - n)
                }
            }
            Expr::App(f, a) => Expr::app(f.instantiate_at(subst, depth), a.instantiate_at(subst, depth)),
            Expr::Lam(nm, t, b) => Expr::Lam(
                nm.clone(),
                Arc::new(t.instantiate_at(subst, depth)),
                Arc::new(b.instantiate_at(subst, depth + 1)),
            ),
            Expr::Pi(nm, t, b) => Expr::Pi(
                nm.clone(),
                Arc::new(t.instantiate_at(subst, depth)),
                Arc::new(b.instantiate_at(subst, depth + 1)),
            ),
            _ => self.clone(),
        }
    }

    pub fn instantiate1(&self, v: &Expr) -> Expr {
        self.instantiate(std::slice::from_ref(v))
    }

    /// Turns the given free variables into bound variables; the last id
    /// becomes `BVar(0)`.
    pub fn abstract_fvars(&self, ids: &[FVarId]) -> Expr {
        if ids.is_empty() {
            return self.clone();
        }
        self.abstract_at(ids, 0)
    }

    fn abstract_at(&self, ids: &[FVarId], depth: u32) -> Expr {
        match self {
            Expr::FVar(id) => match ids.iter().rposition(|x| x == id) {
                Some(k) => Expr::BVar(depth + (ids.len() - 1 - k) as u32),
                None => self.clone(),
            },
            Expr::App(f, a) => Expr::app(f.abstract_at(ids, depth), a.abstract_at(ids, depth)),
            Expr::Lam(n, t, b) => Expr::Lam(
                n.clone(),
                Arc::new(t.abstract_at(ids, depth)),
                Arc::new(b.abstract_at(ids, depth + 1)),
            ),
            Expr::Pi(n, t, b) => Expr::Pi(
                n.clone(),
                Arc::new(t.abstract_at(ids, depth)),
                Arc::new(b.abstract_at(ids, depth + 1)),
            ),
            _ => self.clone(),
        }
    }

    /// Generic bottom-up rewrite; `f` returns `Some` to replace a node.
    pub fn replace(&self, f: &mut dyn FnMut(&Expr, u32) -> Option<Expr>) -> Expr {
        self.replace_at(f, 0)
    }

    fn replace_at(&self, f: &mut dyn FnMut(&Expr, u32) -> Option<Expr>, depth: u32) -> Expr {
        if let Some(r) = f(self, depth) {
            return r;
        }
        match self {
            Expr::App(g, a) => Expr::app(g.replace_at(f, depth), a.replace_at(f, depth)),
            Expr::Lam(n, t, b) => Expr::Lam(
                n.clone(),
                Arc::new(t.replace_at(f, depth)),
                Arc::new(b.replace_at(f, depth + 1)),
            ),
            Expr::Pi(n, t, b) => Expr::Pi(
                n.clone(),
                Arc::new(t.replace_at(f, depth)),
                Arc::new(b.replace_at(f, depth + 1)),
            ),
            _ => self.clone(),
        }
    }

    /// Substitutes locally closed values for free variables.
    pub fn replace_fvars(&self, map: &HashMap<FVarId, Expr>) -> Expr {
        if map.is_empty() {
            return self.clone();
        }
        self.replace(&mut |e, _| match e {
            Expr::FVar(id) => map.get(id).cloned(),
            _ => None,
        })
    }

    pub fn replace_fvar(&self, id: FVarId, v: &Expr) -> Expr {
        self.replace(&mut |e, _| match e {
            Expr::FVar(x) if *x == id => Some(v.clone()),
            _ => None,
        })
    }

    /// Replaces every occurrence of the (locally closed) subterm `pat`.
    pub fn replace_subterm(&self, pat: &Expr, by: &Expr) -> Expr {
        self.replace(&mut |e, _| if e == pat { Some(by.clone()) } else { None })
    }

    pub fn for_each(&self, f: &mut dyn FnMut(&Expr)) {
        f(self);
        match self {
            Expr::App(g, a) => {
                g.for_each(f);
                a.for_each(f);
            }
            Expr::Lam(_, t, b) | Expr::Pi(_, t, b) => {
                t.for_each(f);
                b.for_each(f);
            }
            _ => {}
        }
    }

    pub fn has_fvar(&self, id: FVarId) -> bool {
        let mut found = false;
        self.for_each(&mut |e| {
            if let Expr::FVar(x) = e {
                found |= *x == id;
            }
        });
        found
    }

    pub fn fvars(&self) -> HashSet<FVarId> {
        let mut out = HashSet::new();
        self.for_each(&mut |e| {
            if let Expr::FVar(x) = e {
                out.insert(*x);
            }
        });
        out
    }

    pub fn has_metas(&self) -> bool {
        let mut found = false;
        self.for_each(&mut |e| found |= matches!(e, Expr::Meta(_)));
        found
    }

    pub fn metas(&self) -> HashSet<MetaId> {
        let mut out = HashSet::new();
        self.for_each(&mut |e| {
            if let Expr::Meta(m) = e {
                out.insert(*m);
            }
        });
        out
    }

    pub fn has_const(&self, n: &str) -> bool {
        let mut found = false;
        self.for_each(&mut |e| {
            if let Expr::Const(c) = e {
                found |= &**c == n;
            }
        });
        found
    }

    pub fn contains(&self, sub: &Expr) -> bool {
        let mut found = false;
        self.for_each(&mut |e| found |= e == sub);
        found
    }

    /// Substitutes assigned metavariables, following assignment chains.
    pub fn instantiate_metas(&self, assignment: &HashMap<MetaId, Expr>) -> Expr {
        if assignment.is_empty() || !self.has_metas() {
            return self.clone();
        }
        self.replace(&mut |e, _| match e {
            Expr::Meta(m) => assignment.get(m).map(|v| v.instantiate_metas(assignment)),
            _ => None,
        })
    }

    /// Contracts beta redexes at the head of the spine.
    pub fn head_beta(&self) -> Expr {
        let (head, args) = self.app_parts();
        if !matches!(head, Expr::Lam(..)) || args.is_empty() {
            return self.clone();
        }
        let mut e = head;
        let mut i = 0;
        while i < args.len() {
            match e {
                Expr::Lam(_, _, b) => {
                    e = b.instantiate1(&args[i]);
                    i += 1;
                }
                _ => break,
            }
        }
        Expr::mk_app(e, args[i..].iter().cloned()).head_beta()
    }

    /// Contracts every beta redex. Only used on well-typed terms.
    pub fn beta_normalize(&self) -> Expr {
        match self {
            Expr::App(..) => {
                let (head, args) = self.app_parts();
                let head = head.beta_normalize();
                let args: Vec<Expr> = args.iter().map(|a| a.beta_normalize()).collect();
                let e = Expr::mk_app(head, args);
                if matches!(e.app_fn(), Expr::Lam(..)) {
                    e.head_beta().beta_normalize()
                } else {
                    e
                }
            }
            Expr::Lam(n, t, b) => Expr::lam(n.clone(), t.beta_normalize(), b.beta_normalize()),
            Expr::Pi(n, t, b) => Expr::pi(n.clone(), t.beta_normalize(), b.beta_normalize()),
            _ => self.clone(),
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.for_each(&mut |_| n += 1);
        n
    }
}

/// A free variable together with its display name and type.
#[derive(Clone, Debug)]
pub struct LocalDecl {
    pub id: FVarId,
    pub name: Name,
    pub ty: Expr,
}

impl LocalDecl {
    pub fn new(id: FVarId, name: impl Into<Name>, ty: Expr) -> Self {
        LocalDecl { id, name: name.into(), ty }
    }
}

fn bind(is_pi: bool, locals: &[LocalDecl], body: Expr) -> Expr {
    let mut out = body;
    for d in locals.iter().rev() {
        let inner = out.abstract_fvars(&[d.id]);
        out = if is_pi {
            Expr::pi(d.name.clone(), d.ty.clone(), inner)
        } else {
            Expr::lam(d.name.clone(), d.ty.clone(), inner)
        };
    }
    out
}

/// `Π locals, body`, abstracting each local in the binders that follow it.
pub fn mk_pi(locals: &[LocalDecl], body: Expr) -> Expr {
    bind(true, locals, body)
}

/// `λ locals, body`.
pub fn mk_lambda(locals: &[LocalDecl], body: Expr) -> Expr {
    bind(false, locals, body)
}

pub fn fvar_exprs(locals: &[LocalDecl]) -> Vec<Expr> {
    locals.iter().map(|d| Expr::FVar(d.id)).collect()
}
