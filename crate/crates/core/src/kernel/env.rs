use std::collections::HashMap;
use std::sync::Arc;

use indexmap::IndexMap;

use super::expr::{Expr, Name};
use super::KernelError;
use crate::naming::NameHintRegistry;

/// Unfolding policy for definitional equality and weak head normalisation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Transparency {
    Reducible,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeclKind {
    Axiom,
    Definition,
    Theorem,
    Inductive,
    Constructor,
    Recursor,
}

#[derive(Clone, Debug)]
pub struct Declaration {
    pub name: Name,
    pub ty: Expr,
    pub value: Option<Expr>,
    /// Definitions marked reducible unfold at every transparency.
    pub reducible: bool,
    pub kind: DeclKind,
}

impl Declaration {
    pub fn axiom(name: Name, ty: Expr) -> Self {
        Declaration { name, ty, value: None, reducible: false, kind: DeclKind::Axiom }
    }

    pub fn definition(name: Name, ty: Expr, value: Expr, reducible: bool) -> Self {
        Declaration { name, ty, value: Some(value), reducible, kind: DeclKind::Definition }
    }

    pub fn theorem(name: Name, ty: Expr, value: Expr) -> Self {
        Declaration { name, ty, value: Some(value), reducible: false, kind: DeclKind::Theorem }
    }

    /// Whether delta reduction may unfold this declaration at `t`.
    pub fn unfolds_at(&self, t: Transparency) -> bool {
        match (&self.value, self.kind) {
            (Some(_), DeclKind::Definition) => self.reducible || t == Transparency::All,
            _ => false,
        }
    }
}

/// One entry of a telescope. Types refer to earlier entries by `BVar`.
#[derive(Clone, Debug)]
pub struct TelescopeEntry {
    pub name: Name,
    pub ty: Expr,
    /// The binder name was written by the user (as opposed to an arrow).
    pub explicit_name: bool,
}

pub type Telescope = Vec<TelescopeEntry>;

#[derive(Clone, Debug)]
pub struct CtorArg {
    pub name: Name,
    /// Under binders for the parameters and the earlier arguments.
    pub ty: Expr,
    pub explicit_name: bool,
    pub recursive: bool,
}

#[derive(Clone, Debug)]
pub struct ConstructorInfo {
    pub name: Name,
    pub args: Vec<CtorArg>,
    /// Index expressions of the return type, under parameter and argument binders.
    pub index_insts: Vec<Expr>,
}

impl ConstructorInfo {
    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn recursive_positions(&self) -> Vec<usize> {
        self.args.iter().enumerate().filter(|(_, a)| a.recursive).map(|(i, _)| i).collect()
    }

    /// Short name (the part after the inductive's namespace).
    pub fn short_name(&self) -> &str {
        self.name.rsplit('.').next().unwrap_or(&self.name)
    }
}

/// A validated inductive family.
#[derive(Clone, Debug)]
pub struct InductiveInfo {
    pub name: Name,
    pub params: Telescope,
    pub indices: Telescope,
    pub ctors: Vec<ConstructorInfo>,
}

impl InductiveInfo {
    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn num_indices(&self) -> usize {
        self.indices.len()
    }

    pub fn rec_name(&self) -> Name {
        Name::from(format!("{}.rec", self.name))
    }

    pub fn ctor(&self, name: &str) -> Option<(usize, &ConstructorInfo)> {
        self.ctors.iter().enumerate().find(|(_, c)| &*c.name == name)
    }

    /// Argument types and index instantiations of a constructor, with the
    /// parameters and arguments replaced by the given values.
    pub fn instantiate_ctor(&self, ctor: usize, params: &[Expr], args: &[Expr]) -> (Vec<Expr>, Vec<Expr>) {
        let c = &self.ctors[ctor];
        let mut env: Vec<Expr> = params.to_vec();
        let mut tys = Vec::with_capacity(c.args.len());
        for (i, a) in c.args.iter().enumerate() {
            tys.push(a.ty.instantiate(&env));
            if i < args.len() {
                env.push(args[i].clone());
            }
        }
        let idx = if args.len() == c.args.len() {
            c.index_insts.iter().map(|j| j.instantiate(&env)).collect()
        } else {
            Vec::new()
        };
        (tys, idx)
    }

    /// Types of the index binders given parameter values and earlier indices.
    pub fn index_types(&self, params: &[Expr], indices: &[Expr]) -> Vec<Expr> {
        let mut env: Vec<Expr> = params.to_vec();
        let mut out = Vec::new();
        for (i, e) in self.indices.iter().enumerate() {
            out.push(e.ty.instantiate(&env));
            if i < indices.len() {
                env.push(indices[i].clone());
            }
        }
        out
    }
}

/// Infix display notation registered by the `infix` pragma.
#[derive(Clone, Debug)]
pub struct Infix {
    pub symbol: String,
    pub constant: Name,
}

/// The global declaration environment. It only ever grows; sharing is done
/// by cloning the (cheap, `Arc`-backed) value.
#[derive(Clone, Debug, Default)]
pub struct Environment {
    decls: IndexMap<Name, Arc<Declaration>>,
    inductives: HashMap<Name, Arc<InductiveInfo>>,
    ctor_of: HashMap<Name, (Name, usize)>,
    rec_of: HashMap<Name, Name>,
    pub opened: Vec<Name>,
    pub hints: NameHintRegistry,
    pub infixes: Vec<Infix>,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, n: &str) -> Option<&Declaration> {
        self.decls.get(n).map(|d| &**d)
    }

    pub fn contains(&self, n: &str) -> bool {
        self.decls.contains_key(n)
    }

    pub fn decls(&self) -> impl Iterator<Item = &Declaration> {
        self.decls.values().map(|d| &**d)
    }

    pub fn inductive(&self, n: &str) -> Option<&InductiveInfo> {
        self.inductives.get(n).map(|i| &**i)
    }

    pub fn inductives(&self) -> impl Iterator<Item = &InductiveInfo> {
        self.decls.keys().filter_map(|k| self.inductive(k))
    }

    /// The inductive family and constructor position of a constructor name.
    pub fn constructor(&self, n: &str) -> Option<(&InductiveInfo, usize)> {
        let (ind, idx) = self.ctor_of.get(n)?;
        Some((self.inductive(ind)?, *idx))
    }

    pub fn is_constructor(&self, n: &str) -> bool {
        self.ctor_of.contains_key(n)
    }

    pub fn recursor_of(&self, n: &str) -> Option<&InductiveInfo> {
        self.rec_of.get(n).and_then(|i| self.inductive(i))
    }

    /// Adds a declaration without checking it; callers go through the
    /// checked entry points in `kernel`.
    pub(crate) fn insert_unchecked(&mut self, d: Declaration) -> Result<(), KernelError> {
        if self.decls.contains_key(&d.name) {
            return Err(KernelError::AlreadyDeclared(d.name.to_string()));
        }
        self.decls.insert(d.name.clone(), Arc::new(d));
        Ok(())
    }

    pub(crate) fn register_inductive(&mut self, info: InductiveInfo) {
        for (i, c) in info.ctors.iter().enumerate() {
            self.ctor_of.insert(c.name.clone(), (info.name.clone(), i));
        }
        self.rec_of.insert(info.rec_name(), info.name.clone());
        self.inductives.insert(info.name.clone(), Arc::new(info));
    }

    pub fn open_namespace(&mut self, ns: &str) {
        let n = Name::from(ns);
        if !self.opened.contains(&n) {
            self.opened.push(n);
        }
    }

    /// Resolves a user-written identifier to a declared constant.
    pub fn resolve(&self, ident: &str) -> Option<Name> {
        if let Some((k, _)) = self.decls.get_key_value(ident) {
            return Some(k.clone());
        }
        for ns in self.opened.iter().rev() {
            let full = format!("{ns}.{ident}");
            if let Some((k, _)) = self.decls.get_key_value(full.as_str()) {
                return Some(k.clone());
            }
        }
        None
    }

    /// Shortest name under which `full` resolves back to itself.
    pub fn short_name<'a>(&self, full: &'a str) -> &'a str {
        for ns in &self.opened {
            if let Some(rest) = full.strip_prefix(&**ns).and_then(|r| r.strip_prefix('.')) {
                if self.resolve(rest).as_deref() == Some(full) {
                    return rest;
                }
            }
        }
        full
    }

    pub fn infix_for(&self, c: &str) -> Option<&Infix> {
        self.infixes.iter().rev().find(|i| &*i.constant == c)
    }
}
