//! The object language: expressions, declarations, reduction, type
//! inference and inductive families.

mod aux;
pub mod env;
pub mod expr;
pub mod inductive;
pub mod reduce;
pub mod typeck;

pub use aux::{add_auxiliary, AuxNames};
pub use env::{
    ConstructorInfo, CtorArg, DeclKind, Declaration, Environment, InductiveInfo, Infix, Telescope, TelescopeEntry,
    Transparency,
};
pub use expr::{name, Expr, FVarId, LocalDecl, MetaId, Name};
pub use inductive::{add_inductive, ConstructorDecl, InductiveDecl};
pub use reduce::{is_def_eq, whnf};
pub use typeck::{infer_type, TypeChecker};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("loose bound variable #{0}")]
    LooseBVar(u32),
    #[error("unknown local {0}")]
    UnknownFVar(FVarId),
    #[error("unknown metavariable {0}")]
    UnknownMeta(MetaId),
    #[error("type mismatch for {term}: expected {expected}, found {found}")]
    Mismatch { term: Expr, expected: Expr, found: Expr },
    #[error("{msg}: {term}")]
    TypeError { msg: String, term: Expr },
    #[error("`{0}` is already declared")]
    AlreadyDeclared(String),
    #[error("non-positive occurrence in constructor `{0}`")]
    Positivity(String),
    #[error("constructor `{0}` does not use the parameters uniformly")]
    ParameterMismatch(String),
    #[error("nested or mutual occurrence in constructor `{0}`")]
    NestedOrMutual(String),
    #[error("function-typed recursive argument in constructor `{0}` is not supported")]
    UnsupportedRecursion(String),
    #[error("constructor `{0}` does not return its inductive type")]
    BadConstructorType(String),
}

impl KernelError {
    pub fn type_error(msg: &str, term: &Expr) -> Self {
        KernelError::TypeError { msg: msg.to_string(), term: term.clone() }
    }
}

/// Adds an axiom after checking that its type is a type.
pub fn add_axiom(env: &mut Environment, n: Name, ty: Expr) -> Result<(), KernelError> {
    TypeChecker::new(env).ensure_sort(&ty)?;
    env.insert_unchecked(Declaration::axiom(n, ty))
}

/// Adds a definition after checking `value : ty`.
pub fn add_definition(env: &mut Environment, n: Name, ty: Expr, value: Expr, reducible: bool) -> Result<(), KernelError> {
    check_closed(&ty)?;
    check_closed(&value)?;
    let mut tc = TypeChecker::new(env);
    tc.ensure_sort(&ty)?;
    tc.check(&value, &ty)?;
    env.insert_unchecked(Declaration::definition(n, ty, value, reducible))
}

/// Adds a theorem after checking `proof : ty`.
pub fn add_theorem(env: &mut Environment, n: Name, ty: Expr, proof: Expr) -> Result<(), KernelError> {
    check_closed(&ty)?;
    check_closed(&proof)?;
    let mut tc = TypeChecker::new(env);
    tc.ensure_sort(&ty)?;
    tc.check(&proof, &ty)?;
    env.insert_unchecked(Declaration::theorem(n, ty, proof))
}

fn check_closed(e: &Expr) -> Result<(), KernelError> {
    if let Some(m) = e.metas().into_iter().next() {
        return Err(KernelError::UnknownMeta(m));
    }
    if let Some(x) = e.fvars().into_iter().next() {
        return Err(KernelError::UnknownFVar(x));
    }
    if !e.is_locally_closed() {
        return Err(KernelError::LooseBVar(e.loose_bvar_range() - 1));
    }
    Ok(())
}
