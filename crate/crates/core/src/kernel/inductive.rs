//! Validation of inductive declarations and recursor generation.

use super::env::{
    ConstructorInfo, CtorArg, DeclKind, Declaration, Environment, InductiveInfo, Telescope, TelescopeEntry,
};
use super::expr::{fvar_exprs, mk_pi, name, scratch_fvar, Expr, FVarId, LocalDecl, Name};
use super::typeck::TypeChecker;
use super::KernelError;

/// An inductive declaration as written by the user.
#[derive(Clone, Debug)]
pub struct InductiveDecl {
    pub name: Name,
    pub params: Telescope,
    pub indices: Telescope,
    pub ctors: Vec<ConstructorDecl>,
}

#[derive(Clone, Debug)]
pub struct ConstructorDecl {
    /// Fully qualified name (`family.ctor`).
    pub name: Name,
    /// Constructor type without the parameters; parameters are the loose
    /// bound variables.
    pub ty: Expr,
    /// Per argument: was the binder name written by the user?
    pub explicit_names: Vec<bool>,
}

/// Opens a telescope into fresh locals, instantiating each type with the
/// locals opened so far (after `prefix`).
pub fn open_telescope(tele: &Telescope, prefix: &[Expr]) -> Vec<LocalDecl> {
    let mut env: Vec<Expr> = prefix.to_vec();
    let mut out = Vec::new();
    for e in tele {
        let d = LocalDecl::new(scratch_fvar(), e.name.clone(), e.ty.instantiate(&env));
        env.push(Expr::FVar(d.id));
        out.push(d);
    }
    out
}

/// Splits `Π x₁ … xₙ, body` into fresh locals and the body.
pub fn open_pis(ty: &Expr, max: Option<usize>) -> (Vec<LocalDecl>, Expr) {
    let mut locals = Vec::new();
    let mut cur = ty.clone();
    while let Expr::Pi(n, dom, body) = &cur {
        if max.is_some_and(|m| locals.len() >= m) {
            break;
        }
        let d = LocalDecl::new(scratch_fvar(), n.clone(), (**dom).clone());
        let next = body.instantiate1(&Expr::FVar(d.id));
        locals.push(d);
        cur = next;
    }
    (locals, cur)
}

fn telescope_pi(tele: &Telescope, body: Expr) -> Expr {
    tele.iter()
        .rev()
        .fold(body, |acc, e| Expr::pi(e.name.clone(), e.ty.clone(), acc))
}

impl InductiveDecl {
    /// `Π params indices, Sort`.
    pub fn family_type(&self) -> Expr {
        telescope_pi(&self.params, telescope_pi(&self.indices, Expr::Sort))
    }
}

fn is_params(args: &[Expr], params: &[LocalDecl]) -> bool {
    args.len() >= params.len() && args.iter().zip(params).all(|(a, p)| a.as_fvar() == Some(p.id))
}

/// Checks the declaration and computes the validated family description.
pub fn validate_inductive(env: &Environment, decl: &InductiveDecl) -> Result<InductiveInfo, KernelError> {
    let iname = decl.name.clone();
    if env.contains(&iname) {
        return Err(KernelError::AlreadyDeclared(iname.to_string()));
    }
    let np = decl.params.len();
    let ni = decl.indices.len();
    let mut tmp = env.clone();
    {
        let mut tc = TypeChecker::new(env);
        tc.ensure_sort(&decl.family_type())?;
    }
    tmp.insert_unchecked(Declaration::axiom(iname.clone(), decl.family_type()))?;

    let params = open_telescope(&decl.params, &[]);
    let pexprs = fvar_exprs(&params);
    let mut ctors = Vec::new();
    for c in &decl.ctors {
        let full = telescope_pi(&decl.params, c.ty.clone());
        TypeChecker::new(&tmp).ensure_sort(&full)?;
        let ty = c.ty.instantiate(&pexprs);
        let (args, concl) = open_pis(&ty, None);
        let mut cargs = Vec::new();
        let mut scope: Vec<FVarId> = params.iter().map(|p| p.id).collect();
        for (k, a) in args.iter().enumerate() {
            let recursive = classify_arg(&iname, &a.ty, &params, ni, &c.name)?;
            cargs.push(CtorArg {
                name: a.name.clone(),
                ty: a.ty.abstract_fvars(&scope),
                explicit_name: c.explicit_names.get(k).copied().unwrap_or(false),
                recursive,
            });
            scope.push(a.id);
        }
        let (head, cargs_concl) = concl.app_parts();
        if head.as_const() != Some(&iname) || cargs_concl.len() != np + ni {
            return Err(KernelError::BadConstructorType(c.name.to_string()));
        }
        if !is_params(&cargs_concl, &params) {
            return Err(KernelError::ParameterMismatch(c.name.to_string()));
        }
        let index_insts: Vec<Expr> = cargs_concl[np..]
            .iter()
            .map(|j| {
                if j.has_const(&iname) {
                    Err(KernelError::NestedOrMutual(c.name.to_string()))
                } else {
                    Ok(j.abstract_fvars(&scope))
                }
            })
            .collect::<Result<_, _>>()?;
        ctors.push(ConstructorInfo { name: c.name.clone(), args: cargs, index_insts });
    }
    Ok(InductiveInfo { name: iname, params: decl.params.clone(), indices: decl.indices.clone(), ctors })
}

/// Decides whether a constructor argument is recursive, rejecting negative,
/// nested and function-guarded occurrences.
fn classify_arg(
    iname: &Name,
    ty: &Expr,
    params: &[LocalDecl],
    ni: usize,
    ctor: &Name,
) -> Result<bool, KernelError> {
    if !ty.has_const(iname) {
        return Ok(false);
    }
    match ty {
        Expr::Pi(_, dom, _) => {
            if dom.has_const(iname) {
                Err(KernelError::Positivity(ctor.to_string()))
            } else {
                Err(KernelError::UnsupportedRecursion(ctor.to_string()))
            }
        }
        _ => {
            let (head, args) = ty.app_parts();
            if head.as_const() != Some(iname) {
                return Err(KernelError::NestedOrMutual(ctor.to_string()));
            }
            if args.len() != params.len() + ni || !is_params(&args, params) {
                return Err(KernelError::ParameterMismatch(ctor.to_string()));
            }
            if args[params.len()..].iter().any(|a| a.has_const(iname)) {
                return Err(KernelError::NestedOrMutual(ctor.to_string()));
            }
            Ok(true)
        }
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// The type of the dependent recursor:
/// params, motive, one minor premise per constructor, indices, major premise.
pub fn recursor_type(info: &InductiveInfo) -> Expr {
    let params = open_telescope(&info.params, &[]);
    let pexprs = fvar_exprs(&params);
    let family = |idx: &[Expr]| {
        Expr::mk_app(Expr::Const(info.name.clone()), pexprs.iter().cloned().chain(idx.iter().cloned()))
    };

    let m_indices = open_telescope(&info.indices, &pexprs);
    let m_major = LocalDecl::new(scratch_fvar(), "e", family(&fvar_exprs(&m_indices)));
    let mut m_binders = m_indices.clone();
    m_binders.push(m_major);
    let motive = LocalDecl::new(scratch_fvar(), "M", mk_pi(&m_binders, Expr::Sort));
    let m = Expr::FVar(motive.id);

    let mut minors = Vec::new();
    for (ci, c) in info.ctors.iter().enumerate() {
        let mut args: Vec<LocalDecl> = Vec::new();
        let mut scope = pexprs.clone();
        for a in &c.args {
            let d = LocalDecl::new(scratch_fvar(), a.name.clone(), a.ty.instantiate(&scope));
            scope.push(Expr::FVar(d.id));
            args.push(d);
        }
        let aexprs = fvar_exprs(&args);
        let (tys, idx) = info.instantiate_ctor(ci, &pexprs, &aexprs);
        let mut ihs = Vec::new();
        for pos in c.recursive_positions() {
            let (_, targs) = tys[pos].app_parts();
            let ih_ty = Expr::mk_app(
                m.clone(),
                targs[info.num_params()..].iter().cloned().chain(std::iter::once(aexprs[pos].clone())),
            );
            ihs.push(LocalDecl::new(scratch_fvar(), "ih", ih_ty));
        }
        let ctor_app = Expr::mk_app(Expr::Const(c.name.clone()), pexprs.iter().cloned().chain(aexprs));
        let concl = Expr::mk_app(m.clone(), idx.into_iter().chain(std::iter::once(ctor_app)));
        let mut binders = args;
        binders.extend(ihs);
        minors.push(LocalDecl::new(scratch_fvar(), capitalize(c.short_name()).as_str(), mk_pi(&binders, concl)));
    }

    let indices = open_telescope(&info.indices, &pexprs);
    let iexprs = fvar_exprs(&indices);
    let major = LocalDecl::new(scratch_fvar(), "e", family(&iexprs));
    let concl = Expr::mk_app(m, iexprs.into_iter().chain(std::iter::once(Expr::FVar(major.id))));

    let mut all = params;
    all.push(motive);
    all.extend(minors);
    all.extend(indices);
    all.push(major);
    mk_pi(&all, concl)
}

/// Type of a constructor including the parameters.
pub fn constructor_type(info: &InductiveInfo, ctor: usize) -> Expr {
    let c = &info.ctors[ctor];
    let params = info.params.len();
    let mut body = Expr::mk_app(
        Expr::Const(info.name.clone()),
        (0..params)
            .map(|i| Expr::BVar((c.args.len() + params - 1 - i) as u32))
            .chain(c.index_insts.iter().cloned()),
    );
    for a in c.args.iter().rev() {
        body = Expr::pi(a.name.clone(), a.ty.clone(), body);
    }
    telescope_pi(&info.params, body)
}

/// Validates the declaration and adds the family, its constructors and its
/// recursor to the environment.
pub fn add_inductive(env: &mut Environment, decl: &InductiveDecl) -> Result<(), KernelError> {
    let info = validate_inductive(env, decl)?;
    let mut next = env.clone();
    next.insert_unchecked(Declaration {
        name: info.name.clone(),
        ty: decl.family_type(),
        value: None,
        reducible: false,
        kind: DeclKind::Inductive,
    })?;
    for (i, c) in info.ctors.iter().enumerate() {
        next.insert_unchecked(Declaration {
            name: c.name.clone(),
            ty: constructor_type(&info, i),
            value: None,
            reducible: false,
            kind: DeclKind::Constructor,
        })?;
    }
    let rec_ty = recursor_type(&info);
    TypeChecker::new(&next).ensure_sort(&rec_ty)?;
    next.insert_unchecked(Declaration {
        name: info.rec_name(),
        ty: rec_ty,
        value: None,
        reducible: false,
        kind: DeclKind::Recursor,
    })?;
    next.register_inductive(info);
    *env = next;
    Ok(())
}

/// Helper for building declarations in code: a telescope entry.
pub fn entry(n: &str, ty: Expr, explicit: bool) -> TelescopeEntry {
    TelescopeEntry { name: name(n), ty, explicit_name: explicit }
}
