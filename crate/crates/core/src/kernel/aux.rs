//! Declarations derived from every inductive family once the prelude is
//! available: the `sizeof` measure, its strictness lemmas, and the
//! no-confusion principle used for injection and conflict.

use super::env::{Environment, InductiveInfo};
use super::expr::{fvar_exprs, mk_lambda, mk_pi, scratch_fvar, Expr, LocalDecl, Name};
use super::inductive::open_telescope;
use super::{add_definition, add_theorem, KernelError};

/// Names of the derived declarations of an inductive family.
pub struct AuxNames;

impl AuxNames {
    pub fn sizeof(ind: &str) -> Name {
        Name::from(format!("{ind}.sizeof"))
    }

    /// `C.sizeof_lt_k` where `k` counts constructor arguments from 1.
    pub fn sizeof_lt(ctor: &str, pos: usize) -> Name {
        Name::from(format!("{ctor}.sizeof_lt_{}", pos + 1))
    }

    pub fn no_confusion_type(ind: &str) -> Name {
        Name::from(format!("{ind}.no_confusion_type"))
    }

    pub fn no_confusion(ind: &str) -> Name {
        Name::from(format!("{ind}.no_confusion"))
    }
}

fn c(n: &str) -> Expr {
    Expr::cnst(n)
}

fn app(f: &str, args: impl IntoIterator<Item = Expr>) -> Expr {
    Expr::mk_app(c(f), args)
}

fn has_all(env: &Environment, names: &[&str]) -> bool {
    names.iter().all(|n| env.contains(n))
}

/// Generates whichever derived declarations are missing and whose
/// prerequisites are present.
pub fn add_auxiliary(env: &mut Environment, ind: &str) -> Result<(), KernelError> {
    let info = env
        .inductive(ind)
        .cloned()
        .ok_or_else(|| KernelError::UnknownConstant(ind.to_string()))?;
    if has_all(env, &["nat", "nat.zero", "nat.succ", "add"]) && !env.contains(&AuxNames::sizeof(ind)) {
        add_sizeof(env, &info)?;
    }
    if has_all(env, &["lt", "le_add_right", "le_add_of_le"]) && env.contains(&AuxNames::sizeof(ind)) {
        for (ci, ctor) in info.ctors.iter().enumerate() {
            for pos in ctor.recursive_positions() {
                if !env.contains(&AuxNames::sizeof_lt(&ctor.name, pos)) {
                    add_sizeof_lt(env, &info, ci, pos)?;
                }
            }
        }
    }
    if has_all(env, &["eq", "eq.refl", "eq.rec", "heq", "heq.refl"])
        && !env.contains(&AuxNames::no_confusion(ind))
    {
        add_no_confusion(env, &info)?;
    }
    Ok(())
}

/// Opens params, indices and a major premise `e : I params indices`.
fn open_family(info: &InductiveInfo) -> (Vec<LocalDecl>, Vec<LocalDecl>, LocalDecl) {
    let params = open_telescope(&info.params, &[]);
    let pexprs = fvar_exprs(&params);
    let indices = open_telescope(&info.indices, &pexprs);
    let major = LocalDecl::new(scratch_fvar(), "e", family_app(info, &pexprs, &fvar_exprs(&indices)));
    (params, indices, major)
}

fn family_app(info: &InductiveInfo, params: &[Expr], indices: &[Expr]) -> Expr {
    Expr::mk_app(Expr::Const(info.name.clone()), params.iter().chain(indices).cloned())
}

/// A constant motive `λ indices e, body` for the family.
fn const_motive(info: &InductiveInfo, params: &[Expr], body: Expr) -> Expr {
    let idx = open_telescope(&info.indices, params);
    let e = LocalDecl::new(scratch_fvar(), "e", family_app(info, params, &fvar_exprs(&idx)));
    let mut bs = idx;
    bs.push(e);
    mk_lambda(&bs, body)
}

/// Opens the arguments of constructor `ci` and one local per recursive
/// argument for the induction hypothesis of a recursor minor premise.
fn open_ctor(
    info: &InductiveInfo,
    ci: usize,
    params: &[Expr],
    ih_ty: &dyn Fn(&Expr, &[Expr]) -> Expr,
) -> (Vec<LocalDecl>, Vec<LocalDecl>, Vec<Expr>, Vec<Expr>) {
    let ctor = &info.ctors[ci];
    let mut scope = params.to_vec();
    let mut args = Vec::new();
    for a in &ctor.args {
        let d = LocalDecl::new(scratch_fvar(), a.name.clone(), a.ty.instantiate(&scope));
        scope.push(Expr::FVar(d.id));
        args.push(d);
    }
    let aexprs = fvar_exprs(&args);
    let (tys, idx) = info.instantiate_ctor(ci, params, &aexprs);
    let ihs = ctor
        .recursive_positions()
        .into_iter()
        .map(|p| {
            let (_, targs) = tys[p].app_parts();
            LocalDecl::new(scratch_fvar(), "ih", ih_ty(&aexprs[p], &targs[info.num_params()..]))
        })
        .collect();
    (args, ihs, tys, idx)
}

fn ctor_app(info: &InductiveInfo, ci: usize, params: &[Expr], args: &[Expr]) -> Expr {
    Expr::mk_app(Expr::Const(info.ctors[ci].name.clone()), params.iter().chain(args).cloned())
}

fn nat() -> Expr {
    c("nat")
}

fn add_sizeof(env: &mut Environment, info: &InductiveInfo) -> Result<(), KernelError> {
    let (params, indices, major) = open_family(info);
    let pexprs = fvar_exprs(&params);
    let motive = const_motive(info, &pexprs, nat());
    let minors = (0..info.ctors.len()).map(|ci| {
        let (args, ihs, _, _) = open_ctor(info, ci, &pexprs, &|_, _| nat());
        let sum = ihs
            .iter()
            .rev()
            .fold(c("nat.zero"), |acc, ih| app("add", [Expr::FVar(ih.id), acc]));
        let mut bs = args;
        bs.extend(ihs);
        mk_lambda(&bs, Expr::app(c("nat.succ"), sum))
    });
    let body = Expr::mk_app(
        Expr::Const(info.rec_name()),
        pexprs
            .iter()
            .cloned()
            .chain(std::iter::once(motive))
            .chain(minors)
            .chain(fvar_exprs(&indices))
            .chain(std::iter::once(Expr::FVar(major.id))),
    );
    let mut bs = params;
    bs.extend(indices);
    bs.push(major);
    add_definition(env, AuxNames::sizeof(&info.name), mk_pi(&bs, nat()), mk_lambda(&bs, body), false)
}

fn sizeof_of(info: &InductiveInfo, params: &[Expr], ty: &Expr, v: &Expr) -> Expr {
    let (_, targs) = ty.app_parts();
    Expr::mk_app(
        Expr::Const(AuxNames::sizeof(&info.name)),
        params.iter().chain(&targs[info.num_params()..]).chain(std::iter::once(v)).cloned(),
    )
}

/// `lt (sizeof aₖ) (sizeof (C a))`, proved from
/// `sizeof (C a) ≡ succ (add s₁ (add s₂ … zero))` over the recursive arguments.
fn add_sizeof_lt(env: &mut Environment, info: &InductiveInfo, ci: usize, pos: usize) -> Result<(), KernelError> {
    let params = open_telescope(&info.params, &[]);
    let pexprs = fvar_exprs(&params);
    let (args, _, tys, idx) = open_ctor(info, ci, &pexprs, &|_, _| nat());
    let aexprs = fvar_exprs(&args);
    let recs = info.ctors[ci].recursive_positions();
    let sizes: Vec<Expr> = recs.iter().map(|&r| sizeof_of(info, &pexprs, &tys[r], &aexprs[r])).collect();
    let tail = |from: usize| {
        sizes[from..]
            .iter()
            .rev()
            .fold(c("nat.zero"), |acc, s| app("add", [s.clone(), acc]))
    };
    let j = recs.iter().position(|&r| r == pos).expect("recursive position");
    let s = sizes[j].clone();
    let mut proof = app("le_add_right", [s.clone(), tail(j + 1)]);
    for i in (0..j).rev() {
        proof = app("le_add_of_le", [s.clone(), tail(i + 1), sizes[i].clone(), proof]);
    }
    let whole = ctor_app(info, ci, &pexprs, &aexprs);
    let whole_ty = family_app(info, &pexprs, &idx);
    let stmt = app("lt", [s, sizeof_of(info, &pexprs, &whole_ty, &whole)]);
    let mut bs = params;
    bs.extend(args);
    add_theorem(
        env,
        AuxNames::sizeof_lt(&info.ctors[ci].name, pos),
        mk_pi(&bs, stmt),
        mk_lambda(&bs, proof),
    )
}

/// Equation types between the fields of two applications of the same
/// constructor. A field whose type mentions earlier fields gets a
/// heterogeneous equation.
fn field_equations(info: &InductiveInfo, ci: usize, tys1: &[Expr], f1: &[Expr], tys2: &[Expr], f2: &[Expr]) -> Vec<Expr> {
    info.ctors[ci]
        .args
        .iter()
        .enumerate()
        .map(|(k, a)| {
            if field_is_dependent(&a.ty, k) {
                app("heq", [tys1[k].clone(), f1[k].clone(), tys2[k].clone(), f2[k].clone()])
            } else {
                app("eq", [tys1[k].clone(), f1[k].clone(), f2[k].clone()])
            }
        })
        .collect()
}

/// Whether the type of constructor argument `k` mentions an earlier argument.
pub fn field_is_dependent(arg_ty: &Expr, k: usize) -> bool {
    (0..k as u32).any(|i| arg_ty.has_loose_bvar(i))
}

fn eq_binders(eqs: Vec<Expr>) -> Vec<LocalDecl> {
    eqs.into_iter().map(|t| LocalDecl::new(scratch_fvar(), "h", t)).collect()
}

fn add_no_confusion(env: &mut Environment, info: &InductiveInfo) -> Result<(), KernelError> {
    let nct_name = AuxNames::no_confusion_type(&info.name);
    let params = open_telescope(&info.params, &[]);
    let pexprs = fvar_exprs(&params);
    let p = LocalDecl::new(scratch_fvar(), "P", Expr::Sort);
    let pv = Expr::FVar(p.id);
    let indices = open_telescope(&info.indices, &pexprs);
    let iexprs = fvar_exprs(&indices);
    let fam = family_app(info, &pexprs, &iexprs);
    let v1 = LocalDecl::new(scratch_fvar(), "v1", fam.clone());
    let v2 = LocalDecl::new(scratch_fvar(), "v2", fam.clone());
    let rec = |motive: Expr, minors: Vec<Expr>, major: Expr| {
        Expr::mk_app(
            Expr::Const(info.rec_name()),
            pexprs
                .iter()
                .cloned()
                .chain(std::iter::once(motive))
                .chain(minors)
                .chain(iexprs.iter().cloned())
                .chain(std::iter::once(major)),
        )
    };

    let outer_minors = (0..info.ctors.len())
        .map(|c1| {
            let (a1, ih1, tys1, _) = open_ctor(info, c1, &pexprs, &|_, _| Expr::Sort);
            let f1 = fvar_exprs(&a1);
            let inner_minors = (0..info.ctors.len())
                .map(|c2| {
                    let (a2, ih2, tys2, _) = open_ctor(info, c2, &pexprs, &|_, _| Expr::Sort);
                    let body = if c1 == c2 {
                        let eqs = eq_binders(field_equations(info, c1, &tys1, &f1, &tys2, &fvar_exprs(&a2)));
                        Expr::arrow(mk_pi(&eqs, pv.clone()), pv.clone())
                    } else {
                        pv.clone()
                    };
                    let mut bs = a2;
                    bs.extend(ih2);
                    mk_lambda(&bs, body)
                })
                .collect();
            let inner = rec(const_motive(info, &pexprs, Expr::Sort), inner_minors, Expr::FVar(v2.id));
            let mut bs = a1;
            bs.extend(ih1);
            mk_lambda(&bs, inner)
        })
        .collect();
    let nct_body = rec(const_motive(info, &pexprs, Expr::Sort), outer_minors, Expr::FVar(v1.id));
    let mut nct_bs = params.clone();
    nct_bs.push(p.clone());
    nct_bs.extend(indices.iter().cloned());
    nct_bs.push(v1.clone());
    nct_bs.push(v2.clone());
    add_definition(env, nct_name.clone(), mk_pi(&nct_bs, Expr::Sort), mk_lambda(&nct_bs, nct_body), false)?;

    let nct = |idx: &[Expr], a: Expr, b: Expr| {
        Expr::mk_app(
            Expr::Const(nct_name.clone()),
            pexprs
                .iter()
                .cloned()
                .chain(std::iter::once(pv.clone()))
                .chain(idx.iter().cloned())
                .chain([a, b]),
        )
    };

    // Diagonal: no_confusion_type P v v, by recursion on v.
    let diag_motive = {
        let idx = open_telescope(&info.indices, &pexprs);
        let ix = fvar_exprs(&idx);
        let e = LocalDecl::new(scratch_fvar(), "e", family_app(info, &pexprs, &ix));
        let ev = Expr::FVar(e.id);
        let body = nct(&ix, ev.clone(), ev);
        let mut bs = idx;
        bs.push(e);
        mk_lambda(&bs, body)
    };
    let diag_minors = (0..info.ctors.len())
        .map(|ci| {
            let ih_ty = |a: &Expr, idx: &[Expr]| {
                Expr::mk_app(diag_motive.clone(), idx.iter().cloned().chain(std::iter::once(a.clone())))
            };
            let (args, ihs, tys, _) = open_ctor(info, ci, &pexprs, &ih_ty);
            let f = fvar_exprs(&args);
            let eqs = eq_binders(field_equations(info, ci, &tys, &f, &tys, &f));
            let k = LocalDecl::new(scratch_fvar(), "k", mk_pi(&eqs, pv.clone()));
            let refls = info.ctors[ci].args.iter().enumerate().map(|(j, a)| {
                if field_is_dependent(&a.ty, j) {
                    app("heq.refl", [tys[j].clone(), f[j].clone()])
                } else {
                    app("eq.refl", [tys[j].clone(), f[j].clone()])
                }
            });
            let body = mk_lambda(std::slice::from_ref(&k), Expr::mk_app(Expr::FVar(k.id), refls));
            let mut bs = args;
            bs.extend(ihs);
            mk_lambda(&bs, body)
        })
        .collect();
    let diag = rec(diag_motive.clone(), diag_minors, Expr::FVar(v1.id));

    let h = LocalDecl::new(scratch_fvar(), "h", app("eq", [fam.clone(), Expr::FVar(v1.id), Expr::FVar(v2.id)]));
    let transport_motive = {
        let b = LocalDecl::new(scratch_fvar(), "b", fam.clone());
        let hb = LocalDecl::new(scratch_fvar(), "h", app("eq", [fam.clone(), Expr::FVar(v1.id), Expr::FVar(b.id)]));
        let body = nct(&iexprs, Expr::FVar(v1.id), Expr::FVar(b.id));
        mk_lambda(&[b, hb], body)
    };
    let proof = app(
        "eq.rec",
        [fam, Expr::FVar(v1.id), transport_motive, diag, Expr::FVar(v2.id), Expr::FVar(h.id)],
    );
    let stmt = nct(&iexprs, Expr::FVar(v1.id), Expr::FVar(v2.id));
    let mut bs = nct_bs;
    bs.push(h);
    add_theorem(env, AuxNames::no_confusion(&info.name), mk_pi(&bs, stmt), mk_lambda(&bs, proof))
}
