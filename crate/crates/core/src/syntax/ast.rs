//! Surface syntax trees, before elaboration.

use super::lexer::Pos;

/// A source position that does not take part in equality, so trees parsed
/// from differently formatted text compare equal.
#[derive(Clone, Copy, Debug, Default)]
pub struct At(pub Pos);

impl PartialEq for At {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Eq,
    HEq,
    Add,
    Lt,
    Gt,
    Prod,
    /// A user infix registered with the `infix` pragma.
    User,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Ident(String, At),
    Num(u64, At),
    Sort,
    Nat,
    App(Box<Term>, Box<Term>),
    Pi(Vec<Binder>, Box<Term>),
    Lam(Vec<Binder>, Box<Term>),
    Arrow(Box<Term>, Box<Term>),
    Not(Box<Term>),
    /// Binary notation; for `User` the symbol is kept.
    Op(BinOp, String, Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Binder {
    pub name: String,
    pub ty: Option<Term>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CtorSyn {
    pub name: String,
    pub binders: Vec<Binder>,
    pub ty: Term,
    pub at: At,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Fixing {
    Nothing,
    All,
    Some(Vec<String>),
}

/// User-supplied names for one case; `None` stands for `_`.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseNames {
    pub ctor: String,
    pub names: Vec<Option<String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Tactic {
    Intro(Vec<String>),
    Intros(Vec<String>),
    Exact(Term),
    Apply(Term),
    Clear(Vec<String>),
    Rename(String, String),
    Have(String, Term, Term),
    Revert(Vec<String>),
    Induction { hyp: String, cases: bool, fixing: Fixing, with: Vec<CaseNames> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TacticSyn {
    pub tactic: Tactic,
    /// The tactic as written.
    pub text: String,
    pub at: At,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Proof {
    Term(Term),
    Tactics(Vec<TacticSyn>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Inductive { name: String, binders: Vec<Binder>, ty: Option<Term>, ctors: Vec<CtorSyn>, at: At },
    Axiom { name: String, binders: Vec<Binder>, ty: Term, at: At },
    Def { name: String, binders: Vec<Binder>, ty: Term, value: Term, reducible: bool, at: At },
    Lemma { name: String, binders: Vec<Binder>, ty: Term, proof: Proof, at: At },
    NameHints { head: String, names: Vec<String>, at: At },
    NameHintsContainer { head: String, at: At },
    Infix { symbol: String, constant: String, at: At },
    Open { namespace: String, at: At },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SourceFile {
    pub items: Vec<Item>,
}
