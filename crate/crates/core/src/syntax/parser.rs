use super::ast::*;
use super::lexer::{tokenize, Pos, Tok, Token};
use super::ParseError;

const KEYWORDS: &[&str] = &[
    "begin",
    "end",
    "with",
    "fixing",
    "case",
    "inductive",
    "axiom",
    "def",
    "lemma",
    "theorem",
    "name_hints",
    "name_hints_container",
    "infix",
    "open",
    "forall",
    "fun",
];

/// Symbols with a fixed meaning; any other symbol between two terms is a
/// user infix.
const RESERVED: &[&str] = &[
    "(", ")", "{", "}", "[", "]", ",", ":", ":=", "|", "→", "->", "∀", "Π", "λ", "=", "==", "<", ">", "+", "×", "¬",
    "@[", "*", "ℕ",
];

pub struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    i: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    pub fn new(src: &'a str) -> PResult<Self> {
        Ok(Parser { src, toks: tokenize(src)?, i: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::new(self.pos(), msg))
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if x == s)
    }

    fn is_kw(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn expect_kw(&mut self, s: &str) -> PResult<()> {
        if self.is_kw(s) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.err("expected an identifier"),
        }
    }

    fn at_ident(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()))
    }

    pub fn parse_file(&mut self) -> PResult<SourceFile> {
        let mut items = Vec::new();
        while *self.peek() != Tok::Eof {
            items.push(self.item()?);
        }
        Ok(SourceFile { items })
    }

    fn item(&mut self) -> PResult<Item> {
        let at = At(self.pos());
        if self.eat_sym("@[") {
            let attr = self.ident()?;
            if attr != "reducible" {
                return self.err(format!("unknown attribute `{attr}`"));
            }
            self.expect_sym("]")?;
            if !self.is_kw("def") {
                return self.err("expected `def` after `@[reducible]`");
            }
            return self.def(true, at);
        }
        let Tok::Ident(kw) = self.peek().clone() else {
            return self.err("expected a declaration");
        };
        match kw.as_str() {
            "inductive" => {
                self.bump();
                let name = self.ident()?;
                let binders = self.decl_binders()?;
                let ty = if self.eat_sym(":") { Some(self.term()?) } else { None };
                let mut ctors = Vec::new();
                while self.is_sym("|") {
                    let at = At(self.pos());
                    self.bump();
                    let cname = self.ident()?;
                    let cb = self.decl_binders()?;
                    let cty = if self.eat_sym(":") {
                        self.term()?
                    } else {
                        binders.iter().fold(Term::Ident(name.clone(), at), |f, b| {
                            Term::App(Box::new(f), Box::new(Term::Ident(b.name.clone(), at)))
                        })
                    };
                    ctors.push(CtorSyn { name: cname, binders: cb, ty: cty, at });
                }
                Ok(Item::Inductive { name, binders, ty, ctors, at })
            }
            "axiom" => {
                self.bump();
                let name = self.ident()?;
                let binders = self.decl_binders()?;
                self.expect_sym(":")?;
                let ty = self.term()?;
                Ok(Item::Axiom { name, binders, ty, at })
            }
            "def" => self.def(false, at),
            "lemma" | "theorem" => {
                self.bump();
                let name = self.ident()?;
                let binders = self.decl_binders()?;
                self.expect_sym(":")?;
                let ty = self.term()?;
                self.expect_sym(":=")?;
                let proof = if self.is_kw("begin") {
                    self.bump();
                    Proof::Tactics(self.tactic_block()?)
                } else {
                    Proof::Term(self.term()?)
                };
                Ok(Item::Lemma { name, binders, ty, proof, at })
            }
            "name_hints" => {
                self.bump();
                let head = self.ident()?;
                self.expect_sym(":=")?;
                let mut names = Vec::new();
                while self.at_ident() {
                    names.push(self.ident()?);
                }
                Ok(Item::NameHints { head, names, at })
            }
            "name_hints_container" => {
                self.bump();
                let head = self.ident()?;
                self.expect_sym(":=")?;
                let mode = self.ident()?;
                if mode != "pluralize" {
                    return self.err("expected `pluralize`");
                }
                Ok(Item::NameHintsContainer { head, at })
            }
            "infix" => {
                self.bump();
                let symbol = match self.bump().tok {
                    Tok::Sym(s) | Tok::Ident(s) => s,
                    _ => return self.err("expected an infix symbol"),
                };
                self.expect_sym(":=")?;
                let constant = self.ident()?;
                Ok(Item::Infix { symbol, constant, at })
            }
            "open" => {
                self.bump();
                let namespace = self.ident()?;
                Ok(Item::Open { namespace, at })
            }
            _ => self.err(format!("unexpected `{kw}`")),
        }
    }

    fn def(&mut self, reducible: bool, at: At) -> PResult<Item> {
        self.expect_kw("def")?;
        let name = self.ident()?;
        let binders = self.decl_binders()?;
        self.expect_sym(":")?;
        let ty = self.term()?;
        self.expect_sym(":=")?;
        let value = self.term()?;
        Ok(Item::Def { name, binders, ty, value, reducible, at })
    }

    /// `(x y : A) {z : B} …` before the colon of a declaration.
    fn decl_binders(&mut self) -> PResult<Vec<Binder>> {
        let mut out = Vec::new();
        while self.is_sym("(") || self.is_sym("{") {
            out.extend(self.bracket_binder()?);
        }
        Ok(out)
    }

    fn bracket_binder(&mut self) -> PResult<Vec<Binder>> {
        let close = if self.eat_sym("(") {
            ")"
        } else {
            self.expect_sym("{")?;
            "}"
        };
        let mut names = Vec::new();
        while self.at_ident() {
            names.push(self.ident()?);
        }
        if names.is_empty() {
            return self.err("expected binder names");
        }
        self.expect_sym(":")?;
        let ty = self.term()?;
        self.expect_sym(close)?;
        Ok(names.into_iter().map(|name| Binder { name, ty: Some(ty.clone()) }).collect())
    }

    /// Binders of `∀`/`λ` up to and including the comma.
    fn quantifier_binders(&mut self) -> PResult<Vec<Binder>> {
        let mut out = Vec::new();
        loop {
            if self.is_sym("(") || self.is_sym("{") {
                out.extend(self.bracket_binder()?);
            } else if self.at_ident() {
                let mut names = Vec::new();
                while self.at_ident() {
                    names.push(self.ident()?);
                }
                let ty = if self.eat_sym(":") { Some(self.term()?) } else { None };
                out.extend(names.into_iter().map(|name| Binder { name, ty: ty.clone() }));
                if ty.is_some() {
                    break;
                }
            } else {
                break;
            }
        }
        if out.is_empty() {
            return self.err("expected binders");
        }
        self.expect_sym(",")?;
        Ok(out)
    }

    pub fn term(&mut self) -> PResult<Term> {
        if self.is_sym("∀") || self.is_sym("Π") || self.is_kw("forall") {
            self.bump();
            let bs = self.quantifier_binders()?;
            return Ok(Term::Pi(bs, Box::new(self.term()?)));
        }
        if self.is_sym("λ") || self.is_kw("fun") {
            self.bump();
            let bs = self.quantifier_binders()?;
            return Ok(Term::Lam(bs, Box::new(self.term()?)));
        }
        let lhs = self.prod()?;
        if self.eat_sym("→") || self.eat_sym("->") {
            return Ok(Term::Arrow(Box::new(lhs), Box::new(self.term()?)));
        }
        Ok(lhs)
    }

    fn prod(&mut self) -> PResult<Term> {
        let lhs = self.rel()?;
        if self.eat_sym("×") {
            let rhs = self.prod()?;
            return Ok(Term::Op(BinOp::Prod, "×".into(), Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn user_infix(&self) -> Option<String> {
        match self.peek() {
            Tok::Sym(s) if !RESERVED.contains(&s.as_str()) => Some(s.clone()),
            _ => None,
        }
    }

    fn rel(&mut self) -> PResult<Term> {
        if self.eat_sym("¬") {
            return Ok(Term::Not(Box::new(self.rel()?)));
        }
        let lhs = self.sum()?;
        let op = match self.peek() {
            Tok::Sym(s) if s == "=" => Some((BinOp::Eq, s.clone())),
            Tok::Sym(s) if s == "==" => Some((BinOp::HEq, s.clone())),
            Tok::Sym(s) if s == "<" => Some((BinOp::Lt, s.clone())),
            Tok::Sym(s) if s == ">" => Some((BinOp::Gt, s.clone())),
            _ => self.user_infix().map(|s| (BinOp::User, s)),
        };
        match op {
            Some((op, sym)) => {
                self.bump();
                let rhs = self.sum()?;
                Ok(Term::Op(op, sym, Box::new(lhs), Box::new(rhs)))
            }
            None => Ok(lhs),
        }
    }

    fn sum(&mut self) -> PResult<Term> {
        let mut lhs = self.app()?;
        while self.eat_sym("+") {
            let rhs = self.app()?;
            lhs = Term::Op(BinOp::Add, "+".into(), Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !KEYWORDS.contains(&s.as_str()),
            Tok::Num(_) => true,
            Tok::Sym(s) => s == "(" || s == "ℕ",
            Tok::Eof => false,
        }
    }

    fn app(&mut self) -> PResult<Term> {
        let mut f = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            f = Term::App(Box::new(f), Box::new(a));
        }
        Ok(f)
    }

    fn atom(&mut self) -> PResult<Term> {
        let at = At(self.pos());
        match self.peek().clone() {
            Tok::Ident(s) if s == "Type" || s == "Sort" || s == "Prop" => {
                self.bump();
                Ok(Term::Sort)
            }
            Tok::Ident(_) => Ok(Term::Ident(self.ident()?, at)),
            Tok::Num(n) => {
                self.bump();
                Ok(Term::Num(n, at))
            }
            Tok::Sym(s) if s == "ℕ" => {
                self.bump();
                Ok(Term::Nat)
            }
            Tok::Sym(s) if s == "(" => {
                self.bump();
                let first = self.term()?;
                let mut parts = vec![first];
                while self.eat_sym(",") {
                    parts.push(self.term()?);
                }
                self.expect_sym(")")?;
                let last = parts.pop().expect("nonempty");
                Ok(parts.into_iter().rev().fold(last, |acc, p| Term::Pair(Box::new(p), Box::new(acc))))
            }
            _ => self.err("expected a term"),
        }
    }

    fn tactic_block(&mut self) -> PResult<Vec<TacticSyn>> {
        let mut out = Vec::new();
        if self.is_kw("end") {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(self.tactic()?);
            if self.eat_sym(",") {
                continue;
            }
            self.expect_kw("end")?;
            return Ok(out);
        }
    }

    fn names_until_stop(&mut self) -> PResult<Vec<String>> {
        let mut out = Vec::new();
        while self.at_ident() {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    pub fn tactic(&mut self) -> PResult<TacticSyn> {
        let at = At(self.pos());
        let start = self.toks[self.i].start;
        let Tok::Ident(name) = self.peek().clone() else {
            return self.err("expected a tactic");
        };
        self.bump();
        let tactic = match name.as_str() {
            "intro" => Tactic::Intro(self.names_until_stop()?),
            "intros" => Tactic::Intros(self.names_until_stop()?),
            "exact" => Tactic::Exact(self.term()?),
            "apply" => Tactic::Apply(self.term()?),
            "clear" => Tactic::Clear(self.names_until_stop()?),
            "revert" => Tactic::Revert(self.names_until_stop()?),
            "rename" => {
                let a = self.ident()?;
                self.eat_sym("→");
                self.eat_sym("->");
                Tactic::Rename(a, self.ident()?)
            }
            "have" => {
                let h = self.ident()?;
                self.expect_sym(":")?;
                let ty = self.term()?;
                self.expect_sym(":=")?;
                Tactic::Have(h, ty, self.term()?)
            }
            "induction'" | "cases'" => {
                let hyp = self.ident()?;
                let mut fixing = Fixing::Nothing;
                if self.is_kw("fixing") {
                    self.bump();
                    fixing = if self.eat_sym("*") { Fixing::All } else { Fixing::Some(self.names_until_stop()?) };
                }
                let mut with = Vec::new();
                if self.is_kw("with") {
                    self.bump();
                    loop {
                        self.expect_kw("case")?;
                        let ctor = self.ident()?;
                        self.expect_sym(":")?;
                        let names = self
                            .names_until_stop()?
                            .into_iter()
                            .map(|n| if n == "_" { None } else { Some(n) })
                            .collect();
                        with.push(CaseNames { ctor, names });
                        if !self.eat_sym("|") {
                            break;
                        }
                    }
                }
                Tactic::Induction { hyp, cases: name == "cases'", fixing, with }
            }
            other => return Err(ParseError::new(at.0, format!("unknown tactic `{other}`"))),
        };
        let end = self.toks[self.i.saturating_sub(1)].end;
        Ok(TacticSyn { tactic, text: self.src[start..end.max(start)].to_string(), at })
    }

    pub fn expect_eof(&self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.err("unexpected input")
        }
    }
}

pub fn parse_file(src: &str) -> PResult<SourceFile> {
    Parser::new(src)?.parse_file()
}

pub fn parse_term(src: &str) -> PResult<Term> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_tactic(src: &str) -> PResult<TacticSyn> {
    let mut p = Parser::new(src)?;
    let t = p.tactic()?;
    p.expect_eof()?;
    Ok(t)
}
