//! Printing expressions back to surface syntax.
//!
//! Display mode is what goals show: short names, notation, binders without
//! types. Source mode is fully explicit and re-parses to the same term.

use std::collections::{HashMap, HashSet};

use crate::kernel::{Environment, Expr, FVarId};

const ATOM: u32 = 1024;
const APP: u32 = 1000;
const ADD: u32 = 65;
const REL: u32 = 50;
const PROD: u32 = 35;
const ARROW: u32 = 25;
const BINDER: u32 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Display,
    Source,
}

pub struct Printer<'a> {
    env: &'a Environment,
    names: HashMap<FVarId, String>,
    mode: Mode,
}

fn paren(s: String, p: u32, min: u32) -> String {
    if p < min {
        format!("({s})")
    } else {
        s
    }
}

/// Indices (relative to `e`'s root) of loose bound variables.
fn loose_bvars(e: &Expr, depth: u32, out: &mut HashSet<u32>) {
    match e {
        Expr::BVar(i) if *i >= depth => {
            out.insert(i - depth);
        }
        Expr::App(f, a) => {
            loose_bvars(f, depth, out);
            loose_bvars(a, depth, out);
        }
        Expr::Lam(_, t, b) | Expr::Pi(_, t, b) => {
            loose_bvars(t, depth, out);
            loose_bvars(b, depth + 1, out);
        }
        _ => {}
    }
}

impl<'a> Printer<'a> {
    pub fn new(env: &'a Environment, mode: Mode) -> Self {
        Printer { env, names: HashMap::new(), mode }
    }

    pub fn with_names(env: &'a Environment, mode: Mode, names: HashMap<FVarId, String>) -> Self {
        Printer { env, names, mode }
    }

    pub fn expr(&self, e: &Expr) -> String {
        self.pp(e, &mut Vec::new()).0
    }

    fn const_name(&self, c: &str) -> String {
        match self.mode {
            Mode::Source => c.to_string(),
            Mode::Display => match c {
                "nat" => "ℕ".to_string(),
                "nat.zero" => "0".to_string(),
                _ => self.env.short_name(c).to_string(),
            },
        }
    }

    fn fvar_name(&self, id: FVarId) -> String {
        self.names.get(&id).cloned().unwrap_or_else(|| format!("_x{}", id.0))
    }

    /// Names a binder so that it does not capture anything its body refers to.
    fn binder_name(&self, hint: &str, body: &Expr, bound: &[String]) -> String {
        let mut used: HashSet<String> = HashSet::new();
        let mut loose = HashSet::new();
        loose_bvars(body, 0, &mut loose);
        let uses_self = loose.contains(&0);
        for i in loose {
            if i >= 1 && (i as usize) <= bound.len() {
                used.insert(bound[bound.len() - i as usize].clone());
            }
        }
        body.for_each(&mut |s| match s {
            Expr::FVar(id) => {
                used.insert(self.fvar_name(*id));
            }
            Expr::Const(c) => {
                used.insert(self.const_name(c));
            }
            _ => {}
        });
        let mut n = if hint == "_" && uses_self { "x".to_string() } else { hint.to_string() };
        if n == "_" {
            return n;
        }
        while used.contains(&n) {
            n.push('\'');
        }
        n
    }

    fn notation(&self, head: &str, args: &[Expr], bound: &mut Vec<String>) -> Option<(String, u32)> {
        let bin = |p: &Self, sym: &str, a: &Expr, b: &Expr, lp: u32, rp: u32, prec: u32, bound: &mut Vec<String>| {
            let l = p.pp_at(a, lp, bound);
            let r = p.pp_at(b, rp, bound);
            (format!("{l} {sym} {r}"), prec)
        };
        match (head, args.len()) {
            ("eq", 3) => Some(bin(self, "=", &args[1], &args[2], REL + 1, REL + 1, REL, bound)),
            ("heq", 4) => Some(bin(self, "==", &args[1], &args[3], REL + 1, REL + 1, REL, bound)),
            ("add", 2) => Some(bin(self, "+", &args[0], &args[1], ADD, ADD + 1, ADD, bound)),
            ("lt", 2) => Some(bin(self, "<", &args[0], &args[1], REL + 1, REL + 1, REL, bound)),
            ("prod", 2) => Some(bin(self, "×", &args[0], &args[1], PROD + 1, PROD, PROD, bound)),
            ("prod.mk", 4) => {
                let a = self.pp_at(&args[2], BINDER, bound);
                let b = self.pp_at(&args[3], BINDER, bound);
                Some((format!("({a}, {b})"), ATOM))
            }
            (c, 2) => {
                let sym = self.env.infix_for(c)?.symbol.clone();
                Some(bin(self, &sym, &args[0], &args[1], REL + 1, REL + 1, REL, bound))
            }
            _ => None,
        }
    }

    fn pp_at(&self, e: &Expr, min: u32, bound: &mut Vec<String>) -> String {
        let (s, p) = self.pp(e, bound);
        paren(s, p, min)
    }

    fn pp(&self, e: &Expr, bound: &mut Vec<String>) -> (String, u32) {
        match e {
            Expr::Sort => ("Type".to_string(), ATOM),
            Expr::Const(c) => (self.const_name(c), ATOM),
            Expr::BVar(i) => {
                let i = *i as usize;
                let s = if i < bound.len() { bound[bound.len() - 1 - i].clone() } else { format!("#{i}") };
                (s, ATOM)
            }
            Expr::FVar(id) => (self.fvar_name(*id), ATOM),
            Expr::Meta(m) => (format!("?m{}", m.0), ATOM),
            Expr::App(..) => {
                let (head, args) = e.app_parts();
                if self.mode == Mode::Display {
                    if let Some(c) = head.as_const() {
                        if let Some(r) = self.notation(c, &args, bound) {
                            return r;
                        }
                    }
                }
                let mut s = self.pp_at(&head, APP, bound);
                for a in &args {
                    s.push(' ');
                    s.push_str(&self.pp_at(a, ATOM, bound));
                }
                (s, APP)
            }
            Expr::Lam(..) => self.binders(e, false, bound),
            Expr::Pi(_, dom, body) if !body.has_loose_bvar(0) => {
                let l = self.pp_at(dom, ARROW + 1, bound);
                bound.push("_".to_string());
                let r = self.pp_at(body, ARROW, bound);
                bound.pop();
                (format!("{l} → {r}"), ARROW)
            }
            Expr::Pi(..) => self.binders(e, true, bound),
        }
    }

    fn binders(&self, e: &Expr, is_pi: bool, bound: &mut Vec<String>) -> (String, u32) {
        let mut parts = Vec::new();
        let depth = bound.len();
        let mut cur = e;
        loop {
            let first = parts.is_empty();
            let (n, dom, body) = match (cur, is_pi) {
                (Expr::Pi(n, d, b), true) if first || b.has_loose_bvar(0) => (n, d, b),
                (Expr::Lam(n, d, b), false) => (n, d, b),
                _ => break,
            };
            let name = self.binder_name(n, body, bound);
            let part = match self.mode {
                Mode::Display => name.clone(),
                Mode::Source => format!("({} : {})", name, self.pp_at(dom, BINDER, bound)),
            };
            parts.push(part);
            bound.push(name);
            cur = body;
        }
        let body = self.pp_at(cur, BINDER, bound);
        bound.truncate(depth);
        let q = if is_pi { "∀" } else { "λ" };
        (format!("{q} {}, {body}", parts.join(" ")), BINDER)
    }

    /// Source text of `e` (fully explicit, re-parses to an alpha-equivalent term).
    pub fn source(env: &Environment, e: &Expr) -> String {
        Printer::new(env, Mode::Source).expr(e)
    }
}
