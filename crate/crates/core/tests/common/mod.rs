//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use indtac::kernel::expr::scratch_fvar;
use indtac::kernel::{is_def_eq, whnf, Environment, Expr, MetaId, Transparency};
use indtac::prelude::prelude;
use indtac::syntax::load_source;
use indtac::unify::{unify, Assignment, UnifyOutcome};

pub const T3: &str = "inductive t3 : Type\n| zero : t3\n| succ : t3 → t3\n| pair : t3 → t3 → t3";

pub fn t3_env() -> Environment {
    let mut env = prelude();
    load_source(&mut env, T3).unwrap();
    env
}

pub fn zero() -> Expr {
    Expr::cnst("t3.zero")
}

pub fn succ(a: Expr) -> Expr {
    Expr::app(Expr::cnst("t3.succ"), a)
}

pub fn pair(a: Expr, b: Expr) -> Expr {
    Expr::mk_app(Expr::cnst("t3.pair"), [a, b])
}

/// Every term of depth at most `depth` built from `leaves`, `succ` and `pair`.
pub fn terms(depth: usize, leaves: &[Expr]) -> Vec<Expr> {
    let mut all = leaves.to_vec();
    for _ in 0..depth {
        let mut next = leaves.to_vec();
        next.extend(all.iter().cloned().map(succ));
        for a in &all {
            for b in &all {
                next.push(pair(a.clone(), b.clone()));
            }
        }
        all = next;
    }
    all
}

/// Ground terms up to some depth, hash-consed so that structural equality
/// is id equality.
pub struct Universe {
    nodes: Vec<Node>,
    ids: HashMap<Node, u32>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Zero,
    Succ(u32),
    Pair(u32, u32),
}

/// A right-hand side with metas `?0` and `?1` at the leaves.
enum Pat {
    Zero,
    Meta(usize),
    Succ(Box<Pat>),
    Pair(Box<Pat>, Box<Pat>),
}

impl Universe {
    /// Every ground term of depth at most `depth`.
    pub fn new(depth: usize) -> Self {
        let mut u = Universe { nodes: Vec::new(), ids: HashMap::new() };
        u.intern(Node::Zero);
        for _ in 0..depth {
            let n = u.nodes.len() as u32;
            for a in 0..n {
                u.intern(Node::Succ(a));
                for b in 0..n {
                    u.intern(Node::Pair(a, b));
                }
            }
        }
        u
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    fn intern(&mut self, n: Node) -> u32 {
        if let Some(&i) = self.ids.get(&n) {
            return i;
        }
        let i = self.nodes.len() as u32;
        self.nodes.push(n);
        self.ids.insert(n, i);
        i
    }

    fn id(&self, e: &Expr) -> Option<u32> {
        let (h, args) = e.app_parts();
        let node = match (h.as_const().map(|c| &**c), &args[..]) {
            (Some("t3.zero"), []) => Node::Zero,
            (Some("t3.succ"), [a]) => Node::Succ(self.id(a)?),
            (Some("t3.pair"), [a, b]) => Node::Pair(self.id(a)?, self.id(b)?),
            _ => return None,
        };
        self.ids.get(&node).copied()
    }

    fn expr(&self, i: u32) -> Expr {
        match self.nodes[i as usize] {
            Node::Zero => zero(),
            Node::Succ(a) => succ(self.expr(a)),
            Node::Pair(a, b) => pair(self.expr(a), self.expr(b)),
        }
    }

    fn pat(e: &Expr, metas: &[MetaId]) -> Pat {
        if let Expr::Meta(m) = e {
            return Pat::Meta(metas.iter().position(|x| x == m).expect("meta outside the problem"));
        }
        let (h, args) = e.app_parts();
        match (h.as_const().map(|c| &**c), &args[..]) {
            (Some("t3.zero"), []) => Pat::Zero,
            (Some("t3.succ"), [a]) => Pat::Succ(Box::new(Self::pat(a, metas))),
            (Some("t3.pair"), [a, b]) => Pat::Pair(Box::new(Self::pat(a, metas)), Box::new(Self::pat(b, metas))),
            _ => panic!("not a t3 pattern: {e}"),
        }
    }

    /// Whether `p` under `sigma` could equal term `a`, treating unassigned
    /// metas as wildcards. Exact when every meta of `p` is assigned.
    fn matches(&self, p: &Pat, a: u32, sigma: &[Option<u32>]) -> bool {
        match (p, self.nodes[a as usize]) {
            (Pat::Meta(m), _) => sigma[*m].is_none_or(|v| v == a),
            (Pat::Zero, Node::Zero) => true,
            (Pat::Succ(p), Node::Succ(x)) => self.matches(p, x, sigma),
            (Pat::Pair(p, q), Node::Pair(x, y)) => self.matches(p, x, sigma) && self.matches(q, y, sigma),
            _ => false,
        }
    }

    /// Assignments of universe terms to `metas` making `b` equal to `a`,
    /// stopping after two.
    pub fn solutions(&self, a: &Expr, b: &Expr, metas: &[MetaId]) -> Vec<Assignment> {
        let a = self.id(a).expect("left side outside the universe");
        let p = Self::pat(b, metas);
        let mut sigma = vec![None; metas.len()];
        let mut found = Vec::new();
        self.search(a, &p, 0, &mut sigma, &mut found);
        found
            .into_iter()
            .map(|s| metas.iter().zip(s).map(|(m, v)| (*m, self.expr(v))).collect())
            .collect()
    }

    fn search(&self, a: u32, p: &Pat, k: usize, sigma: &mut Vec<Option<u32>>, found: &mut Vec<Vec<u32>>) {
        if k == sigma.len() {
            if self.matches(p, a, sigma) {
                found.push(sigma.iter().map(|v| v.unwrap()).collect());
            }
            return;
        }
        for v in 0..self.nodes.len() as u32 {
            sigma[k] = Some(v);
            if self.matches(p, a, sigma) {
                self.search(a, p, k + 1, sigma, found);
                if found.len() >= 2 {
                    break;
                }
            }
        }
        sigma[k] = None;
    }
}

/// Compares `unify` against the enumerator on one problem.
pub fn check_against_oracle(env: &Environment, a: &Expr, b: &Expr, metas: &[MetaId], universe: &Universe) -> Result<(), String> {
    let set: HashSet<MetaId> = metas.iter().copied().collect();
    let got = unify(env, a, b, &set, Transparency::Reducible);
    if let UnifyOutcome::Solved(s) = &got {
        if !is_def_eq(env, a, &b.instantiate_metas(s), Transparency::Reducible) {
            return Err(format!("unsound solution for {a} =?= {b}"));
        }
    }
    let sols = universe.solutions(a, b, metas);
    let ok = match (&got, sols.len()) {
        (UnifyOutcome::Failure, 0) => true,
        (UnifyOutcome::Solved(s), 1) => s == &sols[0],
        (UnifyOutcome::NoUniqueSolution(_), n) => n >= 2,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("{a} =?= {b}: unify gave {}, enumerator found {} solution(s)", got.class(), sols.len()))
    }
}

pub fn meta(i: u64) -> Expr {
    Expr::Meta(MetaId(i))
}

fn problem_metas(b: &Expr) -> Vec<MetaId> {
    let mut metas: Vec<MetaId> = b.metas().into_iter().collect();
    metas.sort();
    metas
}

/// Every left side of depth at most `left` against every right side of
/// depth at most `right` over `zero` and two metas, enumerating
/// assignments of depth at most 4. Returns the number of problems and the
/// disagreements.
pub fn oracle_table(left: usize, right: usize) -> (usize, Vec<String>) {
    let env = t3_env();
    let universe = Universe::new(4);
    let lefts = terms(left, &[zero()]);
    let rights = terms(right, &[zero(), meta(0), meta(1)]);
    let mut failures = Vec::new();
    for a in &lefts {
        for b in &rights {
            if let Err(e) = check_against_oracle(&env, a, b, &problem_metas(b), &universe) {
                failures.push(e);
            }
        }
    }
    (lefts.len() * rights.len(), failures)
}

/// `n` problems drawn uniformly, with a fixed seed, from all pairs of depth
/// at most 3.
pub fn oracle_sample(n: usize) -> (usize, Vec<String>) {
    use proptest::test_runner::{RngAlgorithm, TestRng};
    use proptest::prelude::RngExt;
    let env = t3_env();
    let universe = Universe::new(4);
    let lefts = terms(3, &[zero()]);
    let rights = terms(3, &[zero(), meta(0), meta(1)]);
    let mut rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    let mut failures = Vec::new();
    for _ in 0..n {
        let a = &lefts[rng.random_range(0..lefts.len())];
        let b = &rights[rng.random_range(0..rights.len())];
        if let Err(e) = check_against_oracle(&env, a, b, &problem_metas(b), &universe) {
            failures.push(e);
        }
    }
    (n, failures)
}

/// Checks that the recursor of every inductive in `env`, applied to each
/// constructor, reduces to the minor premise applied to the constructor
/// arguments and one recursive call per recursive argument. Returns the
/// constructors for which it does not.
pub fn iota_failures(env: &Environment) -> Vec<String> {
    let mut bad = Vec::new();
    for info in env.inductives() {
        let fv = || Expr::FVar(scratch_fvar());
        let params: Vec<Expr> = info.params.iter().map(|_| fv()).collect();
        let motive = fv();
        let minors: Vec<Expr> = info.ctors.iter().map(|_| fv()).collect();
        let rec_head = Expr::mk_app(
            Expr::cnst(&info.rec_name()),
            params.iter().cloned().chain([motive.clone()]).chain(minors.iter().cloned()),
        );
        for (ci, c) in info.ctors.iter().enumerate() {
            let args: Vec<Expr> = c.args.iter().map(|_| fv()).collect();
            let (tys, j) = info.instantiate_ctor(ci, &params, &args);
            let major = Expr::mk_app(Expr::cnst(&c.name), params.iter().chain(&args).cloned());
            let lhs = Expr::mk_app(rec_head.clone(), j.iter().cloned().chain([major]));
            let ihs = c.recursive_positions().into_iter().map(|r| {
                let (_, jr) = tys[r].app_parts();
                let jr = jr[info.num_params()..].to_vec();
                Expr::mk_app(rec_head.clone(), jr.into_iter().chain([args[r].clone()]))
            });
            let rhs = Expr::mk_app(minors[ci].clone(), args.iter().cloned().chain(ihs));
            if whnf(env, &lhs, Transparency::Reducible) != rhs {
                bad.push(c.name.to_string());
            }
        }
    }
    bad
}

/// The recursor type of `tc`, transcribed with explicit binder types.
pub const TC_REC: &str = "∀ (α : Type) (r : α → α → Type) (M : ∀ (x y : α), tc α r x y → Type) \
    (Base : ∀ (x y : α) (hr : r x y), M x y (tc.base α r x y hr)) \
    (Step : ∀ (x y z : α) (hr : r x y) (ht : tc α r y z), M y z ht → M x z (tc.step α r x y z hr ht)) \
    (x y : α) (e : tc α r x y), M x y e";
