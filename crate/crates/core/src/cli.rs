//! Script checking and the line-delimited JSON session protocol.

use std::io::{BufRead, Write};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::induction::{induction, Fixing, InductionConfig, InductionReport};
use crate::kernel::{add_theorem, Environment, Expr, FVarId, MetaId, Name};
use crate::prelude::prelude;
use crate::proofstate::{pp_expr, pp_goal, Goal, TResult, TacticError, TacticState};
use crate::syntax::{self, elab_item, elab_statement, parse_file, parse_tactic, Elaborator, Item, Proof, Tactic, TacticSyn};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunMode {
    Check,
    /// Also records the goal display after every tactic.
    Golden,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Proved,
    Open(Vec<String>),
    Error(String),
}

#[derive(Clone, Debug)]
pub struct StepDump {
    pub tactic: String,
    pub goals: String,
}

#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub name: String,
    pub status: Status,
    pub steps: Vec<StepDump>,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub lemmas: Vec<LemmaReport>,
    /// Errors in declarations other than tactic lemmas.
    pub errors: Vec<String>,
}

impl Report {
    pub fn all_proved(&self) -> bool {
        self.errors.is_empty() && self.lemmas.iter().all(|l| l.status == Status::Proved)
    }

    pub fn render(&self, mode: RunMode) -> String {
        let mut out = String::new();
        for e in &self.errors {
            out.push_str(&format!("error: {e}\n"));
        }
        for l in &self.lemmas {
            match &l.status {
                Status::Proved => out.push_str(&format!("{}: proved\n", l.name)),
                Status::Open(gs) => {
                    out.push_str(&format!("{}: {} open goal(s)\n", l.name, gs.len()));
                    for g in gs {
                        out.push_str(&indent(g));
                        out.push('\n');
                    }
                }
                Status::Error(e) => out.push_str(&format!("{}: error: {e}\n", l.name)),
            }
            if mode == RunMode::Golden {
                for s in &l.steps {
                    out.push_str(&format!("  -- {}\n", s.tactic));
                    out.push_str(&indent(&s.goals));
                    out.push('\n');
                }
            }
        }
        out
    }
}

/// A case is shown by its constructor's name without the type's namespace.
pub fn case_name(tag: &str) -> &str {
    tag.rsplit('.').next().unwrap_or(tag)
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("    {l}")).collect::<Vec<_>>().join("\n")
}

/// All goals of a state, each headed by its case name.
pub fn pp_goals(st: &TacticState) -> String {
    if st.goals.is_empty() {
        return "no goals".into();
    }
    st.goals
        .iter()
        .map(|g| match &g.case_tag {
            Some(c) => format!("case {}\n{}", case_name(c), pp_goal(&st.env, g)),
            None => pp_goal(&st.env, g),
        })
        .collect::<Vec<_>>()
        .join("\n\n")
}

/// A lemma statement as a fresh proof state.
pub fn start_lemma(env: &Environment, item: &Item) -> Result<TacticState, String> {
    let Item::Lemma { binders, ty, at, .. } = item else { return Err("not a lemma".into()) };
    let (bs, t) = elab_statement(env, binders, ty, at.0).map_err(|e| e.to_string())?;
    Ok(TacticState::new(Arc::new(env.clone()), &bs, &t))
}

fn hyp_id(g: &Goal, n: &str) -> TResult<FVarId> {
    g.find(n).map(|h| h.id).ok_or_else(|| TacticError::UnknownHypothesis(n.to_string()))
}

fn elab_in(st: &TacticState, g: &Goal, t: &syntax::Term, expected: Option<&Expr>) -> TResult<Expr> {
    Elaborator::new(&st.env, g.decls()).elab(t, expected).map_err(|e| TacticError::Elab(e.to_string()))
}

/// Runs one tactic on goal `gid` (the first goal when `None`).
pub fn run_tactic(st: &mut TacticState, gid: Option<MetaId>, t: &TacticSyn) -> TResult<Option<InductionReport>> {
    let g = match gid {
        Some(id) => st.goal(id)?.clone(),
        None => st.main_goal()?.clone(),
    };
    let mut gid = g.id;
    match &t.tactic {
        Tactic::Intro(ns) if ns.is_empty() => {
            st.intro(gid, None)?;
        }
        Tactic::Intro(ns) => {
            for n in ns {
                gid = st.intro(gid, Some(n))?.0;
            }
        }
        Tactic::Intros(ns) if ns.is_empty() => {
            while matches!(st.goal(gid)?.target, Expr::Pi(..)) {
                gid = st.intro(gid, None)?.0;
            }
        }
        Tactic::Intros(ns) => {
            for n in ns {
                gid = st.intro(gid, Some(n))?.0;
            }
        }
        Tactic::Exact(e) => {
            let e = elab_in(st, &g, e, Some(&g.target))?;
            st.exact(gid, &e)?;
        }
        Tactic::Apply(e) => {
            let e = elab_in(st, &g, e, None)?;
            st.apply(gid, &e)?;
        }
        Tactic::Clear(ns) => {
            for n in ns.iter().rev() {
                let id = hyp_id(st.goal(gid)?, n)?;
                gid = st.clear(gid, id)?;
            }
        }
        Tactic::Revert(ns) => {
            let ids = ns.iter().map(|n| hyp_id(&g, n)).collect::<TResult<Vec<_>>>()?;
            st.revert(gid, &ids)?;
        }
        Tactic::Rename(a, b) => {
            let id = hyp_id(&g, a)?;
            st.rename(gid, id, Name::from(b.as_str()), false)?;
        }
        Tactic::Have(n, ty, v) => {
            let ty = elab_in(st, &g, ty, None)?;
            let v = elab_in(st, &g, v, Some(&ty))?;
            st.assert_after(gid, g.hyps.last().map(|h| h.id), n, ty, v)?;
        }
        Tactic::Induction { hyp, cases, fixing, with } => {
            let major = hyp_id(&g, hyp)?;
            let mut cfg = if *cases { InductionConfig::cases(major) } else { InductionConfig::induction(major) };
            cfg.fixing = match fixing {
                syntax::ast::Fixing::Nothing => Fixing::Nothing,
                syntax::ast::Fixing::All => Fixing::All,
                syntax::ast::Fixing::Some(ns) => Fixing::Hyps(ns.iter().map(|n| hyp_id(&g, n)).collect::<TResult<_>>()?),
            };
            cfg.names = with.iter().map(|c| (c.ctor.clone(), c.names.clone())).collect();
            return induction(st, gid, &cfg).map(Some);
        }
    }
    Ok(None)
}

/// Checks a lemma proved by tactics. On success the proof is returned.
pub fn run_lemma(env: &Environment, item: &Item, mode: RunMode) -> (LemmaReport, Option<Expr>) {
    let Item::Lemma { name, proof: Proof::Tactics(ts), .. } = item else { unreachable!("tactic lemma expected") };
    let mut report = LemmaReport { name: name.clone(), status: Status::Proved, steps: Vec::new() };
    let mut st = match start_lemma(env, item) {
        Ok(st) => st,
        Err(e) => {
            report.status = Status::Error(e);
            return (report, None);
        }
    };
    if mode == RunMode::Golden {
        report.steps.push(StepDump { tactic: "start".into(), goals: pp_goals(&st) });
    }
    for t in ts {
        if let Err(e) = run_tactic(&mut st, None, t) {
            report.status = Status::Error(format!("{}:{}: {}: {e}", t.at.0.line, t.at.0.col, t.text));
            return (report, None);
        }
        if mode == RunMode::Golden {
            report.steps.push(StepDump { tactic: t.text.clone(), goals: pp_goals(&st) });
        }
    }
    if !st.is_done() {
        report.status = Status::Open(st.goals.iter().map(|g| pp_goal(&st.env, g)).collect());
        return (report, None);
    }
    match st.check_proof() {
        Ok(p) => (report, Some(p)),
        Err(e) => {
            report.status = Status::Error(format!("proof rejected by the kernel: {e}"));
            (report, None)
        }
    }
}

/// Checks every item of a source file on top of the prelude.
pub fn run_script(src: &str, mode: RunMode) -> (Report, Environment) {
    match parse_file(src) {
        Ok(f) => check_items(&f.items, mode),
        Err(e) => (Report { errors: vec![e.to_string()], ..Default::default() }, prelude()),
    }
}

/// Checks items in order; proved lemmas become available to later ones.
pub fn check_items(items: &[Item], mode: RunMode) -> (Report, Environment) {
    let mut env = prelude();
    let mut report = Report::default();
    for item in items {
        if let Item::Lemma { name, proof: Proof::Tactics(_), .. } = item {
            let (l, proof) = run_lemma(&env, item, mode);
            if let Some(p) = proof {
                let st = start_lemma(&env, item).expect("lemma started before");
                if let Err(e) = add_theorem(&mut env, Name::from(name.as_str()), st.statement().clone(), p) {
                    report.errors.push(format!("{name}: {e}"));
                }
            }
            report.lemmas.push(l);
        } else if let Err(e) = elab_item(&mut env, item) {
            report.errors.push(e.to_string());
        }
    }
    (report, env)
}

#[derive(Debug, Deserialize)]
#[serde(tag = "cmd", rename_all = "camelCase")]
pub enum Command {
    /// Loads a file (by path or inline text) and starts on one of its
    /// tactic lemmas, by default the last one. Earlier lemmas are checked.
    Load {
        file: Option<String>,
        text: Option<String>,
        lemma: Option<String>,
    },
    ApplyTactic {
        #[serde(rename = "goalId")]
        goal_id: Option<u64>,
        text: String,
    },
    GetGoals,
    Undo,
    Info {
        name: String,
    },
}

#[derive(Debug, Serialize)]
pub struct HypView {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

#[derive(Debug, Serialize)]
pub struct GoalView {
    pub id: u64,
    #[serde(rename = "case")]
    pub case_tag: Option<String>,
    pub hyps: Vec<HypView>,
    pub target: String,
    pub display: String,
}

pub fn goal_views(st: &TacticState) -> Vec<GoalView> {
    st.goals
        .iter()
        .map(|g| {
            let names = g.display_names();
            GoalView {
                id: g.id.0,
                case_tag: g.case_tag.as_ref().map(|c| case_name(c).to_string()),
                hyps: g.hyps.iter().map(|h| HypView { name: names[&h.id].clone(), ty: pp_expr(&st.env, g, &h.ty) }).collect(),
                target: pp_expr(&st.env, g, &g.target),
                display: pp_goal(&st.env, g),
            }
        })
        .collect()
}

/// An interactive session: one proof state with an undo history.
#[derive(Default)]
pub struct Session {
    env: Option<Environment>,
    history: Vec<TacticState>,
}

impl Session {
    pub fn new() -> Self {
        Self::default()
    }

    fn state(&self) -> Option<&TacticState> {
        self.history.last()
    }

    fn goals_event(&self) -> serde_json::Value {
        match self.state() {
            Some(st) => json!({ "event": "goals", "goals": goal_views(st) }),
            None => error("session", "no lemma loaded"),
        }
    }

    /// Handles one input line; the last event is the terminal one.
    pub fn handle_line(&mut self, line: &str) -> Vec<serde_json::Value> {
        match serde_json::from_str::<Command>(line) {
            Ok(c) => self.handle(c),
            Err(e) => vec![error("parse", &e.to_string())],
        }
    }

    pub fn handle(&mut self, cmd: Command) -> Vec<serde_json::Value> {
        match cmd {
            Command::Load { file, text, lemma } => vec![self.load(file, text, lemma)],
            Command::ApplyTactic { goal_id, text } => self.apply(goal_id, &text),
            Command::GetGoals => vec![self.goals_event()],
            Command::Undo => {
                if self.history.len() > 1 {
                    self.history.pop();
                    vec![self.goals_event()]
                } else {
                    vec![error("undo", "nothing to undo")]
                }
            }
            Command::Info { name } => {
                let Some(env) = self.env.as_ref() else { return vec![error("info", "no file loaded")] };
                match env.resolve(&name).and_then(|n| env.get(&n).cloned()) {
                    Some(d) => {
                        let ty = syntax::Printer::source(env, &d.ty);
                        vec![json!({ "event": "ack", "name": d.name.to_string(), "type": ty })]
                    }
                    None => vec![error("info", &format!("unknown constant {name}"))],
                }
            }
        }
    }

    fn load(&mut self, file: Option<String>, text: Option<String>, lemma: Option<String>) -> serde_json::Value {
        let src = match (file, text) {
            (_, Some(t)) => t,
            (Some(f), None) => match std::fs::read_to_string(&f) {
                Ok(t) => t,
                Err(e) => return error("load", &format!("{f}: {e}")),
            },
            (None, None) => return error("load", "either file or text is required"),
        };
        let parsed = match parse_file(&src) {
            Ok(p) => p,
            Err(e) => return error("parse", &e.to_string()),
        };
        let tactic_lemmas: Vec<&Item> =
            parsed.items.iter().filter(|i| matches!(i, Item::Lemma { proof: Proof::Tactics(_), .. })).collect();
        let target = match &lemma {
            Some(n) => tactic_lemmas.iter().position(|i| matches!(i, Item::Lemma { name, .. } if name == n)),
            None => tactic_lemmas.len().checked_sub(1),
        };
        let Some(target) = target else { return error("load", "no such tactic lemma") };
        let target_item = tactic_lemmas[target];
        // Everything before the chosen lemma is checked normally.
        let upto = parsed.items.iter().position(|i| std::ptr::eq(i, target_item)).unwrap();
        let prefix: Vec<Item> = parsed.items[..upto].to_vec();
        let (report, env) = check_items(&prefix, RunMode::Check);
        if !report.all_proved() {
            return error("load", report.render(RunMode::Check).trim_end());
        }
        match start_lemma(&env, target_item) {
            Ok(st) => {
                self.history = vec![st];
                self.env = Some(env);
                let Item::Lemma { name, .. } = target_item else { unreachable!() };
                json!({ "event": "ack", "lemma": name })
            }
            Err(e) => error("load", &e),
        }
    }

    fn apply(&mut self, goal_id: Option<u64>, text: &str) -> Vec<serde_json::Value> {
        let Some(st) = self.state() else { return vec![error("session", "no lemma loaded")] };
        let t = match parse_tactic(text) {
            Ok(t) => t,
            Err(e) => return vec![error("parse", &e.to_string())],
        };
        let mut next = st.clone();
        let before: Vec<(MetaId, Option<Name>)> = next.goals.iter().map(|g| (g.id, g.case_tag.clone())).collect();
        if let Err(e) = run_tactic(&mut next, goal_id.map(MetaId), &t) {
            return vec![error("tactic", &e.to_string())];
        }
        let mut events = Vec::new();
        if let Some(gid) = goal_id.map(MetaId).or(before.first().map(|b| b.0)) {
            if next.proof_of(gid).is_some() {
                let tag = before.iter().find(|b| b.0 == gid).and_then(|b| b.1.clone());
                let tag = tag.map(|c| case_name(&c).to_string());
                events.push(json!({ "event": "closed", "goalId": gid.0, "caseTag": tag }));
            }
        }
        self.history.push(next);
        events.push(self.goals_event());
        events
    }

    /// Runs commands from `input` until EOF, writing one JSON event per line.
    pub fn serve<R: BufRead, W: Write>(&mut self, input: R, mut output: W) -> std::io::Result<()> {
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            for ev in self.handle_line(&line) {
                writeln!(output, "{ev}")?;
            }
            output.flush()?;
        }
        Ok(())
    }
}

fn error(stage: &str, message: &str) -> serde_json::Value {
    json!({ "event": "error", "stage": stage, "message": message })
}
