//! The worked examples, as checked source files with golden goal dumps.

use crate::cli::{run_script, Report, RunMode};

#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub name: &'static str,
    pub source: &'static str,
    /// Output of the golden-mode checker.
    pub golden: &'static str,
    /// Case names after the first `induction'` or `cases'` of each lemma.
    pub case_tags: &'static [&'static [&'static str]],
}

macro_rules! case {
    ($name:literal, $tags:expr) => {
        CorpusCase {
            name: $name,
            source: include_str!(concat!("../corpus/", $name, ".ind")),
            golden: include_str!(concat!("../corpus/golden/", $name, ".golden")),
            case_tags: $tags,
        }
    };
}

pub fn corpus_manifest() -> Vec<CorpusCase> {
    vec![
        case!("fin0", &[&[], &[]]),
        case!("tc_trans", &[&["base", "step"]]),
        case!("big_step", &[&["while_true", "while_false"]]),
        case!("injectivity", &[&["zero", "succ"]]),
        case!("commutativity", &[&["zero", "succ"]]),
        case!("fixing", &[&["zero", "succ"]]),
        case!("qnify", &[&[], &[]]),
    ]
}

impl CorpusCase {
    pub fn check(&self, mode: RunMode) -> Report {
        run_script(self.source, mode).0
    }
}
