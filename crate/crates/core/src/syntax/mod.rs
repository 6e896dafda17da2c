//! Surface language: lexing, parsing, elaboration and printing.

pub mod ast;
pub mod elab;
pub mod lexer;
pub mod parser;
pub mod print;

pub use ast::{Item, Proof, SourceFile, Tactic, TacticSyn, Term};
pub use elab::{elab_item, elab_statement, ElabError, Elaborator};
pub use lexer::Pos;
pub use parser::{parse_file, parse_tactic, parse_term};
pub use print::{Mode, Printer};

use thiserror::Error;

#[derive(Debug, Error)]
#[error("{pos}: {msg}")]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Elab(#[from] ElabError),
}

/// Parses and elaborates a file that contains no tactic proofs.
pub fn load_source(env: &mut crate::kernel::Environment, src: &str) -> Result<(), LoadError> {
    let file = parse_file(src)?;
    for item in &file.items {
        elab_item(env, item)?;
    }
    Ok(())
}
