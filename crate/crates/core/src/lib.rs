//! A small dependently typed proof kernel with indexed inductive families,
//! and a tactic engine built around a beginner-friendly induction tactic.

pub mod cli;
pub mod corpus;
pub mod induction;
pub mod kernel;
pub mod naming;
pub mod prelude;
pub mod proofstate;
pub mod qnify;
pub mod syntax;
pub mod unify;
