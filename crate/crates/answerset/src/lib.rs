//! Ground answer-set solver: stable models of logic programs with basic,
//! constraint (cardinality), choice, and weight rules.
//!
//! The crate is organized in layers:
//!
//! - [`program`] — atoms, literals, the four rule types, programs, and
//!   partial assignments ([`program::LiteralSet`]).
//! - [`parse`] — the text format and its canonical serializer.
//! - [`fixpoint`] — least-fixpoint iteration for monotone set operators.
//! - [`oracle`] — brute-force reference semantics: per-rule consequences,
//!   minimal closures, stability checks, exhaustive enumeration.
//! - [`propagate`] — declarative forms of the deduction operators
//!   (atleast, atmost, expand) stated as closures and fixpoints.
//! - [`engine`] — the incremental propagation engine: counter-based
//!   deduction, source-tracked atmost maintenance, trail-backed undo.
//! - [`search`] — the decision procedure: expand, conflict detection,
//!   lookahead, branching heuristic, model enumeration.
//! - [`generate`] — program generators (error-correcting codes, CNF
//!   satisfiability, knapsack) and their decoders.
//! - [`cli`] — the command-line front end used by the `answerset` binary.
//!
//! Start with [`parse::parse_program`] and [`search::Solver`]; see the
//! `examples/` directory for one runnable walkthrough per capability.

pub mod cli;
pub mod engine;
pub mod fixpoint;
pub mod generate;
pub mod oracle;
pub mod parse;
pub mod program;
pub mod propagate;
pub mod search;

pub use program::{AtomId, Literal, LiteralSet, Model, Program, ProgramBuilder, Rule};
