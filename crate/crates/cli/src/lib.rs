//! The `pvkit` session language: parsing, execution and report output.

pub mod dsl;
pub mod session;

pub use dsl::{parse_expr, parse_program, Command, Expr, SyntaxError};
pub use session::{emit_json, emit_text, run_program, CliError, Options, Report, Session};
