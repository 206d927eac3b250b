//! The `.gsys` gauge-system description language.

mod ast;
mod build;
mod diagnostic;
pub mod fixtures;
mod lexer;
mod parser;
mod printer;

pub use ast::{ConnectionEntry, CoordDecl, Expr, ExprKind, Item, Pos, Statement, SystemDocument, VectorRhs, KEYWORDS};
pub use build::{build_system, Bounds, LoadedSystem, CHECKS};
pub use diagnostic::Diagnostic;
pub use parser::{parse_expression, parse_system};
pub use printer::{expr_to_string, print_system};

/// Parses and builds in one step.
pub fn load_system(text: &str) -> Result<LoadedSystem, Diagnostic> {
    build_system(&parse_system(text)?)
}
