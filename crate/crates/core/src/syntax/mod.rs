//! Formula syntax: AST, parser, printer (via `Display`) and desugaring of
//! slashed quantifiers and branching prefixes.

mod ast;
mod desugar;
mod parser;

pub use ast::{Atom, Formula, Term};
pub use desugar::{desugar, desugar_henkin, desugar_slash, DesugarError};
pub use parser::{parse, parse_atom, ParseError};
