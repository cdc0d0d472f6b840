//! Independence logic under team semantics.

pub mod atoms;
pub mod branching;
pub mod eso;
pub mod generate;
pub mod structure;
pub mod syntax;
pub mod team;
pub mod teamsem;

pub use structure::{Relation, Structure, StructureError};
pub use syntax::{parse, Atom, Formula, Term};
pub use team::{Assignment, Elem, Semantics, Team, TeamError, Var, VarTuple};
pub use teamsem::{evaluate, sentence_sat, EvalError, EvalOptions};
