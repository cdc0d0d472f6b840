//! Team semantics for independence logic: the evaluator, sentence truth and
//! bounded validity search.

mod eval;
mod tarski;
mod validity;

use thiserror::Error;

use crate::syntax::DesugarError;
use crate::team::{TeamError, Var};

pub use eval::{evaluate, sentence_sat, EvalOptions, Evaluator, DEFAULT_BUDGET};
pub use tarski::holds;
pub(crate) use eval::{dep_holds, ind_holds};
pub(crate) use tarski::{atom_holds, holds_in, Env};
pub use validity::{validity_search, Validity, ValiditySearch};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is free in the formula but not in the team scope")]
    UnboundVariable(Var),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("relation `{name}` has arity {expected}, used with {found} arguments")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("formula contains slashed quantifiers or branching prefixes; desugar it first")]
    NotDesugared,
    #[error("formula is not first-order")]
    NotFirstOrder,
    #[error("not a sentence: free variables {0:?}")]
    NotASentence(Vec<Var>),
    #[error("search exhausted after {0} candidate extensions")]
    SearchExhausted(u64),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Desugar(#[from] DesugarError),
    #[error(transparent)]
    Team(#[from] TeamError),
}
