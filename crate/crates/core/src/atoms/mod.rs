//! Inference over dependence and independence atoms: Armstrong's axioms,
//! the independence axioms, forward chaining under the conditional rules,
//! and semantic entailment by countermodel search.

mod armstrong;
pub mod canon;
mod closure;
mod independence;
mod rules;
mod semantic;
mod statement;
mod trace;

use thiserror::Error;

use crate::syntax::ParseError;
use crate::team::{TeamError, Var};
use crate::teamsem::EvalError;

pub use armstrong::{armstrong_closure, armstrong_derives, counterexample_armstrong};
pub use canon::{CanonAtom, Universe};
pub use closure::{rule_closure, Closure, DEFAULT_MAX_STEPS, MAX_CLOSURE_UNIVERSE};
pub use independence::{counterexample_independence, independence_derives};
pub use rules::{Instance, Rule};
pub use semantic::{semantic_entails, EntailmentVerdict, SearchBound, SemanticConfig, Witness, MAX_SEMANTIC_VARS};
pub use statement::{parse_atom_set, vars_of, AtomStatement};
pub use trace::{DerivationTrace, TraceError, TraceStep};

/// Outcome of a syntactic decision procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub derivable: bool,
    /// Present exactly when `derivable`; ends in the goal.
    pub trace: Option<DerivationTrace>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtomError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("line {line}: expected a dependence or independence atom")]
    NotDependencyAtom { line: usize },
    #[error("unsupported atom `{atom}`: {reason}")]
    Unsupported { atom: String, reason: &'static str },
    #[error("variable `{0}` is outside the universe")]
    OutsideUniverse(Var),
    #[error("universe of {0} variables exceeds the limit of {1}")]
    UniverseTooLarge(usize, usize),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("constructed countermodel failed its recheck")]
    RecheckFailed,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Team(#[from] TeamError),
}
