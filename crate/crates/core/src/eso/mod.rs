//! Existential second-order sentences, the translation of independence
//! logic into them, and an evaluator for cross-checking.

mod ground;
mod translate;

use std::fmt;

use thiserror::Error;

use crate::syntax::{DesugarError, Term};
use crate::team::{TeamError, Var};
use crate::teamsem::EvalError;

pub use ground::{eval_eso, eval_eso_with, EsoLimits};
pub use translate::{check_translation, translate, TranslationCheck};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EsoError {
    #[error("variable `{0}` is free in the formula but not in the scope")]
    UnboundVariable(Var),
    #[error("variable `{0}` occurs twice in the scope")]
    DuplicateScopeVariable(Var),
    #[error("team scope {found:?} does not match the sentence scope {expected:?}")]
    ScopeMismatch { expected: Vec<Var>, found: Vec<Var> },
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
    #[error("ESO search too large: {0}")]
    TooLarge(String),
    #[error("SAT solver failure: {0}")]
    Solver(String),
    #[error(transparent)]
    Desugar(#[from] DesugarError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Team(#[from] TeamError),
}

/// First-order formulas with unrestricted negation and implication.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Fo {
    True,
    False,
    Eq(Term, Term),
    Rel(String, Vec<Term>),
    Not(Box<Fo>),
    And(Box<Fo>, Box<Fo>),
    Or(Box<Fo>, Box<Fo>),
    Implies(Box<Fo>, Box<Fo>),
    Exists(Var, Box<Fo>),
    Forall(Var, Box<Fo>),
}

impl Fo {
    pub fn and(a: Fo, b: Fo) -> Fo {
        Fo::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Fo, b: Fo) -> Fo {
        Fo::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Fo, b: Fo) -> Fo {
        Fo::Implies(Box::new(a), Box::new(b))
    }

    pub fn not(a: Fo) -> Fo {
        Fo::Not(Box::new(a))
    }

    /// Conjunction of `parts`, `True` when empty.
    pub fn conj(parts: Vec<Fo>) -> Fo {
        parts.into_iter().reduce(Fo::and).unwrap_or(Fo::True)
    }

    pub fn rel(name: &str, vars: &[Var]) -> Fo {
        Fo::Rel(name.to_string(), vars.iter().cloned().map(Term::Var).collect())
    }

    pub fn var_eq(a: &Var, b: &Var) -> Fo {
        Fo::Eq(Term::Var(a.clone()), Term::Var(b.clone()))
    }

    /// `∀v1 … ∀vk body`.
    pub fn forall_all(vars: &[Var], body: Fo) -> Fo {
        vars.iter().rev().fold(body, |b, v| Fo::Forall(v.clone(), Box::new(b)))
    }

    /// `∃v1 … ∃vk body`.
    pub fn exists_all(vars: &[Var], body: Fo) -> Fo {
        vars.iter().rev().fold(body, |b, v| Fo::Exists(v.clone(), Box::new(b)))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Fo::True | Fo::False | Fo::Eq(..) | Fo::Rel(..) => 1,
            Fo::Not(a) | Fo::Exists(_, a) | Fo::Forall(_, a) => 1 + a.size(),
            Fo::And(a, b) | Fo::Or(a, b) | Fo::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Whether `v` occurs free.
    pub fn has_free(&self, v: &Var) -> bool {
        let term = |t: &Term| matches!(t, Term::Var(w) if w == v);
        match self {
            Fo::True | Fo::False => false,
            Fo::Eq(a, b) => term(a) || term(b),
            Fo::Rel(_, args) => args.iter().any(term),
            Fo::Not(a) => a.has_free(v),
            Fo::And(a, b) | Fo::Or(a, b) | Fo::Implies(a, b) => a.has_free(v) || b.has_free(v),
            Fo::Exists(w, a) | Fo::Forall(w, a) => w != v && a.has_free(v),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Fo::Exists(..) | Fo::Forall(..) => 0,
            Fo::Implies(..) => 1,
            Fo::Or(..) => 2,
            Fo::And(..) => 3,
            _ => 4,
        }
    }
}

fn paren(f: &mut fmt::Formatter<'_>, g: &Fo, wrap: bool) -> fmt::Result {
    if wrap {
        write!(f, "({g})")
    } else {
        write!(f, "{g}")
    }
}

impl fmt::Display for Fo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fo::True => f.write_str("true"),
            Fo::False => f.write_str("false"),
            Fo::Eq(a, b) => write!(f, "{a} = {b}"),
            Fo::Rel(name, args) => {
                write!(f, "{name}(")?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
            Fo::Not(a) => {
                f.write_str("not ")?;
                paren(f, a, a.prec() < 4)
            }
            Fo::And(a, b) => {
                paren(f, a, a.prec() < 3)?;
                f.write_str(" and ")?;
                paren(f, b, b.prec() < 3)
            }
            Fo::Or(a, b) => {
                paren(f, a, a.prec() < 2)?;
                f.write_str(" or ")?;
                paren(f, b, b.prec() < 2)
            }
            Fo::Implies(a, b) => {
                paren(f, a, a.prec() < 2)?;
                f.write_str(" -> ")?;
                // a trailing quantifier already extends to the end
                paren(f, b, b.prec() == 1)
            }
            Fo::Exists(v, a) | Fo::Forall(v, a) => {
                let q = if matches!(self, Fo::Exists(..)) { "exists" } else { "forall" };
                write!(f, "{q} {v}. ")?;
                paren(f, a, (1..4).contains(&a.prec()))
            }
        }
    }
}

/// `∃S1 … ∃Sk φ` over the vocabulary extended by the team relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EsoSentence {
    /// Name of the relation interpreted by the team.
    pub team_relation: String,
    /// Team variables, in column order of the team relation.
    pub scope: Vec<Var>,
    /// Existentially quantified relation variables with arities.
    pub relation_vars: Vec<(String, usize)>,
    pub matrix: Fo,
}

impl EsoSentence {
    pub fn size(&self) -> usize {
        self.matrix.size()
    }
}

impl fmt::Display for EsoSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.relation_vars.is_empty() {
            f.write_str("exists2")?;
            for (name, k) in &self.relation_vars {
                write!(f, " {name}/{k}")?;
            }
            f.write_str(" . ")?;
        }
        write!(f, "{}", self.matrix)
    }
}
