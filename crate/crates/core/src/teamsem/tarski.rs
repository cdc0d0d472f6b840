//! Ordinary single-assignment satisfaction for first-order formulas.

use super::EvalError;
use crate::structure::Structure;
use crate::syntax::{Atom, Formula, Term};
use crate::team::{Assignment, Elem, Var};

/// `M ⊨_s φ` for first-order `φ`. Dependency atoms and derived quantifier
/// forms are rejected.
pub fn holds(structure: &Structure, s: &Assignment, f: &Formula) -> Result<bool, EvalError> {
    if !f.is_first_order() {
        return Err(EvalError::NotFirstOrder);
    }
    let mut env = Env {
        vars: s.scope().to_vec(),
        vals: s.values().to_vec(),
    };
    holds_in(structure, &mut env, f)
}

/// Variable environment; later bindings shadow earlier ones.
pub(crate) struct Env {
    pub vars: Vec<Var>,
    pub vals: Vec<Elem>,
}

impl Env {
    pub fn new(vars: &[Var], vals: &[Elem]) -> Env {
        Env {
            vars: vars.to_vec(),
            vals: vals.to_vec(),
        }
    }

    fn lookup(&self, v: &Var) -> Option<Elem> {
        self.vars.iter().rposition(|w| w == v).map(|i| self.vals[i])
    }
}

pub(crate) fn term_value(structure: &Structure, env: &Env, t: &Term) -> Result<Elem, EvalError> {
    match t {
        Term::Var(v) => env
            .lookup(v)
            .ok_or_else(|| EvalError::UnboundVariable(v.clone())),
        Term::Const(c) => structure
            .constant(c)
            .ok_or_else(|| EvalError::UnknownConstant(c.clone())),
    }
}

pub(crate) fn atom_holds(structure: &Structure, env: &Env, a: &Atom) -> Result<bool, EvalError> {
    match a {
        Atom::Eq(x, y) => Ok(term_value(structure, env, x)? == term_value(structure, env, y)?),
        Atom::Rel(name, args) => {
            let rel = structure
                .relation(name)
                .ok_or_else(|| EvalError::UnknownRelation(name.clone()))?;
            if rel.arity != args.len() {
                return Err(EvalError::ArityMismatch {
                    name: name.clone(),
                    expected: rel.arity,
                    found: args.len(),
                });
            }
            let tuple = args
                .iter()
                .map(|t| term_value(structure, env, t))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(rel.tuples.contains(&tuple))
        }
        Atom::Dep { .. } | Atom::Ind { .. } => Err(EvalError::NotFirstOrder),
    }
}

pub(crate) fn holds_in(structure: &Structure, env: &mut Env, f: &Formula) -> Result<bool, EvalError> {
    match f {
        Formula::Atom(a) => atom_holds(structure, env, a),
        Formula::Not(a) => Ok(!atom_holds(structure, env, a)?),
        Formula::And(a, b) => Ok(holds_in(structure, env, a)? && holds_in(structure, env, b)?),
        Formula::Or(a, b) => Ok(holds_in(structure, env, a)? || holds_in(structure, env, b)?),
        Formula::Exists(v, body) | Formula::Forall(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            env.vars.push(v.clone());
            env.vals.push(Elem(0));
            let mut result = universal;
            for e in structure.elements() {
                *env.vals.last_mut().expect("pushed") = e;
                let r = holds_in(structure, env, body);
                let r = match r {
                    Ok(r) => r,
                    Err(e) => {
                        env.vars.pop();
                        env.vals.pop();
                        return Err(e);
                    }
                };
                if r != universal {
                    result = r;
                    break;
                }
            }
            env.vars.pop();
            env.vals.pop();
            Ok(result)
        }
        Formula::SlashedExists { .. } | Formula::Henkin { .. } => Err(EvalError::NotDesugared),
    }
}
