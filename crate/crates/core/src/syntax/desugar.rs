//! Rewrites the two derived quantifier forms into plain independence logic.

use thiserror::Error;

use super::ast::{Atom, Formula};
use crate::team::{Var, VarTuple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesugarError {
    #[error("slashed variable `{0}` is not bound by an enclosing quantifier")]
    UnboundSlashed(Var),
    #[error("branching prefixes with {0} rows are not supported (exactly 2 required)")]
    UnsupportedHenkin(usize),
    #[error("variable `{0}` is bound twice in a branching prefix")]
    DuplicateBinding(Var),
}

/// Replaces every `∃x/ȳ ψ` by `∃x (ȳ ⊥_z̄ x ∧ ψ)`, where `z̄` lists the
/// variables bound above the node, in binding order, without `ȳ` and `x`.
pub fn desugar_slash(f: &Formula) -> Result<Formula, DesugarError> {
    slash_rec(f, &mut Vec::new())
}

fn slash_rec(f: &Formula, bound: &mut Vec<Var>) -> Result<Formula, DesugarError> {
    Ok(match f {
        Formula::Atom(_) | Formula::Not(_) => f.clone(),
        Formula::And(a, b) => Formula::and(slash_rec(a, bound)?, slash_rec(b, bound)?),
        Formula::Or(a, b) => Formula::or(slash_rec(a, bound)?, slash_rec(b, bound)?),
        Formula::Exists(v, body) => {
            bound.push(v.clone());
            let body = slash_rec(body, bound)?;
            bound.pop();
            Formula::Exists(v.clone(), Box::new(body))
        }
        Formula::Forall(v, body) => {
            bound.push(v.clone());
            let body = slash_rec(body, bound)?;
            bound.pop();
            Formula::Forall(v.clone(), Box::new(body))
        }
        Formula::SlashedExists { var, slashed, body } => {
            if let Some(v) = slashed.iter().find(|v| !bound.contains(v)) {
                return Err(DesugarError::UnboundSlashed(v.clone()));
            }
            let mut condition: Vec<Var> = Vec::new();
            for v in bound.iter() {
                if v != var && !slashed.contains(v) && !condition.contains(v) {
                    condition.push(v.clone());
                }
            }
            bound.push(var.clone());
            let body = slash_rec(body, bound)?;
            bound.pop();
            let atom = Formula::Atom(Atom::Ind {
                left: slashed.clone(),
                condition: VarTuple::new(condition),
                right: VarTuple::new(vec![var.clone()]),
            });
            Formula::Exists(var.clone(), Box::new(Formula::and(atom, body)))
        }
        Formula::Henkin { rows, matrix } => {
            let n = bound.len();
            for (u, e) in rows {
                bound.push(u.clone());
                bound.push(e.clone());
            }
            let matrix = slash_rec(matrix, bound)?;
            bound.truncate(n);
            Formula::Henkin {
                rows: rows.clone(),
                matrix: Box::new(matrix),
            }
        }
    })
}

/// Replaces `branch{∀x ∃y; ∀u ∃v}. φ` by
/// `∀x ∃y ∀u ∃v (v ⊥_{u z̄} x ∧ φ)` with `z̄ = free(φ) \ {x, y, u, v}`.
pub fn desugar_henkin(f: &Formula) -> Result<Formula, DesugarError> {
    Ok(match f {
        Formula::Atom(_) | Formula::Not(_) => f.clone(),
        Formula::And(a, b) => Formula::and(desugar_henkin(a)?, desugar_henkin(b)?),
        Formula::Or(a, b) => Formula::or(desugar_henkin(a)?, desugar_henkin(b)?),
        Formula::Exists(v, body) => Formula::Exists(v.clone(), Box::new(desugar_henkin(body)?)),
        Formula::Forall(v, body) => Formula::Forall(v.clone(), Box::new(desugar_henkin(body)?)),
        Formula::SlashedExists { var, slashed, body } => Formula::SlashedExists {
            var: var.clone(),
            slashed: slashed.clone(),
            body: Box::new(desugar_henkin(body)?),
        },
        Formula::Henkin { rows, matrix } => {
            if rows.len() != 2 {
                return Err(DesugarError::UnsupportedHenkin(rows.len()));
            }
            let (x, y) = &rows[0];
            let (u, v) = &rows[1];
            let binders = [x, y, u, v];
            for (i, b) in binders.iter().enumerate() {
                if binders[..i].contains(b) {
                    return Err(DesugarError::DuplicateBinding((*b).clone()));
                }
            }
            let matrix = desugar_henkin(matrix)?;
            let mut condition = vec![u.clone()];
            condition.extend(
                matrix
                    .free_vars()
                    .into_iter()
                    .filter(|w| !binders.contains(&w)),
            );
            let atom = Formula::Atom(Atom::Ind {
                left: VarTuple::new(vec![v.clone()]),
                condition: VarTuple::new(condition),
                right: VarTuple::new(vec![x.clone()]),
            });
            let inner = Formula::Exists(v.clone(), Box::new(Formula::and(atom, matrix)));
            Formula::Forall(
                x.clone(),
                Box::new(Formula::Exists(
                    y.clone(),
                    Box::new(Formula::Forall(u.clone(), Box::new(inner))),
                )),
            )
        }
    })
}

/// Both rewrites; branching prefixes first so their bound variables are
/// visible to slashes inside the matrix.
pub fn desugar(f: &Formula) -> Result<Formula, DesugarError> {
    desugar_slash(&desugar_henkin(f)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn ds(s: &str) -> String {
        desugar_slash(&parse(s).unwrap()).unwrap().to_string()
    }

    #[test]
    fn signaling_sentence() {
        assert_eq!(
            ds("forall x. exists y. exists z/{x}. z = x"),
            "forall x. exists y. exists z. (ind(x ; y ; z) and z = x)"
        );
    }

    #[test]
    fn empty_condition() {
        assert_eq!(
            ds("forall x. exists z/{x}. z = z"),
            "forall x. exists z. (ind(x ;; z) and z = z)"
        );
    }

    #[test]
    fn slash_free_unchanged() {
        let f = parse("forall x. exists y. (x = y or R(x))").unwrap();
        assert_eq!(desugar_slash(&f).unwrap(), f);
        assert_eq!(desugar_henkin(&f).unwrap(), f);
    }

    #[test]
    fn unbound_slash_rejected() {
        let f = parse("exists z/{x}. z = x").unwrap();
        assert_eq!(
            desugar_slash(&f),
            Err(DesugarError::UnboundSlashed(Var::new("x")))
        );
    }

    #[test]
    fn henkin_form() {
        let f = parse("branch{forall x exists y; forall u exists v}. R(x,y,u,v)").unwrap();
        let d = desugar_henkin(&f).unwrap();
        assert_eq!(
            d.to_string(),
            "forall x. exists y. forall u. exists v. (ind(v ; u ; x) and R(x, y, u, v))"
        );
        assert!(d.free_vars().is_empty());
    }

    #[test]
    fn henkin_extra_free_variable() {
        let f = parse("branch{forall x exists y; forall u exists v}. R(x,y,u,v) and v = w").unwrap();
        let d = desugar_henkin(&f).unwrap();
        assert!(d.to_string().contains("ind(v ; u w ; x)"));
        assert_eq!(d.free_vars(), vec![Var::new("w")]);
    }

    #[test]
    fn henkin_errors() {
        let three = parse("branch{forall a exists b; forall c exists d; forall e exists g}. a = b").unwrap();
        assert_eq!(desugar_henkin(&three), Err(DesugarError::UnsupportedHenkin(3)));
        assert!(parse("branch{forall x exists y; forall x exists v}. x = y").is_err());
        let dup = Formula::Henkin {
            rows: vec![(Var::new("x"), Var::new("y")), (Var::new("x"), Var::new("v"))],
            matrix: Box::new(Formula::eq("x", "y")),
        };
        assert!(matches!(desugar_henkin(&dup), Err(DesugarError::DuplicateBinding(_))));
    }

    #[test]
    fn idempotent() {
        let f = parse("forall x. exists y. exists z/{x}. branch{forall a exists b; forall c exists d}. z = x and b = d").unwrap();
        let once = desugar(&f).unwrap();
        assert_eq!(desugar(&once).unwrap(), once);
        assert!(once.is_desugared());
    }
}
