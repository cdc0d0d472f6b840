//! Dependence-atom inference: closure, derivations and the two-row
//! countermodel that witnesses non-derivability.

use std::collections::BTreeSet;

use super::{vars_of, AtomError, AtomStatement, Derivation, DerivationTrace, Rule};
use crate::team::{Elem, Team, Var, VarTuple};

fn dep_parts(a: &AtomStatement) -> Result<(&VarTuple, &VarTuple), AtomError> {
    match a {
        AtomStatement::Dep {
            determiner,
            determined,
        } => Ok((determiner, determined)),
        other => Err(AtomError::Unsupported {
            atom: other.to_string(),
            reason: "only dependence atoms are allowed here",
        }),
    }
}

fn tuple_of(vars: &[Var]) -> VarTuple {
    VarTuple::new(vars.to_vec())
}

/// Closure with the trace that derives `=(ȳ, closure)`. Returns the
/// closure in derivation order and the index of the final step.
fn traced_closure(t: &[AtomStatement], y: &VarTuple) -> Result<(Vec<Var>, DerivationTrace, usize), AtomError> {
    let deps = t.iter().map(dep_parts).collect::<Result<Vec<_>, _>>()?;
    let mut trace = DerivationTrace::new();
    let given: Vec<usize> = t.iter().map(|a| trace.push(Rule::Given, vec![], a.clone())).collect();
    let mut z: Vec<Var> = Vec::new();
    for v in y.iter() {
        if !z.contains(v) {
            z.push(v.clone());
        }
    }
    let mut cur = trace.push(
        Rule::DepReflexivity,
        vec![],
        AtomStatement::Dep {
            determiner: y.clone(),
            determined: y.clone(),
        },
    );
    loop {
        let mut changed = false;
        for (k, (u, v)) in deps.iter().enumerate() {
            if !u.iter().all(|w| z.contains(w)) || v.iter().all(|w| z.contains(w)) {
                continue;
            }
            // decomposing onto the whole closure would repeat `cur`
            let du = if u.set_eq(&tuple_of(&z)) {
                cur
            } else {
                trace.push(
                    Rule::Decomposition,
                    vec![cur],
                    AtomStatement::Dep {
                        determiner: y.clone(),
                        determined: (*u).clone(),
                    },
                )
            };
            let dv = trace.push(
                Rule::DepTransitivity,
                vec![du, given[k]],
                AtomStatement::Dep {
                    determiner: y.clone(),
                    determined: (*v).clone(),
                },
            );
            for w in v.iter() {
                if !z.contains(w) {
                    z.push(w.clone());
                }
            }
            cur = trace.push(
                Rule::Conjunction,
                vec![cur, dv],
                AtomStatement::Dep {
                    determiner: y.clone(),
                    determined: tuple_of(&z),
                },
            );
            changed = true;
        }
        if !changed {
            return Ok((z, trace, cur));
        }
    }
}

/// The variables `z` with `T ⊢ =(ȳ, z)`: start from `ȳ` and add `v̄` for
/// every `=(ū, v̄) ∈ T` with `ū` already inside. Order is order of
/// discovery.
pub fn armstrong_closure(t: &[AtomStatement], y: &VarTuple) -> Result<Vec<Var>, AtomError> {
    Ok(traced_closure(t, y)?.0)
}

/// Decides `T ⊢ goal` for dependence atoms; the trace ends in the goal.
pub fn armstrong_derives(t: &[AtomStatement], goal: &AtomStatement) -> Result<Derivation, AtomError> {
    let (y, x) = dep_parts(goal)?;
    let (z, mut trace, cur) = traced_closure(t, y)?;
    if !x.iter().all(|v| z.contains(v)) {
        return Ok(Derivation {
            derivable: false,
            trace: None,
        });
    }
    if trace.conclusion() != Some(goal) {
        trace.push(Rule::Decomposition, vec![cur], goal.clone());
    }
    Ok(Derivation {
        derivable: true,
        trace: Some(trace),
    })
}

/// The two-row team `{s, s'}` over domain `{0, 1}`: closure variables are 0
/// in both rows, the others are 0 in `s` and 1 in `s'`. Scope is every
/// variable of `T` and the goal. `None` when the goal is derivable.
pub fn counterexample_armstrong(t: &[AtomStatement], goal: &AtomStatement) -> Result<Option<Team>, AtomError> {
    let (y, x) = dep_parts(goal)?;
    let z = armstrong_closure(t, y)?;
    if x.iter().all(|v| z.contains(v)) {
        return Ok(None);
    }
    let scope = vars_of(t.iter().chain(std::iter::once(goal)));
    let s = vec![Elem(0); scope.len()];
    let s2: Vec<Elem> = scope
        .iter()
        .map(|v| Elem(u32::from(!z.contains(v))))
        .collect();
    let team = Team::from_rows(scope, BTreeSet::from([s, s2]))?;
    for a in t {
        if !a.holds(&team)? {
            return Err(AtomError::RecheckFailed);
        }
    }
    if goal.holds(&team)? {
        return Err(AtomError::RecheckFailed);
    }
    Ok(Some(team))
}
