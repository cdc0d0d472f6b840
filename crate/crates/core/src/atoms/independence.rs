//! Unconditional independence between single variables: the symmetry and
//! constancy rules decide it, and a two-layer team refutes everything else.

use std::collections::BTreeSet;

use super::{vars_of, AtomError, AtomStatement, Derivation, DerivationTrace, Rule};
use crate::structure::Structure;
use crate::team::{all_rows, Elem, Team, Var};

/// Teams larger than this are not materialized.
const MAX_ROWS: usize = 1 << 20;

fn pair(a: &AtomStatement) -> Result<(&Var, &Var), AtomError> {
    a.as_unconditional_pair().ok_or_else(|| AtomError::Unsupported {
        atom: a.to_string(),
        reason: "expected an unconditional atom between two single variables",
    })
}

fn ind(u: &Var, v: &Var) -> AtomStatement {
    AtomStatement::ind(&[u.as_str()], &[], &[v.as_str()])
}

/// `T ⊢ u ⊥ v` holds iff `u ⊥ v`, `v ⊥ u`, `u ⊥ u` or `v ⊥ v` is in `T`.
pub fn independence_derives(t: &[AtomStatement], goal: &AtomStatement) -> Result<Derivation, AtomError> {
    let pairs = t.iter().map(pair).collect::<Result<Vec<_>, _>>()?;
    let (u, v) = pair(goal)?;
    let find = |a: &Var, b: &Var| pairs.iter().position(|(p, q)| *p == a && *q == b);
    let mut trace = DerivationTrace::new();
    if let Some(k) = find(u, v) {
        trace.push(Rule::Given, vec![], t[k].clone());
    } else if let Some(k) = find(v, u) {
        let g = trace.push(Rule::Given, vec![], t[k].clone());
        trace.push(Rule::Symmetry, vec![g], goal.clone());
    } else if let Some(k) = find(u, u) {
        let g = trace.push(Rule::Given, vec![], t[k].clone());
        trace.push(Rule::Constancy, vec![g], goal.clone());
    } else if let Some(k) = find(v, v) {
        let g = trace.push(Rule::Given, vec![], t[k].clone());
        let c = trace.push(Rule::Constancy, vec![g], ind(v, u));
        trace.push(Rule::Symmetry, vec![c], goal.clone());
    } else {
        return Ok(Derivation {
            derivable: false,
            trace: None,
        });
    }
    Ok(Derivation {
        derivable: true,
        trace: Some(trace),
    })
}

/// For a non-derivable goal `y ⊥ x`: the domain is `V ∪ {0, 1}` with `V`
/// the variables `v` such that `v ⊥ v ∈ T`. The team is `X_0 ∪ X_1`, where
/// `X_d` sets each `v ∈ V` to the element `v`, sets `x` and `y` to `d`, and
/// lets every other variable range over the whole domain. `None` when the
/// goal is derivable.
pub fn counterexample_independence(
    t: &[AtomStatement],
    goal: &AtomStatement,
) -> Result<Option<(Structure, Team)>, AtomError> {
    if independence_derives(t, goal)?.derivable {
        return Ok(None);
    }
    let (y, x) = pair(goal)?;
    let mut constant: Vec<Var> = Vec::new();
    for a in t {
        let (p, q) = pair(a)?;
        if p == q && !constant.contains(p) {
            constant.push(p.clone());
        }
    }
    let mut names: Vec<String> = constant.iter().map(|v| v.as_str().to_string()).collect();
    names.push("0".into());
    names.push("1".into());
    let structure = Structure::new(names).map_err(|e| AtomError::TooLarge(e.to_string()))?;
    let zero = Elem(constant.len() as u32);
    let one = Elem(constant.len() as u32 + 1);

    let scope = vars_of(t.iter().chain(std::iter::once(goal)));
    let free: Vec<usize> = (0..scope.len())
        .filter(|&i| scope[i] != *x && scope[i] != *y && !constant.contains(&scope[i]))
        .collect();
    let domain: Vec<Elem> = structure.elements().collect();
    let rows_per_layer = domain
        .len()
        .checked_pow(free.len() as u32)
        .filter(|&n| n <= MAX_ROWS / 2)
        .ok_or_else(|| AtomError::TooLarge(format!("{}^{} rows", domain.len(), free.len())))?;
    let mut rows = BTreeSet::new();
    for d in [zero, one] {
        for values in all_rows(free.len(), &domain) {
            let mut row = vec![d; scope.len()];
            for (i, v) in scope.iter().enumerate() {
                if let Some(k) = constant.iter().position(|c| c == v) {
                    row[i] = Elem(k as u32);
                }
            }
            for (&i, a) in free.iter().zip(values) {
                row[i] = a;
            }
            rows.insert(row);
        }
    }
    debug_assert_eq!(rows.len(), 2 * rows_per_layer);
    let team = Team::from_rows(scope, rows)?;
    for a in t {
        if !a.holds(&team)? {
            return Err(AtomError::RecheckFailed);
        }
    }
    if goal.holds(&team)? {
        return Err(AtomError::RecheckFailed);
    }
    Ok(Some((structure, team)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i(a: &str, b: &str) -> AtomStatement {
        AtomStatement::ind(&[a], &[], &[b])
    }

    #[test]
    fn derivations() {
        for (t, goal) in [
            (vec![i("x", "y")], i("y", "x")),
            (vec![i("x", "x")], i("y", "x")),
            (vec![i("x", "x")], i("x", "y")),
            (vec![i("x", "y")], i("x", "y")),
        ] {
            let d = independence_derives(&t, &goal).unwrap();
            assert!(d.derivable, "{goal}");
            let trace = d.trace.unwrap();
            trace.verify(&t).unwrap();
            assert!(trace.conclusion().unwrap().same_as(&goal));
        }
        assert!(!independence_derives(&[i("x", "y"), i("u", "v")], &i("x", "u")).unwrap().derivable);
    }

    #[test]
    fn empty_premises_counterexample() {
        let (m, team) = counterexample_independence(&[], &i("y", "x")).unwrap().unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(team.len(), 2);
    }

    #[test]
    fn disjoint_premise_still_holds() {
        let t = vec![i("u", "v"), i("w", "w")];
        let (m, team) = counterexample_independence(&t, &i("x", "y")).unwrap().unwrap();
        assert_eq!(m.size(), 3);
        assert!(t[0].holds(&team).unwrap());
        assert!(!i("x", "y").holds(&team).unwrap());
    }

    #[test]
    fn derivable_gives_none() {
        assert!(counterexample_independence(&[i("x", "x")], &i("y", "x")).unwrap().is_none());
    }

    #[test]
    fn conditional_rejected() {
        let t = vec![AtomStatement::ind(&["x"], &["z"], &["y"])];
        assert!(independence_derives(&t, &i("x", "y")).is_err());
    }
}
