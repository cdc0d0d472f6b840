//! Reference semantics for tests, written straight from the definitions and
//! sharing no code with the library's evaluators.

#![allow(dead_code)]

use teamlogic::atoms::AtomStatement;
use teamlogic::{Team, Var, VarTuple};

/// A team as plain rows with named columns.
#[derive(Clone, Debug)]
pub struct Rows {
    pub scope: Vec<String>,
    pub rows: Vec<Vec<u32>>,
}

impl Rows {
    pub fn of_team(t: &Team) -> Rows {
        Rows {
            scope: t.scope().iter().map(|v| v.as_str().to_string()).collect(),
            rows: t.rows().map(|r| r.iter().map(|e| e.0).collect()).collect(),
        }
    }

    pub fn cols(&self, vars: &[Var]) -> Vec<usize> {
        vars.iter()
            .map(|v| {
                self.scope
                    .iter()
                    .position(|s| s == v.as_str())
                    .unwrap_or_else(|| panic!("{v} not in scope"))
            })
            .collect()
    }

    pub fn tuple(&self, t: &VarTuple) -> Vec<usize> {
        self.cols(t.vars())
    }

    pub fn holds(&self, a: &AtomStatement) -> bool {
        match a {
            AtomStatement::Dep { determiner, determined } => dep(&self.rows, &self.tuple(determiner), &self.tuple(determined)),
            AtomStatement::Ind { left, condition, right } => {
                ind(&self.rows, &self.tuple(left), &self.tuple(condition), &self.tuple(right))
            }
        }
    }
}

fn agree(s: &[u32], t: &[u32], cols: &[usize]) -> bool {
    cols.iter().all(|&c| s[c] == t[c])
}

/// `=(x̄, ȳ)`: rows agreeing on `x̄` agree on `ȳ`.
pub fn dep(rows: &[Vec<u32>], x: &[usize], y: &[usize]) -> bool {
    rows.iter()
        .all(|s| rows.iter().all(|t| !agree(s, t, x) || agree(s, t, y)))
}

/// `ȳ ⊥_x̄ z̄`: for rows `s, s'` agreeing on `x̄` some row takes `x̄ȳ` from
/// `s` and `z̄` from `s'`.
pub fn ind(rows: &[Vec<u32>], y: &[usize], x: &[usize], z: &[usize]) -> bool {
    rows.iter().all(|s| {
        rows.iter().all(|t| {
            !agree(s, t, x) || rows.iter().any(|r| agree(r, s, x) && agree(r, s, y) && agree(r, t, z))
        })
    })
}

/// All subsets of `0..n` in mask order.
pub fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|i| m >> i & 1 == 1).collect())
}
