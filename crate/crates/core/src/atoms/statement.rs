use std::fmt;

use super::AtomError;
use crate::syntax::{parse_atom, Atom};
use crate::team::{strip_comment, Team, Var, VarTuple};
use crate::teamsem::{dep_holds, ind_holds, EvalError};

/// A standalone dependence or independence atom, as manipulated by the
/// inference rules.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AtomStatement {
    Dep {
        determiner: VarTuple,
        determined: VarTuple,
    },
    Ind {
        left: VarTuple,
        condition: VarTuple,
        right: VarTuple,
    },
}

impl AtomStatement {
    pub fn dep(determiner: &[&str], determined: &[&str]) -> Self {
        AtomStatement::Dep {
            determiner: VarTuple::from_names(determiner),
            determined: VarTuple::from_names(determined),
        }
    }

    pub fn ind(left: &[&str], condition: &[&str], right: &[&str]) -> Self {
        AtomStatement::Ind {
            left: VarTuple::from_names(left),
            condition: VarTuple::from_names(condition),
            right: VarTuple::from_names(right),
        }
    }

    /// Parses `dep(x y ; z)` or `ind(u ; ; v)`.
    pub fn parse(text: &str) -> Result<Self, AtomError> {
        let atom = parse_atom(text).map_err(|source| AtomError::Parse { line: 1, source })?;
        AtomStatement::from_atom(&atom).ok_or(AtomError::NotDependencyAtom { line: 1 })
    }

    pub fn from_atom(a: &Atom) -> Option<Self> {
        match a {
            Atom::Dep {
                determiner,
                determined,
            } => Some(AtomStatement::Dep {
                determiner: determiner.clone(),
                determined: determined.clone(),
            }),
            Atom::Ind {
                left,
                condition,
                right,
            } => Some(AtomStatement::Ind {
                left: left.clone(),
                condition: condition.clone(),
                right: right.clone(),
            }),
            _ => None,
        }
    }

    pub fn to_atom(&self) -> Atom {
        match self {
            AtomStatement::Dep {
                determiner,
                determined,
            } => Atom::Dep {
                determiner: determiner.clone(),
                determined: determined.clone(),
            },
            AtomStatement::Ind {
                left,
                condition,
                right,
            } => Atom::Ind {
                left: left.clone(),
                condition: condition.clone(),
                right: right.clone(),
            },
        }
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<Var> {
        let tuples: Vec<&VarTuple> = match self {
            AtomStatement::Dep {
                determiner,
                determined,
            } => vec![determiner, determined],
            AtomStatement::Ind {
                left,
                condition,
                right,
            } => vec![left, condition, right],
        };
        let mut out: Vec<Var> = Vec::new();
        for v in tuples.into_iter().flat_map(|t| t.iter()) {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        out
    }

    pub fn is_dep(&self) -> bool {
        matches!(self, AtomStatement::Dep { .. })
    }

    /// `u ⊥ v` with single variables and an empty condition.
    pub fn as_unconditional_pair(&self) -> Option<(&Var, &Var)> {
        match self {
            AtomStatement::Ind {
                left,
                condition,
                right,
            } if condition.is_empty() && left.len() == 1 && right.len() == 1 => {
                Some((&left.vars()[0], &right.vars()[0]))
            }
            _ => None,
        }
    }

    /// Equality up to order and repetition inside each tuple.
    pub fn same_as(&self, other: &AtomStatement) -> bool {
        match (self, other) {
            (
                AtomStatement::Dep {
                    determiner: a,
                    determined: b,
                },
                AtomStatement::Dep {
                    determiner: c,
                    determined: d,
                },
            ) => a.set_eq(c) && b.set_eq(d),
            (
                AtomStatement::Ind {
                    left: a,
                    condition: b,
                    right: c,
                },
                AtomStatement::Ind {
                    left: d,
                    condition: e,
                    right: f,
                },
            ) => a.set_eq(d) && b.set_eq(e) && c.set_eq(f),
            _ => false,
        }
    }

    /// Whether `team` satisfies the atom.
    pub fn holds(&self, team: &Team) -> Result<bool, EvalError> {
        match self {
            AtomStatement::Dep {
                determiner,
                determined,
            } => dep_holds(team, determiner, determined),
            AtomStatement::Ind {
                left,
                condition,
                right,
            } => ind_holds(team, left, condition, right),
        }
    }
}

impl fmt::Display for AtomStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_atom())
    }
}

/// Parses an atom set: one atom per line, `#` comments and blank lines
/// ignored.
pub fn parse_atom_set(text: &str) -> Result<Vec<AtomStatement>, AtomError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let atom = parse_atom(line).map_err(|source| AtomError::Parse { line: i + 1, source })?;
        out.push(AtomStatement::from_atom(&atom).ok_or(AtomError::NotDependencyAtom { line: i + 1 })?);
    }
    Ok(out)
}

/// Variables of all atoms, in order of first occurrence.
pub fn vars_of<'a>(atoms: impl IntoIterator<Item = &'a AtomStatement>) -> Vec<Var> {
    let mut out: Vec<Var> = Vec::new();
    for a in atoms {
        for v in a.vars() {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let a = AtomStatement::parse("dep(x y ; z)").unwrap();
        assert_eq!(a, AtomStatement::dep(&["x", "y"], &["z"]));
        assert_eq!(a.to_string(), "dep(x y ; z)");
        let b = AtomStatement::parse("ind(u ; ; v)").unwrap();
        assert_eq!(b.to_string(), "ind(u ;; v)");
        assert!(b.as_unconditional_pair().is_some());
        assert!(AtomStatement::parse("x = y").is_err());
    }

    #[test]
    fn atom_sets() {
        let set = parse_atom_set("# T\ndep(y ; z)\n\ndep(z ; x)  # second\n").unwrap();
        assert_eq!(set.len(), 2);
        assert!(matches!(
            parse_atom_set("dep(y;z)\nR(x)"),
            Err(AtomError::NotDependencyAtom { line: 2 })
        ));
        assert_eq!(vars_of(&set), vec![Var::new("y"), Var::new("z"), Var::new("x")]);
    }

    #[test]
    fn set_view_equality() {
        let a = AtomStatement::ind(&["x", "y", "x"], &[], &["z"]);
        let b = AtomStatement::ind(&["y", "x"], &[], &["z"]);
        assert!(a.same_as(&b));
        assert!(!a.same_as(&AtomStatement::dep(&["x", "y"], &["z"])));
    }
}
