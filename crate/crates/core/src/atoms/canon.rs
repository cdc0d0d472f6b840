//! Canonical bitmask form of atoms over a fixed variable universe.
//! Order and repetition inside tuples are forgotten.

use super::{AtomError, AtomStatement};
use crate::team::{Var, VarTuple};

/// Hard limit imposed by the `u32` masks.
pub const MAX_UNIVERSE: usize = 32;

/// An atom with each tuple replaced by the set of its variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CanonAtom {
    Dep { determiner: u32, determined: u32 },
    Ind { left: u32, condition: u32, right: u32 },
}

impl CanonAtom {
    pub fn dep(determiner: u32, determined: u32) -> Self {
        CanonAtom::Dep {
            determiner,
            determined,
        }
    }

    pub fn ind(left: u32, condition: u32, right: u32) -> Self {
        CanonAtom::Ind {
            left,
            condition,
            right,
        }
    }
}

/// An ordered set of variables; bit `i` of a mask stands for `vars[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    vars: Vec<Var>,
}

impl Universe {
    pub fn new(vars: Vec<Var>) -> Result<Self, AtomError> {
        let mut out: Vec<Var> = Vec::new();
        for v in vars {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        if out.len() > MAX_UNIVERSE {
            return Err(AtomError::UniverseTooLarge(out.len(), MAX_UNIVERSE));
        }
        Ok(Universe { vars: out })
    }

    pub fn from_names(names: &[&str]) -> Result<Self, AtomError> {
        Universe::new(names.iter().map(|n| Var::new(n)).collect())
    }

    /// The variables of `atoms`, in order of first occurrence.
    pub fn of_atoms<'a>(atoms: impl IntoIterator<Item = &'a AtomStatement>) -> Result<Self, AtomError> {
        Universe::new(super::vars_of(atoms))
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn full(&self) -> u32 {
        if self.vars.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.vars.len()) - 1
        }
    }

    pub fn mask(&self, t: &VarTuple) -> Result<u32, AtomError> {
        let mut m = 0;
        for v in t.iter() {
            let i = self
                .vars
                .iter()
                .position(|w| w == v)
                .ok_or_else(|| AtomError::OutsideUniverse(v.clone()))?;
            m |= 1 << i;
        }
        Ok(m)
    }

    /// The variables of `m` in universe order.
    pub fn tuple(&self, m: u32) -> VarTuple {
        VarTuple::new(
            self.vars
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect(),
        )
    }

    pub fn canon(&self, a: &AtomStatement) -> Result<CanonAtom, AtomError> {
        Ok(match a {
            AtomStatement::Dep {
                determiner,
                determined,
            } => CanonAtom::dep(self.mask(determiner)?, self.mask(determined)?),
            AtomStatement::Ind {
                left,
                condition,
                right,
            } => CanonAtom::ind(self.mask(left)?, self.mask(condition)?, self.mask(right)?),
        })
    }

    pub fn statement(&self, c: CanonAtom) -> AtomStatement {
        match c {
            CanonAtom::Dep {
                determiner,
                determined,
            } => AtomStatement::Dep {
                determiner: self.tuple(determiner),
                determined: self.tuple(determined),
            },
            CanonAtom::Ind {
                left,
                condition,
                right,
            } => AtomStatement::Ind {
                left: self.tuple(left),
                condition: self.tuple(condition),
                right: self.tuple(right),
            },
        }
    }
}

/// All submasks of `m`, including `m` and `0`.
pub fn submasks(m: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(m);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & m) };
        Some(cur)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let u = Universe::from_names(&["x", "y", "z"]).unwrap();
        let a = AtomStatement::ind(&["z", "x", "z"], &[], &["y"]);
        let c = u.canon(&a).unwrap();
        assert_eq!(c, CanonAtom::ind(0b101, 0, 0b010));
        assert_eq!(u.statement(c).to_string(), "ind(x z ;; y)");
        assert!(u.canon(&AtomStatement::dep(&["w"], &[])).is_err());
    }

    #[test]
    fn submask_count() {
        assert_eq!(submasks(0b1011).count(), 8);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }
}
