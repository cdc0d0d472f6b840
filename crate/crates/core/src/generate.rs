//! Seeded random formulas, teams and structures for property tests and
//! benchmarks.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::structure::Structure;
use crate::syntax::{Atom, Formula, Term};
use crate::team::{all_rows, Elem, Team, Var, VarTuple};

/// Shape of generated formulas. Atoms only mention variables in scope:
/// the free variables plus those bound on the way down, so every output
/// has free variables among `free_vars`.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    pub free_vars: Vec<Var>,
    /// Relation symbols with arities available to first-order atoms.
    pub relations: Vec<(String, usize)>,
    pub max_depth: usize,
    pub dependency_atoms: bool,
    pub quantifiers: bool,
}

impl FormulaGen {
    /// Depth 3, dependency atoms and quantifiers on, no relations.
    ///
    /// # Panics
    /// If `free_vars` is empty.
    pub fn new(free_vars: &[&str]) -> FormulaGen {
        assert!(!free_vars.is_empty(), "at least one free variable is needed");
        FormulaGen {
            free_vars: free_vars.iter().map(|n| Var::new(n)).collect(),
            relations: Vec::new(),
            max_depth: 3,
            dependency_atoms: true,
            quantifiers: true,
        }
    }

    pub fn with_relation(mut self, name: &str, arity: usize) -> FormulaGen {
        self.relations.push((name.to_string(), arity));
        self
    }

    pub fn max_depth(mut self, d: usize) -> FormulaGen {
        self.max_depth = d;
        self
    }

    /// No dependence or independence atoms: the output is first-order.
    pub fn first_order(mut self) -> FormulaGen {
        self.dependency_atoms = false;
        self
    }

    pub fn quantifier_free(mut self) -> FormulaGen {
        self.quantifiers = false;
        self
    }

    pub fn generate<R: Rng + ?Sized>(&self, rng: &mut R) -> Formula {
        let mut scope = self.free_vars.clone();
        self.node(rng, self.max_depth, &mut scope)
    }

    fn node<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize, scope: &mut Vec<Var>) -> Formula {
        if depth == 0 || rng.random_bool(0.25) {
            return self.leaf(rng, scope);
        }
        let kinds = if self.quantifiers { 4 } else { 2 };
        match rng.random_range(0..kinds) {
            0 => Formula::and(self.node(rng, depth - 1, scope), self.node(rng, depth - 1, scope)),
            1 => Formula::or(self.node(rng, depth - 1, scope), self.node(rng, depth - 1, scope)),
            k => {
                // reuse a name now and then to exercise shadowing
                let v = if rng.random_bool(0.2) {
                    scope.choose(rng).expect("scope is non-empty").clone()
                } else {
                    Var::new(&format!("b{}", scope.len()))
                };
                scope.push(v.clone());
                let body = self.node(rng, depth - 1, scope);
                scope.pop();
                if k == 2 {
                    Formula::Exists(v, Box::new(body))
                } else {
                    Formula::Forall(v, Box::new(body))
                }
            }
        }
    }

    fn leaf<R: Rng + ?Sized>(&self, rng: &mut R, scope: &[Var]) -> Formula {
        let pick = |rng: &mut R| scope.choose(rng).expect("scope is non-empty").clone();
        let tuple = |rng: &mut R, lo: usize| {
            let k = rng.random_range(lo..=2);
            VarTuple::new((0..k).map(|_| pick(rng)).collect())
        };
        let kinds = 1 + usize::from(!self.relations.is_empty()) + 2 * usize::from(self.dependency_atoms);
        let mut kind = rng.random_range(0..kinds);
        if self.relations.is_empty() && kind >= 1 {
            kind += 1;
        }
        let atom = match kind {
            0 => Atom::Eq(Term::Var(pick(rng)), Term::Var(pick(rng))),
            1 => {
                let (name, arity) = self.relations.choose(rng).expect("checked non-empty");
                Atom::Rel(name.clone(), (0..*arity).map(|_| Term::Var(pick(rng))).collect())
            }
            2 => Atom::Dep {
                determiner: tuple(rng, 0),
                determined: tuple(rng, 1),
            },
            _ => Atom::Ind {
                left: tuple(rng, 1),
                condition: tuple(rng, 0),
                right: tuple(rng, 1),
            },
        };
        let negate_prob = if atom.is_dependency() { 0.1 } else { 0.3 };
        if rng.random_bool(negate_prob) {
            Formula::Not(atom)
        } else {
            Formula::Atom(atom)
        }
    }
}

/// A team over `scope` with elements below `domain` and at most `max_rows`
/// distinct rows (possibly empty).
pub fn random_team<R: Rng + ?Sized>(rng: &mut R, scope: &[Var], domain: usize, max_rows: usize) -> Team {
    let target = rng.random_range(0..=max_rows);
    let mut rows = BTreeSet::new();
    for _ in 0..target {
        rows.insert(
            (0..scope.len())
                .map(|_| Elem(rng.random_range(0..domain as u32)))
                .collect::<Vec<_>>(),
        );
    }
    Team::from_rows(scope.to_vec(), rows).expect("rows fit the scope")
}

/// Each of the `|domain|^|scope|` rows kept with probability `density`.
pub fn random_dense_team<R: Rng + ?Sized>(rng: &mut R, scope: &[Var], domain: usize, density: f64) -> Team {
    let elems: Vec<Elem> = (0..domain as u32).map(Elem).collect();
    let rows = all_rows(scope.len(), &elems)
        .into_iter()
        .filter(|_| rng.random_bool(density));
    Team::from_rows(scope.to_vec(), rows).expect("rows fit the scope")
}

/// A structure of the given size interpreting each relation with every
/// tuple present with probability one half.
pub fn random_structure<R: Rng + ?Sized>(rng: &mut R, size: usize, relations: &[(String, usize)]) -> Structure {
    let mut m = Structure::of_size(size);
    let elems: Vec<Elem> = m.elements().collect();
    for (name, arity) in relations {
        let tuples: Vec<Vec<Elem>> = all_rows(*arity, &elems)
            .into_iter()
            .filter(|_| rng.random_bool(0.5))
            .collect();
        m.set_relation(name, *arity, tuples).expect("fresh relation");
    }
    m
}
