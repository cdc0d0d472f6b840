//! ESO evaluation: the matrix is grounded over the finite domain, with the
//! team relation and the vocabulary folded to constants, and the remaining
//! propositional problem over the relation variables goes to a SAT solver.

use std::collections::HashMap;

use varisat::{ExtendFormula, Lit, Solver};

use super::{EsoError, EsoSentence, Fo};
use crate::structure::Structure;
use crate::syntax::Term;
use crate::team::{Elem, Team, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EsoLimits {
    /// Each relation variable may have at most `2^bits` ground atoms.
    pub max_relation_bits: u32,
    /// Cap on the size of the ground formula.
    pub max_ground_nodes: usize,
}

impl Default for EsoLimits {
    fn default() -> Self {
        EsoLimits {
            max_relation_bits: 22,
            max_ground_nodes: 1 << 24,
        }
    }
}

/// `(M, rel(X)) ⊨ sentence` with default limits.
pub fn eval_eso(structure: &Structure, team: &Team, sentence: &EsoSentence) -> Result<bool, EsoError> {
    eval_eso_with(structure, team, sentence, EsoLimits::default())
}

pub fn eval_eso_with(
    structure: &Structure,
    team: &Team,
    sentence: &EsoSentence,
    limits: EsoLimits,
) -> Result<bool, EsoError> {
    if team.scope() != sentence.scope.as_slice() {
        return Err(EsoError::ScopeMismatch {
            expected: sentence.scope.clone(),
            found: team.scope().to_vec(),
        });
    }
    let m = structure.size() as u128;
    let mut relvars = HashMap::new();
    for (i, (name, k)) in sentence.relation_vars.iter().enumerate() {
        let atoms = m.saturating_pow(*k as u32);
        if atoms > 1u128 << limits.max_relation_bits {
            return Err(EsoError::TooLarge(format!(
                "{name}/{k} has {atoms} ground atoms, more than 2^{}",
                limits.max_relation_bits
            )));
        }
        relvars.insert(name.as_str(), (i, *k));
    }
    let mut g = Grounder {
        structure,
        team,
        team_relation: &sentence.team_relation,
        relvars,
        lits: HashMap::new(),
        solver: Solver::new(),
        env: Vec::new(),
        nodes: 0,
        limit: limits.max_ground_nodes,
        domain: structure.elements().collect(),
    };
    let root = g.ground(&sentence.matrix, true)?;
    match root {
        G::Const(b) => Ok(b),
        other => {
            let top = g.encode(&other);
            g.solver.add_clause(&[top]);
            g.solver.solve().map_err(|e| EsoError::Solver(e.to_string()))
        }
    }
}

/// Ground formula in negation normal form; constants only at the root.
#[derive(Clone, Debug)]
enum G {
    Const(bool),
    Lit(Lit),
    And(Vec<G>),
    Or(Vec<G>),
}

fn combine(conjunctive: bool, parts: Vec<G>) -> G {
    let mut out = Vec::with_capacity(parts.len());
    for p in parts {
        match p {
            G::Const(b) if b == conjunctive => {}
            G::Const(b) => return G::Const(b),
            G::And(xs) if conjunctive => out.extend(xs),
            G::Or(xs) if !conjunctive => out.extend(xs),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => G::Const(conjunctive),
        1 => out.pop().expect("one element"),
        _ if conjunctive => G::And(out),
        _ => G::Or(out),
    }
}

struct Grounder<'a> {
    structure: &'a Structure,
    team: &'a Team,
    team_relation: &'a str,
    relvars: HashMap<&'a str, (usize, usize)>,
    lits: HashMap<(usize, Vec<Elem>), Lit>,
    solver: Solver<'static>,
    env: Vec<(Var, Elem)>,
    nodes: usize,
    limit: usize,
    domain: Vec<Elem>,
}

impl Grounder<'_> {
    fn value(&self, t: &Term) -> Result<Elem, EsoError> {
        match t {
            Term::Var(v) => self
                .env
                .iter()
                .rev()
                .find(|(w, _)| w == v)
                .map(|(_, e)| *e)
                .ok_or_else(|| EsoError::UnboundVariable(v.clone())),
            Term::Const(c) => self
                .structure
                .constant(c)
                .ok_or_else(|| EsoError::UnknownConstant(c.clone())),
        }
    }

    fn tick(&mut self) -> Result<(), EsoError> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(EsoError::TooLarge(format!(
                "ground formula exceeds {} nodes",
                self.limit
            )));
        }
        Ok(())
    }

    fn ground(&mut self, f: &Fo, pos: bool) -> Result<G, EsoError> {
        self.tick()?;
        Ok(match f {
            Fo::True => G::Const(pos),
            Fo::False => G::Const(!pos),
            Fo::Eq(a, b) => G::Const((self.value(a)? == self.value(b)?) == pos),
            Fo::Rel(name, args) => {
                let tuple = args.iter().map(|t| self.value(t)).collect::<Result<Vec<_>, _>>()?;
                if name == self.team_relation {
                    G::Const(self.team.contains_row(&tuple) == pos)
                } else if let Some(&(i, k)) = self.relvars.get(name.as_str()) {
                    if k != tuple.len() {
                        return Err(EsoError::ArityMismatch {
                            name: name.clone(),
                            expected: k,
                            found: tuple.len(),
                        });
                    }
                    let solver = &mut self.solver;
                    let lit = *self.lits.entry((i, tuple)).or_insert_with(|| solver.new_lit());
                    G::Lit(if pos { lit } else { !lit })
                } else {
                    let rel = self
                        .structure
                        .relation(name)
                        .ok_or_else(|| EsoError::UnknownRelation(name.clone()))?;
                    if rel.arity != tuple.len() {
                        return Err(EsoError::ArityMismatch {
                            name: name.clone(),
                            expected: rel.arity,
                            found: tuple.len(),
                        });
                    }
                    G::Const(rel.tuples.contains(&tuple) == pos)
                }
            }
            Fo::Not(a) => self.ground(a, !pos)?,
            Fo::And(a, b) | Fo::Or(a, b) => {
                let conjunctive = matches!(f, Fo::And(..)) == pos;
                self.binary(conjunctive, (a, pos), (b, pos))?
            }
            Fo::Implies(a, b) => self.binary(!pos, (a, !pos), (b, pos))?,
            Fo::Exists(v, body) | Fo::Forall(v, body) => {
                let conjunctive = matches!(f, Fo::Forall(..)) == pos;
                if !body.has_free(v) {
                    return self.ground(body, pos);
                }
                let forced = if pos { self.forced(v, body, !conjunctive)? } else { None };
                let values = match forced {
                    Some(e) => vec![e],
                    None => self.domain.clone(),
                };
                let mut parts = Vec::with_capacity(values.len());
                for e in values {
                    self.env.push((v.clone(), e));
                    let part = self.ground(body, pos);
                    self.env.pop();
                    match part? {
                        G::Const(b) if b != conjunctive => return Ok(G::Const(b)),
                        p => parts.push(p),
                    }
                }
                combine(conjunctive, parts)
            }
        })
    }

    fn binary(&mut self, conjunctive: bool, a: (&Fo, bool), b: (&Fo, bool)) -> Result<G, EsoError> {
        let ga = self.ground(a.0, a.1)?;
        if matches!(ga, G::Const(x) if x != conjunctive) {
            return Ok(ga);
        }
        let gb = self.ground(b.0, b.1)?;
        Ok(combine(conjunctive, vec![ga, gb]))
    }

    /// A value that `v` must take for the quantified body to matter: an
    /// equation `v = t` among the conjuncts of an existential body, or of
    /// the antecedent of a universal one, where `t` is already known.
    fn forced(&self, v: &Var, body: &Fo, existential: bool) -> Result<Option<Elem>, EsoError> {
        let mut inner = body;
        let mut shadowed: Vec<&Var> = Vec::new();
        loop {
            match inner {
                Fo::Exists(w, b) if existential => {
                    shadowed.push(w);
                    inner = b;
                }
                Fo::Forall(w, b) if !existential => {
                    shadowed.push(w);
                    inner = b;
                }
                _ => break,
            }
        }
        if shadowed.contains(&v) {
            return Ok(None);
        }
        let scope = if existential {
            inner
        } else {
            match inner {
                Fo::Implies(a, _) => a,
                _ => return Ok(None),
            }
        };
        let mut conjuncts = Vec::new();
        flatten_and(scope, &mut conjuncts);
        for c in conjuncts {
            if let Fo::Eq(a, b) = c {
                let other = match (a, b) {
                    (Term::Var(x), t) | (t, Term::Var(x)) if x == v => t,
                    _ => continue,
                };
                let known = match other {
                    Term::Const(_) => true,
                    Term::Var(w) => w != v && !shadowed.contains(&w) && self.env.iter().any(|(u, _)| u == w),
                };
                if known {
                    return Ok(Some(self.value(other)?));
                }
            }
        }
        Ok(None)
    }

    /// One-sided Tseitin encoding; sound for satisfiability since the
    /// ground formula is in negation normal form.
    fn encode(&mut self, g: &G) -> Lit {
        match g {
            G::Lit(l) => *l,
            G::Const(_) => unreachable!("constants are folded away below the root"),
            G::And(xs) => {
                let t = self.solver.new_lit();
                for x in xs {
                    let l = self.encode(x);
                    self.solver.add_clause(&[!t, l]);
                }
                t
            }
            G::Or(xs) => {
                let t = self.solver.new_lit();
                let mut clause = vec![!t];
                for x in xs {
                    clause.push(self.encode(x));
                }
                self.solver.add_clause(&clause);
                t
            }
        }
    }
}

fn flatten_and<'f>(f: &'f Fo, out: &mut Vec<&'f Fo>) {
    match f {
        Fo::And(a, b) => {
            flatten_and(a, out);
            flatten_and(b, out);
        }
        other => out.push(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eso::translate;
    use crate::syntax::parse;
    use crate::team::VarTuple;

    fn run(f: &str, team: &Team) -> bool {
        let m = Structure::of_size(2);
        let s = translate(&parse(f).unwrap(), &VarTuple::new(team.scope().to_vec())).unwrap();
        eval_eso(&m, team, &s).unwrap()
    }

    #[test]
    fn coin_and_diagonal() {
        let coin = Team::from_ids(&["x", "y"], &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]).unwrap();
        let diag = Team::from_ids(&["x", "y"], &[&[0, 0], &[1, 1]]).unwrap();
        assert!(run("ind(x ;; y)", &coin));
        assert!(!run("ind(x ;; y)", &diag));
        assert!(run("dep(x ; y)", &diag));
        assert!(!run("dep(x ; y)", &coin));
    }

    #[test]
    fn empty_team() {
        let empty = Team::from_ids(&["x", "y"], &[]).unwrap();
        assert!(run("ind(x ;; y) and not dep(x ; y)", &empty));
        assert!(run("exists z. (ind(z ;; x) and z = y and not x = x)", &empty));
    }

    #[test]
    fn quantifiers_need_the_solver() {
        let t = Team::from_ids(&["x"], &[&[0], &[1]]).unwrap();
        assert!(run("exists y. (dep(; y) and ind(y ;; x))", &t));
        assert!(!run("exists y. (dep(; y) and not y = x)", &t));
        assert!(run("exists y. (dep(x ; y) and not y = x)", &t));
        assert!(run("forall y. ind(x ;; y)", &t));
        assert!(!run("forall y. dep(x ; y)", &t));
        assert!(run("exists x. dep(; x)", &t));
    }

    #[test]
    fn scope_must_match() {
        let m = Structure::of_size(2);
        let s = translate(&parse("x = y").unwrap(), &VarTuple::from_names(&["x", "y"])).unwrap();
        let t = Team::from_ids(&["y", "x"], &[&[0, 0]]).unwrap();
        assert!(matches!(eval_eso(&m, &t, &s), Err(EsoError::ScopeMismatch { .. })));
    }

    #[test]
    fn relation_cap() {
        let m = Structure::of_size(2);
        let s = translate(&parse("exists y. dep(x ; y)").unwrap(), &VarTuple::from_names(&["x"])).unwrap();
        let t = Team::from_ids(&["x"], &[&[0]]).unwrap();
        let limits = EsoLimits {
            max_relation_bits: 1,
            ..EsoLimits::default()
        };
        assert!(matches!(eval_eso_with(&m, &t, &s, limits), Err(EsoError::TooLarge(_))));
    }
}
