use std::collections::BTreeSet;

use super::{eval_eso, EsoError, EsoSentence, Fo};
use crate::structure::Structure;
use crate::syntax::{desugar, Atom, Formula};
use crate::team::{Semantics, Team, Var, VarTuple};
use crate::teamsem::evaluate;

struct Translator {
    /// Names already used by relations (vocabulary and fresh ones).
    taken_relations: BTreeSet<String>,
    /// Names used by variables of the formula and the scope.
    taken_vars: BTreeSet<String>,
    relation_vars: Vec<(String, usize)>,
    next: usize,
}

impl Translator {
    fn fresh_relation(&mut self, arity: usize) -> String {
        loop {
            self.next += 1;
            let name = format!("S{}", self.next);
            if self.taken_relations.insert(name.clone()) {
                self.relation_vars.push((name.clone(), arity));
                return name;
            }
        }
    }

    fn fresh_var(&mut self, base: &str) -> Var {
        let mut k = 0;
        loop {
            let name = if k == 0 { base.to_string() } else { format!("{base}{k}") };
            if self.taken_vars.insert(name.clone()) {
                return Var::new(&name);
            }
            k += 1;
        }
    }

    /// The sentence saying that the team named `rel` over `scope`
    /// satisfies `f`. Translations of the connectives and quantifiers
    /// follow the standard construction for dependence logic, adapted to
    /// lax semantics.
    fn tr(&mut self, f: &Formula, rel: &str, scope: &[Var]) -> Fo {
        let all = |body: Fo| Fo::forall_all(scope, Fo::implies(Fo::rel(rel, scope), body));
        match f {
            // flat: the team satisfies f iff every row does
            _ if !f.has_dependency_atoms() => all(fo_formula(f)),
            Formula::Not(_) => Fo::forall_all(scope, Fo::not(Fo::rel(rel, scope))),
            Formula::Atom(Atom::Dep {
                determiner,
                determined,
            }) => ind_clause(rel, scope, determined, determiner, determined),
            Formula::Atom(Atom::Ind {
                left,
                condition,
                right,
            }) => ind_clause(rel, scope, left, condition, right),
            Formula::Atom(_) => unreachable!("first-order formulas handled above"),
            Formula::And(a, b) => {
                let ta = self.tr(a, rel, scope);
                let tb = self.tr(b, rel, scope);
                Fo::and(ta, tb)
            }
            Formula::Or(a, b) => {
                let n = scope.len();
                let s1 = self.fresh_relation(n);
                let s2 = self.fresh_relation(n);
                let cover = Fo::forall_all(
                    scope,
                    Fo::implies(Fo::rel(rel, scope), Fo::or(Fo::rel(&s1, scope), Fo::rel(&s2, scope))),
                );
                let sub1 = Fo::forall_all(scope, Fo::implies(Fo::rel(&s1, scope), Fo::rel(rel, scope)));
                let sub2 = Fo::forall_all(scope, Fo::implies(Fo::rel(&s2, scope), Fo::rel(rel, scope)));
                let ta = self.tr(a, &s1, scope);
                let tb = self.tr(b, &s2, scope);
                Fo::conj(vec![cover, sub1, sub2, ta, tb])
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let universal = matches!(f, Formula::Forall(..));
                let (scope2, pos) = match scope.iter().position(|w| w == v) {
                    Some(p) => (scope.to_vec(), p),
                    None => {
                        let mut s = scope.to_vec();
                        s.push(v.clone());
                        (s, scope.len())
                    }
                };
                let s2 = self.fresh_relation(scope2.len());
                let axioms = if pos == scope.len() {
                    // new column
                    let new_rel = Fo::rel(&s2, &scope2);
                    if universal {
                        Fo::forall_all(
                            &scope2,
                            Fo::and(
                                Fo::implies(new_rel.clone(), Fo::rel(rel, scope)),
                                Fo::implies(Fo::rel(rel, scope), new_rel),
                            ),
                        )
                    } else {
                        Fo::and(
                            Fo::forall_all(
                                scope,
                                Fo::implies(Fo::rel(rel, scope), Fo::Exists(v.clone(), Box::new(new_rel.clone()))),
                            ),
                            Fo::forall_all(&scope2, Fo::implies(new_rel, Fo::rel(rel, scope))),
                        )
                    }
                } else {
                    // the column of `v` is overwritten
                    let w = self.fresh_var("w");
                    let mut replaced = scope.to_vec();
                    replaced[pos] = w.clone();
                    let old_some = Fo::Exists(w.clone(), Box::new(Fo::rel(rel, &replaced)));
                    let new_some = Fo::Exists(w.clone(), Box::new(Fo::rel(&s2, &replaced)));
                    if universal {
                        Fo::forall_all(
                            scope,
                            Fo::and(
                                Fo::implies(Fo::rel(&s2, scope), old_some.clone()),
                                Fo::implies(old_some, Fo::rel(&s2, scope)),
                            ),
                        )
                    } else {
                        Fo::and(
                            Fo::forall_all(scope, Fo::implies(Fo::rel(rel, scope), new_some)),
                            Fo::forall_all(scope, Fo::implies(Fo::rel(&s2, scope), old_some)),
                        )
                    }
                };
                let tb = self.tr(body, &s2, &scope2);
                Fo::and(axioms, tb)
            }
            Formula::SlashedExists { .. } | Formula::Henkin { .. } => {
                unreachable!("translate desugars its input")
            }
        }
    }
}

/// A dependency-free formula read as an ordinary first-order formula.
fn fo_formula(f: &Formula) -> Fo {
    match f {
        Formula::Atom(a) => fo_atom(a),
        Formula::Not(a) => Fo::not(fo_atom(a)),
        Formula::And(a, b) => Fo::and(fo_formula(a), fo_formula(b)),
        Formula::Or(a, b) => Fo::or(fo_formula(a), fo_formula(b)),
        Formula::Exists(v, b) => Fo::Exists(v.clone(), Box::new(fo_formula(b))),
        Formula::Forall(v, b) => Fo::Forall(v.clone(), Box::new(fo_formula(b))),
        Formula::SlashedExists { .. } | Formula::Henkin { .. } => {
            unreachable!("translate desugars its input")
        }
    }
}

fn fo_atom(a: &Atom) -> Fo {
    match a {
        Atom::Eq(x, y) => Fo::Eq(x.clone(), y.clone()),
        Atom::Rel(name, args) => Fo::Rel(name.clone(), args.clone()),
        _ => unreachable!("dependency atoms are translated separately"),
    }
}

fn numbered(base: &str, n: usize) -> Vec<Var> {
    (1..=n).map(|i| Var::new(&format!("{base}{i}"))).collect()
}

fn positions(scope: &[Var], t: &VarTuple) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for v in t.iter() {
        let p = scope.iter().position(|w| w == v).expect("scope checked");
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// `∀ȳ ∀z̄ ((S(ȳ) ∧ S(z̄) ∧ y_J = z_J) → ∃ū (S(ū) ∧ u_J = y_J ∧ u_I = y_I ∧ u_K = z_K))`
/// for `left ⊥_condition right` with column sets `I`, `J`, `K`.
fn ind_clause(rel: &str, scope: &[Var], left: &VarTuple, condition: &VarTuple, right: &VarTuple) -> Fo {
    let n = scope.len();
    let (y, z, u) = (numbered("y", n), numbered("z", n), numbered("u", n));
    let (i, j, k) = (positions(scope, left), positions(scope, condition), positions(scope, right));
    let mut antecedent = vec![Fo::rel(rel, &y), Fo::rel(rel, &z)];
    antecedent.extend(j.iter().map(|&p| Fo::var_eq(&y[p], &z[p])));
    let mut consequent = vec![Fo::rel(rel, &u)];
    consequent.extend(j.iter().map(|&p| Fo::var_eq(&u[p], &y[p])));
    consequent.extend(i.iter().map(|&p| Fo::var_eq(&u[p], &y[p])));
    consequent.extend(k.iter().map(|&p| Fo::var_eq(&u[p], &z[p])));
    let body = Fo::implies(Fo::conj(antecedent), Fo::exists_all(&u, Fo::conj(consequent)));
    Fo::forall_all(&y, Fo::forall_all(&z, body))
}

/// `τ_φ(S)`: an ESO sentence true of `(M, rel(X))` exactly when `X`
/// satisfies `f` in `M` under lax semantics, for teams `X` over `scope`.
pub fn translate(f: &Formula, scope: &VarTuple) -> Result<EsoSentence, EsoError> {
    let f = desugar(f)?;
    let scope: Vec<Var> = scope.vars().to_vec();
    for (i, v) in scope.iter().enumerate() {
        if scope[..i].contains(v) {
            return Err(EsoError::DuplicateScopeVariable(v.clone()));
        }
    }
    for v in f.free_vars() {
        if !scope.contains(&v) {
            return Err(EsoError::UnboundVariable(v));
        }
    }
    let mut taken_relations: BTreeSet<String> = BTreeSet::new();
    f.visit_atoms(&mut |a| {
        if let Atom::Rel(name, _) = a {
            taken_relations.insert(name.clone());
        }
    });
    let mut taken_vars: BTreeSet<String> = scope.iter().map(|v| v.as_str().to_string()).collect();
    collect_bound(&f, &mut taken_vars);
    let team_relation = ["S", "S0", "T", "X"]
        .into_iter()
        .find(|n| !taken_relations.contains(*n))
        .map(str::to_string)
        .unwrap_or_else(|| format!("S{}", taken_relations.len()));
    taken_relations.insert(team_relation.clone());
    let mut t = Translator {
        taken_relations,
        taken_vars,
        relation_vars: Vec::new(),
        next: 0,
    };
    let matrix = t.tr(&f, &team_relation, &scope);
    Ok(EsoSentence {
        team_relation,
        scope,
        relation_vars: t.relation_vars,
        matrix,
    })
}

fn collect_bound(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_bound(a, out);
            collect_bound(b, out);
        }
        Formula::Exists(v, b) | Formula::Forall(v, b) => {
            out.insert(v.as_str().to_string());
            collect_bound(b, out);
        }
        _ => {}
    }
}

/// Both sides of the translation on one instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TranslationCheck {
    /// Team semantics, lax.
    pub team_semantics: bool,
    /// The translated sentence on `(M, rel(X))`.
    pub eso: bool,
}

impl TranslationCheck {
    pub fn agree(&self) -> bool {
        self.team_semantics == self.eso
    }
}

/// Evaluates `f` on `team` directly and through its translation.
pub fn check_translation(structure: &Structure, team: &Team, f: &Formula) -> Result<TranslationCheck, EsoError> {
    let g = desugar(f)?;
    let team_semantics = evaluate(structure, team, &g, Semantics::Lax)?;
    let sentence = translate(&g, &VarTuple::new(team.scope().to_vec()))?;
    let eso = eval_eso(structure, team, &sentence)?;
    Ok(TranslationCheck { team_semantics, eso })
}
