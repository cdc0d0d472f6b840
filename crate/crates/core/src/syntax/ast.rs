use std::collections::BTreeMap;
use std::fmt;

use crate::team::{Var, VarTuple};

/// Terms are variables or constant symbols; there are no function symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Const(String),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Var::new(name))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Const(c) => f.write_str(c),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Eq(Term, Term),
    Rel(String, Vec<Term>),
    /// `=(determiner, determined)`: the first tuple functionally
    /// determines the second.
    Dep {
        determiner: VarTuple,
        determined: VarTuple,
    },
    /// `left ⊥_condition right`.
    Ind {
        left: VarTuple,
        condition: VarTuple,
        right: VarTuple,
    },
}

impl Atom {
    /// Dependence and independence atoms, as opposed to first-order ones.
    pub fn is_dependency(&self) -> bool {
        matches!(self, Atom::Dep { .. } | Atom::Ind { .. })
    }

    fn push_vars(&self, out: &mut Vec<Var>) {
        let mut add = |v: &Var| {
            if !out.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            Atom::Eq(a, b) => {
                for t in [a, b] {
                    if let Term::Var(v) = t {
                        add(v);
                    }
                }
            }
            Atom::Rel(_, ts) => {
                for t in ts {
                    if let Term::Var(v) = t {
                        add(v);
                    }
                }
            }
            Atom::Dep {
                determiner,
                determined,
            } => {
                determiner.iter().chain(determined.iter()).for_each(add);
            }
            Atom::Ind {
                left,
                condition,
                right,
            } => {
                left.iter()
                    .chain(condition.iter())
                    .chain(right.iter())
                    .for_each(add);
            }
        }
    }
}

/// Independence-logic formulas. Negation only ever sits on an atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Atom),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
    Forall(Var, Box<Formula>),
    /// `∃x/ȳ φ`: the witness for `var` must not depend on `slashed`.
    SlashedExists {
        var: Var,
        slashed: VarTuple,
        body: Box<Formula>,
    },
    /// Branching prefix; each row is `(∀ universal, ∃ existential)`.
    Henkin {
        rows: Vec<(Var, Var)>,
        matrix: Box<Formula>,
    },
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(Var::new(v), Box::new(body))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(Var::new(v), Box::new(body))
    }

    pub fn eq(a: &str, b: &str) -> Formula {
        Formula::Atom(Atom::Eq(term_of(a), term_of(b)))
    }

    pub fn rel(name: &str, args: &[&str]) -> Formula {
        Formula::Atom(Atom::Rel(name.to_string(), args.iter().map(|a| term_of(a)).collect()))
    }

    pub fn dep(determiner: &[&str], determined: &[&str]) -> Formula {
        Formula::Atom(Atom::Dep {
            determiner: VarTuple::from_names(determiner),
            determined: VarTuple::from_names(determined),
        })
    }

    pub fn ind(left: &[&str], condition: &[&str], right: &[&str]) -> Formula {
        Formula::Atom(Atom::Ind {
            left: VarTuple::from_names(left),
            condition: VarTuple::from_names(condition),
            right: VarTuple::from_names(right),
        })
    }

    /// Free variables in order of first occurrence. Every variable of a
    /// dependence or independence atom is a free occurrence, as are the
    /// slashed variables of `∃x/ȳ`.
    pub fn free_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
        match self {
            Formula::Atom(a) | Formula::Not(a) => {
                let mut vs = Vec::new();
                a.push_vars(&mut vs);
                for v in vs {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::SlashedExists { var, slashed, body } => {
                for v in slashed {
                    if !bound.contains(v) && !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::Henkin { rows, matrix } => {
                let n = bound.len();
                for (u, e) in rows {
                    bound.push(u.clone());
                    bound.push(e.clone());
                }
                matrix.collect_free(bound, out);
                bound.truncate(n);
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// True when some dependence or independence atom occurs (negated or not).
    pub fn has_dependency_atoms(&self) -> bool {
        let mut found = false;
        self.visit_atoms(&mut |a| found |= a.is_dependency());
        found
    }

    /// No slashed quantifiers and no branching prefixes.
    pub fn is_desugared(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Not(_) => true,
            Formula::And(a, b) | Formula::Or(a, b) => a.is_desugared() && b.is_desugared(),
            Formula::Exists(_, b) | Formula::Forall(_, b) => b.is_desugared(),
            Formula::SlashedExists { .. } | Formula::Henkin { .. } => false,
        }
    }

    /// Plain first-order: desugared and free of dependency atoms.
    pub fn is_first_order(&self) -> bool {
        self.is_desugared() && !self.has_dependency_atoms()
    }

    pub fn visit_atoms<F: FnMut(&Atom)>(&self, f: &mut F) {
        match self {
            Formula::Atom(a) | Formula::Not(a) => f(a),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
            Formula::Exists(_, b) | Formula::Forall(_, b) => b.visit_atoms(f),
            Formula::SlashedExists { body, .. } => body.visit_atoms(f),
            Formula::Henkin { matrix, .. } => matrix.visit_atoms(f),
        }
    }

    /// Relation symbols with the arity of their first use. Returns the
    /// offending name if a symbol is used with two arities.
    pub fn relation_symbols(&self) -> Result<BTreeMap<String, usize>, String> {
        let mut out = BTreeMap::new();
        let mut clash = None;
        self.visit_atoms(&mut |a| {
            if let Atom::Rel(name, args) = a {
                match out.get(name) {
                    Some(&k) if k != args.len() => clash = Some(name.clone()),
                    Some(_) => {}
                    None => {
                        out.insert(name.clone(), args.len());
                    }
                }
            }
        });
        match clash {
            Some(name) => Err(name),
            None => Ok(out),
        }
    }

    pub fn constant_symbols(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.visit_atoms(&mut |a| {
            let terms: Vec<&Term> = match a {
                Atom::Eq(x, y) => vec![x, y],
                Atom::Rel(_, ts) => ts.iter().collect(),
                _ => vec![],
            };
            for t in terms {
                if let Term::Const(c) = t {
                    if !out.contains(c) {
                        out.push(c.clone());
                    }
                }
            }
        });
        out
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Not(_) => 1,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::Exists(_, b) | Formula::Forall(_, b) => 1 + b.size(),
            Formula::SlashedExists { body, .. } => 1 + body.size(),
            Formula::Henkin { matrix, .. } => 1 + matrix.size(),
        }
    }

    fn is_quantifier(&self) -> bool {
        matches!(
            self,
            Formula::Exists(..)
                | Formula::Forall(..)
                | Formula::SlashedExists { .. }
                | Formula::Henkin { .. }
        )
    }
}

fn term_of(s: &str) -> Term {
    if s.starts_with(|c: char| c.is_ascii_uppercase()) {
        Term::Const(s.to_string())
    } else {
        Term::var(s)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Eq(a, b) => write!(f, "{a} = {b}"),
            Atom::Rel(name, args) => {
                write!(f, "{name}(")?;
                for (i, t) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{t}")?;
                }
                f.write_str(")")
            }
            Atom::Dep {
                determiner,
                determined,
            } => {
                f.write_str("dep(")?;
                if !determiner.is_empty() {
                    write!(f, "{determiner} ")?;
                }
                f.write_str(";")?;
                if !determined.is_empty() {
                    write!(f, " {determined}")?;
                }
                f.write_str(")")
            }
            Atom::Ind {
                left,
                condition,
                right,
            } => {
                f.write_str("ind(")?;
                if !left.is_empty() {
                    write!(f, "{left} ")?;
                }
                f.write_str(";")?;
                if !condition.is_empty() {
                    write!(f, " {condition} ")?;
                }
                f.write_str(";")?;
                if !right.is_empty() {
                    write!(f, " {right}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(a) => write!(f, "not {a}"),
            Formula::Or(a, b) => {
                write_operand(f, a, a.is_quantifier())?;
                f.write_str(" or ")?;
                write_operand(f, b, b.is_quantifier() || matches!(**b, Formula::Or(..)))
            }
            Formula::And(a, b) => {
                write_operand(f, a, a.is_quantifier() || matches!(**a, Formula::Or(..)))?;
                f.write_str(" and ")?;
                write_operand(
                    f,
                    b,
                    b.is_quantifier() || matches!(**b, Formula::Or(..) | Formula::And(..)),
                )
            }
            Formula::Exists(v, body) => {
                write!(f, "exists {v}. ")?;
                write_body(f, body)
            }
            Formula::Forall(v, body) => {
                write!(f, "forall {v}. ")?;
                write_body(f, body)
            }
            Formula::SlashedExists { var, slashed, body } => {
                write!(f, "exists {var}/{{{slashed}}}. ")?;
                write_body(f, body)
            }
            Formula::Henkin { rows, matrix } => {
                f.write_str("branch{")?;
                for (i, (u, e)) in rows.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    write!(f, "forall {u} exists {e}")?;
                }
                f.write_str("}. ")?;
                write_body(f, matrix)
            }
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, g: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({g})")
    } else {
        write!(f, "{g}")
    }
}

fn write_body(f: &mut fmt::Formatter<'_>, body: &Formula) -> fmt::Result {
    write_operand(f, body, matches!(body, Formula::And(..) | Formula::Or(..)))
}
