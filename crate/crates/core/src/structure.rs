//! Finite relational structures with interned elements.
//!
//! Text format, one declaration per line (`#` starts a comment):
//!
//! ```text
//! domain: a b c
//! relation R/2: (a,b) (b,c)
//! constant C0 = a
//! ```
//!
//! Equality is always available and is never stored as a relation.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::team::{strip_comment, Elem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("domain must be non-empty")]
    EmptyDomain,
    #[error("element `{0}` declared twice")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("relation `{name}` has arity {arity} but a tuple of length {found}")]
    TupleArity {
        name: String,
        arity: usize,
        found: usize,
    },
    #[error("element id {0} outside the domain")]
    ElementOutOfRange(u32),
    #[error("relation `{0}` declared twice")]
    DuplicateRelation(String),
    #[error("structure text line {line}: {message}")]
    Format { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<Elem>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    relations: BTreeMap<String, Relation>,
    constants: BTreeMap<String, Elem>,
}

impl Structure {
    pub fn new(names: Vec<String>) -> Result<Self, StructureError> {
        if names.is_empty() {
            return Err(StructureError::EmptyDomain);
        }
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), Elem(i as u32)).is_some() {
                return Err(StructureError::DuplicateElement(n.clone()));
            }
        }
        Ok(Structure {
            names,
            index,
            relations: BTreeMap::new(),
            constants: BTreeMap::new(),
        })
    }

    /// Pure-equality structure with elements named `0 .. n-1`.
    ///
    /// # Panics
    /// If `n == 0`.
    pub fn of_size(n: usize) -> Self {
        assert!(n > 0, "structure domains are non-empty");
        Structure::new((0..n).map(|i| i.to_string()).collect()).expect("distinct names")
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.names.len() as u32).map(Elem)
    }

    pub fn element(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e.index()]
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn constants(&self) -> &BTreeMap<String, Elem> {
        &self.constants
    }

    pub fn constant(&self, name: &str) -> Option<Elem> {
        self.constants.get(name).copied()
    }

    fn check_elem(&self, e: Elem) -> Result<(), StructureError> {
        if e.index() < self.names.len() {
            Ok(())
        } else {
            Err(StructureError::ElementOutOfRange(e.0))
        }
    }

    /// Adds (or replaces) a relation table.
    pub fn set_relation<I>(&mut self, name: &str, arity: usize, tuples: I) -> Result<(), StructureError>
    where
        I: IntoIterator<Item = Vec<Elem>>,
    {
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(StructureError::TupleArity {
                    name: name.to_string(),
                    arity,
                    found: t.len(),
                });
            }
            for &e in &t {
                self.check_elem(e)?;
            }
            set.insert(t);
        }
        self.relations.insert(
            name.to_string(),
            Relation {
                arity,
                tuples: set,
            },
        );
        Ok(())
    }

    pub fn set_constant(&mut self, name: &str, e: Elem) -> Result<(), StructureError> {
        self.check_elem(e)?;
        self.constants.insert(name.to_string(), e);
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Structure, StructureError> {
        let mut structure: Option<Structure> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| StructureError::Format {
                line: lineno + 1,
                message,
            };
            if let Some(rest) = line.strip_prefix("domain:") {
                if structure.is_some() {
                    return Err(err("domain declared twice".into()));
                }
                let names = rest.split_whitespace().map(str::to_string).collect();
                structure = Some(Structure::new(names).map_err(|e| err(e.to_string()))?);
                continue;
            }
            let m = structure
                .as_mut()
                .ok_or_else(|| err("`domain:` must come first".into()))?;
            if let Some(rest) = line.strip_prefix("relation ") {
                let (head, body) = rest
                    .split_once(':')
                    .ok_or_else(|| err("expected `relation NAME/ARITY: tuples`".into()))?;
                let (name, arity) = head
                    .trim()
                    .split_once('/')
                    .ok_or_else(|| err("expected NAME/ARITY".into()))?;
                let name = name.trim();
                let arity: usize = arity
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad arity `{arity}`")))?;
                if m.relations.contains_key(name) {
                    return Err(err(StructureError::DuplicateRelation(name.into()).to_string()));
                }
                let tuples = parse_tuples(body, m).map_err(err)?;
                m.set_relation(name, arity, tuples)
                    .map_err(|e| err(e.to_string()))?;
            } else if let Some(rest) = line.strip_prefix("constant ") {
                let (name, value) = rest
                    .split_once('=')
                    .ok_or_else(|| err("expected `constant NAME = element`".into()))?;
                let value = value.trim();
                let e = m
                    .element(value)
                    .ok_or_else(|| err(format!("unknown element `{value}`")))?;
                m.set_constant(name.trim(), e).map_err(|e| err(e.to_string()))?;
            } else {
                return Err(err(format!("unrecognised line `{line}`")));
            }
        }
        structure.ok_or(StructureError::Format {
            line: 0,
            message: "missing `domain:` line".into(),
        })
    }

    /// Canonical text: relations and constants sorted by name, tuples sorted.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn parse_tuples(body: &str, m: &Structure) -> Result<Vec<Vec<Elem>>, String> {
    let mut out = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let inner_start = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("expected `(` at `{rest}`"))?;
        let close = inner_start
            .find(')')
            .ok_or_else(|| "unclosed tuple".to_string())?;
        let inner = inner_start[..close].trim();
        let tuple = if inner.is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|n| {
                    let n = n.trim();
                    m.element(n).ok_or_else(|| format!("unknown element `{n}`"))
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        out.push(tuple);
        rest = inner_start[close + 1..].trim_start();
    }
    Ok(out)
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain: {}", self.names.join(" "))?;
        for (name, rel) in &self.relations {
            write!(f, "relation {name}/{}:", rel.arity)?;
            for t in &rel.tuples {
                let parts: Vec<&str> = t.iter().map(|&e| self.name(e)).collect();
                write!(f, " ({})", parts.join(","))?;
            }
            writeln!(f)?;
        }
        for (name, &e) in &self.constants {
            writeln!(f, "constant {name} = {}", self.name(e))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let text = "domain: a b c\nrelation E/0: ()\nrelation R/2: (a,b) (b,c)\nconstant C0 = a\n";
        let m = Structure::parse(text).unwrap();
        assert_eq!(m.size(), 3);
        assert_eq!(m.relation("R").unwrap().tuples.len(), 2);
        assert_eq!(m.constant("C0"), Some(Elem(0)));
        assert_eq!(m.to_text(), text);
        assert_eq!(Structure::parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn comments_and_order_normalise() {
        let text = "# demo\ndomain: a b   # two\nrelation R/1: (b) (a)\n\n";
        let m = Structure::parse(text).unwrap();
        assert_eq!(m.to_text(), "domain: a b\nrelation R/1: (a) (b)\n");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Structure::parse("domain:\n").is_err());
        assert!(Structure::parse("relation R/1: (a)\n").is_err());
        assert!(Structure::parse("domain: a\nrelation R/2: (a)\n").is_err());
        assert!(Structure::parse("domain: a\nrelation R/1: (b)\n").is_err());
        assert!(Structure::parse("domain: a a\n").is_err());
        assert!(Structure::parse("domain: a\nconstant C = z\n").is_err());
        assert!(Structure::parse("domain: a\nwat\n").is_err());
    }

    #[test]
    fn invariants_enforced_programmatically() {
        let mut m = Structure::of_size(2);
        assert!(m.set_relation("R", 1, vec![vec![Elem(5)]]).is_err());
        assert!(m.set_constant("C", Elem(2)).is_err());
        assert!(m.set_relation("R", 2, vec![vec![Elem(0)]]).is_err());
    }
}
