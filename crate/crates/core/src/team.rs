//! Variables, assignments and teams, plus the team operations that the
//! quantifier and disjunction clauses are built from.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::structure::Structure;

/// Hard cap on the number of teams [`enumerate_teams`] will produce.
pub const DEFAULT_TEAM_CAP: u64 = 1 << 24;

/// Largest assignment space (`|domain|^|vars|`) the enumerator accepts.
const MAX_ASSIGNMENT_SPACE: u128 = 1 << 20;

/// A variable name. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: &str) -> Self {
        Var(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

impl From<String> for Var {
    fn from(s: String) -> Self {
        Var(Arc::from(s))
    }
}

/// An ordered sequence of variables. Repetitions are allowed; the set view
/// ignores order and multiplicity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarTuple(Vec<Var>);

impl VarTuple {
    pub fn new(vars: Vec<Var>) -> Self {
        VarTuple(vars)
    }

    pub fn empty() -> Self {
        VarTuple(Vec::new())
    }

    pub fn from_names(names: &[&str]) -> Self {
        VarTuple(names.iter().map(|n| Var::new(n)).collect())
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Var> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.0.contains(v)
    }

    pub fn to_set(&self) -> BTreeSet<Var> {
        self.0.iter().cloned().collect()
    }

    /// Same variables regardless of order and repetition.
    pub fn set_eq(&self, other: &VarTuple) -> bool {
        self.to_set() == other.to_set()
    }

    /// Set intersection, listed in the order of `self` without repeats.
    pub fn intersection(&self, other: &VarTuple) -> VarTuple {
        let mut out: Vec<Var> = Vec::new();
        for v in &self.0 {
            if other.contains(v) && !out.contains(v) {
                out.push(v.clone());
            }
        }
        VarTuple(out)
    }

    pub fn concat(&self, other: &VarTuple) -> VarTuple {
        let mut out = self.0.clone();
        out.extend(other.0.iter().cloned());
        VarTuple(out)
    }

    pub fn into_vec(self) -> Vec<Var> {
        self.0
    }
}

impl fmt::Display for VarTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl From<Vec<Var>> for VarTuple {
    fn from(v: Vec<Var>) -> Self {
        VarTuple(v)
    }
}

impl FromIterator<Var> for VarTuple {
    fn from_iter<I: IntoIterator<Item = Var>>(iter: I) -> Self {
        VarTuple(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a VarTuple {
    type Item = &'a Var;
    type IntoIter = std::slice::Iter<'a, Var>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Interned domain element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub u32);

impl Elem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Strict or lax reading of the existential quantifier and disjunction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Semantics {
    /// One witness per row; disjunction splits are partitions.
    Strict,
    /// Non-empty witness sets; disjunction splits may overlap.
    #[default]
    Lax,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Semantics::Strict => f.write_str("strict"),
            Semantics::Lax => f.write_str("lax"),
        }
    }
}

impl FromStr for Semantics {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Semantics::Strict),
            "lax" => Ok(Semantics::Lax),
            other => Err(format!("unknown semantics `{other}` (expected strict or lax)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TeamError {
    #[error("variable `{0}` is not in the team scope")]
    UnknownVariable(Var),
    #[error("variable `{0}` occurs more than once in the scope")]
    DuplicateVariable(Var),
    #[error("row has {found} values but the scope has {expected} variables")]
    RowArity { expected: usize, found: usize },
    #[error("empty choice set for row {0:?}")]
    EmptyChoice(Vec<Elem>),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("team text line {line}: {message}")]
    Format { line: usize, message: String },
}

/// A single assignment: values for exactly the variables of its scope.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    scope: Vec<Var>,
    values: Vec<Elem>,
}

impl Assignment {
    pub fn new(scope: Vec<Var>, values: Vec<Elem>) -> Result<Self, TeamError> {
        check_scope(&scope)?;
        if scope.len() != values.len() {
            return Err(TeamError::RowArity {
                expected: scope.len(),
                found: values.len(),
            });
        }
        Ok(Assignment { scope, values })
    }

    /// The assignment with empty domain.
    pub fn empty() -> Self {
        Assignment {
            scope: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn scope(&self) -> &[Var] {
        &self.scope
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn get(&self, v: &Var) -> Option<Elem> {
        self.scope.iter().position(|w| w == v).map(|i| self.values[i])
    }

    /// `s[v ↦ a]`: overwrites `v` if present, appends it otherwise.
    pub fn extend(&self, v: &Var, a: Elem) -> Assignment {
        let mut out = self.clone();
        match out.scope.iter().position(|w| w == v) {
            Some(i) => out.values[i] = a,
            None => {
                out.scope.push(v.clone());
                out.values.push(a);
            }
        }
        out
    }
}

fn check_scope(scope: &[Var]) -> Result<(), TeamError> {
    for (i, v) in scope.iter().enumerate() {
        if scope[..i].contains(v) {
            return Err(TeamError::DuplicateVariable(v.clone()));
        }
    }
    Ok(())
}

/// A set of assignments over a common scope. Rows are kept sorted, so
/// equality and hashing are structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Team {
    scope: Vec<Var>,
    rows: BTreeSet<Vec<Elem>>,
}

impl Team {
    /// The empty team over `scope`.
    pub fn new(scope: Vec<Var>) -> Result<Self, TeamError> {
        check_scope(&scope)?;
        Ok(Team {
            scope,
            rows: BTreeSet::new(),
        })
    }

    /// `{∅}`: the team holding only the empty assignment.
    pub fn unit() -> Self {
        let mut rows = BTreeSet::new();
        rows.insert(Vec::new());
        Team {
            scope: Vec::new(),
            rows,
        }
    }

    pub fn from_rows<I>(scope: Vec<Var>, rows: I) -> Result<Self, TeamError>
    where
        I: IntoIterator<Item = Vec<Elem>>,
    {
        let mut team = Team::new(scope)?;
        for row in rows {
            if row.len() != team.scope.len() {
                return Err(TeamError::RowArity {
                    expected: team.scope.len(),
                    found: row.len(),
                });
            }
            team.rows.insert(row);
        }
        Ok(team)
    }

    /// Convenience constructor from raw element ids.
    pub fn from_ids(scope: &[&str], rows: &[&[u32]]) -> Result<Self, TeamError> {
        Team::from_rows(
            scope.iter().map(|v| Var::new(v)).collect(),
            rows.iter()
                .map(|r| r.iter().map(|&e| Elem(e)).collect::<Vec<_>>()),
        )
    }

    pub fn singleton(s: &Assignment) -> Self {
        let mut rows = BTreeSet::new();
        rows.insert(s.values.clone());
        Team {
            scope: s.scope.clone(),
            rows,
        }
    }

    /// Same scope, different rows. Rows must have the scope's arity.
    pub(crate) fn with_rows(&self, rows: BTreeSet<Vec<Elem>>) -> Team {
        debug_assert!(rows.iter().all(|r| r.len() == self.scope.len()));
        Team {
            scope: self.scope.clone(),
            rows,
        }
    }

    pub fn scope(&self) -> &[Var] {
        &self.scope
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Elem]> + '_ {
        self.rows.iter().map(|r| r.as_slice())
    }

    pub(crate) fn row_set(&self) -> &BTreeSet<Vec<Elem>> {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains_row(&self, row: &[Elem]) -> bool {
        self.rows.contains(row)
    }

    pub fn index_of(&self, v: &Var) -> Option<usize> {
        self.scope.iter().position(|w| w == v)
    }

    /// Column indices of `vars`, in order.
    pub fn columns(&self, vars: &VarTuple) -> Result<Vec<usize>, TeamError> {
        vars.iter()
            .map(|v| self.index_of(v).ok_or_else(|| TeamError::UnknownVariable(v.clone())))
            .collect()
    }

    pub fn assignments(&self) -> impl Iterator<Item = Assignment> + '_ {
        self.rows.iter().map(move |r| Assignment {
            scope: self.scope.clone(),
            values: r.clone(),
        })
    }

    pub fn is_subteam_of(&self, other: &Team) -> bool {
        self.scope == other.scope && self.rows.is_subset(&other.rows)
    }

    /// `X[M/v]`: every row extended (or overwritten) with every element.
    pub fn duplicate(&self, v: &Var, structure: &Structure) -> Team {
        let domain: Vec<Elem> = structure.elements().collect();
        self.supplement(v, |_| domain.clone())
            .expect("structure domains are non-empty")
    }

    /// Extends every row with each value in `choice(row)`. The closure sees
    /// the row in this team's scope order. An empty choice set is an error.
    pub fn supplement<F>(&self, v: &Var, mut choice: F) -> Result<Team, TeamError>
    where
        F: FnMut(&[Elem]) -> Vec<Elem>,
    {
        let (scope, pos) = self.extended_scope(v);
        let mut rows = BTreeSet::new();
        for row in &self.rows {
            let values = choice(row);
            if values.is_empty() {
                return Err(TeamError::EmptyChoice(row.clone()));
            }
            for a in values {
                rows.insert(place(row, pos, a));
            }
        }
        Ok(Team { scope, rows })
    }

    /// Strict supplementation: exactly one value per row.
    pub fn supplement_strict<F>(&self, v: &Var, mut choice: F) -> Team
    where
        F: FnMut(&[Elem]) -> Elem,
    {
        let (scope, pos) = self.extended_scope(v);
        let rows = self
            .rows
            .iter()
            .map(|row| place(row, pos, choice(row)))
            .collect();
        Team { scope, rows }
    }

    /// Scope after binding `v`, and the column `v` lands in.
    pub(crate) fn extended_scope(&self, v: &Var) -> (Vec<Var>, usize) {
        match self.index_of(v) {
            Some(i) => (self.scope.clone(), i),
            None => {
                let mut s = self.scope.clone();
                s.push(v.clone());
                let n = s.len() - 1;
                (s, n)
            }
        }
    }

    /// All ways to cover the rows with two subteams.
    pub fn splits(&self, mode: Semantics) -> Splits {
        Splits {
            scope: self.scope.clone(),
            rows: self.rows.iter().cloned().collect(),
            digits: vec![0; self.rows.len()],
            base: match mode {
                Semantics::Strict => 2,
                Semantics::Lax => 3,
            },
            done: false,
        }
    }

    /// Restriction of every row to `vars` (which must be in scope, no repeats).
    pub fn project(&self, vars: &[Var]) -> Result<Team, TeamError> {
        check_scope(vars)?;
        let cols = self.columns(&VarTuple::new(vars.to_vec()))?;
        let rows = self
            .rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c]).collect())
            .collect();
        Ok(Team {
            scope: vars.to_vec(),
            rows,
        })
    }

    /// `rel(X)`: the set of value tuples of `vars`.
    pub fn to_relation(&self, vars: &VarTuple) -> Result<BTreeSet<Vec<Elem>>, TeamError> {
        let cols = self.columns(vars)?;
        Ok(self
            .rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c]).collect())
            .collect())
    }

    /// Inverse of [`Team::to_relation`] when `vars` has no repeats.
    pub fn from_relation(vars: &VarTuple, rel: &BTreeSet<Vec<Elem>>) -> Result<Team, TeamError> {
        Team::from_rows(vars.vars().to_vec(), rel.iter().cloned())
    }

    /// Parses the line-oriented team format, resolving element names
    /// against `structure`.
    pub fn parse(text: &str, structure: &Structure) -> Result<Team, TeamError> {
        let mut scope: Option<Vec<Var>> = None;
        let mut rows = BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| TeamError::Format {
                line: lineno + 1,
                message,
            };
            match &scope {
                None => {
                    let rest = line
                        .strip_prefix("vars:")
                        .ok_or_else(|| err("expected `vars:` header".into()))?;
                    let vars: Vec<Var> = rest.split_whitespace().map(Var::new).collect();
                    check_scope(&vars).map_err(|e| err(e.to_string()))?;
                    scope = Some(vars);
                }
                Some(vars) => {
                    let row: Vec<Elem> = if line == "-" {
                        Vec::new()
                    } else {
                        line.split_whitespace()
                            .map(|name| {
                                structure
                                    .element(name)
                                    .ok_or_else(|| err(format!("unknown element `{name}`")))
                            })
                            .collect::<Result<_, _>>()?
                    };
                    if row.len() != vars.len() {
                        return Err(err(format!(
                            "row has {} values but the scope has {} variables",
                            row.len(),
                            vars.len()
                        )));
                    }
                    rows.insert(row);
                }
            }
        }
        let scope = scope.ok_or(TeamError::Format {
            line: 0,
            message: "missing `vars:` header".into(),
        })?;
        Ok(Team { scope, rows })
    }

    /// Canonical text form; `Team::parse` inverts it exactly.
    pub fn to_text(&self, structure: &Structure) -> String {
        let mut out = String::from("vars:");
        for v in &self.scope {
            out.push(' ');
            out.push_str(v.as_str());
        }
        out.push('\n');
        for row in &self.rows {
            if row.is_empty() {
                out.push('-');
            } else {
                let names: Vec<&str> = row.iter().map(|&e| structure.name(e)).collect();
                out.push_str(&names.join(" "));
            }
            out.push('\n');
        }
        out
    }
}

fn place(row: &[Elem], pos: usize, a: Elem) -> Vec<Elem> {
    let mut r = row.to_vec();
    if pos == r.len() {
        r.push(a);
    } else {
        r[pos] = a;
    }
    r
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Iterator over the `(Y, Z)` covers of a team, see [`Team::splits`].
#[derive(Debug, Clone)]
pub struct Splits {
    scope: Vec<Var>,
    rows: Vec<Vec<Elem>>,
    digits: Vec<u8>,
    base: u8,
    done: bool,
}

impl Iterator for Splits {
    type Item = (Team, Team);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut left = BTreeSet::new();
        let mut right = BTreeSet::new();
        for (row, &d) in self.rows.iter().zip(&self.digits) {
            if d == 0 || d == 2 {
                left.insert(row.clone());
            }
            if d == 1 || d == 2 {
                right.insert(row.clone());
            }
        }
        // advance the mixed-radix counter
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[i] += 1;
            if self.digits[i] < self.base {
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some((
            Team {
                scope: self.scope.clone(),
                rows: left,
            },
            Team {
                scope: self.scope.clone(),
                rows: right,
            },
        ))
    }
}

/// Every assignment of `domain` values to `n` variables, lexicographic with
/// the first variable most significant.
pub fn all_rows(n: usize, domain: &[Elem]) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * domain.len());
        for r in &out {
            for &a in domain {
                let mut r2 = r.clone();
                r2.push(a);
                next.push(r2);
            }
        }
        out = next;
    }
    out
}

/// Number of subsets of an `n`-set with at most `k` elements, saturating.
pub(crate) fn count_subsets(n: u128, k: u128) -> u128 {
    let k = k.min(n);
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for i in 0..=k {
        total = total.saturating_add(binom);
        if i < k {
            binom = binom.saturating_mul(n - i) / (i + 1);
        }
    }
    total
}

/// Enumerates every team over `vars` whose rows draw values from `domain`,
/// with at most `max_rows` rows (`None` for no limit). Teams come in order
/// of increasing size, lexicographic within a size.
pub fn enumerate_teams(
    vars: &VarTuple,
    domain: &[Elem],
    max_rows: Option<usize>,
    cap: u64,
) -> Result<TeamEnumeration, TeamError> {
    check_scope(vars.vars())?;
    if domain.is_empty() {
        return Err(TeamError::TooLarge("empty domain".into()));
    }
    let space = (domain.len() as u128)
        .checked_pow(vars.len() as u32)
        .filter(|&n| n <= MAX_ASSIGNMENT_SPACE)
        .ok_or_else(|| {
            TeamError::TooLarge(format!(
                "{}^{} assignments",
                domain.len(),
                vars.len()
            ))
        })?;
    let k = max_rows.map_or(space, |m| m as u128);
    let total = count_subsets(space, k);
    if total > cap as u128 {
        return Err(TeamError::TooLarge(format!(
            "{total} teams exceed the cap of {cap}"
        )));
    }
    let rows = all_rows(vars.len(), domain);
    let max = (k as usize).min(rows.len());
    Ok(TeamEnumeration {
        scope: vars.vars().to_vec(),
        rows,
        max,
        current: Some(Vec::new()),
        total: total as u64,
    })
}

/// Iterator returned by [`enumerate_teams`].
#[derive(Debug, Clone)]
pub struct TeamEnumeration {
    scope: Vec<Var>,
    rows: Vec<Vec<Elem>>,
    max: usize,
    current: Option<Vec<usize>>,
    total: u64,
}

impl TeamEnumeration {
    /// Total number of teams this enumeration yields.
    pub fn total(&self) -> u64 {
        self.total
    }

    fn advance(&mut self) {
        let n = self.rows.len();
        let Some(idx) = self.current.as_mut() else {
            return;
        };
        let k = idx.len();
        // rightmost position that can still move right
        let mut i = k;
        while i > 0 {
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                return;
            }
        }
        if k < self.max {
            *idx = (0..k + 1).collect();
        } else {
            self.current = None;
        }
    }
}

impl Iterator for TeamEnumeration {
    type Item = Team;

    fn next(&mut self) -> Option<Team> {
        let idx = self.current.as_ref()?;
        let rows = idx.iter().map(|&i| self.rows[i].clone()).collect();
        let team = Team {
            scope: self.scope.clone(),
            rows,
        };
        self.advance();
        Some(team)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize) -> Structure {
        Structure::of_size(n)
    }

    fn x() -> Var {
        Var::new("x")
    }

    #[test]
    fn duplicate_unit_team() {
        let t = Team::unit().duplicate(&x(), &s(2));
        assert_eq!(t, Team::from_ids(&["x"], &[&[0], &[1]]).unwrap());
    }

    #[test]
    fn duplicate_empty_team_stays_empty() {
        let t = Team::new(vec![]).unwrap().duplicate(&x(), &s(3));
        assert!(t.is_empty());
        assert_eq!(t.scope(), &[x()]);
    }

    #[test]
    fn duplicate_multiplies_rows() {
        let t = Team::from_ids(&["x"], &[&[0], &[1]]).unwrap();
        let d = t.duplicate(&Var::new("y"), &s(3));
        assert_eq!(d.len(), 6);
        assert_eq!(d.scope(), &[x(), Var::new("y")]);
        assert_eq!(d.project(&[x()]).unwrap(), t);
    }

    #[test]
    fn duplicate_overwrites_bound_variable() {
        let t = Team::from_ids(&["x"], &[&[0]]).unwrap();
        let d = t.duplicate(&x(), &s(2));
        assert_eq!(d, Team::from_ids(&["x"], &[&[0], &[1]]).unwrap());
    }

    #[test]
    fn supplement_copy_function() {
        let t = Team::from_ids(&["x"], &[&[0]]).unwrap();
        let out = t.supplement(&Var::new("y"), |r| vec![r[0]]).unwrap();
        assert_eq!(out, Team::from_ids(&["x", "y"], &[&[0, 0]]).unwrap());
    }

    #[test]
    fn supplement_lax_sets() {
        let t = Team::from_ids(&["x"], &[&[0], &[1]]).unwrap();
        let out = t
            .supplement(&Var::new("y"), |_| vec![Elem(0), Elem(1)])
            .unwrap();
        assert_eq!(out.len(), 4);
        let empty = Team::new(vec![x()]).unwrap();
        assert!(empty.supplement(&Var::new("y"), |_| vec![]).unwrap().is_empty());
    }

    #[test]
    fn supplement_rejects_empty_choice() {
        let t = Team::from_ids(&["x"], &[&[0]]).unwrap();
        assert!(matches!(
            t.supplement(&Var::new("y"), |_| vec![]),
            Err(TeamError::EmptyChoice(_))
        ));
    }

    #[test]
    fn split_counts() {
        let empty = Team::new(vec![x()]).unwrap();
        assert_eq!(empty.splits(Semantics::Lax).count(), 1);
        let one = Team::from_ids(&["x"], &[&[0]]).unwrap();
        assert_eq!(one.splits(Semantics::Strict).count(), 2);
        let two = Team::from_ids(&["x"], &[&[0], &[1]]).unwrap();
        assert_eq!(two.splits(Semantics::Lax).count(), 9);
        assert_eq!(two.splits(Semantics::Strict).count(), 4);
        for (l, r) in two.splits(Semantics::Strict) {
            assert_eq!(l.len() + r.len(), 2);
        }
    }

    #[test]
    fn enumerate_counts() {
        let d1 = [Elem(0)];
        let d2 = [Elem(0), Elem(1)];
        let xs = VarTuple::from_names(&["x"]);
        assert_eq!(enumerate_teams(&xs, &d1, None, DEFAULT_TEAM_CAP).unwrap().count(), 2);
        let xy = VarTuple::from_names(&["x", "y"]);
        assert_eq!(enumerate_teams(&xy, &d2, None, DEFAULT_TEAM_CAP).unwrap().count(), 16);
        let xyz = VarTuple::from_names(&["x", "y", "z"]);
        let teams: Vec<Team> = enumerate_teams(&xyz, &d2, None, DEFAULT_TEAM_CAP)
            .unwrap()
            .collect();
        assert_eq!(teams.len(), 256);
        let distinct: BTreeSet<&Team> = teams.iter().collect();
        assert_eq!(distinct.len(), 256);
        // size-ascending order
        assert!(teams.windows(2).all(|w| w[0].len() <= w[1].len()));
    }

    #[test]
    fn enumerate_bounded_rows() {
        let xyz = VarTuple::from_names(&["x", "y", "z"]);
        let d = [Elem(0), Elem(1)];
        let e = enumerate_teams(&xyz, &d, Some(2), DEFAULT_TEAM_CAP).unwrap();
        assert_eq!(e.total(), 1 + 8 + 28);
        assert_eq!(e.count(), 37);
    }

    #[test]
    fn enumerate_refuses_huge_spaces() {
        let vars = VarTuple::from_names(&["a", "b", "c", "d", "e"]);
        let d = [Elem(0), Elem(1)];
        assert!(matches!(
            enumerate_teams(&vars, &d, None, DEFAULT_TEAM_CAP),
            Err(TeamError::TooLarge(_))
        ));
    }

    #[test]
    fn relation_round_trip() {
        let coin = Team::from_ids(&["x", "y"], &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]).unwrap();
        let xy = VarTuple::from_names(&["x", "y"]);
        let rel = coin.to_relation(&xy).unwrap();
        assert_eq!(rel.len(), 4);
        assert_eq!(Team::from_relation(&xy, &rel).unwrap(), coin);
        let empty = Team::new(vec![x(), Var::new("y")]).unwrap();
        assert!(empty.to_relation(&xy).unwrap().is_empty());
        assert!(matches!(
            coin.to_relation(&VarTuple::from_names(&["q"])),
            Err(TeamError::UnknownVariable(_))
        ));
    }

    #[test]
    fn team_text_round_trip() {
        let m = Structure::new(vec!["a".into(), "b".into()]).unwrap();
        let text = "vars: x y\na b\nb a\n";
        let t = Team::parse(text, &m).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.to_text(&m), text);
        let unit = Team::parse("vars:\n-\n", &m).unwrap();
        assert_eq!(unit, Team::unit());
        assert_eq!(unit.to_text(&m), "vars:\n-\n");
        let empty = Team::parse("# nothing\nvars: x\n", &m).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn team_text_errors() {
        let m = Structure::of_size(2);
        assert!(Team::parse("x y\n", &m).is_err());
        assert!(Team::parse("vars: x\n7\n", &m).is_err());
        assert!(Team::parse("vars: x y\n0\n", &m).is_err());
        assert!(Team::parse("vars: x x\n", &m).is_err());
    }
}
