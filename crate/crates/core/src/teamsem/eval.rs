use std::cell::{Cell, RefCell};
use std::collections::{BTreeSet, HashMap, HashSet};

use super::{atom_holds, holds_in, EvalError, Env};
use crate::structure::Structure;
use crate::syntax::{desugar, Atom, Formula, Term};
use crate::team::{Elem, Semantics, Team, Var, VarTuple};

/// Default cap on candidate extensions (splits and witness choices).
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Memo entries kept before the table is flushed; bounds memory on long
/// searches.
const MEMO_CAP: usize = 1 << 16;

/// Largest domain for which witness sets are handled as bitmasks.
const MASK_DOMAIN_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub mode: Semantics,
    /// Maximum number of candidate splits / witness choices examined.
    pub budget: u64,
    /// Use the semantic shortcuts (flatness, locality, empty team, the
    /// independence-atom witness procedure). Turning them off leaves only
    /// the clause-by-clause search and is meant for cross-checking.
    pub shortcuts: bool,
}

impl EvalOptions {
    pub fn new(mode: Semantics) -> Self {
        EvalOptions {
            mode,
            budget: DEFAULT_BUDGET,
            shortcuts: true,
        }
    }

    pub fn without_shortcuts(mut self) -> Self {
        self.shortcuts = false;
        self
    }
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions::new(Semantics::Lax)
    }
}

/// `M ⊨_X φ` with default options for `mode`.
pub fn evaluate(structure: &Structure, team: &Team, f: &Formula, mode: Semantics) -> Result<bool, EvalError> {
    Evaluator::new(structure, EvalOptions::new(mode)).evaluate(team, f)
}

/// `M ⊨ φ` for a sentence: truth on the team `{∅}`. Derived quantifier
/// forms are desugared first.
pub fn sentence_sat(structure: &Structure, sentence: &Formula, mode: Semantics) -> Result<bool, EvalError> {
    let free = sentence.free_vars();
    if !free.is_empty() {
        return Err(EvalError::NotASentence(free));
    }
    let f = desugar(sentence)?;
    evaluate(structure, &Team::unit(), &f, mode)
}

/// Team-semantics evaluator. Memo tables live for one `evaluate` call.
pub struct Evaluator<'a> {
    structure: &'a Structure,
    opts: EvalOptions,
    domain: Vec<Elem>,
    spent: Cell<u64>,
    memo: RefCell<HashMap<(usize, Team), bool>>,
    flat: RefCell<HashMap<usize, bool>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(structure: &'a Structure, opts: EvalOptions) -> Self {
        Evaluator {
            structure,
            opts,
            domain: structure.elements().collect(),
            spent: Cell::new(0),
            memo: RefCell::new(HashMap::new()),
            flat: RefCell::new(HashMap::new()),
        }
    }

    /// Candidate extensions examined by the last `evaluate` call.
    pub fn spent(&self) -> u64 {
        self.spent.get()
    }

    pub fn evaluate(&self, team: &Team, f: &Formula) -> Result<bool, EvalError> {
        if !f.is_desugared() {
            return Err(EvalError::NotDesugared);
        }
        for v in f.free_vars() {
            if team.index_of(&v).is_none() {
                return Err(EvalError::UnboundVariable(v));
            }
        }
        check_symbols(self.structure, f)?;
        self.memo.borrow_mut().clear();
        self.flat.borrow_mut().clear();
        self.spent.set(0);
        self.eval(team, f)
    }

    fn tick(&self) -> Result<(), EvalError> {
        let n = self.spent.get() + 1;
        self.spent.set(n);
        if n > self.opts.budget {
            Err(EvalError::SearchExhausted(self.opts.budget))
        } else {
            Ok(())
        }
    }

    fn is_flat(&self, f: &Formula) -> bool {
        let key = f as *const Formula as usize;
        if let Some(&b) = self.flat.borrow().get(&key) {
            return b;
        }
        let b = !f.has_dependency_atoms();
        self.flat.borrow_mut().insert(key, b);
        b
    }

    fn eval_memo(&self, team: &Team, f: &Formula) -> Result<bool, EvalError> {
        let key = (f as *const Formula as usize, team.clone());
        if let Some(&b) = self.memo.borrow().get(&key) {
            return Ok(b);
        }
        let b = self.eval(team, f)?;
        let mut memo = self.memo.borrow_mut();
        if memo.len() >= MEMO_CAP {
            memo.clear();
        }
        memo.insert(key, b);
        Ok(b)
    }

    fn eval(&self, team: &Team, f: &Formula) -> Result<bool, EvalError> {
        if self.opts.shortcuts {
            if team.is_empty() {
                return Ok(true);
            }
            if self.is_flat(f) {
                return self.pointwise(team, f);
            }
        }
        match f {
            Formula::Atom(a) => self.atom(team, a),
            Formula::Not(a) => {
                if a.is_dependency() {
                    Ok(team.is_empty())
                } else {
                    for row in team.rows() {
                        if atom_holds(self.structure, &Env::new(team.scope(), row), a)? {
                            return Ok(false);
                        }
                    }
                    Ok(true)
                }
            }
            Formula::And(a, b) => Ok(self.eval(team, a)? && self.eval(team, b)?),
            Formula::Or(a, b) => self.or(team, a, b),
            Formula::Exists(v, body) => self.exists(team, v, body),
            Formula::Forall(v, body) => self.eval_memo(&team.duplicate(v, self.structure), body),
            Formula::SlashedExists { .. } | Formula::Henkin { .. } => Err(EvalError::NotDesugared),
        }
    }

    fn pointwise(&self, team: &Team, f: &Formula) -> Result<bool, EvalError> {
        for row in team.rows() {
            if !holds_in(self.structure, &mut Env::new(team.scope(), row), f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn atom(&self, team: &Team, a: &Atom) -> Result<bool, EvalError> {
        match a {
            Atom::Eq(..) | Atom::Rel(..) => {
                for row in team.rows() {
                    if !atom_holds(self.structure, &Env::new(team.scope(), row), a)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Atom::Dep {
                determiner,
                determined,
            } => dep_holds(team, determiner, determined),
            Atom::Ind {
                left,
                condition,
                right,
            } => ind_holds(team, left, condition, right),
        }
    }

    fn or(&self, team: &Team, a: &Formula, b: &Formula) -> Result<bool, EvalError> {
        let rows: Vec<&Vec<Elem>> = team.row_set().iter().collect();
        let n = rows.len();
        if n > 62 {
            return Err(EvalError::SearchExhausted(self.opts.budget));
        }
        let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
        let subteam = |mask: u64| -> Team {
            let set: BTreeSet<Vec<Elem>> = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| rows[i].clone())
                .collect();
            team.with_rows(set)
        };
        // rows admissible on each side: flat disjuncts are downward closed
        let side_mask = |g: &Formula| -> Result<u64, EvalError> {
            if !(self.opts.shortcuts && self.is_flat(g)) {
                return Ok(full);
            }
            let mut m = 0;
            for (i, row) in rows.iter().enumerate() {
                if holds_in(self.structure, &mut Env::new(team.scope(), row), g)? {
                    m |= 1 << i;
                }
            }
            Ok(m)
        };
        let amask = side_mask(a)?;
        let bmask = side_mask(b)?;
        if amask | bmask != full {
            return Ok(false);
        }
        match self.opts.mode {
            Semantics::Strict => {
                for y in submasks(amask) {
                    let z = full & !y;
                    if z & !bmask != 0 {
                        continue;
                    }
                    self.tick()?;
                    if self.eval_memo(&subteam(y), a)? && self.eval_memo(&subteam(z), b)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Semantics::Lax => {
                // with a flat left side the largest admissible Y is optimal
                let lefts: Vec<u64> = if self.opts.shortcuts && self.is_flat(a) {
                    vec![amask]
                } else {
                    submasks(amask).collect()
                };
                for y in lefts {
                    let forced = full & !y;
                    if forced & !bmask != 0 {
                        continue;
                    }
                    if !self.eval_memo(&subteam(y), a)? {
                        continue;
                    }
                    for w in submasks(y & bmask) {
                        self.tick()?;
                        if self.eval_memo(&subteam(forced | w), b)? {
                            return Ok(true);
                        }
                    }
                }
                Ok(false)
            }
        }
    }

    fn exists(&self, team: &Team, v: &Var, body: &Formula) -> Result<bool, EvalError> {
        let shortcuts = self.opts.shortcuts;
        if shortcuts && self.opts.mode == Semantics::Lax && !body.free_vars().contains(v) {
            // lax semantics is local: only the free variables matter
            return self.eval(team, body);
        }
        let (scope, pos) = team.extended_scope(v);
        let mut conjuncts = Vec::new();
        flatten_and(body, &mut conjuncts);
        let (flat, rest): (Vec<&Formula>, Vec<&Formula>) = if shortcuts {
            conjuncts.into_iter().partition(|g| self.is_flat(g))
        } else {
            (Vec::new(), vec![body])
        };
        let rows: Vec<&Vec<Elem>> = team.row_set().iter().collect();
        let mut allowed: Vec<Vec<Elem>> = Vec::with_capacity(rows.len());
        for row in &rows {
            let mut ok = Vec::new();
            for &a in &self.domain {
                let ext = place(row, pos, a);
                let mut env = Env::new(&scope, &ext);
                let mut good = true;
                for g in &flat {
                    if !holds_in(self.structure, &mut env, g)? {
                        good = false;
                        break;
                    }
                }
                if good {
                    ok.push(a);
                }
            }
            if ok.is_empty() {
                return Ok(false);
            }
            allowed.push(ok);
        }
        if rest.is_empty() {
            return Ok(true);
        }
        if shortcuts && rest.len() == 1 {
            if let Some(r) = self.ind_witness(team, v, rest[0], &allowed) {
                return r;
            }
        }
        self.witness_search(&scope, pos, &rows, &allowed, &rest)
    }

    /// Exhaustive search over witness choices (sets in lax mode, single
    /// values in strict mode), largest sets first.
    fn witness_search(
        &self,
        scope: &[Var],
        pos: usize,
        rows: &[&Vec<Elem>],
        allowed: &[Vec<Elem>],
        rest: &[&Formula],
    ) -> Result<bool, EvalError> {
        let options: Vec<Vec<Vec<Elem>>> = allowed
            .iter()
            .map(|vals| match self.opts.mode {
                Semantics::Strict => vals.iter().map(|&a| vec![a]).collect(),
                Semantics::Lax => nonempty_subsets_desc(vals),
            })
            .collect();
        let mut idx = vec![0usize; rows.len()];
        loop {
            self.tick()?;
            let mut set = BTreeSet::new();
            for (i, row) in rows.iter().enumerate() {
                for &a in &options[i][idx[i]] {
                    set.insert(place(row, pos, a));
                }
            }
            let ext = Team::from_rows(scope.to_vec(), set)?;
            let mut ok = true;
            for g in rest {
                if !self.eval_memo(&ext, g)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(true);
            }
            // odometer
            let mut i = 0;
            loop {
                if i == idx.len() {
                    return Ok(false);
                }
                idx[i] += 1;
                if idx[i] < options[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    /// Decides `∃v (ind(v ; C ; R) ∧ flat)` without enumerating witness
    /// functions. Inside each `C`-class the pairs `(R-value, v-value)` must
    /// form a product, so the class needs one common value set `W` that every
    /// `R`-group can produce exactly. Returns `None` when the conjunct does
    /// not have this shape.
    fn ind_witness(
        &self,
        team: &Team,
        v: &Var,
        conj: &Formula,
        allowed: &[Vec<Elem>],
    ) -> Option<Result<bool, EvalError>> {
        let Formula::Atom(Atom::Ind {
            left,
            condition,
            right,
        }) = conj
        else {
            return None;
        };
        let only_v = |t: &VarTuple| !t.is_empty() && t.iter().all(|w| w == v);
        let other = if only_v(left) && !condition.contains(v) && !right.contains(v) {
            right
        } else if only_v(right) && !condition.contains(v) && !left.contains(v) {
            left
        } else {
            return None;
        };
        let m = self.domain.len();
        if m > MASK_DOMAIN_LIMIT {
            return None;
        }
        let (ccols, rcols) = match (team.columns(condition), team.columns(other)) {
            (Ok(c), Ok(r)) => (c, r),
            (Err(e), _) | (_, Err(e)) => return Some(Err(e.into())),
        };
        let mut classes: HashMap<Vec<Elem>, HashMap<Vec<Elem>, Vec<u32>>> = HashMap::new();
        for (row, vals) in team.row_set().iter().zip(allowed) {
            let c: Vec<Elem> = ccols.iter().map(|&i| row[i]).collect();
            let r: Vec<Elem> = rcols.iter().map(|&i| row[i]).collect();
            let mask = vals.iter().fold(0u32, |acc, a| acc | 1 << a.0);
            classes.entry(c).or_default().entry(r).or_default().push(mask);
        }
        let strict = self.opts.mode == Semantics::Strict;
        for groups in classes.values() {
            let found = (1u32..1 << m).any(|w| {
                groups
                    .values()
                    .all(|masks| group_produces(masks, w, strict))
            });
            if !found {
                return Some(Ok(false));
            }
        }
        Some(Ok(true))
    }
}

/// Can rows with allowed-value masks `masks` pick witnesses inside `w`
/// whose union is exactly `w`?
fn group_produces(masks: &[u32], w: u32, strict: bool) -> bool {
    if masks.iter().any(|&a| a & w == 0) {
        return false;
    }
    if !strict {
        return masks.iter().fold(0, |acc, &a| acc | (a & w)) == w;
    }
    let mut reach: HashSet<u32> = HashSet::from([0]);
    for &a in masks {
        let opts = a & w;
        let mut next = HashSet::new();
        for &s in &reach {
            let mut o = opts;
            while o != 0 {
                let bit = o & o.wrapping_neg();
                next.insert(s | bit);
                o &= o - 1;
            }
        }
        reach = next;
    }
    reach.contains(&w)
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

fn flatten_and<'f>(f: &'f Formula, out: &mut Vec<&'f Formula>) {
    match f {
        Formula::And(a, b) => {
            flatten_and(a, out);
            flatten_and(b, out);
        }
        other => out.push(other),
    }
}

fn submasks(m: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(m);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & m) };
        Some(cur)
    })
}

fn nonempty_subsets_desc(vals: &[Elem]) -> Vec<Vec<Elem>> {
    let n = vals.len();
    let mut masks: Vec<u32> = (1u32..1 << n).collect();
    masks.sort_by_key(|m| std::cmp::Reverse(m.count_ones()));
    masks
        .into_iter()
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| vals[i]).collect())
        .collect()
}

fn project(row: &[Elem], cols: &[usize]) -> Vec<Elem> {
    cols.iter().map(|&c| row[c]).collect()
}

pub(crate) fn dep_holds(team: &Team, determiner: &VarTuple, determined: &VarTuple) -> Result<bool, EvalError> {
    let xs = team.columns(determiner)?;
    let ys = team.columns(determined)?;
    let mut seen: HashMap<Vec<Elem>, Vec<Elem>> = HashMap::new();
    for row in team.rows() {
        let y = project(row, &ys);
        match seen.get(&project(row, &xs)) {
            Some(prev) if *prev != y => return Ok(false),
            Some(_) => {}
            None => {
                seen.insert(project(row, &xs), y);
            }
        }
    }
    Ok(true)
}

pub(crate) fn ind_holds(
    team: &Team,
    left: &VarTuple,
    condition: &VarTuple,
    right: &VarTuple,
) -> Result<bool, EvalError> {
    let ls = team.columns(left)?;
    let cs = team.columns(condition)?;
    let rs = team.columns(right)?;
    type Class = (HashSet<Vec<Elem>>, HashSet<Vec<Elem>>, HashSet<(Vec<Elem>, Vec<Elem>)>);
    let mut classes: HashMap<Vec<Elem>, Class> = HashMap::new();
    for row in team.rows() {
        let entry = classes.entry(project(row, &cs)).or_default();
        let l = project(row, &ls);
        let r = project(row, &rs);
        entry.0.insert(l.clone());
        entry.1.insert(r.clone());
        entry.2.insert((l, r));
    }
    // every left pattern must meet every right pattern inside a class
    Ok(classes
        .values()
        .all(|(l, r, pairs)| pairs.len() == l.len() * r.len()))
}

fn check_symbols(structure: &Structure, f: &Formula) -> Result<(), EvalError> {
    let mut err = None;
    f.visit_atoms(&mut |a| {
        if err.is_some() {
            return;
        }
        let terms: Vec<&Term> = match a {
            Atom::Eq(x, y) => vec![x, y],
            Atom::Rel(name, args) => {
                match structure.relation(name) {
                    None => err = Some(EvalError::UnknownRelation(name.clone())),
                    Some(r) if r.arity != args.len() => {
                        err = Some(EvalError::ArityMismatch {
                            name: name.clone(),
                            expected: r.arity,
                            found: args.len(),
                        })
                    }
                    Some(_) => {}
                }
                args.iter().collect()
            }
            _ => vec![],
        };
        for t in terms {
            if let Term::Const(c) = t {
                if structure.constant(c).is_none() && err.is_none() {
                    err = Some(EvalError::UnknownConstant(c.clone()));
                }
            }
        }
    });
    err.map_or(Ok(()), Err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn team(scope: &[&str], rows: &[&[u32]]) -> Team {
        Team::from_ids(scope, rows).unwrap()
    }

    fn coin() -> Team {
        team(&["x", "y"], &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]])
    }

    fn ev(t: &Team, f: &str) -> bool {
        let m = Structure::of_size(2);
        evaluate(&m, t, &parse(f).unwrap(), Semantics::Lax).unwrap()
    }

    #[test]
    fn coin_team_is_independent() {
        assert!(ev(&coin(), "ind(x ;; y)"));
    }

    #[test]
    fn constant_is_independent_of_everything() {
        let t = team(&["x", "y"], &[&[1, 0], &[1, 1]]);
        assert!(ev(&t, "ind(x ;; y)"));
        assert!(ev(&t, "ind(x ;; x)"));
        assert!(!ev(&t, "ind(y ;; y)"));
    }

    #[test]
    fn dependence_atom_cases() {
        let t = team(&["x", "y"], &[&[0, 0], &[0, 1]]);
        assert!(!ev(&t, "dep(x ; y)"));
        assert!(ev(&team(&["x", "y"], &[]), "dep(x ; y)"));
        for r in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            assert!(ev(&team(&["x", "y"], &[&r]), "dep(x ; y)"));
        }
    }

    #[test]
    fn diagonal_is_not_independent() {
        let t = team(&["x", "y"], &[&[0, 0], &[1, 1]]);
        assert!(!ev(&t, "ind(x ;; y)"));
    }

    #[test]
    fn negated_dependency_atoms_need_empty_team() {
        assert!(!ev(&coin(), "not ind(x ;; y)"));
        assert!(ev(&team(&["x", "y"], &[]), "not dep(x ; y)"));
    }

    #[test]
    fn scope_errors() {
        let m = Structure::of_size(2);
        let f = parse("dep(x ; q)").unwrap();
        assert_eq!(
            evaluate(&m, &coin(), &f, Semantics::Lax),
            Err(EvalError::UnboundVariable(Var::new("q")))
        );
        let g = parse("exists z/{x}. z = x").unwrap();
        assert_eq!(evaluate(&m, &coin(), &g, Semantics::Lax), Err(EvalError::NotDesugared));
        let h = parse("R(x, y)").unwrap();
        assert!(matches!(
            evaluate(&m, &coin(), &h, Semantics::Lax),
            Err(EvalError::UnknownRelation(_))
        ));
    }

    #[test]
    fn paper_sentences() {
        let valid = parse("forall x. forall y. exists z. (ind(z ;; x) and z = y)").unwrap();
        let invalid = parse("forall x. exists y. exists z. (ind(z ;; x) and z = x)").unwrap();
        for mode in [Semantics::Lax, Semantics::Strict] {
            for n in 1..=3 {
                let m = Structure::of_size(n);
                assert!(sentence_sat(&m, &valid, mode).unwrap());
                assert_eq!(sentence_sat(&m, &invalid, mode).unwrap(), n == 1);
            }
        }
    }

    #[test]
    fn shortcuts_agree_with_plain_search() {
        let m = Structure::of_size(2);
        let formulas = [
            "forall x. forall y. exists z. (ind(z ;; x) and z = y)",
            "forall x. exists y. exists z. (ind(z ;; x) and z = x)",
            "forall x. exists y. (dep(; y) and (x = y or not x = y))",
            "forall x. forall y. (x = y or ind(x ;; y))",
            "forall x. exists y. (ind(y ; x ; x) and dep(x ; y))",
        ];
        for text in formulas {
            let f = parse(text).unwrap();
            for mode in [Semantics::Lax, Semantics::Strict] {
                let fast = Evaluator::new(&m, EvalOptions::new(mode))
                    .evaluate(&Team::unit(), &f)
                    .unwrap();
                let slow = Evaluator::new(&m, EvalOptions::new(mode).without_shortcuts())
                    .evaluate(&Team::unit(), &f)
                    .unwrap();
                assert_eq!(fast, slow, "{text} in {mode}");
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let m = Structure::of_size(3);
        let f = parse("forall x. forall y. exists z. (dep(x ; z) and ind(z ; x ; y) and not z = z)").unwrap();
        let mut opts = EvalOptions::new(Semantics::Lax).without_shortcuts();
        opts.budget = 10;
        let r = Evaluator::new(&m, opts).evaluate(&Team::unit(), &f);
        assert_eq!(r, Err(EvalError::SearchExhausted(10)));
    }

    #[test]
    fn group_production() {
        assert!(group_produces(&[0b11, 0b11], 0b11, false));
        assert!(group_produces(&[0b11, 0b11], 0b11, true));
        assert!(!group_produces(&[0b11], 0b11, true));
        assert!(!group_produces(&[0b01, 0b01], 0b11, false));
    }
}
