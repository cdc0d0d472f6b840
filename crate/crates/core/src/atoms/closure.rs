//! Forward chaining under the rule inventory, restricted to tuples over a
//! fixed universe.

use std::collections::{HashMap, VecDeque};

use super::canon::{submasks, CanonAtom, Universe};
use super::{AtomError, AtomStatement, DerivationTrace, Rule};

pub const DEFAULT_MAX_STEPS: usize = 200_000;

/// Reflexivity alone yields `4^n` atoms, so universes stay small.
pub const MAX_CLOSURE_UNIVERSE: usize = 10;

#[derive(Clone, Debug)]
struct Step {
    rule: Rule,
    premises: Vec<usize>,
    atom: CanonAtom,
}

/// The result of [`rule_closure`].
#[derive(Clone, Debug)]
pub struct Closure {
    universe: Universe,
    steps: Vec<Step>,
    index: HashMap<CanonAtom, usize>,
    truncated: bool,
}

impl Closure {
    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    /// Number of distinct atoms (premises included).
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The step budget ran out before a fixed point was reached.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn contains(&self, a: &AtomStatement) -> bool {
        self.universe
            .canon(a)
            .is_ok_and(|c| self.index.contains_key(&c))
    }

    pub fn atoms(&self) -> impl Iterator<Item = AtomStatement> + '_ {
        self.steps.iter().map(|s| self.universe.statement(s.atom))
    }

    /// The steps needed for `a`, renumbered, ending in `a`.
    pub fn derivation(&self, a: &AtomStatement) -> Option<DerivationTrace> {
        let target = *self.index.get(&self.universe.canon(a).ok()?)?;
        let mut needed = vec![false; self.steps.len()];
        let mut stack = vec![target];
        while let Some(i) = stack.pop() {
            if !needed[i] {
                needed[i] = true;
                stack.extend(&self.steps[i].premises);
            }
        }
        let mut renumber = HashMap::new();
        let mut trace = DerivationTrace::new();
        for (i, step) in self.steps.iter().enumerate().filter(|(i, _)| needed[*i]) {
            let premises = step.premises.iter().map(|p| renumber[p]).collect();
            let k = trace.push(step.rule, premises, self.universe.statement(step.atom));
            renumber.insert(i, k);
        }
        Some(trace)
    }

    /// The whole closure as one trace.
    pub fn trace(&self) -> DerivationTrace {
        let mut trace = DerivationTrace::new();
        for s in &self.steps {
            trace.push(s.rule, s.premises.clone(), self.universe.statement(s.atom));
        }
        trace
    }
}

struct Engine {
    full: u32,
    steps: Vec<Step>,
    index: HashMap<CanonAtom, usize>,
    queue: VecDeque<usize>,
    derived: usize,
    max_steps: usize,
    truncated: bool,
    // processed independence atoms
    by_cond_right: HashMap<(u32, u32), Vec<usize>>,
    by_cond: HashMap<u32, Vec<usize>>,
    self_ind: HashMap<u32, Vec<usize>>,
}

impl Engine {
    /// Records `atom`; false once the budget is exhausted.
    fn add(&mut self, rule: Rule, premises: Vec<usize>, atom: CanonAtom) -> bool {
        if self.index.contains_key(&atom) {
            return true;
        }
        if rule != Rule::Given {
            if self.derived >= self.max_steps {
                self.truncated = true;
                return false;
            }
            self.derived += 1;
        }
        self.steps.push(Step { rule, premises, atom });
        let i = self.steps.len() - 1;
        self.index.insert(atom, i);
        self.queue.push_back(i);
        true
    }

    fn ind_parts(&self, i: usize) -> (u32, u32, u32) {
        match self.steps[i].atom {
            CanonAtom::Ind { left, condition, right } => (left, condition, right),
            CanonAtom::Dep { .. } => unreachable!("indices hold independence atoms only"),
        }
    }

    fn consequences(&mut self, i: usize) -> Vec<(Rule, Vec<usize>, CanonAtom)> {
        let mut out = Vec::new();
        let ind = CanonAtom::ind;
        match self.steps[i].atom {
            CanonAtom::Dep { determiner: x, determined: y } => {
                for z in 0..=self.full {
                    out.push((Rule::DepToInd, vec![i], ind(y, x, z)));
                }
                for w in submasks(self.full & !x) {
                    out.push((Rule::Augmentation, vec![i], CanonAtom::dep(x | w, y)));
                }
            }
            CanonAtom::Ind { left: l, condition: c, right: r } => {
                self.by_cond_right.entry((c, r)).or_default().push(i);
                self.by_cond.entry(c).or_default().push(i);
                if l == r {
                    self.self_ind.entry(l).or_default().push(i);
                }
                out.push((Rule::Symmetry, vec![i], ind(r, c, l)));
                out.push((Rule::FixedParameter, vec![i], ind(r | c, c, l | c)));
                out.push((Rule::IndToDep, vec![i], CanonAtom::dep(c, l & r)));
                if l == r {
                    for z in 0..=self.full {
                        out.push((Rule::Constancy, vec![i], ind(l, c, z)));
                    }
                }
                for l2 in submasks(l) {
                    for r2 in submasks(r) {
                        out.push((Rule::Weakening, vec![i], ind(l2, c, r2)));
                    }
                }
                // first transitivity, this atom as x̄ ⊥_z̄ ȳ
                for &j in self.by_cond_right.get(&(c | l, r)).into_iter().flatten() {
                    let (u, _, _) = self.ind_parts(j);
                    out.push((Rule::FirstTransitivity, vec![i, j], ind(u, c, r)));
                }
                // ... and as ū ⊥_{z̄x̄} ȳ
                for z in submasks(c) {
                    for &j in self.by_cond_right.get(&(z, r)).into_iter().flatten() {
                        let (x, _, _) = self.ind_parts(j);
                        if z | x == c {
                            out.push((Rule::FirstTransitivity, vec![j, i], ind(l, z, r)));
                        }
                    }
                }
                // second transitivity, this atom as ȳ ⊥_z̄ ȳ
                if l == r {
                    for &j in self.by_cond.get(&l).into_iter().flatten() {
                        let (big, _, u) = self.ind_parts(j);
                        if c & !big == 0 {
                            out.push((Rule::SecondTransitivity, vec![i, j], ind(big, c, u)));
                        }
                    }
                }
                // ... and as z̄x̄ ⊥_ȳ ū
                for &j in self.self_ind.get(&c).into_iter().flatten() {
                    let (_, z, _) = self.ind_parts(j);
                    if z & !l == 0 {
                        out.push((Rule::SecondTransitivity, vec![j, i], ind(l, z, r)));
                    }
                }
            }
        }
        out
    }
}

/// Closes `t` under the rule inventory over `universe`, stopping after
/// `max_steps` new atoms. Sound, not complete.
pub fn rule_closure(t: &[AtomStatement], universe: &Universe, max_steps: usize) -> Result<Closure, AtomError> {
    if universe.len() > MAX_CLOSURE_UNIVERSE {
        return Err(AtomError::UniverseTooLarge(universe.len(), MAX_CLOSURE_UNIVERSE));
    }
    let given = t.iter().map(|a| universe.canon(a)).collect::<Result<Vec<_>, _>>()?;
    let mut e = Engine {
        full: universe.full(),
        steps: Vec::new(),
        index: HashMap::new(),
        queue: VecDeque::new(),
        derived: 0,
        max_steps,
        truncated: false,
        by_cond_right: HashMap::new(),
        by_cond: HashMap::new(),
        self_ind: HashMap::new(),
    };
    for g in given {
        e.add(Rule::Given, vec![], g);
    }
    'seed: for x in 0..=e.full {
        for y in 0..=e.full {
            if !e.add(Rule::Reflexivity, vec![], CanonAtom::ind(x, x, y)) {
                break 'seed;
            }
        }
    }
    'run: while !e.truncated {
        let Some(i) = e.queue.pop_front() else { break };
        for (rule, premises, atom) in e.consequences(i) {
            if !e.add(rule, premises, atom) {
                break 'run;
            }
        }
    }
    Ok(Closure {
        universe: universe.clone(),
        steps: e.steps,
        index: e.index,
        truncated: e.truncated,
    })
}
