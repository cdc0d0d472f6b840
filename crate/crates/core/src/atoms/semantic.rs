//! Semantic entailment between atoms by countermodel search.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{vars_of, AtomError, AtomStatement, DerivationTrace};
use crate::team::{count_subsets, enumerate_teams, Elem, Team, Var, VarTuple};

/// Largest universe the search accepts.
pub const MAX_SEMANTIC_VARS: usize = 12;

/// Largest universe for the block-structured team family.
const MAX_FAMILY_VARS: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticConfig {
    /// Domain sizes to search; `None` means `2` and `|V| + 2`.
    pub domain_sizes: Option<Vec<usize>>,
    /// Row bound for enumerated teams; `None` means no bound.
    pub max_rows: Option<usize>,
    /// Enumerate exhaustively only when there are at most this many teams;
    /// otherwise sample.
    pub exhaustive_limit: u64,
    /// Random teams drawn per domain size when enumeration is too large.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SemanticConfig {
    fn default() -> Self {
        SemanticConfig {
            domain_sizes: None,
            max_rows: None,
            exhaustive_limit: 1 << 16,
            samples: 1000,
            seed: 0x5eed,
        }
    }
}

impl SemanticConfig {
    pub fn with_domain_sizes(mut self, sizes: Vec<usize>) -> Self {
        self.domain_sizes = Some(sizes);
        self
    }
}

/// What was searched.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchBound {
    pub domain_sizes: Vec<usize>,
    /// Sizes at which every team (within `max_rows`) was checked.
    pub exhaustive: Vec<usize>,
    /// Sizes at which only sampled teams were checked.
    pub sampled: Vec<usize>,
    pub max_rows: Option<usize>,
    /// Whether the block-structured family was searched.
    pub structured: bool,
    pub teams_checked: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// A team over domain `{0, …, domain_size-1}` satisfying every premise
    /// and falsifying the goal.
    Countermodel { team: Team, domain_size: usize },
    Derivation(DerivationTrace),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntailmentVerdict {
    /// No countermodel was found within `bound`.
    pub entailed: bool,
    pub witness: Option<Witness>,
    pub bound: SearchBound,
    /// The verdict is exact, not just up to the bound. Only claimed for
    /// dependence atoms and for unconditional single-variable independence
    /// atoms, where a complete axiomatization pins the countermodels down.
    pub exact: bool,
}

impl EntailmentVerdict {
    pub fn countermodel(&self) -> Option<&Team> {
        match &self.witness {
            Some(Witness::Countermodel { team, .. }) => Some(team),
            _ => None,
        }
    }
}

/// Atoms compiled against a fixed column layout.
enum Compiled {
    Dep(Vec<usize>, Vec<usize>),
    Ind(Vec<usize>, Vec<usize>, Vec<usize>),
}

fn key(row: &[Elem], cols: &[usize]) -> u128 {
    cols.iter().fold(0u128, |k, &c| k << 8 | row[c].0 as u128)
}

impl Compiled {
    fn new(a: &AtomStatement, scope: &[Var]) -> Compiled {
        let cols = |t: &VarTuple| -> Vec<usize> {
            t.iter()
                .map(|v| scope.iter().position(|w| w == v).expect("scope covers the atoms"))
                .collect()
        };
        match a {
            AtomStatement::Dep {
                determiner,
                determined,
            } => Compiled::Dep(cols(determiner), cols(determined)),
            AtomStatement::Ind {
                left,
                condition,
                right,
            } => Compiled::Ind(cols(left), cols(condition), cols(right)),
        }
    }

    fn holds(&self, rows: &[Vec<Elem>]) -> bool {
        match self {
            Compiled::Dep(x, y) => {
                let mut seen: HashMap<u128, u128> = HashMap::with_capacity(rows.len());
                rows.iter()
                    .all(|r| *seen.entry(key(r, x)).or_insert_with(|| key(r, y)) == key(r, y))
            }
            Compiled::Ind(l, c, r) => {
                type Class = (HashSet<u128>, HashSet<u128>, HashSet<(u128, u128)>);
                let mut classes: HashMap<u128, Class> = HashMap::new();
                for row in rows {
                    let e = classes.entry(key(row, c)).or_default();
                    let (a, b) = (key(row, l), key(row, r));
                    e.0.insert(a);
                    e.1.insert(b);
                    e.2.insert((a, b));
                }
                classes.values().all(|(a, b, p)| p.len() == a.len() * b.len())
            }
        }
    }
}

/// Teams built from a partition of the variables into blocks: variables in
/// one block are equal, some blocks are fixed at 0, and the remaining blocks
/// range independently over `{0, 1}`.
fn structured_family(n: usize) -> Vec<Vec<Vec<Elem>>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let blocks = rgs.iter().max().map_or(0, |m| m + 1);
        for constant in 0u32..1 << blocks {
            let free: Vec<usize> = (0..blocks).filter(|b| constant >> b & 1 == 0).collect();
            let mut rows = Vec::with_capacity(1 << free.len());
            for bits in 0u32..1 << free.len() {
                let mut val = vec![0u32; blocks];
                for (k, &b) in free.iter().enumerate() {
                    val[b] = bits >> k & 1;
                }
                rows.push(rgs.iter().map(|&b| Elem(val[b])).collect());
            }
            out.push(rows);
        }
        // next restricted growth string
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let prefix_max = rgs[..i].iter().max().copied().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
        }
    }
}

fn random_team(rng: &mut ChaCha8Rng, n: usize, d: usize, space: u128) -> Vec<Vec<Elem>> {
    let max = space.min(16) as usize;
    let k = rng.random_range(1..=max);
    let mut set = HashSet::new();
    for _ in 0..k {
        set.insert((0..n).map(|_| Elem(rng.random_range(0..d as u32))).collect::<Vec<_>>());
    }
    set.into_iter().collect()
}

/// Searches for a team satisfying `t` and falsifying `goal`: for each
/// domain size, the block-structured family, then every team when that is
/// at most `exhaustive_limit` teams, random teams otherwise. Dependence-only
/// problems only need two-row teams.
pub fn semantic_entails(
    t: &[AtomStatement],
    goal: &AtomStatement,
    cfg: &SemanticConfig,
) -> Result<EntailmentVerdict, AtomError> {
    let vars = vars_of(t.iter().chain(std::iter::once(goal)));
    let n = vars.len();
    if n > MAX_SEMANTIC_VARS {
        return Err(AtomError::UniverseTooLarge(n, MAX_SEMANTIC_VARS));
    }
    let dep_only = goal.is_dep() && t.iter().all(AtomStatement::is_dep);
    let pairs_only =
        goal.as_unconditional_pair().is_some() && t.iter().all(|a| a.as_unconditional_pair().is_some());
    let mut sizes: Vec<usize> = Vec::new();
    for d in cfg.domain_sizes.clone().unwrap_or_else(|| vec![2, n + 2]) {
        if d == 0 || d > 255 {
            return Err(AtomError::TooLarge(format!("domain size {d}")));
        }
        if !sizes.contains(&d) {
            sizes.push(d);
        }
    }
    // a dependence violation needs two rows, and premises survive passing to
    // a subteam
    let max_rows = if dep_only {
        Some(cfg.max_rows.map_or(2, |m| m.min(2)))
    } else {
        cfg.max_rows
    };
    let premises: Vec<Compiled> = t.iter().map(|a| Compiled::new(a, &vars)).collect();
    let target = Compiled::new(goal, &vars);
    let refutes = |rows: &[Vec<Elem>]| !target.holds(rows) && premises.iter().all(|p| p.holds(rows));

    let mut bound = SearchBound {
        domain_sizes: sizes.clone(),
        max_rows,
        ..SearchBound::default()
    };
    let found = |rows: Vec<Vec<Elem>>, d: usize, bound: SearchBound| -> Result<EntailmentVerdict, AtomError> {
        let team = Team::from_rows(vars.clone(), rows)?;
        for a in t {
            if !a.holds(&team)? {
                return Err(AtomError::RecheckFailed);
            }
        }
        if goal.holds(&team)? {
            return Err(AtomError::RecheckFailed);
        }
        Ok(EntailmentVerdict {
            entailed: false,
            witness: Some(Witness::Countermodel { team, domain_size: d }),
            bound,
            exact: true,
        })
    };

    let family = if !dep_only && n <= MAX_FAMILY_VARS {
        structured_family(n)
    } else {
        Vec::new()
    };
    for &d in &sizes {
        if d >= 2 && !family.is_empty() {
            bound.structured = true;
            for rows in &family {
                bound.teams_checked += 1;
                if refutes(rows) {
                    return found(rows.clone(), d, bound);
                }
            }
        }
        let space = (d as u128).saturating_pow(n as u32);
        let total = count_subsets(space, max_rows.map_or(space, |m| m as u128));
        if total <= cfg.exhaustive_limit as u128 {
            let domain: Vec<Elem> = (0..d as u32).map(Elem).collect();
            let teams = enumerate_teams(&VarTuple::new(vars.clone()), &domain, max_rows, cfg.exhaustive_limit)?;
            for team in teams {
                bound.teams_checked += 1;
                let rows: Vec<Vec<Elem>> = team.rows().map(<[Elem]>::to_vec).collect();
                if refutes(&rows) {
                    return found(rows, d, bound);
                }
            }
            bound.exhaustive.push(d);
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (d as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            for _ in 0..cfg.samples {
                let mut rows = random_team(&mut rng, n, d, space);
                if dep_only {
                    rows.truncate(2);
                }
                bound.teams_checked += 1;
                if refutes(&rows) {
                    return found(rows, d, bound);
                }
            }
            bound.sampled.push(d);
        }
    }
    let exact = (dep_only && max_rows == Some(2) && bound.exhaustive.iter().any(|&d| d >= 2))
        || (pairs_only && bound.structured);
    Ok(EntailmentVerdict {
        entailed: true,
        witness: None,
        bound,
        exact,
    })
}
