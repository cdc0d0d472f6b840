//! Two-row branching quantifiers: Skolem-function semantics, comparison
//! with the independence-atom rendering, and the related team identities.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::structure::Structure;
use crate::syntax::{desugar_henkin, DesugarError, Formula};
use crate::team::{Assignment, Elem, Semantics, Team, TeamError, Var, VarTuple};
use crate::teamsem::{dep_holds, evaluate, holds_in, ind_holds, Env, EvalError};

/// Largest domain for the Skolem-function search.
pub const MAX_SKOLEM_DOMAIN: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BranchError {
    #[error("expected a branching formula `branch{{forall x exists y; forall u exists v}}. φ`")]
    NotBranching,
    #[error("branching prefixes with {0} rows are not supported (exactly 2 required)")]
    UnsupportedRows(usize),
    #[error("the matrix of a branching formula must be first-order")]
    NotFirstOrder,
    #[error("variable `{0}` is free in the matrix but not assigned")]
    UnboundVariable(Var),
    #[error("domain of size {size} exceeds the Skolem search limit of {max}")]
    DomainTooLarge { size: usize, max: usize },
    #[error("team lacks variable `{0}`")]
    MissingVariable(Var),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Desugar(#[from] DesugarError),
    #[error(transparent)]
    Team(#[from] TeamError),
}

struct Prefix<'f> {
    x: &'f Var,
    y: &'f Var,
    u: &'f Var,
    v: &'f Var,
    matrix: &'f Formula,
}

fn prefix(h: &Formula) -> Result<Prefix<'_>, BranchError> {
    let Formula::Henkin { rows, matrix } = h else {
        return Err(BranchError::NotBranching);
    };
    if rows.len() != 2 {
        return Err(BranchError::UnsupportedRows(rows.len()));
    }
    if !matrix.is_first_order() {
        return Err(BranchError::NotFirstOrder);
    }
    Ok(Prefix {
        x: &rows[0].0,
        y: &rows[0].1,
        u: &rows[1].0,
        v: &rows[1].1,
        matrix,
    })
}

/// `M ⊨_s branch{∀x ∃y; ∀u ∃v}. φ`: there are `f, g : M → M` with
/// `φ(a, f(a), b, g(b))` for all `a, b`. Since `g(b)` can be chosen for each
/// `b` separately, this is `∃f ∀b ∃c ∀a φ(a, f(a), b, c)`.
pub fn henkin_eval_skolem(structure: &Structure, s: &Assignment, h: &Formula) -> Result<bool, BranchError> {
    let p = prefix(h)?;
    let n = structure.size();
    if n > MAX_SKOLEM_DOMAIN {
        return Err(BranchError::DomainTooLarge {
            size: n,
            max: MAX_SKOLEM_DOMAIN,
        });
    }
    let bound = [p.x, p.y, p.u, p.v];
    for w in p.matrix.free_vars() {
        if !bound.contains(&&w) && s.get(&w).is_none() {
            return Err(BranchError::UnboundVariable(w));
        }
    }
    // table[a][fa][b][c] = φ(a, fa, b, c)
    let mut table = vec![false; n * n * n * n];
    let mut env = Env::new(s.scope(), s.values());
    let base = env.vars.len();
    env.vars.extend([p.x.clone(), p.y.clone(), p.u.clone(), p.v.clone()]);
    env.vals.extend([Elem(0); 4]);
    for a in 0..n {
        for fa in 0..n {
            for b in 0..n {
                for c in 0..n {
                    env.vals[base..].copy_from_slice(&[Elem(a as u32), Elem(fa as u32), Elem(b as u32), Elem(c as u32)]);
                    table[((a * n + fa) * n + b) * n + c] = holds_in(structure, &mut env, p.matrix)?;
                }
            }
        }
    }
    let mut f = vec![0usize; n];
    loop {
        let good = (0..n).all(|b| (0..n).any(|c| (0..n).all(|a| table[((a * n + f[a]) * n + b) * n + c])));
        if good {
            return Ok(true);
        }
        let mut i = 0;
        loop {
            if i == n {
                return Ok(false);
            }
            f[i] += 1;
            if f[i] < n {
                break;
            }
            f[i] = 0;
            i += 1;
        }
    }
}

/// Skolem semantics against the team semantics of the desugared form on
/// the team `{s}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lemma14Report {
    pub skolem: bool,
    pub team: bool,
}

impl Lemma14Report {
    pub fn agree(&self) -> bool {
        self.skolem == self.team
    }
}

pub fn check_lemma14(
    structure: &Structure,
    s: &Assignment,
    h: &Formula,
    mode: Semantics,
) -> Result<Lemma14Report, BranchError> {
    let skolem = henkin_eval_skolem(structure, s, h)?;
    let desugared = desugar_henkin(h)?;
    let team = evaluate(structure, &Team::singleton(s), &desugared, mode)?;
    Ok(Lemma14Report { skolem, team })
}

/// `(=(x u, v) ∧ v ⊥_u x) ⇒ =(u, v)` on one team.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyImplication {
    pub premise: bool,
    pub conclusion: bool,
}

impl KeyImplication {
    pub fn respected(&self) -> bool {
        !self.premise || self.conclusion
    }
}

fn tuple(names: &[&str]) -> VarTuple {
    VarTuple::from_names(names)
}

fn require(team: &Team, names: &[&str]) -> Result<(), BranchError> {
    for n in names {
        let v = Var::new(n);
        if team.index_of(&v).is_none() {
            return Err(BranchError::MissingVariable(v));
        }
    }
    Ok(())
}

/// Evaluates both sides of the implication on a team over `x, u, v`.
pub fn key_implication_check(team: &Team) -> Result<KeyImplication, BranchError> {
    require(team, &["x", "u", "v"])?;
    let premise = dep_holds(team, &tuple(&["x", "u"]), &tuple(&["v"]))?
        && ind_holds(team, &tuple(&["v"]), &tuple(&["u"]), &tuple(&["x"]))?;
    let conclusion = dep_holds(team, &tuple(&["u"]), &tuple(&["v"]))?;
    Ok(KeyImplication { premise, conclusion })
}

/// Which independence condition accompanies `=(x u, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemarkCondition {
    /// `v ⊥ x`: too weak to force `=(u, v)`.
    Weak,
    /// `v ⊥_u x`: forces `=(u, v)`.
    Strong,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemarkCounterexample {
    /// Team over `(x, u, v)` with elements `0..domain_size`.
    pub team: Team,
    pub domain_size: usize,
    pub note: Option<String>,
}

/// Teams over `(x, u, v)` satisfying `=(x u, v)`, the chosen independence
/// condition and `¬=(u, v)`; the weak condition by default.
pub fn find_remark_counterexample(
    domain_size: usize,
    max_rows: usize,
) -> Result<Option<RemarkCounterexample>, BranchError> {
    find_remark_counterexample_with(domain_size, max_rows, RemarkCondition::Weak)
}

/// Searches domains `2..=domain_size` in turn, teams by increasing size.
/// Only teams where `v` is a function of `(x, u)` are generated, which is
/// exactly the premise `=(x u, v)`.
pub fn find_remark_counterexample_with(
    domain_size: usize,
    max_rows: usize,
    condition: RemarkCondition,
) -> Result<Option<RemarkCounterexample>, BranchError> {
    if domain_size > 6 {
        return Err(BranchError::DomainTooLarge {
            size: domain_size,
            max: 6,
        });
    }
    let scope = vec![Var::new("x"), Var::new("u"), Var::new("v")];
    let condition_tuple = match condition {
        RemarkCondition::Weak => tuple(&[]),
        RemarkCondition::Strong => tuple(&["u"]),
    };
    for d in 2..=domain_size {
        let inputs: Vec<(u32, u32)> = (0..d as u32).flat_map(|a| (0..d as u32).map(move |b| (a, b))).collect();
        for k in 1..=max_rows.min(inputs.len()) {
            let mut chosen: Vec<usize> = (0..k).collect();
            loop {
                let mut outputs = vec![0u32; k];
                loop {
                    let rows: BTreeSet<Vec<Elem>> = chosen
                        .iter()
                        .zip(&outputs)
                        .map(|(&i, &o)| vec![Elem(inputs[i].0), Elem(inputs[i].1), Elem(o)])
                        .collect();
                    let team = Team::from_rows(scope.clone(), rows)?;
                    if ind_holds(&team, &tuple(&["v"]), &condition_tuple, &tuple(&["x"]))?
                        && !dep_holds(&team, &tuple(&["u"]), &tuple(&["v"]))?
                    {
                        let hit = recheck(team, d, condition)?;
                        return Ok(Some(hit));
                    }
                    if !next_digits(&mut outputs, d as u32) {
                        break;
                    }
                }
                if !next_combination(&mut chosen, inputs.len()) {
                    break;
                }
            }
        }
    }
    Ok(None)
}

fn recheck(team: Team, d: usize, condition: RemarkCondition) -> Result<RemarkCounterexample, BranchError> {
    let m = Structure::of_size(d);
    let cond = match condition {
        RemarkCondition::Weak => "ind(v ;; x)",
        RemarkCondition::Strong => "ind(v ; u ; x)",
    };
    let text = format!("dep(x u ; v) and {cond} and not dep(u ; v)");
    let positive = crate::syntax::parse(&format!("dep(x u ; v) and {cond}")).expect("fixed formula");
    let negative = crate::syntax::parse("dep(u ; v)").expect("fixed formula");
    let ok = evaluate(&m, &team, &positive, Semantics::Lax)? && !evaluate(&m, &team, &negative, Semantics::Lax)?;
    assert!(ok, "search result must satisfy {text}");
    let note = (d < 3).then(|| {
        format!("a counterexample exists already over {d} values, fewer than the three values usually quoted")
    });
    Ok(RemarkCounterexample {
        team,
        domain_size: d,
        note,
    })
}

fn next_digits(digits: &mut [u32], base: u32) -> bool {
    for x in digits.iter_mut().rev() {
        *x += 1;
        if *x < base {
            return true;
        }
        *x = 0;
    }
    false
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
