use std::fmt;

use thiserror::Error;

use super::canon::Universe;
use super::{vars_of, AtomStatement, Rule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: Rule,
    /// Indices of earlier steps.
    pub premises: Vec<usize>,
    pub conclusion: AtomStatement,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {reason}")]
pub struct TraceError {
    pub step: usize,
    pub reason: String,
}

/// A derivation: each step cites a rule and earlier steps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DerivationTrace {
    steps: Vec<TraceStep>,
}

impl DerivationTrace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a step and returns its index.
    pub fn push(&mut self, rule: Rule, premises: Vec<usize>, conclusion: AtomStatement) -> usize {
        self.steps.push(TraceStep {
            rule,
            premises,
            conclusion,
        });
        self.steps.len() - 1
    }

    pub fn steps(&self) -> &[TraceStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Conclusion of the last step.
    pub fn conclusion(&self) -> Option<&AtomStatement> {
        self.steps.last().map(|s| &s.conclusion)
    }

    /// Rechecks every step: premises come earlier, `Given` steps belong to
    /// `given`, and every other step is a correct rule application.
    pub fn verify(&self, given: &[AtomStatement]) -> Result<(), TraceError> {
        let universe = Universe::of_atoms(self.steps.iter().map(|s| &s.conclusion).chain(given)).map_err(|e| {
            TraceError {
                step: 0,
                reason: e.to_string(),
            }
        })?;
        for (i, step) in self.steps.iter().enumerate() {
            let fail = |reason: String| TraceError { step: i, reason };
            if let Some(&p) = step.premises.iter().find(|&&p| p >= i) {
                return Err(fail(format!("premise {p} does not precede the step")));
            }
            if step.rule == Rule::Given {
                if !given.iter().any(|g| g.same_as(&step.conclusion)) {
                    return Err(fail(format!("`{}` is not among the premises", step.conclusion)));
                }
                continue;
            }
            let canon = |a: &AtomStatement| universe.canon(a).expect("universe covers the trace");
            let premises: Vec<_> = step.premises.iter().map(|&p| canon(&self.steps[p].conclusion)).collect();
            if !step.rule.check(&premises, canon(&step.conclusion)) {
                return Err(fail(format!("{} does not yield `{}`", step.rule, step.conclusion)));
            }
        }
        Ok(())
    }

    /// Variables mentioned anywhere in the trace.
    pub fn vars(&self) -> Vec<crate::team::Var> {
        vars_of(self.steps.iter().map(|s| &s.conclusion))
    }
}

impl fmt::Display for DerivationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            write!(f, "{:>3}. {}  [{}", i + 1, s.conclusion, s.rule)?;
            for (k, p) in s.premises.iter().enumerate() {
                write!(f, "{}{}", if k == 0 { " " } else { ", " }, p + 1)?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
