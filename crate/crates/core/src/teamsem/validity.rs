use rayon::prelude::*;

use super::{sentence_sat, EvalError};
use crate::structure::Structure;
use crate::syntax::{desugar, Formula};
use crate::team::{all_rows, Elem, Semantics};

/// Outcome of a bounded validity search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    /// True in every structure with `1..=max_size` elements.
    ValidUpTo {
        max_size: usize,
        structures_checked: u64,
    },
    /// A smallest structure (in enumeration order) where the sentence fails.
    Countermodel(Structure),
}

#[derive(Debug, Clone, Copy)]
pub struct ValiditySearch {
    pub max_size: usize,
    pub mode: Semantics,
    /// Maximum number of structures examined per domain size.
    pub structure_cap: u64,
}

impl ValiditySearch {
    pub fn new(max_size: usize, mode: Semantics) -> Self {
        ValiditySearch {
            max_size,
            mode,
            structure_cap: 1 << 16,
        }
    }

    pub fn run(&self, sentence: &Formula) -> Result<Validity, EvalError> {
        let free = sentence.free_vars();
        if !free.is_empty() {
            return Err(EvalError::NotASentence(free));
        }
        let f = desugar(sentence)?;
        let relations = f.relation_symbols().map_err(EvalError::TooLarge)?;
        let constants: Vec<String> = f.constant_symbols().into_iter().collect();
        let mut checked = 0u64;
        for n in 1..=self.max_size {
            let structures = interpretations(n, &relations, &constants, self.structure_cap)?;
            checked += structures.len() as u64;
            let found = structures.par_iter().find_map_first(|m| match sentence_sat(m, &f, self.mode) {
                Ok(true) => None,
                Ok(false) => Some(Ok(m.clone())),
                Err(e) => Some(Err(e)),
            });
            match found {
                Some(Ok(m)) => return Ok(Validity::Countermodel(m)),
                Some(Err(e)) => return Err(e),
                None => {}
            }
        }
        Ok(Validity::ValidUpTo {
            max_size: self.max_size,
            structures_checked: checked,
        })
    }
}

/// Checks a sentence in every structure of size `1..=max_size` for its
/// vocabulary, with the default per-size cap.
pub fn validity_search(sentence: &Formula, max_size: usize, mode: Semantics) -> Result<Validity, EvalError> {
    ValiditySearch::new(max_size, mode).run(sentence)
}

fn interpretations(
    n: usize,
    relations: &std::collections::BTreeMap<String, usize>,
    constants: &[String],
    cap: u64,
) -> Result<Vec<Structure>, EvalError> {
    let domain: Vec<Elem> = (0..n as u32).map(Elem).collect();
    let spaces: Vec<(String, usize, Vec<Vec<Elem>>)> = relations
        .iter()
        .map(|(name, &k)| (name.clone(), k, all_rows(k, &domain)))
        .collect();
    // digit radices: 2^|M^k| per relation, |M| per constant
    let mut bits = 0u32;
    for (_, _, tuples) in &spaces {
        bits = bits.saturating_add(tuples.len() as u32);
    }
    let total = if bits >= 64 {
        None
    } else {
        (n as u64)
            .checked_pow(constants.len() as u32)
            .and_then(|c| c.checked_mul(1u64 << bits))
    };
    let total = match total {
        Some(t) if t <= cap => t,
        _ => {
            return Err(EvalError::TooLarge(format!(
                "more than {cap} structures of size {n}"
            )))
        }
    };
    let mut out = Vec::with_capacity(total as usize);
    for mut code in 0..total {
        let mut m = Structure::of_size(n);
        for (name, k, tuples) in &spaces {
            let len = tuples.len() as u32;
            let mask = code & ((1u64 << len) - 1);
            code >>= len;
            let chosen = (0..len as usize)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| tuples[i].clone());
            m.set_relation(name, *k, chosen).expect("well-formed relation");
        }
        for c in constants {
            let e = Elem((code % n as u64) as u32);
            code /= n as u64;
            m.set_constant(c, e).expect("element in range");
        }
        out.push(m);
    }
    Ok(out)
}
