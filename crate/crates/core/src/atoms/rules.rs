//! The rule inventory. Every rule is stated on canonical masks, so the
//! permutation rule is the identity.

use std::fmt;
use std::str::FromStr;

use super::canon::{submasks, CanonAtom};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    /// A member of the premise set.
    Given,
    /// `x̄ ⊥_x̄ ȳ`.
    Reflexivity,
    /// `z̄ ⊥_x̄ ȳ ⇒ ȳ ⊥_x̄ z̄`.
    Symmetry,
    /// `ȳy' ⊥_x̄ z̄z' ⇒ ȳ ⊥_x̄ z̄`.
    Weakening,
    /// Reordering tuples; trivial on canonical forms.
    Permutation,
    /// `z̄ ⊥_x̄ ȳ ⇒ ȳx̄ ⊥_x̄ z̄x̄`.
    FixedParameter,
    /// `x̄ ⊥_z̄ ȳ ∧ ū ⊥_{z̄x̄} ȳ ⇒ ū ⊥_z̄ ȳ`.
    FirstTransitivity,
    /// `ȳ ⊥_z̄ ȳ ∧ z̄x̄ ⊥_ȳ ū ⇒ x̄ ⊥_z̄ ū`.
    SecondTransitivity,
    /// `ȳ ⊥_x̄ ȳ ⇒ ȳ ⊥_x̄ z̄`.
    Constancy,
    /// `=(x̄,ȳ) ⇒ ȳ ⊥_x̄ z̄`.
    DepToInd,
    /// `ȳ ⊥_x̄ z̄ ⇒ =(x̄, ȳ∩z̄)`.
    IndToDep,
    /// `=(ȳ,x̄) ∧ ȳ ⊆ z̄ ⇒ =(z̄,x̄)`.
    Augmentation,
    /// `=(x̄,x̄)`.
    DepReflexivity,
    /// `=(ȳ,z̄) ∧ =(z̄,x̄) ⇒ =(ȳ,x̄)`.
    DepTransitivity,
    /// `=(x̄,ȳ) ∧ =(x̄,z̄) ⇒ =(x̄,ȳz̄)`; a dependence on a tuple is the
    /// conjunction of the dependences on its members.
    Conjunction,
    /// `=(x̄,ȳz̄) ⇒ =(x̄,ȳ)`.
    Decomposition,
}

fn sub(a: u32, b: u32) -> bool {
    a & !b == 0
}

fn masks(n: usize) -> std::ops::Range<u32> {
    0..1u32 << n
}

/// A rule instance: premises and conclusion.
pub type Instance = (Vec<CanonAtom>, CanonAtom);

impl Rule {
    /// The rules used by forward-chaining closure.
    pub const INVENTORY: [Rule; 11] = [
        Rule::Reflexivity,
        Rule::Symmetry,
        Rule::Weakening,
        Rule::Permutation,
        Rule::FixedParameter,
        Rule::FirstTransitivity,
        Rule::SecondTransitivity,
        Rule::Constancy,
        Rule::DepToInd,
        Rule::IndToDep,
        Rule::Augmentation,
    ];

    /// The dependence rules used in Armstrong derivations.
    pub const ARMSTRONG: [Rule; 6] = [
        Rule::DepReflexivity,
        Rule::Augmentation,
        Rule::Permutation,
        Rule::DepTransitivity,
        Rule::Conjunction,
        Rule::Decomposition,
    ];

    pub const ALL: [Rule; 16] = [
        Rule::Given,
        Rule::Reflexivity,
        Rule::Symmetry,
        Rule::Weakening,
        Rule::Permutation,
        Rule::FixedParameter,
        Rule::FirstTransitivity,
        Rule::SecondTransitivity,
        Rule::Constancy,
        Rule::DepToInd,
        Rule::IndToDep,
        Rule::Augmentation,
        Rule::DepReflexivity,
        Rule::DepTransitivity,
        Rule::Conjunction,
        Rule::Decomposition,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Given => "Given",
            Rule::Reflexivity => "Reflexivity",
            Rule::Symmetry => "Symmetry",
            Rule::Weakening => "Weakening",
            Rule::Permutation => "Permutation",
            Rule::FixedParameter => "FixedParameter",
            Rule::FirstTransitivity => "FirstTransitivity",
            Rule::SecondTransitivity => "SecondTransitivity",
            Rule::Constancy => "Constancy",
            Rule::DepToInd => "DepToInd",
            Rule::IndToDep => "IndToDep",
            Rule::Augmentation => "Augmentation",
            Rule::DepReflexivity => "DepReflexivity",
            Rule::DepTransitivity => "DepTransitivity",
            Rule::Conjunction => "Conjunction",
            Rule::Decomposition => "Decomposition",
        }
    }

    /// Number of premises.
    pub fn arity(self) -> usize {
        match self {
            Rule::Given | Rule::Reflexivity | Rule::DepReflexivity => 0,
            Rule::FirstTransitivity | Rule::SecondTransitivity | Rule::DepTransitivity | Rule::Conjunction => 2,
            _ => 1,
        }
    }

    /// Whether `conclusion` follows from `premises` by one application.
    /// `Given` never checks here; membership is the caller's business.
    pub fn check(self, premises: &[CanonAtom], conclusion: CanonAtom) -> bool {
        use CanonAtom::{Dep, Ind};
        if premises.len() != self.arity() {
            return false;
        }
        match (self, premises, conclusion) {
            (Rule::Reflexivity, [], Ind { left, condition, .. }) => left == condition,
            (Rule::Symmetry, [Ind { left, condition, right }], c) => c == CanonAtom::ind(*right, *condition, *left),
            (
                Rule::Weakening,
                [Ind { left, condition, right }],
                Ind {
                    left: l,
                    condition: c,
                    right: r,
                },
            ) => c == *condition && sub(l, *left) && sub(r, *right),
            (Rule::Permutation, [p], c) => *p == c,
            (Rule::FixedParameter, [Ind { left, condition, right }], c) => {
                c == CanonAtom::ind(right | condition, *condition, left | condition)
            }
            (
                Rule::FirstTransitivity,
                [Ind {
                    left: x,
                    condition: z,
                    right: y,
                }, Ind {
                    left: u,
                    condition: zx,
                    right: y2,
                }],
                c,
            ) => y == y2 && *zx == z | x && c == CanonAtom::ind(*u, *z, *y),
            (
                Rule::SecondTransitivity,
                [Ind {
                    left: y,
                    condition: z,
                    right: y2,
                }, Ind {
                    left: zx,
                    condition: y3,
                    right: u,
                }],
                Ind {
                    left: x,
                    condition: z2,
                    right: u2,
                },
            ) => y == y2 && y == y3 && z2 == *z && u2 == *u && *zx == z | x,
            (Rule::Constancy, [Ind { left, condition, right }], Ind { left: l, condition: c, .. }) => {
                left == right && l == *left && c == *condition
            }
            (
                Rule::DepToInd,
                [Dep {
                    determiner,
                    determined,
                }],
                Ind { left, condition, .. },
            ) => left == *determined && condition == *determiner,
            (Rule::IndToDep, [Ind { left, condition, right }], c) => c == CanonAtom::dep(*condition, left & right),
            (
                Rule::Augmentation,
                [Dep {
                    determiner,
                    determined,
                }],
                Dep {
                    determiner: d,
                    determined: e,
                },
            ) => e == *determined && sub(*determiner, d),
            (Rule::DepReflexivity, [], Dep { determiner, determined }) => determiner == determined,
            (
                Rule::DepTransitivity,
                [Dep {
                    determiner: y,
                    determined: z,
                }, Dep {
                    determiner: z2,
                    determined: x,
                }],
                c,
            ) => z == z2 && c == CanonAtom::dep(*y, *x),
            (
                Rule::Conjunction,
                [Dep {
                    determiner: x,
                    determined: a,
                }, Dep {
                    determiner: x2,
                    determined: b,
                }],
                c,
            ) => x == x2 && c == CanonAtom::dep(*x, a | b),
            (
                Rule::Decomposition,
                [Dep {
                    determiner,
                    determined,
                }],
                Dep {
                    determiner: d,
                    determined: e,
                },
            ) => d == *determiner && sub(e, *determined),
            _ => false,
        }
    }

    /// Every instance of the rule over a universe of `n` variables.
    pub fn instances(self, n: usize) -> Vec<Instance> {
        let mut out = Vec::new();
        let ind = CanonAtom::ind;
        let dep = CanonAtom::dep;
        match self {
            Rule::Given => {}
            Rule::Reflexivity => {
                for x in masks(n) {
                    for y in masks(n) {
                        out.push((vec![], ind(x, x, y)));
                    }
                }
            }
            Rule::DepReflexivity => {
                for x in masks(n) {
                    out.push((vec![], dep(x, x)));
                }
            }
            Rule::Symmetry | Rule::FixedParameter | Rule::Constancy | Rule::IndToDep | Rule::Weakening => {
                for l in masks(n) {
                    for c in masks(n) {
                        for r in masks(n) {
                            let p = ind(l, c, r);
                            match self {
                                Rule::Symmetry => out.push((vec![p], ind(r, c, l))),
                                Rule::FixedParameter => out.push((vec![p], ind(r | c, c, l | c))),
                                Rule::IndToDep => out.push((vec![p], dep(c, l & r))),
                                Rule::Constancy if l == r => {
                                    for z in masks(n) {
                                        out.push((vec![p], ind(l, c, z)));
                                    }
                                }
                                Rule::Weakening => {
                                    for l2 in submasks(l) {
                                        for r2 in submasks(r) {
                                            out.push((vec![p], ind(l2, c, r2)));
                                        }
                                    }
                                }
                                _ => {}
                            }
                        }
                    }
                }
            }
            Rule::Permutation => {
                for a in masks(n) {
                    for b in masks(n) {
                        out.push((vec![dep(a, b)], dep(a, b)));
                        for c in masks(n) {
                            out.push((vec![ind(a, b, c)], ind(a, b, c)));
                        }
                    }
                }
            }
            Rule::FirstTransitivity => {
                for x in masks(n) {
                    for z in masks(n) {
                        for y in masks(n) {
                            for u in masks(n) {
                                out.push((vec![ind(x, z, y), ind(u, z | x, y)], ind(u, z, y)));
                            }
                        }
                    }
                }
            }
            Rule::SecondTransitivity => {
                for y in masks(n) {
                    for z in masks(n) {
                        for x in masks(n) {
                            for u in masks(n) {
                                out.push((vec![ind(y, z, y), ind(z | x, y, u)], ind(x, z, u)));
                            }
                        }
                    }
                }
            }
            Rule::DepToInd => {
                for x in masks(n) {
                    for y in masks(n) {
                        for z in masks(n) {
                            out.push((vec![dep(x, y)], ind(y, x, z)));
                        }
                    }
                }
            }
            Rule::Augmentation | Rule::Decomposition => {
                for a in masks(n) {
                    for b in masks(n) {
                        if self == Rule::Augmentation {
                            // b is the determined tuple; grow the determiner a
                            let rest = ((1u32 << n) - 1) & !a;
                            for w in submasks(rest) {
                                out.push((vec![dep(a, b)], dep(a | w, b)));
                            }
                        } else {
                            for b2 in submasks(b) {
                                out.push((vec![dep(a, b)], dep(a, b2)));
                            }
                        }
                    }
                }
            }
            Rule::DepTransitivity | Rule::Conjunction => {
                for a in masks(n) {
                    for b in masks(n) {
                        for c in masks(n) {
                            if self == Rule::DepTransitivity {
                                out.push((vec![dep(a, b), dep(b, c)], dep(a, c)));
                            } else {
                                out.push((vec![dep(a, b), dep(a, c)], dep(a, b | c)));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_check() {
        for rule in Rule::ALL {
            for (p, c) in rule.instances(2) {
                assert!(rule.check(&p, c), "{rule} {p:?} {c:?}");
            }
        }
    }

    #[test]
    fn instance_counts() {
        assert_eq!(Rule::Reflexivity.instances(4).len(), 256);
        assert_eq!(Rule::FirstTransitivity.instances(4).len(), 65536);
        // Σ_l Σ_r 2^|l| 2^|r| over 16 conditions
        assert_eq!(Rule::Weakening.instances(4).len(), 16 * 81 * 81);
    }

    #[test]
    fn rejects_wrong_shapes() {
        let p = CanonAtom::ind(1, 0, 2);
        assert!(!Rule::Symmetry.check(&[p], CanonAtom::ind(1, 0, 2)));
        assert!(Rule::Symmetry.check(&[p], CanonAtom::ind(2, 0, 1)));
        assert!(!Rule::Constancy.check(&[p], CanonAtom::ind(1, 0, 4)));
        assert!(!Rule::Given.check(&[], p));
        assert!(!Rule::Weakening.check(&[p, p], p));
    }

    #[test]
    fn names_parse() {
        for r in Rule::ALL {
            assert_eq!(r.name().parse::<Rule>().unwrap(), r);
        }
    }
}
