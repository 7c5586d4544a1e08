//! Grade-truncated characters on classical trees and on words.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Display;

use num_traits::{One, Zero};

use crate::classical::ClassicalForest;
use crate::error::{Error, Result};
use crate::hopf::delta_bck_hat;
use crate::tree::Tree;
use crate::vect::Q;
use crate::word::{deconcat, shuffle, Word};

/// A linear functional given on a graded basis up to grade `N`; its value on
/// the unit is 1. Tree characters are extended multiplicatively to forests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character<B: Ord> {
    grade: usize,
    values: BTreeMap<B, (usize, Q)>,
}

impl<B: Ord + Clone + Display> Character<B> {
    pub fn empty(grade: usize) -> Self {
        Character { grade, values: BTreeMap::new() }
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    /// Records `⟨X, b⟩ = v` for a basis element of grade `g`.
    pub fn insert(&mut self, b: B, g: usize, v: Q) {
        self.values.insert(b, (g, v));
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, usize, &Q)> {
        self.values.iter().map(|(b, (g, v))| (b, *g, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, b: &B) -> Q {
        self.values.get(b).map(|e| e.1.clone()).unwrap_or_else(Q::zero)
    }

    pub fn grade_of(&self, b: &B) -> Option<usize> {
        self.values.get(b).map(|e| e.0)
    }

    fn lookup(&self, b: &B) -> Result<Q> {
        self.values.get(b).map(|e| e.1.clone()).ok_or_else(|| Error::Invalid(format!("no value for {b}")))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.grade != other.grade {
            return Err(Error::Invalid("characters with different truncation".into()));
        }
        Ok(())
    }

    /// Basis elements on which `self` and `other` differ, with their grade and both values.
    pub fn differences(&self, other: &Self) -> Vec<(B, usize, Q, Q)> {
        let mut keys: Vec<(&B, usize)> = self.iter().chain(other.iter()).map(|(b, g, _)| (b, g)).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter_map(|(b, g)| {
                let (x, y) = (self.value(b), other.value(b));
                (x != y).then(|| (b.clone(), g, x, y))
            })
            .collect()
    }

    fn map_values(&self, mut f: impl FnMut(&B) -> Result<Q>) -> Result<Self> {
        let mut out = Character::empty(self.grade);
        for (b, g, _) in self.iter() {
            out.insert(b.clone(), g, f(b)?);
        }
        Ok(out)
    }
}

impl Character<Tree> {
    /// `⟨X, τ_1⋯τ_k⟩ = ∏ ⟨X, τ_j⟩`.
    pub fn forest_value(&self, f: &ClassicalForest) -> Result<Q> {
        let mut acc = Q::one();
        for t in f.trees() {
            acc *= self.lookup(t)?;
        }
        Ok(acc)
    }

    /// The counit on the given trees.
    pub fn counit(grade: usize, domain: &[Tree]) -> Self {
        let mut x = Character::empty(grade);
        for t in domain {
            x.insert(t.clone(), t.nodes(), Q::zero());
        }
        x
    }

    /// `X ★₀ Y = (X ⊗ Y) Δ̂`, trunk paired with `X`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        self.map_values(|t| {
            let mut acc = Q::zero();
            for ((trunk, pruned), c) in delta_bck_hat(&ClassicalForest::single(t.clone()))?.iter() {
                acc += c * self.forest_value(trunk)? * other.forest_value(pruned)?;
            }
            Ok(acc)
        })
    }
}

impl<L: Ord + Clone + Display> Character<Word<L>> {
    pub fn word_value(&self, w: &Word<L>) -> Result<Q> {
        if w.is_empty() {
            return Ok(Q::one());
        }
        self.lookup(w)
    }

    /// `⟨X ⊗ Y, Δ w⟩` with deconcatenation.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        self.map_values(|w| {
            let mut acc = Q::zero();
            for ((u, v), c) in deconcat(w).iter() {
                acc += c * self.word_value(u)? * other.word_value(v)?;
            }
            Ok(acc)
        })
    }

    /// Pairs `(u, v)` with `⟨X, u ⧢ v⟩ ≠ ⟨X,u⟩⟨X,v⟩` within the truncation.
    pub fn shuffle_defects(&self) -> Result<Vec<(Word<L>, Word<L>)>> {
        let words: Vec<(&Word<L>, usize)> = self.iter().map(|(w, g, _)| (w, g)).collect();
        let mut out = Vec::new();
        for (u, gu) in &words {
            for (v, gv) in &words {
                if gu + gv > self.grade {
                    continue;
                }
                let mut lhs = Q::zero();
                for (w, c) in shuffle(u, v).iter() {
                    lhs += c * self.word_value(w)?;
                }
                if lhs != self.word_value(u)? * self.word_value(v)? {
                    out.push(((*u).clone(), (*v).clone()));
                }
            }
        }
        Ok(out)
    }
}

/// One failed instance of `X_su ★ X_ut = X_st`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub basis: String,
    pub grade: usize,
    pub expected: Q,
    pub found: Q,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChenReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl ChenReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: ChenReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }

    /// Grades at which some violation occurred.
    pub fn violated_grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.violations.iter().map(|v| v.grade).collect();
        g.sort_unstable();
        g.dedup();
        g
    }
}

fn report<B: Ord + Clone + Display>(prod: &Character<B>, x_st: &Character<B>) -> ChenReport {
    let violations = prod
        .differences(x_st)
        .into_iter()
        .map(|(b, grade, found, expected)| Violation { grade, basis: format!("{b}"), expected, found })
        .collect();
    ChenReport { checked: x_st.len(), violations }
}

/// Compares `X_su ★₀ X_ut` with `X_st` on every tree of the truncation.
pub fn chen_check_trees(x_su: &Character<Tree>, x_ut: &Character<Tree>, x_st: &Character<Tree>) -> Result<ChenReport> {
    Ok(report(&x_su.convolve(x_ut)?, x_st))
}

/// Compares `X_su ⊗ X_ut ∘ Δ` with `X_st` on every word of the truncation.
pub fn chen_check_words<L: Ord + Clone + Display>(
    x_su: &Character<Word<L>>,
    x_ut: &Character<Word<L>>,
    x_st: &Character<Word<L>>,
) -> Result<ChenReport> {
    Ok(report(&x_su.convolve(x_ut)?, x_st))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{bplus, dot};
    use crate::model::path::lift_domain;
    use crate::vect::q;

    fn random_character(seed: i64) -> Character<Tree> {
        let dom = lift_domain(2, 3);
        let mut x = Character::empty(3);
        for (k, t) in dom.iter().enumerate() {
            x.insert(t.clone(), t.nodes(), q((k as i64 * 7 + seed) % 11 - 5));
        }
        x
    }

    #[test]
    fn convolution_low_grades() {
        let (x, y) = (random_character(1), random_character(4));
        let z = x.convolve(&y).unwrap();
        for i in 0..2 {
            let d = dot(2, i);
            assert_eq!(z.value(&d), x.value(&d) + y.value(&d));
            for j in 0..2 {
                let t = bplus(2, j, &[dot(2, i)]);
                let dj = dot(2, j);
                assert_eq!(z.value(&t), x.value(&t) + y.value(&t) + x.value(&dj) * y.value(&d));
            }
        }
    }

    #[test]
    fn convolution_unit_and_associativity() {
        let (x, y, w) = (random_character(1), random_character(4), random_character(9));
        let e = Character::counit(3, &lift_domain(2, 3));
        assert_eq!(x.convolve(&e).unwrap(), x);
        assert_eq!(e.convolve(&x).unwrap(), x);
        let l = x.convolve(&y).unwrap().convolve(&w).unwrap();
        let r = x.convolve(&y.convolve(&w).unwrap()).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn chen_faults_are_localised() {
        use crate::model::path::{canonical_lift, PathSpec};
        use crate::vect::qf;
        let p = PathSpec::parse("t ; 1/2 t^2").unwrap();
        let (s, u, t) = (qf(1, 5), qf(1, 2), qf(7, 8));
        let x = |a: &Q, b: &Q| canonical_lift(&p, a, b, 3).unwrap();
        let (su, ut, mut st) = (x(&s, &u), x(&u, &t), x(&s, &t));
        assert!(chen_check_trees(&su, &ut, &st).unwrap().holds());
        let chain = bplus(2, 1, &[dot(2, 0)]);
        st.insert(chain.clone(), 2, st.value(&chain) + q(1));
        let rep = chen_check_trees(&su, &ut, &st).unwrap();
        assert_eq!(rep.violated_grades(), [2]);
        assert_eq!(rep.violations.len(), 1);
        let same = x(&u, &u);
        assert!(chen_check_trees(&same, &same, &same).unwrap().holds());
    }
}
