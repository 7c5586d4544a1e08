//! Empirical Hölder constants of a family of characters.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Display;

use num_traits::{Float, ToPrimitive};

use crate::tree::Tree;
use crate::vect::Q;
use crate::word::Word;

use super::character::Character;

#[derive(Clone, Debug, PartialEq)]
pub struct HolderRow {
    pub basis: String,
    pub exponent: f64,
    /// `sup |⟨X_st, b⟩| / |t−s|^exponent` over the samples.
    pub sup_ratio: f64,
}

const TINY: f64 = 1e-12;

/// One row per basis element of the first sample, with the exponent given by
/// `exponent`. Samples with `s = t` are skipped.
pub fn holder_report<B: Ord + Clone + Display>(
    samples: &[(Q, Q, Character<B>)],
    exponent: impl Fn(&B) -> f64,
) -> Vec<HolderRow> {
    let mut sup: BTreeMap<B, f64> = BTreeMap::new();
    for (s, t, x) in samples {
        let h = (t - s).to_f64().unwrap_or(f64::NAN).abs();
        if h == 0.0 {
            continue;
        }
        for (b, _, v) in x.iter() {
            let v = v.to_f64().unwrap_or(f64::NAN).abs();
            let v = if v < TINY { 0.0 } else { v };
            let r = v / Float::powf(h, exponent(b));
            let e = sup.entry(b.clone()).or_insert(0.0);
            if r > *e {
                *e = r;
            }
        }
    }
    sup.into_iter()
        .map(|(b, r)| HolderRow { exponent: exponent(&b), basis: alloc::format!("{b}"), sup_ratio: if r < TINY { 0.0 } else { r } })
        .collect()
}

/// `γ|τ|`, or `(1−γ)|τ|₀ + γ|τ|` when `time` names the label counted by `|τ|₀`.
pub fn tree_exponent(gamma: f64, time: Option<usize>) -> impl Fn(&Tree) -> f64 {
    move |t: &Tree| {
        let mut n0 = 0usize;
        count_label(t, time, &mut n0);
        (1.0 - gamma) * n0 as f64 + gamma * t.nodes() as f64
    }
}

fn count_label(t: &Tree, time: Option<usize>, n0: &mut usize) {
    if let Some(i) = time {
        if t.dec().get(i) > 0 {
            *n0 += 1;
        }
    }
    for c in t.children() {
        count_label(&c.body, time, n0);
    }
}

/// `γ̂ ω(v) = Σ γ_a` over the letters of `v`.
pub fn word_exponent<L>(letter: impl Fn(&L) -> f64) -> impl Fn(&Word<L>) -> f64 {
    move |w: &Word<L>| w.0.iter().map(&letter).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{bplus, dot};
    use crate::model::path::{canonical_lift, PathSpec};
    use crate::vect::qf;

    #[test]
    fn time_lift_has_exact_ratios() {
        let p = PathSpec::parse("t").unwrap();
        let pairs = [(qf(0, 1), qf(1, 2)), (qf(1, 3), qf(1, 3)), (qf(1, 5), qf(9, 10)), (qf(3, 4), qf(1, 4))];
        let samples: Vec<_> = pairs.iter().map(|(s, t)| (s.clone(), t.clone(), canonical_lift(&p, s, t, 2).unwrap())).collect();
        let rows = holder_report(&samples, tree_exponent(1.0, None));
        let find = |t: &Tree| rows.iter().find(|r| r.basis == alloc::format!("{t}")).unwrap().sup_ratio;
        assert!((find(&dot(1, 0)) - 1.0).abs() < 1e-12);
        assert!((find(&bplus(1, 0, &[dot(1, 0)])) - 0.5).abs() < 1e-12);
        assert!(holder_report::<Tree>(&[], tree_exponent(0.5, None)).is_empty());
    }

    #[test]
    fn time_label_exponent() {
        let t = bplus(2, 0, &[dot(2, 1)]);
        assert!((tree_exponent(0.25, Some(0))(&t) - (0.75 + 0.5)).abs() < 1e-12);
        assert!((tree_exponent(0.25, None)(&t) - 0.5).abs() < 1e-12);
    }
}
