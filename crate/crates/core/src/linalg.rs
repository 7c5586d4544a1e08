//! Sparse exact row reduction, the symmetry-factor pairing and span solving.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::tree::Forest;
use crate::vect::{qi, Q, Vect};

/// `⟨u, v⟩ = Σ_f u_f v_f S(f)`.
pub fn pairing(u: &Vect<Forest>, v: &Vect<Forest>) -> Q {
    let (small, big) = if u.len() <= v.len() { (u, v) } else { (v, u) };
    let mut acc = Q::zero();
    for (f, c) in small.iter() {
        if let Some(d) = big.get(f) {
            acc += c * d * qi(f.symmetry_factor());
        }
    }
    acc
}

/// Pairing on tensor squares, `⟨a⊗b, c⊗d⟩ = ⟨a,c⟩⟨b,d⟩`.
pub fn pairing2(u: &Vect<(Forest, Forest)>, v: &Vect<(Forest, Forest)>) -> Q {
    let mut acc = Q::zero();
    for (k, c) in u.iter() {
        if let Some(d) = v.get(k) {
            acc += c * d * qi(k.0.symmetry_factor() * k.1.symmetry_factor());
        }
    }
    acc
}

/// Incrementally built row-echelon basis of a subspace.
///
/// Every stored row has a distinct pivot (its largest key, coefficient 1) and
/// remembers how it is combined from the tagged generators that were inserted.
#[derive(Clone)]
pub struct Echelon<B: Ord + Clone, T: Ord + Clone> {
    rows: BTreeMap<B, (Vect<B>, Vect<T>)>,
}

impl<B: Ord + Clone, T: Ord + Clone> Default for Echelon<B, T> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<B: Ord + Clone, T: Ord + Clone> Echelon<B, T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &B> {
        self.rows.keys()
    }

    /// Returns `(r, c)` with `v = r + Σ_t c_t g_t` and no key of `r` a pivot.
    pub fn reduce(&self, v: &Vect<B>) -> (Vect<B>, Vect<T>) {
        let mut rem = v.clone();
        let mut comb = Vect::zero();
        let mut bound: Option<B> = None;
        loop {
            let next = rem
                .keys()
                .rev()
                .filter(|k| bound.as_ref().is_none_or(|b| *k < b))
                .find(|k| self.rows.contains_key(*k))
                .cloned();
            let Some(k) = next else { break };
            let c = rem.coeff(&k);
            let (row, rc) = &self.rows[&k];
            rem.add_scaled(row, &-c.clone());
            comb.add_scaled(rc, &c);
            bound = Some(k);
        }
        (rem, comb)
    }

    /// Insert a generator; returns `false` (and stores nothing) if it is dependent.
    pub fn insert(&mut self, v: &Vect<B>, tag: T) -> bool {
        let (rem, comb) = self.reduce(v);
        let Some((pivot, lead)) = rem.last().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Q::one() / lead;
        let mut rc = Vect::basis(tag);
        rc -= &comb;
        self.rows.insert(pivot, (rem.scaled(&inv), rc.scaled(&inv)));
        true
    }

    /// Coordinates of `v` over the inserted generators, if `v` is in their span.
    pub fn solve(&self, v: &Vect<B>) -> Option<Vect<T>> {
        let (rem, comb) = self.reduce(v);
        rem.is_zero().then_some(comb)
    }

    pub fn contains(&self, v: &Vect<B>) -> bool {
        self.reduce(v).0.is_zero()
    }
}

/// Rank of a family of vectors.
pub fn rank<B: Ord + Clone>(vs: &[Vect<B>]) -> usize {
    let mut e: Echelon<B, usize> = Echelon::new();
    for (i, v) in vs.iter().enumerate() {
        e.insert(v, i);
    }
    e.rank()
}

/// Exact coordinates of `target` in the span of `generators`.
///
/// All inputs must be homogeneous of one grade as measured by `grade`. When the
/// generators are dependent the returned coordinates use an independent subfamily.
pub fn solve_in_span<B: Ord + Clone>(
    target: &Vect<B>,
    generators: &[Vect<B>],
    grade: impl Fn(&B) -> usize,
) -> Result<Option<Vec<Q>>> {
    let mut g = None;
    for v in core::iter::once(target).chain(generators.iter()) {
        for b in v.keys() {
            let gb = grade(b);
            match g {
                None => g = Some(gb),
                Some(x) if x != gb => return Err(Error::MixedGrade),
                _ => {}
            }
        }
    }
    let mut e: Echelon<B, usize> = Echelon::new();
    for (i, v) in generators.iter().enumerate() {
        e.insert(v, i);
    }
    Ok(e.solve(target).map(|c| (0..generators.len()).map(|i| c.coeff(&i)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vect::q;

    fn v(terms: &[(u32, i64)]) -> Vect<u32> {
        terms.iter().map(|&(b, c)| (b, q(c))).collect()
    }

    #[test]
    fn echelon_solves() {
        let gens = [v(&[(1, 1), (2, 1)]), v(&[(2, 1), (3, 1)]), v(&[(1, 1), (3, -1)])];
        assert_eq!(rank(&gens), 2);
        let t = v(&[(1, 2), (2, 3), (3, 1)]);
        let c = solve_in_span(&t, &gens[..2], |_| 0).unwrap().unwrap();
        assert_eq!(c, [q(2), q(1)]);
        assert!(solve_in_span(&v(&[(4, 1)]), &gens, |_| 0).unwrap().is_none());
    }

    #[test]
    fn mixed_grades_rejected() {
        let r = solve_in_span(&v(&[(1, 1)]), &[v(&[(12, 1)])], |b| (*b / 10) as usize);
        assert_eq!(r, Err(Error::MixedGrade));
    }
}

#[cfg(test)]
mod pairing_tests {
    use super::*;
    use crate::enumerate::Enumerator;
    use crate::parse::parse_forest;
    use crate::vect::q;
    use crate::workspace::Workspace;

    #[test]
    fn pairing_examples() {
        let ws = Workspace::new(2).with_caps(1, 1);
        let b = |s: &str| Vect::basis(parse_forest(s, &ws).unwrap());
        assert_eq!(pairing(&b("1"), &b("1")), q(1));
        let cherry = b("I[(0,0)](N[(0,0)]{(1,0):N[(0,0)],(1,0):N[(0,0)]})");
        assert_eq!(pairing(&cherry, &cherry), q(2));
        assert_eq!(pairing(&b("1"), &b("I[(1,0)](N[(0,0)])")), q(0));
    }

    #[test]
    fn gram_matrix_is_positive_diagonal() {
        let mut en = Enumerator::new(Workspace::new(2).with_caps(1, 1).bounds());
        for e in 1..=2 {
            let fs = en.forests(e);
            for (i, x) in fs.iter().enumerate() {
                for (j, y) in fs.iter().enumerate().step_by(5) {
                    let p = pairing(&Vect::basis(x.clone()), &Vect::basis(y.clone()));
                    assert_eq!(p > q(0), i == j);
                    assert_eq!(p, pairing(&Vect::basis(y.clone()), &Vect::basis(x.clone())));
                }
            }
        }
    }

    #[test]
    fn round_trip_through_a_span() {
        let mut en = Enumerator::new(Workspace::new(2).with_caps(1, 1).bounds());
        let fs = en.forests(3);
        let gens: Vec<Vect<Forest>> = (0..5)
            .map(|i| (0..3).map(|j| (fs[(i * 37 + j * 101) % fs.len()].clone(), q(1 + i as i64 * j as i64))).collect())
            .collect();
        assert_eq!(rank(&gens), 5);
        let coords = [q(3), q(-1), Q::new(2.into(), 7.into()), q(0), q(5)];
        let mut target = Vect::zero();
        for (g, c) in gens.iter().zip(&coords) {
            target.add_scaled(g, c);
        }
        let got = solve_in_span(&target, &gens, Forest::edges).unwrap().unwrap();
        assert_eq!(got, coords);
        assert_eq!(solve_in_span(&gens[0], &gens, Forest::edges).unwrap().unwrap()[0], q(1));
    }
}
