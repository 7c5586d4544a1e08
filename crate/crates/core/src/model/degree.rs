//! Degree maps and the positive-degree subspace `𝒯₊`.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::multiindex::{EdgeLabel, MultiIndex};
use crate::tree::{Forest, Planted, Tree};
use crate::vect::Q;

/// `α(I_a(τ)) = w(kind a) − |shift a|_𝔰 + α(τ)`, `α(N_k) = |k|_𝔰`, `α(X_i) = 𝔰_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeMap {
    pub scaling: MultiIndex,
    pub weights: Vec<Q>,
}

impl DegreeMap {
    pub fn new(scaling: MultiIndex, weights: Vec<Q>) -> Self {
        DegreeMap { scaling, weights }
    }

    fn poly(&self, k: &MultiIndex) -> Q {
        Q::from_integer(k.weighted(&self.scaling).into())
    }

    pub fn edge(&self, a: &EdgeLabel) -> Q {
        let w = self.weights.get(a.kind.0 as usize).cloned().unwrap_or_else(Q::zero);
        w - self.poly(&a.shift)
    }

    pub fn tree(&self, t: &Tree) -> Q {
        t.children().iter().fold(self.poly(t.dec()), |acc, c| acc + self.planted(c))
    }

    pub fn planted(&self, p: &Planted) -> Q {
        self.edge(&p.edge) + self.tree(&p.body)
    }

    pub fn forest(&self, f: &Forest) -> Q {
        f.planted().iter().fold(self.poly(f.x()), |acc, p| acc + self.planted(p))
    }

    /// Every planted branch has strictly positive degree.
    pub fn in_tplus(&self, f: &Forest) -> bool {
        f.planted().iter().all(|p| self.planted(p) > Q::zero())
    }
}

pub fn degree(f: &Forest, alpha: &DegreeMap) -> Q {
    alpha.forest(f)
}

pub fn tplus_filter(forests: &[Forest], alpha: &DegreeMap) -> Vec<Forest> {
    forests.iter().filter(|f| alpha.in_tplus(f)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::Enumerator;
    use crate::hopf::H2;
    use crate::parse::parse_forest;
    use crate::vect::q;
    use crate::workspace::Workspace;

    fn alpha() -> DegreeMap {
        DegreeMap::new(MultiIndex::from_slice(&[2, 1]), alloc::vec![q(2)])
    }

    #[test]
    fn zero_degree_branch_is_dropped() {
        let ws = Workspace::new(2).with_caps(1, 1);
        let f = parse_forest("I[(1,0)](N[(0,0)])", &ws).unwrap();
        assert_eq!(degree(&f, &alpha()), q(0));
        assert!(tplus_filter(core::slice::from_ref(&f), &alpha()).is_empty());
        let x = parse_forest("X^(1,1)", &ws).unwrap();
        assert_eq!(tplus_filter(core::slice::from_ref(&x), &alpha()), alloc::vec![x]);
    }

    #[test]
    fn tplus_is_closed_under_star2() {
        let ws = Workspace::new(2).with_caps(3, 1).with_total_caps(Some(3), Some(1)).with_max_edges(3);
        let h2 = H2::new(&ws);
        let a = alpha();
        let mut en = Enumerator::new(Workspace::new(2).with_caps(1, 1).with_total_caps(Some(1), Some(1)).bounds());
        let mut pool = Vec::new();
        for e in 0..=2 {
            for f in en.forests(e) {
                for k in MultiIndex::with_total_at_most(2, 2 - e as u32) {
                    pool.push(f.with_x(k));
                }
            }
        }
        let kept = tplus_filter(&pool, &a);
        assert_eq!(tplus_filter(&kept, &a), kept);
        assert!(kept.len() < pool.len());
        let mut tested = 0;
        for x in &kept {
            for y in &kept {
                let g = |f: &Forest| f.edges() + f.x().total() as usize;
                if g(x) + g(y) > 3 {
                    continue;
                }
                for (m, _) in h2.star2(x, y).unwrap_or_else(|e| panic!("{x} ★₂ {y}: {e}")).iter() {
                    assert!(a.in_tplus(m), "{x} ★₂ {y} ∋ {m}");
                }
                tested += 1;
            }
        }
        assert!(tested > 20);
    }
}
