//! The deformation isomorphism `Θ` on planted trees and its multiplicative
//! extension `Φ` to forests.

use alloc::collections::BTreeMap;
use core::cell::RefCell;

use num_traits::One;

use crate::error::{Error, Result};
use crate::hopf::GuinOudom;
use crate::multiindex::MultiIndex;
use crate::ops::PreLieProduct;
use crate::tree::{Forest, Planted, Tree};
use crate::vect::{Q, Vect};
use crate::workspace::Workspace;

pub struct Theta {
    go: GuinOudom<PreLieProduct>,
    fwd: RefCell<BTreeMap<Planted, Vect<Planted>>>,
    inv: RefCell<BTreeMap<Planted, Vect<Planted>>>,
}

fn forest_product(parts: &[Vect<Planted>], dim: usize) -> Vect<Forest> {
    let mut acc = Vect::basis(Forest::unit(dim));
    for p in parts {
        let mut next = Vect::zero();
        for (f, c) in acc.iter() {
            for (q, d) in p.iter() {
                next.add_term(f.mul(&Forest::single(q.clone())), c * d);
            }
        }
        acc = next;
    }
    acc
}

impl Theta {
    pub fn new(ws: &Workspace) -> Self {
        Theta {
            go: GuinOudom::new(PreLieProduct::deformed(ws)),
            fwd: RefCell::new(BTreeMap::new()),
            inv: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn workspace(&self) -> &Workspace {
        &self.go.prelie().ws
    }

    /// `Θ(I_a(X^k ∏ c_i)) = (∏ Θ(c_i)) •̃ I_a(X^k)`.
    pub fn theta(&self, p: &Planted) -> Result<Vect<Planted>> {
        if let Some(r) = self.fwd.borrow().get(p) {
            return Ok(r.clone());
        }
        let dim = p.body.dim();
        let root = Forest::single(Planted::new(p.edge.clone(), Tree::leaf(p.body.dec().clone())));
        let out = if p.body.children().is_empty() {
            Vect::basis(p.clone())
        } else {
            let mut parts = alloc::vec::Vec::new();
            for c in p.body.children() {
                parts.push(self.theta(c)?);
            }
            let w = forest_product(&parts, dim);
            let mut out = Vect::zero();
            for (f, c) in self.go.bullet_vect(&w, &Vect::basis(root))? {
                out.add_term(f.planted()[0].clone(), c);
            }
            out
        };
        self.fwd.borrow_mut().insert(p.clone(), out.clone());
        Ok(out)
    }

    /// Inverse of `Θ`, using that `Θ(p) − p` only involves trees of lower weighted grade.
    pub fn theta_inv(&self, p: &Planted) -> Result<Vect<Planted>> {
        if let Some(r) = self.inv.borrow().get(p) {
            return Ok(r.clone());
        }
        let image = self.theta(p)?;
        if image.coeff(p) != Q::one() {
            return Err(Error::Invalid("Θ is not unitriangular on this tree".into()));
        }
        let ones = MultiIndex::from_slice(&alloc::vec![1; p.body.dim()]);
        let top = p.weighted_grade(&ones);
        let mut out = Vect::basis(p.clone());
        for (q, c) in image.iter() {
            if q == p {
                continue;
            }
            if q.weighted_grade(&ones) >= top {
                return Err(Error::Invalid("Θ is not unitriangular on this tree".into()));
            }
            out.add_scaled(&self.theta_inv(q)?, &-c.clone());
        }
        self.inv.borrow_mut().insert(p.clone(), out.clone());
        Ok(out)
    }

    pub fn theta_vect(&self, x: &Vect<Planted>) -> Result<Vect<Planted>> {
        x.map_linear(|p| self.theta(p))
    }

    pub fn theta_inv_vect(&self, x: &Vect<Planted>) -> Result<Vect<Planted>> {
        x.map_linear(|p| self.theta_inv(p))
    }

    fn on_forest(&self, f: &Forest, inverse: bool) -> Result<Vect<Forest>> {
        if !f.is_planted_only() {
            return Err(Error::Invalid("Φ acts on forests without polynomial part".into()));
        }
        let mut parts = alloc::vec::Vec::new();
        for p in f.planted() {
            parts.push(if inverse { self.theta_inv(p)? } else { self.theta(p)? });
        }
        Ok(forest_product(&parts, f.dim()))
    }

    /// `Φ`, the multiplicative extension of `Θ`.
    pub fn phi(&self, f: &Vect<Forest>) -> Result<Vect<Forest>> {
        f.map_linear(|x| self.on_forest(x, false))
    }

    pub fn phi_inv(&self, f: &Vect<Forest>) -> Result<Vect<Forest>> {
        f.map_linear(|x| self.on_forest(x, true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::Enumerator;
    use crate::parse::parse_planted;
    use crate::vect::qi;

    fn ws() -> Workspace {
        Workspace::new(2).with_caps(2, 2)
    }

    #[test]
    fn fixes_single_edges() {
        let th = Theta::new(&ws());
        let p = parse_planted("I[(1,0)](N[(2,0)])", &ws()).unwrap();
        assert_eq!(th.theta(&p).unwrap(), Vect::basis(p));
    }

    #[test]
    fn one_graft_expansion() {
        let w = ws();
        let th = Theta::new(&w);
        let (a, k, b, m) = ([0u16, 1], [2u16, 1], [2u16, 1], [1u16, 0]);
        let p = parse_planted("I[(0,1)](N[(2,1)]{(2,1):N[(1,0)]})", &w).unwrap();
        let mut expect = Vect::zero();
        let kk = MultiIndex::from_slice(&k);
        for l in kk.below() {
            let lo = MultiIndex::from_slice(&b).checked_sub(&l).unwrap();
            let t = Tree::new(
                kk.checked_sub(&l).unwrap(),
                alloc::vec![Planted::new(crate::EdgeLabel::plain(lo), Tree::leaf(MultiIndex::from_slice(&m)))],
            );
            expect.add_term(Planted::new(crate::EdgeLabel::plain(MultiIndex::from_slice(&a)), t), qi(kk.binomial(&l)));
        }
        assert_eq!(th.theta(&p).unwrap(), expect);
    }

    #[test]
    fn inverse_round_trip_and_morphism() {
        let w = Workspace::new(2).with_caps(1, 1);
        let th = Theta::new(&w);
        let plain = GuinOudom::new(PreLieProduct::plain(&w));
        let deformed = GuinOudom::new(PreLieProduct::deformed(&w));
        let mut en = Enumerator::new(w.bounds());
        for g in 1..=3 {
            for p in en.planted(g).to_vec() {
                let back = th.theta_vect(&th.theta_inv(&p).unwrap()).unwrap();
                assert_eq!(back, Vect::basis(p.clone()));
            }
        }
        let mut small = en.planted(1).to_vec();
        small.extend(en.planted(2).iter().take(20).cloned());
        for x in &small {
            for y in &small {
                let lhs = th.theta_vect(&crate::ops::PreLie::product(plain.prelie(), x, y).unwrap()).unwrap();
                let rhs = crate::ops::prelie_vect(deformed.prelie(), &th.theta(x).unwrap(), &th.theta(y).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{x} {y}");
            }
        }
    }
}
