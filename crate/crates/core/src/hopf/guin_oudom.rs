//! The Guin–Oudom extension of a pre-Lie product on planted trees to `S(P)`.
//!
//! `1 • w = w`, `u • 1 = ε(u)`, `w • (uv) = Σ (w₁ • u)(w₂ • v)`,
//! `(x w) • y = x ↷ (w • y) − (x ↷ w) • y`, and `w ★ v = Σ (w₁ • v) w₂`.

use alloc::collections::BTreeMap;
use core::cell::RefCell;

use num_traits::One;

use crate::error::{Error, Result};
use crate::ops::PreLie;
use crate::tree::{Forest, Planted};
use crate::vect::{Q, Vect};

use super::coproduct::deshuffle_forest;

pub struct GuinOudom<P: PreLie> {
    p: P,
    bullet_memo: RefCell<BTreeMap<(Forest, Forest), Vect<Forest>>>,
    star_memo: RefCell<BTreeMap<(Forest, Forest), Vect<Forest>>>,
}

impl<P: PreLie> GuinOudom<P> {
    pub fn new(p: P) -> Self {
        GuinOudom { p, bullet_memo: RefCell::new(BTreeMap::new()), star_memo: RefCell::new(BTreeMap::new()) }
    }

    pub fn prelie(&self) -> &P {
        &self.p
    }

    pub fn clear_cache(&self) {
        self.bullet_memo.borrow_mut().clear();
        self.star_memo.borrow_mut().clear();
    }

    fn check(f: &Forest) -> Result<()> {
        if f.is_planted_only() {
            Ok(())
        } else {
            Err(Error::Invalid("Guin–Oudom products act on forests without polynomial part".into()))
        }
    }

    /// `x ↷ f`, extended to forests as a derivation.
    pub fn graft_into(&self, x: &Planted, f: &Forest) -> Result<Vect<Forest>> {
        let mut out = Vect::zero();
        for (j, y) in f.planted().iter().enumerate() {
            for (z, c) in self.p.product(x, y)? {
                out.add_term(f.replace(j, z), c);
            }
        }
        Ok(out)
    }

    pub fn bullet(&self, w: &Forest, v: &Forest) -> Result<Vect<Forest>> {
        Self::check(w)?;
        Self::check(v)?;
        if w.is_unit() {
            return Ok(Vect::basis(v.clone()));
        }
        if v.is_unit() {
            return Ok(Vect::zero());
        }
        let key = (w.clone(), v.clone());
        if let Some(r) = self.bullet_memo.borrow().get(&key) {
            return Ok(r.clone());
        }
        let out = if v.len() >= 2 {
            let y = Forest::single(v.planted()[0].clone());
            let rest = v.without(0);
            let mut out = Vect::zero();
            for ((w1, w2), c) in deshuffle_forest(w) {
                let a = self.bullet(&w1, &y)?;
                if a.is_zero() {
                    continue;
                }
                let b = self.bullet(&w2, &rest)?;
                out.add_scaled(&super::forest_mul(&a, &b), &c);
            }
            out
        } else {
            let x = &w.planted()[0];
            let rest = w.without(0);
            let mut out = Vect::zero();
            for (f, c) in self.bullet(&rest, v)? {
                out.add_scaled(&self.graft_into(x, &f)?, &c);
            }
            for (f, c) in self.graft_into(x, &rest)? {
                out.add_scaled(&self.bullet(&f, v)?, &-c);
            }
            out
        };
        self.bullet_memo.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    pub fn star(&self, w: &Forest, v: &Forest) -> Result<Vect<Forest>> {
        Self::check(w)?;
        Self::check(v)?;
        if w.is_unit() {
            return Ok(Vect::basis(v.clone()));
        }
        if v.is_unit() {
            return Ok(Vect::basis(w.clone()));
        }
        let key = (w.clone(), v.clone());
        if let Some(r) = self.star_memo.borrow().get(&key) {
            return Ok(r.clone());
        }
        let mut out = Vect::zero();
        for ((w1, w2), c) in deshuffle_forest(w) {
            for (f, d) in self.bullet(&w1, v)? {
                out.add_term(f.mul(&w2), &c * d);
            }
        }
        self.star_memo.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    pub fn bullet_vect(&self, w: &Vect<Forest>, v: &Vect<Forest>) -> Result<Vect<Forest>> {
        w.bilinear(v, |a, b| self.bullet(a, b))
    }

    pub fn star_vect(&self, w: &Vect<Forest>, v: &Vect<Forest>) -> Result<Vect<Forest>> {
        w.bilinear(v, |a, b| self.star(a, b))
    }

    /// `x ↷ y` for single planted trees, as forests.
    pub fn prelie_forest(&self, x: &Planted, y: &Planted) -> Result<Vect<Forest>> {
        Ok(self.p.product(x, y)?.map_basis(|p| Forest::single(p.clone())))
    }

    pub fn unit(&self) -> Vect<Forest> {
        Vect::term(Forest::unit(self.p.workspace().dim), Q::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use crate::enumerate::Enumerator;
    use crate::ops::{planted_product, Grafting, PreLieProduct};
    use crate::parse::{parse_forest, parse_planted};
    use crate::vect::q;
    use crate::workspace::Workspace;

    fn ws() -> Workspace {
        Workspace::new(2).with_caps(2, 2).with_max_edges(4)
    }

    fn f(s: &str) -> Forest {
        parse_forest(s, &ws()).unwrap()
    }

    #[test]
    fn star_of_letters_is_product_plus_graft() {
        for g in [Grafting::Plain, Grafting::Deformed] {
            let go = GuinOudom::new(PreLieProduct { grafting: g, ws: ws() });
            let (x, y) = ("I[(1,1)](N[(0,0)])", "I[(2,0)](N[(0,1)])");
            let mut expect = Vect::basis(f(x).mul(&f(y)));
            let graft = planted_product(&ws(), g, &parse_planted(x, &ws()).unwrap(), &parse_planted(y, &ws()).unwrap()).unwrap();
            for (p, c) in graft {
                expect.add_term(Forest::single(p), c);
            }
            assert_eq!(go.star(&f(x), &f(y)).unwrap(), expect);
            if g == Grafting::Deformed {
                assert_eq!(expect.len(), 3);
            }
        }
    }

    #[test]
    fn unit_and_counit() {
        let go = GuinOudom::new(PreLieProduct::plain(&ws()));
        let w = f("I[(1,0)](N[(0,0)])·I[(0,1)](N[(1,0)])");
        let one = Forest::unit(2);
        assert_eq!(go.star(&one, &w).unwrap(), Vect::basis(w.clone()));
        assert_eq!(go.star(&w, &one).unwrap(), Vect::basis(w.clone()));
        assert!(go.bullet(&w, &one).unwrap().is_zero());
        assert_eq!(go.bullet(&one, &one).unwrap(), Vect::basis(one.clone()));
        assert!(go.star(&f("X^(1,0)"), &w).is_err());
    }

    #[test]
    fn star_is_associative() {
        let small = Workspace::new(2).with_caps(1, 1);
        let mut en = Enumerator::new(small.bounds());
        let pool: Vec<Forest> = (1..=2).flat_map(|e| en.forests(e)).step_by(7).collect();
        let single: Vec<Forest> = en.forests(1);
        let go = GuinOudom::new(PreLieProduct::deformed(&ws()));
        for a in &single {
            for b in &single {
                for c in &pool {
                    let l = go.star_vect(&go.star(a, b).unwrap(), &Vect::basis(c.clone())).unwrap();
                    let r = go.star_vect(&Vect::basis(a.clone()), &go.star(b, c).unwrap()).unwrap();
                    assert_eq!(l, r, "{a} {b} {c}");
                }
            }
        }
        assert!(pool.len() > 20);
    }

    #[test]
    fn cold_and_warm_caches_agree() {
        let go = GuinOudom::new(PreLieProduct::plain(&ws()));
        let (a, b) = (f("I[(1,0)](N[(0,0)])·I[(0,1)](N[(0,0)])"), f("I[(1,0)](N[(0,0)]{(0,1):N[(0,0)]})"));
        let warm_up = go.star(&b, &a).unwrap();
        let warm = go.star(&a, &b).unwrap();
        go.clear_cache();
        let cold = go.star(&a, &b).unwrap();
        assert_eq!(warm, cold);
        assert_eq!(go.star(&b, &a).unwrap(), warm_up);
        assert_eq!(cold.coeff(&a.mul(&b)), q(1));
    }
}
