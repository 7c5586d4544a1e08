//! The envelope `U(V₀)` of the post-Lie algebra `(V, [·,·]₀, ▷̂)` and its
//! Guin–Oudom product `★₂`.
//!
//! Elements are written in the PBW basis `∏ I_{a_i}(τ_i) · X^k`, planted letters
//! first, represented by [`Forest`]. `A ★₂ B = Σ A₁ (A₂ ▷ B)` with
//! `x ▷` a derivation, `(xA) ▷ y = x ▷ (A ▷ y) − (x ▷ A) ▷ y` and
//! `A ▷ (yC) = Σ (A₁ ▷ y)(A₂ ▷ C)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

use num_traits::One;

use crate::error::Result;
use crate::hopf::coproduct::deshuffle_forest;
use crate::hopf::guin_oudom::GuinOudom;
use crate::multiindex::{EdgeLabel, MultiIndex};
use crate::ops::{post_product_letters, shift_down, PreLieProduct, VLetter};
use crate::tree::{Forest, Planted, Tree};
use crate::vect::{Q, Vect};
use crate::workspace::Workspace;

pub struct H2 {
    ws: Workspace,
    on_letter: RefCell<BTreeMap<(Forest, VLetter), Vect<VLetter>>>,
    on_monomial: RefCell<BTreeMap<(Forest, Forest), Vect<Forest>>>,
    star_memo: RefCell<BTreeMap<(Forest, Forest), Vect<Forest>>>,
}

pub fn letter_forest(x: &VLetter, dim: usize) -> Forest {
    match x {
        VLetter::X(i) => Forest::poly(MultiIndex::unit(dim, *i as usize)),
        VLetter::P(p) => Forest::single(p.clone()),
    }
}

/// First PBW letter and the remaining monomial.
fn split_first(a: &Forest) -> (VLetter, Forest) {
    if let Some(p) = a.planted().first() {
        (VLetter::P(p.clone()), a.without(0))
    } else {
        let k = a.x();
        let i = (0..k.dim()).find(|&i| k.get(i) > 0).expect("nonunit monomial");
        (VLetter::X(i as u8), a.with_x(k.sub_unit(i).expect("positive entry")))
    }
}

impl H2 {
    pub fn new(ws: &Workspace) -> Self {
        H2 {
            ws: ws.clone(),
            on_letter: RefCell::new(BTreeMap::new()),
            on_monomial: RefCell::new(BTreeMap::new()),
            star_memo: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn workspace(&self) -> &Workspace {
        &self.ws
    }

    /// `x · B` in `U(V₀)`, re-ordered into PBW form using `X_i q = q X_i − I_{a−e_i}(τ)`.
    pub fn left_mul_letter(&self, x: &VLetter, b: &Forest) -> Vect<Forest> {
        match x {
            VLetter::P(p) => Vect::basis(Forest::single(p.clone()).mul(b)),
            VLetter::X(i) => {
                let i = *i as usize;
                let mut out = Vect::basis(b.with_x(b.x().add_unit(i)));
                for (j, q) in b.planted().iter().enumerate() {
                    if let Some(s) = shift_down(q, i) {
                        out.add_term(b.replace(j, s), -Q::one());
                    }
                }
                out
            }
        }
    }

    pub fn letters(a: &Forest) -> Vec<VLetter> {
        let mut v: Vec<VLetter> = a.planted().iter().cloned().map(VLetter::P).collect();
        for i in 0..a.dim() {
            for _ in 0..a.x().get(i) {
                v.push(VLetter::X(i as u8));
            }
        }
        v
    }

    /// Concatenation product of `U(V₀)` in the PBW basis.
    pub fn u_mul(&self, a: &Forest, b: &Forest) -> Vect<Forest> {
        let mut cur = Vect::basis(b.clone());
        for x in Self::letters(a).iter().rev() {
            let mut next = Vect::zero();
            for (f, c) in cur.iter() {
                next.add_scaled(&self.left_mul_letter(x, f), c);
            }
            cur = next;
        }
        cur
    }

    pub fn u_mul_vect(&self, a: &Vect<Forest>, b: &Vect<Forest>) -> Vect<Forest> {
        a.bilinear(b, |x, y| Ok::<_, ()>(self.u_mul(x, y))).unwrap_or_default()
    }

    /// `x ▷ B` for a letter `x`, a derivation over the letters of `B`.
    pub fn letter_on_monomial(&self, x: &VLetter, b: &Forest) -> Result<Vect<Forest>> {
        let mut out = Vect::zero();
        for (j, q) in b.planted().iter().enumerate() {
            for (r, c) in post_product_letters(&self.ws, x, &VLetter::P(q.clone()))? {
                if let VLetter::P(r) = r {
                    out.add_term(b.replace(j, r), c);
                }
            }
        }
        Ok(out)
    }

    /// `A ▷ y`, an element of `V`.
    pub fn monomial_on_letter(&self, a: &Forest, y: &VLetter) -> Result<Vect<VLetter>> {
        if a.is_unit() {
            return Ok(Vect::basis(y.clone()));
        }
        let key = (a.clone(), y.clone());
        if let Some(r) = self.on_letter.borrow().get(&key) {
            return Ok(r.clone());
        }
        let (x, rest) = split_first(a);
        let mut out = Vect::zero();
        for (z, c) in self.monomial_on_letter(&rest, y)? {
            out.add_scaled(&post_product_letters(&self.ws, &x, &z)?, &c);
        }
        for (f, c) in self.letter_on_monomial(&x, &rest)? {
            out.add_scaled(&self.monomial_on_letter(&f, y)?, &-c);
        }
        self.on_letter.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    /// `A ▷ B` on monomials.
    pub fn act(&self, a: &Forest, b: &Forest) -> Result<Vect<Forest>> {
        let dim = self.ws.dim;
        if a.is_unit() {
            return Ok(Vect::basis(b.clone()));
        }
        if b.is_unit() {
            return Ok(Vect::zero());
        }
        let key = (a.clone(), b.clone());
        if let Some(r) = self.on_monomial.borrow().get(&key) {
            return Ok(r.clone());
        }
        let (y, rest) = split_first(b);
        let mut out = Vect::zero();
        for ((a1, a2), c) in deshuffle_forest(a) {
            let left = self.monomial_on_letter(&a1, &y)?;
            if left.is_zero() {
                continue;
            }
            let right = self.act(&a2, &rest)?;
            for (z, d) in left.iter() {
                let zf = letter_forest(z, dim);
                for (f, e) in right.iter() {
                    out.add_scaled(&self.u_mul(&zf, f), &(&c * d * e));
                }
            }
        }
        self.on_monomial.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    pub fn star2(&self, a: &Forest, b: &Forest) -> Result<Vect<Forest>> {
        self.ws.check_edge_count(a.edges() + b.edges())?;
        let key = (a.clone(), b.clone());
        if let Some(r) = self.star_memo.borrow().get(&key) {
            return Ok(r.clone());
        }
        let mut out = Vect::zero();
        for ((a1, a2), c) in deshuffle_forest(a) {
            for (f, d) in self.act(&a2, b)? {
                out.add_scaled(&self.u_mul(&a1, &f), &(&c * d));
            }
        }
        self.star_memo.borrow_mut().insert(key, out.clone());
        Ok(out)
    }

    pub fn star2_vect(&self, a: &Vect<Forest>, b: &Vect<Forest>) -> Result<Vect<Forest>> {
        a.bilinear(b, |x, y| self.star2(x, y))
    }

    /// The tree `X^k ∏ I_{a_i}(τ_i)` read as the product `X^k · ∏ I_{a_i}(τ_i)` in `U(V₀)`.
    pub fn tree_to_pbw(&self, t: &Tree) -> Vect<Forest> {
        let dim = self.ws.dim;
        let planted = Forest::new(t.children().to_vec(), MultiIndex::zero(dim));
        self.u_mul(&Forest::poly(t.dec().clone()), &planted)
    }

    /// Product of two trees by grafting: the branches of `σ = X^k ∏ I_{a_i}(σ_i)`
    /// are deformed-grafted onto `τ` and `k` is then distributed over the
    /// original vertices of `τ`. The result is returned in the PBW basis.
    pub fn tree_product(&self, sigma: &Tree, tau: &Tree) -> Result<Vect<Forest>> {
        let dim = self.ws.dim;
        // Vertices of τ carry an extra coordinate 1 so they can be told apart after grafting.
        let mut wide = self.ws.clone().with_total_caps(None, None);
        wide.dim = dim + 1;
        wide.scaling = MultiIndex::from_slice(&alloc::vec![1; dim + 1]);
        wide.max_node_dec = wide.max_node_dec.max(1);
        let go = GuinOudom::new(PreLieProduct::deformed(&wide));
        let anchor = EdgeLabel::plain(MultiIndex::zero(dim + 1));
        let branches = Forest::new(sigma.children().iter().map(|p| widen_planted(p, 0)).collect(), MultiIndex::zero(dim + 1));
        let target = Forest::single(Planted::new(anchor, widen_tree(tau, 1)));
        let mut out = Vect::zero();
        for (f, c) in go.bullet(&branches, &target)? {
            let mut cur = Vect::basis(f.planted()[0].body.clone());
            for i in 0..dim {
                for _ in 0..sigma.dec().get(i) {
                    cur = cur.map_linear(|t| {
                        t.sum_over_vertices(&mut |u| {
                            if u.dec().get(dim) == 0 {
                                return Ok::<_, crate::error::Error>(Vect::zero());
                            }
                            Ok(Vect::basis(u.with_dec(u.dec().add_unit(i))))
                        })
                    })?;
                }
            }
            for (t, d) in cur {
                let t = narrow_tree(&t);
                self.ws.check_tree(&t)?;
                out.add_scaled(&self.tree_to_pbw(&t), &(&c * d));
            }
        }
        Ok(out)
    }

    pub fn unit(&self) -> Vect<Forest> {
        Vect::term(Forest::unit(self.ws.dim), Q::one())
    }
}

fn widen(m: &MultiIndex, extra: u16) -> MultiIndex {
    let mut v: Vec<u16> = m.entries().to_vec();
    v.push(extra);
    MultiIndex::from_slice(&v)
}

fn widen_tree(t: &Tree, mark: u16) -> Tree {
    Tree::new(widen(t.dec(), mark), t.children().iter().map(|p| widen_planted(p, mark)).collect())
}

fn widen_planted(p: &Planted, mark: u16) -> Planted {
    Planted::new(EdgeLabel::new(p.edge.kind, widen(&p.edge.shift, 0)), widen_tree(&p.body, mark))
}

fn narrow(m: &MultiIndex) -> MultiIndex {
    MultiIndex::from_slice(&m.entries()[..m.dim() - 1])
}

fn narrow_tree(t: &Tree) -> Tree {
    let children = t
        .children()
        .iter()
        .map(|p| Planted::new(EdgeLabel::new(p.edge.kind, narrow(&p.edge.shift)), narrow_tree(&p.body)))
        .collect();
    Tree::new(narrow(t.dec()), children)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::Enumerator;
    use crate::parse::{parse_forest, parse_tree};
    use crate::vect::q;

    fn ws() -> Workspace {
        Workspace::new(2).with_caps(3, 3)
    }

    fn f(s: &str) -> Forest {
        parse_forest(s, &ws()).unwrap()
    }

    #[test]
    fn x_commutator() {
        let h = H2::new(&ws());
        let x = f("X^(1,0)");
        let p = f("I[(1,0)](N[(0,0)])");
        let mut lhs = h.star2(&x, &p).unwrap();
        lhs -= &h.star2(&p, &x).unwrap();
        let mut rhs = Vect::basis(f("I[(1,0)](N[(1,0)])"));
        rhs.add_term(f("I[(0,0)](N[(0,0)])"), -q(1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn x_letters_commute() {
        let h = H2::new(&ws());
        assert_eq!(h.star2(&f("X^(1,0)"), &f("X^(0,1)")).unwrap(), Vect::basis(f("X^(1,1)")));
        assert_eq!(h.star2(&f("X^(0,1)"), &f("X^(1,0)")).unwrap(), Vect::basis(f("X^(1,1)")));
    }

    #[test]
    fn planted_part_is_deformed_grossman_larson() {
        let w = Workspace::new(2).with_caps(1, 1);
        let h = H2::new(&w);
        let go = GuinOudom::new(PreLieProduct::deformed(&w));
        let mut en = Enumerator::new(w.bounds());
        let mut fs = en.forests(1);
        fs.extend(en.forests(2));
        for a in &fs {
            for b in en.forests(1).iter().chain(fs.iter().take(12)) {
                assert_eq!(h.star2(a, b).unwrap(), go.star(a, b).unwrap(), "{a} {b}");
            }
        }
    }

    #[test]
    fn associative_on_mixed_monomials() {
        let h = H2::new(&ws());
        let ms = [f("X^(1,0)"), f("X^(0,1)"), f("I[(1,0)](N[(0,1)])"), f("I[(0,1)](N[(0,0)])·X^(1,0)")];
        for a in &ms {
            for b in &ms {
                for c in &ms {
                    let ab = h.star2(a, b).unwrap();
                    let bc = h.star2(b, c).unwrap();
                    let l = h.star2_vect(&ab, &Vect::basis(c.clone())).unwrap();
                    let r = h.star2_vect(&Vect::basis(a.clone()), &bc).unwrap();
                    assert_eq!(l, r, "{a} {b} {c}");
                }
            }
        }
    }

    #[test]
    fn matches_grafting_formula() {
        let w = ws();
        let h = H2::new(&w);
        let trees = [
            "N[(1,0)]",
            "N[(0,1)]{(1,0):N[(0,0)]}",
            "N[(1,0)]{(0,1):N[(1,0)]}",
            "N[(0,0)]{(1,1):N[(0,0)]}",
        ];
        for s in trees {
            for t in trees {
                let sigma = parse_tree(s, &w).unwrap();
                let tau = parse_tree(t, &w).unwrap();
                let lhs = h.star2_vect(&h.tree_to_pbw(&sigma), &h.tree_to_pbw(&tau)).unwrap();
                assert_eq!(lhs, h.tree_product(&sigma, &tau).unwrap(), "{s} {t}");
            }
        }
    }
}
