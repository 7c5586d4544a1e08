//! Degree-truncated group-like elements of `(H₂, ★₂)` and their images
//! under `Ψ`.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hopf::H2;
use crate::iso::{NormalForm, WordVect};
use crate::ops::Grafting;
use crate::tree::Forest;
use crate::vect::{qi, Q, Vect};
use crate::word::{Letter, Word};

use super::character::Character;
use super::degree::DegreeMap;

/// `★₂` with every monomial of degree above `max` discarded.
pub struct Truncated<'a> {
    pub h2: &'a H2,
    pub alpha: &'a DegreeMap,
    pub max: Q,
}

impl Truncated<'_> {
    pub fn truncate(&self, v: &Vect<Forest>) -> Vect<Forest> {
        v.filter(|m| self.alpha.forest(m) <= self.max)
    }

    pub fn mul(&self, a: &Vect<Forest>, b: &Vect<Forest>) -> Result<Vect<Forest>> {
        // `★₂` is homogeneous for the degree, so pairs above `max` never contribute.
        let mut out = Vect::zero();
        for (x, c) in a.iter() {
            let dx = self.alpha.forest(x);
            for (y, d) in b.iter() {
                if &dx + self.alpha.forest(y) <= self.max {
                    out.add_scaled(&self.h2.star2(x, y)?, &(c * d));
                }
            }
        }
        Ok(out)
    }

    fn series(&self, y: &Vect<Forest>, coeff: impl Fn(usize) -> Q) -> Result<Vect<Forest>> {
        if y.keys().any(|m| m.is_unit() || self.alpha.forest(m) <= Q::zero()) {
            return Err(Error::Invalid("series argument must have positive degree".into()));
        }
        let mut out = self.h2.unit();
        let mut pow = self.h2.unit();
        let mut n = 1;
        loop {
            pow = self.mul(&pow, y)?;
            if pow.is_zero() {
                return Ok(out);
            }
            out.add_scaled(&pow, &coeff(n));
            n += 1;
        }
    }

    /// `Σ yⁿ/n!` for `y` of positive degree.
    pub fn exp(&self, y: &Vect<Forest>) -> Result<Vect<Forest>> {
        self.series(y, |n| Q::one() / qi((1..=n as u64).product::<u64>().into()))
    }

    /// Inverse of `1 + y` as `Σ (−y)ⁿ`.
    pub fn inverse(&self, g: &Vect<Forest>) -> Result<Vect<Forest>> {
        let unit = Forest::unit(self.h2.workspace().dim);
        if g.coeff(&unit) != Q::one() {
            return Err(Error::Invalid("only elements of the form 1 + y are inverted".into()));
        }
        let mut y = g.clone();
        y.remove(&unit);
        self.series(&y, |n| if n % 2 == 0 { Q::one() } else { -Q::one() })
    }

    /// `γ_xy = g_x⁻¹ ★₂ g_y`.
    pub fn recentre(&self, gx: &Vect<Forest>, gy: &Vect<Forest>) -> Result<Vect<Forest>> {
        self.mul(&self.inverse(gx)?, gy)
    }

    /// Degree of a word over `Ψ` letters.
    pub fn word_degree(&self, nf: &NormalForm, w: &Word<Letter>) -> Q {
        let s = &self.alpha.scaling;
        w.letters().iter().fold(Q::zero(), |acc, l| {
            acc + match l {
                Letter::X(i) => Q::from_integer(s.get(*i as usize).into()),
                Letter::L(id) => {
                    let v = nf.basis().letter_value(*id, Grafting::Deformed);
                    v.first().map(|(p, _)| self.alpha.planted(p)).unwrap_or_else(Q::zero)
                }
            }
        })
    }

    pub fn truncate_words(&self, nf: &NormalForm, v: &WordVect) -> WordVect {
        v.filter(|w| self.word_degree(nf, w) <= self.max)
    }

    /// Normal-ordered concatenation up to degree `max`.
    pub fn concat(&self, nf: &NormalForm, a: &WordVect, b: &WordVect) -> Result<WordVect> {
        let mut out = Vect::zero();
        for (u, c) in a.iter() {
            let du = self.word_degree(nf, u);
            for (v, d) in b.iter() {
                if &du + self.word_degree(nf, v) <= self.max {
                    out.add_scaled(&nf.concat(&Vect::basis(u.clone()), &Vect::basis(v.clone()))?, &(c * d));
                }
            }
        }
        Ok(out)
    }
}

/// `⟨γ, m⟩ = S(m) · [m]γ` on the monomials of `γ`, graded by edges plus polynomial degree.
pub fn to_character(v: &Vect<Forest>) -> Character<Forest> {
    let grade = |m: &Forest| m.edges() + m.x().total() as usize;
    let mut x = Character::empty(v.keys().map(grade).max().unwrap_or(0));
    for (m, c) in v.iter() {
        if !m.is_unit() {
            x.insert(m.clone(), grade(m), c * qi(m.symmetry_factor()));
        }
    }
    x
}

/// The monomials with nonzero coefficient, in order.
pub fn support(v: &Vect<Forest>) -> Vec<Forest> {
    v.keys().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::{CfBasis, Sign};
    use crate::model::translate::push_forward_h2;
    use crate::multiindex::MultiIndex;
    use crate::parse::parse_forest;
    use crate::vect::{q, qf};
    use crate::workspace::Workspace;

    #[test]
    fn models_satisfy_chen_on_both_sides() {
        let ws = Workspace::new(2).with_caps(2, 1).with_max_edges(2).with_scaling(MultiIndex::from_slice(&[2, 1]));
        let h2 = H2::new(&ws);
        let alpha = DegreeMap::new(ws.scaling.clone(), alloc::vec![q(2)]);
        let tr = Truncated { h2: &h2, alpha: &alpha, max: q(4) };
        let x1 = Vect::basis(parse_forest("X^(0,1)", &ws).unwrap());
        let l = Vect::basis(parse_forest("I[(0,0)](N[(0,0)])", &ws).unwrap());
        let g = |x: &Q| tr.mul(&tr.exp(&x1.scaled(x)).unwrap(), &tr.exp(&l.scaled(&(x * x))).unwrap()).unwrap();
        let (x, y, z) = (qf(1, 3), qf(-1, 2), qf(2, 5));
        let (gx, gy, gz) = (g(&x), g(&y), g(&z));
        let (gxy, gyz, gxz) = (tr.recentre(&gx, &gy).unwrap(), tr.recentre(&gy, &gz).unwrap(), tr.recentre(&gx, &gz).unwrap());
        assert_eq!(tr.mul(&gxy, &gyz).unwrap(), gxz);
        assert!(gxy.keys().any(|m| m.edges() == 1 && m.planted()[0].body.dec().get(1) > 0));

        let cf = CfBasis::new(&ws);
        let nf = NormalForm::new(&cf, Sign::Minus);
        let psi = |v: &Vect<Forest>| nf.psi_vect(v).unwrap();
        let lhs = tr.concat(&nf, &psi(&gxy), &psi(&gyz)).unwrap();
        assert_eq!(lhs, psi(&gxz));

        let image = push_forward_h2(&nf, &to_character(&gxy)).unwrap();
        for (w, c) in psi(&gxy).iter() {
            if !w.is_empty() {
                assert_eq!(&image.value(w), c);
            }
        }
    }
}
