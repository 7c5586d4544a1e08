//! Rewriting modulo the ideal generated by `X_i L − L X_i − ↑^i L ∓ L_{−e_i}`
//! and the isomorphism `Ψ` from `H₂` monomials to words.
//!
//! A word is normal when every polynomial letter sits to the right of every
//! tree letter and the polynomial letters are sorted by index.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;

use num_traits::One;

use crate::error::{Error, Result};
use crate::ops::{shift_down, up_planted, Grafting};
use crate::tree::{Forest, Planted};
use crate::vect::{Q, Vect};
use crate::word::{concat_vect, Letter, Word};

use super::cf::{CfBasis, WordVect};

/// Sign of the edge-shift term in `X_i L ↦ L X_i + Ψ(↑^i L) ± Ψ(L_{−e_i})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Chooses which of the `n` available redexes to rewrite next.
pub trait Strategy {
    fn pick(&mut self, n: usize) -> usize;
}

pub struct Leftmost;
pub struct Rightmost;

impl Strategy for Leftmost {
    fn pick(&mut self, _: usize) -> usize {
        0
    }
}

impl Strategy for Rightmost {
    fn pick(&mut self, n: usize) -> usize {
        n - 1
    }
}

impl<F: FnMut(usize) -> usize> Strategy for F {
    fn pick(&mut self, n: usize) -> usize {
        self(n) % n
    }
}

pub struct NormalForm<'a> {
    cf: &'a CfBasis,
    sign: Sign,
    rules: RefCell<BTreeMap<(u8, u32), WordVect>>,
}

fn is_redex(a: &Letter, b: &Letter) -> bool {
    match (a, b) {
        (Letter::X(_), Letter::L(_)) => true,
        (Letter::X(j), Letter::X(i)) => j > i,
        _ => false,
    }
}

impl<'a> NormalForm<'a> {
    pub fn new(cf: &'a CfBasis, sign: Sign) -> Self {
        NormalForm { cf, sign, rules: RefCell::new(BTreeMap::new()) }
    }

    pub fn basis(&self) -> &CfBasis {
        self.cf
    }

    fn check_letters(&self, w: &Word<Letter>) -> Result<()> {
        let n = self.cf.letters().len() as u32;
        for l in w.letters() {
            match l {
                Letter::L(id) if *id >= n => return Err(Error::UnregisteredLetter(alloc::format!("L{id}"))),
                Letter::X(i) if *i as usize >= self.cf.workspace().dim => {
                    return Err(Error::UnregisteredLetter(alloc::format!("X{i}")))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Right-hand side for `X_i L_id`.
    fn rule(&self, i: u8, id: u32) -> Result<WordVect> {
        if let Some(r) = self.rules.borrow().get(&(i, id)) {
            return Ok(r.clone());
        }
        let ws = self.cf.workspace();
        let l = self.cf.letter_value(id, Grafting::Deformed);
        let mut up: Vect<Planted> = Vect::zero();
        let mut shifted: Vect<Planted> = Vect::zero();
        for (p, c) in l.iter() {
            up.add_scaled(&up_planted(ws, i as usize, p)?, c);
            if let Some(q) = shift_down(p, i as usize) {
                shifted.add_term(q, c.clone());
            }
        }
        let mut out = Vect::basis(Word(alloc::vec![Letter::L(id), Letter::X(i)]));
        out += &self.cf.psi_planted_deformed(&up)?;
        let s = self.cf.psi_planted_deformed(&shifted)?;
        match self.sign {
            Sign::Plus => out += &s,
            Sign::Minus => out -= &s,
        }
        self.rules.borrow_mut().insert((i, id), out.clone());
        Ok(out)
    }

    /// Positions `j` such that letters `j, j+1` can be rewritten.
    pub fn redexes(w: &Word<Letter>) -> Vec<usize> {
        w.letters().windows(2).enumerate().filter(|(_, p)| is_redex(&p[0], &p[1])).map(|(j, _)| j).collect()
    }

    pub fn is_normal(w: &Word<Letter>) -> bool {
        Self::redexes(w).is_empty()
    }

    /// Rewrite the pair at positions `j, j+1`.
    pub fn rewrite_at(&self, w: &Word<Letter>, j: usize) -> Result<WordVect> {
        let ls = w.letters();
        let middle = match (&ls[j], &ls[j + 1]) {
            (Letter::X(i), Letter::L(id)) => self.rule(*i, *id)?,
            (Letter::X(a), Letter::X(b)) if a > b => Vect::basis(Word(alloc::vec![Letter::X(*b), Letter::X(*a)])),
            _ => return Err(Error::Invalid("no redex at this position".into())),
        };
        let head = Vect::basis(Word(ls[..j].to_vec()));
        let tail = Vect::basis(Word(ls[j + 2..].to_vec()));
        Ok(concat_vect(&concat_vect(&head, &middle), &tail))
    }

    pub fn normal_form(&self, w: &WordVect, strategy: &mut dyn Strategy) -> Result<WordVect> {
        let mut pending: BTreeMap<Word<Letter>, Q> = BTreeMap::new();
        for (x, c) in w.iter() {
            self.check_letters(x)?;
            pending.insert(x.clone(), c.clone());
        }
        let mut out = Vect::zero();
        while let Some((x, c)) = pending.pop_first() {
            let r = Self::redexes(&x);
            if r.is_empty() {
                out.add_term(x, c);
                continue;
            }
            let j = r[strategy.pick(r.len())];
            for (y, d) in self.rewrite_at(&x, j)? {
                let e = pending.entry(y.clone()).or_insert_with(|| Q::from_integer(0.into()));
                *e += &c * d;
                if num_traits::Zero::is_zero(&*e) {
                    pending.remove(&y);
                }
            }
        }
        Ok(out)
    }

    /// `Ψ(∏ I_{a_i}(τ_i) X^k) = Ψ_Φ(∏ I_{a_i}(τ_i)) ⊗ X_0^{k_0} ⊗ … ⊗ X_d^{k_d}`.
    pub fn psi(&self, m: &Forest) -> Result<WordVect> {
        let planted = self.cf.psi_phi(&Vect::basis(m.without_x()))?;
        let mut xs = Vec::new();
        for i in 0..m.dim() {
            for _ in 0..m.x().get(i) {
                xs.push(Letter::X(i as u8));
            }
        }
        Ok(concat_vect(&planted, &Vect::basis(Word(xs))))
    }

    pub fn psi_vect(&self, v: &Vect<Forest>) -> Result<WordVect> {
        v.map_linear(|m| self.psi(m))
    }

    /// Normal-ordered concatenation, the product of the quotient.
    pub fn concat(&self, a: &WordVect, b: &WordVect) -> Result<WordVect> {
        self.normal_form(&concat_vect(a, b), &mut Leftmost)
    }

    pub fn unit() -> WordVect {
        Vect::term(Word::empty(), Q::one())
    }
}
