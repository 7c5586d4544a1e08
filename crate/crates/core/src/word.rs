//! Words over an alphabet: concatenation, shuffle, deconcatenation, deshuffle.

use alloc::vec::Vec;
use core::fmt;

use num_traits::One;

use crate::vect::{Q, Vect};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word<L>(pub Vec<L>);

/// Letters of the word algebras targeted by the isomorphisms: polynomial
/// letters `X_i` and registered planted-combination letters.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    L(u32),
    X(u8),
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::L(i) => write!(f, "L{i}"),
            Letter::X(i) => write!(f, "X{i}"),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl<L: Clone + Ord> Word<L> {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: L) -> Self {
        Word(alloc::vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[L] {
        &self.0
    }

    pub fn concat(&self, other: &Word<L>) -> Word<L> {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Word(v)
    }

    pub fn reversed(&self) -> Word<L> {
        Word(self.0.iter().rev().cloned().collect())
    }
}

impl<L: fmt::Display> fmt::Display for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊗ ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

pub fn shuffle<L: Clone + Ord>(u: &Word<L>, v: &Word<L>) -> Vect<Word<L>> {
    let mut out = Vect::zero();
    let (n, m) = (u.len(), v.len());
    // Choose the positions taken by `u` in the merged word.
    let mut pos: Vec<usize> = (0..n).collect();
    loop {
        let mut w = Vec::with_capacity(n + m);
        let (mut i, mut j) = (0, 0);
        for k in 0..n + m {
            if i < n && pos[i] == k {
                w.push(u.0[i].clone());
                i += 1;
            } else {
                w.push(v.0[j].clone());
                j += 1;
            }
        }
        out.add_term(Word(w), Q::one());
        // next combination
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if pos[k] < m + k {
                pos[k] += 1;
                for r in k + 1..n {
                    pos[r] = pos[r - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn shuffle_vect<L: Clone + Ord>(u: &Vect<Word<L>>, v: &Vect<Word<L>>) -> Vect<Word<L>> {
    u.bilinear(v, |a, b| Ok::<_, ()>(shuffle(a, b))).unwrap_or_default()
}

pub fn deconcat<L: Clone + Ord>(w: &Word<L>) -> Vect<(Word<L>, Word<L>)> {
    (0..=w.len()).map(|k| ((Word(w.0[..k].to_vec()), Word(w.0[k..].to_vec())), Q::one())).collect()
}

/// Letters primitive, extended multiplicatively for concatenation.
pub fn deshuffle<L: Clone + Ord>(w: &Word<L>) -> Vect<(Word<L>, Word<L>)> {
    let n = w.len();
    let mut out = Vect::zero();
    for mask in 0u64..(1u64 << n) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (k, l) in w.0.iter().enumerate() {
            if mask >> k & 1 == 1 {
                a.push(l.clone());
            } else {
                b.push(l.clone());
            }
        }
        out.add_term((Word(a), Word(b)), Q::one());
    }
    out
}

pub fn concat_vect<L: Clone + Ord>(u: &Vect<Word<L>>, v: &Vect<Word<L>>) -> Vect<Word<L>> {
    u.bilinear(v, |a, b| Ok::<_, ()>(Vect::basis(a.concat(b)))).unwrap_or_default()
}

impl<L: fmt::Debug> fmt::Debug for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⊗ ")?;
            }
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}
