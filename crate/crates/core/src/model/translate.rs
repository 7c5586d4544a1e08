//! Push-forward of characters along the word isomorphisms.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::classical::{classical_forests, embedded_bounds, unembed_forest, unembed_planted, ClassicalForest};
use crate::error::{Error, Result};
use crate::iso::{CfBasis, NormalForm, WordVect};
use crate::multiindex::MultiIndex;
use crate::ops::Grafting;
use crate::tree::{Forest, Tree};
use crate::vect::{qi, Q, Vect};
use crate::word::{Letter, Word};
use crate::workspace::Workspace;

use super::character::Character;

/// `Ψ̂_CF` on classical trees with `d+1` vertex labels, through the embedding
/// into planted trees and with words read right to left.
pub struct ClassicalIso {
    cf: CfBasis,
    dim: usize,
    max_nodes: usize,
    by_grade: Vec<Vec<u32>>,
}

impl ClassicalIso {
    pub fn new(dim: usize, max_nodes: usize) -> Result<Self> {
        let labels: Vec<MultiIndex> = (0..dim).map(|i| MultiIndex::unit(dim, i)).collect();
        let ws = Workspace::new(dim).with_caps(0, 1).with_total_caps(Some(0), Some(1)).with_max_edges(max_nodes.max(1));
        let cf = CfBasis::with_bounds(&ws, embedded_bounds(&labels));
        let by_grade = cf.build(max_nodes)?;
        Ok(ClassicalIso { cf, dim, max_nodes, by_grade })
    }

    pub fn basis(&self) -> &CfBasis {
        &self.cf
    }

    pub fn labels(&self) -> Vec<MultiIndex> {
        (0..self.dim).map(|i| MultiIndex::unit(self.dim, i)).collect()
    }

    /// The classical tree behind letter `id`.
    pub fn letter_tree(&self, id: u32) -> Result<Tree> {
        let v = self.cf.letter_value(id, Grafting::Plain);
        match v.first() {
            Some((p, _)) if v.len() == 1 => unembed_planted(p).ok_or_else(|| Error::Invalid("letter is not classical".into())),
            _ => Err(Error::Invalid("letter is not a single tree".into())),
        }
    }

    /// Letter ids with their vertex counts.
    pub fn letter_grades(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for (g, ids) in self.by_grade.iter().enumerate() {
            for id in ids {
                m.insert(*id, g);
            }
        }
        m
    }

    /// All words of total grade `g`.
    pub fn words(&self, g: usize) -> Vec<Word<Letter>> {
        if g == 0 {
            return alloc::vec![Word::empty()];
        }
        let mut out = Vec::new();
        for (h, ids) in self.by_grade.iter().enumerate().skip(1).take(g) {
            for w in self.words(g - h) {
                for id in ids {
                    let mut v = alloc::vec![Letter::L(*id)];
                    v.extend(w.letters().iter().copied());
                    out.push(Word(v));
                }
            }
        }
        out.sort();
        out
    }

    /// `Ψ̂_CF(f)`.
    pub fn psi(&self, f: &ClassicalForest) -> Result<WordVect> {
        let w = self.cf.psi_cf(&Vect::basis(f.embed()))?;
        Ok(w.map_basis(Word::reversed))
    }

    /// Inverse of [`ClassicalIso::psi`].
    pub fn psi_inv(&self, w: &Word<Letter>) -> Result<Vect<ClassicalForest>> {
        let forests = self.cf.words_to_forests(&Vect::basis(w.reversed()), Grafting::Plain)?;
        let mut out = Vect::zero();
        for (f, c) in forests.iter() {
            let cf = unembed_forest(f).ok_or_else(|| Error::Invalid("non-classical forest in the image".into()))?;
            out.add_term(cf, c.clone());
        }
        Ok(out)
    }

    /// The word polynomial `v` with `⟨v, Ψ̂(h)⟩ = S(h) δ_{h,f}` for forests `h`
    /// of the same grade, so that `⟨X̂, v⟩ = ⟨X, f⟩` for pushed-forward characters.
    pub fn dual(&self, f: &ClassicalForest) -> Result<WordVect> {
        let s = qi(f.symmetry_factor());
        let mut out = Vect::zero();
        for w in self.words(f.nodes()) {
            let c = self.psi_inv(&w)?.coeff(f);
            if !c.is_zero() {
                out.add_term(w, c * &s);
            }
        }
        Ok(out)
    }

    /// `X̂ = Ψ̂(Σ_h ⟨X,h⟩/S(h) h)`, listed on every word up to the truncation.
    pub fn push_forward(&self, x: &Character<Tree>) -> Result<Character<Word<Letter>>> {
        let n = x.grade();
        if n > self.max_nodes {
            return Err(Error::MissingGrade(n));
        }
        let mut element = Vect::zero();
        for g in 1..=n {
            for h in classical_forests(g, &self.labels()) {
                let c = x.forest_value(&h)? / qi(h.symmetry_factor());
                if !c.is_zero() {
                    element.add_scaled(&self.psi(&h)?, &c);
                }
            }
        }
        let mut out = Character::empty(n);
        for g in 1..=n {
            for w in self.words(g) {
                let c = element.coeff(&w);
                out.insert(w, g, c);
            }
        }
        Ok(out)
    }
}

/// `⟨X, v⟩` for a word polynomial `v`.
pub fn pair_words(x: &Character<Word<Letter>>, v: &WordVect) -> Result<Q> {
    let mut acc = Q::zero();
    for (w, c) in v.iter() {
        acc += c * x.word_value(w)?;
    }
    Ok(acc)
}

/// Grade of a word over `Ψ` letters: edges of each planted letter, one per `X_i`.
pub fn word_grade(cf: &CfBasis, w: &Word<Letter>) -> usize {
    w.letters()
        .iter()
        .map(|l| match l {
            Letter::X(_) => 1,
            Letter::L(id) => cf.letter_value(*id, Grafting::Deformed).first().map(|(p, _)| p.edges()).unwrap_or(0),
        })
        .sum()
}

/// `Ψ(Σ_m ⟨γ,m⟩/S(m) m)` on the monomials of `H₂`, as a word character in normal form.
pub fn push_forward_h2(nf: &NormalForm, x: &Character<Forest>) -> Result<Character<Word<Letter>>> {
    let mut element = Vect::zero();
    for (m, _, v) in x.iter() {
        element.add_term(m.clone(), v / qi(m.symmetry_factor()));
    }
    let image = nf.psi_vect(&element)?;
    let mut out = Character::empty(x.grade());
    for (w, c) in image.iter() {
        if !w.is_empty() {
            out.insert(w.clone(), word_grade(nf.basis(), w), c.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::dot;
    use crate::model::character::chen_check_words;
    use crate::model::path::{canonical_lift, PathSpec};
    use crate::vect::qf;

    #[test]
    fn letters_match_primitive_dimensions() {
        let iso = ClassicalIso::new(2, 3).unwrap();
        let counts: Vec<usize> = iso.by_grade.iter().map(Vec::len).collect();
        // Forests: 2, 7, 26; words in letters must match them grade by grade.
        assert_eq!(counts, alloc::vec![0, 2, 3, 6]);
        assert_eq!(iso.words(2).len(), 4 + 3);
    }

    #[test]
    fn single_letters_carry_grade_one_values() {
        let iso = ClassicalIso::new(2, 2).unwrap();
        let p = PathSpec::parse("t ; 1/2 t^2").unwrap();
        let x = canonical_lift(&p, &qf(1, 3), &qf(3, 4), 2).unwrap();
        let xh = iso.push_forward(&x).unwrap();
        for i in 0..2 {
            let w = iso.psi(&ClassicalForest::single(dot(2, i))).unwrap();
            let (word, c) = w.first().unwrap();
            assert_eq!(w.len(), 1);
            assert_eq!(c, &Q::from_integer(1.into()));
            assert_eq!(xh.value(word), x.value(&dot(2, i)));
        }
    }

    #[test]
    fn word_chen_and_pairings() {
        let iso = ClassicalIso::new(2, 3).unwrap();
        let p = PathSpec::parse("t ; 1/2 t^2").unwrap();
        let (s, u, t) = (qf(1, 7), qf(1, 2), qf(5, 6));
        let lift = |a: &Q, b: &Q| iso.push_forward(&canonical_lift(&p, a, b, 3).unwrap()).unwrap();
        let (su, ut, st) = (lift(&s, &u), lift(&u, &t), lift(&s, &t));
        assert!(chen_check_words(&su, &ut, &st).unwrap().holds());
        assert!(st.shuffle_defects().unwrap().is_empty());
        let x = canonical_lift(&p, &s, &t, 3).unwrap();
        for g in 1..=3 {
            for f in classical_forests(g, &iso.labels()) {
                assert_eq!(pair_words(&st, &iso.dual(&f).unwrap()).unwrap(), x.forest_value(&f).unwrap(), "{f}");
            }
        }
    }
}
