//! The Hairer–Kelly map from node-decorated trees to words of trees.

use alloc::collections::BTreeMap;

use crate::classical::ClassicalForest;
use crate::error::Result;
use crate::hopf::delta_bck_hat;
use crate::tree::Tree;
use crate::vect::Vect;
use crate::word::Word;

/// `Ψ_HK = (Ψ_HK ⊗ P) Δ̂`, where `P` keeps right-hand factors that are single trees.
pub fn hairer_kelly(t: &Tree) -> Result<Vect<Word<Tree>>> {
    let mut memo = BTreeMap::new();
    hk(&ClassicalForest::single(t.clone()), &mut memo)
}

fn hk(f: &ClassicalForest, memo: &mut BTreeMap<ClassicalForest, Vect<Word<Tree>>>) -> Result<Vect<Word<Tree>>> {
    if f.is_unit() {
        return Ok(Vect::basis(Word::empty()));
    }
    if let Some(r) = memo.get(f) {
        return Ok(r.clone());
    }
    let mut out = Vect::zero();
    for ((trunk, pruned), c) in delta_bck_hat(f)? {
        if pruned.trees().len() != 1 {
            continue;
        }
        let tail = Word::letter(pruned.trees()[0].clone());
        for (w, d) in hk(&trunk, memo)? {
            out.add_term(w.concat(&tail), &c * d);
        }
    }
    memo.insert(f.clone(), out.clone());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{bplus, classical_trees, dot};
    use crate::multiindex::MultiIndex;

    #[test]
    fn two_node_example() {
        let (i, j) = (0, 1);
        let t = bplus(2, j, &[dot(2, i)]);
        let mut expect = Vect::basis(Word::letter(t.clone()));
        expect.add_term(Word(alloc::vec![dot(2, j), dot(2, i)]), crate::vect::q(1));
        assert_eq!(hairer_kelly(&t).unwrap(), expect);
        assert_eq!(hairer_kelly(&dot(2, i)).unwrap(), Vect::basis(Word::letter(dot(2, i))));
    }

    #[test]
    fn preserves_node_count() {
        let labels = [MultiIndex::unit(2, 0), MultiIndex::unit(2, 1)];
        for n in 1..=3 {
            for t in classical_trees(n, &labels) {
                for (w, _) in hairer_kelly(&t).unwrap() {
                    assert_eq!(w.letters().iter().map(|s| s.nodes()).sum::<usize>(), n);
                }
            }
        }
    }
}
