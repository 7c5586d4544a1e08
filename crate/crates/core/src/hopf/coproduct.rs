use alloc::vec::Vec;

use num_traits::One;

use crate::classical::ClassicalForest;
use crate::error::{Error, Result};
use crate::multiindex::{EdgeLabel, MultiIndex};
use crate::tree::{Forest, Planted, Tree};
use crate::vect::{qi, Q, Vect};
use crate::workspace::Workspace;

use super::{tensor_mul, Tensor};

/// A value computed with the polynomial series cut at `|ℓ| <= lmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncated<T> {
    pub value: T,
    pub lmax: u32,
}

fn unit_tensor(dim: usize) -> Tensor {
    Vect::basis((Forest::unit(dim), Forest::unit(dim)))
}

fn require_planted_only(f: &Forest) -> Result<()> {
    if f.is_planted_only() {
        Ok(())
    } else {
        Err(Error::Invalid("expected a forest without polynomial part".into()))
    }
}

/// Admissible-cut coproduct with cut edges kept on the pruned (left) side:
/// `Δ I_a(X^k τ) = (id ⊗ I_a(X^k ·)) Δτ + I_a(X^k τ) ⊗ 1`.
pub fn delta_bck(f: &Forest) -> Result<Tensor> {
    require_planted_only(f)?;
    let mut out = unit_tensor(f.dim());
    for p in f.planted() {
        out = tensor_mul(&out, &delta_bck_planted(p));
    }
    Ok(out)
}

fn delta_bck_planted(p: &Planted) -> Tensor {
    let dim = p.body.dim();
    let mut inner = unit_tensor(dim);
    for c in p.body.children() {
        inner = tensor_mul(&inner, &delta_bck_planted(c));
    }
    let mut out = Vect::zero();
    for ((l, r), c) in inner {
        let trunk = Planted::new(p.edge.clone(), Tree::new(p.body.dec().clone(), r.planted().to_vec()));
        out.add_term((l, Forest::single(trunk)), c);
    }
    out.add_term((Forest::single(p.clone()), Forest::unit(dim)), Q::one());
    out
}

/// Deformed coproduct, with `Δ̄` as the auxiliary map into `S(P) ⊗ T`:
///
/// `Δ I_a(τ) = (id ⊗ I_a) Δ̄τ + I_a(τ) ⊗ 1`,
/// `Δ̄ I_b(σ) = (id ⊗ I_b) Δ̄σ + Σ_ℓ I_{b+ℓ}(σ) ⊗ X^ℓ / ℓ!`,
/// `Δ̄ (X^k ∏ p_i) = (1 ⊗ X^k) ∏ Δ̄ p_i`.
pub fn delta_dbck(ws: &Workspace, f: &Forest) -> Result<Truncated<Tensor>> {
    require_planted_only(f)?;
    let ls = MultiIndex::with_total_at_most(ws.dim, ws.lmax);
    let mut out = unit_tensor(f.dim());
    for p in f.planted() {
        let bar = dbck_bar_tree(&p.body, &ls);
        let mut d = Vect::zero();
        for ((l, r), c) in bar {
            d.add_term((l, Forest::single(Planted::new(p.edge.clone(), r.into_tree()))), c);
        }
        d.add_term((Forest::single(p.clone()), Forest::unit(f.dim())), Q::one());
        out = tensor_mul(&out, &d);
    }
    Ok(Truncated { value: out, lmax: ws.lmax })
}

/// `Δ̄` of a tree; the right-hand factors are trees written as forests.
pub fn delta_dbck_bar(ws: &Workspace, t: &Tree) -> Truncated<Tensor> {
    let ls = MultiIndex::with_total_at_most(ws.dim, ws.lmax);
    Truncated { value: dbck_bar_tree(t, &ls), lmax: ws.lmax }
}

fn dbck_bar_tree(t: &Tree, ls: &[MultiIndex]) -> Tensor {
    let dim = t.dim();
    let mut out = Vect::basis((Forest::unit(dim), Forest::poly(t.dec().clone())));
    for p in t.children() {
        out = tensor_mul(&out, &dbck_bar_planted(p, ls));
    }
    out
}

fn dbck_bar_planted(p: &Planted, ls: &[MultiIndex]) -> Tensor {
    let mut out = Vect::zero();
    for ((l, r), c) in dbck_bar_tree(&p.body, ls) {
        out.add_term((l, Forest::single(Planted::new(p.edge.clone(), r.into_tree()))), c);
    }
    for l in ls {
        let raised = Planted::new(p.edge.with_shift(p.edge.shift.add(l)), p.body.clone());
        out.add_term((Forest::single(raised), Forest::poly(l.clone())), Q::new(One::one(), l.factorial()));
    }
    out
}

/// Planted components and polynomial letters primitive, extended multiplicatively.
pub fn deshuffle_forest(f: &Forest) -> Tensor {
    let dim = f.dim();
    let runs = f.runs();
    let mut out = Vect::basis((Forest::unit(dim), Forest::unit(dim)));
    for (p, m) in runs {
        let mut piece = Vect::zero();
        for j in 0..=m {
            let left = Forest::new(alloc::vec![p.clone(); j], MultiIndex::zero(dim));
            let right = Forest::new(alloc::vec![p.clone(); m - j], MultiIndex::zero(dim));
            piece.add_term((left, right), qi(crate::multiindex::binom(m as u64, j as u64)));
        }
        out = tensor_mul(&out, &piece);
    }
    let k = f.x();
    if !k.is_zero() {
        let mut piece = Vect::zero();
        for j in k.below() {
            let rest = k.checked_sub(&j).expect("j <= k");
            piece.add_term((Forest::poly(j.clone()), Forest::poly(rest)), qi(k.binomial(&j)));
        }
        out = tensor_mul(&out, &piece);
    }
    out
}

/// Classical coproduct on node-decorated trees, cut edges dropped, written
/// trunk ⊗ pruned.
pub fn delta_bck_hat(f: &ClassicalForest) -> Result<Vect<(ClassicalForest, ClassicalForest)>> {
    f.check_classical()?;
    let mut out = Vect::basis((ClassicalForest::unit(), ClassicalForest::unit()));
    for t in f.trees() {
        out = classical_tensor_mul(&out, &hat_tree(t));
    }
    Ok(out)
}

fn classical_tensor_mul(
    x: &Vect<(ClassicalForest, ClassicalForest)>,
    y: &Vect<(ClassicalForest, ClassicalForest)>,
) -> Vect<(ClassicalForest, ClassicalForest)> {
    let mut out = Vect::zero();
    for ((a, b), c) in x.iter() {
        for ((d, e), g) in y.iter() {
            out.add_term((a.mul(d), b.mul(e)), c * g);
        }
    }
    out
}

fn hat_tree(t: &Tree) -> Vect<(ClassicalForest, ClassicalForest)> {
    // Trunk on the left: Δ̂ B₊(t_1…t_k) = 1 ⊗ B₊(…) + (B₊ ⊗ id) ∏ Δ̂ t_j.
    let mut inner = Vect::basis((ClassicalForest::unit(), ClassicalForest::unit()));
    for c in t.children() {
        inner = classical_tensor_mul(&inner, &hat_tree(&c.body));
    }
    let mut out = Vect::zero();
    for ((trunk, pruned), c) in inner {
        let children: Vec<Planted> =
            trunk.trees().iter().map(|s| Planted::new(EdgeLabel::plain(MultiIndex::zero(t.dim())), s.clone())).collect();
        out.add_term((ClassicalForest::single(Tree::new(t.dec().clone(), children)), pruned), c);
    }
    out.add_term((ClassicalForest::unit(), ClassicalForest::single(t.clone())), Q::one());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{bplus, dot, embed_tree};
    use crate::enumerate::Enumerator;
    use crate::parse::{parse_forest, parse_tree};
    use crate::vect::q;

    struct Flat {
        dec: Vec<MultiIndex>,
        parent: Vec<usize>,
        label: Vec<Option<EdgeLabel>>,
    }

    /// Vertex 0 is a virtual root carrying the polynomial part.
    fn flatten(f: &Forest) -> Flat {
        fn go(t: &Tree, parent: usize, label: Option<EdgeLabel>, out: &mut Flat) {
            let me = out.dec.len();
            out.dec.push(t.dec().clone());
            out.parent.push(parent);
            out.label.push(label);
            for c in t.children() {
                go(&c.body, me, Some(c.edge.clone()), out);
            }
        }
        let mut out = Flat { dec: Vec::new(), parent: Vec::new(), label: Vec::new() };
        go(&f.as_tree(), 0, None, &mut out);
        out
    }

    fn build(fl: &Flat, v: usize, cut: &[bool], bump: &[MultiIndex]) -> Tree {
        let children = (1..fl.dec.len())
            .filter(|&c| fl.parent[c] == v && c != v && !cut[c])
            .map(|c| Planted::new(fl.label[c].clone().unwrap(), build(fl, c, cut, bump)))
            .collect();
        Tree::new(fl.dec[v].add(&bump[v]), children)
    }

    fn ancestor_cut(fl: &Flat, mut v: usize, cut: &[bool]) -> bool {
        while v != 0 {
            v = fl.parent[v];
            if cut[v] {
                return true;
            }
        }
        false
    }

    /// Sum over admissible cuts and shift raisings `ℓ_e` (`|ℓ_e| <= lmax`, none on plant edges).
    fn cuts(f: &Forest, lmax: Option<u32>) -> Tensor {
        let fl = flatten(f);
        let n = fl.dec.len();
        let dim = f.dim();
        let mut out = Vect::zero();
        for mask in 0u32..(1 << (n - 1)) {
            let cut: Vec<bool> = (0..n).map(|v| v > 0 && mask >> (v - 1) & 1 == 1).collect();
            if (1..n).any(|v| cut[v] && ancestor_cut(&fl, v, &cut)) {
                continue;
            }
            let raisable: Vec<usize> = (1..n).filter(|&v| cut[v] && fl.parent[v] != 0).collect();
            let choices = match lmax {
                Some(l) => MultiIndex::with_total_at_most(dim, l),
                None => alloc::vec![MultiIndex::zero(dim)],
            };
            let mut assignment = alloc::vec![0usize; raisable.len()];
            loop {
                let mut bump = alloc::vec![MultiIndex::zero(dim); n];
                let mut coeff = q(1);
                let mut pruned = Vec::new();
                for v in (1..n).filter(|&v| cut[v]) {
                    let l = raisable.iter().position(|&u| u == v).map(|j| choices[assignment[j]].clone());
                    let l = l.unwrap_or_else(|| MultiIndex::zero(dim));
                    bump[fl.parent[v]] = bump[fl.parent[v]].add(&l);
                    coeff /= qi(l.factorial());
                    let e = fl.label[v].clone().unwrap();
                    let e = e.with_shift(e.shift.add(&l));
                    pruned.push(Planted::new(e, build(&fl, v, &cut, &alloc::vec![MultiIndex::zero(dim); n])));
                }
                let trunk = build(&fl, 0, &cut, &bump).into_forest();
                out.add_term((Forest::new(pruned, MultiIndex::zero(dim)), trunk), coeff);
                // Next ℓ assignment, odometer style.
                let mut j = 0;
                while j < assignment.len() {
                    assignment[j] += 1;
                    if assignment[j] < choices.len() {
                        break;
                    }
                    assignment[j] = 0;
                    j += 1;
                }
                if j == assignment.len() {
                    break;
                }
            }
        }
        out
    }

    fn ws() -> Workspace {
        Workspace::new(2).with_caps(2, 2).with_lmax(2)
    }

    fn f(s: &str) -> Forest {
        parse_forest(s, &ws()).unwrap()
    }

    fn terms(items: &[(&str, &str)]) -> Tensor {
        items.iter().map(|(a, b)| ((f(a), f(b)), q(1))).collect()
    }

    #[test]
    fn bck_examples() {
        let one = Forest::unit(2);
        assert_eq!(delta_bck(&one).unwrap(), Vect::basis((one.clone(), one.clone())));
        let p = "I[(1,0)](N[(1,1)])";
        assert_eq!(delta_bck(&f(p)).unwrap(), terms(&[(p, "1"), ("1", p)]));
        let chain = "I[(1,0)](N[(0,1)]{(0,1):N[(1,0)]})";
        let expect = terms(&[(chain, "1"), ("1", chain), ("I[(0,1)](N[(1,0)])", "I[(1,0)](N[(0,1)])")]);
        assert_eq!(delta_bck(&f(chain)).unwrap(), expect);
        assert!(delta_bck(&f("X^(1,0)")).is_err());
    }

    #[test]
    fn bck_matches_cut_enumeration() {
        let mut en = Enumerator::new(Workspace::new(2).with_caps(1, 1).bounds());
        for e in 0..=3 {
            for x in en.forests(e) {
                assert_eq!(delta_bck(&x).unwrap(), cuts(&x, None), "{x}");
            }
        }
    }

    #[test]
    fn dbck_examples() {
        let p = "I[(1,0)](N[(2,0)])";
        assert_eq!(delta_dbck(&ws(), &f(p)).unwrap().value, terms(&[(p, "1"), ("1", p)]));
        let bar = delta_dbck_bar(&ws(), &parse_tree("N[(0,0)]{(1,0):N[(0,0)]}", &ws()).unwrap()).value;
        let mut expect = terms(&[("1", "I[(1,0)](N[(0,0)])")]);
        for l in MultiIndex::with_total_at_most(2, 2) {
            let raised = Forest::single(Planted::new(EdgeLabel::plain(l.add(&MultiIndex::from_slice(&[1, 0]))), Tree::leaf(MultiIndex::zero(2))));
            expect.add_term((raised, Forest::poly(l.clone())), Q::new(One::one(), l.factorial()));
        }
        assert_eq!(bar, expect);
    }

    #[test]
    fn dbck_matches_cut_enumeration() {
        let w = Workspace::new(2).with_caps(1, 1).with_lmax(2);
        let mut en = Enumerator::new(w.bounds());
        for e in 0..=3 {
            for x in en.forests(e) {
                assert_eq!(delta_dbck(&w, &x).unwrap().value, cuts(&x, Some(2)), "{x}");
            }
        }
    }

    #[test]
    fn bck_hat_matches_cut_enumeration() {
        let single = |t: &Tree| ClassicalForest::single(t.clone());
        let chain = bplus(2, 1, &[dot(2, 0)]);
        let mut expect = Vect::zero();
        expect.add_term((single(&chain), ClassicalForest::unit()), q(1));
        expect.add_term((ClassicalForest::unit(), single(&chain)), q(1));
        expect.add_term((single(&dot(2, 1)), single(&dot(2, 0))), q(1));
        assert_eq!(delta_bck_hat(&single(&chain)).unwrap(), expect);

        let cherry = bplus(2, 1, &[dot(2, 0), dot(2, 0)]);
        let got = delta_bck_hat(&single(&cherry)).unwrap();
        assert_eq!(got.coeff(&(single(&bplus(2, 1, &[dot(2, 0)])), single(&dot(2, 0)))), q(2));
        assert_eq!(got.coeff(&(single(&dot(2, 1)), ClassicalForest::new(alloc::vec![dot(2, 0), dot(2, 0)]))), q(1));

        // Cut enumeration on the embedded forest, edges dropped and written trunk ⊗ pruned.
        let labels = [MultiIndex::unit(2, 0), MultiIndex::unit(2, 1)];
        for n in 1..=4 {
            for t in crate::classical::classical_trees(n, &labels) {
                let mut brute = Vect::zero();
                for ((pruned, trunk), c) in cuts(&Forest::single(embed_tree(&t)), None) {
                    let unembed = |x: &Forest| crate::classical::unembed_forest(x).unwrap();
                    brute.add_term((unembed(&trunk), unembed(&pruned)), c);
                }
                assert_eq!(delta_bck_hat(&single(&t)).unwrap(), brute, "{t}");
            }
        }
    }

    #[test]
    fn deshuffle_examples() {
        let p = "I[(1,0)](N[(0,0)])";
        assert_eq!(deshuffle_forest(&f(p)), terms(&[(p, "1"), ("1", p)]));
        let pq = "I[(1,0)](N[(0,0)])·I[(0,1)](N[(0,0)])";
        let expect = terms(&[(pq, "1"), ("1", pq), (p, "I[(0,1)](N[(0,0)])"), ("I[(0,1)](N[(0,0)])", p)]);
        assert_eq!(deshuffle_forest(&f(pq)), expect);
        let pp = "I[(1,0)](N[(0,0)])·I[(1,0)](N[(0,0)])";
        assert_eq!(deshuffle_forest(&f(pp)).coeff(&(f(p), f(p))), q(2));
    }

    fn coassociative(d: &dyn Fn(&Forest) -> Tensor, x: &Forest) -> bool {
        let mut left: Vect<(Forest, Forest, Forest)> = Vect::zero();
        let mut right: Vect<(Forest, Forest, Forest)> = Vect::zero();
        for ((a, b), c) in d(x) {
            for ((a1, a2), c1) in d(&a) {
                left.add_term((a1, a2, b.clone()), &c * c1);
            }
            for ((b1, b2), c2) in d(&b) {
                right.add_term((a.clone(), b1, b2), &c * c2);
            }
        }
        left == right
    }

    #[test]
    fn coproducts_are_coassociative() {
        let mut en = Enumerator::new(Workspace::new(2).with_caps(1, 1).bounds());
        for e in 0..=3 {
            for x in en.forests(e) {
                assert!(coassociative(&|y| delta_bck(y).unwrap(), &x), "{x}");
                assert!(coassociative(&deshuffle_forest, &x), "{x}");
            }
        }
    }
}
