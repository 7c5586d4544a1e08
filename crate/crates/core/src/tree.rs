//! Canonical decorated trees, planted trees and forests.
//!
//! A tree with root decoration `k` and children `I_{a_i}(τ_i)` is the same data
//! as the monomial `X^k · ∏ I_{a_i}(τ_i)`; [`Tree`] and [`Forest`] convert freely.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::multiindex::{EdgeLabel, MultiIndex};
use crate::vect::Vect;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tree {
    dec: MultiIndex,
    children: Vec<Planted>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Planted {
    pub edge: EdgeLabel,
    pub body: Tree,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Forest {
    planted: Vec<Planted>,
    poly: MultiIndex,
}

impl Tree {
    pub fn leaf(dec: MultiIndex) -> Tree {
        Tree { dec, children: Vec::new() }
    }

    pub fn new(dec: MultiIndex, mut children: Vec<Planted>) -> Tree {
        children.sort();
        Tree { dec, children }
    }

    pub fn dec(&self) -> &MultiIndex {
        &self.dec
    }

    pub fn children(&self) -> &[Planted] {
        &self.children
    }

    pub fn dim(&self) -> usize {
        self.dec.dim()
    }

    pub fn with_dec(&self, dec: MultiIndex) -> Tree {
        Tree { dec, children: self.children.clone() }
    }

    /// Attach one more child at the root.
    pub fn with_child(&self, p: Planted) -> Tree {
        let pos = self.children.partition_point(|c| c <= &p);
        let mut children = self.children.clone();
        children.insert(pos, p);
        Tree { dec: self.dec.clone(), children }
    }

    pub fn nodes(&self) -> usize {
        1 + self.children.iter().map(|c| c.body.nodes()).sum::<usize>()
    }

    pub fn edges(&self) -> usize {
        self.children.iter().map(|c| 1 + c.body.edges()).sum()
    }

    /// `Σ_e |shift(e)|_s` over the edges of the tree.
    pub fn weighted_grade(&self, s: &MultiIndex) -> u32 {
        self.children.iter().map(|c| c.weighted_grade(s)).sum()
    }

    /// `Σ_v |n_v|_s` over the vertices.
    pub fn weighted_node_total(&self, s: &MultiIndex) -> u32 {
        self.dec.weighted(s) + self.children.iter().map(|c| c.body.weighted_node_total(s)).sum::<u32>()
    }

    pub fn max_node_dec(&self) -> u16 {
        self.children.iter().map(|c| c.body.max_node_dec()).fold(self.dec.max_entry(), u16::max)
    }

    pub fn max_edge_shift(&self) -> u16 {
        self.children.iter().map(|c| c.max_edge_shift()).max().unwrap_or(0)
    }

    pub fn max_node_total(&self) -> u32 {
        self.children.iter().map(|c| c.body.max_node_total()).fold(self.dec.total(), u32::max)
    }

    pub fn max_shift_total(&self) -> u32 {
        self.children.iter().map(|c| c.max_shift_total()).max().unwrap_or(0)
    }

    pub fn depth(&self) -> usize {
        self.children.iter().map(|c| 1 + c.body.depth()).max().unwrap_or(0)
    }

    /// `S(τ) = n_root! · ∏_{distinct children} S(child)^m · m!`.
    pub fn symmetry_factor(&self) -> BigInt {
        let mut acc = self.dec.factorial();
        for (child, m) in runs(&self.children) {
            let s = child.body.symmetry_factor();
            for j in 1..=m as u64 {
                acc *= &s;
                acc *= j;
            }
        }
        acc
    }

    pub fn into_forest(self) -> Forest {
        Forest { planted: self.children, poly: self.dec }
    }

    pub fn to_forest(&self) -> Forest {
        self.clone().into_forest()
    }

    pub fn plant(self, edge: EdgeLabel) -> Planted {
        Planted { edge, body: self }
    }

    /// `Σ_v g(subtree at v)` with the result of `g` substituted back in place.
    pub fn sum_over_vertices<E>(
        &self,
        g: &mut impl FnMut(&Tree) -> Result<Vect<Tree>, E>,
    ) -> Result<Vect<Tree>, E> {
        let mut out = g(self)?;
        for j in 0..self.children.len() {
            let inner = self.children[j].body.sum_over_vertices(g)?;
            for (t, c) in inner {
                let mut children = self.children.clone();
                children[j].body = t;
                out.add_term(Tree::new(self.dec.clone(), children), c);
            }
        }
        Ok(out)
    }

    /// `Σ_e` of edge relabellings `g(label)`, over edges strictly inside the tree.
    pub fn sum_over_edges(&self, g: &mut impl FnMut(&EdgeLabel) -> Option<EdgeLabel>) -> Vect<Tree> {
        let mut out = Vect::zero();
        for j in 0..self.children.len() {
            for (p, c) in self.children[j].sum_over_edges(g) {
                let mut children = self.children.clone();
                children[j] = p;
                out.add_term(Tree::new(self.dec.clone(), children), c);
            }
        }
        out
    }

    /// Visit every vertex decoration.
    pub fn for_each_node(&self, f: &mut impl FnMut(&MultiIndex)) {
        f(&self.dec);
        for c in &self.children {
            c.body.for_each_node(f);
        }
    }

    /// Visit every edge label.
    pub fn for_each_edge(&self, f: &mut impl FnMut(&EdgeLabel)) {
        for c in &self.children {
            f(&c.edge);
            c.body.for_each_edge(f);
        }
    }
}

impl Planted {
    pub fn new(edge: EdgeLabel, body: Tree) -> Planted {
        Planted { edge, body }
    }

    pub fn edges(&self) -> usize {
        1 + self.body.edges()
    }

    pub fn weighted_grade(&self, s: &MultiIndex) -> u32 {
        self.edge.shift.weighted(s) + self.body.weighted_grade(s)
    }

    pub fn max_edge_shift(&self) -> u16 {
        self.edge.shift.max_entry().max(self.body.max_edge_shift())
    }

    pub fn max_shift_total(&self) -> u32 {
        self.edge.shift.total().max(self.body.max_shift_total())
    }

    pub fn symmetry_factor(&self) -> BigInt {
        self.body.symmetry_factor()
    }

    /// Edge relabellings summed over all edges including the plant edge.
    pub fn sum_over_edges(&self, g: &mut impl FnMut(&EdgeLabel) -> Option<EdgeLabel>) -> Vect<Planted> {
        let mut out = Vect::zero();
        if let Some(e) = g(&self.edge) {
            out.add_term(Planted::new(e, self.body.clone()), One::one());
        }
        for (t, c) in self.body.sum_over_edges(g) {
            out.add_term(Planted::new(self.edge.clone(), t), c);
        }
        out
    }
}

impl Forest {
    pub fn unit(dim: usize) -> Forest {
        Forest { planted: Vec::new(), poly: MultiIndex::zero(dim) }
    }

    pub fn new(mut planted: Vec<Planted>, poly: MultiIndex) -> Forest {
        planted.sort();
        Forest { planted, poly }
    }

    pub fn single(p: Planted) -> Forest {
        let dim = p.body.dim();
        Forest { planted: alloc::vec![p], poly: MultiIndex::zero(dim) }
    }

    pub fn poly(poly: MultiIndex) -> Forest {
        Forest { planted: Vec::new(), poly }
    }

    pub fn planted(&self) -> &[Planted] {
        &self.planted
    }

    pub fn x(&self) -> &MultiIndex {
        &self.poly
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    pub fn is_unit(&self) -> bool {
        self.planted.is_empty() && self.poly.is_zero()
    }

    /// No polynomial part, i.e. an element of `S(P)`.
    pub fn is_planted_only(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn len(&self) -> usize {
        self.planted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.planted.is_empty()
    }

    pub fn edges(&self) -> usize {
        self.planted.iter().map(|p| p.edges()).sum()
    }

    pub fn weighted_grade(&self, s: &MultiIndex) -> u32 {
        self.planted.iter().map(|p| p.weighted_grade(s)).sum()
    }

    pub fn mul(&self, other: &Forest) -> Forest {
        let mut planted = Vec::with_capacity(self.planted.len() + other.planted.len());
        planted.extend(self.planted.iter().cloned());
        planted.extend(other.planted.iter().cloned());
        Forest::new(planted, self.poly.add(&other.poly))
    }

    pub fn with_x(&self, poly: MultiIndex) -> Forest {
        Forest { planted: self.planted.clone(), poly }
    }

    pub fn without_x(&self) -> Forest {
        Forest { planted: self.planted.clone(), poly: MultiIndex::zero(self.dim()) }
    }

    /// Remove the `i`-th planted component.
    pub fn without(&self, i: usize) -> Forest {
        let mut planted = self.planted.clone();
        planted.remove(i);
        Forest { planted, poly: self.poly.clone() }
    }

    /// Replace the `i`-th planted component.
    pub fn replace(&self, i: usize, p: Planted) -> Forest {
        let mut planted = self.planted.clone();
        planted[i] = p;
        Forest::new(planted, self.poly.clone())
    }

    pub fn as_tree(&self) -> Tree {
        Tree { dec: self.poly.clone(), children: self.planted.clone() }
    }

    pub fn into_tree(self) -> Tree {
        Tree { dec: self.poly, children: self.planted }
    }

    /// `S(f) = k! · ∏_{distinct components} S(p)^m · m!`.
    pub fn symmetry_factor(&self) -> BigInt {
        self.as_tree().symmetry_factor()
    }

    /// Distinct planted components with multiplicities.
    pub fn runs(&self) -> Vec<(&Planted, usize)> {
        runs(&self.planted)
    }
}

fn runs(items: &[Planted]) -> Vec<(&Planted, usize)> {
    let mut out: Vec<(&Planted, usize)> = Vec::new();
    for p in items {
        match out.last_mut() {
            Some((q, m)) if *q == p => *m += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

impl From<Planted> for Forest {
    fn from(p: Planted) -> Forest {
        Forest::single(p)
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N[{}]", self.dec)?;
        if !self.children.is_empty() {
            f.write_str("{")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                crate::parse::write_label(f, &c.edge)?;
                write!(f, ":{}", c.body)?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Planted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("I[")?;
        crate::parse::write_label(f, &self.edge)?;
        write!(f, "]({})", self.body)
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        let mut first = true;
        for p in &self.planted {
            if !first {
                f.write_str("·")?;
            }
            first = false;
            write!(f, "{p}")?;
        }
        if !self.poly.is_zero() {
            if !first {
                f.write_str("·")?;
            }
            write!(f, "X^{}", self.poly)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Debug for Planted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::Enumerator;
    use crate::parse::{parse_forest, parse_tree};
    use crate::workspace::Workspace;

    /// Flattened nodes: (decoration, parent, label of the edge to the parent).
    fn flatten(t: &Tree, parent: Option<(usize, EdgeLabel)>, out: &mut Vec<(MultiIndex, Option<(usize, EdgeLabel)>)>) {
        let me = out.len();
        out.push((t.dec().clone(), parent));
        for c in t.children() {
            flatten(&c.body, Some((me, c.edge.clone())), out);
        }
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return alloc::vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for at in 0..n {
                let mut q = p.clone();
                q.insert(at, n - 1);
                out.push(q);
            }
        }
        out
    }

    /// `|Aut(τ)| · ∏_v 𝔫_v!` by trying every vertex permutation.
    fn brute_symmetry(t: &Tree) -> BigInt {
        let mut nodes = Vec::new();
        flatten(t, None, &mut nodes);
        let mut aut = 0u64;
        for p in permutations(nodes.len()) {
            let ok = nodes.iter().enumerate().all(|(v, (dec, parent))| {
                let (dec2, parent2) = &nodes[p[v]];
                dec == dec2
                    && match (parent, parent2) {
                        (None, None) => true,
                        (Some((u, a)), Some((u2, b))) => p[*u] == *u2 && a == b,
                        _ => false,
                    }
            });
            aut += ok as u64;
        }
        nodes.iter().fold(BigInt::from(aut), |acc, (d, _)| acc * d.factorial())
    }

    fn ws() -> Workspace {
        Workspace::new(2).with_caps(2, 2)
    }

    #[test]
    fn symmetry_factor_examples() {
        let s = |x: &str| parse_forest(x, &ws()).unwrap().symmetry_factor();
        assert_eq!(parse_tree("N[(0,0)]", &ws()).unwrap().symmetry_factor(), BigInt::from(1));
        assert_eq!(parse_tree("N[(0,0)]{(1,0):N[(0,0)],(1,0):N[(0,0)]}", &ws()).unwrap().symmetry_factor(), BigInt::from(2));
        assert_eq!(s("I[(1,0)](N[(0,0)])·I[(1,0)](N[(0,0)])"), BigInt::from(2));
        assert_eq!(s("I[(1,0)](N[(2,0)])·X^(0,2)"), BigInt::from(4));
        assert_eq!(s("I[(1,0)](N[(0,0)])·I[(0,1)](N[(0,0)])"), BigInt::from(1));
    }

    #[test]
    fn symmetry_factor_matches_automorphism_count() {
        let mut en = Enumerator::new(Workspace::new(2).with_caps(1, 1).bounds());
        for e in 0..=3 {
            for t in en.trees(e).to_vec() {
                assert_eq!(t.symmetry_factor(), brute_symmetry(&t), "{t}");
            }
        }
        let mut en = Enumerator::new(crate::workspace::Bounds::undecorated(1));
        for t in en.trees(5).to_vec() {
            assert_eq!(t.symmetry_factor(), brute_symmetry(&t), "{t}");
        }
    }

    #[test]
    fn grades() {
        let s = MultiIndex::from_slice(&[2, 1]);
        assert_eq!(Forest::unit(2).edges(), 0);
        let f = parse_forest("I[(1,0)](N[(0,0)]{(0,1):N[(0,0)]})", &ws()).unwrap();
        assert_eq!(f.edges(), 2);
        assert_eq!(f.weighted_grade(&s), 3);
    }
}
