//! Node-decorated trees with undecorated edges, as used for branched rough paths.
//!
//! A forest here is a commutative product of whole trees. Such a tree embeds
//! into planted trees by moving each vertex decoration onto the edge above it,
//! which turns the classical cut coproduct into the planted one.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::enumerate::Enumerator;
use crate::error::{Error, Result};
use crate::multiindex::{EdgeLabel, MultiIndex};
use crate::parse::Parser;
use crate::tree::{Forest, Planted, Tree};
use crate::workspace::{Bounds, Workspace};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassicalForest(Vec<Tree>);

impl ClassicalForest {
    pub fn unit() -> Self {
        ClassicalForest(Vec::new())
    }

    pub fn single(t: Tree) -> Self {
        ClassicalForest(alloc::vec![t])
    }

    pub fn new(mut trees: Vec<Tree>) -> Self {
        trees.sort();
        ClassicalForest(trees)
    }

    pub fn trees(&self) -> &[Tree] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Self::new(v)
    }

    pub fn nodes(&self) -> usize {
        self.0.iter().map(|t| t.nodes()).sum()
    }

    pub fn check_classical(&self) -> Result<()> {
        for t in &self.0 {
            let mut ok = true;
            t.for_each_edge(&mut |e| ok &= e.kind.0 == 0 && e.shift.is_zero());
            if !ok {
                return Err(Error::Invalid("classical trees carry no edge decorations".into()));
            }
        }
        Ok(())
    }

    pub fn symmetry_factor(&self) -> BigInt {
        let mut acc = BigInt::one();
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            let s = self.0[i].symmetry_factor();
            for m in 1..=(j - i) as u64 {
                acc *= &s;
                acc *= m;
            }
            i = j;
        }
        acc
    }

    pub fn parse(text: &str, ws: &Workspace) -> Result<Self> {
        if text.trim() == "1" {
            return Ok(Self::unit());
        }
        let mut p = Parser::new(text, ws.dim);
        let mut trees = alloc::vec![p.tree()?];
        while p.eat_separator() {
            trees.push(p.tree()?);
        }
        p.end()?;
        let f = Self::new(trees);
        f.check_classical()?;
        for t in f.trees() {
            ws.check_tree(t)?;
        }
        Ok(f)
    }

    pub fn embed(&self) -> Forest {
        let dim = self.0.first().map(|t| t.dim()).unwrap_or(0);
        Forest::new(self.0.iter().map(embed_tree).collect(), MultiIndex::zero(dim))
    }
}

/// `•_n` with children `τ_j` becomes `I_n(N_0{embed(τ_j)})`.
pub fn embed_tree(t: &Tree) -> Planted {
    let dim = t.dim();
    let children = t.children().iter().map(|c| embed_tree(&c.body)).collect();
    Planted::new(EdgeLabel::plain(t.dec().clone()), Tree::new(MultiIndex::zero(dim), children))
}

/// Inverse of [`embed_tree`]; `None` unless node decorations vanish and kinds are default.
pub fn unembed_planted(p: &Planted) -> Option<Tree> {
    if !p.body.dec().is_zero() || p.edge.kind.0 != 0 {
        return None;
    }
    let dim = p.body.dim();
    let zero = EdgeLabel::plain(MultiIndex::zero(dim));
    let mut children = Vec::new();
    for c in p.body.children() {
        children.push(Planted::new(zero.clone(), unembed_planted(c)?));
    }
    Some(Tree::new(p.edge.shift.clone(), children))
}

pub fn unembed_forest(f: &Forest) -> Option<ClassicalForest> {
    if !f.is_planted_only() {
        return None;
    }
    let mut trees = Vec::new();
    for p in f.planted() {
        trees.push(unembed_planted(p)?);
    }
    Some(ClassicalForest::new(trees))
}

/// Decoration sets whose planted trees are exactly the embeddings of classical
/// trees with vertex labels in `labels`.
pub fn embedded_bounds(labels: &[MultiIndex]) -> Bounds {
    let dim = labels.first().map(|m| m.dim()).unwrap_or(1);
    Bounds { node_decs: alloc::vec![MultiIndex::zero(dim)], labels: labels.iter().cloned().map(EdgeLabel::plain).collect() }
}

/// Classical trees with `n` vertices and labels in `labels`.
pub fn classical_trees(n: usize, labels: &[MultiIndex]) -> Vec<Tree> {
    if n == 0 {
        return Vec::new();
    }
    let mut en = Enumerator::new(embedded_bounds(labels));
    let mut v: Vec<Tree> = en.planted(n).iter().filter_map(unembed_planted).collect();
    v.sort();
    v
}

/// Classical forests with `n` vertices in total.
pub fn classical_forests(n: usize, labels: &[MultiIndex]) -> Vec<ClassicalForest> {
    let mut en = Enumerator::new(embedded_bounds(labels));
    let mut v: Vec<ClassicalForest> = en.forests(n).iter().filter_map(unembed_forest).collect();
    v.sort();
    v
}

/// `•_i` for the unit multi-index `e_i`.
pub fn dot(dim: usize, i: usize) -> Tree {
    Tree::leaf(MultiIndex::unit(dim, i))
}

/// `[τ_1 … τ_k]_i`: a root labelled `e_i` carrying the given subtrees.
pub fn bplus(dim: usize, i: usize, children: &[Tree]) -> Tree {
    let zero = EdgeLabel::plain(MultiIndex::zero(dim));
    Tree::new(MultiIndex::unit(dim, i), children.iter().map(|c| Planted::new(zero.clone(), c.clone())).collect())
}

impl fmt::Display for ClassicalForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.0.iter().map(|t| alloc::format!("{t}")).collect();
        f.write_str(&parts.join("·"))
    }
}

impl fmt::Debug for ClassicalForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
