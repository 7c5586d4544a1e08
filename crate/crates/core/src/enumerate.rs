//! Exhaustive, duplicate-free enumeration of canonical trees and forests.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::tree::{Forest, Planted, Tree};
use crate::workspace::{Bounds, Workspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    EdgeCount,
    Weighted,
}

/// Caches trees and planted trees by edge count for a fixed set of decorations.
pub struct Enumerator {
    bounds: Bounds,
    trees: Vec<Vec<Tree>>,
    planted: Vec<Vec<Planted>>,
}

impl Enumerator {
    pub fn new(bounds: Bounds) -> Self {
        Enumerator { bounds, trees: Vec::new(), planted: Vec::new() }
    }

    pub fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn extend_to(&mut self, n: usize) {
        while self.trees.len() <= n {
            let m = self.trees.len();
            let planted: Vec<Planted> = if m == 0 {
                Vec::new()
            } else {
                let mut v = Vec::new();
                for e in &self.bounds.labels {
                    for t in &self.trees[m - 1] {
                        v.push(Planted::new(e.clone(), t.clone()));
                    }
                }
                v.sort();
                v
            };
            self.planted.push(planted);
            let multisets = self.planted_multisets(m);
            let mut trees = Vec::new();
            for d in &self.bounds.node_decs {
                for ms in &multisets {
                    trees.push(Tree::new(d.clone(), ms.clone()));
                }
            }
            trees.sort();
            self.trees.push(trees);
        }
    }

    /// Nondecreasing sequences of planted trees with `n` edges in total.
    fn planted_multisets(&self, n: usize) -> Vec<Vec<Planted>> {
        let pool: Vec<&Planted> = {
            let mut all: Vec<&Planted> = self.planted.iter().take(n + 1).flatten().collect();
            all.sort();
            all
        };
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec<'a>(
            pool: &[&'a Planted],
            start: usize,
            remaining: usize,
            cur: &mut Vec<&'a Planted>,
            out: &mut Vec<Vec<Planted>>,
        ) {
            if remaining == 0 {
                out.push(cur.iter().map(|p| (*p).clone()).collect());
                return;
            }
            for i in start..pool.len() {
                let e = pool[i].edges();
                if e <= remaining {
                    cur.push(pool[i]);
                    rec(pool, i, remaining - e, cur, out);
                    cur.pop();
                }
            }
        }
        rec(&pool, 0, n, &mut cur, &mut out);
        out
    }

    pub fn trees(&mut self, edges: usize) -> &[Tree] {
        self.extend_to(edges);
        &self.trees[edges]
    }

    pub fn planted(&mut self, edges: usize) -> &[Planted] {
        self.extend_to(edges);
        &self.planted[edges]
    }

    /// Forests of `S(P)` (no polynomial part) with exactly `edges` edges.
    pub fn forests(&mut self, edges: usize) -> Vec<Forest> {
        self.extend_to(edges);
        let dim = self.dim();
        let mut v: Vec<Forest> =
            self.planted_multisets(edges).into_iter().map(|ps| Forest::new(ps, MultiIndex::zero(dim))).collect();
        v.sort();
        v
    }

    fn dim(&self) -> usize {
        self.bounds.node_decs.first().map(|m| m.dim()).or_else(|| self.bounds.labels.first().map(|e| e.shift.dim())).unwrap_or(0)
    }
}

/// Forests of the given grade within `bounds`.
///
/// For the weighted scheme the edge count is limited by `ws.max_edges`.
pub fn enumerate_forests(n: usize, scheme: Scheme, bounds: &Bounds, ws: &Workspace) -> Result<Vec<Forest>> {
    let mut en = Enumerator::new(bounds.clone());
    match scheme {
        Scheme::EdgeCount => {
            if n > ws.max_edges {
                return Err(Error::Bounds(alloc::format!("grade {n} exceeds max edges {}", ws.max_edges)));
            }
            Ok(en.forests(n))
        }
        Scheme::Weighted => {
            let mut out = Vec::new();
            for e in 0..=ws.max_edges {
                out.extend(en.forests(e).into_iter().filter(|f| f.weighted_grade(&ws.scaling) as usize == n));
            }
            out.sort();
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undecorated_counts() {
        let mut en = Enumerator::new(Bounds::undecorated(1));
        let sizes: Vec<usize> = (1..=5).map(|n| en.forests(n).len()).collect();
        assert_eq!(sizes, [1, 2, 4, 9, 20]);
        let planted: Vec<usize> = (1..=5).map(|n| en.planted(n).len()).collect();
        assert_eq!(planted, [1, 1, 2, 4, 9]);
    }

    #[test]
    fn listings_are_sorted_and_unique() {
        let ws = Workspace::new(2).with_caps(1, 1);
        let mut en = Enumerator::new(ws.bounds());
        for n in 0..=2 {
            let f = en.forests(n);
            assert!(f.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
