use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::multiindex::{EdgeLabel, Kind, MultiIndex};
use crate::tree::{Forest, Planted, Tree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CoefficientMode {
    #[default]
    Exact,
    Float,
}

/// Global limits shared by every computation.
///
/// Decoration caps apply per component; the optional total caps additionally
/// bound `|n|` and `|a|` and are useful to keep exact linear algebra small.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Workspace {
    pub dim: usize,
    pub scaling: MultiIndex,
    pub kinds: u8,
    pub max_edges: usize,
    pub max_node_dec: u16,
    pub max_edge_shift: u16,
    pub max_node_total: Option<u32>,
    pub max_shift_total: Option<u32>,
    pub lmax: u32,
    pub mode: CoefficientMode,
}

impl Workspace {
    pub fn new(dim: usize) -> Self {
        Workspace {
            dim,
            scaling: MultiIndex::from_slice(&alloc::vec![1; dim]),
            kinds: 1,
            max_edges: 6,
            max_node_dec: 4,
            max_edge_shift: 4,
            max_node_total: None,
            max_shift_total: None,
            lmax: 4,
            mode: CoefficientMode::Exact,
        }
    }

    pub fn with_caps(mut self, node: u16, shift: u16) -> Self {
        self.max_node_dec = node;
        self.max_edge_shift = shift;
        self
    }

    pub fn with_total_caps(mut self, node: Option<u32>, shift: Option<u32>) -> Self {
        self.max_node_total = node;
        self.max_shift_total = shift;
        self
    }

    pub fn with_max_edges(mut self, n: usize) -> Self {
        self.max_edges = n;
        self
    }

    pub fn with_lmax(mut self, l: u32) -> Self {
        self.lmax = l;
        self
    }

    pub fn with_scaling(mut self, s: MultiIndex) -> Self {
        self.scaling = s;
        self
    }

    pub fn with_kinds(mut self, k: u8) -> Self {
        self.kinds = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Invalid("dimension must be positive".into()));
        }
        if self.scaling.dim() != self.dim || self.scaling.entries().contains(&0) {
            return Err(Error::Invalid("scaling must have d+1 positive entries".into()));
        }
        if self.kinds == 0 {
            return Err(Error::Invalid("at least one edge kind is required".into()));
        }
        Ok(())
    }

    pub fn node_ok(&self, n: &MultiIndex) -> bool {
        n.dim() == self.dim
            && n.max_entry() <= self.max_node_dec
            && self.max_node_total.is_none_or(|c| n.total() <= c)
    }

    pub fn label_ok(&self, e: &EdgeLabel) -> bool {
        e.shift.dim() == self.dim
            && e.kind.0 < self.kinds
            && e.shift.max_entry() <= self.max_edge_shift
            && self.max_shift_total.is_none_or(|c| e.shift.total() <= c)
    }

    /// Error for a vertex decoration produced by raising an existing one.
    pub fn check_raised_node(&self, n: &MultiIndex) -> Result<()> {
        if self.node_ok(n) {
            Ok(())
        } else {
            Err(Error::Overflow(format!("node decoration {n} exceeds the caps")))
        }
    }

    pub fn check_raised_label(&self, e: &EdgeLabel) -> Result<()> {
        if self.label_ok(e) {
            Ok(())
        } else {
            Err(Error::Overflow(format!("edge decoration {:?} exceeds the caps", e)))
        }
    }

    fn check_decorations(&self, t: &Tree) -> Result<()> {
        let mut bad = None;
        t.for_each_node(&mut |n| {
            if bad.is_none() && !self.node_ok(n) {
                bad = Some(format!("node decoration {n}"));
            }
        });
        t.for_each_edge(&mut |e| {
            if bad.is_none() && !self.label_ok(e) {
                bad = Some(format!("edge decoration {e:?}"));
            }
        });
        match bad {
            Some(msg) => Err(Error::Bounds(msg)),
            None => Ok(()),
        }
    }

    fn check_edges(&self, n: usize) -> Result<()> {
        if n > self.max_edges {
            Err(Error::Bounds(format!("{n} edges exceed the limit {}", self.max_edges)))
        } else {
            Ok(())
        }
    }

    pub fn check_tree(&self, t: &Tree) -> Result<()> {
        self.check_edges(t.edges())?;
        self.check_decorations(t)
    }

    pub fn check_planted(&self, p: &Planted) -> Result<()> {
        self.check_edges(p.edges())?;
        if !self.label_ok(&p.edge) {
            return Err(Error::Bounds(format!("edge decoration {:?}", p.edge)));
        }
        self.check_decorations(&p.body)
    }

    pub fn check_forest(&self, f: &Forest) -> Result<()> {
        self.check_edges(f.edges())?;
        if f.x().dim() != self.dim {
            return Err(Error::Bounds("polynomial part has the wrong dimension".into()));
        }
        for p in f.planted() {
            if !self.label_ok(&p.edge) {
                return Err(Error::Bounds(format!("edge decoration {:?}", p.edge)));
            }
            self.check_decorations(&p.body)?;
        }
        Ok(())
    }

    /// Error when a product would produce more edges than allowed.
    pub fn check_edge_count(&self, n: usize) -> Result<()> {
        if n > self.max_edges {
            Err(Error::Overflow(format!("result would have {n} edges, limit {}", self.max_edges)))
        } else {
            Ok(())
        }
    }

    /// The full set of decorations allowed by the caps.
    pub fn bounds(&self) -> Bounds {
        let node_box = MultiIndex::from_slice(&alloc::vec![self.max_node_dec; self.dim]);
        let shift_box = MultiIndex::from_slice(&alloc::vec![self.max_edge_shift; self.dim]);
        let node_decs = node_box.below().filter(|n| self.node_ok(n)).collect();
        let mut labels = Vec::new();
        for k in 0..self.kinds {
            for s in shift_box.below() {
                let e = EdgeLabel::new(Kind(k), s);
                if self.label_ok(&e) {
                    labels.push(e);
                }
            }
        }
        Bounds { node_decs, labels }
    }
}

/// Explicit decoration sets for enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub node_decs: Vec<MultiIndex>,
    pub labels: Vec<EdgeLabel>,
}

impl Bounds {
    /// One edge kind, zero shifts, zero node decorations.
    pub fn undecorated(dim: usize) -> Self {
        Bounds {
            node_decs: alloc::vec![MultiIndex::zero(dim)],
            labels: alloc::vec![EdgeLabel::plain(MultiIndex::zero(dim))],
        }
    }
}
