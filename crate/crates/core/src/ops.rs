//! Grafting products, decoration derivations and the post-Lie structure on `V`.

use core::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::multiindex::{EdgeLabel, MultiIndex};
use crate::tree::{Forest, Planted, Tree};
use crate::vect::{qi, Q, Vect};
use crate::workspace::Workspace;

/// `σ ↷^a τ`: graft `σ` onto every vertex of `τ` with a new edge labelled `a`.
pub fn graft(ws: &Workspace, sigma: &Tree, a: &EdgeLabel, tau: &Tree) -> Result<Vect<Tree>> {
    ws.check_edge_count(sigma.edges() + tau.edges() + 1)?;
    let branch = Planted::new(a.clone(), sigma.clone());
    tau.sum_over_vertices(&mut |u| Ok(Vect::basis(u.with_child(branch.clone()))))
}

/// `σ ĉ↷^a τ = Σ_v Σ_ℓ C(n_v, ℓ) σ ↷_v^{a−ℓ} (↑_v^{−ℓ} τ)`.
pub fn deformed_graft(ws: &Workspace, sigma: &Tree, a: &EdgeLabel, tau: &Tree) -> Result<Vect<Tree>> {
    ws.check_edge_count(sigma.edges() + tau.edges() + 1)?;
    tau.sum_over_vertices(&mut |u| {
        let n = u.dec();
        let mut out = Vect::zero();
        for l in n.min(&a.shift).below() {
            let (Some(m), Some(b)) = (n.checked_sub(&l), a.checked_sub(&l)) else { continue };
            let t = u.with_dec(m).with_child(Planted::new(b, sigma.clone()));
            out.add_term(t, qi(n.binomial(&l)));
        }
        Ok(out)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Grafting {
    Plain,
    Deformed,
}

/// A pre-Lie product on planted trees: `I_a(σ) ↷ I_b(τ) = I_b(σ ↷^a τ)`.
pub trait PreLie {
    fn workspace(&self) -> &Workspace;
    fn product(&self, x: &Planted, y: &Planted) -> Result<Vect<Planted>>;
}

#[derive(Clone, Debug)]
pub struct PreLieProduct {
    pub grafting: Grafting,
    pub ws: Workspace,
}

impl PreLieProduct {
    pub fn plain(ws: &Workspace) -> Self {
        PreLieProduct { grafting: Grafting::Plain, ws: ws.clone() }
    }

    pub fn deformed(ws: &Workspace) -> Self {
        PreLieProduct { grafting: Grafting::Deformed, ws: ws.clone() }
    }
}

impl PreLie for PreLieProduct {
    fn workspace(&self) -> &Workspace {
        &self.ws
    }

    fn product(&self, x: &Planted, y: &Planted) -> Result<Vect<Planted>> {
        planted_product(&self.ws, self.grafting, x, y)
    }
}

pub fn planted_product(ws: &Workspace, g: Grafting, x: &Planted, y: &Planted) -> Result<Vect<Planted>> {
    let inner = match g {
        Grafting::Plain => graft(ws, &x.body, &x.edge, &y.body)?,
        Grafting::Deformed => deformed_graft(ws, &x.body, &x.edge, &y.body)?,
    };
    Ok(inner.map_basis(|t| Planted::new(y.edge.clone(), t.clone())))
}

/// Bilinear extension of a pre-Lie product.
pub fn prelie_vect<P: PreLie + ?Sized>(p: &P, x: &Vect<Planted>, y: &Vect<Planted>) -> Result<Vect<Planted>> {
    x.bilinear(y, |a, b| p.product(a, b))
}

/// `↑^i τ`: add `e_i` to each vertex in turn, root included.
pub fn up_tree(ws: &Workspace, i: usize, tau: &Tree) -> Result<Vect<Tree>> {
    tau.sum_over_vertices(&mut |u| {
        let n = u.dec().add_unit(i);
        ws.check_raised_node(&n)?;
        Ok(Vect::basis(u.with_dec(n)))
    })
}

/// `↑^k τ` as the `k`-fold composite of the `↑^i`; equivalently `k` is
/// distributed over the vertices with multinomial weights.
pub fn up_tree_pow(ws: &Workspace, k: &MultiIndex, tau: &Tree) -> Result<Vect<Tree>> {
    let mut cur = Vect::basis(tau.clone());
    for i in 0..k.dim() {
        for _ in 0..k.get(i) {
            cur = cur.map_linear(|t| up_tree(ws, i, t))?;
        }
    }
    Ok(cur)
}

/// `↑^i` on a planted tree acts on the body only.
pub fn up_planted(ws: &Workspace, i: usize, p: &Planted) -> Result<Vect<Planted>> {
    Ok(up_tree(ws, i, &p.body)?.map_basis(|t| Planted::new(p.edge.clone(), t.clone())))
}

/// `↑^i` on a forest: a derivation over the planted components; a nonzero
/// polynomial part counts as one further vertex.
pub fn up_forest(ws: &Workspace, i: usize, f: &Forest) -> Result<Vect<Forest>> {
    let mut out = Vect::zero();
    for (j, p) in f.planted().iter().enumerate() {
        for (q, c) in up_planted(ws, i, p)? {
            out.add_term(f.replace(j, q), c);
        }
    }
    if !f.x().is_zero() {
        let k = f.x().add_unit(i);
        ws.check_raised_node(&k)?;
        out.add_term(f.with_x(k), Q::one());
    }
    Ok(out)
}

/// Which edges `𝒟^i` may lower.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeScope {
    /// Every edge including the plant edge.
    All,
    /// Edges of the body only.
    Body,
}

pub fn d_planted(i: usize, p: &Planted, scope: EdgeScope) -> Vect<Planted> {
    let mut lower = |e: &EdgeLabel| e.shift.sub_unit(i).map(|s| e.with_shift(s));
    match scope {
        EdgeScope::All => p.sum_over_edges(&mut lower),
        EdgeScope::Body => p.body.sum_over_edges(&mut lower).map_basis(|t| Planted::new(p.edge.clone(), t.clone())),
    }
}

/// `𝒟^i f = Σ_e 𝒟^i_e f`, lowering the `i`-th shift of one edge at a time.
pub fn d_forest(i: usize, f: &Forest, scope: EdgeScope) -> Vect<Forest> {
    let mut out = Vect::zero();
    for (j, p) in f.planted().iter().enumerate() {
        for (q, c) in d_planted(i, p, scope) {
            out.add_term(f.replace(j, q), c);
        }
    }
    out
}

pub fn d_tree(i: usize, t: &Tree) -> Vect<Tree> {
    t.sum_over_edges(&mut |e: &EdgeLabel| e.shift.sub_unit(i).map(|s| e.with_shift(s)))
}

/// Generators of `V`: polynomial letters `X_i` and planted trees.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VLetter {
    X(u8),
    P(Planted),
}

impl fmt::Debug for VLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VLetter::X(i) => write!(f, "X{i}"),
            VLetter::P(p) => write!(f, "{p}"),
        }
    }
}

/// `[·,·]_0`: vanishes on planted×planted and X×X, `[I_a(τ), X_i]_0 = I_{a−e_i}(τ)`.
pub fn bracket0_letters(x: &VLetter, y: &VLetter) -> Vect<VLetter> {
    match (x, y) {
        (VLetter::P(p), VLetter::X(i)) => shift_down(p, *i as usize).map_or_else(Vect::zero, |q| Vect::basis(VLetter::P(q))),
        (VLetter::X(i), VLetter::P(p)) => {
            shift_down(p, *i as usize).map_or_else(Vect::zero, |q| Vect::term(VLetter::P(q), -Q::one()))
        }
        _ => Vect::zero(),
    }
}

/// `I_a(τ) ↦ I_{a−e_i}(τ)`, if defined.
pub fn shift_down(p: &Planted, i: usize) -> Option<Planted> {
    p.edge.shift.sub_unit(i).map(|s| Planted::new(p.edge.with_shift(s), p.body.clone()))
}

pub fn bracket0(x: &Vect<VLetter>, y: &Vect<VLetter>) -> Vect<VLetter> {
    x.bilinear(y, |a, b| Ok::<_, Error>(bracket0_letters(a, b))).unwrap_or_default()
}

/// `▷̂` on generators.
pub fn post_product_letters(ws: &Workspace, x: &VLetter, y: &VLetter) -> Result<Vect<VLetter>> {
    match (x, y) {
        (VLetter::X(i), VLetter::P(p)) => Ok(up_planted(ws, *i as usize, p)?.map_basis(|q| VLetter::P(q.clone()))),
        (VLetter::P(p), VLetter::P(q)) => {
            Ok(planted_product(ws, Grafting::Deformed, p, q)?.map_basis(|r| VLetter::P(r.clone())))
        }
        _ => Ok(Vect::zero()),
    }
}

pub fn post_product(ws: &Workspace, x: &Vect<VLetter>, y: &Vect<VLetter>) -> Result<Vect<VLetter>> {
    x.bilinear(y, |a, b| post_product_letters(ws, a, b))
}

/// `[[x, y]] = x ▷̂ y − y ▷̂ x + [x, y]_0`.
pub fn post_bracket(ws: &Workspace, x: &Vect<VLetter>, y: &Vect<VLetter>) -> Result<Vect<VLetter>> {
    let mut out = post_product(ws, x, y)?;
    out -= &post_product(ws, y, x)?;
    out += &bracket0(x, y);
    Ok(out)
}
