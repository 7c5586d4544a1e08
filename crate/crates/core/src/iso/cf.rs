//! Chapoton–Foissy letters and the decomposition of forests into ★-words.
//!
//! Planted trees of a fixed component span the primitive Lie algebra there.
//! Its derived part is spanned by brackets `[b, q]` of a letter `b` of lower
//! component with a planted tree `q`; letters of the component are the
//! planted trees, in enumeration order, that are not already in the span.
//!
//! The same engine runs for the plain product with letters `ℬ` and for the
//! deformed product with letters `Φ(ℬ)`; both share letter indices.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use num_traits::One;
use smallvec::SmallVec;

use crate::enumerate::Enumerator;
use crate::error::{Error, Result};
use crate::ops::{Grafting, PreLie, PreLieProduct};
use crate::tree::{Forest, Planted, Tree};
use crate::vect::{Q, Vect};
use crate::word::{concat_vect, Letter, Word};
use crate::workspace::{Bounds, Workspace};

use super::theta::Theta;

pub type WordVect = Vect<Word<Letter>>;

/// Quantities preserved by both grafting products: the edge count, the
/// number of edges of each kind, and per direction `Σ shift − Σ node`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    pub edges: u16,
    pub kinds: SmallVec<[u16; 4]>,
    pub balance: SmallVec<[i32; 4]>,
}

impl Component {
    pub fn zero(dim: usize, kinds: usize) -> Self {
        Component { edges: 0, kinds: SmallVec::from_elem(0, kinds), balance: SmallVec::from_elem(0, dim) }
    }

    pub fn of_planted(p: &Planted, kinds: usize) -> Self {
        let mut c = Component::zero(p.body.dim(), kinds);
        c.add_edge(&p.edge);
        c.add_tree(&p.body);
        c
    }

    pub fn of_forest(f: &Forest, kinds: usize) -> Self {
        let mut c = Component::zero(f.dim(), kinds);
        for p in f.planted() {
            c = c.add(&Component::of_planted(p, kinds));
        }
        c
    }

    fn add_edge(&mut self, e: &crate::EdgeLabel) {
        self.edges += 1;
        self.kinds[e.kind.0 as usize] += 1;
        for (b, s) in self.balance.iter_mut().zip(e.shift.entries()) {
            *b += *s as i32;
        }
    }

    fn add_tree(&mut self, t: &Tree) {
        for (b, n) in self.balance.iter_mut().zip(t.dec().entries()) {
            *b -= *n as i32;
        }
        for c in t.children() {
            self.add_edge(&c.edge);
            self.add_tree(&c.body);
        }
    }

    pub fn add(&self, o: &Component) -> Component {
        Component {
            edges: self.edges + o.edges,
            kinds: self.kinds.iter().zip(&o.kinds).map(|(a, b)| a + b).collect(),
            balance: self.balance.iter().zip(&o.balance).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn checked_sub(&self, o: &Component) -> Option<Component> {
        let edges = self.edges.checked_sub(o.edges)?;
        let mut kinds = SmallVec::new();
        for (a, b) in self.kinds.iter().zip(&o.kinds) {
            kinds.push(a.checked_sub(*b)?);
        }
        let balance = self.balance.iter().zip(&o.balance).map(|(a, b)| a - b).collect();
        Some(Component { edges, kinds, balance })
    }
}

impl fmt::Debug for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}e{:?}{:?}", self.edges, self.kinds.as_slice(), self.balance.as_slice())
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Gen {
    Letter(u32),
    Bracket(u32, Planted),
}

struct Part {
    echelon: crate::linalg::Echelon<Planted, Gen>,
    letters: Vec<u32>,
}

struct Side {
    parts: BTreeMap<Component, Part>,
    planted_memo: BTreeMap<Planted, WordVect>,
    forest_memo: BTreeMap<Forest, WordVect>,
}

struct State {
    enumerator: Enumerator,
    buckets: Vec<BTreeMap<Component, Vec<Planted>>>,
    letters: Vec<(Component, Vect<Planted>)>,
    deformed_letters: Vec<Vect<Planted>>,
    plain: Side,
    deformed: Side,
}

/// Lazily built Chapoton–Foissy letters together with `Ψ_CF`, both routes
/// to `Ψ_Φ`, and the deformation isomorphism they rely on.
///
/// Letters are numbered in the order their components are first needed;
/// call [`CfBasis::build`] first to number them by grade.
pub struct CfBasis {
    ws: Workspace,
    theta: Theta,
    state: RefCell<State>,
}

fn side() -> Side {
    Side {
        parts: BTreeMap::new(),
        planted_memo: BTreeMap::new(),
        forest_memo: BTreeMap::new(),
    }
}

impl CfBasis {
    pub fn new(ws: &Workspace) -> Self {
        Self::with_bounds(ws, ws.bounds())
    }

    /// Letters are drawn from planted trees with decorations in `bounds` only.
    pub fn with_bounds(ws: &Workspace, bounds: Bounds) -> Self {
        CfBasis {
            ws: ws.clone(),
            theta: Theta::new(ws),
            state: RefCell::new(State {
                enumerator: Enumerator::new(bounds),
                buckets: Vec::new(),
                letters: Vec::new(),
                deformed_letters: Vec::new(),
                plain: side(),
                deformed: side(),
            }),
        }
    }

    pub fn workspace(&self) -> &Workspace {
        &self.ws
    }

    pub fn theta(&self) -> &Theta {
        &self.theta
    }

    fn kinds(&self) -> usize {
        self.ws.kinds as usize
    }

    pub fn component_of(&self, p: &Planted) -> Component {
        Component::of_planted(p, self.kinds())
    }

    fn bucket(st: &mut State, edges: usize, kinds: usize) -> &BTreeMap<Component, Vec<Planted>> {
        while st.buckets.len() <= edges {
            let g = st.buckets.len();
            let mut m: BTreeMap<Component, Vec<Planted>> = BTreeMap::new();
            for p in st.enumerator.planted(g) {
                m.entry(Component::of_planted(p, kinds)).or_default().push(p.clone());
            }
            st.buckets.push(m);
        }
        &st.buckets[edges]
    }

    /// Planted trees of one component, in enumeration order.
    pub fn planted_in(&self, c: &Component) -> Vec<Planted> {
        let mut st = self.state.borrow_mut();
        Self::bucket(&mut st, c.edges as usize, self.kinds()).get(c).cloned().unwrap_or_default()
    }

    /// Components with `edges` edges that contain at least one planted tree.
    pub fn components(&self, edges: usize) -> Vec<Component> {
        let mut st = self.state.borrow_mut();
        Self::bucket(&mut st, edges, self.kinds()).keys().cloned().collect()
    }

    fn ensure(&self, c: &Component, g: Grafting) -> Result<()> {
        {
            let st = self.state.borrow();
            let s = if g == Grafting::Plain { &st.plain } else { &st.deformed };
            if s.parts.contains_key(c) {
                return Ok(());
            }
        }
        if g == Grafting::Deformed {
            self.ensure(c, Grafting::Plain)?;
        }
        self.build_part(c, g)
    }

    fn build_part(&self, c: &Component, g: Grafting) -> Result<()> {
        // Letters of every strictly smaller component first.
        let mut lower = Vec::new();
        for e in 1..c.edges as usize {
            for c1 in self.components(e) {
                if let Some(c2) = c.checked_sub(&c1) {
                    if !self.planted_in(&c2).is_empty() {
                        lower.push((c1, c2));
                    }
                }
            }
        }
        for (c1, _) in &lower {
            self.ensure(c1, g)?;
        }
        let mut echelon = crate::linalg::Echelon::new();
        for (c1, c2) in &lower {
            let qs = self.planted_in(c2);
            let ids: Vec<u32> = self.part_letters(c1, g);
            for b in ids {
                let bv = self.letter_value(b, g);
                for q in &qs {
                    let v = self.bracket(g, &bv, &Vect::basis(q.clone()))?;
                    echelon.insert(&v, Gen::Bracket(b, q.clone()));
                }
            }
        }
        let mut letters = Vec::new();
        match g {
            Grafting::Plain => {
                for p in self.planted_in(c) {
                    let v = Vect::basis(p.clone());
                    if !echelon.contains(&v) {
                        let id = {
                            let mut st = self.state.borrow_mut();
                            st.letters.push((c.clone(), v.clone()));
                            (st.letters.len() - 1) as u32
                        };
                        echelon.insert(&v, Gen::Letter(id));
                        letters.push(id);
                    }
                }
            }
            Grafting::Deformed => {
                for id in self.part_letters(c, Grafting::Plain) {
                    let v = self.letter_value(id, Grafting::Deformed);
                    if !echelon.insert(&v, Gen::Letter(id)) {
                        return Err(Error::RankDeficiency {
                            grade: c.edges as usize,
                            msg: alloc::format!("image of letter {id} is dependent in component {c:?}"),
                        });
                    }
                    letters.push(id);
                }
            }
        }
        let total = self.planted_in(c).len();
        if echelon.rank() != total {
            return Err(Error::RankDeficiency {
                grade: c.edges as usize,
                msg: alloc::format!("letters and brackets span {} of {} in component {c:?}", echelon.rank(), total),
            });
        }
        let mut st = self.state.borrow_mut();
        let s = if g == Grafting::Plain { &mut st.plain } else { &mut st.deformed };
        s.parts.insert(c.clone(), Part { echelon, letters });
        Ok(())
    }

    fn part_letters(&self, c: &Component, g: Grafting) -> Vec<u32> {
        let st = self.state.borrow();
        let s = if g == Grafting::Plain { &st.plain } else { &st.deformed };
        s.parts.get(c).map(|p| p.letters.clone()).unwrap_or_default()
    }

    /// The planted combination behind letter `id`: `b` for the plain
    /// product, `Φ(b)` for the deformed one.
    pub fn letter_value(&self, id: u32, g: Grafting) -> Vect<Planted> {
        match g {
            Grafting::Plain => self.state.borrow().letters[id as usize].1.clone(),
            Grafting::Deformed => {
                if let Some(v) = self.state.borrow().deformed_letters.get(id as usize) {
                    return v.clone();
                }
                let n = self.state.borrow().letters.len();
                let start = self.state.borrow().deformed_letters.len();
                for j in start..n {
                    let b = self.state.borrow().letters[j].1.clone();
                    let v = self.theta.theta_vect(&b).expect("letters lie within bounds");
                    self.state.borrow_mut().deformed_letters.push(v);
                }
                self.state.borrow().deformed_letters[id as usize].clone()
            }
        }
    }

    fn bracket(&self, g: Grafting, x: &Vect<Planted>, y: &Vect<Planted>) -> Result<Vect<Planted>> {
        let p = PreLieProduct { grafting: g, ws: self.ws.clone() };
        let mut v = crate::ops::prelie_vect(&p, x, y)?;
        v -= &crate::ops::prelie_vect(&p, y, x)?;
        Ok(v)
    }

    /// Letters of `ℬ` with their components, in the order they were found.
    pub fn letters(&self) -> Vec<(Component, Vect<Planted>)> {
        self.state.borrow().letters.clone()
    }

    /// Build every component with at most `max_edges` edges and return the
    /// letter indices grouped by edge count.
    pub fn build(&self, max_edges: usize) -> Result<Vec<Vec<u32>>> {
        let mut out = Vec::new();
        for e in 0..=max_edges {
            let mut ids = Vec::new();
            for c in self.components(e) {
                if e > 0 {
                    self.ensure(&c, Grafting::Plain)?;
                    ids.extend(self.part_letters(&c, Grafting::Plain));
                }
            }
            ids.sort();
            out.push(ids);
        }
        Ok(out)
    }

    fn psi_planted(&self, p: &Planted, g: Grafting) -> Result<WordVect> {
        {
            let st = self.state.borrow();
            let s = if g == Grafting::Plain { &st.plain } else { &st.deformed };
            if let Some(r) = s.planted_memo.get(p) {
                return Ok(r.clone());
            }
        }
        let c = self.component_of(p);
        self.ensure(&c, g)?;
        let comb = {
            let st = self.state.borrow();
            let s = if g == Grafting::Plain { &st.plain } else { &st.deformed };
            s.parts.get(&c).and_then(|part| part.echelon.solve(&Vect::basis(p.clone())))
        };
        let comb = comb.ok_or_else(|| Error::Bounds(alloc::format!("{p} lies outside the enumerated basis")))?;
        let mut out = Vect::zero();
        for (gen, k) in comb {
            match gen {
                Gen::Letter(id) => out.add_term(Word::letter(Letter::L(id)), k),
                Gen::Bracket(id, q) => {
                    let l = Vect::basis(Word::letter(Letter::L(id)));
                    let r = self.psi_planted(&q, g)?;
                    out.add_scaled(&concat_vect(&l, &r), &k);
                    out.add_scaled(&concat_vect(&r, &l), &-k);
                }
            }
        }
        let mut st = self.state.borrow_mut();
        let s = if g == Grafting::Plain { &mut st.plain } else { &mut st.deformed };
        s.planted_memo.insert(p.clone(), out.clone());
        Ok(out)
    }

    /// Words for a forest, using `x·f = x ★ f − Σ_i f[v_i ↦ x ↷ v_i]`.
    fn psi_forest(&self, f: &Forest, g: Grafting) -> Result<WordVect> {
        if !f.is_planted_only() {
            return Err(Error::Invalid("expected a forest without polynomial part".into()));
        }
        match f.len() {
            0 => return Ok(Vect::basis(Word::empty())),
            1 => return self.psi_planted(&f.planted()[0], g),
            _ => {}
        }
        {
            let st = self.state.borrow();
            let s = if g == Grafting::Plain { &st.plain } else { &st.deformed };
            if let Some(r) = s.forest_memo.get(f) {
                return Ok(r.clone());
            }
        }
        let x = f.planted()[0].clone();
        let rest = f.without(0);
        let prelie = PreLieProduct { grafting: g, ws: self.ws.clone() };
        let mut out = concat_vect(&self.psi_planted(&x, g)?, &self.psi_forest(&rest, g)?);
        for (i, v) in rest.planted().iter().enumerate() {
            for (z, c) in prelie.product(&x, v)? {
                out.add_scaled(&self.psi_forest(&rest.replace(i, z), g)?, &-c);
            }
        }
        let mut st = self.state.borrow_mut();
        let s = if g == Grafting::Plain { &mut st.plain } else { &mut st.deformed };
        s.forest_memo.insert(f.clone(), out.clone());
        Ok(out)
    }

    /// `Ψ_CF`: `b_1 ★ … ★ b_r ↦ L_1 ⊗ … ⊗ L_r`.
    pub fn psi_cf(&self, f: &Vect<Forest>) -> Result<WordVect> {
        f.map_linear(|x| self.psi_forest(x, Grafting::Plain))
    }

    /// `Ψ_Φ`: `Φ(b_1) ★̃ … ★̃ Φ(b_r) ↦ L_1 ⊗ … ⊗ L_r`, decomposing directly over `Φ(ℬ)`.
    pub fn psi_phi(&self, f: &Vect<Forest>) -> Result<WordVect> {
        f.map_linear(|x| self.psi_forest(x, Grafting::Deformed))
    }

    /// `Ψ_Φ` computed as `Ψ_CF ∘ Φ⁻¹`.
    pub fn psi_phi_via_inverse(&self, f: &Vect<Forest>) -> Result<WordVect> {
        self.psi_cf(&self.theta.phi_inv(f)?)
    }

    pub fn psi_planted_deformed(&self, p: &Vect<Planted>) -> Result<WordVect> {
        p.map_linear(|q| self.psi_planted(q, Grafting::Deformed))
    }

    /// Inverse of `Ψ_CF` (or of `Ψ_Φ` for the deformed product): letters
    /// become planted combinations, concatenation becomes the Guin–Oudom product.
    pub fn words_to_forests(&self, w: &WordVect, g: Grafting) -> Result<Vect<Forest>> {
        let go = crate::hopf::GuinOudom::new(PreLieProduct { grafting: g, ws: self.ws.clone() });
        let dim = self.ws.dim;
        let mut out = Vect::zero();
        for (word, c) in w.iter() {
            let mut acc = Vect::basis(Forest::unit(dim));
            for l in word.letters() {
                let Letter::L(id) = l else {
                    return Err(Error::Invalid("polynomial letters have no forest counterpart".into()));
                };
                let v = self.letter_value(*id, g).map_basis(|p| Forest::single(p.clone()));
                acc = go.star_vect(&acc, &v)?;
            }
            out.add_scaled(&acc, c);
        }
        Ok(out)
    }

    /// Rank of all ★-words in letters over forests with `edges` edges, against
    /// the number of such words and the number of forests.
    pub fn star_word_rank(&self, edges: usize) -> Result<(usize, usize, usize)> {
        let by_grade = self.build(edges)?;
        let go = crate::hopf::GuinOudom::new(PreLieProduct::plain(&self.ws));
        let dim = self.ws.dim;
        let mut words: Vec<(usize, Vect<Forest>)> = alloc::vec![(0, Vect::basis(Forest::unit(dim)))];
        let mut family = Vec::new();
        while let Some((g, v)) = words.pop() {
            if g == edges {
                family.push(v);
                continue;
            }
            for (h, ids) in by_grade.iter().enumerate().skip(1) {
                if g + h > edges {
                    break;
                }
                for id in ids {
                    let l = self.letter_value(*id, Grafting::Plain).map_basis(|p| Forest::single(p.clone()));
                    words.push((g + h, go.star_vect(&v, &l)?));
                }
            }
        }
        let forests = self.state.borrow_mut().enumerator.forests(edges).len();
        Ok((family.len(), crate::linalg::rank(&family), forests))
    }

    pub fn unit_word() -> WordVect {
        Vect::term(Word::empty(), Q::one())
    }
}
