//! Identity sweeps over finite slices of the algebras, grouped in suites.
//!
//! Every suite returns a [`Report`] counting the checked instances and listing
//! the first violations. Randomised suites draw indices from a caller-supplied
//! source so that runs are reproducible.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;


use crate::classical::{bplus, classical_forests, classical_trees, dot};
use crate::enumerate::Enumerator;
use crate::error::Result;
use crate::hopf::{delta_bck, delta_dbck, deshuffle_forest, GuinOudom, H2};
use crate::iso::{hairer_kelly, CfBasis, NormalForm, Sign, Strategy, Theta, WordVect};
use crate::linalg::rank;
use crate::model::{canonical_lift, chen_check_trees, chen_check_words, pair_words, ClassicalIso, PathSpec};
use crate::multiindex::{EdgeLabel, MultiIndex};
use crate::ops::{
    bracket0, deformed_graft, graft, post_product, prelie_vect, up_forest, up_planted, up_tree, EdgeScope, Grafting,
    PreLie, PreLieProduct, VLetter,
};
use crate::tree::{Forest, Planted, Tree};
use crate::vect::{qi, Q, Vect};
use crate::word::{concat_vect, deshuffle, Letter, Word};
use crate::workspace::{Bounds, Workspace};

const LISTED: usize = 20;

/// Outcome of one suite or sub-check.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub instances: usize,
    pub failures: usize,
    /// The first few failures, described.
    pub violations: Vec<String>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(name: &str) -> Self {
        Report { name: name.into(), ..Default::default() }
    }

    pub fn holds(&self) -> bool {
        self.failures == 0 && self.instances > 0
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.violations.len() < LISTED {
                self.violations.push(what());
            }
        }
    }

    pub fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    /// Folds a sub-check into this report, prefixing its messages.
    pub fn absorb(&mut self, sub: Report) {
        self.instances += sub.instances;
        self.failures += sub.failures;
        for v in sub.violations {
            if self.violations.len() < LISTED {
                self.violations.push(format!("{}: {v}", sub.name));
            }
        }
        self.notes.push(format!("{}: {} instances, {} failures", sub.name, sub.instances, sub.failures));
        self.notes.extend(sub.notes);
    }
}

/// Source of uniform indices in `0..n`.
pub type Pick<'a> = &'a mut dyn FnMut(usize) -> usize;

fn raised(ws: &Workspace, node: u16) -> Workspace {
    let mut w = ws.clone();
    w.max_node_dec += node;
    w.max_node_total = w.max_node_total.map(|t| t + node as u32);
    w
}

fn trees_by_edges(bounds: &Bounds, max: usize) -> Vec<Vec<Tree>> {
    let mut en = Enumerator::new(bounds.clone());
    (0..=max).map(|e| en.trees(e).to_vec()).collect()
}

fn planted_by_edges(bounds: &Bounds, max: usize) -> Vec<Vec<Planted>> {
    let mut en = Enumerator::new(bounds.clone());
    (0..=max).map(|e| if e == 0 { Vec::new() } else { en.planted(e).to_vec() }).collect()
}

fn graft_with(ws: &Workspace, g: Grafting, x: &Tree, a: &EdgeLabel, z: &Tree) -> Result<Vect<Tree>> {
    match g {
        Grafting::Plain => graft(ws, x, a, z),
        Grafting::Deformed => deformed_graft(ws, x, a, z),
    }
}

fn graft_vect(ws: &Workspace, g: Grafting, x: &Vect<Tree>, a: &EdgeLabel, z: &Vect<Tree>) -> Result<Vect<Tree>> {
    x.bilinear(z, |s, t| graft_with(ws, g, s, a, t))
}

/// Triples of edge counts `(i, j, k)` with `i + j + k <= total`.
fn splits3(total: usize) -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for i in 0..=total {
        for j in 0..=total - i {
            for k in 0..=total - i - j {
                v.push((i, j, k));
            }
        }
    }
    v
}

/// Multi-pre-Lie identity for `↷^a` and `ĉ↷^a`, the derivation law of `↑^i`,
/// its deformed counterpart and the triangularity of the deformation, over
/// all trees whose products have at most `max_edges` edges.
pub fn prelie_suite(ws: &Workspace, max_edges: usize) -> Result<Report> {
    let bounds = ws.bounds();
    let labels = bounds.labels.clone();
    let ws = ws.clone().with_max_edges(max_edges.max(ws.max_edges));
    let trees = trees_by_edges(&bounds, max_edges.saturating_sub(1));
    let mut out = Report::new("prelie");

    for g in [Grafting::Plain, Grafting::Deformed] {
        let mut r = Report::new(if g == Grafting::Plain { "multi-pre-Lie ↷" } else { "multi-pre-Lie ĉ↷" });
        if max_edges >= 2 {
            for (ex, ey, ez) in splits3(max_edges - 2) {
                for x in &trees[ex] {
                    for y in &trees[ey] {
                        for z in &trees[ez] {
                            let (vx, vy, vz) = (Vect::basis(x.clone()), Vect::basis(y.clone()), Vect::basis(z.clone()));
                            for a in &labels {
                                for b in &labels {
                                    // The identity is symmetric under (x, a) ↔ (y, b).
                                    if (ex, x, a) > (ey, y, b) {
                                        continue;
                                    }
                                    let assoc = |p: &Vect<Tree>, a: &EdgeLabel, q: &Vect<Tree>, b: &EdgeLabel| -> Result<Vect<Tree>> {
                                        let mut l = graft_vect(&ws, g, p, a, &graft_vect(&ws, g, q, b, &vz)?)?;
                                        l -= &graft_vect(&ws, g, &graft_vect(&ws, g, p, a, q)?, b, &vz)?;
                                        Ok(l)
                                    };
                                    let lhs = assoc(&vx, a, &vy, b)?;
                                    let rhs = assoc(&vy, b, &vx, a)?;
                                    r.check(lhs == rhs, || format!("x={x} a={a:?} y={y} b={b:?} z={z}"));
                                }
                            }
                        }
                    }
                }
            }
        }
        out.absorb(r);
    }

    let up = raised(&ws, 1);
    let mut der = Report::new("↑ derivation of ↷");
    let mut non = Report::new("↑ against ĉ↷");
    let mut tri = Report::new("ĉ↷ − ↷ lowers the grading");
    let s = ws.scaling.clone();
    let grading = |t: &Tree| t.weighted_grade(&s) + t.weighted_node_total(&s);
    for es in 0..max_edges {
        for et in 0..max_edges - es {
            for sigma in &trees[es] {
                for tau in &trees[et] {
                    for a in &labels {
                        let plain = graft(&ws, sigma, a, tau)?;
                        let deformed = deformed_graft(&ws, sigma, a, tau)?;
                        let top = plain.first().map(|(t, _)| grading(t)).unwrap_or(0);
                        let mut diff = deformed.clone();
                        diff -= &plain;
                        tri.check(diff.keys().all(|t| grading(t) < top), || format!("σ={sigma} a={a:?} τ={tau}"));
                        for i in 0..ws.dim {
                            let up_v = |v: &Vect<Tree>| v.map_linear(|t| up_tree(&up, i, t));
                            let (us, ut) = (up_tree(&up, i, sigma)?, up_tree(&up, i, tau)?);
                            let (vs, vt) = (Vect::basis(sigma.clone()), Vect::basis(tau.clone()));

                            let lhs = up_v(&plain)?;
                            let mut rhs = graft_vect(&up, Grafting::Plain, &us, a, &vt)?;
                            rhs += &graft_vect(&up, Grafting::Plain, &vs, a, &ut)?;
                            der.check(lhs == rhs, || format!("i={i} σ={sigma} a={a:?} τ={tau}"));

                            let lhs = up_v(&deformed)?;
                            let mut rhs = graft_vect(&up, Grafting::Deformed, &us, a, &vt)?;
                            rhs += &graft_vect(&up, Grafting::Deformed, &vs, a, &ut)?;
                            if let Some(b) = a.shift.sub_unit(i) {
                                rhs -= &deformed_graft(&up, sigma, &a.with_shift(b), tau)?;
                            }
                            non.check(lhs == rhs, || format!("i={i} σ={sigma} a={a:?} τ={tau}"));
                        }
                    }
                }
            }
        }
    }
    out.absorb(der);
    out.absorb(non);
    out.absorb(tri);
    Ok(out)
}

fn letter_edges(x: &VLetter) -> usize {
    match x {
        VLetter::X(_) => 0,
        VLetter::P(p) => p.edges(),
    }
}

/// Post-Lie identities for `(V, [·,·]₀, ▷̂)` over triples drawn from the `X_i`
/// and planted trees with at most `max_planted` edges, with at most
/// `max_total` edges per triple.
pub fn postlie_suite(ws: &Workspace, max_planted: usize, max_total: usize) -> Result<Report> {
    let bounds = ws.bounds();
    let calc = raised(ws, 2).with_max_edges(max_total.max(ws.max_edges));
    let mut gens: Vec<VLetter> = (0..ws.dim).map(|i| VLetter::X(i as u8)).collect();
    for ps in planted_by_edges(&bounds, max_planted) {
        gens.extend(ps.into_iter().map(VLetter::P));
    }
    let mut out = Report::new("postlie");
    let mut d = Report::new("x ▷ [y,z]₀ = [x▷y,z]₀ + [y,x▷z]₀");
    let mut a = Report::new("[x,y]₀ ▷ z = a(x,y,z) − a(y,x,z)");
    let pp = |x: &Vect<VLetter>, y: &Vect<VLetter>| post_product(&calc, x, y);
    let assoc = |x: &Vect<VLetter>, y: &Vect<VLetter>, z: &Vect<VLetter>| -> Result<Vect<VLetter>> {
        let mut v = pp(x, &pp(y, z)?)?;
        v -= &pp(&pp(x, y)?, z)?;
        Ok(v)
    };
    for x in &gens {
        for y in &gens {
            for z in &gens {
                if letter_edges(x) + letter_edges(y) + letter_edges(z) > max_total {
                    continue;
                }
                let (vx, vy, vz) = (Vect::basis(x.clone()), Vect::basis(y.clone()), Vect::basis(z.clone()));
                let lhs = pp(&vx, &bracket0(&vy, &vz))?;
                let mut rhs = bracket0(&pp(&vx, &vy)?, &vz);
                rhs += &bracket0(&vy, &pp(&vx, &vz)?);
                d.check(lhs == rhs, || format!("{x:?} {y:?} {z:?}"));

                let lhs = pp(&bracket0(&vx, &vy), &vz)?;
                let mut rhs = assoc(&vx, &vy, &vz)?;
                rhs -= &assoc(&vy, &vx, &vz)?;
                a.check(lhs == rhs, || format!("{x:?} {y:?} {z:?}"));
            }
        }
    }
    out.absorb(d);
    out.absorb(a);
    Ok(out)
}

fn forests_by_edges(bounds: &Bounds, max: usize, dim: usize) -> Vec<Vec<Forest>> {
    let mut en = Enumerator::new(bounds.clone());
    (0..=max).map(|e| if e == 0 { alloc::vec![Forest::unit(dim)] } else { en.forests(e) }).collect()
}

/// `⟨σ ★ τ, h⟩ = ⟨σ ⊗ τ, Δ_BCK h⟩` and `⟨σ ★̃ τ, h⟩ = ⟨σ ⊗ τ, Δ_DBCK h⟩` for
/// all forests with `grade σ + grade τ = grade h ≤ max_grade`, where
/// `⟨f, g⟩ = S(f) δ_{fg}`.
pub fn duality_suite(ws: &Workspace, max_grade: usize) -> Result<Report> {
    let ws = ws.clone().with_max_edges(max_grade.max(ws.max_edges));
    let forests = forests_by_edges(&ws.bounds(), max_grade, ws.dim);
    let sym = |f: &Forest| qi(f.symmetry_factor());
    let mut out = Report::new("duality");
    for g in [Grafting::Plain, Grafting::Deformed] {
        let go = GuinOudom::new(PreLieProduct { grafting: g, ws: ws.clone() });
        let mut r = Report::new(if g == Grafting::Plain { "★ against Δ_BCK" } else { "★̃ against Δ_DBCK" });
        for n in 0..=max_grade {
            // Transpose the coproducts: (σ, τ) ↦ Σ_h S(σ)S(τ)/S(h) [σ⊗τ]Δh · h.
            let mut dual: BTreeMap<(Forest, Forest), Vect<Forest>> = BTreeMap::new();
            for h in &forests[n] {
                let d = match g {
                    Grafting::Plain => delta_bck(h)?,
                    Grafting::Deformed => delta_dbck(&ws, h)?.value,
                };
                let sh = sym(h);
                for ((sigma, tau), c) in d.iter() {
                    let w = c * sym(sigma) * sym(tau) / &sh;
                    dual.entry((sigma.clone(), tau.clone())).or_insert_with(Vect::zero).add_term(h.clone(), w);
                }
            }
            for es in 0..=n {
                for sigma in &forests[es] {
                    for tau in &forests[n - es] {
                        let prod = go.star(sigma, tau)?;
                        let key = (sigma.clone(), tau.clone());
                        let ok = match dual.get(&key) {
                            Some(v) => *v == prod,
                            None => prod.is_zero(),
                        };
                        r.check(ok, || format!("σ={sigma} τ={tau}"));
                    }
                }
            }
        }
        out.absorb(r);
    }
    Ok(out)
}

/// `Θ` as a pre-Lie morphism on planted pairs with at most `pair_edges` edges
/// each, `Θ⁻¹ ∘ Θ = id` and triangularity up to `max_grade`, and `Φ` as a
/// morphism `★ → ★̃` on `samples` random forest pairs of total grade `≤ max_grade`.
pub fn theta_suite(ws: &Workspace, pair_edges: usize, max_grade: usize, samples: usize, pick: Pick) -> Result<Report> {
    let ws = ws.clone().with_max_edges((2 * pair_edges).max(max_grade).max(ws.max_edges));
    let th = Theta::new(&ws);
    let plain = PreLieProduct::plain(&ws);
    let deformed = PreLieProduct::deformed(&ws);
    let bounds = ws.bounds();
    let planted = planted_by_edges(&bounds, pair_edges.max(max_grade));
    let mut out = Report::new("theta");

    let mut m = Report::new("Θ(x ↷ y) = Θ(x) ĉ↷ Θ(y)");
    for ex in 1..=pair_edges {
        for ey in 1..=pair_edges {
            for x in &planted[ex] {
                for y in &planted[ey] {
                    let lhs = th.theta_vect(&plain.product(x, y)?)?;
                    let rhs = prelie_vect(&deformed, &th.theta(x)?, &th.theta(y)?)?;
                    m.check(lhs == rhs, || format!("x={x} y={y}"));
                }
            }
        }
    }
    out.absorb(m);

    let mut inv = Report::new("Θ⁻¹ ∘ Θ = id");
    let mut tri = Report::new("Θ − id lowers the grading");
    let s = ws.scaling.clone();
    let grading = |p: &Planted| p.weighted_grade(&s) + p.body.weighted_node_total(&s);
    for ps in planted.iter().take(max_grade + 1) {
        for p in ps {
            let image = th.theta(p)?;
            let back = th.theta_inv_vect(&image)?;
            inv.check(back == Vect::basis(p.clone()), || format!("{p}"));
            let mut diff = image.clone();
            diff -= &Vect::basis(p.clone());
            tri.check(diff.keys().all(|q| grading(q) < grading(p)), || format!("{p}"));
        }
    }
    out.absorb(inv);
    out.absorb(tri);

    let forests = forests_by_edges(&bounds, max_grade, ws.dim);
    let go = GuinOudom::new(plain.clone());
    let dgo = GuinOudom::new(deformed.clone());
    let mut phi = Report::new("Φ(u ★ v) = Φ(u) ★̃ Φ(v)");
    let mut dsh = Report::new("(Φ⊗Φ) Δ = Δ Φ");
    for _ in 0..samples {
        let eu = 1 + pick(max_grade.max(1));
        let ev = if eu >= max_grade { 0 } else { pick(max_grade - eu + 1) };
        let u = &forests[eu][pick(forests[eu].len())];
        let v = &forests[ev][pick(forests[ev].len())];
        let (bu, bv) = (Vect::basis(u.clone()), Vect::basis(v.clone()));
        let lhs = th.phi(&go.star(u, v)?)?;
        let rhs = dgo.star_vect(&th.phi(&bu)?, &th.phi(&bv)?)?;
        phi.check(lhs == rhs, || format!("u={u} v={v}"));

        let mut l: Vect<(Forest, Forest)> = Vect::zero();
        for ((a, b), c) in deshuffle_forest(u) {
            let t = th.phi(&Vect::basis(a))?.tensor(&th.phi(&Vect::basis(b))?);
            l.add_scaled(&t, &c);
        }
        let mut r: Vect<(Forest, Forest)> = Vect::zero();
        for (f, c) in th.phi(&bu)?.iter() {
            for ((a, b), d) in deshuffle_forest(f) {
                r.add_term((a, b), c * d);
            }
        }
        dsh.check(l == r, || format!("u={u}"));
    }
    out.absorb(phi);
    out.absorb(dsh);
    Ok(out)
}

/// Coefficients of `1 − 1/F(t)` for `F(t) = Σ f_n tⁿ`, `f_0 = 1`.
pub fn invert_series(f: &[i64]) -> Vec<i64> {
    let mut g = alloc::vec![0i64; f.len()];
    if g.is_empty() {
        return g;
    }
    g[0] = 1;
    for n in 1..f.len() {
        g[n] = -(1..=n).map(|k| f[k] * g[n - k]).sum::<i64>();
    }
    let mut b: Vec<i64> = g.iter().map(|x| -x).collect();
    b[0] = 0;
    b
}

/// Letter dimensions and the rank of `★`-words in the undecorated single-label
/// algebra up to `max_grade`, then Hopf-morphism squares for `Ψ_CF` and `Ψ_Φ`
/// on `ws` up to `morph_grade`.
pub fn basis_suite(ws: &Workspace, max_grade: usize, morph_grade: usize, samples: usize, pick: Pick) -> Result<Report> {
    let mut out = Report::new("basis");
    let plain_ws = Workspace::new(1).with_caps(0, 0).with_max_edges(max_grade);
    let cf = CfBasis::with_bounds(&plain_ws, Bounds::undecorated(1));
    let by_grade = cf.build(max_grade)?;
    let mut en = Enumerator::new(Bounds::undecorated(1));
    let counts: Vec<i64> = (0..=max_grade).map(|g| if g == 0 { 1 } else { en.forests(g).len() as i64 }).collect();
    let expect = invert_series(&counts);
    let mut dims = Report::new("letter dimensions");
    for g in 1..=max_grade {
        let found = by_grade[g].len() as i64;
        dims.check(found == expect[g], || format!("grade {g}: {found} letters, series gives {}", expect[g]));
    }
    dims.note(format!(
        "letters per grade: {:?}; forests per grade: {:?}",
        by_grade.iter().skip(1).map(Vec::len).collect::<Vec<_>>(),
        &counts[1..]
    ));
    out.absorb(dims);
    let mut span = Report::new("★-words are a basis");
    for g in 1..=max_grade {
        let (words, r, forests) = cf.star_word_rank(g)?;
        span.check(words == forests && r == forests, || format!("grade {g}: {words} words, rank {r}, {forests} forests"));
    }
    out.absorb(span);

    let ws = ws.clone().with_max_edges(morph_grade.max(ws.max_edges));
    let cf = CfBasis::new(&ws);
    let go = GuinOudom::new(PreLieProduct::plain(&ws));
    let dgo = GuinOudom::new(PreLieProduct::deformed(&ws));
    let forests = forests_by_edges(&ws.bounds(), morph_grade, ws.dim);
    let mut prod = Report::new("Ψ_CF, Ψ_Φ turn ★, ★̃ into concatenation");
    let mut cop = Report::new("Ψ_CF, Ψ_Φ intertwine the deshuffles");
    let mut dual = Report::new("Ψ_Φ = Ψ_CF ∘ Φ⁻¹");
    for _ in 0..samples {
        let eu = 1 + pick(morph_grade.max(1));
        let ev = if eu >= morph_grade { 0 } else { pick(morph_grade - eu + 1) };
        let u = &forests[eu][pick(forests[eu].len())];
        let v = &forests[ev][pick(forests[ev].len())];
        let (bu, bv) = (Vect::basis(u.clone()), Vect::basis(v.clone()));
        for (g, star) in [(Grafting::Plain, &go), (Grafting::Deformed, &dgo)] {
            let psi = |x: &Vect<Forest>| if g == Grafting::Plain { cf.psi_cf(x) } else { cf.psi_phi(x) };
            let lhs = psi(&star.star(u, v)?)?;
            let rhs = concat_vect(&psi(&bu)?, &psi(&bv)?);
            prod.check(lhs == rhs, || format!("{g:?} u={u} v={v}"));

            let mut l: Vect<(Word<Letter>, Word<Letter>)> = Vect::zero();
            for ((a, b), c) in deshuffle_forest(u) {
                l.add_scaled(&psi(&Vect::basis(a))?.tensor(&psi(&Vect::basis(b))?), &c);
            }
            let mut r = Vect::zero();
            for (w, c) in psi(&bu)?.iter() {
                for (pair, d) in deshuffle(w) {
                    r.add_term(pair, c * d);
                }
            }
            cop.check(l == r, || format!("{g:?} u={u}"));
        }
        dual.check(cf.psi_phi(&bu)? == cf.psi_phi_via_inverse(&bu)?, || format!("u={u}"));
    }
    out.absorb(prod);
    out.absorb(cop);
    out.absorb(dual);
    Ok(out)
}

/// `edges + |k|` of an `H₂` monomial.
pub fn monomial_grade(m: &Forest) -> usize {
    m.edges() + m.x().total() as usize
}

/// `H₂` monomials `∏ I_{a_i}(τ_i) X^k` with `edges + |k| ≤ max`, decorations from `sample`.
pub fn h2_monomials(sample: &Workspace, max: usize) -> Vec<Vec<Forest>> {
    let forests = forests_by_edges(&sample.bounds(), max, sample.dim);
    (0..=max)
        .map(|g| {
            let mut v = Vec::new();
            for (e, fs) in forests.iter().enumerate().take(g + 1) {
                for k in MultiIndex::with_total_at_most(sample.dim, (g - e) as u32) {
                    if k.total() as usize == g - e {
                        v.extend(fs.iter().map(|f| f.with_x(k.clone())));
                    }
                }
            }
            v.sort();
            v
        })
        .collect()
}

fn morphism_failures(nf: &NormalForm, h2: &H2, pairs: &[(Forest, Forest)], r: &mut Report) -> Result<()> {
    for (a, b) in pairs {
        let lhs = nf.psi_vect(&h2.star2(a, b)?)?;
        let rhs = nf.concat(&nf.psi(a)?, &nf.psi(b)?)?;
        r.check(lhs == rhs, || format!("a={a} b={b}"));
    }
    Ok(())
}

/// `Ψ(a ★₂ b) ≡ Ψ(a) ⊗ Ψ(b)` modulo the ideal on `samples` random pairs of
/// total grade `≤ max_grade`, for both signs of the shift term; injectivity
/// of `Ψ` grade by grade; closure of the letters under the rewriting rules;
/// and the coideal property of the rewriting.
pub fn psi_suite(ws: &Workspace, sample: &Workspace, max_grade: usize, samples: usize, pick: Pick) -> Result<Report> {
    let ws = ws.clone().with_max_edges(max_grade.max(ws.max_edges));
    let h2 = H2::new(&ws);
    let cf = CfBasis::new(&ws);
    let monomials = h2_monomials(sample, max_grade);
    let mut pairs = Vec::new();
    while pairs.len() < samples {
        let ga = 1 + pick(max_grade.max(1));
        let gb = if ga >= max_grade { 0 } else { pick(max_grade - ga + 1) };
        let a = monomials[ga][pick(monomials[ga].len())].clone();
        let b = if gb == 0 { Forest::unit(ws.dim) } else { monomials[gb][pick(monomials[gb].len())].clone() };
        pairs.push(if pick(2) == 0 { (a, b) } else { (b, a) });
    }
    let mut out = Report::new("psi");
    let nf = NormalForm::new(&cf, Sign::Minus);
    let mut minus = Report::new("Ψ(a ★₂ b) ≡ Ψ(a)Ψ(b), shift term with −");
    morphism_failures(&nf, &h2, &pairs, &mut minus)?;
    let mut plus = Report::new("same with +");
    morphism_failures(&NormalForm::new(&cf, Sign::Plus), &h2, &pairs, &mut plus)?;
    out.note(format!(
        "sign of the shift term: − gives {} failures, + gives {} of {} pairs",
        minus.failures,
        plus.failures,
        pairs.len()
    ));
    out.absorb(minus);

    let mut inj = Report::new("Ψ is injective grade by grade");
    for (g, ms) in monomials.iter().enumerate().skip(1) {
        let images: Result<Vec<WordVect>> = ms.iter().map(|m| nf.psi(m)).collect();
        let r = rank(&images?);
        inj.check(r == ms.len(), || format!("grade {g}: rank {r} of {}", ms.len()));
        inj.note(format!("grade {g}: {} monomials, image rank {r}", ms.len()));
    }
    out.absorb(inj);

    let mut closure = Report::new("rewriting rules stay within the letters");
    let ids: Vec<u32> = (0..cf.letters().len() as u32).collect();
    for id in ids {
        let letter = cf.letter_value(id, Grafting::Deformed);
        let nodes = letter.keys().map(|p| p.body.max_node_total()).max().unwrap_or(0);
        if nodes + 1 > ws.max_node_total.unwrap_or(u32::MAX) || (nodes as u16) >= ws.max_node_dec {
            continue;
        }
        for i in 0..ws.dim as u8 {
            let w = Vect::basis(Word(alloc::vec![Letter::X(i), Letter::L(id)]));
            let res = nf.normal_form(&w, &mut crate::iso::psi::Leftmost);
            closure.check(res.is_ok(), || format!("X{i} L{id}: {:?}", res.err()));
        }
    }
    out.absorb(closure);

    let mut co = Report::new("rewriting respects the deshuffle");
    let mut candidates = Vec::new();
    let cap = ws.max_node_total.unwrap_or(u32::MAX).min(ws.max_node_dec as u32);
    for id in 0..cf.letters().len() as u32 {
        let letter = cf.letter_value(id, Grafting::Deformed);
        let nodes = letter.keys().map(|p| p.body.max_node_total()).max().unwrap_or(0);
        let edges = letter.keys().map(Planted::edges).max().unwrap_or(0);
        if edges + 1 > max_grade || nodes + 1 > cap {
            continue;
        }
        for i in 0..ws.dim as u8 {
            candidates.push(alloc::vec![Letter::X(i), Letter::L(id)]);
            if nodes + 2 <= cap && edges + 2 <= max_grade {
                for j in 0..ws.dim as u8 {
                    candidates.push(alloc::vec![Letter::X(j), Letter::X(i), Letter::L(id)]);
                }
            }
        }
    }
    for _ in 0..samples.min(candidates.len()) / 2 {
        let word = Word(candidates[pick(candidates.len())].clone());
        let lhs = nf_tensor(&nf, &deshuffle(&word))?;
        for j in NormalForm::redexes(&word) {
            let mut rhs = Vect::zero();
            for (v, c) in nf.rewrite_at(&word, j)?.iter() {
                rhs.add_scaled(&nf_tensor(&nf, &deshuffle(v))?, c);
            }
            co.check(lhs == rhs, || format!("{word} at {j}"));
        }
    }
    out.absorb(co);
    Ok(out)
}

fn nf_tensor(nf: &NormalForm, t: &Vect<(Word<Letter>, Word<Letter>)>) -> Result<Vect<(Word<Letter>, Word<Letter>)>> {
    let mut out = Vect::zero();
    for ((u, v), c) in t.iter() {
        let l = nf.normal_form(&Vect::basis(u.clone()), &mut crate::iso::psi::Leftmost)?;
        let r = nf.normal_form(&Vect::basis(v.clone()), &mut crate::iso::psi::Leftmost)?;
        out.add_scaled(&l.tensor(&r), c);
    }
    Ok(out)
}

/// Random words of length `≤ max_len` reduced under two strategies must agree.
pub fn confluence_suite(
    ws: &Workspace,
    words: usize,
    max_len: usize,
    pick: Pick,
    first: &mut dyn Strategy,
    second: &mut dyn Strategy,
) -> Result<Report> {
    let cf = CfBasis::new(ws);
    cf.build(1)?;
    let nf = NormalForm::new(&cf, Sign::Minus);
    let cap = ws.max_node_total.unwrap_or(ws.max_node_dec as u32).min(ws.max_node_dec as u32);
    // Letters with vertex decorations summing to `n`, indexed by `n`.
    let mut pool: Vec<Vec<u32>> = alloc::vec![Vec::new(); cap as usize + 1];
    for (id, (_, v)) in cf.letters().iter().enumerate() {
        let n = v.keys().map(|p| p.body.max_node_total()).max().unwrap_or(0);
        if n <= cap && v.keys().all(|p| p.edges() == 1) {
            pool[n as usize].push(id as u32);
        }
    }
    let mut r = Report::new("normal forms agree");
    let mut reducible = 0;
    for _ in 0..words {
        let len = 1 + pick(max_len.max(1));
        // Keep the X count small enough that every raised letter stays within the caps.
        let xs = pick((cap as usize).min(len) + 1);
        let room = cap as usize - xs;
        let mut w: Vec<Letter> = Vec::new();
        for _ in 0..len - xs {
            let n = pick(room + 1);
            let bucket = if pool[n].is_empty() { &pool[0] } else { &pool[n] };
            w.push(Letter::L(bucket[pick(bucket.len())]));
        }
        for _ in 0..xs {
            let at = pick(w.len() + 1);
            w.insert(at, Letter::X(pick(ws.dim) as u8));
        }
        if !NormalForm::is_normal(&Word(w.clone())) {
            reducible += 1;
        }
        let v = Vect::basis(Word(w));
        let a = nf.normal_form(&v, first)?;
        let b = nf.normal_form(&v, second)?;
        let word = v.first().map(|(w, _)| format!("{w}")).unwrap_or_default();
        r.check(a == b, || word);
    }
    r.note(format!("{reducible} of {words} words were not already normal"));
    let mut out = Report::new("confluence");
    out.absorb(r);
    Ok(out)
}

/// `↑^i Φ(τ) = Φ(↑^i τ) − Φ(𝒟^i τ)` on planted trees, for both edge scopes of
/// `𝒟^i`, and the commutation of `↑^i`, `𝒟^i` with `Δ_BCK` on forests, all up to `max_grade`.
pub fn derivation_suite(ws: &Workspace, max_grade: usize) -> Result<Report> {
    let ws = ws.clone().with_max_edges(max_grade.max(ws.max_edges));
    let up = raised(&ws, 1);
    let th = Theta::new(&up);
    let bounds = ws.bounds();
    let planted = planted_by_edges(&bounds, max_grade);
    let mut out = Report::new("derivations");
    let mut scopes = Vec::new();
    for scope in [EdgeScope::Body, EdgeScope::All] {
        let mut r = Report::new(match scope {
            EdgeScope::Body => "↑Φ = Φ↑ − Φ𝒟, 𝒟 on body edges",
            EdgeScope::All => "↑Φ = Φ↑ − Φ𝒟, 𝒟 on all edges",
        });
        for ps in &planted {
            for p in ps {
                for i in 0..ws.dim {
                    let lhs = th.theta_vect(&Vect::basis(p.clone()))?.map_linear(|q| up_planted(&up, i, q))?;
                    let mut rhs = th.theta_vect(&up_planted(&up, i, p)?)?;
                    rhs -= &th.theta_vect(&crate::ops::d_planted(i, p, scope))?;
                    r.check(lhs == rhs, || format!("i={i} τ={p}"));
                }
            }
        }
        scopes.push(r);
    }
    let body = scopes.remove(0);
    let all = scopes.remove(0);
    out.note(format!(
        "𝒟 in ↑Φ = Φ↑ − Φ𝒟: body edges give {} failures, all edges give {} of {}",
        body.failures, all.failures, body.instances
    ));
    out.absorb(if body.failures <= all.failures { body } else { all });

    let forests = forests_by_edges(&bounds, max_grade, ws.dim);
    let mut cu = Report::new("Δ_BCK ↑ = (↑⊗1 + 1⊗↑) Δ_BCK");
    let mut cd = Report::new("Δ_BCK 𝒟 = (𝒟⊗1 + 1⊗𝒟) Δ_BCK");
    let lift = |t: &Vect<(Forest, Forest)>, f: &dyn Fn(&Forest) -> Result<Vect<Forest>>| -> Result<Vect<(Forest, Forest)>> {
        let mut out = Vect::zero();
        for ((l, r), c) in t.iter() {
            out.add_scaled(&f(l)?.tensor(&Vect::basis(r.clone())), c);
            out.add_scaled(&Vect::basis(l.clone()).tensor(&f(r)?), c);
        }
        Ok(out)
    };
    let delta = |v: &Vect<Forest>| v.map_linear(delta_bck);
    for fs in forests.iter().skip(1) {
        for f in fs {
            let d = delta_bck(f)?;
            for i in 0..ws.dim {
                let upf = |x: &Forest| up_forest(&up, i, x);
                let lhs = delta(&upf(f)?)?;
                cu.check(lhs == lift(&d, &upf)?, || format!("i={i} f={f}"));
                let df = |x: &Forest| Ok(crate::ops::d_forest(i, x, EdgeScope::All));
                let lhs = delta(&df(f)?)?;
                cd.check(lhs == lift(&d, &df)?, || format!("i={i} f={f}"));
            }
        }
    }
    out.absorb(cu);
    out.absorb(cd);
    Ok(out)
}

fn random_unit_rational(pick: Pick) -> Q {
    let den = 1 + pick(12) as i64;
    let num = pick(den as usize + 1) as i64;
    Q::new(num.into(), den.into())
}

/// Chen's relation for canonical lifts of `path` at `triples` random
/// `(s, u, t)`, the word-side relation and shuffle property after `Ψ̂_CF`,
/// and pairing preservation on all forests up to `n` vertices.
pub fn chen_suite(path: &PathSpec, n: usize, triples: usize, pick: Pick) -> Result<Report> {
    let iso = ClassicalIso::new(path.dim(), n)?;
    let mut duals = Vec::new();
    for g in 1..=n {
        for f in classical_forests(g, &iso.labels()) {
            let v = iso.dual(&f)?;
            duals.push((f, v));
        }
    }
    let mut tree = Report::new("X_su ★₀ X_ut = X_st");
    let mut word = Report::new("X̂_su X̂_ut = X̂_st");
    let mut shuffle = Report::new("X̂ is a shuffle character");
    let mut pairing = Report::new("⟨X̂, Ψ̂^∨ f⟩ = ⟨X, f⟩");
    for _ in 0..triples {
        let mut p = [random_unit_rational(pick), random_unit_rational(pick), random_unit_rational(pick)];
        p.sort();
        let [s, u, t] = p;
        let x = |a: &Q, b: &Q| canonical_lift(path, a, b, n);
        let (su, ut, st) = (x(&s, &u)?, x(&u, &t)?, x(&s, &t)?);
        let rep = chen_check_trees(&su, &ut, &st)?;
        tree.check(rep.holds(), || format!("s={s} u={u} t={t}: grades {:?}", rep.violated_grades()));
        let (hsu, hut, hst) = (iso.push_forward(&su)?, iso.push_forward(&ut)?, iso.push_forward(&st)?);
        let rep = chen_check_words(&hsu, &hut, &hst)?;
        word.check(rep.holds(), || format!("s={s} u={u} t={t}: grades {:?}", rep.violated_grades()));
        let defects = hst.shuffle_defects()?;
        shuffle.check(defects.is_empty(), || format!("s={s} t={t}: {} pairs", defects.len()));
        for (f, v) in &duals {
            let lhs = pair_words(&hst, v)?;
            pairing.check(lhs == st.forest_value(f)?, || format!("s={s} t={t} f={f}"));
        }
    }
    let mut out = Report::new("chen");
    out.absorb(tree);
    out.absorb(word);
    out.absorb(shuffle);
    out.absorb(pairing);
    Ok(out)
}

/// The two-vertex example of `Ψ_HK` and grade preservation on all trees with
/// at most `max_nodes` vertices over `dim` labels.
pub fn hk_suite(dim: usize, max_nodes: usize) -> Result<Report> {
    let mut out = Report::new("hairer-kelly");
    let mut ex = Report::new("Ψ_HK([•_i]_j) = [•_i]_j + •_j ⊗ •_i");
    for i in 0..dim {
        for j in 0..dim {
            let t = bplus(dim, j, &[dot(dim, i)]);
            let mut expect = Vect::basis(Word::letter(t.clone()));
            expect.add_term(Word(alloc::vec![dot(dim, j), dot(dim, i)]), Q::from_integer(1.into()));
            ex.check(hairer_kelly(&t)? == expect, || format!("{t}"));
        }
        let d = dot(dim, i);
        ex.check(hairer_kelly(&d)? == Vect::basis(Word::letter(d.clone())), || format!("{d}"));
    }
    out.absorb(ex);
    let labels: Vec<MultiIndex> = (0..dim).map(|i| MultiIndex::unit(dim, i)).collect();
    let mut gp = Report::new("Ψ_HK preserves the vertex count");
    for n in 1..=max_nodes {
        for t in classical_trees(n, &labels) {
            let image = hairer_kelly(&t)?;
            let ok = !image.is_zero() && image.keys().all(|w| w.letters().iter().map(Tree::nodes).sum::<usize>() == n);
            gp.check(ok, || format!("{t}"));
        }
    }
    out.absorb(gp);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg(seed: u64) -> impl FnMut(usize) -> usize {
        let mut s = seed;
        move |n| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) as usize) % n.max(1)
        }
    }

    #[test]
    fn small_sweeps_hold() {
        let ws = Workspace::new(2).with_caps(1, 1).with_total_caps(Some(1), Some(1)).with_lmax(3);
        let r = prelie_suite(&ws, 2).unwrap();
        assert!(r.holds(), "{r:?}");
        let r = postlie_suite(&ws, 1, 2).unwrap();
        assert!(r.holds(), "{r:?}");
        let r = duality_suite(&ws, 2).unwrap();
        assert!(r.holds(), "{r:?}");
        let r = hk_suite(2, 3).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn injected_fault_is_reported() {
        let mut r = Report::new("x");
        r.check(true, String::new);
        r.check(false, || "bad".into());
        assert!(!r.holds());
        assert_eq!(r.violations, ["bad"]);
        assert!(!Report::new("empty").holds());
        let mut pick = lcg(1);
        assert!(random_unit_rational(&mut pick) <= Q::from_integer(1.into()));
    }
}
