//! Piecewise-polynomial paths over the rationals and their canonical
//! branched lift.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::classical::classical_trees;
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::tree::Tree;
use crate::vect::Q;

use super::character::Character;

/// Dense polynomial `Σ c_k u^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Q>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Q) -> Self {
        Poly(alloc::vec![c]).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn eval(&self, u: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * u + c)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = Q::zero();
        Poly((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect()).trimmed()
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly(self.0.iter().map(|x| x * c).collect()).trimmed()
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly::zero();
        }
        let mut v = alloc::vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly(v).trimmed()
    }

    pub fn derivative(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(k, c)| c * Q::from_integer((k as i64).into())).collect()).trimmed()
    }

    /// Antiderivative vanishing at 0.
    pub fn integral(&self) -> Poly {
        let mut v = alloc::vec![Q::zero()];
        v.extend(self.0.iter().enumerate().map(|(k, c)| c / Q::from_integer((k as i64 + 1).into())));
        Poly(v).trimmed()
    }
}

/// A function on `[0,1]` given by one polynomial per interval `[b_j, b_{j+1}]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piecewise {
    pub breaks: Vec<Q>,
    pub pieces: Vec<Poly>,
}

impl Piecewise {
    pub fn polynomial(p: Poly) -> Self {
        Piecewise { breaks: alloc::vec![Q::zero(), Q::one()], pieces: alloc::vec![p] }
    }

    fn piece_index(&self, u: &Q) -> usize {
        let n = self.pieces.len();
        (0..n).find(|&j| u <= &self.breaks[j + 1]).unwrap_or(n - 1)
    }

    pub fn eval(&self, u: &Q) -> Q {
        self.pieces[self.piece_index(u)].eval(u)
    }

    /// The same function on a finer partition containing all current breaks.
    fn refine(&self, breaks: &[Q]) -> Piecewise {
        let pieces = breaks.windows(2).map(|w| self.pieces[self.piece_index(&((&w[0] + &w[1]) / Q::from_integer(2.into())))].clone()).collect();
        Piecewise { breaks: breaks.to_vec(), pieces }
    }

    fn zip(&self, o: &Piecewise, f: impl Fn(&Poly, &Poly) -> Poly) -> Piecewise {
        Piecewise { breaks: self.breaks.clone(), pieces: self.pieces.iter().zip(&o.pieces).map(|(a, b)| f(a, b)).collect() }
    }

    /// Continuous antiderivative vanishing at the left end point.
    fn antiderivative(&self) -> Piecewise {
        let mut pieces = Vec::new();
        let mut acc = Q::zero();
        for (j, p) in self.pieces.iter().enumerate() {
            let i = p.integral();
            let shift = &acc - i.eval(&self.breaks[j]);
            let q = i.add(&Poly::constant(shift));
            acc = q.eval(&self.breaks[j + 1]);
            pieces.push(q);
        }
        Piecewise { breaks: self.breaks.clone(), pieces }
    }

    fn derivative(&self) -> Piecewise {
        Piecewise { breaks: self.breaks.clone(), pieces: self.pieces.iter().map(Poly::derivative).collect() }
    }
}

/// A continuous path `x = (x^0, …, x^d)` on `[0,1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSpec {
    pub components: Vec<Piecewise>,
}

impl PathSpec {
    pub fn polynomial(components: Vec<Poly>) -> Self {
        PathSpec { components: components.into_iter().map(Piecewise::polynomial).collect() }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn eval(&self, i: usize, u: &Q) -> Q {
        self.components[i].eval(u)
    }

    fn common_breaks(&self) -> Vec<Q> {
        let mut b: Vec<Q> = self.components.iter().flat_map(|c| c.breaks.iter().cloned()).collect();
        b.sort();
        b.dedup();
        b
    }

    /// Components are separated by `;`. Each component is a polynomial in `t`,
    /// optionally followed by `| b : poly` pieces that take over from `t = b`,
    /// e.g. `t ; 1/2 t^2 | 1/2 : t - 1/8`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut components = Vec::new();
        for comp in text.split(';') {
            let mut breaks = alloc::vec![Q::zero()];
            let mut pieces = Vec::new();
            for (j, part) in comp.split('|').enumerate() {
                let body = if j == 0 {
                    part
                } else {
                    let (b, p) = part.split_once(':').ok_or_else(|| invalid("expected `break : polynomial`"))?;
                    let b = parse_rational(b.trim())?;
                    if &b <= breaks.last().unwrap() || b >= Q::one() {
                        return Err(invalid("breakpoints must increase strictly inside (0,1)"));
                    }
                    breaks.push(b);
                    p
                };
                pieces.push(parse_poly(body)?);
            }
            breaks.push(Q::one());
            let pw = Piecewise { breaks, pieces };
            for j in 1..pw.pieces.len() {
                if pw.pieces[j - 1].eval(&pw.breaks[j]) != pw.pieces[j].eval(&pw.breaks[j]) {
                    return Err(invalid("the path must be continuous"));
                }
            }
            components.push(pw);
        }
        Ok(PathSpec { components })
    }
}

fn invalid(msg: &str) -> Error {
    Error::Invalid(msg.to_string())
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Invalid(format!("not a rational number: `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n: num_bigint::BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: num_bigint::BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Q::new(n, d))
    } else if let Some((i, f)) = s.split_once('.') {
        let neg = i.trim_start().starts_with('-');
        let whole: num_bigint::BigInt = if i.is_empty() || i == "-" { 0.into() } else { i.parse().map_err(|_| bad())? };
        let frac: num_bigint::BigInt = if f.is_empty() { 0.into() } else { f.parse().map_err(|_| bad())? };
        let den = num_traits::pow(num_bigint::BigInt::from(10), f.len());
        let frac = Q::new(frac, den);
        Ok(if neg { Q::from_integer(whole) - frac } else { Q::from_integer(whole) + frac })
    } else {
        Ok(Q::from_integer(s.parse().map_err(|_| bad())?))
    }
}

/// `term (("+" | "-") term)*` with `term := [rational] ["t" ["^" nat]]`.
pub fn parse_poly(s: &str) -> Result<Poly> {
    let s: alloc::string::String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(invalid("empty polynomial"));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, c) in s.char_indices() {
        if (c == '+' || c == '-') && i > 0 && !s[..i].ends_with('^') {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut p = Poly::zero();
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-Q::one(), b),
            None => (Q::one(), term.strip_prefix('+').unwrap_or(term)),
        };
        let (coef, power) = match body.find('t') {
            None => (parse_rational(body)?, 0usize),
            Some(k) => {
                let c = body[..k].trim_end_matches('*');
                let c = if c.is_empty() { Q::one() } else { parse_rational(c)? };
                let rest = &body[k + 1..];
                let e = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').and_then(|e| e.parse().ok()).ok_or_else(|| invalid("bad exponent"))?
                };
                (c, e)
            }
        };
        let mut v = alloc::vec![Q::zero(); power + 1];
        v[power] = sign * coef;
        p = p.add(&Poly(v));
    }
    Ok(p)
}

/// The direction carried by a classical vertex decoration `e_i`.
fn direction(t: &Tree) -> Result<usize> {
    let d = t.dec();
    if d.total() != 1 {
        return Err(Error::Invalid(format!("vertex decoration {d} is not a unit multi-index")));
    }
    Ok((0..d.dim()).find(|&i| d.get(i) == 1).unwrap())
}

/// All classical trees with at most `n` vertices, each labelled by a direction.
pub fn lift_domain(dim: usize, n: usize) -> Vec<Tree> {
    let labels: Vec<MultiIndex> = (0..dim).map(|i| MultiIndex::unit(dim, i)).collect();
    (1..=n).flat_map(|k| classical_trees(k, &labels)).collect()
}

/// The canonical lift `X_st` on trees with at most `n` vertices:
/// `⟨X_st, [τ_1 … τ_k]_i⟩ = ∫_s^t ∏_j ⟨X_ut, τ_j⟩ dx^i(u)`.
pub fn canonical_lift(path: &PathSpec, s: &Q, t: &Q, n: usize) -> Result<Character<Tree>> {
    let zero = Q::zero();
    let one = Q::one();
    if s < &zero || s > &one || t < &zero || t > &one {
        return Err(Error::Invalid("lift end points must lie in [0,1]".into()));
    }
    let breaks = path.common_breaks();
    let dx: Vec<Piecewise> = path.components.iter().map(|c| c.refine(&breaks).derivative()).collect();
    let mut memo: BTreeMap<Tree, Piecewise> = BTreeMap::new();
    let mut x = Character::empty(n);
    for tau in lift_domain(path.dim(), n) {
        let f = lift_fn(&tau, &dx, t, &mut memo)?;
        let g = tau.nodes();
        x.insert(tau, g, f.eval(s));
    }
    Ok(x)
}

/// `u ↦ ⟨X_ut, τ⟩` as a piecewise polynomial.
fn lift_fn(tau: &Tree, dx: &[Piecewise], t: &Q, memo: &mut BTreeMap<Tree, Piecewise>) -> Result<Piecewise> {
    if let Some(f) = memo.get(tau) {
        return Ok(f.clone());
    }
    let i = direction(tau)?;
    if i >= dx.len() {
        return Err(Error::Invalid(format!("the path has no component {i}")));
    }
    let mut integrand = dx[i].clone();
    for c in tau.children() {
        let g = lift_fn(&c.body, dx, t, memo)?;
        integrand = integrand.zip(&g, Poly::mul);
    }
    let g = integrand.antiderivative();
    let gt = Poly::constant(g.eval(t));
    let f = g.zip(&g, |p, _| gt.add(&p.scale(&-Q::one())));
    memo.insert(tau.clone(), f.clone());
    Ok(f)
}
