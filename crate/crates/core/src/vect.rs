//! Finite linear combinations over an ordered basis with exact rational coefficients.

use alloc::collections::btree_map::{self, BTreeMap};
use alloc::string::String;
use core::fmt::{self, Write};
use core::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: BigInt) -> Q {
    Q::from_integer(n)
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vect<B: Ord>(BTreeMap<B, Q>);

impl<B: Ord> Default for Vect<B> {
    fn default() -> Self {
        Vect(BTreeMap::new())
    }
}

impl<B: Ord + Clone> Vect<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: B) -> Self {
        Self::term(b, Q::one())
    }

    pub fn term(b: B, c: Q) -> Self {
        let mut v = Self::zero();
        v.add_term(b, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, B, Q> {
        self.0.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, B, Q> {
        self.0.keys()
    }

    pub fn coeff(&self, b: &B) -> Q {
        self.0.get(b).cloned().unwrap_or_else(Q::zero)
    }

    pub fn get(&self, b: &B) -> Option<&Q> {
        self.0.get(b)
    }

    pub fn contains(&self, b: &B) -> bool {
        self.0.contains_key(b)
    }

    pub fn first(&self) -> Option<(&B, &Q)> {
        self.0.iter().next()
    }

    pub fn last(&self) -> Option<(&B, &Q)> {
        self.0.iter().next_back()
    }

    pub fn add_term(&mut self, b: B, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(b) {
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Vect<B>, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (b, x) in other.iter() {
            self.add_term(b.clone(), x * c);
        }
    }

    pub fn scale(&mut self, c: &Q) {
        if c.is_zero() {
            self.0.clear();
            return;
        }
        for x in self.0.values_mut() {
            *x *= c;
        }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        let mut v = self.clone();
        v.scale(c);
        v
    }

    pub fn remove(&mut self, b: &B) -> Option<Q> {
        self.0.remove(b)
    }

    /// Apply a linear map given on basis elements.
    pub fn map_linear<C: Ord + Clone, E>(
        &self,
        mut f: impl FnMut(&B) -> core::result::Result<Vect<C>, E>,
    ) -> core::result::Result<Vect<C>, E> {
        let mut out = Vect::zero();
        for (b, c) in self.iter() {
            out.add_scaled(&f(b)?, c);
        }
        Ok(out)
    }

    /// Relabel basis elements; coefficients of colliding images add up.
    pub fn map_basis<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> C) -> Vect<C> {
        let mut out = Vect::zero();
        for (b, c) in self.iter() {
            out.add_term(f(b), c.clone());
        }
        out
    }

    pub fn filter(&self, mut keep: impl FnMut(&B) -> bool) -> Self {
        Vect(self.0.iter().filter(|(b, _)| keep(b)).map(|(b, c)| (b.clone(), c.clone())).collect())
    }

    pub fn max_abs_coeff(&self) -> Q {
        self.0.values().map(|c| c.abs()).max().unwrap_or_else(Q::zero)
    }

    /// Bilinear extension of a product given on basis elements.
    pub fn bilinear<C: Ord + Clone, D: Ord + Clone, E>(
        &self,
        other: &Vect<C>,
        mut f: impl FnMut(&B, &C) -> core::result::Result<Vect<D>, E>,
    ) -> core::result::Result<Vect<D>, E> {
        let mut out = Vect::zero();
        for (b, x) in self.iter() {
            for (c, y) in other.iter() {
                out.add_scaled(&f(b, c)?, &(x * y));
            }
        }
        Ok(out)
    }

    pub fn tensor<C: Ord + Clone>(&self, other: &Vect<C>) -> Vect<(B, C)> {
        let mut out = Vect::zero();
        for (b, x) in self.iter() {
            for (c, y) in other.iter() {
                out.add_term((b.clone(), c.clone()), x * y);
            }
        }
        out
    }

    /// Format as `c1 b1 + c2 b2 - ...`, using `show` for basis elements.
    pub fn format_with(&self, mut show: impl FnMut(&B) -> String) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut s = String::new();
        for (i, (b, c)) in self.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            if !a.is_one() {
                let _ = write!(s, "{a} ");
            }
            s.push_str(&show(b));
        }
        s
    }
}

impl<B: Ord + Clone> FromIterator<(B, Q)> for Vect<B> {
    fn from_iter<I: IntoIterator<Item = (B, Q)>>(iter: I) -> Self {
        let mut v = Vect::zero();
        for (b, c) in iter {
            v.add_term(b, c);
        }
        v
    }
}

impl<B: Ord> IntoIterator for Vect<B> {
    type Item = (B, Q);
    type IntoIter = btree_map::IntoIter<B, Q>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a, B: Ord> IntoIterator for &'a Vect<B> {
    type Item = (&'a B, &'a Q);
    type IntoIter = btree_map::Iter<'a, B, Q>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl<B: Ord + Clone> AddAssign<&Vect<B>> for Vect<B> {
    fn add_assign(&mut self, rhs: &Vect<B>) {
        for (b, c) in rhs.iter() {
            self.add_term(b.clone(), c.clone());
        }
    }
}

impl<B: Ord + Clone> SubAssign<&Vect<B>> for Vect<B> {
    fn sub_assign(&mut self, rhs: &Vect<B>) {
        for (b, c) in rhs.iter() {
            self.add_term(b.clone(), -c.clone());
        }
    }
}

impl<B: Ord + Clone> Add for Vect<B> {
    type Output = Vect<B>;
    fn add(mut self, rhs: Vect<B>) -> Vect<B> {
        self += &rhs;
        self
    }
}

impl<B: Ord + Clone> Sub for Vect<B> {
    type Output = Vect<B>;
    fn sub(mut self, rhs: Vect<B>) -> Vect<B> {
        self -= &rhs;
        self
    }
}

impl<B: Ord + Clone> Neg for Vect<B> {
    type Output = Vect<B>;
    fn neg(mut self) -> Vect<B> {
        for c in self.0.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl<B: Ord + Clone + fmt::Debug> fmt::Debug for Vect<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(|b| alloc::format!("{b:?}")))
    }
}
