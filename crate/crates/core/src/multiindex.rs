use core::fmt;

use num_bigint::BigInt;
use num_traits::One;
use smallvec::SmallVec;

/// A vector of naturals of length `d+1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(SmallVec<[u16; 4]>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, dim))
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut m = Self::zero(dim);
        m.0[i] = 1;
        m
    }

    pub fn from_slice(entries: &[u16]) -> Self {
        MultiIndex(SmallVec::from_slice(entries))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u16] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// `|k|`, the plain sum of entries.
    pub fn total(&self) -> u32 {
        self.0.iter().map(|&x| x as u32).sum()
    }

    /// `|k|_s = Σ s_i k_i`.
    pub fn weighted(&self, s: &MultiIndex) -> u32 {
        self.0.iter().zip(s.0.iter()).map(|(&k, &w)| k as u32 * w as u32).sum()
    }

    pub fn max_entry(&self) -> u16 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// Componentwise subtraction; `None` when some entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.dim(), other.dim());
        let mut out = SmallVec::new();
        for (a, b) in self.0.iter().zip(other.0.iter()) {
            out.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(out))
    }

    pub fn add_unit(&self, i: usize) -> MultiIndex {
        let mut m = self.clone();
        m.0[i] += 1;
        m
    }

    pub fn sub_unit(&self, i: usize) -> Option<MultiIndex> {
        let mut m = self.clone();
        m.0[i] = m.0[i].checked_sub(1)?;
        Some(m)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn min(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.min(b)).collect())
    }

    /// `k!` as the product of componentwise factorials.
    pub fn factorial(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &k in self.0.iter() {
            for j in 2..=k as u64 {
                acc *= j;
            }
        }
        acc
    }

    /// `C(self, l)` as the product of componentwise binomials; zero unless `l <= self`.
    pub fn binomial(&self, l: &MultiIndex) -> BigInt {
        let mut acc = BigInt::one();
        for (&n, &k) in self.0.iter().zip(l.0.iter()) {
            if k > n {
                return BigInt::from(0);
            }
            acc *= binom(n as u64, k as u64);
        }
        acc
    }

    /// All multi-indices `l` with `l <= self` componentwise, in lexicographic order.
    pub fn below(&self) -> impl Iterator<Item = MultiIndex> + '_ {
        let dim = self.dim();
        let mut cur = Some(MultiIndex::zero(dim));
        core::iter::from_fn(move || {
            let out = cur.clone()?;
            let mut next = out.clone();
            let mut i = dim;
            loop {
                if i == 0 {
                    cur = None;
                    break;
                }
                i -= 1;
                if next.0[i] < self.0[i] {
                    next.0[i] += 1;
                    for j in i + 1..dim {
                        next.0[j] = 0;
                    }
                    cur = Some(next);
                    break;
                }
            }
            Some(out)
        })
    }

    /// All multi-indices of dimension `dim` with total degree at most `n`.
    pub fn with_total_at_most(dim: usize, n: u32) -> alloc::vec::Vec<MultiIndex> {
        let cap = MultiIndex(SmallVec::from_elem(n as u16, dim));
        cap.below().filter(|m| m.total() <= n).collect()
    }
}

pub(crate) fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Index into the workspace's table of edge kinds. Kind 0 is the default.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct Kind(pub u8);

/// Edge decoration `a = (kind, shift)`. Only the shift part is ever modified.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeLabel {
    pub kind: Kind,
    pub shift: MultiIndex,
}

impl EdgeLabel {
    pub fn new(kind: Kind, shift: MultiIndex) -> Self {
        EdgeLabel { kind, shift }
    }

    pub fn plain(shift: MultiIndex) -> Self {
        EdgeLabel { kind: Kind(0), shift }
    }

    pub fn with_shift(&self, shift: MultiIndex) -> Self {
        EdgeLabel { kind: self.kind, shift }
    }

    pub fn checked_sub(&self, l: &MultiIndex) -> Option<EdgeLabel> {
        Some(self.with_shift(self.shift.checked_sub(l)?))
    }
}

impl fmt::Debug for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.0 == 0 {
            write!(f, "{}", self.shift)
        } else {
            write!(f, "#{},{}", self.kind.0, self.shift)
        }
    }
}
