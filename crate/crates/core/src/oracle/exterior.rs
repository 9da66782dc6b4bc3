//! Exterior algebra on `4n` anticommuting generators with exact rational
//! coefficients, used as the rational cohomology ring of `Xⁿ`.
//!
//! Generator `α_j` on factor `i` is bit `4i + j` of a monomial mask. Monomials
//! are wedges of generators in increasing bit order.

use std::collections::HashMap;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Sign of `m_a ∧ m_b` relative to the sorted monomial `m_a | m_b`, for disjoint
/// masks: `(−1)^{#{(i, j) : i ∈ a, j ∈ b, i > j}}`.
#[inline]
pub fn merge_sign(a: u64, b: u64) -> i32 {
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        inversions += (a >> bit >> 1).count_ones();
        rest &= rest - 1;
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorElement {
    n: usize,
    terms: HashMap<u64, BigRational>,
}

impl ExteriorElement {
    /// Largest number of factors representable in a 64-bit mask.
    pub const MAX_FACTORS: usize = 16;

    pub fn zero(n: usize) -> Self {
        assert!(n <= Self::MAX_FACTORS, "at most {} factors", Self::MAX_FACTORS);
        ExteriorElement { n, terms: HashMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, 0, BigRational::one())
    }

    pub fn monomial(n: usize, mask: u64, coeff: BigRational) -> Self {
        let mut e = Self::zero(n);
        assert!(mask <= Self::full_mask(n), "monomial outside the generator range");
        if !coeff.is_zero() {
            e.terms.insert(mask, coeff);
        }
        e
    }

    /// `p_i^* α_j`.
    pub fn generator(n: usize, factor: usize, j: usize) -> Self {
        assert!(factor < n && j < 4);
        Self::monomial(n, 1 << (4 * factor + j), BigRational::one())
    }

    /// Wedge of `p_i^* α_j` over the indices in `js`, in the given order.
    pub fn product_on_factor(n: usize, factor: usize, js: &[usize]) -> Self {
        js.iter()
            .fold(Self::one(n), |acc, &j| acc.wedge(&Self::generator(n, factor, j)).unwrap())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full_mask(n: usize) -> u64 {
        if n == 16 {
            u64::MAX
        } else {
            (1u64 << (4 * n)) - 1
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mask: u64) -> BigRational {
        self.terms.get(&mask).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    /// Returns `Some(d)` when every monomial has degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|m| m.count_ones());
        let first = degrees.next().unwrap_or(0);
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn component(&self, degree: u32) -> Self {
        ExteriorElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.count_ones() == degree)
                .map(|(&m, c)| (m, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero(self.n);
        }
        ExteriorElement {
            n: self.n,
            terms: self.terms.iter().map(|(&m, c)| (m, c * k)).collect(),
        }
    }

    fn accumulate(terms: &mut HashMap<u64, BigRational>, mask: u64, value: BigRational) {
        use std::collections::hash_map::Entry;
        match terms.entry(mask) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += value;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                if !value.is_zero() {
                    v.insert(value);
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            Self::accumulate(&mut out.terms, m, c.clone());
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut terms = HashMap::with_capacity(self.terms.len().max(other.terms.len()));
        for (&ma, ca) in &self.terms {
            for (&mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let prod = ca * cb;
                let value = if merge_sign(ma, mb) < 0 { -prod } else { prod };
                Self::accumulate(&mut terms, ma | mb, value);
            }
        }
        Ok(ExteriorElement { n: self.n, terms })
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.n), |acc, _| acc.wedge(self).unwrap())
    }

    /// `∫_{Xⁿ} self`: the coefficient of the top monomial.
    pub fn integrate_top(&self) -> BigRational {
        self.coeff(Self::full_mask(self.n))
    }

    /// `∫ self ∧ other` without forming the full product.
    pub fn integrate_product(&self, other: &Self) -> Result<BigRational> {
        self.check_same(other)?;
        let full = Self::full_mask(self.n);
        let (small, large, flipped) = if self.terms.len() <= other.terms.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut total = BigRational::zero();
        for (&m, c) in &small.terms {
            let Some(d) = large.terms.get(&(full ^ m)) else { continue };
            let sign = if flipped { merge_sign(full ^ m, m) } else { merge_sign(m, full ^ m) };
            let prod = c * d;
            if sign < 0 {
                total -= prod;
            } else {
                total += prod;
            }
        }
        Ok(total)
    }
}

impl Add for &ExteriorElement {
    type Output = ExteriorElement;
    fn add(self, rhs: Self) -> ExteriorElement {
        self.try_add(rhs).expect("mismatched factor counts")
    }
}

impl Neg for &ExteriorElement {
    type Output = ExteriorElement;
    fn neg(self) -> ExteriorElement {
        self.scale(&-BigRational::one())
    }
}

impl Sub for &ExteriorElement {
    type Output = ExteriorElement;
    fn sub(self, rhs: Self) -> ExteriorElement {
        self + &-rhs
    }
}

pub fn rational(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}
