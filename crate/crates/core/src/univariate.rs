//! Dense univariate polynomials `Σ cⱼ tʲ` over a ring, coefficients stored
//! low to high.
//!
//! Over a general ring the stored length is the *declared* degree and the
//! leading entry may be zero (resultants need stated degrees). Over a field
//! the Euclidean operations work on trimmed copies.

use std::fmt;

use crate::scalar::{Field, Ring};

#[derive(Clone, PartialEq)]
pub struct UniPoly<C> {
    coeffs: Vec<C>,
}

impl<C: Ring> UniPoly<C> {
    /// Panics on an empty coefficient list.
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn declared_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &C {
        self.coeffs.last().expect("nonempty")
    }

    pub fn eval(&self, t: &C) -> C {
        let mut acc = self.leading().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> UniPoly<D> {
        UniPoly { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

impl<C: Field> UniPoly<C> {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![C::zero()] }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![C::one()] }
    }

    /// `Π (t − rᵢ)`.
    pub fn from_roots(roots: &[C]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| acc.mul(&Self::new(vec![-r.clone(), C::one()])))
    }

    pub fn trimmed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Actual degree (`None` for the zero polynomial).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn monic(&self) -> Self {
        let t = self.trimmed();
        if t.is_zero() {
            return t;
        }
        let inv = C::one() / t.leading().clone();
        t.scale(&inv)
    }

    pub fn scale(&self, s: &C) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).cloned().unwrap_or_else(C::zero);
        Self { coeffs: (0..n).map(|i| get(self, i) + get(other, i)).collect() }.trimmed()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-C::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self { coeffs: out }.trimmed()
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.clone() * C::from_int(i as i64)).collect(),
        }
        .trimmed()
    }

    /// Euclidean division; panics on division by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.trimmed();
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = C::one() / d.leading().clone();
        let mut rem = self.trimmed().coeffs;
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.trimmed());
        }
        let mut quot = vec![C::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = rem[i + dd].clone() * lead_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
            }
            quot[i] = c;
        }
        rem.truncate(dd.max(1));
        (Self { coeffs: quot }.trimmed(), Self { coeffs: rem }.trimmed())
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.trimmed();
        let mut b = other.trimmed();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl<C: fmt::Debug> fmt::Debug for UniPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly{:?}", self.coeffs)
    }
}
