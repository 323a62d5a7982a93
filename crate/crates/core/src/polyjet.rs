//! Truncated multivariate power series ("jets") with exact coefficients.
//!
//! A [`Jet`] keeps every coefficient of total degree ≤ its order; absent
//! entries are zero and zero coefficients are never stored, so structural
//! equality is coefficientwise equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalar::{Field, Ring};

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JetError {
    #[error("jet shape mismatch: ({0} vars, order {1}) vs ({2} vars, order {3})")]
    ShapeMismatch(usize, u32, usize, u32),
    #[error("vanishing order is {actual:?}, expected {expected}")]
    OrderMismatch { expected: u32, actual: VanishingOrder },
    #[error("homogeneous polynomial is identically zero")]
    ZeroPolynomial,
    #[error("linear map is singular")]
    SingularMap,
    #[error("linear map is {rows}x{cols}, expected {n}x{n}")]
    MapShape { rows: usize, cols: usize, n: usize },
    #[error("no regular direction found within lattice radius {0}")]
    NoDirection(i64),
}

/// Lowest total degree carrying a nonzero coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VanishingOrder {
    Finite(u32),
    /// Every stored coefficient up to the truncation order vanishes.
    ExceedsTruncation,
}

impl VanishingOrder {
    pub fn finite(self) -> Option<u32> {
        match self {
            VanishingOrder::Finite(k) => Some(k),
            VanishingOrder::ExceedsTruncation => None,
        }
    }
}

pub fn total_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

#[derive(Clone, PartialEq)]
pub struct Jet<C> {
    nvars: usize,
    order: u32,
    coeffs: BTreeMap<Monomial, C>,
}

impl<C: Field> Jet<C> {
    pub fn zero(nvars: usize, order: u32) -> Self {
        Self { nvars, order, coeffs: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, order: u32, c: C) -> Self {
        Self::from_terms(nvars, order, [(vec![0; nvars], c)])
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::constant(nvars, order, C::one())
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(nvars: usize, order: u32, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::from_terms(nvars, order, [(e, C::one())])
    }

    pub fn monomial(nvars: usize, order: u32, exps: Monomial, c: C) -> Self {
        Self::from_terms(nvars, order, [(exps, c)])
    }

    /// Sums duplicate monomials and drops anything above `order`.
    pub fn from_terms(nvars: usize, order: u32, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut coeffs: BTreeMap<Monomial, C> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial has wrong number of variables");
            if total_degree(&m) > order || c.is_zero() {
                continue;
            }
            let slot = coeffs.entry(m).or_insert_with(C::zero);
            *slot = slot.clone() + c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Self { nvars, order, coeffs }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.order == other.order
    }

    fn check_shape(&self, other: &Self) -> Result<(), JetError> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(JetError::ShapeMismatch(self.nvars, self.order, other.nvars, other.order))
        }
    }

    pub fn coeff(&self, m: &[u32]) -> C {
        self.coeffs.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Constant term.
    pub fn value_at_origin(&self) -> C {
        self.coeff(&vec![0; self.nvars])
    }

    /// Highest total degree present (`None` for the zero jet).
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|m| total_degree(m)).max()
    }

    pub fn vanishing_order(&self) -> VanishingOrder {
        self.coeffs
            .keys()
            .map(|m| total_degree(m))
            .min()
            .map_or(VanishingOrder::ExceedsTruncation, VanishingOrder::Finite)
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        self.filter(|m| total_degree(m) == d)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.coeffs.keys().map(|m| total_degree(m));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        Self {
            nvars: self.nvars,
            order: self.order,
            coeffs: self.coeffs.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Re-truncates (or extends) to a new order.
    pub fn with_order(&self, order: u32) -> Self {
        Self::from_terms(self.nvars, order, self.coeffs.iter().map(|(m, c)| (m.clone(), c.clone())))
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_terms(self.nvars, self.order, self.coeffs.iter().map(|(m, c)| (m.clone(), c.clone() * s.clone())))
    }

    pub fn map_coeffs<D: Field>(&self, f: impl Fn(&C) -> D) -> Jet<D> {
        Jet::from_terms(self.nvars, self.order, self.coeffs.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, JetError> {
        self.check_shape(other)?;
        let mut out = self.coeffs.clone();
        for (m, c) in &other.coeffs {
            let slot = out.entry(m.clone()).or_insert_with(C::zero);
            *slot = slot.clone() + c.clone();
        }
        out.retain(|_, c| !c.is_zero());
        Ok(Self { nvars: self.nvars, order: self.order, coeffs: out })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, JetError> {
        self.check_shape(other)?;
        let mut out: BTreeMap<Monomial, C> = BTreeMap::new();
        for (ma, ca) in &self.coeffs {
            let da = total_degree(ma);
            for (mb, cb) in &other.coeffs {
                if da + total_degree(mb) > self.order {
                    continue;
                }
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                let slot = out.entry(m).or_insert_with(C::zero);
                *slot = slot.clone() + ca.clone() * cb.clone();
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(Self { nvars: self.nvars, order: self.order, coeffs: out })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars, self.order);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a unit (nonzero constant term), truncated at the order.
    pub fn unit_inverse(&self) -> Option<Self> {
        let c0 = self.value_at_origin();
        if c0.is_zero() {
            return None;
        }
        let inv0 = C::one() / c0.clone();
        // self = c0 (1 + t) with t of order ≥ 1; (1 + t)⁻¹ = Σ (−t)^j.
        let t = &self.scale(&inv0) - &Self::one(self.nvars, self.order);
        let neg_t = -&t;
        let mut acc = Self::one(self.nvars, self.order);
        let mut power = Self::one(self.nvars, self.order);
        for _ in 0..self.order {
            power = &power * &neg_t;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Some(acc.scale(&inv0))
    }

    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars);
        self.coeffs.iter().fold(C::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            acc + t
        })
    }

    /// `∂/∂x_i`, keeping the same order.
    pub fn derivative(&self, i: usize) -> Self {
        Self::from_terms(
            self.nvars,
            self.order,
            self.coeffs.iter().filter(|(m, _)| m[i] > 0).map(|(m, c)| {
                let mut e = m.clone();
                e[i] -= 1;
                (e, c.clone() * C::from_int(m[i] as i64))
            }),
        )
    }

    /// Coefficient of `x_var^power` as a jet in the remaining variables.
    pub fn coefficient_of(&self, var: usize, power: u32) -> Self {
        Self::from_terms(
            self.nvars - 1,
            self.order,
            self.coeffs.iter().filter(|(m, _)| m[var] == power).map(|(m, c)| {
                let mut e = m.clone();
                e.remove(var);
                (e, c.clone())
            }),
        )
    }

    /// Embeds into one more variable, inserted at position `pos`, multiplying
    /// by `x_pos^power`.
    pub fn insert_var(&self, pos: usize, power: u32) -> Self {
        Self::from_terms(
            self.nvars + 1,
            self.order,
            self.coeffs.iter().map(|(m, c)| {
                let mut e = m.clone();
                e.insert(pos, power);
                (e, c.clone())
            }),
        )
    }

    /// Highest power of `x_var` present.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.coeffs.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    /// Splits into the degree-`k` homogeneous part and the remainder.
    pub fn taylor_leading(&self, k: u32) -> Result<(Self, Self), JetError> {
        let actual = self.vanishing_order();
        if actual != VanishingOrder::Finite(k) {
            return Err(JetError::OrderMismatch { expected: k, actual });
        }
        Ok((self.homogeneous_part(k), self.filter(|m| total_degree(m) != k)))
    }

    /// `(j∘A)(x) = j(Ax)`, truncated at the order.
    pub fn compose_linear(&self, a: &Matrix<C>) -> Result<Self, JetError> {
        let n = self.nvars;
        if a.rows() != n || a.cols() != n {
            return Err(JetError::MapShape { rows: a.rows(), cols: a.cols(), n });
        }
        if a.determinant().is_zero() {
            return Err(JetError::SingularMap);
        }
        let forms: Vec<Self> = (0..n)
            .map(|i| {
                Self::from_terms(
                    n,
                    self.order,
                    (0..n).map(|j| {
                        let mut e = vec![0; n];
                        e[j] = 1;
                        (e, a[(i, j)].clone())
                    }),
                )
            })
            .collect();
        let max_deg = self.degree().unwrap_or(0) as usize;
        let powers: Vec<Vec<Self>> = forms
            .iter()
            .map(|l| {
                let mut ps = vec![Self::one(n, self.order)];
                for _ in 0..max_deg {
                    let next = ps.last().unwrap() * l;
                    ps.push(next);
                }
                ps
            })
            .collect();
        let mut out = Self::zero(n, self.order);
        for (m, c) in &self.coeffs {
            let mut t = Self::constant(n, self.order, c.clone());
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }
}

impl<C: Field> Ring for Jet<C> {
    fn zero_like(&self) -> Self {
        Self::zero(self.nvars, self.order)
    }

    fn one_like(&self) -> Self {
        Self::one(self.nvars, self.order)
    }

    fn is_null(&self) -> bool {
        self.is_zero()
    }

    fn compatible(&self, other: &Self) -> bool {
        self.same_shape(other)
    }
}

impl<C: Field> Add for &Jet<C> {
    type Output = Jet<C>;
    fn add(self, rhs: &Jet<C>) -> Jet<C> {
        self.try_add(rhs).expect("jet addition")
    }
}

impl<C: Field> Sub for &Jet<C> {
    type Output = Jet<C>;
    fn sub(self, rhs: &Jet<C>) -> Jet<C> {
        self.try_add(&-rhs).expect("jet subtraction")
    }
}

impl<C: Field> Mul for &Jet<C> {
    type Output = Jet<C>;
    fn mul(self, rhs: &Jet<C>) -> Jet<C> {
        self.try_mul(rhs).expect("jet multiplication")
    }
}

impl<C: Field> Neg for &Jet<C> {
    type Output = Jet<C>;
    fn neg(self) -> Jet<C> {
        Jet {
            nvars: self.nvars,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_by_value {
    ($tr:ident, $method:ident) => {
        impl<C: Field> $tr for Jet<C> {
            type Output = Jet<C>;
            fn $method(self, rhs: Jet<C>) -> Jet<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_by_value!(Add, add);
forward_by_value!(Sub, sub);
forward_by_value!(Mul, mul);

impl<C: Field> Neg for Jet<C> {
    type Output = Jet<C>;
    fn neg(self) -> Jet<C> {
        -&self
    }
}

impl<C: Field + fmt::Display> fmt::Display for Jet<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "x{}", i + 1)?,
                    _ => write!(f, "x{}^{e}", i + 1)?,
                }
            }
        }
        Ok(())
    }
}

impl<C: fmt::Debug> fmt::Debug for Jet<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet")
            .field("nvars", &self.nvars)
            .field("order", &self.order)
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

/// `r` jets sharing variable count and order.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorJet<C> {
    components: Vec<Jet<C>>,
}

impl<C: Field> VectorJet<C> {
    pub fn new(components: Vec<Jet<C>>) -> Result<Self, JetError> {
        if let Some(first) = components.first() {
            for c in &components[1..] {
                first.check_shape(c)?;
            }
        }
        Ok(Self { components })
    }

    pub fn zero(rank: usize, nvars: usize, order: u32) -> Self {
        Self { components: vec![Jet::zero(nvars, order); rank] }
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn nvars(&self) -> usize {
        self.components.first().map_or(0, Jet::nvars)
    }

    pub fn order(&self) -> u32 {
        self.components.first().map_or(0, Jet::order)
    }

    pub fn components(&self) -> &[Jet<C>] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Jet<C> {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<Jet<C>> {
        self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Jet::is_zero)
    }

    /// Minimum vanishing order over the components.
    pub fn vanishing_order(&self) -> VanishingOrder {
        self.components.iter().map(Jet::vanishing_order).min().unwrap_or(VanishingOrder::ExceedsTruncation)
    }

    /// `M · s` for a constant matrix acting on the component index.
    pub fn mix(&self, m: &Matrix<C>) -> Self {
        assert_eq!(m.cols(), self.rank());
        let components = (0..m.rows())
            .map(|i| {
                self.components.iter().enumerate().fold(self.components[0].zero_like(), |acc, (j, c)| {
                    if m[(i, j)].is_zero() {
                        acc
                    } else {
                        &acc + &c.scale(&m[(i, j)])
                    }
                })
            })
            .collect();
        Self { components }
    }

    pub fn map(&self, f: impl Fn(&Jet<C>) -> Jet<C>) -> Self {
        Self { components: self.components.iter().map(f).collect() }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, JetError> {
        assert_eq!(self.rank(), other.rank());
        let components =
            self.components.iter().zip(&other.components).map(|(a, b)| a.try_add(b)).collect::<Result<_, _>>()?;
        Ok(Self { components })
    }
}

/// Deterministic enumeration of primitive-ish integer directions: rings of
/// growing max-norm, first nonzero coordinate positive, ordered by ℓ¹ norm
/// and then lexicographically descending. The basis vectors e₁, e₂, … come
/// first.
pub fn lattice_directions(n: usize, max_radius: i64) -> impl Iterator<Item = Vec<i64>> {
    (1..=max_radius).flat_map(move |radius| {
        let mut ring = Vec::new();
        let side = (2 * radius + 1) as usize;
        let total = side.pow(n as u32);
        for idx in 0..total {
            let mut rem = idx;
            let mut v = vec![0i64; n];
            for slot in v.iter_mut().rev() {
                *slot = (rem % side) as i64 - radius;
                rem /= side;
            }
            if v.iter().map(|x| x.abs()).max() != Some(radius) {
                continue;
            }
            if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
                continue;
            }
            ring.push(v);
        }
        ring.sort_by(|a, b| {
            let la: i64 = a.iter().map(|x| x.abs()).sum();
            let lb: i64 = b.iter().map(|x| x.abs()).sum();
            la.cmp(&lb).then_with(|| b.cmp(a))
        });
        ring
    })
}

/// A direction `w` and the linear map `forward` with `forward · w = e₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularDirection<C> {
    pub w: Vec<C>,
    pub forward: Matrix<C>,
    /// `forward⁻¹`; its first column is `w`. Transformed jets are
    /// `compose_linear(j, inverse)`.
    pub inverse: Matrix<C>,
}

/// Completes `w` to an orthogonal basis (columns of the returned matrix,
/// first column `w`) by Gram–Schmidt over the rationals.
pub fn orthogonal_frame<C: Field>(w: &[C]) -> Matrix<C> {
    let n = w.len();
    let dot = |a: &[C], b: &[C]| a.iter().zip(b).fold(C::zero(), |acc, (x, y)| acc + x.clone() * y.clone());
    let mut basis: Vec<Vec<C>> = vec![w.to_vec()];
    for i in 0..n {
        if basis.len() == n {
            break;
        }
        let mut u: Vec<C> = (0..n).map(|j| if i == j { C::one() } else { C::zero() }).collect();
        for b in &basis {
            let coef = dot(&u, b) / dot(b, b);
            for (uj, bj) in u.iter_mut().zip(b) {
                *uj = uj.clone() - coef.clone() * bj.clone();
            }
        }
        if u.iter().any(|x| !x.is_zero()) {
            basis.push(u);
        }
    }
    Matrix::from_fn(n, n, |i, j| basis[j][i].clone())
}

pub fn direction_transform<C: Field>(w: &[C]) -> RegularDirection<C> {
    let inverse = orthogonal_frame(w);
    let forward = inverse.inverse().expect("orthogonal frame is invertible");
    RegularDirection { w: w.to_vec(), forward, inverse }
}

/// Finds the first lattice direction `w` with `fhat(w) ≠ 0` and the map
/// sending it to e₁.
pub fn regular_direction<C: Field>(fhat: &Jet<C>) -> Result<RegularDirection<C>, JetError> {
    if fhat.is_zero() {
        return Err(JetError::ZeroPolynomial);
    }
    let radius = fhat.degree().unwrap_or(0) as i64 + 2;
    let w = lattice_directions(fhat.nvars(), radius)
        .map(|v| v.into_iter().map(C::from_int).collect::<Vec<C>>())
        .find(|w| !fhat.eval(w).is_zero())
        .ok_or(JetError::NoDirection(radius))?;
    Ok(direction_transform(&w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_rational::BigRational;
    use num_traits::Zero;

    type Q = BigRational;

    fn jet(nvars: usize, order: u32, terms: &[(&[u32], i64)]) -> Jet<Q> {
        Jet::from_terms(nvars, order, terms.iter().map(|(m, c)| (m.to_vec(), rat(*c, 1))))
    }

    #[test]
    fn multiplication_examples() {
        let b = jet(2, 5, &[(&[2, 0], 1), (&[0, 3], -1)]);
        assert_eq!(&Jet::one(2, 5) * &b, b);

        let x1 = Jet::<Q>::var(2, 2, 0);
        assert_eq!(&x1 * &x1, jet(2, 2, &[(&[2, 0], 1)]));

        let a = jet(2, 5, &[(&[0, 0], 1), (&[0, 1], 1)]);
        let expect = jet(2, 5, &[(&[2, 0], 1), (&[2, 1], 1), (&[0, 3], -1), (&[0, 4], -1)]);
        assert_eq!(&a * &b, expect);
    }

    #[test]
    fn truncation_drops_high_degree() {
        let a = jet(2, 3, &[(&[1, 1], 1)]);
        assert!((&a * &a).is_zero());
        assert!(jet(1, 2, &[(&[3], 1)]).is_zero());
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let a = Jet::<Q>::one(2, 3);
        let b = Jet::<Q>::one(2, 4);
        assert!(matches!(a.try_mul(&b), Err(JetError::ShapeMismatch(..))));
    }

    #[test]
    fn vanishing_order_examples() {
        assert_eq!(jet(2, 4, &[(&[2, 0], 1), (&[0, 3], 1)]).vanishing_order(), VanishingOrder::Finite(2));
        assert_eq!(Jet::<Q>::zero(2, 4).vanishing_order(), VanishingOrder::ExceedsTruncation);
        assert_eq!(jet(2, 4, &[(&[1, 1], 1), (&[0, 2], -1)]).vanishing_order(), VanishingOrder::Finite(2));
    }

    #[test]
    fn taylor_leading_examples() {
        let f = jet(2, 4, &[(&[2, 0], 1), (&[0, 3], 1)]);
        let (fhat, psi) = f.taylor_leading(2).unwrap();
        assert_eq!(fhat, jet(2, 4, &[(&[2, 0], 1)]));
        assert_eq!(psi, jet(2, 4, &[(&[0, 3], 1)]));
        assert_eq!(&fhat + &psi, f);

        let g = jet(2, 4, &[(&[1, 0], 1), (&[1, 1], 1)]);
        let (ghat, gpsi) = g.taylor_leading(1).unwrap();
        assert_eq!(ghat, jet(2, 4, &[(&[1, 0], 1)]));
        assert_eq!(gpsi, jet(2, 4, &[(&[1, 1], 1)]));
        assert!(matches!(g.taylor_leading(2), Err(JetError::OrderMismatch { .. })));
    }

    #[test]
    fn regular_direction_examples() {
        let x1sq = jet(2, 4, &[(&[2, 0], 1)]);
        let rd = regular_direction(&x1sq).unwrap();
        assert_eq!(rd.w, vec![rat(1, 1), rat(0, 1)]);
        assert_eq!(rd.forward, Matrix::identity(2));

        let x2 = jet(2, 4, &[(&[0, 1], 1)]);
        let rd = regular_direction(&x2).unwrap();
        assert_eq!(rd.w, vec![rat(0, 1), rat(1, 1)]);
        let moved = x2.compose_linear(&rd.inverse).unwrap();
        assert!(!moved.coeff(&[1, 0]).is_zero());

        // Oracle: evaluate x1*x2 on the candidate list until nonzero.
        let x1x2 = jet(2, 4, &[(&[1, 1], 1)]);
        let oracle = lattice_directions(2, 3)
            .find(|v| v[0] * v[1] != 0)
            .unwrap();
        assert_eq!(oracle, vec![1, 1]);
        let rd = regular_direction(&x1x2).unwrap();
        assert_eq!(rd.w, vec![rat(1, 1), rat(1, 1)]);
        let moved = x1x2.compose_linear(&rd.inverse).unwrap();
        assert_eq!(moved.coeff(&[2, 0]), x1x2.eval(&rd.w));
        let image = rd.forward.mul_vec(&rd.w);
        assert_eq!(image, vec![rat(1, 1), rat(0, 1)]);

        assert!(matches!(regular_direction(&Jet::<Q>::zero(2, 3)), Err(JetError::ZeroPolynomial)));
    }

    #[test]
    fn lattice_directions_start_with_basis() {
        let first: Vec<_> = lattice_directions(3, 1).take(4).collect();
        assert_eq!(first, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn compose_linear_examples() {
        let j = jet(2, 4, &[(&[2, 0], 3), (&[1, 1], -1), (&[0, 3], 2)]);
        assert_eq!(j.compose_linear(&Matrix::identity(2)).unwrap(), j);

        let swap = Matrix::from_rows(vec![vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]]);
        assert_eq!(jet(2, 4, &[(&[1, 0], 1)]).compose_linear(&swap).unwrap(), jet(2, 4, &[(&[0, 1], 1)]));

        let a = Matrix::from_rows(vec![vec![rat(2, 1), rat(1, 3)], vec![rat(-1, 1), rat(5, 2)]]);
        let back = j.compose_linear(&a).unwrap().compose_linear(&a.inverse().unwrap()).unwrap();
        assert_eq!(back, j);

        let singular = Matrix::from_rows(vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]]);
        assert!(matches!(j.compose_linear(&singular), Err(JetError::SingularMap)));
    }

    #[test]
    fn unit_inverse_round_trip() {
        let u = jet(2, 6, &[(&[0, 0], 3), (&[1, 0], 1), (&[1, 2], -2)]);
        let inv = u.unit_inverse().unwrap();
        assert_eq!(&u * &inv, Jet::one(2, 6));
        assert!(jet(2, 6, &[(&[1, 0], 1)]).unit_inverse().is_none());
    }

    #[test]
    fn derivative_and_coefficients() {
        let j = jet(2, 5, &[(&[3, 1], 2), (&[0, 2], 1)]);
        assert_eq!(j.derivative(0), jet(2, 5, &[(&[2, 1], 6)]));
        assert_eq!(j.coefficient_of(0, 3), jet(1, 5, &[(&[1], 2)]));
        assert_eq!(j.coefficient_of(0, 3).insert_var(0, 3), j.filter(|m| m[0] == 3));
    }
}
