//! Weierstrass preparation at jet level.
//!
//! An x₁-regular jet `f` of order `k` is rewritten as
//! `v · (x₁ᵏ + Σ_{j<k} uⱼ(x′) x₁ʲ)` with `v(0) ≠ 0` and `uⱼ` vanishing to
//! order `k − j`. Everything is exact and holds modulo degree `N + 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::Matrix;
use crate::polyjet::{direction_transform, lattice_directions, Jet, JetError, Monomial, RegularDirection, VanishingOrder, VectorJet};
use crate::scalar::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeierstrassError {
    #[error("jet does not vanish at the origin")]
    NonzeroAtOrigin,
    #[error("jet vanishes beyond the truncation order")]
    OrderExceedsTruncation,
    #[error("coefficient of x1^{0} is zero (not x1-regular)")]
    NotRegular(u32),
    #[error("jet has no variables")]
    NoVariables,
    #[error("requested order {requested} exceeds jet order {available}")]
    OrderTooHigh { requested: u32, available: u32 },
    #[error("could not find a near-identity mixing after {0} attempts")]
    MixingFailed(usize),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// `v · (x₁ᵏ + Σ uⱼ(x′)x₁ʲ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassForm<C> {
    pub k: u32,
    /// Unit factor in all n variables, kept up to degree `N − k` (higher
    /// terms cannot affect the product below degree `N + 1`).
    pub unit: Jet<C>,
    /// `u_0 … u_{k−1}` as jets in the n − 1 variables x′ = (x₂, …, xₙ).
    pub coeffs: Vec<Jet<C>>,
}

impl<C: Field> WeierstrassForm<C> {
    pub fn nvars(&self) -> usize {
        self.unit.nvars()
    }

    pub fn order(&self) -> u32 {
        self.unit.order()
    }

    /// The monic part `x₁ᵏ + Σ uⱼ x₁ʲ` as a jet in all variables.
    pub fn polynomial(&self) -> Jet<C> {
        let n = self.nvars();
        let mut x1k = vec![0; n];
        x1k[0] = self.k;
        let mut p = Jet::monomial(n, self.order(), x1k, C::one());
        for (j, u) in self.coeffs.iter().enumerate() {
            p = &p + &u.insert_var(0, j as u32);
        }
        p
    }

    pub fn reexpand(&self) -> Jet<C> {
        &self.unit * &self.polynomial()
    }

    /// `uⱼ` vanishes to order ≥ k − j and `v(0) ≠ 0`.
    pub fn invariants_hold(&self) -> bool {
        let orders_ok = self.coeffs.iter().enumerate().all(|(j, u)| match u.vanishing_order() {
            VanishingOrder::Finite(o) => o >= self.k - j as u32,
            VanishingOrder::ExceedsTruncation => true,
        });
        orders_ok && !self.unit.value_at_origin().is_zero()
    }
}

/// All exponent vectors of total degree `d` in `n` variables.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    if n == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials_of_degree(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Formal preparation of `f` truncated at `order`.
///
/// Solves `g · f = P` degree by degree for a unit `g`, where `P` may only
/// contain x₁-powers below `k` (besides x₁ᵏ itself). At degree `k + e` the
/// unknown homogeneous part `g_e` enters through `g_e · f_k`, which is
/// triangular in the x₁-exponent because the x₁ᵏ coefficient of `f_k` is a
/// unit.
pub fn prepare<C: Field>(f: &Jet<C>, order: u32) -> Result<WeierstrassForm<C>, WeierstrassError> {
    if order > f.order() {
        return Err(WeierstrassError::OrderTooHigh { requested: order, available: f.order() });
    }
    let f = f.with_order(order);
    let n = f.nvars();
    if n == 0 {
        return Err(WeierstrassError::NoVariables);
    }
    let k = match f.vanishing_order() {
        VanishingOrder::Finite(0) => return Err(WeierstrassError::NonzeroAtOrigin),
        VanishingOrder::Finite(k) => k,
        VanishingOrder::ExceedsTruncation => return Err(WeierstrassError::OrderExceedsTruncation),
    };
    let mut x1k = vec![0u32; n];
    x1k[0] = k;
    let lead = f.coeff(&x1k);
    if lead.is_zero() {
        return Err(WeierstrassError::NotRegular(k));
    }
    let lead_inv = C::one() / lead.clone();

    let f_parts: Vec<Jet<C>> = (0..=order).map(|d| f.homogeneous_part(d)).collect();
    let fk = &f_parts[k as usize];
    let mut g_parts: Vec<Jet<C>> = vec![Jet::constant(n, order, lead_inv.clone())];

    for e in 1..=(order - k) {
        let d = k + e;
        let mut known = Jet::zero(n, order);
        for (e_prev, g_prev) in g_parts.iter().enumerate() {
            let fd = &f_parts[(d - e_prev as u32) as usize];
            if !g_prev.is_zero() && !fd.is_zero() {
                known = &known + &(g_prev * fd);
            }
        }
        let mut targets = monomials_of_degree(n, e);
        targets.sort_by(|a, b| b[0].cmp(&a[0]));
        let mut solved: Vec<(Monomial, C)> = Vec::with_capacity(targets.len());
        let mut ge = std::collections::BTreeMap::<Monomial, C>::new();
        for beta in targets {
            let mut t = beta.clone();
            t[0] += k;
            let mut val = known.coeff(&t);
            for (gamma, fc) in fk.terms() {
                if gamma[0] == k {
                    continue;
                }
                if t.iter().zip(gamma).all(|(a, b)| a >= b) {
                    let src: Monomial = t.iter().zip(gamma).map(|(a, b)| a - b).collect();
                    if let Some(gc) = ge.get(&src) {
                        val = val + gc.clone() * fc.clone();
                    }
                }
            }
            let coef = -(val * lead_inv.clone());
            if !coef.is_zero() {
                ge.insert(beta.clone(), coef.clone());
                solved.push((beta, coef));
            }
        }
        g_parts.push(Jet::from_terms(n, order, solved));
    }

    let g = g_parts.iter().fold(Jet::zero(n, order), |acc, p| &acc + p);
    let p = &g * &f;
    debug_assert!(p.terms().all(|(m, c)| m[0] < k || (m == &x1k && c == &C::one())));
    let coeffs = (0..k).map(|j| p.coefficient_of(0, j)).collect();
    let unit = g
        .unit_inverse()
        .expect("constant term is nonzero")
        .filter(|m| crate::polyjet::total_degree(m) <= order - k);
    Ok(WeierstrassForm { k, unit, coeffs })
}

/// A system prepared along one common x₁-direction.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparedSystem<C> {
    pub k: u32,
    /// Component mixing `T` (invertible, near the identity).
    pub mixing: Matrix<C>,
    /// Coordinate change; forms are prepared for `(T s) ∘ direction.inverse`.
    pub direction: RegularDirection<C>,
    pub forms: Vec<WeierstrassForm<C>>,
}

const MIXING_DENOMINATOR: i64 = 1000;
const MIXING_ATTEMPTS: usize = 64;

/// Samples `I + M/1000` with `M` a seeded small-integer matrix until the
/// predicate accepts it. Attempt `a` uses a seed derived from `(seed, a)`.
pub fn near_identity_mixing<C: Field>(
    rank: usize,
    seed: u64,
    mut accept: impl FnMut(&Matrix<C>) -> bool,
) -> Option<Matrix<C>> {
    for attempt in 0..MIXING_ATTEMPTS as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let t = Matrix::from_fn(rank, rank, |i, j| {
            let m = rng.gen_range(-4..=4);
            let base = if i == j { MIXING_DENOMINATOR } else { 0 };
            C::ratio(base + m, MIXING_DENOMINATOR)
        });
        if !t.determinant().is_zero() && accept(&t) {
            return Some(t);
        }
    }
    None
}

/// Prepares all components with one common coordinate change.
///
/// If some component vanishes to higher order than the minimum `k`, the
/// components are first mixed by a near-identity `T` so that every mixed
/// component has order exactly `k`; the common zero set is unchanged.
pub fn prepare_system<C: Field>(s: &VectorJet<C>, order: u32, seed: u64) -> Result<PreparedSystem<C>, WeierstrassError> {
    let k = s.vanishing_order().finite().ok_or(WeierstrassError::OrderExceedsTruncation)?;
    if k == 0 {
        return Err(WeierstrassError::NonzeroAtOrigin);
    }
    let r = s.rank();
    let exact_k = |v: &VectorJet<C>| v.components().iter().all(|c| c.vanishing_order() == VanishingOrder::Finite(k));
    let mixing = if exact_k(s) {
        Matrix::identity(r)
    } else {
        near_identity_mixing(r, seed, |t| exact_k(&s.mix(t))).ok_or(WeierstrassError::MixingFailed(MIXING_ATTEMPTS))?
    };
    let mixed = s.mix(&mixing);
    let leads: Vec<Jet<C>> = mixed.components().iter().map(|c| c.homogeneous_part(k)).collect();
    let radius = (r as i64) * (k as i64) + 2;
    let w: Vec<C> = lattice_directions(s.nvars(), radius)
        .map(|v| v.into_iter().map(C::from_int).collect::<Vec<C>>())
        .find(|w| leads.iter().all(|l| !l.eval(w).is_zero()))
        .ok_or(JetError::NoDirection(radius))?;
    let direction = direction_transform(&w);
    let forms = mixed
        .components()
        .iter()
        .map(|c| prepare(&c.compose_linear(&direction.inverse)?, order))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PreparedSystem { k, mixing, direction, forms })
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
    fn already_normal_form() {
        let f = jet(2, 6, &[(&[2, 0], 1), (&[0, 2], 1)]);
        let w = prepare(&f, 6).unwrap();
        assert_eq!(w.k, 2);
        assert_eq!(w.unit, Jet::one(2, 6));
        assert!(w.coeffs[1].is_zero());
        assert_eq!(w.coeffs[0], jet(1, 6, &[(&[2], 1)]));
    }

    #[test]
    fn unit_factor_is_recovered() {
        let f = jet(2, 5, &[(&[2, 0], 1), (&[2, 1], 1), (&[0, 3], -1), (&[0, 4], -1)]);
        let w = prepare(&f, 5).unwrap();
        assert_eq!(w.unit, jet(2, 5, &[(&[0, 0], 1), (&[0, 1], 1)]));
        assert!(w.coeffs[1].is_zero());
        assert_eq!(w.coeffs[0], jet(1, 5, &[(&[3], -1)]));
        assert_eq!(w.reexpand(), f);
    }

    #[test]
    fn linear_case() {
        let w = prepare(&Jet::<Q>::var(2, 4, 0), 4).unwrap();
        assert_eq!(w.k, 1);
        assert_eq!(w.unit, Jet::one(2, 4));
        assert!(w.coeffs[0].is_zero());
    }

    #[test]
    fn error_cases() {
        assert_eq!(prepare(&Jet::<Q>::one(2, 4), 4), Err(WeierstrassError::NonzeroAtOrigin));
        assert_eq!(prepare(&Jet::<Q>::zero(2, 4), 4), Err(WeierstrassError::OrderExceedsTruncation));
        assert_eq!(prepare(&Jet::<Q>::var(2, 4, 1), 4), Err(WeierstrassError::NotRegular(1)));
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(2, 3)[0], vec![3, 0]);
        assert_eq!(monomials_of_degree(0, 0), vec![Vec::<u32>::new()]);
    }

    #[test]
    fn system_of_two_linear_forms() {
        let s = VectorJet::new(vec![Jet::<Q>::var(2, 4, 0), Jet::var(2, 4, 1)]).unwrap();
        // Oracle: first lattice direction where both x1 and x2 are nonzero.
        let w = lattice_directions(2, 3).find(|v| v[0] != 0 && v[1] != 0).unwrap();
        let ps = prepare_system(&s, 4, 1).unwrap();
        assert_eq!(ps.k, 1);
        assert_eq!(ps.mixing, Matrix::identity(2));
        assert_eq!(ps.direction.w, w.into_iter().map(|x| rat(x, 1)).collect::<Vec<_>>());
        assert!(ps.forms.iter().all(|f| f.k == 1 && f.invariants_hold()));
    }

    #[test]
    fn system_already_regular_along_e1() {
        let s = VectorJet::new(vec![jet(2, 6, &[(&[2, 0], 1)]), jet(2, 6, &[(&[2, 0], 1), (&[0, 2], 1)])]).unwrap();
        let ps = prepare_system(&s, 6, 3).unwrap();
        assert_eq!(ps.k, 2);
        assert_eq!(ps.mixing, Matrix::identity(2));
        assert_eq!(ps.direction.forward, Matrix::identity(2));
    }

    #[test]
    fn system_with_unequal_orders_is_mixed() {
        let s = VectorJet::new(vec![Jet::<Q>::var(2, 5, 1), jet(2, 5, &[(&[3, 0], 1)])]).unwrap();
        let ps = prepare_system(&s, 5, 7).unwrap();
        assert_eq!(ps.k, 1);
        assert_ne!(ps.mixing, Matrix::identity(2));
        let mixed = s.mix(&ps.mixing);
        for c in mixed.components() {
            assert_eq!(c.vanishing_order(), VanishingOrder::Finite(1));
            assert!(!c.homogeneous_part(1).eval(&ps.direction.w).is_zero());
        }
        for (form, c) in ps.forms.iter().zip(mixed.components()) {
            assert_eq!(form.reexpand(), c.compose_linear(&ps.direction.inverse).unwrap());
        }
    }
}
