//! Leading-term solutions of the constant-coefficient Dirac equation and the
//! resultant argument that rules out a thick nodal set.
//!
//! A solution `w = Σⱼ yⱼ(x′)x₁ʲ` of `D̂w = Σ γᵢ∂ᵢw = 0`, homogeneous of degree
//! k, is determined by `y₀` through `yⱼ = D₁ʲy₀ / j!` with
//! `D₁ = Σ_{j≥2} γ₁γⱼ∂ⱼ`. Splitting `w` into real components and taking two
//! generic real combinations gives monic polynomials in `x₁` whose resultant,
//! a polynomial in `x′`, does not vanish identically.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::clifford::GammaRep;
use crate::linalg::Matrix;
use crate::polyjet::{Jet, JetError, VectorJet};
use crate::resultants::{sylvester_resultant, ResultantError};
use crate::scalar::{RealScalar, Ring};
use crate::univariate::UniPoly;
use crate::weierstrass::{near_identity_mixing, prepare_system, WeierstrassError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObstructionError {
    #[error("field has {got} components and {got_vars} variables; representation needs {rank} and {dim}")]
    DimensionMismatch { rank: usize, dim: usize, got: usize, got_vars: usize },
    #[error("at least two variables are needed (x₁ and x′)")]
    TooFewVariables,
    #[error("y₀ must be homogeneous of degree {0} and independent of x₁")]
    NotHomogeneous(u32),
    #[error("D̂w ≠ 0 for the assembled solution")]
    ResidualNonzero,
    #[error("top coefficient y_k vanishes")]
    DegenerateTop,
    #[error("combination has zero x₁ᵏ coefficient")]
    ZeroLeadingCoefficient,
    #[error("no combination with nonvanishing resultant in {0} trials")]
    NotFound(usize),
    #[error("could not mix components to full x₁-degree")]
    MixingFailed,
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Resultant(#[from] ResultantError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
}

type CJet<T> = Jet<Complex<T>>;
type CVec<T> = VectorJet<Complex<T>>;

fn check_dims<T: RealScalar>(y: &CVec<T>, rep: &GammaRep<T>) -> Result<(), ObstructionError> {
    if y.rank() != rep.rank() || y.nvars() != rep.dim() {
        return Err(ObstructionError::DimensionMismatch {
            rank: rep.rank(),
            dim: rep.dim(),
            got: y.rank(),
            got_vars: y.nvars(),
        });
    }
    Ok(())
}

/// `D₁y = Σ_{j≥2} γ₁γⱼ ∂y/∂xⱼ`.
pub fn d1_apply<T: RealScalar>(y: &CVec<T>, rep: &GammaRep<T>) -> Result<CVec<T>, ObstructionError> {
    check_dims(y, rep)?;
    let g1 = rep.gamma(0);
    let mut out = VectorJet::zero(y.rank(), y.nvars(), y.order());
    for j in 1..rep.dim() {
        let m = g1 * rep.gamma(j);
        let dy = y.map(|c| c.derivative(j));
        out = out.try_add(&dy.mix(&m))?;
    }
    Ok(out)
}

/// `D̂w = Σ γᵢ ∂w/∂xᵢ`.
pub fn hat_dirac_residual<T: RealScalar>(w: &CVec<T>, rep: &GammaRep<T>) -> Result<CVec<T>, ObstructionError> {
    check_dims(w, rep)?;
    let mut out = VectorJet::zero(w.rank(), w.nvars(), w.order());
    for i in 0..rep.dim() {
        out = out.try_add(&w.map(|c| c.derivative(i)).mix(rep.gamma(i)))?;
    }
    Ok(out)
}

/// A homogeneous degree-k solution `w = Σ yⱼ x₁ʲ` of `D̂w = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeadingSolution<T> {
    pub n: usize,
    pub k: u32,
    pub rep: GammaRep<T>,
    /// `y₀ … y_k`, functions of x′ only (stored in all n variables).
    pub ys: Vec<CVec<T>>,
    pub w: CVec<T>,
}

impl<T: RealScalar> LeadingSolution<T> {
    pub fn top(&self) -> &CVec<T> {
        &self.ys[self.k as usize]
    }

    /// Checks `D̂w = 0`, `D₁yⱼ = (j+1)yⱼ₊₁` and `D₁y_k = 0` exactly.
    pub fn invariants_hold(&self) -> bool {
        let residual_ok = hat_dirac_residual(&self.w, &self.rep).is_ok_and(|r| r.is_zero());
        let recursion_ok = self.ys.iter().enumerate().all(|(j, y)| {
            let Ok(d) = d1_apply(y, &self.rep) else { return false };
            match self.ys.get(j + 1) {
                Some(next) => {
                    let factor = Complex::new(T::from_int(j as i64 + 1), T::zero());
                    d == next.map(|c| c.scale(&factor))
                }
                None => d.is_zero(),
            }
        });
        residual_ok && recursion_ok
    }

    /// Real and imaginary parts of each component: `[Re w₁, Im w₁, Re w₂, …]`.
    pub fn realified(&self) -> Vec<Jet<T>> {
        realify(&self.w)
    }
}

pub fn realify<T: RealScalar>(w: &CVec<T>) -> Vec<Jet<T>> {
    w.components().iter().flat_map(|c| [c.map_coeffs(|z| z.re.clone()), c.map_coeffs(|z| z.im.clone())]).collect()
}

/// Builds `yⱼ = D₁ʲy₀ / j!` and `w = Σ yⱼx₁ʲ`, then verifies `D̂w = 0`.
///
/// `y₀` must be homogeneous of degree `k` (or zero) and free of `x₁`.
pub fn build_leading_solution<T: RealScalar>(
    y0: &CVec<T>,
    k: u32,
    rep: &GammaRep<T>,
) -> Result<LeadingSolution<T>, ObstructionError> {
    check_dims(y0, rep)?;
    let n = rep.dim();
    if n < 2 {
        return Err(ObstructionError::TooFewVariables);
    }
    let homogeneous = y0.components().iter().all(|c| c.terms().all(|(m, _)| m[0] == 0 && m.iter().sum::<u32>() == k));
    if !homogeneous || y0.order() < k {
        return Err(ObstructionError::NotHomogeneous(k));
    }
    let mut ys = vec![y0.clone()];
    for j in 1..=k {
        let d = d1_apply(&ys[j as usize - 1], rep)?;
        let inv = Complex::new(T::one() / T::from_int(j as i64), T::zero());
        ys.push(d.map(|c| c.scale(&inv)));
    }
    let mut w = VectorJet::zero(rep.rank(), n, y0.order());
    for (j, y) in ys.iter().enumerate() {
        let mut e = vec![0; n];
        e[0] = j as u32;
        let x1j = CJet::monomial(n, y0.order(), e, Complex::new(T::one(), T::zero()));
        w = w.try_add(&y.map(|c| c * &x1j))?;
    }
    let ls = LeadingSolution { n, k, rep: rep.clone(), ys, w };
    if !hat_dirac_residual(&ls.w, rep)?.is_zero() {
        return Err(ObstructionError::ResidualNonzero);
    }
    Ok(ls)
}

/// Writes a polynomial in x of x₁-degree ≤ k as a univariate polynomial in
/// x₁ whose coefficients are jets in x′ of the given order.
fn as_polynomial_in_x1<T: RealScalar>(p: &Jet<T>, k: u32, order: u32) -> UniPoly<Jet<T>> {
    UniPoly::new((0..=k).map(|j| p.coefficient_of(0, j).with_order(order)).collect())
}

/// `Σ weightsₘ · componentsₘ`.
pub fn combine<T: RealScalar>(components: &[Jet<T>], weights: &[T]) -> Jet<T> {
    components
        .iter()
        .zip(weights)
        .fold(components[0].zero_like(), |acc, (c, w)| if w.is_zero() { acc } else { &acc + &c.scale(w) })
}

/// Resultant in `x₁` of the monic-normalized combinations `Σαₘuₘ` and
/// `Σβₘuₘ` of degree-k components, as a jet in x′ of order `k²`.
pub fn combination_resultant<T: RealScalar>(
    components: &[Jet<T>],
    k: u32,
    alpha: &[T],
    beta: &[T],
) -> Result<Jet<T>, ObstructionError> {
    let order = k * k;
    let normalized = |weights: &[T]| -> Result<UniPoly<Jet<T>>, ObstructionError> {
        let p = combine(components, weights);
        let mut top = vec![0; p.nvars()];
        top[0] = k;
        let lead = p.coeff(&top);
        if lead.is_zero() {
            return Err(ObstructionError::ZeroLeadingCoefficient);
        }
        Ok(as_polynomial_in_x1(&p.scale(&(T::one() / lead)), k, order))
    };
    Ok(sylvester_resultant(&normalized(alpha)?, &normalized(beta)?)?)
}

/// Witnesses `α, β` (weights on the realified components of `w`) and the
/// nonzero resultant they produce.
#[derive(Clone, Debug, PartialEq)]
pub struct NonvanishingResultant<T> {
    pub alpha: Vec<T>,
    pub beta: Vec<T>,
    pub resultant: Jet<T>,
    /// 1-based index of the successful trial.
    pub trial: usize,
}

const WEIGHT_RANGE: i64 = 5;

/// Searches seeded random pairs of combinations for a resultant that is
/// not identically zero.
///
/// If some realified component has no `x₁ᵏ` term, the components are first
/// mixed by a near-identity matrix `T`; the reported weights are pulled back
/// through `T`, so they always refer to the realified components of `w`.
pub fn find_nonvanishing_resultant<T: RealScalar>(
    ls: &LeadingSolution<T>,
    trials: usize,
    seed: u64,
) -> Result<NonvanishingResultant<T>, ObstructionError> {
    if ls.top().is_zero() {
        return Err(ObstructionError::DegenerateTop);
    }
    let k = ls.k;
    let components = ls.realified();
    let m = components.len();
    let mut top = vec![0; ls.n];
    top[0] = k;
    let leads_nonzero = |cs: &[Jet<T>]| cs.iter().all(|c| !c.coeff(&top).is_zero());
    let mixing = if leads_nonzero(&components) {
        Matrix::identity(m)
    } else {
        near_identity_mixing(m, seed, |t| leads_nonzero(VectorJet::new(components.clone()).expect("shape").mix(t).components()))
            .ok_or(ObstructionError::MixingFailed)?
    };
    let mixed = VectorJet::new(components.clone())?.mix(&mixing).into_components();
    let leads: Vec<T> = mixed.iter().map(|c| c.coeff(&top)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| loop {
        let w: Vec<T> = (0..m).map(|_| T::from_int(rng.gen_range(-WEIGHT_RANGE..=WEIGHT_RANGE))).collect();
        let lead = w.iter().zip(&leads).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
        if !lead.is_zero() {
            return w;
        }
    };
    let pull_back = |w: &[T]| -> Vec<T> {
        (0..m).map(|j| (0..m).fold(T::zero(), |acc, i| acc + w[i].clone() * mixing[(i, j)].clone())).collect()
    };
    for trial in 1..=trials {
        let alpha = draw(&mut rng);
        let beta = draw(&mut rng);
        let resultant = combination_resultant(&mixed, k, &alpha, &beta)?;
        if !resultant.is_zero() {
            return Ok(NonvanishingResultant { alpha: pull_back(&alpha), beta: pull_back(&beta), resultant, trial });
        }
    }
    Err(ObstructionError::NotFound(trials))
}

/// The resultant of a prepared system next to the resultant of its leading
/// forms, for the same combination weights.
#[derive(Clone, Debug, PartialEq)]
pub struct LowestOrderComparison<T> {
    pub k: u32,
    /// Resultant of the Weierstrass polynomials (jet in x′, order k²).
    pub full: Jet<T>,
    /// Resultant of the normalized degree-k leading forms.
    pub leading: Jet<T>,
}

impl<T: RealScalar> LowestOrderComparison<T> {
    /// The full resultant has no terms below degree k² and its degree-k²
    /// part equals the leading-form resultant.
    pub fn agrees(&self) -> bool {
        let kk = self.k * self.k;
        self.full.filter(|m| m.iter().sum::<u32>() < kk).is_zero() && self.full.homogeneous_part(kk) == self.leading
    }
}

/// Prepares a real system along a common direction, then compares the
/// resultant of `Σαₘ Pₘ`, `Σβₘ Pₘ` (Weierstrass polynomials) with that of the
/// same combinations of the normalized leading forms.
pub fn lowest_order_comparison<T: RealScalar>(
    system: &VectorJet<T>,
    order: u32,
    alpha: &[T],
    beta: &[T],
    seed: u64,
) -> Result<LowestOrderComparison<T>, ObstructionError> {
    if system.nvars() < 2 {
        return Err(ObstructionError::TooFewVariables);
    }
    let prepared = prepare_system(system, order, seed)?;
    let k = prepared.k;
    let kk = k * k;
    let weierstrass: Vec<Jet<T>> = prepared.forms.iter().map(|f| f.polynomial().with_order(kk.max(order))).collect();
    let mixed = system.mix(&prepared.mixing);
    let leading: Vec<Jet<T>> = mixed
        .components()
        .iter()
        .map(|c| {
            let lead = c.compose_linear(&prepared.direction.inverse)?.homogeneous_part(k);
            let mut top = vec![0; lead.nvars()];
            top[0] = k;
            Ok(lead.scale(&(T::one() / lead.coeff(&top))))
        })
        .collect::<Result<_, JetError>>()?;
    let full = combination_resultant(&weierstrass, k, alpha, beta)?.with_order(kk);
    let leading = combination_resultant(&leading, k, alpha, beta)?;
    Ok(LowestOrderComparison { k, full, leading })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::build_gamma;
    use crate::scalar::rat;
    use num_rational::BigRational;

    type Q = BigRational;
    type G = Complex<Q>;

    fn cj(n: usize, order: u32, terms: &[(&[u32], G)]) -> CJet<Q> {
        Jet::from_terms(n, order, terms.iter().map(|(m, c)| (m.to_vec(), c.clone())))
    }

    fn g(re: i64, im: i64) -> G {
        Complex::new(rat(re, 1), rat(im, 1))
    }

    #[test]
    fn d1_of_constant_and_linear() {
        let rep = build_gamma::<Q>(2).unwrap();
        let c = VectorJet::new(vec![cj(2, 2, &[(&[0, 0], g(1, 0))]), cj(2, 2, &[(&[0, 0], g(2, -1))])]).unwrap();
        assert!(d1_apply(&c, &rep).unwrap().is_zero());
        // y = c·x₂ ↦ γ₁γ₂c, with γ₁γ₂ = [[0, i], [i, 0]] and c = (1, 0)
        let y = VectorJet::new(vec![cj(2, 2, &[(&[0, 1], g(1, 0))]), Jet::zero(2, 2)]).unwrap();
        let d = d1_apply(&y, &rep).unwrap();
        assert!(d.component(0).is_zero());
        assert_eq!(d.component(1), &cj(2, 2, &[(&[0, 0], g(0, 1))]));
    }

    #[test]
    fn k1_example() {
        let rep = build_gamma::<Q>(2).unwrap();
        let y0 = VectorJet::new(vec![cj(2, 1, &[(&[0, 1], g(1, 0))]), Jet::zero(2, 1)]).unwrap();
        let ls = build_leading_solution(&y0, 1, &rep).unwrap();
        assert_eq!(ls.w.component(0), &cj(2, 1, &[(&[0, 1], g(1, 0))]));
        assert_eq!(ls.w.component(1), &cj(2, 1, &[(&[1, 0], g(0, 1))]));
        assert!(ls.invariants_hold());
        let real = ls.realified();
        assert_eq!(real[0], Jet::var(2, 1, 1));
        assert!(real[1].is_zero() && real[2].is_zero());
        assert_eq!(real[3], Jet::var(2, 1, 0));
    }

    #[test]
    fn k2_example() {
        let rep = build_gamma::<Q>(2).unwrap();
        let c = [g(2, 1), g(-1, 3)];
        let y0 = VectorJet::new(c.iter().map(|ci| cj(2, 2, &[(&[0, 2], ci.clone())])).collect()).unwrap();
        let ls = build_leading_solution(&y0, 2, &rep).unwrap();
        let g12 = rep.gamma(0) * rep.gamma(1);
        let g12c: Vec<G> = (0..2).map(|i| g12[(i, 0)].clone() * c[0].clone() + g12[(i, 1)].clone() * c[1].clone()).collect();
        for i in 0..2 {
            assert_eq!(ls.ys[1].component(i), &cj(2, 2, &[(&[0, 1], g12c[i].clone() * g(2, 0))]));
            assert_eq!(ls.ys[2].component(i), &cj(2, 2, &[(&[0, 0], -c[i].clone())]));
        }
        assert!(ls.invariants_hold());
    }

    #[test]
    fn zero_seed_and_residual_example() {
        let rep = build_gamma::<Q>(2).unwrap();
        let ls = build_leading_solution(&VectorJet::zero(2, 2, 3), 3, &rep).unwrap();
        assert!(ls.w.is_zero());
        assert_eq!(find_nonvanishing_resultant(&ls, 10, 0), Err(ObstructionError::DegenerateTop));

        let w = VectorJet::new(vec![cj(2, 1, &[(&[1, 0], g(1, 0))]), Jet::zero(2, 1)]).unwrap();
        let r = hat_dirac_residual(&w, &rep).unwrap();
        assert_eq!(r.component(0), &cj(2, 1, &[(&[0, 0], g(0, 1))]));
        assert!(r.component(1).is_zero());
    }

    #[test]
    fn rejects_non_homogeneous_seed() {
        let rep = build_gamma::<Q>(2).unwrap();
        let y0 = VectorJet::new(vec![cj(2, 2, &[(&[1, 0], g(1, 0))]), Jet::zero(2, 2)]).unwrap();
        assert_eq!(build_leading_solution(&y0, 1, &rep), Err(ObstructionError::NotHomogeneous(1)));
    }

    #[test]
    fn combination_resultant_of_k1_example() {
        let rep = build_gamma::<Q>(2).unwrap();
        let y0 = VectorJet::new(vec![cj(2, 1, &[(&[0, 1], g(1, 0))]), Jet::zero(2, 1)]).unwrap();
        let ls = build_leading_solution(&y0, 1, &rep).unwrap();
        let w = |v: [i64; 4]| v.map(|x| rat(x, 1)).to_vec();
        // F = x₁ + x₂ and G = x₁ − x₂ after normalization; Res = (−x₂) − x₂.
        let r = combination_resultant(&ls.realified(), 1, &w([1, 0, 0, 1]), &w([1, 0, 0, -1])).unwrap();
        assert_eq!(r, Jet::from_terms(1, 1, [(vec![1], rat(-2, 1))]));
        let found = find_nonvanishing_resultant(&ls, 20, 3).unwrap();
        assert!(!found.resultant.is_zero());
        assert_eq!(combination_resultant(&ls.realified(), 1, &found.alpha, &found.beta).unwrap(), found.resultant);
    }

    #[test]
    fn lowest_order_term_of_prepared_resultant() {
        // s = (x₁² − x₂² + x₁³, x₁x₂ + x₂³) in two variables.
        let q = |c: i64| rat(c, 1);
        let s = VectorJet::new(vec![
            Jet::from_terms(2, 6, [(vec![2, 0], q(1)), (vec![0, 2], q(-1)), (vec![3, 0], q(1))]),
            Jet::from_terms(2, 6, [(vec![1, 1], q(1)), (vec![0, 3], q(1))]),
        ])
        .unwrap();
        let cmp = lowest_order_comparison(&s, 6, &[q(1), q(2)], &[q(3), q(-1)], 0).unwrap();
        assert_eq!(cmp.k, 2);
        assert!(!cmp.leading.is_zero());
        assert!(cmp.agrees(), "{cmp:?}");
    }
}
