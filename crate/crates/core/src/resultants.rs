//! Sylvester resultants, common-root tests and exact real-root isolation.
//!
//! Sign convention: the Sylvester matrix lists the `deg G` shifted copies of
//! F first, then the `deg F` copies of G, coefficients from high to low. With
//! it, `Res(t − a, t − b) = a − b`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::scalar::{rational_to_f64, Field, RealScalar, Ring};
use crate::univariate::UniPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResultantError {
    #[error("both polynomials have declared degree 0")]
    BothConstant,
    #[error("coefficients live in different rings")]
    CoefficientMismatch,
    #[error("polynomial {0} is not monic")]
    NonMonic(usize),
    #[error("common-root test needs at least two polynomials of one degree ≥ 1")]
    BadSystem,
}

/// The `(m + n) × (m + n)` Sylvester matrix, F-block first.
pub fn sylvester_matrix<C: Ring>(f: &UniPoly<C>, g: &UniPoly<C>) -> Vec<Vec<C>> {
    let m = f.declared_degree();
    let n = g.declared_degree();
    let size = m + n;
    let zero = f.leading().zero_like();
    let mut rows = vec![vec![zero; size]; size];
    for i in 0..n {
        for (j, c) in f.coeffs().iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.coeffs().iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    rows
}

/// Division-free determinant: dynamic programming over the set of columns
/// used by the first rows. Exact over any commutative ring, `O(2ⁿ n²)`.
pub fn ring_determinant<C: Ring>(m: &[Vec<C>]) -> Option<C> {
    let n = m.len();
    let template = m.first()?.first()?.clone();
    let mut dp: Vec<Option<C>> = vec![None; 1 << n];
    dp[0] = Some(template.one_like());
    for mask in 0usize..(1 << n) {
        let Some(acc) = dp[mask].take() else { continue };
        let row = mask.count_ones() as usize;
        if row == n {
            return Some(acc);
        }
        for (col, entry) in m[row].iter().enumerate() {
            if mask & (1 << col) != 0 || entry.is_null() {
                continue;
            }
            let above = (mask >> (col + 1)).count_ones();
            let mut term = acc.clone() * entry.clone();
            if above % 2 == 1 {
                term = -term;
            }
            let next = mask | (1 << col);
            dp[next] = Some(match dp[next].take() {
                Some(prev) => prev + term,
                None => term,
            });
        }
        if mask == (1 << n) - 1 {
            return Some(acc);
        }
    }
    Some(template.zero_like())
}

/// `det` of the Sylvester matrix of F and G at their declared degrees.
pub fn sylvester_resultant<C: Ring>(f: &UniPoly<C>, g: &UniPoly<C>) -> Result<C, ResultantError> {
    let first = f.leading();
    if f.coeffs().iter().chain(g.coeffs()).any(|c| !first.compatible(c)) {
        return Err(ResultantError::CoefficientMismatch);
    }
    if f.declared_degree() == 0 && g.declared_degree() == 0 {
        return Err(ResultantError::BothConstant);
    }
    Ok(ring_determinant(&sylvester_matrix(f, g)).expect("nonempty Sylvester matrix"))
}

/// Decides whether monic degree-k polynomials share a root.
///
/// Random pairs of combinations `F = Σαₘ Pₘ`, `G = Σβₘ Pₘ` are tried; one
/// nonzero resultant proves there is no common root. If every trial
/// vanishes, an exact gcd settles the question.
pub fn common_root_test<C: Field>(polys: &[UniPoly<C>], trials: usize, seed: u64) -> Result<bool, ResultantError> {
    if polys.len() < 2 {
        return Err(ResultantError::BadSystem);
    }
    let k = polys[0].declared_degree();
    if k == 0 || polys.iter().any(|p| p.declared_degree() != k) {
        return Err(ResultantError::BadSystem);
    }
    if let Some(i) = polys.iter().position(|p| !p.is_monic()) {
        return Err(ResultantError::NonMonic(i));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let combo = |rng: &mut ChaCha8Rng| loop {
        let alpha: Vec<i64> = (0..polys.len()).map(|_| rng.gen_range(-5..=5)).collect();
        if alpha.iter().sum::<i64>() != 0 {
            return combine(polys, &alpha);
        }
    };
    for _ in 0..trials {
        let f = combo(&mut rng);
        let g = combo(&mut rng);
        if !sylvester_resultant(&f, &g)?.is_zero() {
            return Ok(false);
        }
    }
    let gcd = polys[1..].iter().fold(polys[0].clone(), |acc, p| acc.gcd(p));
    Ok(gcd.degree().is_some_and(|d| d >= 1))
}

fn combine<C: Field>(polys: &[UniPoly<C>], weights: &[i64]) -> UniPoly<C> {
    let k = polys[0].declared_degree();
    UniPoly::new(
        (0..=k)
            .map(|j| {
                polys.iter().zip(weights).fold(C::zero(), |acc, (p, &w)| acc + p.coeffs()[j].clone() * C::from_int(w))
            })
            .collect(),
    )
}

/// Discriminant up to the usual sign: `Res(P, P′)` for monic P of degree ≥ 2.
pub fn discriminant<C: Field>(p: &UniPoly<C>) -> C {
    let t = p.trimmed();
    let d = t.derivative();
    let n = t.declared_degree();
    if n < 1 {
        return C::zero();
    }
    let dpad = {
        let mut c = d.coeffs().to_vec();
        c.resize(n, C::zero());
        UniPoly::new(c)
    };
    let res = sylvester_resultant(&t, &dpad).unwrap_or_else(|_| C::zero());
    let sign = if (n * (n - 1) / 2) % 2 == 1 { -C::one() } else { C::one() };
    sign * res / t.leading().clone()
}

/// Square-free decomposition (Yun): returns `(aᵢ, i)` with `p ∝ Π aᵢ^i`.
pub fn square_free_decomposition<C: Field>(p: &UniPoly<C>) -> Vec<(UniPoly<C>, usize)> {
    let p = p.monic();
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.div_rem(&a0).0;
    let c = dp.div_rem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        b = b.div_rem(&a).0;
        let c = d.div_rem(&a).0;
        d = c.sub(&b.derivative());
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

type QPoly = UniPoly<BigRational>;

fn sturm_chain(q: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![q.trimmed(), q.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&-BigRational::one()));
    }
    chain
}

fn sign_variations(chain: &[QPoly], x: &BigRational) -> usize {
    let signs: Vec<i8> = chain
        .iter()
        .map(|p| {
            let v = p.eval(x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots (Sturm count over the Cauchy bound).
pub fn distinct_real_root_count<C: RealScalar>(p: &UniPoly<C>) -> usize {
    let q = to_rational_poly(p);
    if q.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let sq = q.div_rem(&q.gcd(&q.derivative())).0;
    let chain = sturm_chain(&sq);
    let b = cauchy_bound(&sq);
    sign_variations(&chain, &-b.clone()) - sign_variations(&chain, &b)
}

fn cauchy_bound(p: &QPoly) -> BigRational {
    let t = p.trimmed();
    let lead = t.leading().abs();
    let max = t.coeffs()[..t.declared_degree()].iter().map(|c| c.abs() / lead.clone()).fold(BigRational::zero(), |a, b| {
        if b > a {
            b
        } else {
            a
        }
    });
    max + BigRational::one()
}

fn to_rational_poly<C: RealScalar>(p: &UniPoly<C>) -> QPoly {
    UniPoly::new(p.coeffs().iter().map(|c| c.to_rational().expect("finite coefficient")).collect()).trimmed()
}

/// A real root with its exact isolating interval `(lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    pub value: f64,
    pub multiplicity: usize,
    pub lo: BigRational,
    pub hi: BigRational,
}

/// All real roots in ascending order, each refined until its isolating
/// interval is narrower than `tol`.
pub fn real_roots_sorted<C: RealScalar>(p: &UniPoly<C>, tol: f64) -> Vec<RealRoot> {
    let q = to_rational_poly(p);
    let tol_q = BigRational::from_float(tol.max(1e-300)).expect("finite tolerance");
    let mut roots = Vec::new();
    for (factor, mult) in square_free_decomposition(&q) {
        let chain = sturm_chain(&factor);
        let count = |lo: &BigRational, hi: &BigRational| sign_variations(&chain, lo) - sign_variations(&chain, hi);
        let b = cauchy_bound(&factor);
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            match count(&lo, &hi) {
                0 => {}
                1 => {
                    let (mut lo, mut hi) = (lo, hi);
                    while hi.clone() - lo.clone() >= tol_q {
                        let mid = (lo.clone() + hi.clone()) / BigRational::from_integer(BigInt::from(2));
                        if count(&lo, &mid) == 1 {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    let value = rational_to_f64(&((lo.clone() + hi.clone()) / BigRational::from_integer(BigInt::from(2))));
                    let value = if factor.eval(&hi).is_zero() { rational_to_f64(&hi) } else { value };
                    roots.push(RealRoot { value, multiplicity: mult, lo, hi });
                }
                _ => {
                    let mid = (lo.clone() + hi.clone()) / BigRational::from_integer(BigInt::from(2));
                    stack.push((lo, mid.clone()));
                    stack.push((mid, hi));
                }
            }
        }
    }
    roots.sort_by(|a, b| a.lo.cmp(&b.lo));
    roots
}

/// Finite-difference Lipschitz estimate of the sorted real roots along a
/// run of samples with a constant number of distinct real roots.
#[derive(Clone, Debug, PartialEq)]
pub struct LipschitzSegment {
    pub root_count: usize,
    pub samples: usize,
    /// `max |Δroot|∞ / |Δu|₂` over consecutive samples in the run.
    pub max_ratio: f64,
}

/// Walks the straight path `u(s) = start + s (end − start)`, `s ∈ [0, 1]`,
/// in coefficient space of monic `tᵏ + Σ uⱼ tʲ` and groups the samples into
/// runs of constant distinct-real-root count.
pub fn root_lipschitz_along_path(start: &[f64], end: &[f64], samples: usize, tol: f64) -> Vec<LipschitzSegment> {
    assert_eq!(start.len(), end.len());
    assert!(samples >= 2);
    let point = |s: f64| -> Vec<f64> { start.iter().zip(end).map(|(a, b)| a + s * (b - a)).collect() };
    let mut segments: Vec<LipschitzSegment> = Vec::new();
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    for i in 0..samples {
        let u = point(i as f64 / (samples - 1) as f64);
        let mut coeffs = u.clone();
        coeffs.push(1.0);
        let roots: Vec<f64> = real_roots_sorted(&UniPoly::new(coeffs), tol).iter().map(|r| r.value).collect();
        let continues = matches!(&prev, Some((_, pr)) if pr.len() == roots.len());
        if continues {
            let (pu, pr) = prev.as_ref().expect("previous sample");
            let du = pu.iter().zip(&u).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            let dr = pr.iter().zip(&roots).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let seg = segments.last_mut().expect("open segment");
            seg.samples += 1;
            if du > 0.0 {
                seg.max_ratio = seg.max_ratio.max(dr / du);
            }
        } else {
            segments.push(LipschitzSegment { root_count: roots.len(), samples: 1, max_ratio: 0.0 });
        }
        prev = Some((u, roots));
    }
    segments
}
