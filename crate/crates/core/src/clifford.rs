//! Exact matrix representations of the Clifford generators of ℝⁿ.
//!
//! Generators satisfy `γᵢγⱼ + γⱼγᵢ = −2δᵢⱼ·I` and are skew-Hermitian. The
//! rank is `2^⌊n/2⌋`, built by tensor recursion from the n = 1 and n = 2
//! representations.

use num_complex::Complex;
use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalar::RealScalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliffordError {
    #[error("Clifford dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("generator {index} is {rows}x{cols}, expected {rank}x{rank}")]
    BadGenerator { index: usize, rows: usize, cols: usize, rank: usize },
}

/// A concrete representation γ₁..γₙ acting on `C^rank`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaRep<T> {
    dim: usize,
    rank: usize,
    gammas: Vec<Matrix<Complex<T>>>,
}

/// Representation rank for ambient dimension `n`.
pub fn spinor_rank(n: usize) -> usize {
    1 << (n / 2)
}

fn c<T: RealScalar>(re: i64, im: i64) -> Complex<T> {
    Complex::new(T::from_int(re), T::from_int(im))
}

fn mat2<T: RealScalar>(e: [[(i64, i64); 2]; 2]) -> Matrix<Complex<T>> {
    Matrix::from_fn(2, 2, |i, j| c(e[i][j].0, e[i][j].1))
}

/// Builds the deterministic generator set for ℝⁿ.
///
/// n = 1: γ₁ = (i). n = 2: γ₁ = diag(i, −i), γ₂ = [[0, 1], [−1, 0]].
/// n + 2: γᵢ ⊗ σₓ for the old generators, then I ⊗ τ₁ and I ⊗ τ₂ with τ the
/// n = 2 pair.
pub fn build_gamma<T: RealScalar>(n: usize) -> Result<GammaRep<T>, CliffordError> {
    if n == 0 {
        return Err(CliffordError::ZeroDimension);
    }
    let tau1 = mat2::<T>([[(0, 1), (0, 0)], [(0, 0), (0, -1)]]);
    let tau2 = mat2::<T>([[(0, 0), (1, 0)], [(-1, 0), (0, 0)]]);
    let sigma = mat2::<T>([[(0, 0), (1, 0)], [(1, 0), (0, 0)]]);

    let mut gammas = if n % 2 == 1 {
        vec![Matrix::from_fn(1, 1, |_, _| c::<T>(0, 1))]
    } else {
        vec![tau1.clone(), tau2.clone()]
    };
    let mut dim = gammas.len();
    while dim < n {
        let rank = gammas[0].rows();
        let id = Matrix::identity(rank);
        let mut next: Vec<_> = gammas.iter().map(|g| g.kron(&sigma)).collect();
        next.push(id.kron(&tau1));
        next.push(id.kron(&tau2));
        gammas = next;
        dim += 2;
    }
    let rank = gammas[0].rows();
    debug_assert_eq!(rank, spinor_rank(n));
    Ok(GammaRep { dim: n, rank, gammas })
}

impl<T: RealScalar> GammaRep<T> {
    /// Wraps arbitrary square matrices; only shapes are validated.
    pub fn from_matrices(gammas: Vec<Matrix<Complex<T>>>) -> Result<Self, CliffordError> {
        let rank = gammas.first().ok_or(CliffordError::ZeroDimension)?.rows();
        for (index, g) in gammas.iter().enumerate() {
            if g.rows() != rank || g.cols() != rank {
                return Err(CliffordError::BadGenerator { index, rows: g.rows(), cols: g.cols(), rank });
            }
        }
        Ok(Self { dim: gammas.len(), rank, gammas })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gamma(&self, i: usize) -> &Matrix<Complex<T>> {
        &self.gammas[i]
    }

    pub fn gammas(&self) -> &[Matrix<Complex<T>>] {
        &self.gammas
    }

    /// `Σ vᵢγᵢ` for real coefficients.
    pub fn matrix_of(&self, v: &[T]) -> Result<Matrix<Complex<T>>, CliffordError> {
        if v.len() != self.dim {
            return Err(CliffordError::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        let mut m = Matrix::zeros(self.rank, self.rank);
        for (vi, g) in v.iter().zip(&self.gammas) {
            if !vi.is_zero() {
                m = &m + &g.scale(&Complex::new(vi.clone(), T::zero()));
            }
        }
        Ok(m)
    }

    /// Converts the exact entries into another real scalar type.
    pub fn convert<U: RealScalar>(&self) -> GammaRep<U> {
        let conv = |x: &T| U::from_rational(&x.to_rational().expect("finite entry"));
        GammaRep {
            dim: self.dim,
            rank: self.rank,
            gammas: self
                .gammas
                .iter()
                .map(|g| g.map(|z| Complex::new(conv(&z.re), conv(&z.im))))
                .collect(),
        }
    }
}

/// A tangent vector with real components.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordVector<T> {
    pub components: Vec<T>,
}

impl<T: RealScalar> CliffordVector<T> {
    pub fn new(components: Vec<T>) -> Self {
        Self { components }
    }

    pub fn basis(n: usize, i: usize) -> Self {
        Self::new((0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
    }

    pub fn norm_sqr(&self) -> T {
        self.components.iter().fold(T::zero(), |acc, x| acc + x.clone() * x.clone())
    }

    pub fn dot(&self, other: &Self) -> T {
        self.components
            .iter()
            .zip(&other.components)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn matrix(&self, rep: &GammaRep<T>) -> Result<Matrix<Complex<T>>, CliffordError> {
        rep.matrix_of(&self.components)
    }
}

/// Clifford multiplication `v · s = (Σ vᵢγᵢ) s`.
pub fn clifford_action<T: RealScalar>(
    v: &CliffordVector<T>,
    s: &[Complex<T>],
    rep: &GammaRep<T>,
) -> Result<Vec<Complex<T>>, CliffordError> {
    if s.len() != rep.rank() {
        return Err(CliffordError::DimensionMismatch { expected: rep.rank(), got: s.len() });
    }
    Ok(v.matrix(rep)?.mul_vec(s))
}

/// `(1 + v)⁻¹ = (1 − v) / (1 + |v|²)`, always defined since `v² = −|v|²`.
pub fn one_plus_v_inverse<T: RealScalar>(
    v: &CliffordVector<T>,
    rep: &GammaRep<T>,
) -> Result<Matrix<Complex<T>>, CliffordError> {
    let m = v.matrix(rep)?;
    let id = Matrix::identity(rep.rank());
    let denom = T::one() + v.norm_sqr();
    let scale = Complex::new(T::one() / denom, T::zero());
    Ok((&id - &m).scale(&scale))
}

/// Outcome of checking the defining relations of a representation.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport {
    pub holds: bool,
    /// Largest `|entry|₁` of `γᵢγⱼ + γⱼγᵢ + 2δᵢⱼI` over all pairs.
    pub max_anticommutator_deviation: f64,
    /// Largest `|entry|₁` of `γᵢ + γᵢ*`.
    pub max_skew_deviation: f64,
}

fn entry_size<T: RealScalar>(z: &Complex<T>) -> f64 {
    z.re.abs().to_f64_lossy() + z.im.abs().to_f64_lossy()
}

fn conj_transpose<T: RealScalar>(m: &Matrix<Complex<T>>) -> Matrix<Complex<T>> {
    Matrix::from_fn(m.cols(), m.rows(), |i, j| m[(j, i)].conj())
}

/// Checks both invariants; `holds` is decided by exact zero tests.
pub fn relations_check<T: RealScalar>(rep: &GammaRep<T>) -> RelationReport {
    let n = rep.dim();
    let id = Matrix::<Complex<T>>::identity(rep.rank());
    let two = Complex::new(T::from_int(2), T::zero());
    let mut exact = true;
    let mut max_anti = 0.0f64;
    let mut max_skew = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let gi = rep.gamma(i);
            let gj = rep.gamma(j);
            let mut anti = &(gi * gj) + &(gj * gi);
            if i == j {
                anti = &anti + &id.scale(&two);
            }
            exact &= anti.is_zero_matrix();
            max_anti = anti.entries().iter().map(entry_size).fold(max_anti, f64::max);
        }
        let skew = rep.gamma(i) + &conj_transpose(rep.gamma(i));
        exact &= skew.is_zero_matrix();
        max_skew = skew.entries().iter().map(entry_size).fold(max_skew, f64::max);
    }
    RelationReport { holds: exact, max_anticommutator_deviation: max_anti, max_skew_deviation: max_skew }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = BigRational;

    fn ci(re: i64, im: i64) -> Complex<Q> {
        Complex::new(rat(re, 1), rat(im, 1))
    }

    fn hermitian_inner(a: &[Complex<Q>], b: &[Complex<Q>]) -> Complex<Q> {
        a.iter().zip(b).fold(ci(0, 0), |acc, (x, y)| acc + x.conj() * y.clone())
    }

    #[test]
    fn n1_is_a_square_root_of_minus_one() {
        let rep = build_gamma::<Q>(1).unwrap();
        assert_eq!(rep.rank(), 1);
        assert_eq!(rep.gamma(0)[(0, 0)], ci(0, 1));
        let sq = rep.gamma(0) * rep.gamma(0);
        assert_eq!(sq[(0, 0)], ci(-1, 0));
    }

    #[test]
    fn n2_matches_fixed_base_case() {
        let rep = build_gamma::<Q>(2).unwrap();
        let g1 = Matrix::from_rows(vec![vec![ci(0, 1), ci(0, 0)], vec![ci(0, 0), ci(0, -1)]]);
        let g2 = Matrix::from_rows(vec![vec![ci(0, 0), ci(1, 0)], vec![ci(-1, 0), ci(0, 0)]]);
        assert_eq!(rep.gamma(0), &g1);
        assert_eq!(rep.gamma(1), &g2);
        // Brute-force relation oracle, written out entry by entry.
        for (a, b, expect) in [(&g1, &g1, -2), (&g2, &g2, -2), (&g1, &g2, 0)] {
            let anti = &(a * b) + &(b * a);
            for i in 0..2 {
                for j in 0..2 {
                    let want = if i == j { ci(expect, 0) } else { ci(0, 0) };
                    assert_eq!(anti[(i, j)], want);
                }
            }
        }
        let product = &g1 * &g2;
        assert_eq!(product, Matrix::from_rows(vec![vec![ci(0, 0), ci(0, 1)], vec![ci(0, 1), ci(0, 0)]]));
    }

    #[test]
    fn ranks_and_relations_up_to_six() {
        for n in 1..=6 {
            let rep = build_gamma::<Q>(n).unwrap();
            assert_eq!(rep.rank(), spinor_rank(n));
            assert_eq!(rep.gammas().len(), n);
            let report = relations_check(&rep);
            assert!(report.holds, "n = {n}: {report:?}");
            assert_eq!(report.max_anticommutator_deviation, 0.0);
        }
        assert_eq!(build_gamma::<Q>(3).unwrap().rank(), 2);
        assert!(matches!(build_gamma::<Q>(0), Err(CliffordError::ZeroDimension)));
    }

    #[test]
    fn duplicate_generator_fails_check() {
        let rep = build_gamma::<Q>(2).unwrap();
        let bad = GammaRep::from_matrices(vec![rep.gamma(0).clone(), rep.gamma(0).clone()]).unwrap();
        let report = relations_check(&bad);
        assert!(!report.holds);
        assert_eq!(report.max_anticommutator_deviation, 2.0);
    }

    #[test]
    fn perturbed_entry_fails_check() {
        let rep = build_gamma::<Q>(3).unwrap();
        let mut g = rep.gammas().to_vec();
        g[1][(0, 1)] = g[1][(0, 1)].clone() + ci(1, 0);
        let report = relations_check(&GammaRep::from_matrices(g).unwrap());
        assert!(!report.holds);
        assert!(report.max_anticommutator_deviation >= 1.0);
    }

    #[test]
    fn clifford_action_basic_cases() {
        let rep = build_gamma::<Q>(3).unwrap();
        let s = vec![ci(1, 2), ci(-3, 1)];
        let zero = CliffordVector::new(vec![rat(0, 1); 3]);
        assert_eq!(clifford_action(&zero, &s, &rep).unwrap(), vec![ci(0, 0); 2]);
        for i in 0..3 {
            let e = CliffordVector::<Q>::basis(3, i);
            assert_eq!(clifford_action(&e, &s, &rep).unwrap(), rep.gamma(i).mul_vec(&s));
        }
        let v = CliffordVector::new(vec![rat(1, 2), rat(-2, 3), rat(5, 1)]);
        let once = clifford_action(&v, &s, &rep).unwrap();
        let twice = clifford_action(&v, &once, &rep).unwrap();
        let minus_norm = Complex::new(-v.norm_sqr(), rat(0, 1));
        let expect: Vec<_> = s.iter().map(|x| x.clone() * minus_norm.clone()).collect();
        assert_eq!(twice, expect);
        assert!(matches!(
            clifford_action(&v, &s[..1], &rep),
            Err(CliffordError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn one_plus_v_inverse_cases() {
        let rep = build_gamma::<Q>(3).unwrap();
        let id = Matrix::identity(2);
        let zero = CliffordVector::new(vec![rat(0, 1); 3]);
        assert_eq!(one_plus_v_inverse(&zero, &rep).unwrap(), id);

        let unit = CliffordVector::<Q>::basis(3, 1);
        let half = Complex::new(rat(1, 2), rat(0, 1));
        let expect = (&id - &unit.matrix(&rep).unwrap()).scale(&half);
        assert_eq!(one_plus_v_inverse(&unit, &rep).unwrap(), expect);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let v = CliffordVector::new(
                (0..3).map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=7))).collect(),
            );
            let m = one_plus_v_inverse(&v, &rep).unwrap();
            let one_plus = &id + &v.matrix(&rep).unwrap();
            assert_eq!(&m * &one_plus, id);
            assert_eq!(&one_plus * &m, id);
        }
    }

    #[test]
    fn polarized_relation_and_skew_adjointness() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=4 {
            let rep = build_gamma::<Q>(n).unwrap();
            let r = rep.rank();
            let id = Matrix::<Complex<Q>>::identity(r);
            for _ in 0..10 {
                let mut rv = || CliffordVector::new((0..n).map(|_| rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))).collect());
                let v = rv();
                let w = rv();
                let mv = v.matrix(&rep).unwrap();
                let mw = w.matrix(&rep).unwrap();
                let lhs = &(&mv * &mw) + &(&mw * &mv);
                let rhs = id.scale(&Complex::new(-rat(2, 1) * v.dot(&w), rat(0, 1)));
                assert_eq!(lhs, rhs);

                let s1: Vec<_> = (0..r).map(|_| ci(rng.gen_range(-4..=4), rng.gen_range(-4..=4))).collect();
                let s2: Vec<_> = (0..r).map(|_| ci(rng.gen_range(-4..=4), rng.gen_range(-4..=4))).collect();
                let sum = hermitian_inner(&mv.mul_vec(&s1), &s2) + hermitian_inner(&s1, &mv.mul_vec(&s2));
                assert_eq!(sum, ci(0, 0));
            }
        }
    }

    #[test]
    fn float_conversion_preserves_relations() {
        let rep = build_gamma::<Q>(4).unwrap().convert::<f64>();
        let report = relations_check(&rep);
        assert!(report.holds);
    }
}
