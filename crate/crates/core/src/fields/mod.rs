//! Sampled sections on flat tori and the spectral Dirac, `d + δ` and Laplace
//! operators acting on them.
//!
//! All derivatives are Fourier multipliers, so every identity between flat
//! operators holds up to transform round-off on band-limited data. Only flat
//! metrics are modelled: the curvature endomorphism of the Weitzenböck
//! formula is identically zero here.

mod analytic;
mod grid;
mod identities;

use num_complex::Complex;
use thiserror::Error;

use crate::clifford::GammaRep;
use crate::scalar::Real;

pub use analytic::{
    analytic_library, library_names, AnalyticField, AnalyticParams, AnalyticBody, AnalyticScalar, Domain, FieldKind, FieldSource,
    FormCoefficient, MixedFormSource, ScalarFunction, ScalarKind, TrigSeries, VectorKind,
};
pub use grid::{FlatTorusGrid, MAX_DIM, MIN_RESOLUTION};
pub use identities::{operator_identity_suite, random_band_limited, IdentityReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("torus dimension {0} outside 1..=3")]
    Dimension(usize),
    #[error("resolution {0} must be a power of two and at least 8")]
    Resolution(usize),
    #[error("periods must be positive and finite")]
    Period,
    #[error("offset must lie in [0, spacing) on every axis")]
    Offset,
    #[error("expected {expected} components of length {len}, got {got}")]
    Shape { expected: usize, len: usize, got: usize },
    #[error("representation acts on ℝ^{rep}, grid is {grid}-dimensional")]
    RepMismatch { rep: usize, grid: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("eigenvalue must be positive, got {0}")]
    NonPositiveEigenvalue(f64),
    #[error("not an eigenfunction: relative residual {0:e}")]
    NotEigenfunction(f64),
    #[error("no lattice vector ξ with |ξ| = {0}")]
    EmptyEigenspace(f64),
    #[error("wavevector exceeds the grid's resolvable band")]
    Unresolved,
    #[error("unknown analytic field {0:?}")]
    UnknownField(String),
    #[error("invalid parameter for {field}: {reason}")]
    BadParameter { field: String, reason: String },
}

pub type Values<T> = Vec<Complex<T>>;

fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Transforms every input component, applies a pointwise map in frequency
/// space, and transforms the `n_out` results back.
fn spectral_map<T: Real>(
    grid: &FlatTorusGrid<T>,
    inputs: &[Values<T>],
    n_out: usize,
    f: impl Fn(&[T], &[Complex<T>], &mut [Complex<T>]),
) -> Vec<Values<T>> {
    let hats: Vec<Values<T>> = inputs.iter().map(|c| grid.forward(c)).collect();
    let mut outs = vec![vec![czero(); grid.len()]; n_out];
    let mut inp = vec![czero(); inputs.len()];
    let mut out = vec![czero(); n_out];
    let (n, res) = (grid.dim(), grid.resolution());
    let waves: Vec<Vec<T>> = (0..n).map(|a| (0..res).map(|k| grid.wavenumber(a, k)).collect()).collect();
    let mut idx = vec![0; n];
    let mut xi = vec![T::zero(); n];
    for k in 0..grid.len() {
        for (a, x) in xi.iter_mut().enumerate() {
            *x = waves[a][idx[a]];
        }
        for (slot, h) in inp.iter_mut().zip(&hats) {
            *slot = h[k];
        }
        out.iter_mut().for_each(|o| *o = czero());
        f(&xi, &inp, &mut out);
        for (o, v) in outs.iter_mut().zip(&out) {
            o[k] = *v;
        }
        // Advance the multi-index, last axis fastest.
        for a in (0..n).rev() {
            idx[a] += 1;
            if idx[a] < res {
                break;
            }
            idx[a] = 0;
        }
    }
    outs.iter_mut().for_each(|o| grid.transform(o, true));
    outs
}

fn inner<T: Real>(grid: &FlatTorusGrid<T>, a: &[Values<T>], b: &[Values<T>]) -> Complex<T> {
    let sum = a.iter().zip(b).flat_map(|(x, y)| x.iter().zip(y)).fold(czero(), |acc, (x, y)| acc + x * y.conj());
    sum.scale(grid.cell_volume())
}

fn norm<T: Real>(grid: &FlatTorusGrid<T>, a: &[Values<T>]) -> T {
    inner(grid, a, a).re.sqrt()
}

fn check_shape<T: Real>(grid: &FlatTorusGrid<T>, comps: &[Values<T>], expected: usize) -> Result<(), FieldError> {
    if comps.len() != expected || comps.iter().any(|c| c.len() != grid.len()) {
        return Err(FieldError::Shape {
            expected,
            len: grid.len(),
            got: comps.iter().map(Vec::len).find(|&l| l != grid.len()).unwrap_or(comps.len()),
        });
    }
    Ok(())
}

fn combine<T: Real>(a: &[Values<T>], b: &[Values<T>], f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Vec<Values<T>> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(&u, &v)| f(u, v)).collect()).collect()
}

/// A complex scalar function sampled on a torus grid.
#[derive(Clone, Debug)]
pub struct ScalarField<T: Real> {
    grid: FlatTorusGrid<T>,
    values: Values<T>,
}

impl<T: Real> ScalarField<T> {
    pub fn new(grid: FlatTorusGrid<T>, values: Values<T>) -> Result<Self, FieldError> {
        check_shape(&grid, std::slice::from_ref(&values), 1)?;
        Ok(Self { grid, values })
    }

    pub fn from_real_fn(grid: FlatTorusGrid<T>, f: impl Fn(&[T]) -> T) -> Self {
        let values = grid.sample(|x| Complex::new(f(x), T::zero()));
        Self { grid, values }
    }

    pub fn grid(&self) -> &FlatTorusGrid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn norm(&self) -> T {
        norm(&self.grid, std::slice::from_ref(&self.values))
    }

    /// `(∂₁f, …, ∂ₙf)`.
    pub fn gradient(&self) -> Vec<Values<T>> {
        let n = self.grid.dim();
        spectral_map(&self.grid, std::slice::from_ref(&self.values), n, |xi, inp, out| {
            for (o, &x) in out.iter_mut().zip(xi) {
                *o = inp[0] * Complex::new(T::zero(), x);
            }
        })
    }

    /// `Δf = −Σ∂ᵢ²f` (nonnegative spectrum).
    pub fn laplacian(&self) -> Self {
        let values = spectral_map(&self.grid, std::slice::from_ref(&self.values), 1, |xi, inp, out| {
            out[0] = inp[0].scale(xi.iter().fold(T::zero(), |a, &x| a + x * x));
        })
        .remove(0);
        Self { grid: self.grid.clone(), values }
    }
}

/// A spinor field with values in `ℂ^r`, `r` the rank of the representation.
#[derive(Clone, Debug)]
pub struct SpinorField<T: Real> {
    grid: FlatTorusGrid<T>,
    rep: GammaRep<T>,
    comps: Vec<Values<T>>,
}

impl<T: Real> SpinorField<T> {
    pub fn new(grid: FlatTorusGrid<T>, rep: GammaRep<T>, comps: Vec<Values<T>>) -> Result<Self, FieldError> {
        if rep.dim() != grid.dim() {
            return Err(FieldError::RepMismatch { rep: rep.dim(), grid: grid.dim() });
        }
        check_shape(&grid, &comps, rep.rank())?;
        Ok(Self { grid, rep, comps })
    }

    /// The parallel spinor with constant value `sigma`.
    pub fn constant(grid: FlatTorusGrid<T>, rep: GammaRep<T>, sigma: &[Complex<T>]) -> Result<Self, FieldError> {
        let comps = sigma.iter().map(|&s| vec![s; grid.len()]).collect();
        Self::new(grid, rep, comps)
    }

    /// `σ·e^{i⟨ξ, x⟩}` with `ξₐ = 2π mₐ / Lₐ`.
    pub fn plane_wave(
        grid: FlatTorusGrid<T>,
        rep: GammaRep<T>,
        sigma: &[Complex<T>],
        modes: &[i64],
    ) -> Result<Self, FieldError> {
        let res = grid.resolution() as i64;
        if modes.len() != grid.dim() || modes.iter().any(|m| 2 * m.abs() >= res) {
            return Err(FieldError::Unresolved);
        }
        let xi: Vec<T> = modes.iter().zip(grid.periods()).map(|(&m, &l)| T::TAU() * T::from_i64(m).expect("mode") / l).collect();
        let phase = grid.sample(|x| {
            let t = xi.iter().zip(x).fold(T::zero(), |a, (&k, &y)| a + k * y);
            Complex::new(t.cos(), t.sin())
        });
        let comps = sigma.iter().map(|&s| phase.iter().map(|&p| p * s).collect()).collect();
        Self::new(grid, rep, comps)
    }

    pub fn grid(&self) -> &FlatTorusGrid<T> {
        &self.grid
    }

    pub fn rep(&self) -> &GammaRep<T> {
        &self.rep
    }

    pub fn components(&self) -> &[Values<T>] {
        &self.comps
    }

    pub fn value_at(&self, node: usize) -> Vec<Complex<T>> {
        self.comps.iter().map(|c| c[node]).collect()
    }

    pub fn norm(&self) -> T {
        norm(&self.grid, &self.comps)
    }

    /// `L²` inner product `∫ ⟨s₁, s₂⟩`, conjugate-linear in the second slot.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        inner(&self.grid, &self.comps, &other.comps)
    }

    fn with(&self, comps: Vec<Values<T>>) -> Self {
        Self { grid: self.grid.clone(), rep: self.rep.clone(), comps }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.with(combine(&self.comps, &other.comps, |a, b| a - b))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.with(combine(&self.comps, &other.comps, |a, b| a + b))
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.with(self.comps.iter().map(|v| v.iter().map(|&x| x * c).collect()).collect())
    }

    /// Pointwise product `f·s`.
    pub fn multiply(&self, f: &ScalarField<T>) -> Self {
        self.with(self.comps.iter().map(|v| v.iter().zip(&f.values).map(|(&x, &y)| x * y).collect()).collect())
    }

    /// Pointwise `Σ vᵢ(x)·γᵢ s(x)`, i.e. Clifford multiplication by a vector field.
    pub fn clifford_multiply(&self, v: &[Values<T>]) -> Self {
        let r = self.rep.rank();
        let mut out = vec![vec![czero(); self.grid.len()]; r];
        for (i, vi) in v.iter().enumerate() {
            let g = self.rep.gamma(i);
            for a in 0..r {
                for b in 0..r {
                    let gab = g[(a, b)];
                    if gab == czero() {
                        continue;
                    }
                    for ((o, &x), &s) in out[a].iter_mut().zip(vi).zip(&self.comps[b]) {
                        *o = *o + gab * x * s;
                    }
                }
            }
        }
        self.with(out)
    }

    /// `Ds = Σ γᵢ ∂ᵢ s`, as the multiplier `iγ(ξ)`.
    pub fn dirac(&self) -> Self {
        let r = self.rep.rank();
        let gammas: Vec<Vec<Complex<T>>> =
            self.rep.gammas().iter().map(|g| (0..r * r).map(|k| g[(k / r, k % r)]).collect()).collect();
        self.with(spectral_map(&self.grid, &self.comps, r, |xi, inp, out| {
            for (g, &x) in gammas.iter().zip(xi) {
                let ix = Complex::new(T::zero(), x);
                for a in 0..r {
                    for b in 0..r {
                        out[a] = out[a] + ix * g[a * r + b] * inp[b];
                    }
                }
            }
        }))
    }

    /// The connection Laplacian `∇*∇ = −Σ∂ᵢ²` acting componentwise.
    pub fn rough_laplacian(&self) -> Self {
        let r = self.rep.rank();
        self.with(spectral_map(&self.grid, &self.comps, r, |xi, inp, out| {
            let k2 = xi.iter().fold(T::zero(), |a, &x| a + x * x);
            for (o, i) in out.iter_mut().zip(inp) {
                *o = i.scale(k2);
            }
        }))
    }

    /// Spatial → Fourier → spatial, for round-trip checks.
    pub fn round_trip(&self) -> Self {
        self.with(self.comps.iter().map(|c| self.grid.inverse(&self.grid.forward(c))).collect())
    }
}

/// Sign of moving basis vector `j` past the lower-index vectors of `mask`.
fn exterior_sign(mask: usize, j: usize) -> i32 {
    if (mask & ((1 << j) - 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// A section of the full exterior bundle `Λ*T*Tⁿ`, components indexed by
/// bitmask subsets `I ⊆ {1, …, n}` of a constant coframe.
#[derive(Clone, Debug)]
pub struct FormField<T: Real> {
    grid: FlatTorusGrid<T>,
    comps: Vec<Values<T>>,
}

impl<T: Real> FormField<T> {
    pub fn new(grid: FlatTorusGrid<T>, comps: Vec<Values<T>>) -> Result<Self, FieldError> {
        check_shape(&grid, &comps, 1 << grid.dim())?;
        Ok(Self { grid, comps })
    }

    pub fn zero(grid: FlatTorusGrid<T>) -> Self {
        let comps = vec![vec![czero(); grid.len()]; 1 << grid.dim()];
        Self { grid, comps }
    }

    /// The 0-form `f`.
    pub fn from_scalar(f: &ScalarField<T>) -> Self {
        let mut out = Self::zero(f.grid.clone());
        out.comps[0] = f.values.clone();
        out
    }

    pub fn grid(&self) -> &FlatTorusGrid<T> {
        &self.grid
    }

    pub fn components(&self) -> &[Values<T>] {
        &self.comps
    }

    pub fn component(&self, mask: usize) -> &[Complex<T>] {
        &self.comps[mask]
    }

    pub fn set_component(&mut self, mask: usize, values: Values<T>) {
        assert_eq!(values.len(), self.grid.len());
        self.comps[mask] = values;
    }

    /// Projection onto `Λᵏ`.
    pub fn degree_part(&self, k: u32) -> Self {
        let comps = self
            .comps
            .iter()
            .enumerate()
            .map(|(mask, c)| if mask.count_ones() == k { c.clone() } else { vec![czero(); c.len()] })
            .collect();
        Self { grid: self.grid.clone(), comps }
    }

    pub fn norm(&self) -> T {
        norm(&self.grid, &self.comps)
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        inner(&self.grid, &self.comps, &other.comps)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { grid: self.grid.clone(), comps: combine(&self.comps, &other.comps, |a, b| a - b) }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self { grid: self.grid.clone(), comps: self.comps.iter().map(|v| v.iter().map(|&x| x * c).collect()).collect() }
    }

    fn exterior_multiplier(&self, wedge: bool, contract: bool) -> Self {
        let n = self.grid.dim();
        // (source mask, axis, target mask, signed factor) for every active term.
        let mut terms = Vec::new();
        for mask in 0..1usize << n {
            for j in 0..n {
                let sign = T::from_i32(exterior_sign(mask, j)).expect("sign");
                if mask & (1 << j) == 0 {
                    if wedge {
                        terms.push((mask, j, mask | (1 << j), sign));
                    }
                } else if contract {
                    terms.push((mask, j, mask & !(1 << j), -sign));
                }
            }
        }
        let comps = spectral_map(&self.grid, &self.comps, 1 << n, |xi, inp, out| {
            for &(from, j, to, sign) in &terms {
                out[to] = out[to] + Complex::new(T::zero(), xi[j] * sign) * inp[from];
            }
        });
        Self { grid: self.grid.clone(), comps }
    }

    /// Exterior derivative `d = Σ eⱼ∧ ∂ⱼ`.
    pub fn d(&self) -> Self {
        self.exterior_multiplier(true, false)
    }

    /// Codifferential `δ = −Σ eⱼ⌟ ∂ⱼ`, the formal adjoint of `d`.
    pub fn delta(&self) -> Self {
        self.exterior_multiplier(false, true)
    }

    pub fn d_plus_delta(&self) -> Self {
        self.exterior_multiplier(true, true)
    }

    /// Hodge Laplacian `dδ + δd`, which is `|ξ|²` on every component.
    pub fn laplace(&self) -> Self {
        let comps = spectral_map(&self.grid, &self.comps, self.comps.len(), |xi, inp, out| {
            let k2 = xi.iter().fold(T::zero(), |a, &x| a + x * x);
            for (o, i) in out.iter_mut().zip(inp) {
                *o = i.scale(k2);
            }
        });
        Self { grid: self.grid.clone(), comps }
    }

    /// Pointwise Euclidean norm of all components.
    pub fn pointwise_norm(&self) -> Vec<T> {
        (0..self.grid.len()).map(|k| self.comps.iter().fold(T::zero(), |a, c| a + c[k].norm_sqr()).sqrt()).collect()
    }
}

/// `ω = √λ·f + df` for a Laplace eigenfunction `Δf = λf`, which satisfies
/// `(d + δ)ω = √λ·ω` and vanishes exactly where `f` and `df` both do.
#[derive(Clone, Debug)]
pub struct MixedEigenform<T: Real> {
    pub f: ScalarField<T>,
    pub lambda: T,
    pub omega: FormField<T>,
}

impl<T: Real> MixedEigenform<T> {
    /// `‖(d+δ)ω − √λω‖ / ‖ω‖`.
    pub fn residual(&self) -> T {
        let lhs = self.omega.d_plus_delta();
        let rhs = self.omega.scale(Complex::new(self.lambda.sqrt(), T::zero()));
        lhs.sub(&rhs).norm() / self.omega.norm()
    }
}

const EIGEN_TOLERANCE: f64 = 1e-8;

pub fn mixed_eigenform<T: Real>(f: &ScalarField<T>, lambda: T) -> Result<MixedEigenform<T>, FieldError> {
    if lambda.is_nan() || lambda <= T::zero() {
        return Err(FieldError::NonPositiveEigenvalue(lambda.to_f64_lossy()));
    }
    let lap = f.laplacian();
    let diff: Values<T> = lap.values.iter().zip(&f.values).map(|(&a, &b)| a - b.scale(lambda)).collect();
    let residual = norm(&f.grid, std::slice::from_ref(&diff)) / f.norm();
    if residual.is_nan() || residual.to_f64_lossy() >= EIGEN_TOLERANCE {
        return Err(FieldError::NotEigenfunction(residual.to_f64_lossy()));
    }
    let mut omega = FormField::from_scalar(f);
    omega.comps[0] = f.values.iter().map(|v| v.scale(lambda.sqrt())).collect();
    for (j, g) in f.gradient().into_iter().enumerate() {
        omega.comps[1 << j] = g;
    }
    Ok(MixedEigenform { f: f.clone(), lambda, omega })
}

/// Orthonormal basis of the `λ`-eigenspace of the Dirac operator on the
/// flat torus, from plane waves `σ e^{i⟨ξ,x⟩}` with `iγ(ξ)σ = λσ`.
pub fn dirac_plane_eigenbasis<T: Real>(
    grid: &FlatTorusGrid<T>,
    rep: &GammaRep<T>,
    lambda: T,
) -> Result<Vec<SpinorField<T>>, FieldError> {
    if rep.dim() != grid.dim() {
        return Err(FieldError::RepMismatch { rep: rep.dim(), grid: grid.dim() });
    }
    let r = rep.rank();
    let n = grid.dim();
    let vol_scale = Complex::new(T::one() / grid.volume().sqrt(), T::zero());
    let tol = T::lit(1e-9) * (T::one() + lambda.abs());
    let mut basis = Vec::new();
    let bound: Vec<i64> = grid
        .periods()
        .iter()
        .map(|&l| (lambda.abs() * l / T::TAU()).ceil().to_i64().expect("finite bound") + 1)
        .collect();
    let mut modes = vec![0i64; n];
    let mut lattice = Vec::new();
    enumerate_box(&bound, 0, &mut modes, &mut lattice);
    for m in lattice {
        let xi: Vec<T> = m.iter().zip(grid.periods()).map(|(&k, &l)| T::TAU() * T::from_i64(k).expect("mode") / l).collect();
        let norm_xi = xi.iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
        if (norm_xi - lambda.abs()).abs() > tol {
            continue;
        }
        if m.iter().any(|k| 2 * k.abs() >= grid.resolution() as i64) {
            return Err(FieldError::Unresolved);
        }
        // Projector onto the λ-eigenspace of the Hermitian matrix iγ(ξ).
        let symbol = rep.matrix_of(&xi).expect("dimension checked").map(|z| z * Complex::new(T::zero(), T::one()));
        let projector: Vec<Vec<Complex<T>>> = (0..r)
            .map(|a| {
                (0..r)
                    .map(|b| {
                        if lambda == T::zero() {
                            if a == b { Complex::new(T::one(), T::zero()) } else { czero() }
                        } else {
                            let id = if a == b { T::one() } else { T::zero() };
                            (Complex::new(id, T::zero()) + symbol[(a, b)].unscale(lambda)).unscale(T::lit(2.0))
                        }
                    })
                    .collect()
            })
            .collect();
        for sigma in gram_schmidt((0..r).map(|b| (0..r).map(|a| projector[a][b]).collect()).collect()) {
            let sigma: Vec<Complex<T>> = sigma.iter().map(|&s| s * vol_scale).collect();
            basis.push(SpinorField::plane_wave(grid.clone(), rep.clone(), &sigma, &m)?);
        }
    }
    if basis.is_empty() {
        return Err(FieldError::EmptyEigenspace(lambda.to_f64_lossy()));
    }
    Ok(basis)
}

fn enumerate_box(bound: &[i64], axis: usize, current: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if axis == bound.len() {
        out.push(current.clone());
        return;
    }
    for k in -bound[axis]..=bound[axis] {
        current[axis] = k;
        enumerate_box(bound, axis + 1, current, out);
    }
}

/// Orthonormalizes the vectors, dropping those dependent on earlier ones.
fn gram_schmidt<T: Real>(vectors: Vec<Vec<Complex<T>>>) -> Vec<Vec<Complex<T>>> {
    let mut out: Vec<Vec<Complex<T>>> = Vec::new();
    for mut v in vectors {
        for u in &out {
            let c = v.iter().zip(u).fold(czero::<T>(), |a, (&x, &y)| a + x * y.conj());
            v.iter_mut().zip(u).for_each(|(x, &y)| *x = *x - c * y);
        }
        let len = v.iter().fold(T::zero(), |a, x| a + x.norm_sqr()).sqrt();
        if len > T::lit(1e-6) {
            out.push(v.iter().map(|x| x.unscale(len)).collect());
        }
    }
    out
}

/// Writes node coordinates followed by the real and imaginary part of each
/// component, one node per line.
pub fn write_field_csv<T: Real, W: std::io::Write>(
    grid: &FlatTorusGrid<T>,
    comps: &[Values<T>],
    mut out: W,
) -> std::io::Result<()> {
    let coords: Vec<String> = (1..=grid.dim()).map(|i| format!("x{i}")).collect();
    let values: Vec<String> = (0..comps.len()).flat_map(|c| [format!("re{c}"), format!("im{c}")]).collect();
    writeln!(out, "{},{}", coords.join(","), values.join(","))?;
    for k in 0..grid.len() {
        let x: Vec<String> = grid.coords(k).iter().map(|v| format!("{}", v.to_f64_lossy())).collect();
        let v: Vec<String> =
            comps.iter().flat_map(|c| [format!("{}", c[k].re.to_f64_lossy()), format!("{}", c[k].im.to_f64_lossy())]).collect();
        writeln!(out, "{},{}", x.join(","), v.join(","))?;
    }
    Ok(())
}
