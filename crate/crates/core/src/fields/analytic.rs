//! Closed-form example fields and the continuous-evaluation interface used
//! by nodal-set extraction.

use std::f64::consts::{PI, TAU};

use num_complex::Complex;

use super::{FieldError, FlatTorusGrid, Values};
use crate::scalar::Real;

/// An axis-aligned box, optionally with periodic identification.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub periodic: bool,
}

impl Domain {
    pub fn cube(n: usize, lower: f64, upper: f64, periodic: bool) -> Self {
        Self { lower: vec![lower; n], upper: vec![upper; n], periodic }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn extent(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    /// Maps a point into the fundamental box (periodic domains only).
    pub fn wrap(&self, x: &mut [f64]) {
        if self.periodic {
            for (a, v) in x.iter_mut().enumerate() {
                *v = self.lower[a] + (*v - self.lower[a]).rem_euclid(self.extent(a));
            }
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.periodic || x.iter().enumerate().all(|(a, &v)| v >= self.lower[a] && v <= self.upper[a])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    /// Real scalar: zeros are detected by sign changes.
    Scalar,
    /// Real vector (a form, a realified spinor, …): zeros are detected by
    /// a norm threshold plus Newton confirmation.
    Vector,
}

const FD_STEP: f64 = 1e-6;

/// A field that can be evaluated anywhere in its domain.
pub trait FieldSource: Sync {
    fn domain(&self) -> &Domain;
    fn kind(&self) -> FieldKind;
    fn components(&self) -> usize;
    fn eval(&self, x: &[f64], out: &mut [f64]);

    /// Row-major `components × dim` Jacobian; central differences by default.
    fn jacobian(&self, x: &[f64]) -> Vec<f64> {
        let n = self.domain().dim();
        let m = self.components();
        let mut jac = vec![0.0; m * n];
        let (mut plus, mut minus) = (vec![0.0; m], vec![0.0; m]);
        let mut y = x.to_vec();
        for a in 0..n {
            y[a] = x[a] + FD_STEP;
            self.eval(&y, &mut plus);
            y[a] = x[a] - FD_STEP;
            self.eval(&y, &mut minus);
            y[a] = x[a];
            for c in 0..m {
                jac[c * n + a] = (plus[c] - minus[c]) / (2.0 * FD_STEP);
            }
        }
        jac
    }

    fn norm_at(&self, x: &[f64]) -> f64 {
        let mut out = vec![0.0; self.components()];
        self.eval(x, &mut out);
        out.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// A smooth real function with (possibly analytic) first and second derivatives.
pub trait ScalarFunction: Sync {
    fn domain(&self) -> &Domain;
    fn value(&self, x: &[f64]) -> f64;

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        (0..x.len())
            .map(|a| {
                y[a] = x[a] + FD_STEP;
                let p = self.value(&y);
                y[a] = x[a] - FD_STEP;
                let m = self.value(&y);
                y[a] = x[a];
                (p - m) / (2.0 * FD_STEP)
            })
            .collect()
    }

    /// Row-major `n × n`.
    fn hessian(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let mut h = vec![0.0; n * n];
        let mut y = x.to_vec();
        for a in 0..n {
            y[a] = x[a] + FD_STEP;
            let p = self.gradient(&y);
            y[a] = x[a] - FD_STEP;
            let m = self.gradient(&y);
            y[a] = x[a];
            for b in 0..n {
                h[b * n + a] = (p[b] - m[b]) / (2.0 * FD_STEP);
            }
        }
        h
    }
}

impl<F: ScalarFunction> FieldSource for F {
    fn domain(&self) -> &Domain {
        ScalarFunction::domain(self)
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Scalar
    }

    fn components(&self) -> usize {
        1
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        out[0] = self.value(x);
    }

    fn jacobian(&self, x: &[f64]) -> Vec<f64> {
        self.gradient(x)
    }
}

/// `ω = √λ·f + df` as a vector field with components `(√λ f, ∂₁f, …, ∂ₙf)`.
#[derive(Clone, Debug)]
pub struct MixedFormSource<F> {
    pub f: F,
    pub sqrt_lambda: f64,
}

impl<F: ScalarFunction> MixedFormSource<F> {
    pub fn new(f: F, lambda: f64) -> Self {
        Self { f, sqrt_lambda: lambda.max(0.0).sqrt() }
    }
}

impl<F: ScalarFunction> FieldSource for MixedFormSource<F> {
    fn domain(&self) -> &Domain {
        self.f.domain()
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Vector
    }

    fn components(&self) -> usize {
        self.f.domain().dim() + 1
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        out[0] = self.sqrt_lambda * self.f.value(x);
        out[1..].copy_from_slice(&self.f.gradient(x));
    }

    fn jacobian(&self, x: &[f64]) -> Vec<f64> {
        let mut jac: Vec<f64> = self.f.gradient(x).iter().map(|g| self.sqrt_lambda * g).collect();
        jac.extend(self.f.hessian(x));
        jac
    }
}

/// Closed-form scalar functions with analytic derivatives.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarKind {
    /// `sin(m x₁) sin(n x₂)`.
    ProductSine { m: u32, n: u32 },
    /// `cos x₁ cos x₂`.
    ProductCos,
    /// `sin x₁`.
    SineWave,
    /// `Re (x₁ + i x₂)³ = x₁³ − 3x₁x₂²`.
    HarmonicCubic,
    /// `x₁² − x₂²`.
    Saddle,
    /// `x₁ − c`.
    Hyperplane { c: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticScalar {
    pub kind: ScalarKind,
    pub domain: Domain,
}

impl AnalyticScalar {
    pub fn new(kind: ScalarKind, domain: Domain) -> Self {
        Self { kind, domain }
    }
}

impl ScalarFunction for AnalyticScalar {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn value(&self, x: &[f64]) -> f64 {
        match self.kind {
            ScalarKind::ProductSine { m, n } => (m as f64 * x[0]).sin() * (n as f64 * x[1]).sin(),
            ScalarKind::ProductCos => x[0].cos() * x[1].cos(),
            ScalarKind::SineWave => x[0].sin(),
            ScalarKind::HarmonicCubic => x[0].powi(3) - 3.0 * x[0] * x[1] * x[1],
            ScalarKind::Saddle => x[0] * x[0] - x[1] * x[1],
            ScalarKind::Hyperplane { c } => x[0] - c,
        }
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        match self.kind {
            ScalarKind::ProductSine { m, n } => {
                let (a, b) = (m as f64, n as f64);
                g[0] = a * (a * x[0]).cos() * (b * x[1]).sin();
                g[1] = b * (a * x[0]).sin() * (b * x[1]).cos();
            }
            ScalarKind::ProductCos => {
                g[0] = -x[0].sin() * x[1].cos();
                g[1] = -x[0].cos() * x[1].sin();
            }
            ScalarKind::SineWave => g[0] = x[0].cos(),
            ScalarKind::HarmonicCubic => {
                g[0] = 3.0 * x[0] * x[0] - 3.0 * x[1] * x[1];
                g[1] = -6.0 * x[0] * x[1];
            }
            ScalarKind::Saddle => {
                g[0] = 2.0 * x[0];
                g[1] = -2.0 * x[1];
            }
            ScalarKind::Hyperplane { .. } => g[0] = 1.0,
        }
        g
    }

    fn hessian(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let mut h = vec![0.0; n * n];
        let mut set = |i: usize, j: usize, v: f64| {
            h[i * n + j] = v;
            h[j * n + i] = v;
        };
        match self.kind {
            ScalarKind::ProductSine { m, n: k } => {
                let (a, b) = (m as f64, k as f64);
                let f = (a * x[0]).sin() * (b * x[1]).sin();
                set(0, 0, -a * a * f);
                set(1, 1, -b * b * f);
                set(0, 1, a * b * (a * x[0]).cos() * (b * x[1]).cos());
            }
            ScalarKind::ProductCos => {
                let f = x[0].cos() * x[1].cos();
                set(0, 0, -f);
                set(1, 1, -f);
                set(0, 1, x[0].sin() * x[1].sin());
            }
            ScalarKind::SineWave => set(0, 0, -x[0].sin()),
            ScalarKind::HarmonicCubic => {
                set(0, 0, 6.0 * x[0]);
                set(1, 1, -6.0 * x[0]);
                set(0, 1, -6.0 * x[1]);
            }
            ScalarKind::Saddle => {
                set(0, 0, 2.0);
                set(1, 1, -2.0);
            }
            ScalarKind::Hyperplane { .. } => {}
        }
        h
    }
}

/// Closed-form vector fields.
#[derive(Clone, Debug, PartialEq)]
pub enum VectorKind {
    /// The form `coef(x₁)·dx₁∧…∧dx_k` in the full `2ⁿ`-component layout.
    Form { n: usize, k: usize, coef: FormCoefficient },
    /// `(Re, Im)` of `z² − 1`, a solution of the Cauchy–Riemann system.
    CrQuadratic,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FormCoefficient {
    /// `x₁`.
    Linear,
    /// `sin(2π m x₁)`.
    Sine { m: u32 },
}

impl FormCoefficient {
    fn value(&self, x1: f64) -> f64 {
        match self {
            Self::Linear => x1,
            Self::Sine { m } => (TAU * *m as f64 * x1).sin(),
        }
    }

    fn derivative(&self, x1: f64) -> f64 {
        match self {
            Self::Linear => 1.0,
            Self::Sine { m } => TAU * *m as f64 * (TAU * *m as f64 * x1).cos(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnalyticBody {
    Scalar(AnalyticScalar),
    Vector(VectorKind),
}

/// A library field with its analytic metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalyticField {
    pub name: String,
    pub domain: Domain,
    pub body: AnalyticBody,
    /// Laplace eigenvalue, when the field is an eigensection.
    pub eigenvalue: Option<f64>,
    /// Human-readable description of the exact zero set.
    pub zero_set: String,
}

impl AnalyticField {
    pub fn scalar(&self) -> Option<&AnalyticScalar> {
        match &self.body {
            AnalyticBody::Scalar(s) => Some(s),
            AnalyticBody::Vector(_) => None,
        }
    }

    /// Samples every component on a torus grid (complex, zero imaginary part).
    pub fn sample_on<T: Real>(&self, grid: &FlatTorusGrid<T>) -> Vec<Values<T>> {
        let m = self.components();
        let mut comps = vec![Vec::with_capacity(grid.len()); m];
        let mut out = vec![0.0; m];
        for k in 0..grid.len() {
            let x: Vec<f64> = grid.coords(k).iter().map(|v| v.to_f64_lossy()).collect();
            self.eval(&x, &mut out);
            for (c, &v) in comps.iter_mut().zip(&out) {
                c.push(Complex::new(T::lit(v), T::zero()));
            }
        }
        comps
    }
}

impl FieldSource for AnalyticField {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn kind(&self) -> FieldKind {
        match self.body {
            AnalyticBody::Scalar(_) => FieldKind::Scalar,
            AnalyticBody::Vector(_) => FieldKind::Vector,
        }
    }

    fn components(&self) -> usize {
        match &self.body {
            AnalyticBody::Scalar(_) => 1,
            AnalyticBody::Vector(VectorKind::Form { n, .. }) => 1 << n,
            AnalyticBody::Vector(VectorKind::CrQuadratic) => 2,
        }
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        match &self.body {
            AnalyticBody::Scalar(s) => out[0] = s.value(x),
            AnalyticBody::Vector(VectorKind::Form { k, coef, .. }) => {
                out.iter_mut().for_each(|v| *v = 0.0);
                out[(1 << k) - 1] = coef.value(x[0]);
            }
            AnalyticBody::Vector(VectorKind::CrQuadratic) => {
                out[0] = x[0] * x[0] - x[1] * x[1] - 1.0;
                out[1] = 2.0 * x[0] * x[1];
            }
        }
    }

    fn jacobian(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        match &self.body {
            AnalyticBody::Scalar(s) => s.gradient(x),
            AnalyticBody::Vector(VectorKind::Form { n: dim, k, coef }) => {
                let mut jac = vec![0.0; (1 << dim) * n];
                jac[((1 << k) - 1) * n] = coef.derivative(x[0]);
                jac
            }
            AnalyticBody::Vector(VectorKind::CrQuadratic) => vec![2.0 * x[0], -2.0 * x[1], 2.0 * x[1], 2.0 * x[0]],
        }
    }
}

/// Parameters for [`analytic_library`]; unset entries take per-field defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AnalyticParams {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub m: Option<u32>,
    pub modes: Option<(u32, u32)>,
}

pub fn library_names() -> &'static [&'static str] {
    &["cr_quadratic", "dirichlet_rect", "harmonic_codim1", "harmonic_cubic", "product_cos", "saddle", "sine_wave", "torus_eigenform"]
}

fn bad(field: &str, reason: impl Into<String>) -> FieldError {
    FieldError::BadParameter { field: field.to_string(), reason: reason.into() }
}

/// Looks up a closed-form example field by name.
pub fn analytic_library(name: &str, params: &AnalyticParams) -> Result<AnalyticField, FieldError> {
    let dim = |default: usize, min: usize| -> Result<usize, FieldError> {
        let n = params.n.unwrap_or(default);
        if n < min || n > 3 {
            return Err(bad(name, format!("dimension {n} outside {min}..=3")));
        }
        Ok(n)
    };
    let scalar = |kind: ScalarKind, domain: Domain| AnalyticBody::Scalar(AnalyticScalar::new(kind, domain));
    let field = match name {
        "harmonic_codim1" => {
            let n = dim(3, 1)?;
            let k = params.k.unwrap_or(1);
            if k == 0 || k > n {
                return Err(bad(name, "form degree k must satisfy 1 ≤ k ≤ n"));
            }
            AnalyticField {
                name: name.into(),
                domain: Domain::cube(n, -1.0, 1.0, false),
                body: AnalyticBody::Vector(VectorKind::Form { n, k, coef: FormCoefficient::Linear }),
                eigenvalue: Some(0.0),
                zero_set: "the hyperplane {x1 = 0}".into(),
            }
        }
        "torus_eigenform" => {
            let n = dim(3, 1)?;
            let k = params.k.unwrap_or(1);
            let m = params.m.unwrap_or(1);
            if k == 0 || k > n || m == 0 {
                return Err(bad(name, "need 1 ≤ k ≤ n and m ≥ 1"));
            }
            AnalyticField {
                name: name.into(),
                domain: Domain::cube(n, 0.0, 1.0, true),
                body: AnalyticBody::Vector(VectorKind::Form { n, k, coef: FormCoefficient::Sine { m } }),
                eigenvalue: Some((TAU * m as f64).powi(2)),
                zero_set: format!("{} parallel hypertori {{x1 = j/{}}}", 2 * m, 2 * m),
            }
        }
        "dirichlet_rect" => {
            let (m, n) = params.modes.unwrap_or((1, 1));
            if m == 0 || n == 0 {
                return Err(bad(name, "mode numbers must be positive"));
            }
            AnalyticField {
                name: name.into(),
                domain: Domain::cube(2, 0.0, PI, false),
                body: scalar(ScalarKind::ProductSine { m, n }, Domain::cube(2, 0.0, PI, false)),
                eigenvalue: Some((m * m + n * n) as f64),
                zero_set: format!("{} interior lines, {} nodal domains", m + n - 2, m * n),
            }
        }
        "product_cos" => {
            let n = dim(2, 2)?;
            let domain = Domain::cube(n, 0.0, TAU, true);
            AnalyticField {
                name: name.into(),
                domain: domain.clone(),
                body: scalar(ScalarKind::ProductCos, domain),
                eigenvalue: Some(2.0),
                zero_set: "{x1 = π/2, 3π/2} ∪ {x2 = π/2, 3π/2}".into(),
            }
        }
        "sine_wave" => {
            let n = dim(2, 1)?;
            let domain = Domain::cube(n, 0.0, TAU, true);
            AnalyticField {
                name: name.into(),
                domain: domain.clone(),
                body: scalar(ScalarKind::SineWave, domain),
                eigenvalue: Some(1.0),
                zero_set: "{x1 = 0, π}".into(),
            }
        }
        "cr_quadratic" => AnalyticField {
            name: name.into(),
            domain: Domain::cube(2, -2.0, 2.0, false),
            body: AnalyticBody::Vector(VectorKind::CrQuadratic),
            eigenvalue: None,
            zero_set: "the two points (±1, 0)".into(),
        },
        "harmonic_cubic" | "saddle" => {
            let domain = Domain::cube(2, -1.0, 1.0, false);
            let (kind, zeros) = if name == "saddle" {
                (ScalarKind::Saddle, "two lines crossing at 0")
            } else {
                (ScalarKind::HarmonicCubic, "three lines crossing at 0")
            };
            AnalyticField {
                name: name.into(),
                domain: domain.clone(),
                body: scalar(kind, domain),
                eigenvalue: Some(0.0),
                zero_set: zeros.into(),
            }
        }
        _ => return Err(FieldError::UnknownField(name.to_string())),
    };
    Ok(field)
}

/// Trigonometric interpolant of sampled torus components, evaluated as a
/// real vector field `(Re c₁, Im c₁, Re c₂, …)`.
#[derive(Clone, Debug)]
pub struct TrigSeries {
    domain: Domain,
    offset: Vec<f64>,
    /// Per component: `(ξ, coefficient)` pairs.
    terms: Vec<Vec<(Vec<f64>, Complex<f64>)>>,
}

impl TrigSeries {
    /// Keeps Fourier coefficients larger than `rel_tol` times the largest.
    pub fn from_components<T: Real>(grid: &FlatTorusGrid<T>, comps: &[Values<T>], rel_tol: f64) -> Self {
        let hats: Vec<Vec<Complex<f64>>> = comps
            .iter()
            .map(|c| {
                let scale = 1.0 / grid.len() as f64;
                grid.forward(c).iter().map(|z| Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy()) * scale).collect()
            })
            .collect();
        let max = hats.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
        let terms = hats
            .iter()
            .map(|h| {
                h.iter()
                    .enumerate()
                    .filter(|(_, z)| z.norm() > rel_tol * max && max > 0.0)
                    .map(|(k, z)| (grid.xi(k).iter().map(|v| v.to_f64_lossy()).collect(), *z))
                    .collect()
            })
            .collect();
        let periods: Vec<f64> = grid.periods().iter().map(|p| p.to_f64_lossy()).collect();
        Self {
            domain: Domain { lower: vec![0.0; periods.len()], upper: periods, periodic: true },
            offset: grid.offset().iter().map(|v| v.to_f64_lossy()).collect(),
            terms,
        }
    }
}

impl FieldSource for TrigSeries {
    fn domain(&self) -> &Domain {
        &self.domain
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Vector
    }

    fn components(&self) -> usize {
        2 * self.terms.len()
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        for (c, terms) in self.terms.iter().enumerate() {
            let v = terms.iter().fold(Complex::new(0.0, 0.0), |acc, (xi, z)| {
                let phase: f64 = xi.iter().zip(x).zip(&self.offset).map(|((k, y), o)| k * (y - o)).sum();
                acc + z * Complex::new(phase.cos(), phase.sin())
            });
            out[2 * c] = v.re;
            out[2 * c + 1] = v.im;
        }
    }
}
