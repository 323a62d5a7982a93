//! Singular points of eigenfunctions, where `f` and `df` vanish together,
//! and the angles at which nodal arcs cross there.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use super::{components, gauss_newton_step, zero_cells, CellGrid, NodalError, ZeroCellSet, ZeroParams};
use crate::fields::{Domain, MixedFormSource, ScalarFunction};

#[derive(Clone, Debug, PartialEq)]
pub struct SingularPoint {
    pub position: Vec<f64>,
    pub value: f64,
    pub gradient_norm: f64,
}

const NEWTON_ITERATIONS: usize = 40;
const ACCEPT: f64 = 1e-6;

fn wrapped_distance(domain: &Domain, a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| {
            let mut d = (x - y).abs();
            if domain.periodic {
                let l = domain.extent(i);
                d = d.rem_euclid(l);
                d = d.min(l - d);
            }
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Common zeros of `f` and `df` for an eigenfunction `Δf = λf`.
///
/// They are the zeros of the mixed form `√λ·f + df`. Each component of its
/// flagged cells seeds a Gauss–Newton iteration on `(f, ∂₁f, …, ∂ₙf)`; a
/// point is kept when `|f|` and `|df|` are both below `1e−6`.
pub fn singular_set<F: ScalarFunction + Clone>(
    f: &F,
    lambda: f64,
    resolution: usize,
    params: &ZeroParams,
) -> Result<Vec<SingularPoint>, NodalError> {
    let source = MixedFormSource::new(f.clone(), lambda);
    let domain = f.domain().clone();
    let grid = CellGrid::new(domain.clone(), resolution)?;
    let set = zero_cells(&source, &grid, params);
    let mut points: Vec<SingularPoint> = Vec::new();
    for comp in components(&set) {
        let mut x = comp.centroid.clone();
        for _ in 0..NEWTON_ITERATIONS {
            let next = gauss_newton_step(&source, &x);
            let moved = wrapped_distance(&domain, &next, &x);
            x = next;
            domain.wrap(&mut x);
            if moved < 1e-15 {
                break;
            }
        }
        let value = f.value(&x);
        let gradient_norm = f.gradient(&x).iter().map(|g| g * g).sum::<f64>().sqrt();
        let duplicate = points.iter().any(|p| wrapped_distance(&domain, &p.position, &x) < grid.max_spacing());
        if value.abs() < ACCEPT && gradient_norm < ACCEPT && domain.contains(&x) && !duplicate {
            points.push(SingularPoint { position: x, value, gradient_norm });
        }
    }
    points.sort_by(|a, b| a.position.partial_cmp(&b.position).expect("finite coordinates"));
    Ok(points)
}

/// Directions of the nodal arcs leaving a point, in degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossingReport {
    /// Vanishing order of `f − f(p)` detected by the fit.
    pub order: u32,
    pub rays: Vec<f64>,
    /// Consecutive angular gaps between rays (summing to 360°).
    pub gaps: Vec<f64>,
}

const STENCIL: i32 = 4;
const MAX_ORDER: u32 = 3;
const ORDER_TOLERANCE: f64 = 1e-3;
const ANGLE_SAMPLES: usize = 3600;
const SAMPLE_SHIFT: f64 = 0.381_966;

fn monomials() -> Vec<(u32, u32)> {
    (0..=MAX_ORDER).flat_map(|d| (0..=d).map(move |j| (d - j, j))).collect()
}

/// Fits a cubic to `f` on a 9×9 stencil of half-width `radius` around `p`,
/// takes its lowest nonvanishing homogeneous part `P_k`, and returns the
/// zeros of `θ ↦ P_k(cos θ, sin θ)`.
pub fn crossing_angles(f: &impl ScalarFunction, p: &[f64], radius: f64) -> Result<CrossingReport, NodalError> {
    if p.len() != 2 {
        return Err(NodalError::NotScalar);
    }
    let mons = monomials();
    let side = (2 * STENCIL + 1) as usize;
    let rows = side * side;
    let mut a = DMatrix::zeros(rows, mons.len());
    let mut b = DVector::zeros(rows);
    for (r, (i, j)) in (-STENCIL..=STENCIL).flat_map(|i| (-STENCIL..=STENCIL).map(move |j| (i, j))).enumerate() {
        let (u, v) = (i as f64 / STENCIL as f64, j as f64 / STENCIL as f64);
        for (c, &(pu, pv)) in mons.iter().enumerate() {
            a[(r, c)] = u.powi(pu as i32) * v.powi(pv as i32);
        }
        b[r] = f.value(&[p[0] + radius * u, p[1] + radius * v]);
    }
    let coeffs = a.svd(true, true).solve(&b, 1e-14).map_err(|_| NodalError::DegenerateLeadingForm)?;
    let degree_norm = |d: u32| -> f64 {
        mons.iter().zip(coeffs.iter()).filter(|(m, _)| m.0 + m.1 == d).map(|(_, c)| c * c).sum::<f64>().sqrt()
    };
    let norms: Vec<f64> = (1..=MAX_ORDER).map(degree_norm).collect();
    let biggest = norms.iter().cloned().fold(0.0, f64::max);
    if biggest < 1e-14 {
        return Err(NodalError::DegenerateLeadingForm);
    }
    let order = (1..=MAX_ORDER).find(|&d| norms[d as usize - 1] > ORDER_TOLERANCE * biggest).expect("some degree is largest");
    let form = |t: f64| -> f64 {
        mons.iter()
            .zip(coeffs.iter())
            .filter(|(m, _)| m.0 + m.1 == order)
            .map(|(m, c)| c * t.cos().powi(m.0 as i32) * t.sin().powi(m.1 as i32))
            .sum()
    };
    let mut rays = Vec::new();
    let step = 2.0 * PI / ANGLE_SAMPLES as f64;
    for s in 0..ANGLE_SAMPLES {
        // Offset the samples so rays along the axes fall strictly inside a bracket.
        let (mut lo, mut hi) = ((s as f64 + SAMPLE_SHIFT) * step, (s as f64 + 1.0 + SAMPLE_SHIFT) * step);
        let (flo, fhi) = (form(lo), form(hi));
        if flo == 0.0 {
            rays.push(lo);
            continue;
        }
        if flo * fhi >= 0.0 {
            continue;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if form(lo) * form(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        rays.push(0.5 * (lo + hi));
    }
    if rays.is_empty() {
        return Err(NodalError::DegenerateLeadingForm);
    }
    let mut rays: Vec<f64> = rays.iter().map(|r| r.to_degrees().rem_euclid(360.0)).collect();
    rays.sort_by(f64::total_cmp);
    let gaps = (0..rays.len())
        .map(|i| if i + 1 < rays.len() { rays[i + 1] - rays[i] } else { 360.0 + rays[0] - rays[i] })
        .collect();
    Ok(CrossingReport { order, rays, gaps })
}

/// Splits nodal cells into those near a singular point and the rest.
#[derive(Clone, Debug, PartialEq)]
pub struct CellClassification {
    pub regular: Vec<usize>,
    pub singular: Vec<usize>,
    /// Smallest `|df|` at the centre of a regular cell.
    pub min_regular_gradient: f64,
}

pub fn classify_cells(
    f: &impl ScalarFunction,
    set: &ZeroCellSet,
    singular: &[SingularPoint],
    exclusion_radius: f64,
) -> CellClassification {
    let domain = set.grid.domain();
    let (mut regular, mut near) = (Vec::new(), Vec::new());
    let mut min_regular_gradient = f64::INFINITY;
    for &cell in &set.cells {
        let c = set.grid.cell_center(cell);
        if singular.iter().any(|p| wrapped_distance(domain, &p.position, &c) <= exclusion_radius) {
            near.push(cell);
        } else {
            let g = f.gradient(&c).iter().map(|v| v * v).sum::<f64>().sqrt();
            min_regular_gradient = min_regular_gradient.min(g);
            regular.push(cell);
        }
    }
    CellClassification { regular, singular: near, min_regular_gradient }
}

