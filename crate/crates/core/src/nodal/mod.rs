//! Nodal sets of sampled fields: flagged cells, connected components,
//! box-counting dimension, discreteness across refinements, nodal domains,
//! singular points and crossing angles.
//!
//! The dimension reported is the box-counting dimension of the flagged cell
//! sets. It bounds the Hausdorff dimension from above; rectifiability is not
//! measured.

mod grid;
mod io;
mod singular;

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use thiserror::Error;

use crate::fields::{FieldKind, FieldSource};

pub use grid::{CellGrid, DEFAULT_OFFSET};
pub use io::{write_boxcounts_csv, write_nodal_cells_csv, write_singular_points_csv};
pub use singular::{
    classify_cells, crossing_angles, singular_set, CellClassification, CrossingReport, SingularPoint,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NodalError {
    #[error("resolution {0} is below 8 cells per axis")]
    TooCoarse(usize),
    #[error("grid offset {0} must lie in [0, 1)")]
    BadOffset(f64),
    #[error("need at least {needed} scales spanning two octaves, got {got}")]
    TooFewScales { needed: usize, got: usize },
    #[error("no flagged cells at scale {0}")]
    EmptyScale(f64),
    #[error("levels must share a domain and double in resolution")]
    InconsistentLevels,
    #[error("every cell is flagged")]
    AllFlagged,
    #[error("expected a scalar field")]
    NotScalar,
    #[error("leading form vanishes to fit tolerance")]
    DegenerateLeadingForm,
}

/// Tuning for vector zero detection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroParams {
    /// Candidate threshold `τ = C·h·G`, `G` the largest finite-difference
    /// slope on the cell's edges.
    pub threshold: f64,
    /// Newton landings must stay within this many spacings of the start.
    pub max_jump: f64,
    /// Accept a landing when `|s| ≤ residual·G·h` there.
    pub residual: f64,
}

impl Default for ZeroParams {
    fn default() -> Self {
        Self { threshold: 4.0, max_jump: 2.0, residual: 0.1 }
    }
}

/// Flagged cells at one resolution.
///
/// For each cell, `spread` bounds the representative points found in it,
/// as offsets from the cell centre: the Newton landing points for vector
/// fields, the centre itself for sign changes.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroCellSet {
    pub grid: CellGrid,
    pub cells: Vec<usize>,
    pub spread: Vec<(Vec<f64>, Vec<f64>)>,
}

impl ZeroCellSet {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: usize) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }
}

/// Samples all components at every node, node-major.
pub fn sample_nodes(source: &dyn FieldSource, grid: &CellGrid) -> Vec<f64> {
    let m = source.components();
    let mut values = vec![0.0; grid.num_nodes() * m];
    values.par_chunks_mut(m).enumerate().for_each(|(node, out)| source.eval(&grid.node_position(node), out));
    values
}

fn sign_change(values: &[f64], corners: &[usize]) -> bool {
    let (mut neg, mut pos, mut zero) = (false, false, false);
    for &c in corners {
        let v = values[c];
        neg |= v < 0.0;
        pos |= v > 0.0;
        zero |= v == 0.0;
    }
    (neg && pos) || zero
}

/// One damped Gauss–Newton step `x − (JᵀJ + μI)⁻¹Jᵀs`.
pub(crate) fn gauss_newton_step(source: &dyn FieldSource, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let m = source.components();
    let mut s = vec![0.0; m];
    source.eval(x, &mut s);
    let jac = source.jacobian(x);
    let jt_j = nalgebra::DMatrix::from_fn(n, n, |a, b| (0..m).map(|c| jac[c * n + a] * jac[c * n + b]).sum::<f64>());
    let jt_s = nalgebra::DVector::from_fn(n, |a, _| (0..m).map(|c| jac[c * n + a] * s[c]).sum::<f64>());
    let mu = 1e-12 * (jt_j.trace() / n as f64).max(1e-300);
    let damped = jt_j + nalgebra::DMatrix::identity(n, n) * mu;
    match damped.lu().solve(&jt_s) {
        Some(step) => x.iter().zip(step.iter()).map(|(v, d)| v - d).collect(),
        None => x.to_vec(),
    }
}

/// Cells meeting the zero set.
///
/// Scalar fields: cells whose corner values change sign. Vector fields:
/// cells whose smallest corner norm is below `τ = C·h·G` become candidates;
/// each candidate takes one Gauss–Newton step from its centre, and the cell
/// containing the landing point is flagged when the step stays within
/// `max_jump·h` and the residual there is below `residual·G·h`.
pub fn zero_cells(source: &dyn FieldSource, grid: &CellGrid, params: &ZeroParams) -> ZeroCellSet {
    let values = sample_nodes(source, grid);
    let m = source.components();
    let n = grid.dim();
    let mut flagged: BTreeMap<usize, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    match source.kind() {
        FieldKind::Scalar => {
            let hits: Vec<usize> =
                (0..grid.num_cells()).into_par_iter().filter(|&c| sign_change(&values, &grid.corners(c))).collect();
            for c in hits {
                flagged.insert(c, (vec![0.0; n], vec![0.0; n]));
            }
        }
        FieldKind::Vector => {
            let h = grid.max_spacing();
            let landings: Vec<(usize, Vec<f64>)> = (0..grid.num_cells())
                .into_par_iter()
                .filter_map(|cell| {
                    let corners = grid.corners(cell);
                    let node = |c: usize| &values[corners[c] * m..corners[c] * m + m];
                    let min_norm = (0..corners.len()).map(|c| norm(node(c))).fold(f64::INFINITY, f64::min);
                    let mut slope: f64 = 0.0;
                    for c in 0..corners.len() {
                        for a in 0..n {
                            if c & (1 << a) == 0 {
                                let diff: f64 = node(c).iter().zip(node(c | (1 << a))).map(|(p, q)| (p - q).powi(2)).sum();
                                slope = slope.max(diff.sqrt() / grid.spacing(a));
                            }
                        }
                    }
                    if min_norm > params.threshold * h * slope {
                        return None;
                    }
                    let start = grid.cell_center(cell);
                    let land = gauss_newton_step(source, &start);
                    let jump_ok = land.iter().zip(&start).enumerate().all(|(a, (p, q))| (p - q).abs() <= params.max_jump * grid.spacing(a));
                    let residual_ok = source.norm_at(&land) <= params.residual * slope * h;
                    if !(jump_ok && residual_ok) {
                        return None;
                    }
                    let target = grid.cell_of(&land)?;
                    Some((target, land))
                })
                .collect();
            for (target, land) in landings {
                let center = grid.cell_center(target);
                let delta: Vec<f64> = land.iter().zip(&center).enumerate().map(|(a, (p, q))| wrap_delta(grid, a, p - q)).collect();
                let entry = flagged.entry(target).or_insert_with(|| (delta.clone(), delta.clone()));
                for (a, &d) in delta.iter().enumerate() {
                    entry.0[a] = entry.0[a].min(d);
                    entry.1[a] = entry.1[a].max(d);
                }
            }
        }
    }
    let (cells, spread) = flagged.into_iter().unzip();
    ZeroCellSet { grid: grid.clone(), cells, spread }
}

fn wrap_delta(grid: &CellGrid, axis: usize, d: f64) -> f64 {
    if grid.periodic() {
        let l = grid.domain().extent(axis);
        d - l * (d / l).round()
    } else {
        d
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// A connected cluster of flagged cells (`3ⁿ − 1` neighbourhood).
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub cells: Vec<usize>,
    /// Diagonal of the bounding box of the representative points, measured
    /// in unwrapped coordinates.
    pub diameter: f64,
    /// Mean representative point, wrapped into the domain.
    pub centroid: Vec<f64>,
}

pub fn components(set: &ZeroCellSet) -> Vec<Component> {
    let grid = &set.grid;
    let n = grid.dim();
    let index: BTreeMap<usize, usize> = set.cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut seen = vec![false; set.cells.len()];
    let mut out = Vec::new();
    for start in 0..set.cells.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        // BFS carrying unwrapped integer positions relative to the start cell.
        let mut queue = VecDeque::from([(start, vec![0i64; n])]);
        let mut cells = Vec::new();
        let (mut lo, mut hi) = (vec![f64::INFINITY; n], vec![f64::NEG_INFINITY; n]);
        let mut sum = vec![0.0; n];
        let origin = grid.cell_center(set.cells[start]);
        while let Some((i, pos)) = queue.pop_front() {
            let cell = set.cells[i];
            cells.push(cell);
            let (dmin, dmax) = &set.spread[i];
            for a in 0..n {
                let base = origin[a] + pos[a] as f64 * grid.spacing(a);
                lo[a] = lo[a].min(base + dmin[a]);
                hi[a] = hi[a].max(base + dmax[a]);
                sum[a] += base + 0.5 * (dmin[a] + dmax[a]);
            }
            for (nb, step) in grid.neighbors(cell, true) {
                if let Some(&j) = index.get(&nb) {
                    if !seen[j] {
                        seen[j] = true;
                        queue.push_back((j, pos.iter().zip(&step).map(|(p, s)| p + s).collect()));
                    }
                }
            }
        }
        cells.sort_unstable();
        let diameter = lo.iter().zip(&hi).map(|(l, h)| (h - l).powi(2)).sum::<f64>().sqrt();
        let mut centroid: Vec<f64> = sum.iter().map(|s| s / cells.len() as f64).collect();
        grid.domain().wrap(&mut centroid);
        out.push(Component { cells, diameter, centroid });
    }
    out
}

/// Flagged cells and components at one resolution.
#[derive(Clone, Debug, PartialEq)]
pub struct NodalLevel {
    pub resolution: usize,
    pub epsilon: f64,
    pub count: usize,
    pub components: Vec<Component>,
    pub cells: ZeroCellSet,
}

impl NodalLevel {
    pub fn max_diameter(&self) -> f64 {
        self.components.iter().map(|c| c.diameter).fold(0.0, f64::max)
    }
}

pub fn analyze_level(source: &dyn FieldSource, grid: &CellGrid, params: &ZeroParams) -> NodalLevel {
    let cells = zero_cells(source, grid, params);
    NodalLevel {
        resolution: grid.resolution(),
        epsilon: grid.max_spacing(),
        count: cells.len(),
        components: components(&cells),
        cells,
    }
}

/// Least-squares fit of `log N(ε) = d·log(1/ε) + c`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoxDimension {
    pub dimension: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
}

pub const MIN_SCALES: usize = 4;

pub fn box_dimension(scales: &[(f64, usize)]) -> Result<BoxDimension, NodalError> {
    let eps_max = scales.iter().map(|s| s.0).fold(0.0, f64::max);
    let eps_min = scales.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    if scales.len() < MIN_SCALES || eps_max < 4.0 * eps_min {
        return Err(NodalError::TooFewScales { needed: MIN_SCALES, got: scales.len() });
    }
    if let Some(&(eps, _)) = scales.iter().find(|s| s.1 == 0) {
        return Err(NodalError::EmptyScale(eps));
    }
    let pts: Vec<(f64, f64)> = scales.iter().map(|&(e, c)| ((1.0 / e).ln(), (c as f64).ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let dimension = sxy / sxx;
    let intercept = my - dimension * mx;
    let residual = (pts.iter().map(|p| (p.1 - intercept - dimension * p.0).powi(2)).sum::<f64>() / k).sqrt();
    Ok(BoxDimension { dimension, intercept, residual })
}

pub fn level_scales(levels: &[NodalLevel]) -> Vec<(f64, usize)> {
    levels.iter().map(|l| (l.epsilon, l.count)).collect()
}

/// Outcome of comparing components across refinements.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscretenessReport {
    pub discrete: bool,
    pub counts: Vec<usize>,
    pub max_diameters: Vec<f64>,
    /// `d_ℓ / d_{ℓ+1}` per refinement (infinite when the finer one is below the floor).
    pub shrink_ratios: Vec<f64>,
}

pub const MIN_LEVELS: usize = 3;
pub const SHRINK_FACTOR: f64 = 1.8;

/// A zero set looks discrete when the component count is the same at the
/// two finest levels and the largest component diameter shrinks by at
/// least 1.8 per doubling. Diameters below `1e−9` of the domain diagonal
/// count as fully shrunk.
pub fn discreteness_check(levels: &[NodalLevel]) -> Result<DiscretenessReport, NodalError> {
    if levels.len() < MIN_LEVELS {
        return Err(NodalError::InconsistentLevels);
    }
    let domain = levels[0].cells.grid.domain();
    if levels.windows(2).any(|w| w[1].resolution != 2 * w[0].resolution || w[1].cells.grid.domain() != domain) {
        return Err(NodalError::InconsistentLevels);
    }
    let diag = (0..domain.dim()).map(|a| domain.extent(a).powi(2)).sum::<f64>().sqrt();
    let floor = 1e-9 * diag;
    let counts: Vec<usize> = levels.iter().map(|l| l.components.len()).collect();
    let max_diameters: Vec<f64> = levels.iter().map(NodalLevel::max_diameter).collect();
    let shrink_ratios: Vec<f64> = max_diameters
        .windows(2)
        .map(|w| if w[1] <= floor { f64::INFINITY } else { w[0] / w[1] })
        .collect();
    let stable = counts[counts.len() - 1] == counts[counts.len() - 2];
    let shrinking = shrink_ratios.iter().all(|&r| r >= SHRINK_FACTOR);
    Ok(DiscretenessReport { discrete: stable && shrinking, counts, max_diameters, shrink_ratios })
}

/// Number of connected components of the complement of the sign-change
/// cells (face neighbours only, so diagonal chains of nodal cells separate).
pub fn nodal_domains(source: &dyn FieldSource, grid: &CellGrid) -> Result<usize, NodalError> {
    if source.kind() != FieldKind::Scalar {
        return Err(NodalError::NotScalar);
    }
    let set = zero_cells(source, grid, &ZeroParams::default());
    if set.len() == grid.num_cells() {
        return Err(NodalError::AllFlagged);
    }
    let mut blocked = vec![false; grid.num_cells()];
    set.cells.iter().for_each(|&c| blocked[c] = true);
    let mut domains = 0;
    for start in 0..grid.num_cells() {
        if blocked[start] {
            continue;
        }
        domains += 1;
        blocked[start] = true;
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            for (nb, _) in grid.neighbors(c, false) {
                if !blocked[nb] {
                    blocked[nb] = true;
                    stack.push(nb);
                }
            }
        }
    }
    Ok(domains)
}

/// Runs [`analyze_level`] at each resolution, then fits the dimension and
/// checks discreteness when there are enough levels.
#[derive(Clone, Debug)]
pub struct NodalSetReport {
    pub levels: Vec<NodalLevel>,
    pub dimension: Option<BoxDimension>,
    pub discreteness: Option<DiscretenessReport>,
}

pub fn nodal_report(
    source: &dyn FieldSource,
    resolutions: &[usize],
    offset: f64,
    params: &ZeroParams,
) -> Result<NodalSetReport, NodalError> {
    let levels = resolutions
        .iter()
        .map(|&r| Ok(analyze_level(source, &CellGrid::with_offset(source.domain().clone(), r, offset)?, params)))
        .collect::<Result<Vec<_>, NodalError>>()?;
    let dimension = box_dimension(&level_scales(&levels)).ok();
    let discreteness = discreteness_check(&levels).ok();
    Ok(NodalSetReport { levels, dimension, discreteness })
}

#[cfg(test)]
mod tests;
