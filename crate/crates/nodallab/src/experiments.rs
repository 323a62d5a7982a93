//! Numerical experiments E1–E8.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use nodallab_core::clifford::{build_gamma, relations_check, spinor_rank};
use nodallab_core::fields::{
    analytic_library, dirac_plane_eigenbasis, operator_identity_suite, AnalyticParams, AnalyticScalar, Domain,
    FieldSource, MixedFormSource, TrigSeries,
};
use nodallab_core::nodal::{
    analyze_level, classify_cells, crossing_angles, nodal_domains, nodal_report, singular_set, zero_cells, CellGrid,
    NodalSetReport, DEFAULT_OFFSET,
};
use nodallab_core::{Grid64, Rational};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::Params;
use crate::report::Outcome;
use crate::HarnessError;

pub(crate) type Metrics = BTreeMap<String, Value>;

fn core_err(e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Core(e.to_string())
}

fn library(name: &str, params: AnalyticParams) -> Result<nodallab_core::fields::AnalyticField, HarnessError> {
    analytic_library(name, &params).map_err(core_err)
}

fn product_cos(n: usize) -> Result<AnalyticScalar, HarnessError> {
    let field = library("product_cos", AnalyticParams { n: Some(n), ..Default::default() })?;
    Ok(field.scalar().expect("product_cos is scalar").clone())
}

/// Metrics shared by every multi-level nodal experiment.
fn level_metrics(report: &NodalSetReport, metrics: &mut Metrics) {
    let top = report.levels.last().expect("at least one level");
    metrics.insert("resolutions".into(), json!(report.levels.iter().map(|l| l.resolution).collect::<Vec<_>>()));
    metrics.insert("counts".into(), json!(report.levels.iter().map(|l| l.count).collect::<Vec<_>>()));
    metrics.insert("components".into(), json!(top.components.len()));
    metrics.insert(
        "max_diameters".into(),
        json!(report.levels.iter().map(|l| l.max_diameter()).collect::<Vec<_>>()),
    );
    if let Some(fit) = &report.dimension {
        metrics.insert("box_dimension".into(), json!(fit.dimension));
        metrics.insert("fit_residual".into(), json!(fit.residual));
    }
    if let Some(d) = &report.discreteness {
        metrics.insert("discrete".into(), json!(d.discrete));
    }
}

fn nodal_run(source: &dyn FieldSource, params: &Params) -> Result<Outcome, HarnessError> {
    let report = nodal_report(source, &params.resolutions(), DEFAULT_OFFSET, &params.zero_params()).map_err(core_err)?;
    let mut outcome = Outcome::default();
    level_metrics(&report, &mut outcome.metrics);
    outcome.record_levels(source, report.levels, report.dimension);
    Ok(outcome)
}

pub(crate) fn e1_cauchy_riemann(params: &Params) -> Result<Outcome, HarnessError> {
    let field = library("cr_quadratic", AnalyticParams::default())?;
    let mut outcome = nodal_run(&field, params)?;
    let top = outcome.levels.last().expect("levels recorded");
    let h = top.epsilon;
    let offset = top
        .components
        .iter()
        .map(|c| {
            let d = |x: f64| ((c.centroid[0] - x).powi(2) + c.centroid[1].powi(2)).sqrt();
            d(1.0).min(d(-1.0)) / h
        })
        .fold(0.0, f64::max);
    let value = if top.components.is_empty() { Value::Null } else { json!(offset) };
    outcome.metrics.insert("root_offset_cells".into(), value);
    Ok(outcome)
}

pub(crate) fn e2_mixed_torus2(params: &Params) -> Result<Outcome, HarnessError> {
    nodal_run(&MixedFormSource::new(product_cos(2)?, 2.0), params)
}

pub(crate) fn e3_mixed_torus3(params: &Params) -> Result<Outcome, HarnessError> {
    nodal_run(&MixedFormSource::new(product_cos(3)?, 2.0), params)
}

pub(crate) fn e4_linear_form(params: &Params) -> Result<Outcome, HarnessError> {
    nodal_run(&library("harmonic_codim1", AnalyticParams { n: Some(3), k: Some(1), ..Default::default() })?, params)
}

pub(crate) fn e5_torus_eigenform(params: &Params) -> Result<Outcome, HarnessError> {
    let field = library("torus_eigenform", AnalyticParams { n: Some(3), k: Some(1), m: Some(1), ..Default::default() })?;
    nodal_run(&field, params)
}

pub(crate) fn e6_identities(params: &Params) -> Result<Outcome, HarnessError> {
    let mut outcome = Outcome::default();
    let m = &mut outcome.metrics;
    let clifford = (1..=4).all(|n| build_gamma::<Rational>(n).is_ok_and(|rep| relations_check(&rep).holds));
    m.insert("clifford_relations".into(), json!(clifford));

    let mut worst = [0.0f64; 8];
    for n in [2, 3] {
        let r = operator_identity_suite::<f64>(n, params.resolution, params.instances, params.seed.wrapping_add(n as u64))
            .map_err(core_err)?;
        let values = [
            r.leibniz,
            r.weitzenbock,
            r.green,
            r.green_forms,
            r.laplace_energy,
            r.square_is_laplace,
            r.nilpotency,
            r.round_trip,
        ];
        for (w, v) in worst.iter_mut().zip(values) {
            *w = w.max(v);
        }
    }
    let names = [
        "leibniz",
        "weitzenbock",
        "green",
        "green_forms",
        "laplace_energy",
        "square_is_laplace",
        "nilpotency",
        "round_trip",
    ];
    for (name, v) in names.iter().zip(worst) {
        m.insert((*name).into(), json!(v));
    }
    m.insert("instances".into(), json!(params.instances));

    // Harmonic spinors on the flat 2-torus.
    let grid = Grid64::new(2, params.resolution).map_err(core_err)?;
    let rep = build_gamma::<f64>(2).map_err(core_err)?;
    let basis = dirac_plane_eigenbasis(&grid, &rep, 0.0).map_err(core_err)?;
    let constant = basis.iter().all(|s| {
        s.components().iter().all(|c| c.iter().all(|z| (z - c[0]).norm() <= 1e-12 * (1.0 + c[0].norm())))
    });
    let residual = basis.iter().map(|s| s.dirac().norm() / s.norm()).fold(0.0, f64::max);
    m.insert("kernel_dimension".into(), json!(basis.len()));
    m.insert("spinor_rank".into(), json!(spinor_rank(2)));
    m.insert("kernel_constant".into(), json!(constant));
    m.insert("kernel_residual".into(), json!(residual));

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let comps: Vec<Vec<Complex<f64>>> = (0..rep.rank())
        .map(|a| {
            let mut out = vec![Complex::new(0.0, 0.0); grid.len()];
            for s in &basis {
                let w = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                for (o, v) in out.iter_mut().zip(&s.components()[a]) {
                    *o += w * v;
                }
            }
            out
        })
        .collect();
    let series = TrigSeries::from_components(&grid, &comps, 1e-12);
    let cells = CellGrid::new(series.domain().clone(), params.resolution).map_err(core_err)?;
    let set = zero_cells(&series, &cells, &params.zero_params());
    m.insert("kernel_nodal_cells".into(), json!(set.len()));
    let level = analyze_level(&series, &cells, &params.zero_params());
    outcome.record_levels(&series, vec![level], None);
    Ok(outcome)
}

fn torus_distance(domain: &Domain, a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| {
            let l = domain.extent(i);
            let d = (x - y).abs().rem_euclid(l);
            d.min(l - d).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

const CROSSING_RADIUS: f64 = 0.05;
const EXCLUSION_RADIUS: f64 = 0.25;

pub(crate) fn e7_singular(params: &Params) -> Result<Outcome, HarnessError> {
    let f = product_cos(2)?;
    let zp = params.zero_params();
    let points = singular_set(&f, 2.0, params.resolution, &zp).map_err(core_err)?;
    let expected: Vec<[f64; 2]> = [FRAC_PI_2, 3.0 * FRAC_PI_2]
        .iter()
        .flat_map(|&a| [FRAC_PI_2, 3.0 * FRAC_PI_2].map(|b| [a, b]))
        .collect();
    let error = expected
        .iter()
        .map(|e| points.iter().map(|p| torus_distance(&f.domain, &p.position, e)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);

    let mut gaps = Vec::new();
    let mut mismatches = 0usize;
    let mut deviation = 0.0f64;
    for p in &points {
        match crossing_angles(&f, &p.position, CROSSING_RADIUS) {
            Ok(r) => {
                if r.gaps.len() != 4 {
                    mismatches += 1;
                }
                deviation = r.gaps.iter().map(|g| (g - 90.0).abs()).fold(deviation, f64::max);
                gaps.push(r.gaps);
            }
            Err(_) => {
                mismatches += 1;
                gaps.push(Vec::new());
            }
        }
    }

    let grid = CellGrid::new(f.domain.clone(), params.resolution).map_err(core_err)?;
    let level = analyze_level(&f, &grid, &zp);
    let classes = classify_cells(&f, &level.cells, &points, EXCLUSION_RADIUS);

    let mut outcome = Outcome::default();
    let m = &mut outcome.metrics;
    m.insert("singular_points".into(), json!(points.len()));
    m.insert("singular_max_error".into(), if points.is_empty() { Value::Null } else { json!(error) });
    m.insert("ray_count_mismatches".into(), json!(mismatches));
    m.insert("angle_max_deviation".into(), json!(deviation));
    m.insert("regular_cells".into(), json!(classes.regular.len()));
    m.insert("singular_cells".into(), json!(classes.singular.len()));
    let min_grad = classes.min_regular_gradient;
    m.insert("min_regular_gradient".into(), if min_grad.is_finite() { json!(min_grad) } else { Value::Null });
    m.insert("exclusion_radius".into(), json!(EXCLUSION_RADIUS));
    outcome.singular = points;
    outcome.gaps = gaps;
    outcome.record_levels(&f, vec![level], None);
    Ok(outcome)
}

/// `(m, n)` pairs ordered by `m² + n²`, ties by `m`.
pub fn dirichlet_modes(count: usize) -> Vec<(u32, u32)> {
    let side = count as u32 + 1;
    let mut modes: Vec<(u32, u32)> = (1..=side).flat_map(|m| (1..=side).map(move |n| (m, n))).collect();
    modes.sort_by_key(|&(m, n)| (m * m + n * n, m));
    modes.truncate(count);
    modes
}

pub(crate) fn e8_courant(params: &Params) -> Result<Outcome, HarnessError> {
    let modes = dirichlet_modes(params.instances);
    let mut counts = Vec::new();
    let (mut violations, mut mismatches) = (0usize, 0usize);
    for (i, &(m, n)) in modes.iter().enumerate() {
        let field = library("dirichlet_rect", AnalyticParams { modes: Some((m, n)), ..Default::default() })?;
        let grid = CellGrid::new(field.domain.clone(), params.resolution).map_err(core_err)?;
        let domains = nodal_domains(&field, &grid).map_err(core_err)?;
        violations += usize::from(domains > i + 1);
        mismatches += usize::from(domains != (m * n) as usize);
        counts.push(json!({ "index": i + 1, "m": m, "n": n, "eigenvalue": m * m + n * n, "domains": domains }));
    }
    let mut outcome = Outcome::default();
    let m = &mut outcome.metrics;
    m.insert("eigenfunctions".into(), json!(modes.len()));
    m.insert("courant_violations".into(), json!(violations));
    m.insert("count_mismatches".into(), json!(mismatches));
    m.insert("domain_counts".into(), Value::Array(counts));
    if let Some(&(mm, nn)) = modes.last() {
        let field = library("dirichlet_rect", AnalyticParams { modes: Some((mm, nn)), ..Default::default() })?;
        let grid = CellGrid::new(field.domain.clone(), params.resolution).map_err(core_err)?;
        let level = analyze_level(&field, &grid, &params.zero_params());
        outcome.record_levels(&field, vec![level], None);
    }
    Ok(outcome)
}
