use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::*;
use crate::fields::{analytic_library, AnalyticParams, AnalyticScalar, Domain, FieldSource, ScalarFunction, ScalarKind};

struct Scalar<F>(Domain, F);

impl<F: Fn(&[f64]) -> f64 + Sync> ScalarFunction for Scalar<F> {
    fn domain(&self) -> &Domain {
        &self.0
    }

    fn value(&self, x: &[f64]) -> f64 {
        (self.1)(x)
    }
}

struct Vector<F>(Domain, usize, F);

impl<F: Fn(&[f64], &mut [f64]) + Sync> FieldSource for Vector<F> {
    fn domain(&self) -> &Domain {
        &self.0
    }

    fn kind(&self) -> FieldKind {
        FieldKind::Vector
    }

    fn components(&self) -> usize {
        self.1
    }

    fn eval(&self, x: &[f64], out: &mut [f64]) {
        (self.2)(x, out)
    }
}

fn square() -> Domain {
    Domain::cube(2, -1.0, 1.0, false)
}

fn level(source: &dyn FieldSource, res: usize) -> NodalLevel {
    analyze_level(source, &CellGrid::new(source.domain().clone(), res).unwrap(), &ZeroParams::default())
}

fn product_sine(m: u32, n: u32) -> AnalyticScalar {
    AnalyticScalar::new(ScalarKind::ProductSine { m, n }, Domain::cube(2, 0.0, PI, false))
}

fn torus_cos() -> AnalyticScalar {
    AnalyticScalar::new(ScalarKind::ProductCos, Domain::cube(2, 0.0, TAU, true))
}

#[test]
fn grid_geometry() {
    let g = CellGrid::with_offset(Domain::cube(2, 0.0, 1.0, true), 8, 0.0).unwrap();
    assert_eq!(g.num_cells(), 64);
    assert_eq!(g.neighbors(0, true).len(), 8);
    assert_eq!(g.neighbors(0, false).len(), 4);
    assert_eq!(g.cell_of(&[0.99, -0.01]), Some(g.cell_flat(&[7, 7])));
    let b = CellGrid::new(square(), 8).unwrap();
    assert_eq!(b.num_cells(), 49);
    assert_eq!(b.neighbors(0, true).len(), 3);
    assert_eq!(b.corners(0).len(), 4);
    assert_eq!(CellGrid::new(square(), 4).unwrap_err(), NodalError::TooCoarse(4));
}

#[test]
fn zero_cell_examples() {
    let hyper = Scalar(square(), |x: &[f64]| x[0]);
    let c32 = level(&hyper, 32).count;
    let c64 = level(&hyper, 64).count;
    assert!((c64 as f64 / c32 as f64 - 2.0).abs() < 0.15, "{c32} {c64}");

    let cross = Vector(square(), 2, |x: &[f64], out: &mut [f64]| {
        out[0] = x[1];
        out[1] = x[0];
    });
    let l = level(&cross, 64);
    assert_eq!(l.components.len(), 1);
    assert!(l.components[0].centroid.iter().all(|v| v.abs() < 1e-9));
    assert!(l.count <= 4);

    assert!(level(&Scalar(square(), |_: &[f64]| 1.0), 32).cells.is_empty());
}

#[test]
fn box_dimension_of_known_sets() {
    let segment = Scalar(square(), |x: &[f64]| x[0] + 0.5 * x[1] - 0.1);
    let levels: Vec<NodalLevel> = [32, 64, 128, 256].iter().map(|&r| level(&segment, r)).collect();
    let d = box_dimension(&level_scales(&levels)).unwrap().dimension;
    assert!((0.9..=1.1).contains(&d), "{d}");

    let four = crate::fields::MixedFormSource::new(torus_cos(), 2.0);
    let levels: Vec<NodalLevel> = [32, 64, 128, 256].iter().map(|&r| level(&four, r)).collect();
    let d = box_dimension(&level_scales(&levels)).unwrap().dimension;
    assert!((-0.1..=0.2).contains(&d), "{d}");

    let plane = Scalar(Domain::cube(3, -1.0, 1.0, false), |x: &[f64]| x[0] - 0.3 + 0.2 * x[2]);
    let levels: Vec<NodalLevel> = [16, 32, 64, 128].iter().map(|&r| level(&plane, r)).collect();
    let d = box_dimension(&level_scales(&levels)).unwrap().dimension;
    assert!((1.9..=2.1).contains(&d), "{d}");

    assert_eq!(box_dimension(&[(0.1, 4), (0.05, 8), (0.025, 16)]), Err(NodalError::TooFewScales { needed: 4, got: 3 }));
    assert!(box_dimension(&[(0.1, 4), (0.09, 8), (0.08, 16), (0.07, 20)]).is_err());
    assert_eq!(box_dimension(&[(0.1, 4), (0.05, 0), (0.025, 16), (0.0125, 3)]), Err(NodalError::EmptyScale(0.05)));
}

#[test]
fn discreteness_examples() {
    let cr = analytic_library("cr_quadratic", &AnalyticParams::default()).unwrap();
    let levels: Vec<NodalLevel> = [128, 256, 512].iter().map(|&r| level(&cr, r)).collect();
    let report = discreteness_check(&levels).unwrap();
    assert!(report.discrete, "{report:?}");
    let top = levels.last().unwrap();
    assert_eq!(top.components.len(), 2);
    let mut xs: Vec<f64> = top.components.iter().map(|c| c.centroid[0]).collect();
    xs.sort_by(f64::total_cmp);
    assert!((xs[0] + 1.0).abs() < 2.0 * 4.0 / 512.0 && (xs[1] - 1.0).abs() < 2.0 * 4.0 / 512.0);

    let line = analytic_library("harmonic_codim1", &AnalyticParams { n: Some(2), ..Default::default() }).unwrap();
    let levels: Vec<NodalLevel> = [32, 64, 128].iter().map(|&r| level(&line, r)).collect();
    assert!(!discreteness_check(&levels).unwrap().discrete);

    let empty = Vector(square(), 2, |_: &[f64], out: &mut [f64]| {
        out[0] = 1.0;
        out[1] = 0.0;
    });
    let levels: Vec<NodalLevel> = [16, 32, 64].iter().map(|&r| level(&empty, r)).collect();
    let report = discreteness_check(&levels).unwrap();
    assert!(report.discrete && report.counts == vec![0, 0, 0]);

    assert_eq!(discreteness_check(&levels[..2]), Err(NodalError::InconsistentLevels));
    let skipping = vec![levels[0].clone(), levels[2].clone(), levels[2].clone()];
    assert_eq!(discreteness_check(&skipping), Err(NodalError::InconsistentLevels));
}

#[test]
fn nodal_domain_counts() {
    for (m, n, expect) in [(1, 1, 1), (2, 1, 2), (2, 2, 4)] {
        let grid = CellGrid::new(Domain::cube(2, 0.0, PI, false), 128).unwrap();
        assert_eq!(nodal_domains(&product_sine(m, n), &grid).unwrap(), expect);
    }
    for m in 1..=4 {
        for n in 1..=4 {
            let grid = CellGrid::new(Domain::cube(2, 0.0, PI, false), 128).unwrap();
            assert_eq!(nodal_domains(&product_sine(m, n), &grid).unwrap(), (m * n) as usize);
        }
    }
    let cr = analytic_library("cr_quadratic", &AnalyticParams::default()).unwrap();
    assert_eq!(nodal_domains(&cr, &CellGrid::new(square(), 16).unwrap()), Err(NodalError::NotScalar));
}

#[test]
fn nested_grids_are_monotone() {
    let cases: Vec<Box<dyn FieldSource>> = vec![
        Box::new(Scalar(square(), |x: &[f64]| x[0] - 0.3)),
        Box::new(product_sine(3, 5)),
        Box::new(product_sine(5, 3)),
    ];
    for source in &cases {
        let coarse = CellGrid::with_offset(source.domain().clone(), 32, 0.0).unwrap();
        let fine = CellGrid::with_offset(source.domain().clone(), 64, 0.0).unwrap();
        let cs = zero_cells(source.as_ref(), &coarse, &ZeroParams::default());
        let fs = zero_cells(source.as_ref(), &fine, &ZeroParams::default());
        for &cell in &fs.cells {
            let parent: Vec<usize> = fine.cell_index(cell).iter().map(|i| i / 2).collect();
            if parent.iter().all(|&p| p < coarse.cells_per_axis()) {
                assert!(cs.contains(coarse.cell_flat(&parent)));
            }
        }
    }
}

#[test]
fn singular_set_examples() {
    let points = singular_set(&torus_cos(), 2.0, 64, &ZeroParams::default()).unwrap();
    assert_eq!(points.len(), 4);
    let expected = [[FRAC_PI_2, FRAC_PI_2], [FRAC_PI_2, 3.0 * FRAC_PI_2], [3.0 * FRAC_PI_2, FRAC_PI_2], [3.0 * FRAC_PI_2, 3.0 * FRAC_PI_2]];
    for (p, e) in points.iter().zip(expected) {
        assert!(p.position.iter().zip(e).all(|(a, b)| (a - b).abs() < 1e-3), "{p:?}");
        assert!(p.value.abs() < 1e-6 && p.gradient_norm < 1e-6);
    }

    let sine = AnalyticScalar::new(ScalarKind::SineWave, Domain::cube(2, 0.0, TAU, true));
    assert!(singular_set(&sine, 1.0, 64, &ZeroParams::default()).unwrap().is_empty());

    let interior: Vec<SingularPoint> = singular_set(&product_sine(2, 1), 5.0, 128, &ZeroParams::default())
        .unwrap()
        .into_iter()
        .filter(|p| p.position.iter().all(|&x| x > 1e-3 && x < PI - 1e-3))
        .collect();
    assert!(interior.is_empty(), "{interior:?}");
}

#[test]
fn crossing_angle_examples() {
    let saddle = AnalyticScalar::new(ScalarKind::Saddle, square());
    let r = crossing_angles(&saddle, &[0.0, 0.0], 0.1).unwrap();
    assert_eq!(r.order, 2);
    assert_eq!(r.gaps.len(), 4);
    assert!(r.gaps.iter().all(|g| (g - 90.0).abs() < 1e-6), "{r:?}");

    let r = crossing_angles(&torus_cos(), &[FRAC_PI_2, FRAC_PI_2], 0.05).unwrap();
    assert_eq!(r.gaps.len(), 4);
    assert!(r.gaps.iter().all(|g| (g - 90.0).abs() < 2.0), "{r:?}");

    let cubic = AnalyticScalar::new(ScalarKind::HarmonicCubic, square());
    let r = crossing_angles(&cubic, &[0.0, 0.0], 0.1).unwrap();
    assert_eq!(r.order, 3);
    assert_eq!(r.gaps.len(), 6);
    assert!(r.gaps.iter().all(|g| (g - 60.0).abs() < 3.0), "{r:?}");

    let regular = crossing_angles(&saddle, &[0.5, 0.5], 0.01).unwrap();
    assert_eq!(regular.order, 1);
    assert_eq!(regular.gaps.len(), 2);

    let flat = Scalar(square(), |_: &[f64]| 0.0);
    assert_eq!(crossing_angles(&flat, &[0.0, 0.0], 0.1).unwrap_err(), NodalError::DegenerateLeadingForm);
}

#[test]
fn classification_partitions_nodal_cells() {
    let f = torus_cos();
    let grid = CellGrid::new(f.domain.clone(), 64).unwrap();
    let set = zero_cells(&f, &grid, &ZeroParams::default());
    let points = singular_set(&f, 2.0, 64, &ZeroParams::default()).unwrap();
    let cls = classify_cells(&f, &set, &points, 0.3);
    let mut all: Vec<usize> = cls.regular.iter().chain(&cls.singular).copied().collect();
    all.sort_unstable();
    assert_eq!(all, set.cells);
    assert!(!cls.singular.is_empty());
    assert!(cls.min_regular_gradient > 0.2, "{}", cls.min_regular_gradient);
}

#[test]
fn csv_writers() {
    let f = torus_cos();
    let levels: Vec<NodalLevel> = [16, 32].iter().map(|&r| level(&f, r)).collect();
    let mut buf = Vec::new();
    write_boxcounts_csv(&levels, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("level,epsilon,count\n0,"));
    assert_eq!(text.lines().count(), 3);

    let mut buf = Vec::new();
    write_nodal_cells_csv(&levels[0].cells, &f, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), levels[0].count + 1);

    let pts = vec![SingularPoint { position: vec![1.0, 2.0], value: 0.0, gradient_norm: 0.0 }];
    let mut buf = Vec::new();
    write_singular_points_csv(&pts, &[vec![90.0, 90.0]], &mut buf).unwrap();
    assert!(String::from_utf8(buf).unwrap().contains("90.000 90.000"));
}
