//! The fixed set of experiments, each with default parameters and the
//! checks its metrics must pass.

use serde::Serialize;
use serde_json::Value;

use crate::config::Params;

/// A machine-checkable condition on one metric.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "check", content = "value", rename_all = "snake_case")]
pub enum Check {
    IsTrue,
    Equals(f64),
    AtLeast(f64),
    AtMost(f64),
    Below(f64),
    Within(f64, f64),
}

impl Check {
    /// Missing and non-numeric values fail every numeric check.
    pub fn holds(&self, value: Option<&Value>) -> bool {
        let Some(value) = value else { return false };
        if let Check::IsTrue = self {
            return value.as_bool() == Some(true);
        }
        let Some(v) = value.as_f64() else { return false };
        match *self {
            Check::IsTrue => unreachable!(),
            Check::Equals(x) => v == x,
            Check::AtLeast(x) => v >= x,
            Check::AtMost(x) => v <= x,
            Check::Below(x) => v < x,
            Check::Within(lo, hi) => (lo..=hi).contains(&v),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expectation {
    pub criterion: &'static str,
    pub metric: &'static str,
    #[serde(flatten)]
    pub check: Check,
}

const fn expect(criterion: &'static str, metric: &'static str, check: Check) -> Expectation {
    Expectation { criterion, metric, check }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub id: &'static str,
    /// What the run checks, in one line.
    pub claim: &'static str,
    /// The mathematical statement the run is evidence for.
    pub anchor: &'static str,
    pub defaults: Params,
    /// Fewest grid levels the analysis can work with.
    pub min_levels: usize,
    pub expectations: Vec<Expectation>,
}

pub fn registry() -> Vec<ExperimentSpec> {
    use Check::*;
    vec![
        ExperimentSpec {
            id: "E1",
            claim: "Cauchy-Riemann field of z^2 - 1 on [-2,2]^2 vanishes at exactly two isolated points",
            anchor: "Cauchy-Riemann reduction: zero sets of solutions of a generalized Cauchy-Riemann system in the plane are discrete",
            defaults: Params::new(512, 3),
            min_levels: 3,
            expectations: vec![
                expect("two components", "components", Equals(2.0)),
                expect("discrete under refinement", "discrete", IsTrue),
                expect("components within 2 cells of +-1", "root_offset_cells", AtMost(2.0)),
            ],
        },
        ExperimentSpec {
            id: "E2",
            claim: "mixed eigenform sqrt(2) f + df, f = cos x1 cos x2 on T^2, vanishes at four points",
            anchor: "Zero sets of Dirac eigensections on surfaces are discrete",
            defaults: Params::new(256, 4),
            min_levels: 4,
            expectations: vec![
                expect("four components", "components", Equals(4.0)),
                expect("discrete under refinement", "discrete", IsTrue),
                expect("box dimension below 0.3", "box_dimension", Below(0.3)),
            ],
        },
        ExperimentSpec {
            id: "E3",
            claim: "same mixed eigenform on T^3 vanishes on four circles, so the n - 2 bound is attained",
            anchor: "Zero sets of Dirac eigensections have dimension at most n - 2, and n - 2 is attained",
            defaults: Params::new(128, 4),
            min_levels: 4,
            expectations: vec![
                expect("four components", "components", Equals(4.0)),
                expect("box dimension in [0.8, 1.2]", "box_dimension", Within(0.8, 1.2)),
            ],
        },
        ExperimentSpec {
            id: "E4",
            claim: "harmonic 1-form x1 dx1 on [-1,1]^3 vanishes on a plane",
            anchor: "Noncompact counterexample: without compactness a harmonic form may vanish in codimension one",
            defaults: Params::new(128, 4),
            min_levels: 4,
            expectations: vec![expect("box dimension in [1.8, 2.2]", "box_dimension", Within(1.8, 2.2))],
        },
        ExperimentSpec {
            id: "E5",
            claim: "Laplace eigenform sin(2 pi x1) dx1 on T^3 vanishes on two planes",
            anchor: "Eigenform counterexample: a Laplace eigenform that is not a Dirac eigenform may vanish in codimension one",
            defaults: Params::new(128, 4),
            min_levels: 4,
            expectations: vec![expect("box dimension in [1.8, 2.2]", "box_dimension", Within(1.8, 2.2))],
        },
        ExperimentSpec {
            id: "E6",
            claim: "Clifford relations, Leibniz, Weitzenboeck and Green identities on T^2 and T^3, and the harmonic spinors of T^2",
            anchor: "Dirac bundle axioms and the identities D(fs) = fDs + grad f . s, D^2 = rough Laplacian on flat tori, D formally self-adjoint, <Delta w, w> = |(d + delta) w|^2",
            defaults: Params::new(64, 1),
            min_levels: 1,
            expectations: vec![
                expect("Clifford relations exact for n <= 4", "clifford_relations", IsTrue),
                expect("Leibniz residual below 1e-8", "leibniz", Below(1e-8)),
                expect("Weitzenboeck residual below 1e-10", "weitzenbock", Below(1e-10)),
                expect("spinor Green residual below 1e-10", "green", Below(1e-10)),
                expect("form Green residual below 1e-10", "green_forms", Below(1e-10)),
                expect("Laplace energy identity below 1e-10", "laplace_energy", Below(1e-10)),
                expect("at least 20 instances", "instances", AtLeast(20.0)),
                expect("kernel has dimension r = 2", "kernel_dimension", Equals(2.0)),
                expect("kernel spinors are constant", "kernel_constant", IsTrue),
                expect("kernel spinors are harmonic", "kernel_residual", Below(1e-10)),
                expect("kernel spinor has empty zero set", "kernel_nodal_cells", Equals(0.0)),
            ],
        },
        ExperimentSpec {
            id: "E7",
            claim: "cos x1 cos x2 on T^2: four singular points with equiangular crossings, gradient bounded below elsewhere",
            anchor: "Singular and regular parts of nodal sets: the regular part is a smooth hypersurface and nodal lines meet at equal angles",
            defaults: Params::new(64, 1),
            min_levels: 1,
            expectations: vec![
                expect("four singular points", "singular_points", Equals(4.0)),
                expect("points within 1e-3 of the analytic ones", "singular_max_error", AtMost(1e-3)),
                expect("four rays at each point", "ray_count_mismatches", Equals(0.0)),
                expect("crossing gaps 90 +- 2 degrees", "angle_max_deviation", AtMost(2.0)),
                expect("regular cells keep |df| >= 0.1", "min_regular_gradient", AtLeast(0.1)),
            ],
        },
        ExperimentSpec {
            id: "E8",
            claim: "Dirichlet eigenfunctions sin(mx) sin(ny) on [0,pi]^2: the i-th has at most i nodal domains",
            anchor: "Courant nodal domain theorem: the i-th eigenfunction has at most i nodal domains",
            defaults: Params::new(256, 1).with_suite(10, 1),
            min_levels: 1,
            expectations: vec![
                expect("ten eigenfunctions checked", "eigenfunctions", AtLeast(10.0)),
                expect("no Courant violation", "courant_violations", Equals(0.0)),
                expect("domain counts equal m n", "count_mismatches", Equals(0.0)),
            ],
        },
        ExperimentSpec {
            id: "E9",
            claim: "exact symbolic suite: preparation, resultant homogeneity and gcd agreement, nonvanishing resultants, lowest-order terms",
            anchor: "Local structure of common zeros: joint preparation, resultants of weighted degree k^2, and a combination whose resultant is not identically zero",
            defaults: Params::new(64, 1).with_suite(25, 64),
            min_levels: 1,
            expectations: vec![
                expect("Weierstrass round trips on >= 20 jets", "weierstrass_passed", AtLeast(20.0)),
                expect("no Weierstrass failure", "weierstrass_failed", Equals(0.0)),
                expect("homogeneity holds for every k <= 4", "homogeneity_failed", Equals(0.0)),
                expect("homogeneity checked for k = 1..4", "homogeneity_max_k", Equals(4.0)),
                expect("resultant agrees with gcd on >= 50 pairs", "gcd_passed", AtLeast(50.0)),
                expect("no resultant/gcd disagreement", "gcd_failed", Equals(0.0)),
                expect("nonvanishing resultant found for >= 25 solutions", "search_passed", AtLeast(25.0)),
                expect("no failed search", "search_failed", Equals(0.0)),
                expect("lowest-order term matches on >= 10 systems", "lowest_order_passed", AtLeast(10.0)),
                expect("no lowest-order mismatch", "lowest_order_failed", Equals(0.0)),
            ],
        },
    ]
}

/// Case-insensitive lookup by id.
pub fn find(id: &str) -> Option<ExperimentSpec> {
    registry().into_iter().find(|e| e.id.eq_ignore_ascii_case(id))
}

/// `(id, claim, anchor)` rows, sorted by id.
pub fn list_experiments() -> Vec<(&'static str, &'static str, &'static str)> {
    let mut rows: Vec<_> = registry().into_iter().map(|e| (e.id, e.claim, e.anchor)).collect();
    rows.sort_by_key(|r| r.0);
    rows
}
