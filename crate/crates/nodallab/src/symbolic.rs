//! E9: exact checks of preparation, resultants and the leading-term
//! machinery on seeded random inputs.

use nodallab_core::clifford::build_gamma;
use nodallab_core::obstruction::{build_leading_solution, find_nonvanishing_resultant, lowest_order_comparison};
use nodallab_core::polyjet::{Jet, VectorJet};
use nodallab_core::resultants::sylvester_resultant;
use nodallab_core::scalar::rat;
use nodallab_core::weierstrass::{monomials_of_degree, prepare};
use nodallab_core::{Gaussian, Rational, RationalJet, RationalPoly};
use num_complex::Complex;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::Params;
use crate::report::Outcome;
use crate::HarnessError;

const PREPARATION_ORDER: u32 = 8;
const MAX_SEARCH_RESAMPLES: usize = 32;

fn nonzero_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = loop {
        let v = rng.gen_range(-3i64..=3);
        if v != 0 {
            break v;
        }
    };
    rat(num, rng.gen_range(1..=3))
}

fn small_int(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(-3..=3)
}

/// `c·x₁ᵏ` plus sparse terms of total degree `k..=order`.
fn random_regular_jet(rng: &mut ChaCha8Rng, nvars: usize, k: u32, order: u32) -> RationalJet {
    let mut top = vec![0; nvars];
    top[0] = k;
    let mut terms = vec![(top.clone(), nonzero_rational(rng))];
    for d in k..=order {
        for m in monomials_of_degree(nvars, d) {
            if m != top && rng.gen_bool(0.3) {
                terms.push((m, nonzero_rational(rng)));
            }
        }
    }
    Jet::from_terms(nvars, order, terms)
}

fn homogeneous_real(rng: &mut ChaCha8Rng, nvars: usize, d: u32, order: u32, density: f64) -> RationalJet {
    let mut terms = Vec::new();
    for m in monomials_of_degree(nvars, d) {
        if rng.gen_bool(density) {
            terms.push((m, rat(small_int(rng), 1)));
        }
    }
    Jet::from_terms(nvars, order, terms)
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> RationalPoly {
    let degree = rng.gen_range(1..=max_degree);
    let mut cs: Vec<Rational> = (0..degree).map(|_| rat(small_int(rng), rng.gen_range(1..=3))).collect();
    cs.push(nonzero_rational(rng));
    RationalPoly::new(cs)
}

#[derive(Default)]
struct Tally {
    passed: usize,
    failed: usize,
    notes: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, note: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.notes.push(note());
        }
    }
}

fn weierstrass_round_trips(rng: &mut ChaCha8Rng, count: usize) -> Tally {
    let mut t = Tally::default();
    for i in 0..count {
        let nvars = 1 + i % 3;
        let k = 1 + (i / 3 % 4) as u32;
        let f = random_regular_jet(rng, nvars, k, PREPARATION_ORDER);
        let ok = prepare(&f, PREPARATION_ORDER).is_ok_and(|w| w.k == k && w.invariants_hold() && w.reexpand() == f);
        t.record(ok, || format!("weierstrass instance {i} (nvars {nvars}, k {k})"));
    }
    t
}

/// Monic `tᵏ + Σ uⱼ tʲ` with `uⱼ` homogeneous of degree `k − j` in two
/// variables, evaluated at `x′ = p`.
fn weighted_poly(us: &[RationalJet], p: &[Rational]) -> RationalPoly {
    let mut cs: Vec<Rational> = us.iter().map(|u| u.eval(p)).collect();
    cs.push(Rational::one());
    RationalPoly::new(cs)
}

fn homogeneity(rng: &mut ChaCha8Rng, count: usize) -> (Tally, u32) {
    let mut t = Tally::default();
    let mut max_k = 0;
    for i in 0..count {
        let k = 1 + (i % 4) as u32;
        max_k = max_k.max(k);
        let coeffs = |rng: &mut ChaCha8Rng| -> Vec<RationalJet> {
            (0..k).map(|j| homogeneous_real(rng, 2, k - j, k, 0.8)).collect()
        };
        let (pu, qu) = (coeffs(rng), coeffs(rng));
        let point = [nonzero_rational(rng), nonzero_rational(rng)];
        let lambda = nonzero_rational(rng);
        let scaled: Vec<Rational> = point.iter().map(|x| x * &lambda).collect();
        let base = sylvester_resultant(&weighted_poly(&pu, &point), &weighted_poly(&qu, &point));
        let moved = sylvester_resultant(&weighted_poly(&pu, &scaled), &weighted_poly(&qu, &scaled));
        let ok = match (base, moved) {
            (Ok(b), Ok(m)) => m == b * num_traits::pow(lambda, (k * k) as usize),
            _ => false,
        };
        t.record(ok, || format!("homogeneity instance {i} (k {k})"));
    }
    (t, max_k)
}

fn gcd_agreement(rng: &mut ChaCha8Rng, count: usize) -> (Tally, usize) {
    let mut t = Tally::default();
    let mut shared = 0;
    for i in 0..count {
        let (mut f, mut g) = (random_poly(rng, 3), random_poly(rng, 3));
        if i % 2 == 0 {
            let c = random_poly(rng, 2);
            f = f.mul(&c);
            g = g.mul(&c);
        }
        let common = f.gcd(&g).degree().unwrap_or(0) > 0;
        shared += usize::from(common);
        let ok = sylvester_resultant(&f, &g).is_ok_and(|r| r.is_zero() == common);
        t.record(ok, || format!("gcd instance {i}"));
    }
    (t, shared)
}

/// Gaussian-integer `y₀`, homogeneous of degree `k` in `x₂ … xₙ`.
fn random_seed_spinor(rng: &mut ChaCha8Rng, n: usize, rank: usize, k: u32) -> VectorJet<Gaussian> {
    let mons: Vec<Vec<u32>> = monomials_of_degree(n - 1, k)
        .into_iter()
        .map(|m| std::iter::once(0).chain(m).collect())
        .collect();
    let comps = (0..rank)
        .map(|_| {
            let mut terms = Vec::new();
            for m in &mons {
                if rng.gen_bool(0.7) {
                    terms.push((m.clone(), Complex::new(rat(small_int(rng), 1), rat(small_int(rng), 1))));
                }
            }
            Jet::from_terms(n, k, terms)
        })
        .collect();
    VectorJet::new(comps).expect("components share a shape")
}

fn resultant_search(rng: &mut ChaCha8Rng, count: usize, trials: usize, seed: u64) -> Tally {
    let mut t = Tally::default();
    for i in 0..count {
        let n = 2 + i % 3;
        let k = 1 + (i / 3 % 3) as u32;
        let rep = build_gamma::<Rational>(n).expect("n ≤ 4");
        let solution = (0..MAX_SEARCH_RESAMPLES).find_map(|_| {
            let y0 = random_seed_spinor(rng, n, rep.rank(), k);
            build_leading_solution(&y0, k, &rep).ok().filter(|ls| !ls.top().is_zero())
        });
        let ok = solution.is_some_and(|ls| {
            find_nonvanishing_resultant(&ls, trials, seed.wrapping_add(i as u64)).is_ok_and(|r| !r.resultant.is_zero())
        });
        t.record(ok, || format!("search instance {i} (n {n}, k {k})"));
    }
    t
}

fn random_system(rng: &mut ChaCha8Rng, nvars: usize, k: u32, order: u32) -> VectorJet<Rational> {
    let comps = (0..2)
        .map(|_| {
            let lead = loop {
                let l = homogeneous_real(rng, nvars, k, order, 0.7);
                if !l.is_zero() {
                    break l;
                }
            };
            (k + 1..=order).fold(lead, |acc, d| &acc + &homogeneous_real(rng, nvars, d, order, 0.3))
        })
        .collect();
    VectorJet::new(comps).expect("components share a shape")
}

fn lowest_order(rng: &mut ChaCha8Rng, count: usize, seed: u64) -> (Tally, usize) {
    let mut t = Tally::default();
    let mut nonzero = 0;
    for i in 0..count {
        let nvars = 2 + i % 2;
        let k = 1 + (i % 3) as u32;
        let order = (k * k).max(k + 2);
        let system = random_system(rng, nvars, k, order);
        let (alpha, beta) = loop {
            let a: Vec<i64> = (0..2).map(|_| rng.gen_range(-4..=4)).collect();
            let b: Vec<i64> = (0..2).map(|_| rng.gen_range(-4..=4)).collect();
            if a[0] * b[1] != a[1] * b[0] && a.iter().sum::<i64>() != 0 && b.iter().sum::<i64>() != 0 {
                break (a, b);
            }
        };
        let q = |v: &[i64]| v.iter().map(|&x| rat(x, 1)).collect::<Vec<_>>();
        let cmp = lowest_order_comparison(&system, order, &q(&alpha), &q(&beta), seed.wrapping_add(i as u64));
        let ok = cmp.as_ref().is_ok_and(|c| c.agrees());
        if let Ok(c) = &cmp {
            nonzero += usize::from(!c.leading.is_zero());
        }
        t.record(ok, || format!("lowest-order instance {i} (nvars {nvars}, k {k}): {:?}", cmp.as_ref().err()));
    }
    (t, nonzero)
}

pub(crate) fn e9_symbolic(params: &Params) -> Result<Outcome, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.instances;
    let weierstrass = weierstrass_round_trips(&mut rng, n);
    let (homog, max_k) = homogeneity(&mut rng, n);
    let (gcd, shared) = gcd_agreement(&mut rng, 2 * n);
    let search = resultant_search(&mut rng, n, params.trials, params.seed);
    let (lowest, nonzero) = lowest_order(&mut rng, (2 * n).div_ceil(5), params.seed);

    let mut outcome = Outcome::default();
    let m = &mut outcome.metrics;
    let mut notes = Vec::new();
    for (name, tally) in [
        ("weierstrass", weierstrass),
        ("homogeneity", homog),
        ("gcd", gcd),
        ("search", search),
        ("lowest_order", lowest),
    ] {
        m.insert(format!("{name}_passed"), json!(tally.passed));
        m.insert(format!("{name}_failed"), json!(tally.failed));
        notes.extend(tally.notes);
    }
    m.insert("homogeneity_max_k".into(), json!(max_k));
    m.insert("gcd_shared_factor_pairs".into(), json!(shared));
    m.insert("lowest_order_nonzero_leading".into(), json!(nonzero));
    m.insert("failures".into(), json!(notes));
    Ok(outcome)
}
