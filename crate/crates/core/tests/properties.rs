use num_complex::Complex;
use num_traits::{One, Zero};
use proptest::prelude::*;

use nodallab_core::clifford::{build_gamma, relations_check};
use nodallab_core::obstruction::build_leading_solution;
use nodallab_core::polyjet::{Jet, VectorJet};
use nodallab_core::resultants::{real_roots_sorted, square_free_decomposition, sylvester_resultant};
use nodallab_core::scalar::rat;
use nodallab_core::weierstrass::{monomials_of_degree, prepare};
use nodallab_core::{Rational, RationalJet, RationalPoly};

const ORDER: u32 = 4;

fn small() -> impl Strategy<Value = i64> {
    -4i64..=4
}

fn jet2() -> impl Strategy<Value = RationalJet> {
    let mons: Vec<Vec<u32>> = (0..=ORDER).flat_map(|d| monomials_of_degree(2, d)).collect();
    proptest::collection::vec(small(), mons.len()).prop_map(move |cs| {
        Jet::from_terms(2, ORDER, mons.iter().cloned().zip(cs.into_iter().map(|c| rat(c, 1))))
    })
}

fn poly(max_degree: usize) -> impl Strategy<Value = RationalPoly> {
    proptest::collection::vec(small(), 2..=max_degree + 1).prop_map(|mut cs| {
        if *cs.last().unwrap() == 0 {
            *cs.last_mut().unwrap() = 1;
        }
        RationalPoly::from_ints(&cs)
    })
}

fn roots() -> impl Strategy<Value = Vec<Rational>> {
    proptest::collection::vec(-5i64..=5, 1..=3).prop_map(|v| v.into_iter().map(|r| rat(r, 1)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jets_form_a_commutative_ring(a in jet2(), b in jet2(), c in jet2()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &Jet::one(2, ORDER), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn unit_inverse_is_an_inverse(a in jet2(), c in 1i64..=4) {
        let u = &a.filter(|m| m.iter().sum::<u32>() > 0) + &Jet::constant(2, ORDER, rat(c, 1));
        let inv = u.unit_inverse().unwrap();
        prop_assert_eq!(&u * &inv, Jet::one(2, ORDER));
    }

    #[test]
    fn weierstrass_round_trip(k in 1u32..=3, tail in jet2(), lead in 1i64..=3) {
        let x1k = Jet::monomial(2, ORDER, vec![k, 0], rat(lead, 1));
        let f = &x1k + &tail.filter(|m| m.iter().sum::<u32>() >= k && m[0] != k);
        let w = prepare(&f, ORDER).unwrap();
        prop_assert_eq!(w.k, k);
        prop_assert!(w.invariants_hold());
        prop_assert_eq!(w.reexpand(), f);
    }

    #[test]
    fn resultant_is_product_of_root_differences(a in roots(), b in roots()) {
        let f = RationalPoly::from_roots(&a);
        let g = RationalPoly::from_roots(&b);
        let expected = a.iter().flat_map(|x| b.iter().map(move |y| x - y)).fold(Rational::one(), |acc, d| acc * d);
        prop_assert_eq!(sylvester_resultant(&f, &g).unwrap(), expected);
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(f in poly(3), g in poly(3)) {
        let res = sylvester_resultant(&f, &g).unwrap();
        let shared = f.gcd(&g).degree().unwrap_or(0) > 0;
        prop_assert_eq!(res.is_zero(), shared);
    }

    #[test]
    fn resultant_is_multiplicative(f in poly(2), h in poly(2), g in poly(2)) {
        let lhs = sylvester_resultant(&f.mul(&h), &g).unwrap();
        let rhs = sylvester_resultant(&f, &g).unwrap() * sylvester_resultant(&h, &g).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn square_free_parts_multiply_back(r in roots(), s in roots()) {
        let p = RationalPoly::from_roots(&r).mul(&RationalPoly::from_roots(&s));
        let back = square_free_decomposition(&p)
            .iter()
            .fold(RationalPoly::one(), |acc, (q, m)| (0..*m).fold(acc, |a, _| a.mul(q)));
        prop_assert_eq!(back, p.monic());
    }

    #[test]
    fn integer_roots_are_recovered(mut r in proptest::collection::btree_set(-6i64..=6, 1..=4)) {
        let rs: Vec<Rational> = r.iter().map(|&x| rat(x, 1)).collect();
        let found = real_roots_sorted(&RationalPoly::from_roots(&rs), 1e-10);
        let expected: Vec<i64> = std::mem::take(&mut r).into_iter().collect();
        prop_assert_eq!(found.len(), expected.len());
        for (root, e) in found.iter().zip(expected) {
            prop_assert!((root.value - e as f64).abs() < 1e-9);
            prop_assert_eq!(root.multiplicity, 1);
        }
    }

    #[test]
    fn leading_solutions_solve_the_model_equation(
        k in 1u32..=3,
        coeffs in proptest::collection::vec((small(), small()), 8),
    ) {
        let rep = build_gamma::<Rational>(3).unwrap();
        let mons = monomials_of_degree(2, k);
        let mut it = coeffs.into_iter();
        let comps: Vec<Jet<Complex<Rational>>> = (0..rep.rank())
            .map(|_| {
                Jet::from_terms(3, k, mons.iter().map(|m| {
                    let (re, im) = it.next().unwrap_or((1, 0));
                    (vec![0, m[0], m[1]], Complex::new(rat(re, 1), rat(im, 1)))
                }))
            })
            .collect();
        let y0 = VectorJet::new(comps).unwrap();
        let ls = build_leading_solution(&y0, k, &rep).unwrap();
        prop_assert!(ls.invariants_hold());
    }
}

#[test]
fn exact_gamma_relations_hold_through_dimension_six() {
    for n in 1..=6 {
        let rep = build_gamma::<Rational>(n).unwrap();
        assert!(relations_check(&rep).holds, "n = {n}");
        assert_eq!(rep.rank(), 1 << (n / 2));
    }
}
