use std::collections::BTreeSet;

use hypersing::local::count_standard_monomials;
use hypersing::{
    branch_count, detect_weights, milnor_number, mora_normal_form, parse_poly, tangent_cone_lines,
    tjurina_number, Budget, Dimension, ExponentVector, LocalGerm, LocalOrder, Polynomial, Settings,
    VarStyle,
};
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn poly(nvars: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let term = (prop::collection::vec(0..=max_deg, nvars), -9i64..=9);
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        Polynomial::from_terms(
            nvars,
            terms
                .into_iter()
                .map(|(e, c)| (ExponentVector::new(e), q(c))),
        )
        .unwrap()
    })
}

fn three_polys() -> impl Strategy<Value = (Polynomial, Polynomial, Polynomial)> {
    (1usize..=3).prop_flat_map(|n| (poly(n, 3, 5), poly(n, 3, 5), poly(n, 3, 5)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws((a, b, c) in three_polys()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(a.nvars()), a.clone());
    }

    #[test]
    fn derivative_is_a_derivation((a, b, _) in three_polys()) {
        for i in 0..a.nvars() {
            let lhs = (&a * &b).partial_derivative(i).unwrap();
            let rhs = &(&a.partial_derivative(i).unwrap() * &b) + &(&a * &b.partial_derivative(i).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn printing_and_parsing_round_trip(p in (1usize..=4).prop_flat_map(|n| poly(n, 4, 6))) {
        for style in [VarStyle::Affine, VarStyle::Projective] {
            let text = p.to_string_with(style);
            prop_assert_eq!(parse_poly(&text, p.nvars()).unwrap(), p.clone(), "{}", text);
        }
    }

    #[test]
    fn normal_form_is_idempotent(
        (g, b1, b2) in (poly(2, 3, 4), poly(2, 3, 3), poly(2, 3, 3))
    ) {
        let basis: Vec<Polynomial> = [b1, b2].into_iter().filter(|b| !b.is_zero()).collect();
        prop_assume!(!basis.is_empty());
        let order = LocalOrder::NegDegRevLex;
        let mut budget = Budget::new(100_000);
        let Ok(r) = mora_normal_form(&g, &basis, order, &mut budget) else {
            return Ok(());
        };
        let again = mora_normal_form(&r, &basis, order, &mut Budget::new(100_000)).unwrap();
        prop_assert_eq!(again, r);
    }

    #[test]
    fn monomial_ideal_colength(
        leads in prop::collection::vec(prop::collection::vec(0u32..5, 3), 1..6)
    ) {
        let leads: Vec<ExponentVector> = leads.into_iter().map(ExponentVector::new).collect();
        let has_pure_power = |k: usize| {
            leads.iter().any(|l| (0..3).all(|j| (j == k) == (l[j] > 0)) || l.is_constant())
        };
        let finite = (0..3).all(has_pure_power);
        let count = count_standard_monomials(&leads, 3);
        prop_assert_eq!(count.is_finite(), finite);
        if let Dimension::Finite(c) = count {
            // every standard monomial has all exponents below 5
            let mut brute = 0;
            for a in 0..5u32 {
                for b in 0..5u32 {
                    for d in 0..5u32 {
                        let m = ExponentVector::new(vec![a, b, d]);
                        if !leads.iter().any(|l| l.divides(&m)) {
                            brute += 1;
                        }
                    }
                }
            }
            prop_assert_eq!(c, brute);
        }
    }

    #[test]
    fn tjurina_never_exceeds_milnor(f in poly(2, 5, 5)) {
        let f = Polynomial::from_terms(
            2,
            f.terms().filter(|(e, _)| e.degree() >= 2).map(|(e, c)| (e.clone(), c.clone())),
        )
        .unwrap();
        prop_assume!(!f.is_zero());
        let germ = LocalGerm::new(f.clone()).unwrap();
        let mu = milnor_number(&germ, &mut Budget::default()).unwrap();
        let tau = tjurina_number(&germ, &mut Budget::default()).unwrap();
        prop_assert!(tau <= mu);
        if let (Some(_), Dimension::Finite(_)) = (detect_weights(&germ), mu) {
            prop_assert_eq!(tau, mu);
        }
    }

    #[test]
    fn branches_of_a_product_of_smooth_branches(
        slopes in prop::collection::btree_set((-4i64..=4, -3i64..=3), 1..5)
    ) {
        // branch y = a x + b x^2 for each (a, b); distinct pairs give distinct branches
        let mut f = Polynomial::one(2);
        for (a, b) in &slopes {
            let branch = parse_poly(&format!("x2 - ({a})*x1 - ({b})*x1^2"), 2).unwrap();
            f = &f * &branch;
        }
        let germ = LocalGerm::new(f).unwrap();
        let r = branch_count(&germ, &Settings::default()).unwrap().r;
        prop_assert_eq!(r as usize, slopes.len());
        let tangents: BTreeSet<i64> = slopes.iter().map(|(a, _)| *a).collect();
        prop_assert_eq!(tangent_cone_lines(&germ).unwrap().t, tangents.len());
    }
}
