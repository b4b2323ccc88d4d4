use heightlab_core::poly::{parse_poly, resultant, MultiPoly, RatPoly};
use heightlab_core::{parse_univariate, BigInt, BigRational, IntPoly};
use proptest::prelude::*;

fn int_poly(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-bound..=bound, 1..=max_deg + 1).prop_map(|c| IntPoly::from_i64s(&c))
}

fn nonzero_poly(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
    int_poly(max_deg, bound).prop_filter("nonzero", |p| !p.is_zero())
}

fn rational(bound: i64) -> impl Strategy<Value = BigRational> {
    (-bound..=bound, 1..=bound).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn multi_poly() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0u32..4, 3), -20i64..=20), 0..8)
        .prop_map(|terms| MultiPoly::from_terms(3, terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

proptest! {
    #[test]
    fn display_parses_back(p in int_poly(12, 1_000_000)) {
        prop_assert_eq!(parse_univariate(&p.to_string(), "T").unwrap(), p);
    }

    #[test]
    fn multivariate_display_parses_back(f in multi_poly()) {
        let vars = ["x", "y", "z"];
        let text = f.display_with(&vars);
        prop_assert_eq!(parse_poly(&text, &vars).unwrap(), f);
    }

    #[test]
    fn shift_is_invertible(p in int_poly(10, 100), a in rational(20)) {
        let back = p.shift(&a).shift(&-a.clone());
        prop_assert_eq!(back, RatPoly::from_int(&p));
    }

    #[test]
    fn shift_commutes_with_evaluation(p in int_poly(10, 100), a in rational(20), x in rational(20)) {
        prop_assert_eq!(p.shift(&a).eval_rational(&x), p.eval_rational(&(&x + &a)));
    }

    #[test]
    fn scaled_shift_clears_the_denominator(p in nonzero_poly(10, 100), a in rational(20)) {
        let d = p.degree().unwrap();
        let s = BigRational::from_integer(a.denom().clone());
        let want: Vec<BigRational> = p.shift(&a).coeffs().iter().map(|c| c * num_pow(&s, d)).collect();
        let got: Vec<BigRational> = p.shift_scaled(&a).coeffs().iter().cloned().map(BigRational::from_integer).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn integer_shift_matches_rational_shift(p in int_poly(10, 100), a in -30i64..=30) {
        let shifted = p.shift_int(&BigInt::from(a));
        prop_assert_eq!(RatPoly::from_int(&shifted), p.shift(&BigRational::from_integer(a.into())));
    }

    #[test]
    fn content_is_multiplicative(p in nonzero_poly(8, 60), q in nonzero_poly(8, 60)) {
        let pq = &p * &q;
        prop_assert_eq!(pq.content().unwrap(), p.content().unwrap() * q.content().unwrap());
    }

    #[test]
    fn resultant_against_a_linear_factor(p in nonzero_poly(10, 50), a in -20i64..=20) {
        // Res(P, T - a) = a_d·Π(α_i - a) = (-1)^d·P(a)
        let d = p.degree().unwrap();
        let pa = p.eval_int(&BigInt::from(a));
        let want = if d % 2 == 0 { pa } else { -pa };
        prop_assert_eq!(resultant(&p, &IntPoly::from_i64s(&[-a, 1])), want);
    }

    #[test]
    fn resultant_is_antisymmetric_and_multiplicative(
        p in nonzero_poly(6, 20),
        q in nonzero_poly(6, 20),
        r in nonzero_poly(4, 20),
    ) {
        let (m, n) = (p.degree().unwrap(), q.degree().unwrap());
        let pq = resultant(&p, &q);
        let qp = resultant(&q, &p);
        prop_assert_eq!(&pq, &if (m * n) % 2 == 1 { -qp } else { qp });
        prop_assert_eq!(resultant(&p, &(&q * &r)), pq * resultant(&p, &r));
    }
}

fn num_pow(x: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::from_integer(1.into()), |acc, _| acc * x)
}
