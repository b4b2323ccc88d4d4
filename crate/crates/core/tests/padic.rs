use heightlab_core::padic::{
    empirical_integral_padic, empirical_integral_padic_polygon, finite_local_mahler, newton_polygon,
    root_valuations, vp, Prime, Valuation,
};
use heightlab_core::{BigInt, BigRational, IntPoly};
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3, 5, 7, 31]).prop_map(|p| Prime::new(p).unwrap())
}

fn nonconstant(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
    (1..=max_deg)
        .prop_flat_map(move |d| (prop::collection::vec(-bound..=bound, d), 1..=bound))
        .prop_map(|(mut c, lead)| {
            c.push(lead);
            IntPoly::from_i64s(&c)
        })
}

fn monic(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
    (1..=max_deg).prop_flat_map(move |d| prop::collection::vec(-bound..=bound, d)).prop_map(|mut c| {
        c.push(1);
        IntPoly::from_i64s(&c)
    })
}

fn rational(bound: i64) -> impl Strategy<Value = BigRational> {
    (-bound..=bound, 1..=bound).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn v_int(mut x: BigInt, p: Prime) -> i64 {
    let p = BigInt::from(p.get());
    let mut v = 0;
    while &x % &p == BigInt::from(0) {
        x /= &p;
        v += 1;
    }
    v
}

fn finite(v: Valuation) -> i64 {
    v.finite().expect("nonzero")
}

proptest! {
    #[test]
    fn local_mahler_of_primitive_is_v_of_lead(p in nonconstant(15, 200), q in prime()) {
        let p = p.primitive_part().unwrap();
        let got = finite_local_mahler(&p, q).unwrap().coefficient_of_log_p;
        let want = BigRational::from_integer(v_int(p.leading_coeff().unwrap().clone(), q).into());
        prop_assert_eq!(got, want);
    }

    #[test]
    fn root_valuations_sum_to_end_valuations(p in nonconstant(15, 500), q in prime()) {
        let np = newton_polygon(&p, q);
        let total: BigRational = root_valuations(&np)
            .into_iter()
            .map(|(v, m)| v * BigInt::from(m))
            .fold(BigRational::from_integer(0.into()), |a, b| a + b);
        let first = p.coeffs().iter().find(|c| **c != BigInt::from(0)).unwrap().clone();
        let want = v_int(first, q) - v_int(p.leading_coeff().unwrap().clone(), q);
        prop_assert_eq!(total, BigRational::from_integer(want.into()));
        prop_assert_eq!(np.width(), p.degree().unwrap() - p.trailing_zeros());
    }

    #[test]
    fn shifted_roots_multiply_to_value(p in monic(10, 100), a in rational(30), q in prime()) {
        let pa = p.eval_rational(&a);
        prop_assume!(pa != BigRational::from_integer(0.into()));
        // monic: Π(α_i − a) = ±P(a)
        let np = newton_polygon(&p.shift_scaled(&a), q);
        let total: BigRational = root_valuations(&np)
            .into_iter()
            .map(|(v, m)| v * BigInt::from(m))
            .fold(BigRational::from_integer(0.into()), |a, b| a + b);
        prop_assert_eq!(total, BigRational::from_integer(finite(vp(&pa, q)).into()));
    }

    #[test]
    fn empirical_integral_ignores_constant_factors(
        p in nonconstant(10, 100),
        c in 2i64..5000,
        a in rational(30),
        q in prime(),
    ) {
        prop_assume!(p.eval_rational(&a) != BigRational::from_integer(0.into()));
        let base = empirical_integral_padic(&p, &a, q).unwrap();
        let scaled = empirical_integral_padic(&p.scale(&BigInt::from(c)), &a, q).unwrap();
        prop_assert_eq!(&scaled, &base);
        prop_assert_eq!(empirical_integral_padic_polygon(&p, &a, q).unwrap(), base);
    }
}

#[test]
fn autissier_three_adic_values() {
    let three = Prime::new(3).unwrap();
    let two = BigRational::from_integer(2.into());
    for n in 1..=200usize {
        let mut c = vec![BigInt::from(0); n + 2];
        c[0] += 5;
        c[1] -= 1;
        c[n] -= 2;
        c[n + 1] += 1;
        let v = empirical_integral_padic(&IntPoly::new(c), &two, three).unwrap();
        assert_eq!(v.coefficient_of_log_p, BigRational::new(1.into(), (n as i64 + 1).into()));
    }
}
