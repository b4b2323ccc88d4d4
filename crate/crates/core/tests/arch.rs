use std::time::Instant;

use heightlab_core::arch::{
    empirical_integral_arch, mahler_quadrature, mahler_quadrature_univariate, mahler_univariate,
    mahler_univariate_certified, GreenSpec,
};
use heightlab_core::{find_roots, parse_poly, BigInt, IntPoly};
use proptest::prelude::*;

/// `(3√3/4π)·L(χ_{-3}, 2)`, summed directly with a tail correction.
fn smyth_constant() -> f64 {
    let mut l = 0.0;
    let n = 2_000_000u64;
    for k in 0..n {
        let a = (3 * k + 1) as f64;
        let b = (3 * k + 2) as f64;
        l += 1.0 / (a * a) - 1.0 / (b * b);
    }
    // remaining terms ≈ Σ_{k≥n} 2/(3k)^3
    let nf = n as f64;
    l += 1.0 / (27.0 * nf * nf);
    3.0 * 3f64.sqrt() / (4.0 * std::f64::consts::PI) * l
}

#[test]
fn smyth_plane() {
    let f = parse_poly("x0 + x1 + x2", &["x0", "x1", "x2"]).unwrap();
    let t = Instant::now();
    let q = mahler_quadrature(&f, 1024).unwrap();
    let dt = t.elapsed();
    let c = smyth_constant();
    println!("estimate {} err {} vs {} ({:?})", q.estimate, q.error_estimate, c, dt);
    assert!((q.estimate - c).abs() < 1e-4);
}

#[test]
fn circle_rule_matches_jensen() {
    let p = IntPoly::from_i64s(&[5, -1, 0, 0, 0, -2, 1]);
    let q = mahler_quadrature_univariate(&p, 1 << 10).unwrap();
    let m = mahler_univariate(&p).unwrap();
    assert!((q.estimate - m).abs() < 1e-10, "{} vs {}", q.estimate, m);
}

fn nonconstant(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
    (1..=max_deg)
        .prop_flat_map(move |d| (prop::collection::vec(-bound..=bound, d), 1..=bound))
        .prop_map(|(mut c, lead)| {
            c.push(lead);
            IntPoly::from_i64s(&c)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mahler_is_additive(p in nonconstant(10, 30), q in nonconstant(10, 30)) {
        let (mp, mq) = (mahler_univariate_certified(&p).unwrap(), mahler_univariate_certified(&q).unwrap());
        let mpq = mahler_univariate_certified(&(&p * &q)).unwrap();
        let tol = mp.error_bound + mq.error_bound + mpq.error_bound + 1e-12 * (1.0 + mpq.log_mahler.abs());
        prop_assert!((mpq.log_mahler - mp.log_mahler - mq.log_mahler).abs() <= tol);
    }

    #[test]
    fn scaling_adds_log_c(p in nonconstant(12, 50), c in 2i64..10_000) {
        let m = mahler_univariate(&p).unwrap();
        let mc = mahler_univariate(&p.scale(&BigInt::from(c))).unwrap();
        prop_assert!((mc - m - (c as f64).ln()).abs() <= 1e-12 * (1.0 + mc.abs()));
    }

    #[test]
    fn primitive_measures_are_nonnegative(p in nonconstant(20, 50)) {
        let Ok(p) = p.primitive_part() else { return Ok(()) };
        let m = mahler_univariate_certified(&p).unwrap();
        prop_assert!(m.log_mahler >= -m.error_bound - 1e-15);
    }

    #[test]
    fn truncation_is_monotone(p in nonconstant(12, 30), a in -3i64..=3) {
        let g = IntPoly::from_i64s(&[-a, 1]);
        prop_assume!(p.eval_int(&BigInt::from(a)) != BigInt::from(0));
        let rs = find_roots(&p, 1e-12).unwrap();
        let spec = GreenSpec::new(g).unwrap();
        let full = empirical_integral_arch(&rs, &spec, None).unwrap();
        let mut last = f64::NEG_INFINITY;
        for b in [-1.0, 0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 40.0] {
            let v = empirical_integral_arch(&rs, &spec, Some(b)).unwrap();
            prop_assert!(v >= last && v <= full + 1e-15);
            last = v;
        }
        let far = empirical_integral_arch(&rs, &spec, Some(1e6)).unwrap();
        prop_assert_eq!(far, full);
    }
}

#[test]
fn quadrature_agrees_with_roots() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 20 {
        let d = rng.gen_range(1..=12);
        let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-50..=50)).collect();
        c[d] = rng.gen_range(1..=50);
        let Ok(p) = IntPoly::from_i64s(&c).primitive_part() else { continue };
        let m = mahler_univariate(&p).unwrap();
        let q = mahler_quadrature_univariate(&p, 4096).unwrap();
        assert!((q.estimate - m).abs() <= 1e-6f64.max(3.0 * q.error_estimate), "{p}: {} vs {m}", q.estimate);
        checked += 1;
    }
}
