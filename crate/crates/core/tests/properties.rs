use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use airytrace::exactnum::interval::sqrt_int;
use airytrace::exactnum::{cyclotomic_poly, cyclotomic_value_int, ClearedValue, GaussInt, RealInterval};
use airytrace::gf2m::{FieldCtx, FqElt};
use airytrace::ntheory::{divisors, jacobi};
use airytrace::ppd::{p2, p3};
use airytrace::witt2::{w_add, w_trace, w_trace_fold, Witt2};

fn elt(ctx: &FieldCtx, raw: u32) -> FqElt {
    FqElt(raw & (ctx.size() as u32 - 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(d in 1u32..=24, a: u32, b: u32, c: u32) {
        let ctx = FieldCtx::new(d).unwrap();
        let (a, b, c) = (elt(&ctx, a), elt(&ctx, b), elt(&ctx, c));
        prop_assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
        prop_assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
        prop_assert_eq!(ctx.mul(a, b + c), ctx.mul(a, b) + ctx.mul(a, c));
        prop_assert_eq!(ctx.square(a + b), ctx.square(a) + ctx.square(b));
        prop_assert_eq!(ctx.mul(a, FqElt::ONE), a);
        if !a.is_zero() {
            prop_assert_eq!(ctx.mul(a, ctx.inverse(a).unwrap()), FqElt::ONE);
        }
    }

    #[test]
    fn tables_agree_with_shift_and_add(d in 2u32..=16, a: u32, b: u32) {
        let plain = FieldCtx::new(d).unwrap();
        let tab = FieldCtx::new(d).unwrap().with_tables();
        let (a, b) = (elt(&plain, a), elt(&plain, b));
        prop_assert_eq!(plain.mul(a, b), tab.mul(a, b));
        prop_assert_eq!(plain.pow(a, 12345), tab.pow(a, 12345));
    }

    #[test]
    fn absolute_trace(d in 1u32..=24, a: u32, b: u32) {
        let ctx = FieldCtx::new(d).unwrap();
        let (a, b) = (elt(&ctx, a), elt(&ctx, b));
        prop_assert_eq!(ctx.trace_to_f2(a), ctx.trace_by_frobenius(a));
        prop_assert_eq!(ctx.trace_to_f2(a + b), ctx.trace_to_f2(a) ^ ctx.trace_to_f2(b));
        prop_assert_eq!(ctx.trace_to_f2(ctx.square(a)), ctx.trace_to_f2(a));
        prop_assert_eq!(ctx.frobenius(a, d as u64), a);
    }

    #[test]
    fn witt_trace_is_additive(d in 1u32..=16, a: u32, b: u32, c: u32, e: u32) {
        let ctx = FieldCtx::new(d).unwrap();
        let u = Witt2::new(elt(&ctx, a), elt(&ctx, b));
        let v = Witt2::new(elt(&ctx, c), elt(&ctx, e));
        prop_assert_eq!(w_trace(&ctx, u), w_trace_fold(&ctx, u));
        prop_assert_eq!(w_trace(&ctx, w_add(&ctx, u, v)), w_trace(&ctx, u) + w_trace(&ctx, v));
    }

    #[test]
    fn witt_addition_is_associative(d in 1u32..=16, x in proptest::collection::vec(any::<u32>(), 6)) {
        let ctx = FieldCtx::new(d).unwrap();
        let w = |i: usize| Witt2::new(elt(&ctx, x[i]), elt(&ctx, x[i + 1]));
        let (u, v, s) = (w(0), w(2), w(4));
        prop_assert_eq!(w_add(&ctx, w_add(&ctx, u, v), s), w_add(&ctx, u, w_add(&ctx, v, s)));
        prop_assert_eq!(w_add(&ctx, u, v), w_add(&ctx, v, u));
    }

    #[test]
    fn cleared_values_round_trip(re in -1000i64..1000, im in -1000i64..1000, e in 0u64..12) {
        let v = ClearedValue::normalize(GaussInt::from_i64(re, im), e);
        let (r, i) = v.to_rational_parts();
        prop_assert_eq!(ClearedValue::from_rational_parts(&r, &i), Some(v.clone()));
        let sq = v.mul(&v.conj());
        prop_assert_eq!(sq.to_rational_parts().0, v.abs_square());
    }

    #[test]
    fn cyclotomic_product_over_divisors(n in 1u64..=60, x in -5i64..=5) {
        let x = BigInt::from(x);
        let prod: BigInt = divisors(n).iter().map(|&d| cyclotomic_value_int(d, &x)).product();
        prop_assert_eq!(prod, num_traits::pow(x.clone(), n as usize) - 1);
        prop_assert_eq!(cyclotomic_poly(n).eval_int(&x), cyclotomic_value_int(n, &x));
    }

    #[test]
    fn jacobi_is_multiplicative(a in 1i64..500, b in 1i64..500, k in 0u64..200) {
        let n = 2 * k + 1;
        let j = |v: i64| jacobi(v, n).unwrap();
        prop_assert_eq!(j(a * b), j(a) * j(b));
    }

    #[test]
    fn torus_factor_products(k in 1u64..=80) {
        let n = 2 * k + 1;
        let two = BigInt::from(2);
        prop_assert_eq!(p2(n, 1).unwrap() * p2(n, 3).unwrap(), cyclotomic_value_int(4 * n, &two));
        if n % 3 != 0 {
            let three = BigInt::from(3);
            prop_assert_eq!(p3(n, 1).unwrap() * p3(n, 5).unwrap(), cyclotomic_value_int(6 * n, &three));
        }
    }

    #[test]
    fn intervals_enclose(p in -10_000i64..10_000, q in 1i64..10_000, s in 1u64..1000) {
        let x = RealInterval::from_ratio(p, q, 96);
        prop_assert!(x.contains_rational(&BigRational::new(p.into(), q.into())));
        let r = sqrt_int(s, 96);
        prop_assert!(r.mul(&r).contains_int(&BigInt::from(s)));
        let one = RealInterval::from_int(1, 96);
        prop_assert!(x.add(&one).contains_rational(&(BigRational::new(p.into(), q.into()) + BigRational::one())));
    }
}
