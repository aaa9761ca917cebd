//! Linearized polynomials over F_{2^d}, the symmetric pairing
//! <x, y> = xy + xR(y) + yR(x), and |trace at 0|^2 computed as a sum over the
//! radical of its trace form.

use std::collections::BTreeSet;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::airy::{trace_f, Form, SheafSpec};
use crate::error::{Error, Result};
use crate::exactnum::ClearedValue;
use crate::gf2m::{FieldCtx, FqElt};
use crate::linalg::{kernel_of_images, span};
use crate::ntheory::{gcd, jacobi};
use crate::witt2::{psi2_pair, w_trace, Witt2};

/// x -> sum over e in E of x^(2^e).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearizedPoly {
    exps: BTreeSet<u64>,
}

impl LinearizedPoly {
    pub fn new(exps: impl IntoIterator<Item = u64>) -> Self {
        LinearizedPoly { exps: exps.into_iter().collect() }
    }

    pub fn exponents(&self) -> impl Iterator<Item = u64> + '_ {
        self.exps.iter().copied()
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FqElt) -> FqElt {
        self.exps.iter().fold(FqElt(0), |acc, &e| acc + ctx.frobenius(x, e))
    }
}

/// Images of the polynomial basis 1, X, ..., X^(d-1) under an F_2-linear map.
fn basis_images<F: Fn(FqElt) -> FqElt>(ctx: &FieldCtx, map: F) -> Vec<u32> {
    (0..ctx.degree()).map(|j| map(FqElt(1 << j)).bits()).collect()
}

/// F_2-basis of the kernel of an F_2-linear map on k.
pub fn kernel_of_map<F: Fn(FqElt) -> FqElt>(ctx: &FieldCtx, map: F) -> Vec<FqElt> {
    kernel_of_images(&basis_images(ctx, map), ctx.degree()).into_iter().map(FqElt).collect()
}

/// F_2-basis of {x in k : L(x) = 0}.
pub fn linearized_kernel(ctx: &FieldCtx, l: &LinearizedPoly) -> Vec<FqElt> {
    kernel_of_map(ctx, |x| l.eval(ctx, x))
}

/// Every element of the F_2-span of a basis.
pub fn span_elements(basis: &[FqElt]) -> Vec<FqElt> {
    span(&basis.iter().map(|b| b.bits()).collect::<Vec<_>>()).into_iter().map(FqElt).collect()
}

/// <x, y> = xy + x R(y) + y R(x).
pub fn pairing(ctx: &FieldCtx, r: &LinearizedPoly, x: FqElt, y: FqElt) -> FqElt {
    ctx.mul(x, y) + ctx.mul(x, r.eval(ctx, y)) + ctx.mul(y, r.eval(ctx, x))
}

/// Radical of the F_2-bilinear form Tr <x, y>, from its Gram matrix.
pub fn pairing_radical(ctx: &FieldCtx, r: &LinearizedPoly) -> Vec<FqElt> {
    let d = ctx.degree();
    let columns: Vec<u32> = (0..d)
        .map(|j| {
            (0..d).fold(0u32, |acc, i| {
                acc | ctx.trace_to_f2(pairing(ctx, r, FqElt(1 << i), FqElt(1 << j))) << i
            })
        })
        .collect();
    kernel_of_images(&columns, d).into_iter().map(FqElt).collect()
}

/// The linearized polynomial whose kernel is the radical: x + R(x) + R*(x),
/// where R* replaces each x^(2^i) by x^(2^-i), i.e. x^(2^(d-i)) on F_{2^d}.
/// Exponents meeting twice cancel.
pub fn radical_poly(r: &LinearizedPoly, d: u32) -> LinearizedPoly {
    let d = d as u64;
    let mut exps = BTreeSet::from([0u64]);
    let mut toggle = |e: u64| {
        if !exps.remove(&e) {
            exps.insert(e);
        }
    };
    for e in r.exponents() {
        toggle(e % d);
        toggle((d - e % d) % d);
    }
    LinearizedPoly { exps }
}

/// Splits f1 = x R(x) + A(x) with R, A additive: monomials x^(1+2^i), i >= 1,
/// go to R and monomials x^(2^j) to A.
pub fn split_f1(spec: &SheafSpec) -> Result<(LinearizedPoly, LinearizedPoly)> {
    let f1 = spec.f1().ok_or_else(|| Error::Precondition("spec has no f1 with f = f1(x^t(q))".into()))?;
    let (mut r, mut a) = (Vec::new(), Vec::new());
    for &e in f1.exponents() {
        if e.is_power_of_two() {
            a.push(e.trailing_zeros() as u64);
        } else if (e - 1).is_power_of_two() && e > 2 {
            r.push((e - 1).trailing_zeros() as u64);
        } else {
            return Err(Error::Precondition(format!("monomial x^{e} of f1 is neither x^(1+2^i) nor x^(2^j)")));
        }
    }
    Ok((LinearizedPoly::new(r), LinearizedPoly::new(a)))
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub n: u32,
    pub degree: u32,
    pub kernel_basis: Vec<String>,
    pub kernel_size: u64,
    /// sum over the radical of psi_2(Tr [x, x R(x) + A(x)])
    pub kernel_sum: i64,
    /// |trace_F at 0|^2 by direct summation, when requested.
    pub direct_abs_sq: Option<String>,
    pub consistent: bool,
}

fn check_bijective(spec: &SheafSpec, ctx: &FieldCtx) -> Result<()> {
    let t = spec.t_q() % ctx.unit_order() as u128;
    if gcd(t as u64, ctx.unit_order()) != 1 {
        return Err(Error::Precondition(format!(
            "x -> x^{} is not bijective on F_2^{}",
            spec.t_q(),
            ctx.degree()
        )));
    }
    Ok(())
}

/// sum over x in Ker of psi_2(Tr V(x)), V(x) = [x, x R(x) + A(x)]. Equals
/// |trace_F(spec, k, 0)|^2 whenever x -> x^t(q) is a bijection of k, and
/// is either 0 or #Ker.
pub fn abs_trace0_sq_via_kernel(spec: &SheafSpec, ctx: &FieldCtx) -> Result<i64> {
    Ok(kernel_sum(spec, ctx)?.1)
}

fn kernel_sum(spec: &SheafSpec, ctx: &FieldCtx) -> Result<(Vec<FqElt>, i64)> {
    if spec.form() != Form::F {
        return Err(Error::InvalidSpec("kernel method needs the F form".into()));
    }
    check_bijective(spec, ctx)?;
    let (r, a) = split_f1(spec)?;
    witt_kernel_sum(ctx, &r, |x| a.eval(ctx, x))
}

/// For V(x) = [x, x R(x) + A(x)] with any additive A on k: the radical of the
/// pairing and sum over it of psi_2(Tr V(x)), which equals
/// |sum_x psi_2(Tr V(x))|^2 / #k.
pub fn witt_kernel_sum<A: Fn(FqElt) -> FqElt>(ctx: &FieldCtx, r: &LinearizedPoly, a: A) -> Result<(Vec<FqElt>, i64)> {
    let basis = linearized_kernel(ctx, &radical_poly(r, ctx.degree()));
    let (mut re, mut im) = (0i64, 0i64);
    for x in span_elements(&basis) {
        let v = Witt2::new(x, ctx.mul(x, r.eval(ctx, x)) + a(x));
        let (p, q) = psi2_pair(w_trace(ctx, v));
        re += p;
        im += q;
    }
    let size = 1i64 << basis.len();
    if im != 0 || (re != 0 && re != size) {
        return Err(Error::Certificate(format!("kernel sum {re}+{im}i is neither 0 nor #Ker = {size}")));
    }
    Ok((basis, re))
}

/// |sum_x psi_2(Tr V(x))|^2 / #k by direct summation, as an exact rational.
pub fn witt_abs_sq_direct<A: Fn(FqElt) -> FqElt>(ctx: &FieldCtx, r: &LinearizedPoly, a: A) -> num_rational::BigRational {
    let (mut re, mut im) = (0i64, 0i64);
    for x in ctx.elements() {
        let v = Witt2::new(x, ctx.mul(x, r.eval(ctx, x)) + a(x));
        let (p, q) = psi2_pair(w_trace(ctx, v));
        re += p;
        im += q;
    }
    num_rational::BigRational::new((re * re + im * im).into(), (ctx.size() as i64).into())
}

/// The kernel sum together with the direct |trace_F at 0|^2 when `direct`.
pub fn kernel_trace_report(spec: &SheafSpec, ctx: &FieldCtx, direct: bool) -> Result<KernelReport> {
    let (basis, sum) = kernel_sum(spec, ctx)?;
    let direct_abs_sq = if direct { Some(trace_f(spec, ctx, FqElt(0))?.abs_square()) } else { None };
    let consistent = direct_abs_sq.as_ref().is_none_or(|v| v.is_integer() && v.to_integer().to_i64() == Some(sum));
    Ok(KernelReport {
        n: spec.n(),
        degree: ctx.degree(),
        kernel_basis: basis.iter().map(|b| format!("{:#x}", b.bits())).collect(),
        kernel_size: 1 << basis.len(),
        kernel_sum: sum,
        direct_abs_sq: direct_abs_sq.map(|v| v.to_string()),
        consistent,
    })
}

/// (trace at 0, trace at 1) over F_q for the standard sheaf:
/// (-eps 2^n i, -1) with eps = (2 | 2n+1).
pub fn predict_closed_forms(n: u32) -> Result<(ClearedValue, ClearedValue)> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let eps = jacobi(2, 2 * n as u64 + 1)? as i64;
    Ok((ClearedValue::from_i64(0, -eps << n), ClearedValue::from_i64(-1, 0)))
}

/// Direct traces at 0 and 1 over F_q for the standard sheaf.
pub fn direct_closed_forms(n: u32) -> Result<(ClearedValue, ClearedValue)> {
    let spec = SheafSpec::suzuki_standard(n)?;
    let ctx = FieldCtx::new(2 * n + 1)?;
    Ok((trace_f(&spec, &ctx, FqElt(0))?, trace_f(&spec, &ctx, FqElt(1))?))
}

/// Ker'(F_q) = {x : sum_{i=0}^{2n-2} x^(2^i) = 0} is trivial.
pub fn kerprime_check(n: u32) -> Result<bool> {
    let ctx = FieldCtx::new(2 * n + 1)?;
    let l = LinearizedPoly::new(0..=2 * n as u64 - 2);
    Ok(linearized_kernel(&ctx, &l).is_empty())
}

#[derive(Clone, Debug, Serialize)]
pub struct F0cReport {
    pub n: u32,
    pub m: u32,
    pub abs_sq: String,
    pub kernel_sum: i64,
    pub allowed: bool,
}

/// For infg_family(n) and m = 2 floor(n/2) + 1, |trace at 0 over F_{2^m}|^2
/// lies in {0, 2^(m-1)}; computed directly and by the kernel sum.
pub fn traces_f0c_check(n: u32) -> Result<F0cReport> {
    if n < 2 {
        return Err(Error::Precondition("n must be at least 2".into()));
    }
    let spec = SheafSpec::infg_family(n)?;
    let m = 2 * (n / 2) + 1;
    let ctx = FieldCtx::new(m)?;
    let v = trace_f(&spec, &ctx, FqElt(0))?.abs_square();
    let ks = abs_trace0_sq_via_kernel(&spec, &ctx)?;
    let half = 1i64 << (m - 1);
    let value = v.is_integer().then(|| v.to_integer().to_i64()).flatten();
    let allowed = value == Some(ks) && (ks == 0 || ks == half) && !v.is_zero() == (ks != 0);
    Ok(F0cReport { n, m, abs_sq: v.to_string(), kernel_sum: ks, allowed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy::F2Poly;
    use crate::airy::Family;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kernel_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in 1..=12u32 {
            let ctx = FieldCtx::new(d).unwrap().with_tables();
            for _ in 0..4 {
                let exps: Vec<u64> = (0..3).map(|_| rand::Rng::gen_range(&mut rng, 0..2 * d as u64)).collect();
                let l = LinearizedPoly::new(exps);
                let basis = linearized_kernel(&ctx, &l);
                let roots = ctx.elements().filter(|&x| l.eval(&ctx, x).is_zero()).count();
                assert_eq!(1usize << basis.len(), roots, "d={d} E={:?}", l.exps);
                for x in span_elements(&basis) {
                    assert!(l.eval(&ctx, x).is_zero());
                }
            }
        }
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let ctx = FieldCtx::new(9).unwrap();
        assert!(linearized_kernel(&ctx, &LinearizedPoly::new([0])).is_empty());
    }

    #[test]
    fn n1_kernel_in_f64() {
        let ctx = FieldCtx::new(6).unwrap();
        let b = linearized_kernel(&ctx, &LinearizedPoly::new([0, 1, 2]));
        assert_eq!(1 << b.len(), 4);
    }

    #[test]
    fn pairing_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in [5u32, 7, 10] {
            let ctx = FieldCtx::new(d).unwrap();
            let r = LinearizedPoly::new([1, 2]);
            for _ in 0..50 {
                let (x, y, z) = (ctx.random(&mut rng), ctx.random(&mut rng), ctx.random(&mut rng));
                assert!(pairing(&ctx, &r, x, FqElt(0)).is_zero());
                assert_eq!(ctx.trace_to_f2(pairing(&ctx, &r, x, y)), ctx.trace_to_f2(pairing(&ctx, &r, y, x)));
                assert_eq!(pairing(&ctx, &r, x + z, y), pairing(&ctx, &r, x, y) + pairing(&ctx, &r, z, y));
            }
            let mut rad = span_elements(&pairing_radical(&ctx, &r));
            let mut lin = span_elements(&linearized_kernel(&ctx, &radical_poly(&r, d)));
            rad.sort_by_key(|x| x.bits());
            lin.sort_by_key(|x| x.bits());
            assert_eq!(rad, lin);
        }
    }

    #[test]
    fn kernel_method_over_q_squared() {
        for (n, want) in [(1u32, 4i64), (2, 16), (3, 64)] {
            let spec = SheafSpec::suzuki_standard(n).unwrap();
            let ctx = FieldCtx::new(2 * (2 * n + 1)).unwrap().with_tables();
            let rep = kernel_trace_report(&spec, &ctx, true).unwrap();
            assert_eq!(rep.kernel_sum, want);
            assert!(rep.consistent);
            let small = FieldCtx::new(2 * n + 1).unwrap();
            let l = LinearizedPoly::new(0..=2 * n as u64);
            assert_eq!(linearized_kernel(&ctx, &l).len(), linearized_kernel(&small, &l).len());
        }
    }

    #[test]
    fn generalized_kernel_sum_matches_direct() {
        let mut zeros = 0;
        for d in 2..=9u32 {
            let ctx = FieldCtx::new(d).unwrap();
            for r in [LinearizedPoly::new([1]), LinearizedPoly::new([1, 2])] {
                for c in ctx.elements() {
                    let (_, sum) = witt_kernel_sum(&ctx, &r, |x| ctx.mul(c, x)).unwrap();
                    let direct = witt_abs_sq_direct(&ctx, &r, |x| ctx.mul(c, x));
                    assert_eq!(direct, num_rational::BigRational::from_integer(sum.into()), "d={d} c={c:?}");
                    zeros += (sum == 0) as u32;
                }
            }
        }
        // the linear form on the radical is nontrivial for some c
        assert!(zeros > 0);
    }

    #[test]
    fn f2_coefficients_with_additive_part() {
        // an additive part u^(2^j) adds Tr x, which is 0 on the radical, so
        // the sum is still #Ker
        let t = crate::airy::t_of_q(1);
        for exps in [[1u128, 3], [2, 3]] {
            let f1 = F2Poly::from_exponents(exps);
            let spec = SheafSpec::new(1, f1.compose_power(t), Some(f1), Form::F, Family::Custom).unwrap();
            for d in [3u32, 6, 9] {
                let ctx = FieldCtx::new(d).unwrap();
                let rep = kernel_trace_report(&spec, &ctx, true).unwrap();
                assert!(rep.consistent);
                assert_eq!(rep.kernel_sum as u64, rep.kernel_size);
            }
        }
        let spec = SheafSpec::suzuki_standard(2).unwrap();
        assert!(split_f1(&spec.descent(spec.t_q()).unwrap()).is_ok());
        let f1 = F2Poly::from_exponents([9, 6]);
        let t3 = crate::airy::t_of_q(3);
        let bad = SheafSpec::new(3, f1.compose_power(t3), Some(f1), Form::F, Family::Custom).unwrap();
        assert!(split_f1(&bad).is_err());
    }

    #[test]
    fn bijectivity_required() {
        let spec = SheafSpec::suzuki_standard(1).unwrap();
        // t(8) = 5 divides 2^4 - 1
        let ctx = FieldCtx::new(4).unwrap();
        assert!(abs_trace0_sq_via_kernel(&spec, &ctx).is_err());
    }

    #[test]
    fn closed_forms() {
        let (t0, t1) = predict_closed_forms(1).unwrap();
        assert_eq!(t0, ClearedValue::from_i64(0, 2));
        assert_eq!(t1, ClearedValue::from_i64(-1, 0));
        assert_eq!(predict_closed_forms(3).unwrap().0, ClearedValue::from_i64(0, -8));
        for n in 1..=5 {
            assert_eq!(predict_closed_forms(n).unwrap(), direct_closed_forms(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn kerprime() {
        for n in 1..=6 {
            assert!(kerprime_check(n).unwrap());
        }
    }

    #[test]
    fn f0c() {
        for n in 2..=6 {
            let r = traces_f0c_check(n).unwrap();
            assert!(r.allowed, "{r:?}");
            assert_ne!(r.abs_sq, "1");
        }
    }
}
