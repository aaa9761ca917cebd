//! Sheaf specifications and exact single-point Frobenius traces.
//!
//! The trace of F(q, f) at t in k is
//!   -1/(1 - (-1)^n i)^deg(k) * sum_{x in k} psi_2(Tr [x^t(q), f(x) + t x]),
//! and the descent G(q, f, r) with t(q) = r s has trace
//!   -1/(1 - (-1)^n i)^deg(k) * sum_{x in k} psi_2(Tr [u, f1(u) + x]),  u = x^t(q) / t^s.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{ClearedValue, GaussInt};
use crate::gf2m::{FieldCtx, FqElt};
use crate::witt2::{psi2, psi2_pair, w_trace, Witt2};

/// Largest supported n; keeps every exponent of f inside u128.
pub const MAX_N: u32 = 40;

/// Sums over more than 2^PAR_MIN_DEGREE points are split across threads.
const PAR_MIN_DEGREE: u32 = 14;

/// t(q) = q + 1 - 2 q0 for q = 2^(2n+1), q0 = 2^n.
pub fn t_of_q(n: u32) -> u128 {
    assert!(n <= MAX_N, "n = {n} too large");
    (1u128 << (2 * n + 1)) + 1 - (1u128 << (n + 1))
}

/// A polynomial over F_2, stored as its sorted set of exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct F2Poly {
    exps: Vec<u128>,
}

impl F2Poly {
    /// Builds a polynomial from exponents; repeated exponents cancel in pairs.
    pub fn from_exponents(exps: impl IntoIterator<Item = u128>) -> Self {
        let mut v: Vec<u128> = exps.into_iter().collect();
        v.sort_unstable();
        let mut out: Vec<u128> = Vec::with_capacity(v.len());
        for e in v {
            if out.last() == Some(&e) {
                out.pop();
            } else {
                out.push(e);
            }
        }
        F2Poly { exps: out }
    }

    pub fn monomial(e: u128) -> Self {
        F2Poly { exps: vec![e] }
    }

    pub fn exponents(&self) -> &[u128] {
        &self.exps
    }

    pub fn degree(&self) -> Option<u128> {
        self.exps.last().copied()
    }

    /// Number of nonzero monomials.
    pub fn weight(&self) -> usize {
        self.exps.len()
    }

    pub fn has_constant_term(&self) -> bool {
        self.exps.first() == Some(&0)
    }

    /// f(x^m).
    pub fn compose_power(&self, m: u128) -> F2Poly {
        F2Poly { exps: self.exps.iter().map(|&e| e.checked_mul(m).expect("exponent overflow")).collect() }
    }

    #[inline]
    pub fn eval(&self, ctx: &FieldCtx, x: FqElt) -> FqElt {
        let mut acc = FqElt::ZERO;
        for &e in &self.exps {
            acc += ctx.pow(x, e);
        }
        acc
    }
}

impl fmt::Display for F2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self.exps.iter().rev().map(|e| format!("x^{e}")).collect();
        f.write_str(&terms.join("+"))
    }
}

/// Which trace formula a spec uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Form {
    F,
    /// Descent with t(q) = r s.
    G { r: u128 },
}

/// Where the coefficient polynomial came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Standard,
    Infg,
    Monomial,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SheafSpec {
    n: u32,
    f: F2Poly,
    f1: Option<F2Poly>,
    form: Form,
    family: Family,
}

impl SheafSpec {
    /// General constructor; checks deg f = (q0+1) t(q), that f = f1(x^t(q))
    /// when f1 is given, and r | t(q) for the descent form.
    pub fn new(n: u32, f: F2Poly, f1: Option<F2Poly>, form: Form, family: Family) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidSpec(format!("n must lie in 1..={MAX_N}, got {n}")));
        }
        let t = t_of_q(n);
        let want = ((1u128 << n) + 1) * t;
        if f.degree() != Some(want) {
            return Err(Error::InvalidSpec(format!("deg f must be (q0+1)t(q) = {want}, got {:?}", f.degree())));
        }
        if let Some(f1) = &f1 {
            if f1.compose_power(t) != f {
                return Err(Error::InvalidSpec("f is not f1(x^t(q))".into()));
            }
        }
        if let Form::G { r } = form {
            if r == 0 || !t.is_multiple_of(r) {
                return Err(Error::InvalidSpec(format!("descent index {r} does not divide t(q) = {t}")));
            }
            if f1.is_none() {
                return Err(Error::InvalidSpec("descent needs f of the form f1(x^t(q))".into()));
            }
        }
        Ok(SheafSpec { n, f, f1, form, family })
    }

    fn from_f1(n: u32, f1: F2Poly, family: Family) -> Result<Self> {
        let f = f1.compose_power(t_of_q(n));
        SheafSpec::new(n, f, Some(f1), Form::F, family)
    }

    /// f(x) = sum_{i=1}^n x^((1+2^i) t(q)).
    pub fn suzuki_standard(n: u32) -> Result<Self> {
        SheafSpec::from_f1(n, F2Poly::from_exponents((1..=n).map(|i| 1 + (1u128 << i))), Family::Standard)
    }

    /// f1 = sum_{i=0}^{floor((n-1)/2)} u^(1+2^(n-2i)).
    pub fn infg_family(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("n must be at least 1".into()));
        }
        let f1 = F2Poly::from_exponents((0..=(n - 1) / 2).map(|i| 1 + (1u128 << (n - 2 * i))));
        SheafSpec::from_f1(n, f1, Family::Infg)
    }

    /// f(x) = x^((1+2^n) t(q)).
    pub fn top_monomial(n: u32) -> Result<Self> {
        SheafSpec::from_f1(n, F2Poly::monomial(1 + (1u128 << n.min(MAX_N))), Family::Monomial)
    }

    /// f(x) = x^e for a literal exponent e.
    pub fn monomial(n: u32, e: u128) -> Result<Self> {
        let t = t_of_q(n.min(MAX_N));
        let f1 = e.is_multiple_of(t).then(|| F2Poly::monomial(e / t));
        SheafSpec::new(n, F2Poly::monomial(e), f1, Form::F, Family::Monomial)
    }

    /// Random f over F_2 of degree (q0+1) t(q) with f(0) = 0: the leading
    /// monomial plus up to `extra` further random monomials.
    pub fn random<R: Rng + ?Sized>(n: u32, extra: usize, rng: &mut R) -> Result<Self> {
        let top = ((1u128 << n.min(MAX_N)) + 1) * t_of_q(n.min(MAX_N));
        let k = rng.gen_range(0..=extra);
        let mut exps = vec![top];
        exps.extend((0..k).map(|_| rng.gen_range(1..top)));
        let f = F2Poly::from_exponents(exps);
        let f = if f.degree() == Some(top) { f } else { F2Poly::from_exponents(f.exps.into_iter().chain([top])) };
        SheafSpec::new(n, f, None, Form::F, Family::Custom)
    }

    /// The descent G(q, f, r); needs f = f1(x^t(q)).
    pub fn descent(&self, r: u128) -> Result<Self> {
        SheafSpec::new(self.n, self.f.clone(), self.f1.clone(), Form::G { r }, self.family.clone())
    }

    /// The descent G_q with r = t(q), s = 1.
    pub fn default_descent(&self) -> Result<Self> {
        self.descent(self.t_q())
    }

    /// The F-form spec with the same f.
    pub fn as_f(&self) -> SheafSpec {
        SheafSpec { form: Form::F, ..self.clone() }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn f(&self) -> &F2Poly {
        &self.f
    }

    pub fn f1(&self) -> Option<&F2Poly> {
        self.f1.as_ref()
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn q(&self) -> u128 {
        1u128 << (2 * self.n + 1)
    }

    pub fn q0(&self) -> u128 {
        1u128 << self.n
    }

    pub fn t_q(&self) -> u128 {
        t_of_q(self.n)
    }

    /// Rank D = q0 (q - 1).
    pub fn rank(&self) -> u128 {
        self.q0() * (self.q() - 1)
    }

    /// s with t(q) = r s (1 for the F form).
    pub fn s(&self) -> u128 {
        match self.form {
            Form::F => 1,
            Form::G { r } => self.t_q() / r,
        }
    }

    pub fn n_is_odd(&self) -> bool {
        self.n % 2 == 1
    }

    /// Stable one-line description, used for hashing and reports.
    pub fn summary(&self) -> String {
        let form = match self.form {
            Form::F => "F".to_string(),
            Form::G { r } => format!("G(r={r})"),
        };
        format!("{form} n={} family={:?} f={}", self.n, self.family, self.f)
    }
}

/// psi_2(Tr [a(x), b(x)]) for polynomials a, b over F_2.
pub fn trace_l(a: &F2Poly, b: &F2Poly, ctx: &FieldCtx, x: FqElt) -> Result<GaussInt> {
    let x = ctx.check(x)?;
    Ok(psi2(w_trace(ctx, Witt2::new(a.eval(ctx, x), b.eval(ctx, x)))))
}

/// Sums psi_2 over all x of the Witt vector produced by `term`.
fn raw_sum<F>(ctx: &FieldCtx, term: F) -> GaussInt
where
    F: Fn(FqElt) -> Witt2 + Sync,
{
    let body = |x: u32| {
        let (re, im) = psi2_pair(w_trace(ctx, term(FqElt(x))));
        (re, im)
    };
    let size = ctx.size() as u32;
    let (re, im) = if ctx.degree() >= PAR_MIN_DEGREE {
        (0..size)
            .into_par_iter()
            .map(body)
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    } else {
        (0..size).map(body).fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    };
    GaussInt::from_i64(re, im)
}

/// Raw (uncleared) sum for the F form.
pub fn raw_trace_f(spec: &SheafSpec, ctx: &FieldCtx, t: FqElt) -> Result<GaussInt> {
    let t = ctx.check(t)?;
    let tq = spec.t_q();
    Ok(raw_sum(ctx, |x| Witt2::new(ctx.pow(x, tq), spec.f.eval(ctx, x) + ctx.mul(t, x))))
}

/// Trace of Frob_{t,k} on F(q, f).
pub fn trace_f(spec: &SheafSpec, ctx: &FieldCtx, t: FqElt) -> Result<ClearedValue> {
    if spec.form != Form::F {
        return Err(Error::InvalidSpec("trace_f needs the F form".into()));
    }
    let raw = raw_trace_f(spec, ctx, t)?;
    Ok(ClearedValue::from_raw_sum(&raw, spec.n_is_odd(), ctx.degree()))
}

/// Trace of Frob_{t,k} on the descent G(q, f, r); t must be nonzero.
pub fn trace_g(spec: &SheafSpec, ctx: &FieldCtx, t: FqElt) -> Result<ClearedValue> {
    let Form::G { .. } = spec.form else {
        return Err(Error::InvalidSpec("trace_g needs the G form".into()));
    };
    let t = ctx.check(t)?;
    if t.is_zero() {
        return Err(Error::ZeroDescentPoint);
    }
    let f1 = spec.f1.as_ref().expect("checked at construction");
    let tq = spec.t_q();
    let inv_ts = ctx.pow(ctx.inverse(t)?, spec.s());
    let raw = raw_sum(ctx, |x| {
        let u = ctx.mul(ctx.pow(x, tq), inv_ts);
        Witt2::new(u, f1.eval(ctx, u) + x)
    });
    Ok(ClearedValue::from_raw_sum(&raw, spec.n_is_odd(), ctx.degree()))
}

/// Trace for either form.
pub fn trace(spec: &SheafSpec, ctx: &FieldCtx, t: FqElt) -> Result<ClearedValue> {
    match spec.form {
        Form::F => trace_f(spec, ctx, t),
        Form::G { .. } => trace_g(spec, ctx, t),
    }
}

/// The case table of the traces at t = 0, 1 over F_2, from the parity of
/// A - n where A is the number of monomials of f.
pub fn f2_point_traces_predicted(spec: &SheafSpec) -> (ClearedValue, ClearedValue) {
    let a = spec.f.weight() as i64;
    let sign = if spec.n_is_odd() { -1 } else { 1 };
    let minus_one = ClearedValue::from_i64(-1, 0);
    let minus_sign_i = ClearedValue::from_i64(0, -sign);
    if (a - spec.n as i64).rem_euclid(2) == 1 {
        (minus_one, minus_sign_i)
    } else {
        (minus_sign_i, minus_one)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(d: u32) -> FieldCtx {
        FieldCtx::new(d).unwrap().with_tables()
    }

    #[test]
    fn t_values() {
        assert_eq!(t_of_q(0), 1);
        assert_eq!(t_of_q(1), 5);
        assert_eq!(t_of_q(3), 113);
    }

    #[test]
    fn spec_invariants() {
        for n in 1..=6 {
            for s in [SheafSpec::suzuki_standard(n).unwrap(), SheafSpec::infg_family(n).unwrap()] {
                assert_eq!((s.q0() + 1) * s.t_q(), s.rank() + 1);
                assert!(!s.f().has_constant_term());
            }
        }
        let s = SheafSpec::suzuki_standard(1).unwrap();
        assert_eq!(s.f().exponents(), &[15]);
        assert!(s.descent(3).is_err());
        assert!(s.descent(5).is_ok());
        assert!(SheafSpec::monomial(2, 100).is_err());
        assert_eq!(SheafSpec::monomial(2, 125).unwrap().f1().unwrap().exponents(), &[5]);
        assert!(SheafSpec::new(1, F2Poly::monomial(15), None, Form::G { r: 5 }, Family::Custom).is_err());
    }

    #[test]
    fn rank_one_traces() {
        let ctx = FieldCtx::new(1).unwrap();
        let x = F2Poly::monomial(1);
        let zero = F2Poly::from_exponents([]);
        assert_eq!(trace_l(&x, &zero, &ctx, FqElt::ONE).unwrap(), GaussInt::from_i64(0, 1));
        assert_eq!(trace_l(&zero, &x, &ctx, FqElt::ONE).unwrap(), GaussInt::from_i64(-1, 0));
        let ctx = field(7);
        let a = F2Poly::from_exponents([3, 5]);
        let b = F2Poly::from_exponents([1, 6, 11]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = ctx.random(&mut rng);
            let both = trace_l(&a, &b, &ctx, p).unwrap();
            let split = trace_l(&a, &zero, &ctx, p).unwrap().mul(&trace_l(&zero, &b, &ctx, p).unwrap());
            assert_eq!(both, split);
        }
    }

    #[test]
    fn f2_points() {
        let s = SheafSpec::suzuki_standard(1).unwrap();
        let ctx = FieldCtx::new(1).unwrap();
        assert_eq!(trace_f(&s, &ctx, FqElt::ZERO).unwrap(), ClearedValue::from_i64(0, 1));
        assert_eq!(trace_f(&s, &ctx, FqElt::ONE).unwrap(), ClearedValue::from_i64(-1, 0));
        let (t0, t1) = f2_point_traces_predicted(&s);
        assert_eq!((t0, t1), (ClearedValue::from_i64(0, 1), ClearedValue::from_i64(-1, 0)));
    }

    #[test]
    fn non_integral_trace_example() {
        let s = SheafSpec::top_monomial(2).unwrap();
        assert_eq!(s.f().exponents(), &[125]);
        let v = trace_f(&s, &field(7), FqElt::ONE).unwrap();
        let half = |a: i64| BigRational::new(a.into(), 2.into());
        assert_eq!(v.to_rational_parts(), (half(-7), half(2)));
    }

    #[test]
    fn descent_substitution() {
        let f = SheafSpec::suzuki_standard(1).unwrap();
        let g = f.default_descent().unwrap();
        let ctx = field(6);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let t = ctx.random_nonzero(&mut rng);
            let lhs = trace_f(&f, &ctx, t).unwrap();
            let rhs = trace_g(&g, &ctx, ctx.pow(t, 5)).unwrap();
            assert_eq!(lhs, rhs);
        }
        assert_eq!(trace_g(&g, &ctx, FqElt::ZERO), Err(Error::ZeroDescentPoint));
        let v = trace_g(&g, &FieldCtx::new(1).unwrap(), FqElt::ONE).unwrap();
        assert!(v.abs_square() <= BigRational::from_integer(2.into()));
    }

    #[test]
    fn absolute_value_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in 1..=8 {
            let ctx = field(d);
            let spec = SheafSpec::random(1 + d % 3, 4, &mut rng).unwrap();
            for t in ctx.elements() {
                let v = trace_f(&spec, &ctx, t).unwrap();
                assert!(v.abs_square() <= BigRational::from_integer((1u64 << d).into()));
            }
        }
    }

    #[test]
    fn traces_at_one_on_subfields() {
        for n in 1..=5u32 {
            let spec = SheafSpec::suzuki_standard(n).unwrap();
            let big = 2 * n + 1;
            for d in (1..=big).filter(|d| big % d == 0) {
                let v = trace_f(&spec, &field(d), FqElt::ONE).unwrap();
                assert_eq!(v.abs_square(), BigRational::from_integer(1.into()), "n={n} d={d}");
                if d == big {
                    assert_eq!(v, ClearedValue::from_i64(-1, 0));
                }
            }
        }
    }

    #[test]
    fn modulus_independence_at_rational_points() {
        let spec = SheafSpec::infg_family(2).unwrap();
        let d = 8;
        let irreducibles: Vec<u64> = ((1u64 << d)..(1u64 << (d + 1)))
            .filter(|&m| crate::gf2m::is_irreducible(m))
            .take(3)
            .collect();
        let vals: Vec<_> = irreducibles
            .iter()
            .map(|&m| {
                let ctx = FieldCtx::with_modulus(m).unwrap();
                (trace_f(&spec, &ctx, FqElt::ZERO).unwrap(), trace_f(&spec, &ctx, FqElt::ONE).unwrap())
            })
            .collect();
        assert!(vals.windows(2).all(|w| w[0] == w[1]));
    }
}
