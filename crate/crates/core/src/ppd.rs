//! Primitive prime divisors of Suzuki and Ree torus orders: the partial
//! cyclotomic products P_{2,a}(n), P_{3,a}(n), the products f_n^(alpha mod delta)
//! and their constants at x = 1, and the elementary counting lemmas used
//! alongside them.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::interval::{cos_sin_turn, sqrt_int, DEFAULT_PREC_CAP};
use crate::exactnum::{cyclotomic_poly, cyclotomic_value_int, ComplexInterval, QuadInt, RealInterval};
use crate::ntheory::{euler_phi, factor_big, gcd, has_exact_order, jacobi, omega, prime_factors_u64, strip_primes_of};

fn check_odd(n: u64) -> Result<()> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("n must be odd and positive, got {n}")));
    }
    Ok(())
}

fn bits(v: &BigInt) -> u32 {
    v.bits() as u32
}

/// e^{2 pi i k / big} for k = start + step j, j = 0..count, by baby steps and
/// giant steps so that each value costs one rectangle multiplication.
fn roots_progression(start: u64, step: u64, count: u64, big: u64, prec: u32) -> Vec<ComplexInterval> {
    if count == 0 {
        return Vec::new();
    }
    let s = (count as f64).sqrt().ceil() as u64;
    let baby: Vec<ComplexInterval> =
        (0..s).map(|i| ComplexInterval::root_of_unity((start + step * i) as i64, big, prec)).collect();
    let giants = count.div_ceil(s);
    let mut out = Vec::with_capacity(count as usize);
    for g in 0..giants {
        let giant = ComplexInterval::root_of_unity((step * s * g % big) as i64, big, prec);
        for (i, b) in baby.iter().enumerate() {
            let j = g * s + i as u64;
            if j >= count {
                break;
            }
            out.push(if g == 0 { b.clone() } else { giant.mul(b) });
        }
    }
    out
}

/// Certified enclosure of f_n^(alpha mod delta)(x), the product over
/// a in (Z/delta n)^x with a = +-alpha (mod delta) of (x - zeta^a), where
/// zeta = e^{2 pi i/(delta n)}. Pairing a with -a gives the real factors
/// (x - cos)^2 + sin^2 over a = alpha (mod delta). Precision is that of x.
pub fn f_eval(n: u64, alpha: u64, delta: u64, x: &RealInterval) -> Result<RealInterval> {
    if n == 0 || delta < 3 || gcd(alpha, delta) != 1 {
        return Err(Error::Precondition(format!("f_eval needs n >= 1, delta >= 3, gcd(alpha, delta) = 1; got n={n} alpha={alpha} delta={delta}")));
    }
    let big = delta * n;
    let prec = x.prec();
    let wp = prec + 2 * (64 - big.leading_zeros()) + 16;
    let x = x.with_prec(wp);
    let roots = roots_progression(alpha % delta, delta, n, big, wp);
    let mut acc = RealInterval::from_int(1, wp);
    for (j, z) in roots.iter().enumerate() {
        let a = alpha % delta + delta * j as u64;
        if gcd(a, big) != 1 {
            continue;
        }
        let factor = x.sub(&z.re).square().add(&z.im.square());
        acc = acc.mul(&factor);
    }
    Ok(acc.with_prec(prec))
}

/// Runs `eval` at increasing precision until its interval isolates an integer.
fn isolate_with<F: Fn(u32) -> Result<RealInterval>>(start: u32, eval: F) -> Result<BigInt> {
    let mut prec = start.max(64);
    loop {
        if let Some(v) = eval(prec)?.isolate_integer() {
            return Ok(v);
        }
        if prec >= DEFAULT_PREC_CAP {
            return Err(Error::Isolation(prec));
        }
        prec = (prec * 2).min(DEFAULT_PREC_CAP);
    }
}

/// P_{2,a}(n) from its defining cosine product, by interval isolation.
pub fn p2_interval(n: u64, a: u64) -> Result<BigInt> {
    check_odd(n)?;
    let start = bits(&cyclotomic_value_int(4 * n, &BigInt::from(2))) + 2 * (64 - n.leading_zeros()) + 32;
    isolate_with(start, |prec| f_eval(n, a, 8, &sqrt_int(2, prec)))
}

/// P_{3,a}(n) from its defining cosine product, by interval isolation.
pub fn p3_interval(n: u64, a: u64) -> Result<BigInt> {
    check_odd(n)?;
    let start = bits(&cyclotomic_value_int(6 * n, &BigInt::from(3))) + 2 * (64 - n.leading_zeros()) + 32;
    isolate_with(start, |prec| f_eval(n, a, 12, &sqrt_int(3, prec)))
}

/// P_{2,a}(n) = prod over 1 <= k < 8n, gcd(k, n) = 1, k = a (mod 8) of
/// (3 - 2 sqrt 2 cos(k pi / 4n)), computed as Res(Phi_n, X^2 - 2 eps X + 2)
/// for a = 1 and Res(Phi_n, X^2 + 2 eps X + 2) for a = 3, eps = (2 | n).
pub fn p2(n: u64, a: u64) -> Result<BigInt> {
    check_odd(n)?;
    let eps = jacobi(2, n)? as i64;
    let s = match a {
        1 => 2 * eps,
        3 => -2 * eps,
        _ => return Err(Error::Precondition(format!("p2 needs a in {{1, 3}}, got {a}"))),
    };
    Ok(cyclotomic_poly(n).resultant_monic_quadratic(&BigInt::from(s), &BigInt::from(2)))
}

/// p2 together with the interval cross-check of the cosine product.
pub fn p2_certified(n: u64, a: u64) -> Result<BigInt> {
    let r = p2(n, a)?;
    let iv = p2_interval(n, a)?;
    if iv != r {
        return Err(Error::Certificate(format!("P_2,{a}({n}): resultant {r} but cosine product isolates {iv}")));
    }
    Ok(r)
}

fn p3_resultant(n: u64, a: u64) -> BigInt {
    let eps: i64 = if n % 12 == 1 || n % 12 == 11 { 1 } else { -1 };
    let s = if a == 1 { 3 * eps } else { -3 * eps };
    cyclotomic_poly(n).resultant_monic_quadratic(&BigInt::from(s), &BigInt::from(3))
}

/// P_{3,a}(n) = prod over 1 <= k < 12n, gcd(k, n) = 1, k = a (mod 12) of
/// (4 - 2 sqrt 3 cos(k pi / 6n)). A resultant when 3 does not divide n;
/// otherwise the certified cosine product. Debug builds cross-check the
/// resultant against the product.
pub fn p3(n: u64, a: u64) -> Result<BigInt> {
    check_odd(n)?;
    if a != 1 && a != 5 {
        return Err(Error::Precondition(format!("p3 needs a in {{1, 5}}, got {a}")));
    }
    if !n.is_multiple_of(3) {
        let r = p3_resultant(n, a);
        if cfg!(debug_assertions) {
            let iv = p3_interval(n, a)?;
            if iv != r {
                return Err(Error::Certificate(format!("P_3,{a}({n}): resultant {r} but cosine product isolates {iv}")));
            }
        }
        return Ok(r);
    }
    p3_interval(n, a)
}

/// p3(n, 1) and p3(n, 5), certified by p3(n, 1) p3(n, 5) = Phi_{6n}(3).
pub fn p3_pair(n: u64) -> Result<(BigInt, BigInt)> {
    let (x, y) = (p3(n, 1)?, p3(n, 5)?);
    let phi = cyclotomic_value_int(6 * n, &BigInt::from(3));
    if &x * &y != phi {
        return Err(Error::Certificate(format!("P_3,1({n}) P_3,5({n}) = {} != Phi_{}(3) = {phi}", &x * &y, 6 * n)));
    }
    Ok((x, y))
}

/// coeff * base^exp in a real quadratic ring, base a unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadConst {
    pub coeff: QuadInt,
    pub base: QuadInt,
    pub exp: i64,
}

impl QuadConst {
    pub fn one(d: u64) -> Self {
        QuadConst { coeff: QuadInt::one(d), base: QuadInt::one(d), exp: 0 }
    }

    pub fn unit_power(base: QuadInt, exp: i64) -> Self {
        QuadConst { coeff: QuadInt::one(base.d), base, exp }
    }

    pub fn value(&self) -> QuadInt {
        self.coeff.mul(&self.base.pow_signed(self.exp).expect("base is a unit"))
    }

    pub fn is_one(&self) -> bool {
        self.value().is_one()
    }

    pub fn to_interval(&self, prec: u32) -> RealInterval {
        self.value().to_interval(prec)
    }
}

impl fmt::Display for QuadConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.coeff.is_one(), self.exp == 0) {
            (_, true) => write!(f, "{}", self.coeff),
            (true, false) => write!(f, "({})^{}", self.base, self.exp),
            (false, false) => write!(f, "({})*({})^{}", self.coeff, self.base, self.exp),
        }
    }
}

/// The subset product for f_n^(alpha mod delta)(1): over S subsets of the
/// primes of m = n / gcd(n, delta^infinity), |1 - zeta_delta^(alpha prod_S p^-1)|
/// raised to 2 (-1)^|S|.
pub fn f_at_one_subsets(n: u64, alpha: u64, delta: u64, prec: u32) -> Result<RealInterval> {
    if n == 0 || delta < 3 || gcd(alpha, delta) != 1 {
        return Err(Error::Precondition(format!("bad (n, alpha, delta) = ({n}, {alpha}, {delta})")));
    }
    let m = strip_primes_of(n, delta);
    let primes = prime_factors_u64(m);
    if primes.len() > 20 {
        return Err(Error::Precondition("too many prime factors".into()));
    }
    let wp = prec + 8 + primes.len() as u32;
    let inv = |p: u64| -> u64 {
        let e = BigInt::from(p).extended_gcd(&BigInt::from(delta));
        e.x.mod_floor(&BigInt::from(delta)).to_u64().expect("residue")
    };
    let mut num = RealInterval::from_int(1, wp);
    let mut den = RealInterval::from_int(1, wp);
    for mask in 0u32..(1 << primes.len()) {
        let mut j = alpha % delta;
        for (i, &p) in primes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                j = j * inv(p) % delta;
            }
        }
        let (c, _) = cos_sin_turn(j as i64, delta, wp);
        let v = RealInterval::from_int(2, wp).sub(&c.mul_int(2));
        if mask.count_ones() % 2 == 0 {
            num = num.mul(&v);
        } else {
            den = den.mul(&v);
        }
    }
    Ok(num.div(&den).expect("nonzero factors").with_prec(prec))
}

/// The constant f_n^(alpha mod delta)(1) in closed form for
/// (delta, alpha) in {(8,1), (8,3), (12,1), (12,5)}: 1 if some p | m is
/// +-1 mod delta, else (1+sqrt2)^(-+2^omega) resp. (2+sqrt3)^(-+2^omega(m)).
/// For delta = 8 and n = 1 the value is 2 -+ sqrt 2, which is not a unit.
pub fn f_at_one_closed(n: u64, alpha: u64, delta: u64) -> Result<QuadConst> {
    let (base, sign, d) = match (delta, alpha) {
        (8, 1) => (QuadInt::from_i64(1, 1, 2), -1, 2),
        (8, 3) => (QuadInt::from_i64(1, 1, 2), 1, 2),
        (12, 1) => (QuadInt::from_i64(2, 1, 3), -1, 3),
        (12, 5) => (QuadInt::from_i64(2, 1, 3), 1, 3),
        _ => return Err(Error::Precondition(format!("no closed form for alpha = {alpha} mod {delta}"))),
    };
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let m = strip_primes_of(n, delta);
    let primes = prime_factors_u64(m);
    if primes.iter().any(|p| p % delta == 1 || p % delta == delta - 1) {
        return Ok(QuadConst::one(d));
    }
    if primes.is_empty() && delta == 8 {
        // only S = {} contributes: |1 - zeta_8^alpha|^2 = 2 -+ sqrt 2
        return Ok(QuadConst { coeff: QuadInt::from_i64(2, sign, 2), base, exp: 0 });
    }
    Ok(QuadConst::unit_power(base, sign * (1i64 << primes.len())))
}

/// Checks f(x) >= f(1) ((x+1)/2)^(2 phi(delta n)/phi(delta)) with certified
/// intervals, f(1) taken from the closed form.
pub fn increasing_lemma_holds(n: u64, alpha: u64, delta: u64, x: &RealInterval) -> Result<bool> {
    let prec = x.prec();
    let lhs = f_eval(n, alpha, delta, x)?;
    let c = f_at_one_closed(n, alpha, delta)?.to_interval(prec);
    let e = 2 * euler_phi(delta * n) / euler_phi(delta);
    let half = x.add(&RealInterval::from_int(1, prec)).mul_pow2(-1);
    let rhs = c.mul(&half.powi(e));
    Ok(lhs.certainly_ge(&rhs) || (lhs.overlaps(&rhs) && x.contains_int(&BigInt::one())))
}

/// A prime with its multiplicative order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PpdWitness {
    pub ell: String,
    pub order: u64,
}

/// A prime factor of v of exact order `order` modulo itself, for base b.
pub fn find_ppd(v: &BigInt, b: u64, order: u64) -> Option<PpdWitness> {
    let (sign, mag) = v.to_bytes_le();
    if sign == Sign::Minus || mag.is_empty() {
        return None;
    }
    let mut fs = factor_big(&BigUint::from_bytes_le(&mag));
    fs.sort();
    fs.dedup();
    fs.into_iter()
        .find(|ell| has_exact_order(b, ell, order))
        .map(|ell| PpdWitness { ell: ell.to_string(), order })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ToriFamily {
    Suzuki,
    Ree,
}

impl ToriFamily {
    pub fn base(self) -> u64 {
        match self {
            ToriFamily::Suzuki => 2,
            ToriFamily::Ree => 3,
        }
    }

    /// Order of the base modulo a primitive prime divisor: 4n resp. 6n.
    pub fn ppd_order(self, n: u64) -> u64 {
        match self {
            ToriFamily::Suzuki => 4 * n,
            ToriFamily::Ree => 6 * n,
        }
    }

    /// Smallest n for which the t^- claim is made.
    pub fn minus_threshold(self) -> u64 {
        match self {
            ToriFamily::Suzuki => 7,
            ToriFamily::Ree => 3,
        }
    }
}

impl std::str::FromStr for ToriFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "suzuki" => Ok(ToriFamily::Suzuki),
            "ree" => Ok(ToriFamily::Ree),
            _ => Err(Error::Precondition(format!("unknown family {s:?}"))),
        }
    }
}

/// t^-(b^n), t^+(b^n) = b^n -+ b^((n+1)/2) + 1 for odd n.
pub fn torus_orders(b: u64, n: u64) -> (BigInt, BigInt) {
    let q = num_traits::pow(BigInt::from(b), n as usize);
    let r = num_traits::pow(BigInt::from(b), n.div_ceil(2) as usize);
    (&q - &r + 1, &q + &r + 1)
}

/// The degree-4 factors of t^-+(q^3) for q = 2^n.
#[derive(Clone, Debug, Serialize)]
pub struct Suzuki2Report {
    /// q^2 + q sqrt(2q) + q + sqrt(2q) + 1
    pub phi24_prime: String,
    /// q^2 - q sqrt(2q) + q - sqrt(2q) + 1
    pub phi24_dprime: String,
    /// t^-(q^3) = t^+(q) Phi''
    pub minus_identity: bool,
    /// t^+(q^3) = t^-(q) Phi'
    pub plus_identity: bool,
    pub ppd_prime: Option<PpdWitness>,
    /// None for n = 1, where Phi'' = 1.
    pub ppd_dprime: Option<PpdWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ToriReport {
    pub family: ToriFamily,
    pub n: u64,
    pub t_minus: String,
    pub t_plus: String,
    pub p_minus: String,
    pub p_plus: String,
    /// P_minus P_plus equals Phi_{4n}(2) resp. Phi_{6n}(3).
    pub product_identity: bool,
    pub divides_minus: bool,
    pub divides_plus: bool,
    pub minus_exceeds_2n: bool,
    pub plus_exceeds_2n: bool,
    /// Cosine product agrees with the resultant (only when requested).
    pub interval_checked: bool,
    pub ppd_minus: Option<PpdWitness>,
    pub ppd_plus: Option<PpdWitness>,
    pub suzuki2: Option<Suzuki2Report>,
    pub failures: Vec<String>,
}

impl ToriReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ToriOptions {
    /// Factor P and certify a prime of full order.
    pub certify_ppd: bool,
    /// Recompute resultant values from the cosine product.
    pub interval_check: bool,
    /// Include the Phi'_24 / Phi''_24 identities (Suzuki only).
    pub suzuki2: bool,
}

impl Default for ToriOptions {
    fn default() -> Self {
        ToriOptions { certify_ppd: true, interval_check: true, suzuki2: true }
    }
}

fn suzuki2_report(n: u64, certify: bool) -> Suzuki2Report {
    let q = BigInt::one() << n;
    let r = BigInt::one() << n.div_ceil(2);
    let qq = &q * &q;
    let qr = &q * &r;
    let dprime: BigInt = &qq - &qr + &q - &r + 1;
    let prime: BigInt = &qq + &qr + &q + &r + 1;
    let (tm, tp) = torus_orders(2, n);
    let (tm3, tp3) = torus_orders(2, 3 * n);
    let ppd_dprime = if certify && !dprime.is_one() { find_ppd(&dprime, 2, 12 * n) } else { None };
    Suzuki2Report {
        minus_identity: tm3 == &tp * &dprime,
        plus_identity: tp3 == &tm * &prime,
        ppd_prime: if certify { find_ppd(&prime, 2, 12 * n) } else { None },
        ppd_dprime,
        phi24_prime: prime.to_string(),
        phi24_dprime: dprime.to_string(),
    }
}

/// Every check of the torus-order theorems for one odd n.
pub fn tori_report(family: ToriFamily, n: u64, opts: ToriOptions) -> Result<ToriReport> {
    check_odd(n)?;
    let b = family.base();
    let (pm, pp) = match family {
        ToriFamily::Suzuki => {
            let pm = p2(n, 1)?;
            let pp = p2(n, 3)?;
            (pm, pp)
        }
        ToriFamily::Ree => p3_pair(n)?,
    };
    let mut failures = Vec::new();
    let mut interval_checked = false;
    if opts.interval_check {
        let (im, ip) = match family {
            ToriFamily::Suzuki => (p2_interval(n, 1)?, p2_interval(n, 3)?),
            ToriFamily::Ree => (p3_interval(n, 1)?, p3_interval(n, 5)?),
        };
        interval_checked = im == pm && ip == pp;
        if !interval_checked {
            failures.push(format!("cosine product ({im}, {ip}) != ({pm}, {pp})"));
        }
    }
    let cyc_index = match family {
        ToriFamily::Suzuki => 4 * n,
        ToriFamily::Ree => 6 * n,
    };
    let product_identity = &pm * &pp == cyclotomic_value_int(cyc_index, &BigInt::from(b));
    if !product_identity {
        failures.push(format!("P- P+ != Phi_{cyc_index}({b})"));
    }
    let (tm, tp) = torus_orders(b, n);
    let divides_minus = !pm.is_zero() && (&tm % &pm).is_zero();
    let divides_plus = !pp.is_zero() && (&tp % &pp).is_zero();
    if !divides_minus {
        failures.push(format!("P- = {pm} does not divide t- = {tm}"));
    }
    if !divides_plus {
        failures.push(format!("P+ = {pp} does not divide t+ = {tp}"));
    }
    let two_n = BigInt::from(2 * n);
    let minus_exceeds_2n = pm > two_n;
    let plus_exceeds_2n = pp > two_n;
    let minus_claimed = n >= family.minus_threshold();
    if minus_claimed && !minus_exceeds_2n {
        failures.push(format!("P- = {pm} <= 2n"));
    }
    if minus_claimed && !plus_exceeds_2n {
        failures.push(format!("P+ = {pp} <= 2n"));
    }
    let order = family.ppd_order(n);
    let (mut ppd_minus, mut ppd_plus) = (None, None);
    if opts.certify_ppd {
        ppd_minus = find_ppd(&pm, b, order);
        ppd_plus = find_ppd(&pp, b, order);
        if minus_claimed && ppd_minus.is_none() {
            failures.push(format!("no prime of order {order} divides P- = {pm}"));
        }
        if ppd_plus.is_none() {
            failures.push(format!("no prime of order {order} divides P+ = {pp}"));
        }
    }
    let suzuki2 = (family == ToriFamily::Suzuki && opts.suzuki2).then(|| suzuki2_report(n, opts.certify_ppd));
    if let Some(s) = &suzuki2 {
        if !s.minus_identity || !s.plus_identity {
            failures.push("t(q^3) factorization identity fails".into());
        }
        if opts.certify_ppd {
            if s.ppd_prime.is_none() {
                failures.push("no ppd(2, 12n) divides Phi'_24".into());
            }
            if n >= 3 && s.ppd_dprime.is_none() {
                failures.push("no ppd(2, 12n) divides Phi''_24".into());
            }
        }
    }
    Ok(ToriReport {
        family,
        n,
        t_minus: tm.to_string(),
        t_plus: tp.to_string(),
        p_minus: pm.to_string(),
        p_plus: pp.to_string(),
        product_identity,
        divides_minus,
        divides_plus,
        minus_exceeds_2n,
        plus_exceeds_2n,
        interval_checked,
        ppd_minus,
        ppd_plus,
        suzuki2,
        failures,
    })
}

/// tori_report with every check enabled.
pub fn verify_tori(family: ToriFamily, n: u64) -> Result<ToriReport> {
    tori_report(family, n, ToriOptions::default())
}

/// Reports for odd n in [n_min, n_max], in parallel. The ppd certificate and
/// the cosine cross-check run only up to the given limits.
pub fn sweep(family: ToriFamily, n_min: u64, n_max: u64, ppd_max: u64, interval_max: u64) -> Result<Vec<ToriReport>> {
    let ns: Vec<u64> = (n_min..=n_max).filter(|n| n % 2 == 1).collect();
    ns.into_par_iter()
        .map(|n| {
            tori_report(
                family,
                n,
                ToriOptions { certify_ppd: n <= ppd_max, interval_check: n <= interval_max, suzuki2: n <= ppd_max },
            )
        })
        .collect()
}

/// #{1 <= k <= n : gcd(k, n) = 1, k = a (mod m)}.
pub fn coprime_residue_count(n: u64, m: u64, a: u64) -> u64 {
    assert!(m > 0);
    (1..=n).filter(|&k| k % m == a % m && gcd(k, n) == 1).count() as u64
}

/// |N_a - phi(n)/m| < 2^omega(n) for every residue a, assuming gcd(m, n) = 1.
pub fn equi1_check(n: u64, m: u64) -> Result<bool> {
    if n == 0 || m == 0 || gcd(m, n) != 1 {
        return Err(Error::Precondition(format!("equidistribution needs gcd(m, n) = 1, got m={m} n={n}")));
    }
    let counts = residue_counts(n, m);
    let phi = euler_phi(n) as i128;
    let bound = (m as i128) << omega(n);
    Ok(counts.iter().all(|&c| ((m as i128) * c as i128 - phi).abs() < bound))
}

/// |N_a - phi(n)/8| < 2^(omega(n) - 1) for every a mod 12 prime to 3, when n
/// is odd and divisible by 3.
pub fn equi2_check(n: u64) -> Result<bool> {
    if n.is_multiple_of(2) || !n.is_multiple_of(3) {
        return Err(Error::Precondition(format!("second equidistribution statement needs n odd and 3 | n, got {n}")));
    }
    let counts = residue_counts(n, 12);
    let phi = euler_phi(n) as i128;
    // 8 |N - phi/8| < 8 2^(w-1) = 4 2^w
    let bound = 4i128 << omega(n);
    Ok((0..12u64).filter(|a| a % 3 != 0).all(|a| (8 * counts[a as usize] as i128 - phi).abs() < bound))
}

fn residue_counts(n: u64, m: u64) -> Vec<u64> {
    let mut counts = vec![0u64; m as usize];
    for k in 1..=n {
        if gcd(k, n) == 1 {
            counts[(k % m) as usize] += 1;
        }
    }
    counts
}

/// Outcome of the three equations D = x^2 - 1, D = x(x-1)/2, D = x(x-1)/2 - 1
/// with D = 2^n (2^(2n+1) - 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EqnsReport {
    pub n: u64,
    pub d: String,
    pub sol_i: Option<String>,
    pub sol_ii: Option<String>,
    pub sol_iii: Option<String>,
    /// Largest x covered by the exhaustive scan (0 if skipped).
    pub scanned_to: u64,
}

impl EqnsReport {
    /// No solution where the lemma forbids one.
    pub fn consistent(&self) -> bool {
        self.sol_i.is_none() && self.sol_ii.is_none() && (self.n == 1 || self.sol_iii.is_none())
    }
}

fn exact_sqrt(v: &BigInt) -> Option<BigInt> {
    if v.is_negative() {
        return None;
    }
    let r = v.sqrt();
    (&r * &r == *v).then_some(r)
}

/// Solves the three equations exactly through perfect-square tests, and for
/// small D also by scanning every x up to ceil(sqrt(2D)) + 2.
pub fn diophantine_check(n: u64) -> Result<EqnsReport> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let d = (BigInt::one() << n) * ((BigInt::one() << (2 * n + 1)) - 1);
    // x^2 = D + 1
    let sol_i = exact_sqrt(&(&d + 1)).filter(|x| x.is_positive());
    // x(x-1)/2 = c  <=>  (2x - 1)^2 = 8c + 1
    let tri = |c: &BigInt| -> Option<BigInt> {
        let r = exact_sqrt(&(c * 8 + 1))?;
        let x: BigInt = (r + 1) / 2;
        (x.is_positive() && &x * (&x - 1) / 2 == *c).then_some(x)
    };
    let sol_ii = tri(&d);
    let sol_iii = tri(&(&d + 1));
    let mut scanned_to = 0;
    if d.bits() <= 40 {
        let dv = d.to_u64().expect("small D") as u128;
        let limit = ((2 * dv) as f64).sqrt().ceil() as u64 + 2;
        let mut found = [None, None, None];
        for x in 1..=limit as u128 {
            if x * x - 1 == dv {
                found[0] = Some(x);
            }
            if x * (x - 1) / 2 == dv {
                found[1] = Some(x);
            }
            if x * (x - 1) / 2 == dv + 1 {
                found[2] = Some(x);
            }
        }
        let as_big = |v: Option<u128>| v.map(BigInt::from);
        if as_big(found[0]) != sol_i || as_big(found[1]) != sol_ii || as_big(found[2]) != sol_iii {
            return Err(Error::Certificate(format!("scan and square test disagree at n = {n}")));
        }
        scanned_to = limit;
    }
    Ok(EqnsReport {
        n,
        d: d.to_string(),
        sol_i: sol_i.map(|x| x.to_string()),
        sol_ii: sol_ii.map(|x| x.to_string()),
        sol_iii: sol_iii.map(|x| x.to_string()),
        scanned_to,
    })
}

/// Odd n excluded from phi(n) >= max(2^(2.2 omega(n)), n^(6/7)). The bound
/// holds trivially at 1; 5 fails it (phi = 4 < 2^2.2) and is listed too.
pub const PHI_BOUND_EXCEPTIONS: [u64; 12] = [1, 3, 5, 9, 15, 21, 33, 45, 75, 105, 165, 195];

/// Both bounds via integer powers: phi^7 >= n^6 and phi^10 >= 2^(22 omega).
pub fn phi_bounds_hold(n: u64) -> (bool, bool) {
    let phi = BigInt::from(euler_phi(n));
    let root_bound = num_traits::pow(phi.clone(), 7) >= num_traits::pow(BigInt::from(n), 6);
    let omega_bound = num_traits::pow(phi, 10) >= BigInt::one() << (22 * omega(n) as usize);
    (root_bound, omega_bound)
}

/// phi_bounds_hold for odd n outside the exception list.
pub fn phi_bounds_check(n: u64) -> Result<bool> {
    check_odd(n)?;
    if PHI_BOUND_EXCEPTIONS.contains(&n) {
        return Err(Error::Precondition(format!("{n} is one of the listed exceptions")));
    }
    let (a, b) = phi_bounds_hold(n);
    Ok(a && b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::interval::cos_sin_turn;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn small_p2_values() {
        assert_eq!(p2_certified(3, 1).unwrap(), b(1));
        assert_eq!(p2_certified(3, 3).unwrap(), b(13));
        assert_eq!(p2_certified(7, 1).unwrap(), b(113));
        assert_eq!(p2_certified(1, 1).unwrap(), b(1));
        assert_eq!(p2_certified(1, 3).unwrap(), b(5));
        for n in [3u64, 5, 7, 9, 11] {
            let prod = p2(n, 1).unwrap() * p2(n, 3).unwrap();
            assert_eq!(prod, cyclotomic_value_int(4 * n, &b(2)));
        }
        assert!(p2(4, 1).is_err());
        assert!(p2(5, 2).is_err());
    }

    #[test]
    fn resultant_inside_cosine_product() {
        for n in (1..60u64).step_by(2) {
            for a in [1, 3] {
                let r = p2(n, a).unwrap();
                let prec = r.bits() as u32 + 64;
                let iv = f_eval(n, a, 8, &sqrt_int(2, prec)).unwrap();
                assert!(iv.contains_int(&r), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn small_p3_values() {
        assert_eq!(p3(3, 1).unwrap(), b(19));
        assert_eq!(p3(3, 5).unwrap(), b(37));
        assert_eq!(p3(1, 1).unwrap(), b(1));
        assert_eq!(p3(1, 5).unwrap(), b(7));
        for n in [1u64, 3, 5, 7, 9, 11, 13, 15] {
            p3_pair(n).unwrap();
        }
        for n in (1..80u64).step_by(2).filter(|n| n % 3 != 0) {
            for a in [1, 5] {
                assert_eq!(p3_resultant(n, a), p3_interval(n, a).unwrap(), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn tori_examples() {
        let r = verify_tori(ToriFamily::Suzuki, 7).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.t_minus, "113");
        assert_eq!(r.ppd_minus, Some(PpdWitness { ell: "113".into(), order: 28 }));
        let r = verify_tori(ToriFamily::Ree, 3).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.ppd_minus, Some(PpdWitness { ell: "19".into(), order: 18 }));
        let r = verify_tori(ToriFamily::Suzuki, 1).unwrap();
        let s = r.suzuki2.as_ref().unwrap();
        assert_eq!((s.phi24_dprime.as_str(), s.phi24_prime.as_str()), ("1", "13"));
        assert!(r.passed(), "{:?}", r.failures);
        // t^-(32) = 25 has no ppd(2, 20); the claim starts at n = 7
        let r = verify_tori(ToriFamily::Suzuki, 5).unwrap();
        assert_eq!(r.t_minus, "25");
        assert!(r.ppd_minus.is_none());
        assert!(r.passed());
    }

    #[test]
    fn small_sweeps() {
        for r in sweep(ToriFamily::Suzuki, 1, 61, 61, 61).unwrap() {
            assert!(r.passed(), "n={} {:?}", r.n, r.failures);
        }
        for r in sweep(ToriFamily::Ree, 1, 31, 31, 31).unwrap() {
            assert!(r.passed(), "n={} {:?}", r.n, r.failures);
        }
    }

    #[test]
    fn closed_constants() {
        let c = f_at_one_closed(15, 1, 8).unwrap();
        assert_eq!(c, QuadConst::unit_power(QuadInt::from_i64(1, 1, 2), -4));
        assert_eq!(f_at_one_closed(1, 3, 8).unwrap().value(), QuadInt::from_i64(2, 1, 2));
        assert!(f_at_one_closed(7, 1, 8).unwrap().is_one());
        assert!(f_at_one_closed(7, 2, 8).is_err());
        for n in [1u64, 3, 5, 7, 9, 15, 21, 25, 33, 35, 45, 105] {
            for (delta, alpha) in [(8, 1), (8, 3), (12, 1), (12, 5)] {
                let closed = f_at_one_closed(n, alpha, delta).unwrap().to_interval(96);
                let direct = f_eval(n, alpha, delta, &RealInterval::from_int(1, 96)).unwrap();
                let subsets = f_at_one_subsets(n, alpha, delta, 96).unwrap();
                assert!(closed.overlaps(&direct), "n={n} {alpha} mod {delta}");
                assert!(subsets.overlaps(&direct));
            }
        }
    }

    #[test]
    fn subset_formula_other_moduli() {
        for delta in [5u64, 7, 9, 10] {
            for alpha in (1..delta).filter(|a| gcd(*a, delta) == 1) {
                for n in [1u64, 2, 3, 6, 11, 15, 21, 22, 35] {
                    let direct = f_eval(n, alpha, delta, &RealInterval::from_int(1, 96)).unwrap();
                    let subsets = f_at_one_subsets(n, alpha, delta, 96).unwrap();
                    assert!(subsets.overlaps(&direct), "n={n} {alpha} mod {delta}");
                }
            }
        }
    }

    #[test]
    fn increasing_lemma_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs = [RealInterval::from_ratio(11, 10, 128), sqrt_int(2, 128), sqrt_int(3, 128), RealInterval::from_int(2, 128)];
        for _ in 0..30 {
            let n = rng.gen_range(1..120u64);
            let (delta, alpha) = [(8, 1), (8, 3), (12, 1), (12, 5)][rng.gen_range(0..4)];
            let x = &xs[rng.gen_range(0..4)];
            assert!(increasing_lemma_holds(n, alpha, delta, x).unwrap(), "n={n}");
        }
    }

    #[test]
    fn roots_progression_matches_direct() {
        let v = roots_progression(3, 8, 40, 8 * 40, 80);
        for (j, z) in v.iter().enumerate() {
            let (c, s) = cos_sin_turn(3 + 8 * j as i64, 320, 80);
            assert!(z.re.overlaps(&c) && z.im.overlaps(&s));
            assert!(z.re.width_log2().unwrap() < -60.0);
        }
    }

    #[test]
    fn equidistribution() {
        assert_eq!(coprime_residue_count(15, 8, 1), 1);
        assert_eq!(coprime_residue_count(1, 5, 1), 1);
        assert_eq!(coprime_residue_count(1, 5, 2), 0);
        assert!(equi1_check(15, 8).unwrap());
        assert!(equi1_check(6, 4).is_err());
        assert!(equi2_check(45).unwrap());
        assert!(equi2_check(15).unwrap());
        assert!(equi2_check(35).is_err());
    }

    #[test]
    fn eqns() {
        let r = diophantine_check(1).unwrap();
        assert_eq!(r.d, "14");
        assert_eq!(r.sol_iii.as_deref(), Some("6"));
        assert!(r.consistent());
        let r = diophantine_check(2).unwrap();
        assert_eq!(r.d, "124");
        assert_eq!(r.scanned_to, 18);
        assert!(r.consistent());
        for n in 2..=50 {
            assert!(diophantine_check(n).unwrap().consistent(), "n={n}");
        }
    }

    #[test]
    fn phi_bounds() {
        assert!(phi_bounds_check(49).unwrap());
        let failing: Vec<u64> = (1..20000u64)
            .step_by(2)
            .filter(|&n| {
                let (x, y) = phi_bounds_hold(n);
                !(x && y)
            })
            .collect();
        assert_eq!(failing, PHI_BOUND_EXCEPTIONS[1..].to_vec());
        assert!(phi_bounds_check(7).unwrap());
        assert!(phi_bounds_check(5).is_err());
    }
}
