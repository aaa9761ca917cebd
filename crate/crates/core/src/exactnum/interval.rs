//! Certified real intervals with dyadic endpoints. Every operation rounds the
//! lower endpoint down and the upper endpoint up to `prec` significant bits,
//! so the exact result of the operation on any points of the inputs lies
//! inside the output.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Default ceiling for precision doubling.
pub const DEFAULT_PREC_CAP: u32 = 1 << 20;

/// mant * 2^exp.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

fn floor_shr(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    if m.sign() != Sign::Minus {
        m >> s
    } else {
        let mask: BigInt = (BigInt::one() << s) - 1;
        let pos: BigInt = -m + mask;
        let q: BigInt = pos >> s;
        -q
    }
}

fn ceil_shr(m: &BigInt, s: u64) -> BigInt {
    -floor_shr(&-m, s)
}

/// floor or ceil of num / den for den > 0.
fn div_round(num: &BigInt, den: &BigInt, up: bool) -> BigInt {
    let (q, r) = num.div_mod_floor(den);
    if up && !r.is_zero() {
        q + 1
    } else {
        q
    }
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic { mant, exp }
        }
    }

    pub fn from_int(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    /// Rounds to at most `prec` significant bits, downward or upward.
    pub fn round(&self, prec: u32, up: bool) -> Dyadic {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        let mant = if up { ceil_shr(&self.mant, s) } else { floor_shr(&self.mant, s) };
        Dyadic::new(mant, self.exp + s as i64)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        Dyadic::new(self.mant.clone(), self.exp + k)
    }

    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as u64
        } else {
            floor_shr(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn ceil_int(&self) -> BigInt {
        -self.neg().floor_int()
    }

    /// An upper bound for log2 |self|; None for zero.
    pub fn log2_upper(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.mant.bits() as i64 + self.exp)
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let m = floor_shr(&self.mant, shift as u64).to_f64().unwrap_or(0.0);
        m * 2f64.powi((self.exp + shift).clamp(-1100, 1100) as i32)
    }

    /// Exact comparison with a rational.
    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        // compare mant * 2^exp * den with num
        let (num, den) = (r.numer().clone(), r.denom().clone());
        if self.exp >= 0 {
            (&self.mant * (den << self.exp as u64)).cmp(&num)
        } else {
            (&self.mant * den).cmp(&(num << (-self.exp) as u64))
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.sub(other);
        d.mant.sign().cmp(&Sign::NoSign)
    }
}

/// A closed interval [lo, hi] with dyadic endpoints and a working precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl RealInterval {
    fn from_parts(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        RealInterval { lo: lo.round(prec, false), hi: hi.round(prec, true), prec }
    }

    pub fn point(d: Dyadic, prec: u32) -> Self {
        RealInterval::from_parts(d.clone(), d, prec)
    }

    pub fn from_int(v: i64, prec: u32) -> Self {
        RealInterval::point(Dyadic::from_int(BigInt::from(v)), prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Self {
        RealInterval::point(Dyadic::from_int(v.clone()), prec)
    }

    /// Tight enclosure of a rational number.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        let num = r.numer();
        let den = r.denom();
        let k = prec as i64 + den.bits() as i64 - num.bits() as i64 + 2;
        let (n, d) = if k >= 0 {
            (num << k as u64, den.clone())
        } else {
            (num.clone(), den << (-k) as u64)
        };
        let lo = Dyadic::new(div_round(&n, &d, false), -k);
        let hi = Dyadic::new(div_round(&n, &d, true), -k);
        RealInterval::from_parts(lo, hi, prec)
    }

    pub fn from_ratio(num: i64, den: i64, prec: u32) -> Self {
        RealInterval::from_rational(&BigRational::new(num.into(), den.into()), prec)
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        RealInterval::from_parts(self.lo.clone(), self.hi.clone(), prec)
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    /// log2 of the width (very negative for narrow intervals); None for points.
    pub fn width_log2(&self) -> Option<f64> {
        let w = self.hi.sub(&self.lo);
        if w.is_zero() {
            return None;
        }
        Some(w.mant.bits() as f64 + w.exp as f64)
    }

    pub fn neg(&self) -> Self {
        RealInterval { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }

    pub fn add(&self, other: &Self) -> Self {
        let p = self.prec.max(other.prec);
        RealInterval::from_parts(self.lo.add(&other.lo), self.hi.add(&other.hi), p)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = self.prec.max(other.prec);
        let (a, b) = (self, other);
        let a_pos = !a.lo.is_negative();
        let a_neg = !a.hi.is_positive();
        let b_pos = !b.lo.is_negative();
        let b_neg = !b.hi.is_positive();
        let (lo, hi) = if a_pos && b_pos {
            (a.lo.mul(&b.lo), a.hi.mul(&b.hi))
        } else if a_neg && b_neg {
            (a.hi.mul(&b.hi), a.lo.mul(&b.lo))
        } else if a_pos && b_neg {
            (a.hi.mul(&b.lo), a.lo.mul(&b.hi))
        } else if a_neg && b_pos {
            (a.lo.mul(&b.hi), a.hi.mul(&b.lo))
        } else {
            let c = [a.lo.mul(&b.lo), a.lo.mul(&b.hi), a.hi.mul(&b.lo), a.hi.mul(&b.hi)];
            let lo = c.iter().min().cloned().expect("four products");
            let hi = c.iter().max().cloned().expect("four products");
            (lo, hi)
        };
        RealInterval::from_parts(lo, hi, p)
    }

    pub fn square(&self) -> Self {
        if !self.lo.is_negative() || !self.hi.is_positive() {
            return self.mul(self);
        }
        // interval straddles zero
        let a = self.lo.mul(&self.lo);
        let b = self.hi.mul(&self.hi);
        RealInterval::from_parts(Dyadic::zero(), a.max(b), self.prec)
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul(&RealInterval::from_int(k, self.prec))
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        RealInterval { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k), prec: self.prec }
    }

    /// Division by a nonzero integer.
    pub fn div_int(&self, c: &BigInt) -> Self {
        assert!(!c.is_zero(), "division by zero");
        if c.is_negative() {
            return self.neg().div_int(&-c);
        }
        let k = self.prec as u64 + c.bits() + 2;
        let lo = Dyadic::new(div_round(&(&self.lo.mant << k), c, false), self.lo.exp - k as i64);
        let hi = Dyadic::new(div_round(&(&self.hi.mant << k), c, true), self.hi.exp - k as i64);
        RealInterval::from_parts(lo, hi, self.prec)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// 1/x, or None if the interval meets zero.
    pub fn recip(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        if self.hi.is_negative() {
            return self.neg().recip().map(|r| r.neg());
        }
        let p = self.prec;
        let inv = |d: &Dyadic, up: bool| {
            let k = p as u64 + d.mant.bits() + 2;
            Dyadic::new(div_round(&(BigInt::one() << k), &d.mant, up), -(k as i64) - d.exp)
        };
        Some(RealInterval::from_parts(inv(&self.hi, false), inv(&self.lo, true), p))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.recip().map(|r| self.mul(&r))
    }

    /// Square root, or None if the interval is entirely negative. A slightly
    /// negative lower endpoint is clamped to zero.
    pub fn sqrt(&self) -> Option<Self> {
        if self.hi.is_negative() {
            return None;
        }
        let p = self.prec;
        let root = |d: &Dyadic, up: bool| -> Dyadic {
            if !d.is_positive() {
                return Dyadic::zero();
            }
            let mut t = (2 * p as i64 + 4 - d.mant.bits() as i64).max(0);
            if (d.exp - t) % 2 != 0 {
                t += 1;
            }
            let m = &d.mant << t as u64;
            let mut r = m.sqrt();
            if up && &r * &r < m {
                r += 1;
            }
            Dyadic::new(r, (d.exp - t) / 2)
        };
        Some(RealInterval::from_parts(root(&self.lo, false), root(&self.hi, true), p))
    }

    pub fn powi(&self, mut e: u64) -> Self {
        let mut acc = RealInterval::from_int(1, self.prec);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Self) -> Self {
        let lo = self.lo.clone().min(other.lo.clone());
        let hi = self.hi.clone().max(other.hi.clone());
        RealInterval::from_parts(lo, hi, self.prec.max(other.prec))
    }

    /// [-r, r] for r >= 0 given as a dyadic upper bound.
    pub fn symmetric(r: &Dyadic, prec: u32) -> Self {
        RealInterval::from_parts(r.neg(), r.clone(), prec)
    }

    pub fn certainly_lt(&self, other: &Self) -> bool {
        self.hi < other.lo
    }

    pub fn certainly_gt(&self, other: &Self) -> bool {
        self.lo > other.hi
    }

    pub fn certainly_ge(&self, other: &Self) -> bool {
        self.lo >= other.hi
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        self.lo.cmp_rational(r) != Ordering::Greater && self.hi.cmp_rational(r) != Ordering::Less
    }

    pub fn contains_int(&self, v: &BigInt) -> bool {
        self.contains_rational(&BigRational::from_integer(v.clone()))
    }

    /// The unique integer inside the interval, if there is exactly one.
    pub fn isolate_integer(&self) -> Option<BigInt> {
        let a = self.lo.ceil_int();
        let b = self.hi.floor_int();
        (a == b).then_some(a)
    }
}

// ---- constants and trigonometry ------------------------------------------------

/// Fixed-point atan(1/x) * 2^w, with the accumulated truncation error bound
/// in units of 2^-w.
fn atan_inv_fixed(x: u64, w: u64) -> (BigInt, u64) {
    let x2 = BigInt::from(x * x);
    let mut t = (BigInt::one() << w) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !t.is_zero() {
        let term = &t / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        t /= &x2;
        k += 1;
    }
    (sum, 3 * (k + 2))
}

fn pi_cache() -> &'static Mutex<HashMap<u32, RealInterval>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, RealInterval>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// pi by Machin's formula 16 atan(1/5) - 4 atan(1/239).
pub fn pi(prec: u32) -> RealInterval {
    if let Some(v) = pi_cache().lock().expect("pi cache").get(&prec) {
        return v.clone();
    }
    let w = prec as u64 + 32;
    let (a5, e5) = atan_inv_fixed(5, w);
    let (a239, e239) = atan_inv_fixed(239, w);
    let s = a5 * 16 - a239 * 4;
    let err = BigInt::from(16 * e5 + 4 * e239);
    let lo = Dyadic::new(&s - &err, -(w as i64));
    let hi = Dyadic::new(&s + &err, -(w as i64));
    let v = RealInterval::from_parts(lo, hi, prec);
    pi_cache().lock().expect("pi cache").insert(prec, v.clone());
    v
}

/// Enclosures of (cos theta, sin theta) for theta = 2 pi num / den.
pub fn cos_sin_turn(num: i64, den: u64, prec: u32) -> (RealInterval, RealInterval) {
    assert!(den > 0);
    let den_i = den as i64;
    let mut r = num.rem_euclid(den_i);
    if 2 * r > den_i {
        r -= den_i;
    }
    // exact values at multiples of a quarter turn
    if r == 0 {
        return (RealInterval::from_int(1, prec), RealInterval::from_int(0, prec));
    }
    if 2 * r == den_i {
        return (RealInterval::from_int(-1, prec), RealInterval::from_int(0, prec));
    }
    if 4 * r == den_i {
        return (RealInterval::from_int(0, prec), RealInterval::from_int(1, prec));
    }
    if 4 * r == -den_i {
        return (RealInterval::from_int(0, prec), RealInterval::from_int(-1, prec));
    }
    let wp = prec + 32;
    let theta = pi(wp).mul(&RealInterval::from_ratio(2 * r, den_i, wp));
    taylor_cos_sin(&theta, prec, wp)
}

/// Taylor series for |theta| <= pi with a Lagrange remainder bound.
fn taylor_cos_sin(theta: &RealInterval, prec: u32, wp: u32) -> (RealInterval, RealInterval) {
    let th2 = theta.square();
    let mut cos = RealInterval::from_int(1, wp);
    let mut sin = theta.clone();
    let mut term_c = RealInterval::from_int(1, wp);
    let mut term_s = theta.clone();
    let mut k: u64 = 1;
    // |theta| < 4, so 4^m / m! bounds the remainder after degree m - 1
    let mut rem_bound = RealInterval::from_int(4, wp);
    let mut m: u64 = 1;
    loop {
        term_c = term_c.mul(&th2).div_int(&BigInt::from((2 * k - 1) * (2 * k))).neg();
        term_s = term_s.mul(&th2).div_int(&BigInt::from((2 * k) * (2 * k + 1))).neg();
        cos = cos.add(&term_c);
        sin = sin.add(&term_s);
        k += 1;
        while m < 2 * k + 1 {
            m += 1;
            rem_bound = rem_bound.mul_int(4).div_int(&BigInt::from(m));
        }
        // remainder after the sine term of degree 2k-1 and cosine term of
        // degree 2k-2 is bounded by 4^(2k)/(2k)!, which rem_bound dominates
        if rem_bound.hi.log2_upper().is_none_or(|l| l < -(wp as i64) - 4) && m > 8 {
            break;
        }
    }
    let r = RealInterval::symmetric(&rem_bound.hi, wp);
    let cos = cos.add(&r).with_prec(prec);
    let sin = sin.add(&r).with_prec(prec);
    (cos, sin)
}

/// sqrt(n) as an interval.
pub fn sqrt_int(n: u64, prec: u32) -> RealInterval {
    RealInterval::from_int(n as i64, prec).sqrt().expect("nonnegative")
}

/// A complex rectangle (re, im).
#[derive(Clone, Debug)]
pub struct ComplexInterval {
    pub re: RealInterval,
    pub im: RealInterval,
}

impl ComplexInterval {
    pub fn mul(&self, other: &ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    /// e^{2 pi i num/den}.
    pub fn root_of_unity(num: i64, den: u64, prec: u32) -> ComplexInterval {
        let (re, im) = cos_sin_turn(num, den, prec);
        ComplexInterval { re, im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn pi_digits() {
        let p = pi(200);
        // 355/113 is above pi, 333/106 below
        assert!(p.certainly_lt(&RealInterval::from_ratio(355, 113, 200)));
        assert!(p.certainly_gt(&RealInterval::from_ratio(333, 106, 200)));
        assert!(p.width_log2().unwrap() < -180.0);
        assert!((p.midpoint_f64() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn trig_values() {
        let (c, s) = cos_sin_turn(1, 8, 128);
        let half = RealInterval::from_ratio(1, 2, 128);
        assert!(c.square().overlaps(&half) && s.square().overlaps(&half));
        let (c, s) = cos_sin_turn(1, 12, 128);
        assert!(s.overlaps(&half));
        assert!((c.midpoint_f64() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        for (num, den) in [(1i64, 7u64), (3, 7), (-5, 11), (13, 40), (1000, 2601)] {
            let (c, s) = cos_sin_turn(num, den, 300);
            let one = c.square().add(&s.square());
            assert!(one.contains_int(&BigInt::one()));
            assert!(one.width_log2().unwrap() < -250.0);
            let x = 2.0 * std::f64::consts::PI * num as f64 / den as f64;
            assert!((c.midpoint_f64() - x.cos()).abs() < 1e-14);
            assert!((s.midpoint_f64() - x.sin()).abs() < 1e-14);
        }
        // beyond the f64 exponent range
        let (c, s) = cos_sin_turn(5, 17, 3000);
        let one = c.square().add(&s.square());
        assert!(one.contains_int(&BigInt::one()));
        assert!(one.width_log2().unwrap() < -2900.0);
    }

    #[test]
    fn sqrt_and_isolation() {
        let r2 = sqrt_int(2, 100);
        assert!(r2.square().contains_int(&BigInt::from(2)));
        assert_eq!(RealInterval::from_ratio(7, 2, 64).isolate_integer(), None);
        assert_eq!(RealInterval::from_int(13, 64).isolate_integer(), Some(BigInt::from(13)));
        let near = RealInterval::from_rational(&q(1_000_000_001, 1_000_000_000), 100);
        assert_eq!(near.isolate_integer(), None);
    }

    #[test]
    fn random_containment() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let prec = 40;
        for _ in 0..500 {
            let pick = |rng: &mut ChaCha8Rng| {
                let a: i64 = rng.gen_range(-1000..1000);
                let b: i64 = rng.gen_range(-1000..1000);
                let den: i64 = rng.gen_range(1..97);
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                let x = RealInterval::from_rational(&q(lo, den), prec)
                    .hull(&RealInterval::from_rational(&q(hi, den), prec));
                let t: i64 = rng.gen_range(0..=100);
                // sample point lo + t/100 (hi - lo)
                let sample = q(lo, den) + q(t * (hi - lo), 100 * den);
                (x, sample)
            };
            let (x, sx) = pick(&mut rng);
            let (y, sy) = pick(&mut rng);
            assert!(x.add(&y).contains_rational(&(&sx + &sy)));
            assert!(x.sub(&y).contains_rational(&(&sx - &sy)));
            assert!(x.mul(&y).contains_rational(&(&sx * &sy)));
            assert!(x.square().contains_rational(&(&sx * &sx)));
            if let Some(d) = x.div(&y) {
                assert!(d.contains_rational(&(&sx / &sy)));
            }
            assert!(x.div_int(&BigInt::from(7)).contains_rational(&(&sx / q(7, 1))));
            assert!(x.powi(3).contains_rational(&(&sx * &sx * &sx)));
            if !sx.is_negative() {
                if let Some(r) = x.sqrt() {
                    assert!(r.square().contains_rational(&sx) || r.lo().is_zero());
                }
            }
        }
    }
}
