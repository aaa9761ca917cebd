use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::gauss::GaussInt;

/// An element num / (1+i)^denom_exp of Z[i][1/(1+i)], kept canonical:
/// either num = 0 and denom_exp = 0, or (1+i) does not divide num whenever
/// denom_exp > 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClearedValue {
    num: GaussInt,
    denom_exp: u64,
}

impl ClearedValue {
    /// Canonical form of num / (1+i)^e.
    pub fn normalize(mut num: GaussInt, mut e: u64) -> Self {
        if num.is_zero() {
            return ClearedValue { num, denom_exp: 0 };
        }
        while e > 0 && num.divisible_by_one_plus_i() {
            num = num.div_one_plus_i();
            e -= 1;
        }
        ClearedValue { num, denom_exp: e }
    }

    pub fn from_gauss(num: GaussInt) -> Self {
        ClearedValue::normalize(num, 0)
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        ClearedValue::from_gauss(GaussInt::from_i64(re, im))
    }

    pub fn zero() -> Self {
        ClearedValue::from_i64(0, 0)
    }

    /// The trace -raw / (1 - (-1)^n i)^d, for a raw exponential sum over a
    /// field of degree d.
    ///
    /// For odd n the clearing factor is (1+i)^d. For even n,
    /// (1-i)^d = (-i)^d (1+i)^d, so the numerator picks up i^d.
    pub fn from_raw_sum(raw: &GaussInt, n_is_odd: bool, d: u32) -> Self {
        let neg = GaussInt { re: -&raw.re, im: -&raw.im };
        let num = if n_is_odd { neg } else { neg.mul_i_pow(d as u64) };
        ClearedValue::normalize(num, d as u64)
    }

    /// Reads back p/2^a + (r/2^b) i when all denominators are powers of two.
    pub fn from_rational_parts(re: &BigRational, im: &BigRational) -> Option<Self> {
        let k = [re, im]
            .iter()
            .map(|r| two_power_exponent(r.denom()))
            .collect::<Option<Vec<u64>>>()?
            .into_iter()
            .max()
            .unwrap_or(0);
        let scale = BigInt::one() << k;
        let re_n = re.numer() * (&scale / re.denom());
        let im_n = im.numer() * (&scale / im.denom());
        // x / 2^k = x * i^k / (1+i)^(2k)
        let num = GaussInt::new(re_n, im_n).mul_i_pow(k);
        Some(ClearedValue::normalize(num, 2 * k))
    }

    pub fn num(&self) -> &GaussInt {
        &self.num
    }

    pub fn denom_exp(&self) -> u64 {
        self.denom_exp
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Whether the value lies in Z[i].
    pub fn is_integral(&self) -> bool {
        self.denom_exp == 0
    }

    pub fn add(&self, other: &ClearedValue) -> ClearedValue {
        let e = self.denom_exp.max(other.denom_exp);
        let a = self.num.mul(&GaussInt::one_plus_i_pow(e - self.denom_exp));
        let b = other.num.mul(&GaussInt::one_plus_i_pow(e - other.denom_exp));
        ClearedValue::normalize(a + b, e)
    }

    pub fn neg(&self) -> ClearedValue {
        ClearedValue { num: GaussInt { re: -&self.num.re, im: -&self.num.im }, denom_exp: self.denom_exp }
    }

    pub fn sub(&self, other: &ClearedValue) -> ClearedValue {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ClearedValue) -> ClearedValue {
        ClearedValue::normalize(self.num.mul(&other.num), self.denom_exp + other.denom_exp)
    }

    /// Complex conjugate: conj(num) / (1-i)^e = conj(num) i^e / (1+i)^e.
    pub fn conj(&self) -> ClearedValue {
        ClearedValue::normalize(self.num.conj().mul_i_pow(self.denom_exp), self.denom_exp)
    }

    /// |v|^2 = (re^2 + im^2) / 2^e.
    pub fn abs_square(&self) -> BigRational {
        BigRational::new(self.num.norm(), BigInt::one() << self.denom_exp)
    }

    /// Real and imaginary parts: num (1-i)^e / 2^e.
    pub fn to_rational_parts(&self) -> (BigRational, BigRational) {
        let e = self.denom_exp;
        // (1-i)^e = conj((1+i)^e)
        let z = self.num.mul(&GaussInt::one_plus_i_pow(e).conj());
        let den = BigInt::one() << e;
        (BigRational::new(z.re, den.clone()), BigRational::new(z.im, den))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let (re, im) = self.to_rational_parts();
        (re.to_f64().unwrap_or(f64::NAN), im.to_f64().unwrap_or(f64::NAN))
    }

    /// "a+bi over (1+i)^e".
    pub fn cleared_form(&self) -> String {
        format!("{} over (1+i)^{}", self.num, self.denom_exp)
    }

    /// Reduced rational rendering such as "(-7+2i)/2" or "14".
    pub fn rational_form(&self) -> String {
        let (re, im) = self.to_rational_parts();
        let den = num_integer::lcm(re.denom().clone(), im.denom().clone());
        let g = GaussInt::new(re.numer() * (&den / re.denom()), im.numer() * (&den / im.denom()));
        if den.is_one() {
            g.to_string()
        } else if g.im.is_zero() || g.re.is_zero() {
            format!("{g}/{den}")
        } else {
            format!("({g})/{den}")
        }
    }

    pub fn to_record(&self) -> ClearedRecord {
        ClearedRecord {
            re: self.num.re.to_string(),
            im: self.num.im.to_string(),
            denom_exp: self.denom_exp,
        }
    }

    pub fn from_record(r: &ClearedRecord) -> Option<ClearedValue> {
        let re: BigInt = r.re.parse().ok()?;
        let im: BigInt = r.im.parse().ok()?;
        Some(ClearedValue::normalize(GaussInt::new(re, im), r.denom_exp))
    }
}

fn two_power_exponent(d: &BigInt) -> Option<u64> {
    if !d.is_positive() {
        return None;
    }
    let tz = d.trailing_zeros().unwrap_or(0);
    if (d >> tz).is_one() {
        Some(tz)
    } else {
        None
    }
}

impl fmt::Display for ClearedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rational_form())
    }
}

/// Serialized form of a ClearedValue (integers as decimal strings).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClearedRecord {
    pub re: String,
    pub im: String,
    pub denom_exp: u64,
}
