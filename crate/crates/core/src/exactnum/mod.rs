//! Exact number backends.

mod cleared;
mod gauss;
pub mod interval;
mod poly;
mod quad;

pub use cleared::{ClearedRecord, ClearedValue};
pub use gauss::GaussInt;
pub use interval::{ComplexInterval, Dyadic, RealInterval};
pub use poly::{cyclotomic_poly, cyclotomic_value_gauss, cyclotomic_value_int, IntPoly};
pub use quad::QuadInt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;

/// Decimal expansion of a rational, truncated (not rounded) to `digits`
/// places after the point.
pub fn rational_to_decimal(r: &BigRational, digits: usize) -> String {
    let neg = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom();
    let (int, mut rem) = num.div_rem(den);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&int.to_string());
    if digits > 0 {
        out.push('.');
        let ten = BigInt::from(10);
        for _ in 0..digits {
            rem *= &ten;
            let (d, r2) = rem.div_rem(den);
            out.push_str(&d.to_string());
            rem = r2;
        }
    }
    out
}

/// Decimal expansion rounded half-up to `digits` places.
pub fn rational_to_decimal_rounded(r: &BigRational, digits: usize) -> String {
    let scale = BigInt::from(10).pow(digits as u32);
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let scaled = r.abs() * BigRational::from_integer(scale.clone()) + half;
    let n = scaled.floor().to_integer();
    let v = BigRational::new(if r.is_negative() { -n } else { n }, scale);
    rational_to_decimal(&v, digits)
}
