use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::interval::{sqrt_int, RealInterval};

/// a + b sqrt(D) with integer a, b and a fixed squarefree D > 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
    pub d: u64,
}

impl QuadInt {
    pub fn new(a: BigInt, b: BigInt, d: u64) -> Self {
        QuadInt { a, b, d }
    }

    pub fn from_i64(a: i64, b: i64, d: u64) -> Self {
        QuadInt::new(a.into(), b.into(), d)
    }

    pub fn one(d: u64) -> Self {
        QuadInt::from_i64(1, 0, d)
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn mul(&self, o: &QuadInt) -> QuadInt {
        assert_eq!(self.d, o.d, "mixed quadratic fields");
        let dd = BigInt::from(self.d);
        QuadInt {
            a: &self.a * &o.a + &dd * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d,
        }
    }

    pub fn conj(&self) -> QuadInt {
        QuadInt { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    /// a^2 - D b^2.
    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - BigInt::from(self.d) * &self.b * &self.b
    }

    /// Inverse of a unit (norm +-1).
    pub fn unit_inverse(&self) -> Option<QuadInt> {
        let n = self.norm();
        if n.is_one() {
            Some(self.conj())
        } else if (-n).is_one() {
            let c = self.conj();
            Some(QuadInt { a: -c.a, b: -c.b, d: self.d })
        } else {
            None
        }
    }

    pub fn pow(&self, mut e: u64) -> QuadInt {
        let mut acc = QuadInt::one(self.d);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Signed power; negative exponents need a unit.
    pub fn pow_signed(&self, e: i64) -> Option<QuadInt> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.unit_inverse().map(|u| u.pow(e.unsigned_abs()))
        }
    }

    pub fn to_interval(&self, prec: u32) -> RealInterval {
        let r = sqrt_int(self.d, prec);
        RealInterval::from_bigint(&self.a, prec).add(&r.mul(&RealInterval::from_bigint(&self.b, prec)))
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let root = if self.b.abs().is_one() { format!("sqrt({})", self.d) } else { format!("{}*sqrt({})", self.b.abs(), self.d) };
        if self.a.is_zero() {
            write!(f, "{}{root}", if self.b.is_negative() { "-" } else { "" })
        } else {
            write!(f, "{}{sign}{root}", self.a)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units() {
        let u = QuadInt::from_i64(1, 1, 2);
        assert_eq!(u.norm(), BigInt::from(-1));
        assert!(u.mul(&u.unit_inverse().unwrap()).is_one());
        let v = QuadInt::from_i64(2, 1, 3);
        assert!(v.pow_signed(-3).unwrap().mul(&v.pow(3)).is_one());
        assert_eq!(u.pow(2), QuadInt::from_i64(3, 2, 2));
        let iv = u.pow(4).to_interval(80);
        assert!((iv.midpoint_f64() - (1.0 + 2f64.sqrt()).powi(4)).abs() < 1e-9);
        assert_eq!(QuadInt::from_i64(3, -2, 2).to_string(), "3-2*sqrt(2)");
        assert_eq!(QuadInt::from_i64(2, 1, 3).to_string(), "2+sqrt(3)");
        assert_eq!(QuadInt::from_i64(0, -1, 2).to_string(), "-sqrt(2)");
        assert_eq!(QuadInt::from_i64(5, 0, 2).to_string(), "5");
    }
}
