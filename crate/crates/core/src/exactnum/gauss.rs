use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A Gaussian integer re + im*i.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: BigInt, im: BigInt) -> Self {
        GaussInt { re, im }
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        GaussInt { re: BigInt::from(re), im: BigInt::from(im) }
    }

    pub fn zero() -> Self {
        GaussInt::from_i64(0, 0)
    }

    pub fn one() -> Self {
        GaussInt::from_i64(1, 0)
    }

    /// 1 + i.
    pub fn one_plus_i() -> Self {
        GaussInt::from_i64(1, 1)
    }

    /// i^k.
    pub fn i_pow(k: u64) -> Self {
        match k % 4 {
            0 => GaussInt::from_i64(1, 0),
            1 => GaussInt::from_i64(0, 1),
            2 => GaussInt::from_i64(-1, 0),
            _ => GaussInt::from_i64(0, -1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussInt { re: self.re.clone(), im: -&self.im }
    }

    /// re^2 + im^2.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn mul(&self, other: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    /// Multiplication by i^k.
    pub fn mul_i_pow(&self, k: u64) -> GaussInt {
        match k % 4 {
            0 => self.clone(),
            1 => GaussInt { re: -&self.im, im: self.re.clone() },
            2 => GaussInt { re: -&self.re, im: -&self.im },
            _ => GaussInt { re: self.im.clone(), im: -&self.re },
        }
    }

    pub fn pow(&self, mut e: u64) -> GaussInt {
        let mut base = self.clone();
        let mut acc = GaussInt::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// (1+i)^e, using (1+i)^2 = 2i.
    pub fn one_plus_i_pow(e: u64) -> GaussInt {
        let two_pow = BigInt::one() << (e / 2);
        let base = GaussInt { re: two_pow, im: BigInt::zero() }.mul_i_pow(e / 2);
        if e % 2 == 1 {
            base.mul(&GaussInt::one_plus_i())
        } else {
            base
        }
    }

    /// Whether 1+i divides self (iff re and im have equal parity).
    pub fn divisible_by_one_plus_i(&self) -> bool {
        (&self.re - &self.im).is_even()
    }

    /// self / (1+i); the caller guarantees divisibility.
    pub fn div_one_plus_i(&self) -> GaussInt {
        debug_assert!(self.divisible_by_one_plus_i());
        let two = BigInt::from(2);
        GaussInt { re: (&self.re + &self.im) / &two, im: (&self.im - &self.re) / &two }
    }

    /// Exact quotient self / other if it lies in Z[i].
    pub fn div_exact(&self, other: &GaussInt) -> Option<GaussInt> {
        let n = other.norm();
        if n.is_zero() {
            return None;
        }
        let p = self.mul(&other.conj());
        let (qr, rr) = p.re.div_rem(&n);
        let (qi, ri) = p.im.div_rem(&n);
        if rr.is_zero() && ri.is_zero() {
            Some(GaussInt { re: qr, im: qi })
        } else {
            None
        }
    }

    /// Largest v with (1+i)^v dividing self (None for 0).
    pub fn valuation_one_plus_i(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut z = self.clone();
        while z.divisible_by_one_plus_i() {
            z = z.div_one_plus_i();
            v += 1;
        }
        Some(v)
    }
}

impl Add for GaussInt {
    type Output = GaussInt;
    fn add(self, rhs: GaussInt) -> GaussInt {
        GaussInt { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<'a> Add<&'a GaussInt> for &'a GaussInt {
    type Output = GaussInt;
    fn add(self, rhs: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl AddAssign<&GaussInt> for GaussInt {
    fn add_assign(&mut self, rhs: &GaussInt) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: GaussInt) -> GaussInt {
        GaussInt { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<'a> Sub<&'a GaussInt> for &'a GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Neg for GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt { re: -self.re, im: -self.im }
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_abs = self.im.abs();
        let im_str = if im_abs.is_one() { String::new() } else { im_abs.to_string() };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => {
                let sign = if self.im.is_negative() { "-" } else { "" };
                write!(f, "{sign}{im_str}i")
            }
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "{}{sign}{im_str}i", self.re)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_of_one_plus_i() {
        assert_eq!(GaussInt::one_plus_i_pow(2), GaussInt::from_i64(0, 2));
        for e in 0..12 {
            assert_eq!(GaussInt::one_plus_i_pow(e), GaussInt::one_plus_i().pow(e));
        }
    }

    #[test]
    fn division_by_one_plus_i() {
        let z = GaussInt::from_i64(0, 2);
        assert!(z.divisible_by_one_plus_i());
        assert_eq!(z.div_one_plus_i(), GaussInt::one_plus_i());
        assert!(!GaussInt::from_i64(3, 2).divisible_by_one_plus_i());
        assert_eq!(GaussInt::from_i64(2, 0).valuation_one_plus_i(), Some(2));
        assert_eq!(GaussInt::from_i64(2, 3).div_exact(&GaussInt::from_i64(1, 1)), None);
        let a = GaussInt::from_i64(7, -4);
        let b = GaussInt::from_i64(-3, 5);
        assert_eq!(a.mul(&b).div_exact(&b), Some(a));
    }

    #[test]
    fn display() {
        assert_eq!(GaussInt::from_i64(-7, 2).to_string(), "-7+2i");
        assert_eq!(GaussInt::from_i64(0, -1).to_string(), "-i");
        assert_eq!(GaussInt::from_i64(3, -1).to_string(), "3-i");
        assert_eq!(GaussInt::from_i64(14, 0).to_string(), "14");
    }
}
