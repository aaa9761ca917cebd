use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::gauss::GaussInt;
use crate::ntheory::{divisors, mobius};

/// Dense integer polynomial, coefficients from the constant term upward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    /// X^m - 1.
    pub fn x_pow_minus_one(m: usize) -> Self {
        let mut c = vec![BigInt::zero(); m + 1];
        c[0] = BigInt::from(-1);
        c[m] = BigInt::one();
        IntPoly::new(c)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Multiplication by X^m - 1 in place.
    fn mul_x_pow_minus_one(&mut self, m: usize) {
        let old = std::mem::take(&mut self.coeffs);
        let mut out = vec![BigInt::zero(); old.len() + m];
        for (i, c) in old.iter().enumerate() {
            out[i + m] += c;
            out[i] -= c;
        }
        *self = IntPoly::new(out);
    }

    /// Exact division by X^m - 1; None if there is a remainder.
    fn div_x_pow_minus_one(&self, m: usize) -> Option<IntPoly> {
        if self.coeffs.len() <= m {
            return if self.is_zero() { Some(self.clone()) } else { None };
        }
        // self = q (X^m - 1): q_i = -(p_i - q_{i-m}) computed from the bottom.
        let qlen = self.coeffs.len() - m;
        let mut q = vec![BigInt::zero(); qlen];
        for i in 0..qlen {
            let prev = if i >= m { q[i - m].clone() } else { BigInt::zero() };
            q[i] = &prev - &self.coeffs[i];
        }
        let quotient = IntPoly::new(q);
        let mut check = quotient.clone();
        check.mul_x_pow_minus_one(m);
        (check == *self).then_some(quotient)
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(divisor.coeffs.last().is_some_and(|c| c.is_one()), "divisor must be monic");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (IntPoly::new(Vec::new()), self.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] -= &c * dc;
            }
        }
        rem.truncate(dd);
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_gauss(&self, z: &GaussInt) -> GaussInt {
        self.coeffs.iter().rev().fold(GaussInt::zero(), |acc, c| {
            let mut v = acc.mul(z);
            v.re += c;
            v
        })
    }

    /// Reduces modulo X^2 - s X + c, returning (u, v) with self = u + v X.
    pub fn rem_monic_quadratic(&self, s: &BigInt, c: &BigInt) -> (BigInt, BigInt) {
        let (mut u, mut v) = (BigInt::zero(), BigInt::zero());
        for a in self.coeffs.iter().rev() {
            // (u + vX) X + a = uX + v(sX - c) + a
            let nu = a - c * &v;
            let nv = u + s * &v;
            u = nu;
            v = nv;
        }
        (u, v)
    }

    /// Res(self, X^2 - sX + c) = prod over roots beta of self(beta)
    /// = u^2 + s u v + c v^2 where self = u + vX modulo the quadratic.
    pub fn resultant_monic_quadratic(&self, s: &BigInt, c: &BigInt) -> BigInt {
        let (u, v) = self.rem_monic_quadratic(s, c);
        &u * &u + s * &u * &v + c * &v * &v
    }
}

/// The n-th cyclotomic polynomial, as prod over d | n of (X^(n/d) - 1)^mu(d).
pub fn cyclotomic_poly(n: u64) -> IntPoly {
    assert!(n >= 1, "cyclotomic_poly(0)");
    let divs = divisors(n);
    let mut p = IntPoly::from_i64(&[1]);
    for &d in &divs {
        if mobius(d) == 1 {
            p.mul_x_pow_minus_one((n / d) as usize);
        }
    }
    for &d in &divs {
        if mobius(d) == -1 {
            p = p.div_x_pow_minus_one((n / d) as usize).expect("cyclotomic division is exact");
        }
    }
    p
}

/// Phi_n(z) for a Gaussian integer z, through the same Moebius product
/// (exact Gaussian division). Requires z not a root of unity of order | n.
pub fn cyclotomic_value_gauss(n: u64, z: &GaussInt) -> GaussInt {
    let mut num = GaussInt::one();
    let mut den = GaussInt::one();
    for d in divisors(n) {
        let mut f = z.pow(n / d);
        f.re -= 1;
        match mobius(d) {
            1 => num = num.mul(&f),
            -1 => den = den.mul(&f),
            _ => {}
        }
    }
    num.div_exact(&den).expect("cyclotomic value is a Gaussian integer")
}

/// Phi_n(x) for an integer x.
pub fn cyclotomic_value_int(n: u64, x: &BigInt) -> BigInt {
    // x = +-1 makes factors of the Moebius quotient vanish
    if x.abs().is_one() {
        return cyclotomic_poly(n).eval_int(x);
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for d in divisors(n) {
        let f = num_traits::pow::pow(x.clone(), (n / d) as usize) - 1;
        match mobius(d) {
            1 => num *= f,
            -1 => den *= f,
            _ => {}
        }
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::euler_phi;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic_poly(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic_poly(3), IntPoly::from_i64(&[1, 1, 1]));
        // 105 is the first index with a coefficient of absolute value 2
        assert!(cyclotomic_poly(105).coeffs().iter().any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn degree_and_divisibility() {
        for n in 1..=60u64 {
            let p = cyclotomic_poly(n);
            assert_eq!(p.degree() as u64, euler_phi(n));
            let (_, r) = IntPoly::x_pow_minus_one(n as usize).div_rem_monic(&p);
            assert!(r.is_zero(), "Phi_{n} does not divide X^{n}-1");
        }
    }

    #[test]
    fn squaring_identity() {
        for n in [3u64, 5, 7] {
            let lhs = cyclotomic_poly(8 * n);
            let rhs = cyclotomic_poly(4 * n);
            let mut spread = vec![BigInt::zero(); 2 * rhs.coeffs().len() - 1];
            for (i, c) in rhs.coeffs().iter().enumerate() {
                spread[2 * i] = c.clone();
            }
            assert_eq!(lhs, IntPoly::new(spread));
        }
    }

    #[test]
    fn evaluations() {
        assert_eq!(cyclotomic_poly(12).eval_int(&BigInt::from(2)), BigInt::from(13));
        assert_eq!(cyclotomic_poly(3).eval_gauss(&GaussInt::from_i64(1, 1)), GaussInt::from_i64(2, 3));
        let p = IntPoly::from_i64(&[5, -3, 8]);
        assert_eq!(p.eval_int(&BigInt::zero()), BigInt::from(5));
        for n in 1..40u64 {
            let z = GaussInt::from_i64(1, 1);
            assert_eq!(cyclotomic_value_gauss(n, &z), cyclotomic_poly(n).eval_gauss(&z));
            let x = BigInt::from(3);
            assert_eq!(cyclotomic_value_int(n, &x), cyclotomic_poly(n).eval_int(&x));
        }
    }

    #[test]
    fn quadratic_resultant_matches_gaussian_norm() {
        // roots of X^2 - 2X + 2 are 1 +- i
        for n in 1..50u64 {
            let p = cyclotomic_poly(n);
            let res = p.resultant_monic_quadratic(&BigInt::from(2), &BigInt::from(2));
            assert_eq!(res, p.eval_gauss(&GaussInt::from_i64(1, 1)).norm());
        }
    }
}
