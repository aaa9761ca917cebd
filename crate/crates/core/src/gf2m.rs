//! Binary fields F_{2^d} for d <= 30, stored as bit-packed residues modulo an
//! irreducible polynomial over F_2.
//!
//! Besides the usual arithmetic the context caches the absolute trace of each
//! basis monomial, which turns `Tr(t*x)` into a parity of `t & trace_mask(x)`.

use rand::Rng;

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 30;
const TABLE_MAX_DEGREE: u32 = 20;

/// A field element: coefficients of the representative polynomial in the
/// basis 1, X, ..., X^{d-1}.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElt(pub u32);

impl FqElt {
    pub const ZERO: FqElt = FqElt(0);
    pub const ONE: FqElt = FqElt(1);

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::ops::Add for FqElt {
    type Output = FqElt;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: FqElt) -> FqElt {
        FqElt(self.0 ^ rhs.0)
    }
}

impl std::ops::AddAssign for FqElt {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: FqElt) {
        self.0 ^= rhs.0;
    }
}

// ---- polynomials over F_2 packed in u64 --------------------------------------

#[inline]
fn degree_of(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

/// Carry-less product of two polynomials of degree < 32.
#[inline]
pub(crate) fn clmul(a: u64, b: u64) -> u64 {
    debug_assert!(a < (1 << 32) && b < (1 << 32));
    let mut acc = 0u64;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = degree_of(m);
    while a != 0 && degree_of(a) >= dm {
        a ^= m << (degree_of(a) - dm);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

fn poly_mulmod(a: u64, b: u64, m: u64) -> u64 {
    poly_rem(clmul(a, b), m)
}

/// Ben-Or irreducibility test: `m` of degree d is irreducible iff
/// gcd(m, X^{2^i} - X) = 1 for every 1 <= i <= d/2.
pub fn is_irreducible(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let d = degree_of(m);
    if d > MAX_DEGREE as i32 {
        return false;
    }
    let mut x_pow = 0b10u64; // X
    for _ in 1..=(d / 2) {
        x_pow = poly_mulmod(x_pow, x_pow, m);
        if poly_gcd(m, x_pow ^ 0b10) != 1 {
            return false;
        }
    }
    true
}

fn least_irreducible(d: u32) -> u64 {
    let start = 1u64 << d;
    (start..start << 1)
        .filter(|m| m & 1 == 1)
        .find(|&m| is_irreducible(m))
        .expect("an irreducible polynomial exists in every degree")
}

// ---- the field context ----------------------------------------------------------

#[derive(Clone, Debug)]
struct LogTables {
    log: Vec<u32>,
    // antilog doubled in length so log a + log b needs no reduction
    exp: Vec<u32>,
}

/// A concrete model of F_{2^d}.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    degree: u32,
    modulus: u64,
    trace_vector: u32,
    mask_basis: Vec<u32>,
    tables: Option<LogTables>,
}

impl FieldCtx {
    /// Field of degree `d` with the lexicographically least irreducible
    /// modulus (nonzero constant term).
    pub fn new(d: u32) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&d) {
            return Err(Error::DegreeOutOfRange(d));
        }
        Self::with_modulus(least_irreducible(d))
    }

    pub fn with_modulus(modulus: u64) -> Result<Self> {
        let d = degree_of(modulus);
        if !(1..=MAX_DEGREE as i32).contains(&d) {
            return Err(Error::DegreeOutOfRange(d.max(0) as u32));
        }
        if modulus & 1 == 0 || !is_irreducible(modulus) {
            return Err(Error::Reducible(modulus));
        }
        let degree = d as u32;
        let mut ctx = FieldCtx {
            degree,
            modulus,
            trace_vector: 0,
            mask_basis: Vec::new(),
            tables: None,
        };
        // Tr(X^k) for 0 <= k <= 2d-2, by summing Frobenius orbits
        let traces: Vec<u32> = (0..2 * degree - 1)
            .map(|k| {
                let xk = FqElt(poly_rem(1u64 << k, modulus) as u32);
                ctx.trace_by_frobenius(xk)
            })
            .collect();
        ctx.trace_vector = (0..degree).fold(0, |acc, j| acc | (traces[j as usize] << j));
        ctx.mask_basis = (0..degree)
            .map(|b| (0..degree).fold(0, |acc, j| acc | (traces[(b + j) as usize] << j)))
            .collect();
        Ok(ctx)
    }

    /// Same field, with log/antilog tables attached (d <= 20 only; larger
    /// degrees are returned unchanged).
    pub fn with_tables(mut self) -> Self {
        if self.degree > TABLE_MAX_DEGREE || self.tables.is_some() {
            return self;
        }
        let order = (1u64 << self.degree) - 1;
        let g = self.primitive_element();
        let mut log = vec![0u32; 1 << self.degree];
        let mut exp = vec![0u32; 2 * order as usize];
        let mut cur = FqElt::ONE;
        for i in 0..order as usize {
            exp[i] = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_slow(cur, g);
        }
        for i in 0..order as usize {
            exp[order as usize + i] = exp[i];
        }
        self.tables = Some(LogTables { log, exp });
        self
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// #k = 2^d.
    #[inline]
    pub fn size(&self) -> u64 {
        1u64 << self.degree
    }

    /// #k^x = 2^d - 1.
    #[inline]
    pub fn unit_order(&self) -> u64 {
        self.size() - 1
    }

    pub fn contains(&self, a: FqElt) -> bool {
        (a.0 as u64) < self.size()
    }

    pub fn check(&self, a: FqElt) -> Result<FqElt> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::ForeignElement { bits: a.0 as u64, degree: self.degree })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElt> {
        (0..self.size() as u32).map(FqElt)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElt {
        FqElt(rng.gen_range(0..self.size()) as u32)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElt {
        FqElt(rng.gen_range(1..self.size()) as u32)
    }

    #[inline]
    fn mul_slow(&self, a: FqElt, b: FqElt) -> FqElt {
        let mut p = clmul(a.0 as u64, b.0 as u64);
        let d = self.degree as i32;
        let mut top = degree_of(p);
        while top >= d {
            p ^= self.modulus << (top - d);
            top = degree_of(p);
        }
        FqElt(p as u32)
    }

    #[inline]
    pub fn mul(&self, a: FqElt, b: FqElt) -> FqElt {
        match &self.tables {
            Some(t) => {
                if a.0 == 0 || b.0 == 0 {
                    FqElt::ZERO
                } else {
                    FqElt(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                }
            }
            None => self.mul_slow(a, b),
        }
    }

    #[inline]
    pub fn square(&self, a: FqElt) -> FqElt {
        self.mul(a, a)
    }

    /// a^e; exponents are reduced modulo 2^d - 1 (with 0^e = 0 for e > 0).
    pub fn pow(&self, a: FqElt, e: u128) -> FqElt {
        if e == 0 {
            return FqElt::ONE;
        }
        if a.is_zero() {
            return FqElt::ZERO;
        }
        let order = self.unit_order() as u128;
        let mut e = e % order;
        if e == 0 {
            return FqElt::ONE;
        }
        if let Some(t) = &self.tables {
            let l = (t.log[a.0 as usize] as u128 * e) % order;
            return FqElt(t.exp[l as usize]);
        }
        let mut base = a;
        let mut acc = FqElt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self, a: FqElt) -> Result<FqElt> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(a, self.unit_order() as u128 - 1))
    }

    /// a^{2^i}.
    pub fn frobenius(&self, a: FqElt, i: u64) -> FqElt {
        let mut a = a;
        for _ in 0..(i % self.degree as u64) {
            a = self.square(a);
        }
        a
    }

    /// Sum of the d Frobenius conjugates; the definition of the absolute trace.
    pub fn trace_by_frobenius(&self, a: FqElt) -> u32 {
        let mut acc = FqElt::ZERO;
        let mut c = a;
        for _ in 0..self.degree {
            acc += c;
            c = self.square(c);
        }
        debug_assert!(acc.0 <= 1);
        acc.0
    }

    /// Absolute trace Tr_{k/F_2}(a) in {0, 1}.
    #[inline]
    pub fn trace_to_f2(&self, a: FqElt) -> u32 {
        (a.0 & self.trace_vector).count_ones() & 1
    }

    /// m(x) with Tr(t*x) = parity(t & m(x)) for every t.
    #[inline]
    pub fn trace_mask(&self, x: FqElt) -> u32 {
        let mut bits = x.0;
        let mut m = 0u32;
        while bits != 0 {
            let b = bits.trailing_zeros();
            m ^= self.mask_basis[b as usize];
            bits &= bits - 1;
        }
        m
    }

    /// Element X (the class of the indeterminate).
    pub fn generator_x(&self) -> FqElt {
        FqElt(poly_rem(0b10, self.modulus) as u32)
    }

    /// Some generator of k^x (smallest by bit value).
    pub fn primitive_element(&self) -> FqElt {
        let order = self.unit_order();
        let primes = crate::ntheory::prime_factors_u64(order);
        (1..self.size() as u32)
            .map(FqElt)
            .find(|&g| primes.iter().all(|&p| self.pow_slow(g, order / p) != FqElt::ONE))
            .expect("k^x is cyclic")
    }

    fn pow_slow(&self, a: FqElt, mut e: u64) -> FqElt {
        let mut base = a;
        let mut acc = FqElt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    /// Discrete log base the table generator (tables must be attached).
    pub fn log(&self, a: FqElt) -> Option<u32> {
        match &self.tables {
            Some(t) if !a.is_zero() => Some(t.log[a.0 as usize]),
            _ => None,
        }
    }

    pub fn antilog(&self, l: u64) -> Option<FqElt> {
        self.tables
            .as_ref()
            .map(|t| FqElt(t.exp[(l % self.unit_order()) as usize]))
    }

    /// Gram matrix rank of (t, x) -> Tr(t x) over F_2.
    pub fn trace_form_rank(&self) -> u32 {
        crate::linalg::rank(&self.mask_basis, self.degree)
    }

    pub fn modulus_hex(&self) -> String {
        format!("{:#x}", self.modulus)
    }
}

/// Parses a hex modulus, with or without `0x`.
pub fn parse_modulus(s: &str) -> Result<u64> {
    let t = s.trim().trim_start_matches("0x").trim_start_matches("0X");
    u64::from_str_radix(t, 16).map_err(|_| Error::Precondition(format!("bad hex modulus {s:?}")))
}
