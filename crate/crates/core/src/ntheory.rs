//! Elementary number theory: factoring, arithmetic functions, Jacobi
//! symbols, multiplicative orders and probable-prime tests.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub const TRIAL_BOUND: u64 = 1_000_000;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut acc: u128 = 1;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    assert!(n > 0, "factorize(0)");
    let mut out = Vec::new();
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n && p <= TRIAL_BOUND {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        // any cofactor left here exceeds TRIAL_BOUND^2 or is prime
        let mut rest: Vec<u64> = factor_big(&BigUint::from(n))
            .into_iter()
            .map(|f| f.to_u64().expect("factor of a u64"))
            .collect();
        rest.sort_unstable();
        for f in rest {
            match out.last_mut() {
                Some((q, e)) if *q == f => *e += 1,
                _ => out.push((f, 1)),
            }
        }
    }
    out
}

pub fn prime_factors_u64(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(1, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

pub fn mobius(n: u64) -> i32 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Number of distinct prime divisors.
pub fn omega(n: u64) -> u32 {
    factorize(n).len() as u32
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// n / gcd(n, b^infinity): n with every prime of b removed.
pub fn strip_primes_of(mut n: u64, b: u64) -> u64 {
    for p in prime_factors_u64(b) {
        while n.is_multiple_of(p) {
            n /= p;
        }
    }
    n
}

/// Jacobi symbol (a | n) for odd positive n.
pub fn jacobi(a: i64, n: u64) -> Result<i32> {
    if n == 0 || n.is_multiple_of(2) {
        return Err(Error::Precondition(format!("jacobi symbol needs odd positive n, got {n}")));
    }
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    Ok(if n == 1 { result } else { 0 })
}

/// Order of a in (Z/m)^x.
pub fn multiplicative_order(a: u64, m: u64) -> Result<u64> {
    if m == 1 {
        return Ok(1);
    }
    if m == 0 || gcd(a, m) != 1 {
        return Err(Error::Precondition(format!("{a} is not a unit modulo {m}")));
    }
    let mut ord = euler_phi(m);
    for (p, _) in factorize(ord) {
        while ord.is_multiple_of(p) && pow_mod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    Ok(ord)
}

fn big_pow_mod(base: u64, exp: u64, m: &BigUint) -> BigUint {
    BigUint::from(base).modpow(&BigUint::from(exp), m)
}

/// True iff a has order exactly `order` modulo the prime ell: a^order = 1 and
/// a^(order/p) != 1 for every prime p dividing `order`.
pub fn has_exact_order(a: u64, ell: &BigUint, order: u64) -> bool {
    let one = BigUint::one();
    if big_pow_mod(a, order, ell) != one {
        return false;
    }
    prime_factors_u64(order)
        .into_iter()
        .all(|p| big_pow_mod(a, order / p, ell) != one)
}

const SMALL_PRIMES: [u32; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];

/// Miller-Rabin with the first 20 prime bases; deterministic below 3.3e24
/// and a strong probable-prime test beyond that.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for &a in SMALL_PRIMES.iter() {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Pollard-Brent; returns a nontrivial factor of the composite n, if found.
pub fn pollard_brent(n: &BigUint, seed: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = BigUint::one();
    for _attempt in 0..64 {
        let mut y = rng.gen_biguint_below(n);
        let c = rng.gen_biguint_range(&one, n);
        let m = 128u64;
        let mut g = one.clone();
        let mut r = 1u64;
        let mut q = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let f = |v: &BigUint| (v * v + &c) % n;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            if r > 1 << 26 {
                break;
            }
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}

/// Prime factors of n with multiplicity (unsorted). Trial division to
/// TRIAL_BOUND, then Pollard-Brent with a fixed seed.
pub fn factor_big(n: &BigUint) -> Vec<BigUint> {
    let mut out = Vec::new();
    let mut n = n.clone();
    if n.is_zero() {
        return out;
    }
    let mut p = 2u64;
    while p <= TRIAL_BOUND && BigUint::from(p * p) <= n {
        let bp = BigUint::from(p);
        while (&n % &bp).is_zero() {
            n /= &bp;
            out.push(bp.clone());
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![n];
    let mut seed = 0x5eed;
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m) {
            out.push(m);
            continue;
        }
        seed += 1;
        match pollard_brent(&m, seed) {
            Some(f) => {
                let g = &m / &f;
                stack.push(f);
                stack.push(g);
            }
            None => panic!("failed to split composite {m}"),
        }
    }
    out
}
