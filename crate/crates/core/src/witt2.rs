//! Witt vectors of length 2 over a binary field, their trace to
//! W_2(F_2) = Z/4 and the character psi_2.

use crate::exactnum::GaussInt;
use crate::gf2m::{FieldCtx, FqElt};

/// The Witt vector [a, b].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Witt2 {
    pub a: FqElt,
    pub b: FqElt,
}

impl Witt2 {
    pub const ZERO: Witt2 = Witt2 { a: FqElt::ZERO, b: FqElt::ZERO };

    pub fn new(a: FqElt, b: FqElt) -> Self {
        Witt2 { a, b }
    }
}

/// An element of W_2(F_2) = Z/4, the class a^2 + 2b of [a, b].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct W2F2(u8);

impl W2F2 {
    pub fn new(v: u32) -> Self {
        W2F2((v & 3) as u8)
    }

    /// Class of the vector [alpha, beta] with alpha, beta in F_2.
    pub fn from_coords(alpha: u32, beta: u32) -> Self {
        W2F2::new((alpha & 1) + 2 * (beta & 1))
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0 as u32
    }
}

impl std::ops::Add for W2F2 {
    type Output = W2F2;
    fn add(self, rhs: W2F2) -> W2F2 {
        W2F2((self.0 + rhs.0) & 3)
    }
}

/// [a,b] + [A,B] = [a+A, b+B+aA].
pub fn w_add(ctx: &FieldCtx, u: Witt2, v: Witt2) -> Witt2 {
    Witt2 { a: u.a + v.a, b: u.b + v.b + ctx.mul(u.a, v.a) }
}

/// -[x,y] = [x, y+x^2].
pub fn w_neg(ctx: &FieldCtx, u: Witt2) -> Witt2 {
    Witt2 { a: u.a, b: u.b + ctx.square(u.a) }
}

pub fn w_sub(ctx: &FieldCtx, u: Witt2, v: Witt2) -> Witt2 {
    w_add(ctx, u, w_neg(ctx, v))
}

/// Second elementary symmetric function of the Frobenius conjugates of `a`,
/// which always lies in F_2.
pub fn conjugate_e2(ctx: &FieldCtx, a: FqElt) -> u32 {
    let mut partial = FqElt::ZERO;
    let mut e2 = FqElt::ZERO;
    let mut c = a;
    for _ in 0..ctx.degree() {
        e2 += ctx.mul(partial, c);
        partial += c;
        c = ctx.square(c);
    }
    debug_assert!(e2.bits() <= 1);
    e2.bits()
}

/// Trace from W_2(k) to W_2(F_2) = Z/4.
#[inline]
pub fn w_trace(ctx: &FieldCtx, u: Witt2) -> W2F2 {
    let alpha = ctx.trace_to_f2(u.a);
    let beta = ctx.trace_to_f2(u.b) ^ conjugate_e2(ctx, u.a);
    W2F2::from_coords(alpha, beta)
}

/// Reference trace: literally add up the d Frobenius conjugates with w_add.
pub fn w_trace_fold(ctx: &FieldCtx, u: Witt2) -> W2F2 {
    let mut acc = Witt2::ZERO;
    let mut c = u;
    for _ in 0..ctx.degree() {
        acc = w_add(ctx, acc, c);
        c = Witt2 { a: ctx.square(c.a), b: ctx.square(c.b) };
    }
    assert!(acc.a.bits() <= 1 && acc.b.bits() <= 1, "trace left F_2");
    W2F2::from_coords(acc.a.bits(), acc.b.bits())
}

/// psi_2(c) = i^c.
pub fn psi2(c: W2F2) -> GaussInt {
    match c.value() {
        0 => GaussInt::from_i64(1, 0),
        1 => GaussInt::from_i64(0, 1),
        2 => GaussInt::from_i64(-1, 0),
        _ => GaussInt::from_i64(0, -1),
    }
}

/// psi_2 as a small integer pair (re, im).
#[inline]
pub fn psi2_pair(c: W2F2) -> (i64, i64) {
    match c.value() {
        0 => (1, 0),
        1 => (0, 1),
        2 => (-1, 0),
        _ => (0, -1),
    }
}
