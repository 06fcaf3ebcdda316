//! Arithmetic in prime fields `F_p` with `p < 2^64`.
//!
//! Elements carry their modulus so that mixing elements of different fields
//! is detected. The `checked_*` methods report a mismatch as an error; the
//! operator impls panic on it, the same way slice indexing panics on a bad
//! index.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A prime field `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct FieldCtx {
    p: u64,
}

impl FieldCtx {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Order of the multiplicative group, `p - 1`.
    #[inline]
    pub fn group_order(&self) -> u64 {
        self.p - 1
    }

    /// Reduces an arbitrary integer into the field.
    #[inline]
    pub fn elem(&self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.p,
            p: self.p,
        }
    }

    /// Builds an element from a value that must already be canonical.
    pub fn try_elem(&self, value: u64) -> Result<FieldElement> {
        if value >= self.p {
            return Err(Error::Parse(format!(
                "{value} is not a residue modulo {}",
                self.p
            )));
        }
        Ok(self.elem(value))
    }

    pub fn from_i64(&self, value: i64) -> FieldElement {
        let r = (value as i128).rem_euclid(self.p as i128);
        self.elem(r as u64)
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    pub fn elems(&self, values: &[u64]) -> Vec<FieldElement> {
        values.iter().map(|&v| self.elem(v)).collect()
    }

    /// All elements in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.p).map(move |v| self.elem(v))
    }

    /// `d^{-1} mod (p - 1)`, the exponent that inverts `x -> x^d`.
    pub fn inverse_exponent(&self, d: u64) -> Result<u64> {
        let order = self.group_order();
        if d == 0 || gcd(d, order) != 1 {
            return Err(Error::ExponentNotInvertible { exponent: d, order });
        }
        if order == 1 {
            return Ok(1);
        }
        mod_inverse(d % order, order).ok_or(Error::ExponentNotInvertible { exponent: d, order })
    }
}

impl TryFrom<u64> for FieldCtx {
    type Error = Error;

    fn try_from(p: u64) -> Result<Self> {
        FieldCtx::new(p)
    }
}

impl From<FieldCtx> for u64 {
    fn from(ctx: FieldCtx) -> u64 {
        ctx.p
    }
}

/// A canonical residue in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    value: u64,
    p: u64,
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    #[inline]
    fn same_field(self, other: Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::ModulusMismatch {
                left: self.p,
                right: other.p,
            });
        }
        Ok(())
    }

    pub fn checked_add(self, other: Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(self, other: Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn checked_mul(self, other: Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    #[inline]
    fn add_unchecked(self, other: Self) -> Self {
        let s = self.value as u128 + other.value as u128;
        let p = self.p as u128;
        Self {
            value: if s >= p { (s - p) as u64 } else { s as u64 },
            p: self.p,
        }
    }

    #[inline]
    fn sub_unchecked(self, other: Self) -> Self {
        let value = if self.value >= other.value {
            self.value - other.value
        } else {
            self.p - (other.value - self.value)
        };
        Self { value, p: self.p }
    }

    #[inline]
    fn mul_unchecked(self, other: Self) -> Self {
        Self {
            value: mul_mod(self.value, other.value, self.p),
            p: self.p,
        }
    }

    /// Square-and-multiply. `0^0 = 1`.
    pub fn pow(self, e: u64) -> Self {
        Self {
            value: pow_mod(self.value, e, self.p),
            p: self.p,
        }
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.p - 2))
    }

    pub fn checked_div(self, other: Self) -> Result<Self> {
        self.checked_mul(other.inv()?)
    }

    /// The unique `x` with `x^d = self`, defined when `gcd(d, p - 1) = 1`.
    pub fn root(self, d: u64) -> Result<Self> {
        let ctx = FieldCtx { p: self.p };
        let e = ctx.inverse_exponent(d)?;
        if self.value == 0 {
            return Ok(self);
        }
        Ok(self.pow(e))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $assign:ident, $assign_method:ident, $inner:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;

            #[inline]
            fn $method(self, rhs: FieldElement) -> FieldElement {
                assert_eq!(self.p, rhs.p, "field modulus mismatch");
                self.$inner(rhs)
            }
        }

        impl $assign for FieldElement {
            #[inline]
            fn $assign_method(&mut self, rhs: FieldElement) {
                *self = $trait::$method(*self, rhs);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign, add_unchecked);
binop!(Sub, sub, SubAssign, sub_assign, sub_unchecked);
binop!(Mul, mul, MulAssign, mul_assign, mul_unchecked);

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        FieldElement {
            value: if self.value == 0 { 0 } else { self.p - self.value },
            p: self.p,
        }
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Deterministic Miller-Rabin. The first twelve primes as witnesses are
/// sufficient for every `n < 3.3 * 10^24`, which covers `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }

    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;

    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
