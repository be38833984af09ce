//! Coefficient rings and fields.
//!
//! Chains and sparse matrices are generic over [`Scalar`]; elimination runs
//! against a [`FieldOps`] context so that the same column-reduction code
//! serves exact rationals and word-sized prime fields whose modulus is only
//! known at runtime.

use std::fmt::Debug;
use std::marker::PhantomData;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, One, Zero};

/// A commutative ring usable as a chain coefficient.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + FromPrimitive
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_int(v: i64) -> Self {
        Self::from_i64(v).expect("every scalar type embeds the integers")
    }
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + FromPrimitive
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Send
        + Sync
        + 'static
{
}

/// Marker for scalars with exact division. Implemented explicitly so that
/// machine integers (whose `Div` truncates) never qualify.
pub trait Field: Scalar + Div<Output = Self> {}

impl Field for BigRational {}
impl Field for Ratio<i64> {}
impl Field for Ratio<i128> {}

/// Reads a rational from `"p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Arithmetic context for Gaussian elimination.
pub trait FieldOps: Sync {
    type Elem: Clone + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn from_int(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; callers never pass zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

/// Exact arithmetic in a [`Field`] type.
pub struct Exact<F>(PhantomData<F>);

impl<F> Exact<F> {
    pub const fn new() -> Self {
        Exact(PhantomData)
    }
}

impl<F> Default for Exact<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> FieldOps for Exact<F> {
    type Elem = F;

    fn zero(&self) -> F {
        F::zero()
    }
    fn is_zero(&self, a: &F) -> bool {
        a.is_zero()
    }
    fn from_int(&self, v: i64) -> F {
        F::from_int(v)
    }
    fn add(&self, a: &F, b: &F) -> F {
        a.clone() + b.clone()
    }
    fn sub(&self, a: &F, b: &F) -> F {
        a.clone() - b.clone()
    }
    fn mul(&self, a: &F, b: &F) -> F {
        a.clone() * b.clone()
    }
    fn inv(&self, a: &F) -> F {
        F::one() / a.clone()
    }
}

/// The prime field Z/pZ for a word-sized prime `p < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    /// Panics if `p` is not prime or too large for the u128 products used.
    pub fn new(p: u64) -> Self {
        assert!(p < (1 << 63) && is_prime_u64(p), "{p} is not a usable prime");
        PrimeField { modulus: p }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul_mod(acc, base, self.modulus);
            }
            base = mul_mod(base, base, self.modulus);
            exp >>= 1;
        }
        acc
    }
}

impl FieldOps for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_int(&self, v: i64) -> u64 {
        v.rem_euclid(self.modulus as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.modulus)
    }
    fn inv(&self, a: &u64) -> u64 {
        self.pow(*a, self.modulus - 2)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}
