//! Exact arithmetic over prime fields `F_l` and small extensions `F_q`,
//! plus the dense linear algebra the rest of the crate is built on.
//!
//! Everything here works over the prime field itself. Quantities that would
//! need an algebraic closure (non-split characters, say) are out of reach and
//! are flagged by the callers that could produce them.

mod fq;
mod fqmat;
mod matrix;
mod poly;

pub use fqmat::{transpose as fq_transpose, FqMat};
pub use fq::{FqElem, FqField, FqScalar};
pub use matrix::{minimal_monic_relation, FpMatrix};
pub use poly::FpPoly;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GfpError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("no monic relation of degree <= {0}")]
    NoRelationWithinBound(usize),
    #[error("no built-in modulus for q = {0}; supply one")]
    UnknownFieldSize(u32),
    #[error("modulus polynomial is not irreducible")]
    Reducible,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, alpha)` with `q = p^alpha`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut m, mut a) = (q, 0);
    while m % p == 0 {
        m /= p;
        a += 1;
    }
    (m == 1).then_some((p, a))
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The prime field `F_p`. Elements are plain `u32` residues in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, GfpError> {
        if is_prime(p) {
            Ok(Self { p })
        } else {
            Err(GfpError::NotPrime(p))
        }
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Inverse of a nonzero element.
    ///
    /// Panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, (self.p - 2) as u64)
    }

    pub fn elements(self) -> impl Iterator<Item = u32> {
        0..self.p
    }

    pub fn scalar(self, v: i64) -> FpScalar {
        FpScalar {
            value: self.reduce(v),
            modulus: self.p,
        }
    }
}

/// A single residue together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpScalar {
    pub value: u32,
    pub modulus: u32,
}

impl FpScalar {
    pub fn field(self) -> PrimeField {
        PrimeField { p: self.modulus }
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| Self {
            value: self.field().inv(self.value),
            modulus: self.modulus,
        })
    }
}

impl Add for FpScalar {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        assert_eq!(self.modulus, o.modulus);
        Self {
            value: self.field().add(self.value, o.value),
            modulus: self.modulus,
        }
    }
}

impl Sub for FpScalar {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        assert_eq!(self.modulus, o.modulus);
        Self {
            value: self.field().sub(self.value, o.value),
            modulus: self.modulus,
        }
    }
}

impl Mul for FpScalar {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        assert_eq!(self.modulus, o.modulus);
        Self {
            value: self.field().mul(self.value, o.value),
            modulus: self.modulus,
        }
    }
}

impl Neg for FpScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            value: self.field().neg(self.value),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
