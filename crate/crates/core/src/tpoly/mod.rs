//! The twisted polynomial ring `R[T]^τ`, where `T^a ∗ T^b` equals
//! `τT^{a+b} + T^{a+b+1}` when `a` and `b` are both odd and `T^{a+b}` otherwise.

use crate::gfp::{FpMatrix, FpPoly, PrimeField};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TpolyError {
    #[error("twist parameters differ: {0} vs {1}")]
    TauMismatch(u32, u32),
    #[error("twist parameter must be nonzero")]
    ZeroTau,
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TwistedPoly {
    #[serde(skip)]
    field: PrimeField,
    tau: u32,
    coeffs: Vec<u32>,
}

impl fmt::Debug for TwistedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TwistedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let mono = match i {
                    0 => String::new(),
                    1 => "T".to_string(),
                    _ => format!("T^{i}"),
                };
                match (c, i) {
                    (_, 0) => c.to_string(),
                    (1, _) => mono,
                    _ => format!("{c}·{mono}"),
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl TwistedPoly {
    pub fn new(field: PrimeField, tau: u32, mut coeffs: Vec<u32>) -> Result<Self, TpolyError> {
        if field.reduce(tau as i64) == 0 {
            return Err(TpolyError::ZeroTau);
        }
        coeffs.iter_mut().for_each(|c| *c %= field.p());
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Ok(Self {
            field,
            tau: tau % field.p(),
            coeffs,
        })
    }

    fn with(&self, coeffs: Vec<u32>) -> Self {
        Self::new(self.field, self.tau, coeffs).unwrap()
    }

    pub fn monomial(field: PrimeField, tau: u32, c: u32, d: usize) -> Result<Self, TpolyError> {
        let mut v = vec![0; d + 1];
        v[d] = c;
        Self::new(field, tau, v)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn tau(&self) -> u32 {
        self.tau
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        self.with((0..n).map(|i| self.field.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        self.with((0..n).map(|i| self.field.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn scale(&self, s: u32) -> Self {
        self.with(self.coeffs.iter().map(|&c| self.field.mul(c, s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Result<Self, TpolyError> {
        if self.tau != o.tau {
            return Err(TpolyError::TauMismatch(self.tau, o.tau));
        }
        let f = self.field;
        let mut out = vec![0; self.coeffs.len() + o.coeffs.len() + 1];
        for (a, &x) in self.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (b, &y) in o.coeffs.iter().enumerate() {
                let c = f.mul(x, y);
                if a % 2 == 1 && b % 2 == 1 {
                    out[a + b] = f.add(out[a + b], f.mul(self.tau, c));
                    out[a + b + 1] = f.add(out[a + b + 1], c);
                } else {
                    out[a + b] = f.add(out[a + b], c);
                }
            }
        }
        Ok(self.with(out))
    }

    /// Splits into the even-degree and odd-degree parts as ordinary
    /// polynomials in the same variable.
    pub fn parity_parts(&self) -> (FpPoly, FpPoly) {
        let pick = |par: usize| {
            let v = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| if i % 2 == par { c } else { 0 })
                .collect();
            FpPoly::new(self.field, v)
        };
        (pick(0), pick(1))
    }
}

/// A residue class of `R[T]^τ` modulo the ideal generated by a monic modulus,
/// represented by its normal form of degree below the modulus degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientElement {
    pub rep: TwistedPoly,
    pub modulus: TwistedPoly,
}

fn ideal_generators(modulus: &TwistedPoly, count: usize) -> Vec<TwistedPoly> {
    (0..count)
        .map(|i| {
            TwistedPoly::monomial(modulus.field, modulus.tau, 1, i)
                .unwrap()
                .mul(modulus)
                .unwrap()
        })
        .collect()
}

/// Normal form of `a` modulo the ideal `(modulus)`, obtained by linear
/// elimination against `T^i ∗ modulus`.
pub fn tp_reduce(a: &TwistedPoly, modulus: &TwistedPoly) -> QuotientElement {
    let d = modulus.degree().expect("modulus must be nonzero");
    assert!(d >= 1 && modulus.coeff(d) == 1, "modulus must be monic of positive degree");
    let f = a.field;
    let top = a.degree().unwrap_or(0);
    if a.degree().map_or(true, |n| n < d) {
        return QuotientElement {
            rep: a.clone(),
            modulus: modulus.clone(),
        };
    }
    for extra in 0..4 {
        let gens = ideal_generators(modulus, top + 1 + extra);
        let len = gens.iter().map(|g| g.coeffs.len()).max().unwrap().max(top + 1);
        let sys = FpMatrix::from_fn(f, len - d, gens.len(), |r, c| gens[c].coeff(r + d) as i64);
        let target: Vec<u32> = (d..len).map(|i| a.coeff(i)).collect();
        if let Some(c) = sys.solve(&target) {
            let mut rep = a.clone();
            for (g, &ci) in gens.iter().zip(&c) {
                rep = rep.sub(&g.scale(ci));
            }
            assert!(rep.degree().map_or(true, |n| n < d));
            return QuotientElement {
                rep,
                modulus: modulus.clone(),
            };
        }
    }
    panic!("no normal form for {a} modulo {modulus}");
}

/// Whether `1, T, …, T^{d-1}` stay independent modulo the ideal inside the
/// window of degrees below `window`.
pub fn quotient_basis_check(modulus: &TwistedPoly, window: usize) -> bool {
    let d = modulus.degree().unwrap();
    let gens = ideal_generators(modulus, window.saturating_sub(d));
    let len = window + 1;
    let f = modulus.field;
    let full = FpMatrix::from_fn(f, len, gens.len(), |r, c| gens[c].coeff(r) as i64);
    let high = FpMatrix::from_fn(f, len - d, gens.len(), |r, c| gens[c].coeff(r + d) as i64);
    full.rank() == high.rank()
}

impl QuotientElement {
    pub fn mul(&self, o: &Self) -> Self {
        tp_reduce(&self.rep.mul(&o.rep).unwrap(), &self.modulus)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            rep: self.rep.add(&o.rep),
            modulus: self.modulus.clone(),
        }
    }
}

/// `num / (X + τ)^den` in the localisation `R[X]_(X+τ)`.
#[derive(Debug, Clone)]
pub struct LocalFraction {
    pub num: FpPoly,
    pub den: u32,
    tau: u32,
}

impl LocalFraction {
    fn base(&self) -> FpPoly {
        FpPoly::new(self.num.field(), vec![self.tau, 1])
    }

    fn normalize(mut self) -> Self {
        let b = self.base();
        if self.num.is_zero() {
            self.den = 0;
        }
        while self.den > 0 {
            let (qt, r) = self.num.divrem(&b);
            if !r.is_zero() {
                break;
            }
            self.num = qt;
            self.den -= 1;
        }
        self
    }

    fn lift(&self, den: u32) -> FpPoly {
        let b = self.base();
        (self.den..den).fold(self.num.clone(), |acc, _| acc.mul(&b))
    }

    pub fn add(&self, o: &Self) -> Self {
        let den = self.den.max(o.den);
        Self {
            num: self.lift(den).add(&o.lift(den)),
            den,
            tau: self.tau,
        }
        .normalize()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            num: self.num.mul(&o.num),
            den: self.den + o.den,
            tau: self.tau,
        }
        .normalize()
    }
}

impl PartialEq for LocalFraction {
    fn eq(&self, o: &Self) -> bool {
        let den = self.den.max(o.den);
        self.lift(den) == o.lift(den)
    }
}

/// The embedding `T^{2i} ↦ X^{2i}/(X+τ)^i`, `T^{2i+1} ↦ X^{2i+1}/(X+τ)^i`.
pub fn tp_localize(a: &TwistedPoly) -> LocalFraction {
    let f = a.field;
    let zero = LocalFraction {
        num: FpPoly::zero(f),
        den: 0,
        tau: a.tau,
    };
    a.coeffs.iter().enumerate().fold(zero, |acc, (n, &c)| {
        acc.add(&LocalFraction {
            num: FpPoly::monomial(f, c, n),
            den: (n / 2) as u32,
            tau: a.tau,
        })
    })
}
