use super::{FpMatrix, PrimeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;

/// Dense univariate polynomial over `F_p`, lowest coefficient first, no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly{:?} mod {}", self.coeffs, self.field.p())
    }
}

impl FpPoly {
    pub fn new(field: PrimeField, mut coeffs: Vec<u32>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= field.p();
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn zero(field: PrimeField) -> Self {
        Self::new(field, vec![])
    }

    pub fn one(field: PrimeField) -> Self {
        Self::new(field, vec![1])
    }

    pub fn x(field: PrimeField) -> Self {
        Self::new(field, vec![0, 1])
    }

    pub fn monomial(field: PrimeField, c: u32, d: usize) -> Self {
        let mut v = vec![0; d + 1];
        v[d] = c;
        Self::new(field, v)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let f = self.field;
        Self::new(f, (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let f = self.field;
        Self::new(f, (0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn scale(&self, s: u32) -> Self {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.field);
        }
        let f = self.field;
        let mut out = vec![0u32; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(f, out)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let f = self.field;
        let dd = d.degree().expect("division by zero polynomial");
        let inv = f.inv(d.lead());
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0u32; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = f.mul(*rem.last().unwrap(), inv);
            let shift = top - dd;
            quo[shift] = c;
            for (j, &b) in d.coeffs.iter().enumerate() {
                rem[shift + j] = f.sub(rem[shift + j], f.mul(c, b));
            }
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        (Self::new(f, quo), Self::new(f, rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lead()))
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*o = g = gcd(self, o)`, `g` monic.
    pub fn ext_gcd(&self, o: &Self) -> (Self, Self, Self) {
        let f = self.field;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = f.inv(r0.lead());
        (r0.scale(inv), s0.scale(inv), t0.scale(inv))
    }

    pub fn powmod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        Self::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, (i as u64 % f.p() as u64) as u32))
                .collect(),
        )
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Evaluates at a square matrix (Horner).
    pub fn eval_matrix(&self, m: &FpMatrix) -> FpMatrix {
        let n = m.rows();
        let mut acc = FpMatrix::zeros(self.field, n, n);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(m);
            acc.axpy(c, &FpMatrix::identity(self.field, n));
        }
        acc
    }

    /// Distinct monic irreducible factors with multiplicities, sorted.
    pub fn factor(&self) -> Vec<(FpPoly, usize)> {
        assert!(!self.is_zero(), "cannot factor zero");
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
        let mut distinct = Vec::new();
        self.distinct_irreducibles(&mut rng, &mut distinct);
        distinct.sort_by(|a, b| (a.degree(), &a.coeffs).cmp(&(b.degree(), &b.coeffs)));
        distinct.dedup();
        distinct
            .into_iter()
            .map(|g| {
                let mut m = 0;
                let mut cur = self.clone();
                loop {
                    let (q, r) = cur.divrem(&g);
                    if !r.is_zero() {
                        break;
                    }
                    cur = q;
                    m += 1;
                }
                (g, m)
            })
            .collect()
    }

    fn distinct_irreducibles(&self, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
        if self.degree().unwrap_or(0) == 0 {
            return;
        }
        let d = self.derivative();
        if d.is_zero() {
            // f(x) = g(x^p) = g(x)^p over the prime field
            let p = self.field.p() as usize;
            let g = Self::new(self.field, self.coeffs.iter().step_by(p).copied().collect());
            g.distinct_irreducibles(rng, out);
            return;
        }
        let g = self.gcd(&d);
        let squarefree = self.divrem(&g).0;
        squarefree.monic().squarefree_factors(rng, out);
        g.distinct_irreducibles(rng, out);
    }

    fn squarefree_factors(&self, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
        let p = self.field.p() as u64;
        let mut f = self.clone();
        let x = Self::x(self.field);
        let mut h = x.clone();
        let mut d = 1;
        while f.degree().unwrap_or(0) >= 2 * d {
            h = h.powmod(p, &f);
            let g = f.gcd(&h.sub(&x));
            if g.degree().unwrap_or(0) > 0 {
                g.equal_degree(d, rng, out);
                f = f.divrem(&g).0;
                h = h.rem(&f);
            }
            d += 1;
        }
        if f.degree().unwrap_or(0) > 0 {
            out.push(f.monic());
        }
    }

    fn equal_degree(&self, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
        let n = self.degree().unwrap();
        if n == d {
            out.push(self.monic());
            return;
        }
        let p = self.field.p() as u64;
        loop {
            let a = Self::new(self.field, (0..n).map(|_| rng.gen_range(0..p as u32)).collect());
            if a.degree().unwrap_or(0) == 0 {
                continue;
            }
            // frobenius orbit a, a^p, ..., a^{p^{d-1}}
            let mut orbit = Vec::with_capacity(d);
            let mut cur = a.rem(self);
            for _ in 0..d {
                orbit.push(cur.clone());
                cur = cur.powmod(p, self);
            }
            let b = if p == 2 {
                orbit.iter().fold(Self::zero(self.field), |acc, t| acc.add(t))
            } else {
                let norm = orbit
                    .iter()
                    .fold(Self::one(self.field), |acc, t| acc.mul(t).rem(self));
                norm.powmod((p - 1) / 2, self).sub(&Self::one(self.field))
            };
            let u = self.gcd(&b);
            let du = u.degree().unwrap_or(0);
            if du > 0 && du < n {
                u.equal_degree(d, rng, out);
                self.divrem(&u).0.equal_degree(d, rng, out);
                return;
            }
        }
    }

    pub fn is_irreducible(&self) -> bool {
        let f = self.factor();
        f.len() == 1 && f[0].1 == 1 && self.degree().unwrap_or(0) > 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn expand(factors: &[(FpPoly, usize)], field: PrimeField) -> FpPoly {
        factors.iter().fold(FpPoly::one(field), |acc, (g, m)| {
            (0..*m).fold(acc, |a, _| a.mul(g))
        })
    }

    #[test]
    fn factors_x_pow_minus_x() {
        for p in [2u32, 3, 5, 7] {
            let f = fp(p);
            for d in 1..=4usize {
                let pd = (p as usize).pow(d as u32);
                let poly = FpPoly::monomial(f, 1, pd).sub(&FpPoly::x(f));
                let fac = poly.factor();
                assert!(fac.iter().all(|(g, m)| *m == 1 && d % g.degree().unwrap() == 0));
                assert_eq!(expand(&fac, f), poly);
            }
        }
    }

    #[test]
    fn factors_with_multiplicity() {
        let f = fp(3);
        // (x+1)^4 (x^2+1)^3 over F_3
        let a = FpPoly::new(f, vec![1, 1]);
        let b = FpPoly::new(f, vec![1, 0, 1]);
        let mut poly = FpPoly::one(f);
        for _ in 0..4 {
            poly = poly.mul(&a);
        }
        for _ in 0..3 {
            poly = poly.mul(&b);
        }
        assert_eq!(poly.factor(), vec![(a, 4), (b, 3)]);
    }

    #[test]
    fn ext_gcd_bezout() {
        let f = fp(5);
        let a = FpPoly::new(f, vec![1, 2, 3, 4]);
        let b = FpPoly::new(f, vec![2, 0, 1]);
        let (g, s, t) = a.ext_gcd(&b);
        assert_eq!(s.mul(&a).add(&t.mul(&b)), g);
        assert!(a.rem(&g).is_zero() && b.rem(&g).is_zero());
    }
}
