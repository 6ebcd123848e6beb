use super::{prime_power, FpPoly, GfpError, PrimeField};
use std::fmt;

/// Element of `F_q`, encoded as the base-`p` integer of its coordinate
/// vector. `0` is zero and `1` is one.
pub type FqElem = u32;

/// The field `F_q = F_p[x]/(m(x))` with precomputed tables.
#[derive(Clone, PartialEq, Eq)]
pub struct FqField {
    p: u32,
    alpha: u32,
    q: u32,
    modpoly: Vec<u32>,
    add: Vec<FqElem>,
    mul: Vec<FqElem>,
    neg: Vec<FqElem>,
    inv: Vec<FqElem>,
}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (modulus {:?})", self.q, self.modpoly)
    }
}

fn builtin_modpoly(q: u32) -> Option<Vec<u32>> {
    let (_, alpha) = prime_power(q)?;
    match (q, alpha) {
        (_, 1) => Some(vec![0, 1]),
        (4, _) => Some(vec![1, 1, 1]),
        (8, _) => Some(vec![1, 1, 0, 1]),
        (9, _) => Some(vec![1, 0, 1]),
        _ => None,
    }
}

impl FqField {
    /// `F_q` from the built-in modulus table (any prime, or q in {4, 8, 9}).
    pub fn new(q: u32) -> Result<Self, GfpError> {
        let modpoly = builtin_modpoly(q).ok_or(GfpError::UnknownFieldSize(q))?;
        Self::with_modulus(q, modpoly)
    }

    /// `F_q` with a caller-supplied monic irreducible modulus of degree alpha.
    pub fn with_modulus(q: u32, modpoly: Vec<u32>) -> Result<Self, GfpError> {
        let (p, alpha) = prime_power(q).ok_or(GfpError::UnknownFieldSize(q))?;
        let fp = PrimeField::new(p)?;
        let m = FpPoly::new(fp, modpoly.clone());
        if m.degree() != Some(alpha as usize) || m.lead() != 1 {
            return Err(GfpError::Reducible);
        }
        if alpha > 1 && !m.is_irreducible() {
            return Err(GfpError::Reducible);
        }
        let n = q as usize;
        let to_poly = |e: u32| -> FpPoly {
            let mut c = Vec::with_capacity(alpha as usize);
            let mut v = e;
            for _ in 0..alpha {
                c.push(v % p);
                v /= p;
            }
            FpPoly::new(fp, c)
        };
        let from_poly = |f: &FpPoly| -> u32 {
            (0..alpha as usize)
                .rev()
                .fold(0, |acc, i| acc * p + f.coeff(i))
        };
        let polys: Vec<FpPoly> = (0..q).map(to_poly).collect();
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = from_poly(&polys[a].add(&polys[b]));
                mul[a * n + b] = from_poly(&polys[a].mul(&polys[b]).rem(&m));
            }
        }
        let neg = (0..n)
            .map(|a| (0..n).find(|&b| add[a * n + b] == 0).unwrap() as u32)
            .collect();
        let inv = (0..n)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    (1..n).find(|&b| mul[a * n + b] == 1).unwrap() as u32
                }
            })
            .collect();
        Ok(Self {
            p,
            alpha,
            q,
            modpoly,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.alpha
    }

    pub fn modpoly(&self) -> &[u32] {
        &self.modpoly
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        self.mul[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    /// Inverse of a nonzero element; panics on zero.
    pub fn inv(&self, a: FqElem) -> FqElem {
        assert!(a != 0, "inverse of zero in F_{}", self.q);
        self.inv[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        0..self.q
    }

    pub fn units(&self) -> impl Iterator<Item = FqElem> {
        1..self.q
    }

    pub fn order(&self, a: FqElem) -> u32 {
        let mut x = a;
        let mut n = 1;
        while x != 1 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Smallest generator of the unit group.
    pub fn primitive_element(&self) -> FqElem {
        self.units().find(|&a| self.order(a) == self.q - 1).unwrap()
    }

    /// The image of an integer.
    pub fn from_int(&self, n: i64) -> FqElem {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn scalar(&self, e: FqElem) -> FqScalar {
        let mut coords = Vec::with_capacity(self.alpha as usize);
        let mut v = e;
        for _ in 0..self.alpha {
            coords.push(v % self.p);
            v /= self.p;
        }
        FqScalar {
            coords,
            modpoly: self.modpoly.clone(),
            p: self.p,
        }
    }
}

/// Coordinate form of an element of `F_q`: a vector over `F_p` reduced modulo
/// an irreducible polynomial. Arithmetic goes through polynomial reduction
/// directly, independent of the tables in [`FqField`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FqScalar {
    pub coords: Vec<u32>,
    pub modpoly: Vec<u32>,
    pub p: u32,
}

impl FqScalar {
    fn poly(&self, v: &[u32]) -> FpPoly {
        FpPoly::new(PrimeField::new(self.p).unwrap(), v.to_vec())
    }

    fn wrap(&self, f: FpPoly) -> Self {
        let n = self.modpoly.len() - 1;
        Self {
            coords: (0..n).map(|i| f.coeff(i)).collect(),
            modpoly: self.modpoly.clone(),
            p: self.p,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.wrap(self.poly(&self.coords).add(&self.poly(&o.coords)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.poly(&self.modpoly);
        self.wrap(self.poly(&self.coords).mul(&self.poly(&o.coords)).rem(&m))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let m = self.poly(&self.modpoly);
        let (g, s, _) = self.poly(&self.coords).ext_gcd(&m);
        debug_assert_eq!(g.degree(), Some(0));
        Some(self.wrap(s.rem(&m)))
    }
}
