use super::{GfpError, PrimeField};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} over F_{}", self.rows, self.cols, self.field.p())?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FpMatrix {
    pub fn new(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(rows * cols, data.len());
        debug_assert!(data.iter().all(|&v| v < field.p()));
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> i64,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(field.reduce(f(r, c)));
            }
        }
        Self::new(field, rows, cols, data)
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self::new(field, rows, cols, vec![0; rows * cols])
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        Self::scalar(field, n, 1)
    }

    pub fn scalar(field: PrimeField, n: usize, s: u32) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = s % field.p();
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        assert_eq!(self.field, o.field);
        let p = self.field.p() as u64;
        let mut acc = vec![0u64; self.rows * o.cols];
        // entries are < 2^32 / 2 for every field we use, so we can defer the
        // reduction for a while
        let flush = (u64::MAX / (p * p)).max(1) as usize;
        for r in 0..self.rows {
            let out = &mut acc[r * o.cols..(r + 1) * o.cols];
            let mut pending = 0;
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &o.data[k * o.cols..(k + 1) * o.cols];
                for (x, &b) in out.iter_mut().zip(orow) {
                    *x += a * b as u64;
                }
                pending += 1;
                if pending + 1 >= flush {
                    out.iter_mut().for_each(|x| *x %= p);
                    pending = 0;
                }
            }
        }
        let data = acc.into_iter().map(|x| (x % p) as u32).collect();
        Self::new(self.field, self.rows, o.cols, data)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let s: u64 = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| (a as u64 * b as u64) % self.field.p() as u64)
                    .sum();
                (s % self.field.p() as u64) as u32
            })
            .collect()
    }

    fn zip_with(&self, o: &Self, f: impl Fn(u32, u32) -> u32) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f(a, b)).collect();
        Self::new(self.field, self.rows, self.cols, data)
    }

    pub fn add(&self, o: &Self) -> Self {
        let f = self.field;
        self.zip_with(o, |a, b| f.add(a, b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        let f = self.field;
        self.zip_with(o, |a, b| f.sub(a, b))
    }

    pub fn scale(&self, s: u32) -> Self {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, s)).collect();
        Self::new(f, self.rows, self.cols, data)
    }

    pub fn neg(&self) -> Self {
        self.scale(self.field.neg(1))
    }

    /// `self += s * o`
    pub fn axpy(&mut self, s: u32, o: &Self) {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let f = self.field;
        if s == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&o.data) {
            *a = f.add(*a, f.mul(s, b));
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |r, c| self.get(c, r) as i64)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &Self) -> Self {
        let f = self.field;
        Self::from_fn(f, self.rows * o.rows, self.cols * o.cols, |r, c| {
            f.mul(self.get(r / o.rows, c / o.cols), o.get(r % o.rows, c % o.cols)) as i64
        })
    }

    /// Block diagonal `diag(self, o)`.
    pub fn direct_sum(&self, o: &Self) -> Self {
        let mut m = Self::zeros(self.field, self.rows + o.rows, self.cols + o.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, o);
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self.set(r0 + r, c0 + c, b.get(r, c));
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(self.field, rows, cols, |r, c| self.get(r0 + r, c0 + c) as i64)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = f.inv(m.get(row, col));
            for c in col..m.cols {
                let v = f.mul(m.get(row, c), inv);
                m.data[row * m.cols + c] = v;
            }
            let prow: Vec<u32> = m.row(row).to_vec();
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                for c in col..m.cols {
                    let v = f.add(m.data[r * m.cols + c], f.mul(nf, prow[c]));
                    m.data[r * m.cols + c] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{ v : self * v = 0 }`.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(i, fc));
                }
                v
            })
            .collect()
    }

    /// Some solution of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.field, self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (r, &v) in b.iter().enumerate() {
            aug.set(r, self.cols, v);
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = red.get(i, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(self.field, n));
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(red.block(0, n, n, n))
    }

    /// Row-major entries as a vector.
    pub fn to_vec(&self) -> Vec<u32> {
        self.data.clone()
    }

    pub fn from_column(field: PrimeField, v: &[u32]) -> Self {
        Self::new(field, v.len(), 1, v.to_vec())
    }
}

/// Smallest monic relation `T^d + r_{d-1} T^{d-1} + ... + r_0` that holds
/// separately on the even and odd powers of an operator.
///
/// `even[i]` is the operator's `2i`-th power and `odd[i]` its `(2i+1)`-th power.
/// Returns `(r_0, ..., r_{d-1})`.
pub fn minimal_monic_relation(
    even: &[FpMatrix],
    odd: &[FpMatrix],
) -> Result<Vec<u32>, GfpError> {
    let power = |i: usize| -> Option<&FpMatrix> {
        if i % 2 == 0 {
            even.get(i / 2)
        } else {
            odd.get(i / 2)
        }
    };
    let mut bound = 0;
    while power(bound + 1).is_some() {
        bound += 1;
    }
    let Some(first) = even.first().or(odd.first()) else {
        return Err(GfpError::NoRelationWithinBound(0));
    };
    let field = first.field();
    let cells = first.rows() * first.cols();
    for d in 1..=bound {
        // unknowns r_0..r_{d-1}; equations: one block per parity
        let mut sys = FpMatrix::zeros(field, 2 * cells, d);
        let mut rhs = vec![0u32; 2 * cells];
        for i in 0..=d {
            let m = power(i).expect("power within bound");
            let off = (i % 2) * cells;
            for (cell, &v) in m.data().iter().enumerate() {
                if i == d {
                    rhs[off + cell] = field.neg(v);
                } else {
                    sys.set(off + cell, i, v);
                }
            }
        }
        if let Some(sol) = sys.solve(&rhs) {
            debug_assert!(sys.nullspace().is_empty(), "minimal relation must be unique");
            return Ok(sol);
        }
    }
    Err(GfpError::NoRelationWithinBound(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn nullspace_of_zero() {
        let m = FpMatrix::zeros(f(3), 1, 1);
        assert_eq!(m.nullspace(), vec![vec![1]]);
    }

    #[test]
    fn nullspace_of_identity() {
        assert!(FpMatrix::identity(f(5), 2).nullspace().is_empty());
    }

    #[test]
    fn nullspace_rank_one() {
        let m = FpMatrix::from_fn(f(3), 2, 2, |r, _| r as i64 + 1);
        assert_eq!(m.nullspace(), vec![vec![2, 1]]);
        // (1,2) spans the same line: 2*(2,1) = (1,2)
        assert_eq!(m.mul_vec(&[1, 2]), vec![0, 0]);
    }

    fn powers(t: &FpMatrix, n: usize) -> (Vec<FpMatrix>, Vec<FpMatrix>) {
        let all: Vec<FpMatrix> = (0..2 * n).map(|i| t.pow(i as u64)).collect();
        (
            all.iter().step_by(2).cloned().collect(),
            all.iter().skip(1).step_by(2).cloned().collect(),
        )
    }

    #[test]
    fn relation_for_zero_operator() {
        let (e, o) = powers(&FpMatrix::zeros(f(3), 2, 2), 3);
        assert_eq!(minimal_monic_relation(&e, &o).unwrap(), vec![0]);
    }

    #[test]
    fn relation_for_scalar_three_mod_five() {
        let (e, o) = powers(&FpMatrix::scalar(f(5), 1, 3), 3);
        assert_eq!(minimal_monic_relation(&e, &o).unwrap(), vec![1, 0]);
    }

    #[test]
    fn relation_for_square_zero() {
        let n = FpMatrix::from_fn(f(3), 2, 2, |r, c| (r == 0 && c == 1) as i64);
        let (e, o) = powers(&n, 3);
        assert_eq!(minimal_monic_relation(&e, &o).unwrap(), vec![0, 0]);
    }

    #[test]
    fn relation_bound_exhausted() {
        let (e, o) = powers(&FpMatrix::scalar(f(5), 1, 3), 1);
        assert_eq!(
            minimal_monic_relation(&e, &o),
            Err(GfpError::NoRelationWithinBound(1))
        );
    }

    proptest! {
        #[test]
        fn rank_nullity(p in prop::sample::select(vec![2u32, 3, 5, 7]),
                        rows in 1usize..6, cols in 1usize..6,
                        seed in prop::collection::vec(0i64..100, 36)) {
            let m = FpMatrix::from_fn(f(p), rows, cols, |r, c| seed[r * 6 + c]);
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.len(), cols);
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
            let basis = FpMatrix::from_fn(f(p), ns.len().max(1), cols, |r, c| {
                ns.get(r).map_or(0, |v| v[c] as i64)
            });
            prop_assert_eq!(basis.rank(), ns.len());
        }

        #[test]
        fn relation_substitutes_to_zero(p in prop::sample::select(vec![2u32, 3, 5]),
                                        seed in prop::collection::vec(0i64..100, 9)) {
            let t = FpMatrix::from_fn(f(p), 3, 3, |r, c| seed[r * 3 + c]);
            let (e, o) = powers(&t, 5);
            let r = minimal_monic_relation(&e, &o).unwrap();
            let d = r.len();
            for parity in 0..2 {
                let mut acc = FpMatrix::zeros(f(p), 3, 3);
                for i in (parity..=d).step_by(2) {
                    let c = if i == d { 1 } else { r[i] };
                    acc.axpy(c, &t.pow(i as u64));
                }
                prop_assert!(acc.is_zero());
            }
        }
    }
}
