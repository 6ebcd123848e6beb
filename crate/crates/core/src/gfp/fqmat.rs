use super::{FqElem, FqField};

/// Small dense square-or-rectangular matrix over `F_q`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FqElem>,
}

impl FqMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<FqElem>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FqElem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FqElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, o: &Self, f: &FqField) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let v = f.add(out.get(i, j), f.mul(a, o.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self, f: &FqField) -> Self {
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect();
        Self::from_data(self.rows, self.cols, data)
    }

    pub fn sub(&self, o: &Self, f: &FqField) -> Self {
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Self::from_data(self.rows, self.cols, data)
    }

    pub fn neg(&self, f: &FqField) -> Self {
        let data = self.data.iter().map(|&a| f.neg(a)).collect();
        Self::from_data(self.rows, self.cols, data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&a| a == 0)
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j));
            }
        }
    }

    /// Assembles `(a b; c d)` from four equally sized blocks.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let k = a.rows;
        let mut m = Self::zeros(2 * k, 2 * k);
        m.set_block(0, 0, a);
        m.set_block(0, k, b);
        m.set_block(k, 0, c);
        m.set_block(k, k, d);
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self, f: &FqField) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(r * m.cols + j, p * m.cols + j);
            }
            let inv = f.inv(m.get(r, c));
            for j in 0..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                let s = m.get(i, c);
                if i != r && s != 0 {
                    for j in 0..m.cols {
                        let v = f.sub(m.get(i, j), f.mul(s, m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, f: &FqField) -> usize {
        self.rref(f).1.len()
    }

    pub fn is_invertible(&self, f: &FqField) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }

    pub fn inverse(&self, f: &FqField) -> Option<Self> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let (r, pivots) = aug.rref(f);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    /// Canonical key of the column span of the first `k` columns.
    pub fn column_span_key(&self, k: usize, f: &FqField) -> Self {
        let cols = self.block(0, 0, self.rows, k);
        let t = transpose(&cols);
        t.rref(f).0
    }

    /// Every invertible `n×n` matrix over `F_q`, in lexicographic order.
    pub fn enumerate_gl(n: usize, f: &FqField) -> Vec<Self> {
        let q = f.q() as usize;
        let total = q.pow((n * n) as u32);
        let mut out = Vec::new();
        for code in 0..total {
            let mut c = code;
            let mut data = vec![0; n * n];
            for e in data.iter_mut().rev() {
                *e = (c % q) as FqElem;
                c /= q;
            }
            let m = Self::from_data(n, n, data);
            if m.is_invertible(f) {
                out.push(m);
            }
        }
        out
    }

    /// Every `rows×cols` matrix over `F_q`.
    pub fn enumerate_all(rows: usize, cols: usize, f: &FqField) -> Vec<Self> {
        let q = f.q() as usize;
        let total = q.pow((rows * cols) as u32);
        (0..total)
            .map(|code| {
                let mut c = code;
                let mut data = vec![0; rows * cols];
                for e in data.iter_mut().rev() {
                    *e = (c % q) as FqElem;
                    c /= q;
                }
                Self::from_data(rows, cols, data)
            })
            .collect()
    }
}

pub fn transpose(m: &FqMat) -> FqMat {
    let mut t = FqMat::zeros(m.cols, m.rows);
    for i in 0..m.rows {
        for j in 0..m.cols {
            t.set(j, i, m.get(i, j));
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_linear_group_orders() {
        let f2 = FqField::new(2).unwrap();
        let f3 = FqField::new(3).unwrap();
        let f4 = FqField::new(4).unwrap();
        assert_eq!(FqMat::enumerate_gl(2, &f2).len(), 6);
        assert_eq!(FqMat::enumerate_gl(2, &f3).len(), 48);
        assert_eq!(FqMat::enumerate_gl(1, &f4).len(), 3);
        assert_eq!(FqMat::enumerate_gl(2, &f4).len(), 180);
    }

    #[test]
    fn inverse_round_trip() {
        let f = FqField::new(4).unwrap();
        for g in FqMat::enumerate_gl(2, &f) {
            let gi = g.inverse(&f).unwrap();
            assert_eq!(g.mul(&gi, &f), FqMat::identity(2));
        }
        let singular = FqMat::from_data(2, 2, vec![1, 1, 1, 1]);
        assert!(singular.inverse(&f).is_none());
    }
}
