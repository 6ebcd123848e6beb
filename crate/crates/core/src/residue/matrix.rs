use super::ResidueError;
use crate::gfp::{FqElem, FqField, FqMat};
use crate::weyl::WeylElement;

pub const DEFAULT_WINDOW: usize = 8;

/// A square matrix over `F_q((ϖ))` whose entries are Laurent polynomials
/// supported in the valuation window `[vmin, vmin + width)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedMatrix {
    n: usize,
    vmin: i32,
    width: usize,
    /// `coeffs[(r * n + c) * width + (v - vmin)]`
    coeffs: Vec<FqElem>,
}

impl TruncatedMatrix {
    pub fn zeros(n: usize, vmin: i32, width: usize) -> Self {
        Self {
            n,
            vmin,
            width,
            coeffs: vec![0; n * n * width],
        }
    }

    /// Centered window of the given width.
    pub fn centered_zeros(n: usize, width: usize) -> Self {
        Self::zeros(n, -((width / 2) as i32), width)
    }

    pub fn identity(n: usize, vmin: i32, width: usize) -> Result<Self, ResidueError> {
        let mut m = Self::zeros(n, vmin, width);
        for i in 0..n {
            m.set(i, i, 0, 1)?;
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> (i32, usize) {
        (self.vmin, self.width)
    }

    fn slot(&self, v: i32) -> Option<usize> {
        let off = v - self.vmin;
        (off >= 0 && (off as usize) < self.width).then_some(off as usize)
    }

    /// Coefficient of `ϖ^v` in entry `(r, c)`; zero outside the window.
    pub fn get(&self, r: usize, c: usize, v: i32) -> FqElem {
        match self.slot(v) {
            Some(s) => self.coeffs[(r * self.n + c) * self.width + s],
            None => 0,
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: i32, x: FqElem) -> Result<(), ResidueError> {
        let s = self.slot(v).ok_or(ResidueError::WindowExhausted(v))?;
        self.coeffs[(r * self.n + c) * self.width + s] = x;
        Ok(())
    }

    /// Smallest valuation among the entries of the block `rows × cols`
    /// (`None` if the block is zero).
    pub fn block_valuation(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Option<i32> {
        let mut best: Option<i32> = None;
        for r in rows {
            for c in cols.clone() {
                let base = (r * self.n + c) * self.width;
                if let Some(s) = self.coeffs[base..base + self.width].iter().position(|&x| x != 0) {
                    let v = self.vmin + s as i32;
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
            }
        }
        best
    }

    /// The coefficients of `ϖ^v` over a block, as a matrix over `F_q`.
    pub fn block_coefficient(&self, r0: usize, c0: usize, size: usize, v: i32) -> FqMat {
        let mut m = FqMat::zeros(size, size);
        for r in 0..size {
            for c in 0..size {
                m.set(r, c, self.get(r0 + r, c0 + c, v));
            }
        }
        m
    }

    /// Writes `ϖ^v · x` into the block at `(r0, c0)`, adding to what is there.
    pub fn add_block(&mut self, r0: usize, c0: usize, v: i32, x: &FqMat, f: &FqField) -> Result<(), ResidueError> {
        for r in 0..x.rows {
            for c in 0..x.cols {
                let cur = self.get(r0 + r, c0 + c, v);
                let val = f.add(cur, x.get(r, c));
                if val != cur {
                    self.set(r0 + r, c0 + c, v, val)?;
                }
            }
        }
        Ok(())
    }

    pub fn mul(&self, o: &Self, f: &FqField) -> Result<Self, ResidueError> {
        assert_eq!(self.n, o.n, "size mismatch");
        let n = self.n;
        let mut out = Self::zeros(n, self.vmin, self.width);
        for r in 0..n {
            for m in 0..n {
                let ab = (r * n + m) * self.width;
                let a = &self.coeffs[ab..ab + self.width];
                if a.iter().all(|&x| x == 0) {
                    continue;
                }
                for c in 0..n {
                    let bb = (m * n + c) * o.width;
                    let b = &o.coeffs[bb..bb + o.width];
                    for (i, &x) in a.iter().enumerate() {
                        if x == 0 {
                            continue;
                        }
                        for (j, &y) in b.iter().enumerate() {
                            if y == 0 {
                                continue;
                            }
                            let v = self.vmin + i as i32 + o.vmin + j as i32;
                            let s = out.slot(v).ok_or(ResidueError::WindowExhausted(v))?;
                            let idx = (r * n + c) * out.width + s;
                            out.coeffs[idx] = f.add(out.coeffs[idx], f.mul(x, y));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self, f: &FqField) -> Self {
        assert_eq!((self.n, self.vmin, self.width), (o.n, o.vmin, o.width), "window mismatch");
        Self {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(&a, &b)| f.sub(a, b)).collect(),
            ..self.clone()
        }
    }

    /// Inverse of `1 + N` with `N² = 0`, namely `1 - N`.
    pub fn unipotent_inverse(&self, f: &FqField) -> Result<Self, ResidueError> {
        let id = Self::identity(self.n, self.vmin, self.width)?;
        let nil = self.sub(&id, f);
        if !nil.mul(&nil, f)?.coeffs.iter().all(|&x| x == 0) {
            return Err(ResidueError::NotUnipotent);
        }
        Ok(id.sub(&nil, f))
    }

    /// The monomial matrix `diag(ϖ^x, ϖ^y) · w^flip` with `k × k` blocks.
    pub fn from_weyl(eta: &WeylElement, k: usize, vmin: i32, width: usize) -> Result<Self, ResidueError> {
        let mut m = Self::zeros(2 * k, vmin, width);
        for i in 0..k {
            if eta.flip {
                m.set(i, k + i, eta.x, 1)?;
                m.set(k + i, i, eta.y, 1)?;
            } else {
                m.set(i, i, eta.x, 1)?;
                m.set(k + i, k + i, eta.y, 1)?;
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_matrices_multiply_like_the_group() {
        let f = FqField::new(3).unwrap();
        let elems: Vec<WeylElement> = (-1..=1)
            .flat_map(|x| (-1..=1).flat_map(move |y| [false, true].map(|fl| WeylElement::new(x, y, fl))))
            .collect();
        for k in [1, 2] {
            for a in &elems {
                for b in &elems {
                    let ma = TruncatedMatrix::from_weyl(a, k, -4, 8).unwrap();
                    let mb = TruncatedMatrix::from_weyl(b, k, -4, 8).unwrap();
                    let prod = ma.mul(&mb, &f).unwrap();
                    assert_eq!(prod, TruncatedMatrix::from_weyl(&a.mul(b), k, -4, 8).unwrap());
                }
            }
        }
    }

    #[test]
    fn window_overflow_is_reported() {
        let f = FqField::new(2).unwrap();
        let t2 = TruncatedMatrix::from_weyl(&WeylElement::new(3, 3, false), 1, -4, 8).unwrap();
        assert_eq!(t2.mul(&t2, &f), Err(ResidueError::WindowExhausted(6)));
    }

    #[test]
    fn unipotent_inverse() {
        let f = FqField::new(5).unwrap();
        let mut m = TruncatedMatrix::identity(2, -4, 8).unwrap();
        m.set(0, 1, 0, 3).unwrap();
        m.set(0, 1, 1, 2).unwrap();
        let inv = m.unipotent_inverse(&f).unwrap();
        assert_eq!(m.mul(&inv, &f).unwrap(), TruncatedMatrix::identity(2, -4, 8).unwrap());
        let w = TruncatedMatrix::from_weyl(&WeylElement::w(), 1, -4, 8).unwrap();
        assert_eq!(w.unipotent_inverse(&f), Err(ResidueError::NotUnipotent));
    }
}
