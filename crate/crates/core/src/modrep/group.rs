use crate::gfp::{FqField, FqMat};
use std::collections::HashMap;

/// A finite group given by its multiplication table. Index 0 is the identity.
#[derive(Debug, Clone)]
pub struct FiniteGroupTable {
    pub label: String,
    mul: Vec<usize>,
    inv: Vec<usize>,
    order: usize,
    generators: Vec<usize>,
}

impl FiniteGroupTable {
    /// Builds the table from a closure; `identity` is moved to index 0 by the caller.
    pub fn from_mul(label: impl Into<String>, order: usize, mul: impl Fn(usize, usize) -> usize) -> Self {
        let mut table = vec![0; order * order];
        for a in 0..order {
            for b in 0..order {
                table[a * order + b] = mul(a, b);
            }
        }
        let inv = (0..order)
            .map(|a| (0..order).find(|&b| table[a * order + b] == 0).expect("no inverse"))
            .collect();
        let mut g = Self {
            label: label.into(),
            mul: table,
            inv,
            order,
            generators: Vec::new(),
        };
        g.generators = g.find_generators();
        g
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    fn closure(&self, gens: &[usize]) -> usize {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut stack = vec![0];
        let mut count = 1;
        while let Some(a) = stack.pop() {
            for &g in gens {
                let b = self.mul(a, g);
                if !seen[b] {
                    seen[b] = true;
                    count += 1;
                    stack.push(b);
                }
            }
        }
        count
    }

    /// Greedy small generating set.
    fn find_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut size = 1;
        while size < self.order {
            let (best, best_size) = (1..self.order)
                .map(|g| {
                    let mut trial = gens.clone();
                    trial.push(g);
                    (g, self.closure(&trial))
                })
                .max_by_key(|&(g, s)| (s, std::cmp::Reverse(g)))
                .unwrap();
            gens.push(best);
            size = best_size;
        }
        gens
    }

    /// The direct product; the pair `(a, b)` has index `a * |other| + b`.
    pub fn direct_product(&self, other: &Self) -> Self {
        let m = other.order;
        Self::from_mul(
            format!("{} x {}", self.label, other.label),
            self.order * m,
            |x, y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m),
        )
    }

    pub fn verify_axioms(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| self.mul(0, a) == a && self.mul(a, 0) == a && self.mul(a, self.inv(a)) == 0)
            && (0..n).all(|a| {
                (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))))
            })
    }
}

/// `GL_k(q)` as a table together with its matrices.
#[derive(Debug, Clone)]
pub struct GeneralLinear {
    pub k: usize,
    pub field: FqField,
    pub elements: Vec<FqMat>,
    pub table: FiniteGroupTable,
    index: HashMap<FqMat, usize>,
}

impl GeneralLinear {
    pub fn new(k: usize, field: FqField) -> Self {
        let mut elements = FqMat::enumerate_gl(k, &field);
        let id = FqMat::identity(k);
        let pos = elements.iter().position(|m| *m == id).unwrap();
        elements.swap(0, pos);
        let index: HashMap<FqMat, usize> =
            elements.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let table = FiniteGroupTable::from_mul(
            format!("GL_{}({})", k, field.q()),
            elements.len(),
            |a, b| index[&elements[a].mul(&elements[b], &field)],
        );
        Self {
            k,
            field,
            elements,
            table,
            index,
        }
    }

    pub fn index_of(&self, m: &FqMat) -> usize {
        self.index[m]
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Index of `-g^{-1}`.
    pub fn neg_inverse(&self, g: usize) -> usize {
        let gi = &self.elements[self.table.inv(g)];
        self.index_of(&gi.neg(&self.field))
    }

    /// Indices of the upper unitriangular subgroup.
    pub fn upper_unipotent(&self) -> Vec<usize> {
        (0..self.order())
            .filter(|&i| {
                let m = &self.elements[i];
                (0..self.k).all(|r| {
                    (0..self.k).all(|c| {
                        let v = m.get(r, c);
                        if r == c {
                            v == 1
                        } else if r > c {
                            v == 0
                        } else {
                            true
                        }
                    })
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables_are_groups() {
        let g = GeneralLinear::new(2, FqField::new(2).unwrap());
        assert_eq!(g.order(), 6);
        assert!(g.table.verify_axioms());
        assert_eq!(g.table.generators().len(), 2);
        let c = GeneralLinear::new(1, FqField::new(5).unwrap());
        assert_eq!(c.table.generators().len(), 1);
        let m = c.table.direct_product(&c.table);
        assert_eq!(m.order(), 16);
        assert!(m.verify_axioms());
        assert_eq!(g.upper_unipotent().len(), 2);
    }
}
