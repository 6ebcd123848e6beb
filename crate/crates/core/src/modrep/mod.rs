//! Modular representations of the small groups `GL_k(q)` and of the Levi
//! quotient `GL_k(q) × GL_k(q)`, up to the coefficient system of the Hecke
//! algebra.

mod group;
mod meataxe;
mod system;

pub use group::{FiniteGroupTable, GeneralLinear};
pub use meataxe::{irreducible_constituents, projective_cover, split_module, ProjectiveCover};
pub use system::{build_coefficient_system, hom_between_sums, CoefficientSystem, RepChoice, SystemConfig};

use crate::gfp::{FpMatrix, PrimeField};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModRepError {
    #[error("group of order {0} exceeds the supported bound {1}")]
    TooLarge(usize, usize),
    #[error("module is not irreducible")]
    NotIrreducible,
    #[error("idempotent search did not reach an indecomposable projective")]
    NotIndecomposable,
    #[error("no cuspidal representation with index {0} (found {1})")]
    NoSuchCuspidal(usize, usize),
    #[error("characteristic {ell} equals the residue characteristic of F_{q}")]
    SameCharacteristic { ell: u32, q: u32 },
    #[error("unsupported rank k = {0}")]
    UnsupportedRank(usize),
    #[error(transparent)]
    Field(#[from] crate::gfp::GfpError),
}

/// A finite-dimensional representation over `F_ℓ`, given by the matrices of
/// every group element.
#[derive(Debug, Clone)]
pub struct RepModule {
    pub group: Arc<FiniteGroupTable>,
    pub field: PrimeField,
    pub dim: usize,
    pub action: Vec<FpMatrix>,
}

impl RepModule {
    pub fn new(group: Arc<FiniteGroupTable>, field: PrimeField, action: Vec<FpMatrix>) -> Self {
        let dim = action[0].rows();
        assert_eq!(action.len(), group.order());
        Self {
            group,
            field,
            dim,
            action,
        }
    }

    pub fn trivial(group: Arc<FiniteGroupTable>, field: PrimeField) -> Self {
        let action = vec![FpMatrix::identity(field, 1); group.order()];
        Self::new(group, field, action)
    }

    /// The left regular module `F_ℓ[G]`.
    pub fn regular(group: Arc<FiniteGroupTable>, field: PrimeField) -> Self {
        let n = group.order();
        let action = (0..n)
            .map(|g| FpMatrix::from_fn(field, n, n, |r, c| (group.mul(g, c) == r) as i64))
            .collect();
        Self::new(group, field, action)
    }

    pub fn is_homomorphism(&self) -> bool {
        let n = self.group.order();
        self.action[0].is_identity()
            && (0..n).all(|a| {
                (0..n).all(|b| self.action[a].mul(&self.action[b]) == self.action[self.group.mul(a, b)])
            })
    }

    /// The dual module, `g ↦ (ρ(g^{-1}))^T`.
    pub fn contragredient(&self) -> Self {
        let action = (0..self.group.order())
            .map(|g| self.action[self.group.inv(g)].transpose())
            .collect();
        Self::new(self.group.clone(), self.field, action)
    }

    /// Outer tensor product over the direct product group `self.group × other.group`.
    pub fn outer_tensor(&self, other: &Self, product: Arc<FiniteGroupTable>) -> Self {
        let m = other.group.order();
        let action = (0..product.order())
            .map(|i| self.action[i / m].kron(&other.action[i % m]))
            .collect();
        Self::new(product, self.field, action)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Self::new(self.group.clone(), self.field, action)
    }

    pub fn generator_matrices(&self) -> Vec<&FpMatrix> {
        self.group.generators().iter().map(|&g| &self.action[g]).collect()
    }

    /// `Σ c_g ρ(g)` for a group-algebra element given by its coefficients.
    pub fn algebra_element(&self, coeffs: &[u32]) -> FpMatrix {
        let mut acc = FpMatrix::zeros(self.field, self.dim, self.dim);
        for (g, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                acc.axpy(c, &self.action[g]);
            }
        }
        acc
    }
}

/// Basis of `Hom_G(a, b)`: all `X` with `X·a(g) = b(g)·X` for the generators.
pub fn hom_basis(a: &RepModule, b: &RepModule) -> Vec<FpMatrix> {
    let f = a.field;
    let (da, db) = (a.dim, b.dim);
    let gens = a.group.generators();
    let mut eqs = FpMatrix::zeros(f, gens.len() * da * db, da * db);
    for (gi, &g) in gens.iter().enumerate() {
        let (ag, bg) = (&a.action[g], &b.action[g]);
        for i in 0..db {
            for j in 0..da {
                let row = gi * da * db + i * da + j;
                for l in 0..da {
                    let v = f.add(eqs.get(row, i * da + l), ag.get(l, j));
                    eqs.set(row, i * da + l, v);
                }
                for l in 0..db {
                    let v = f.sub(eqs.get(row, l * da + j), bg.get(i, l));
                    eqs.set(row, l * da + j, v);
                }
            }
        }
    }
    eqs.nullspace()
        .into_iter()
        .map(|v| FpMatrix::new(f, db, da, v))
        .collect()
}

/// Whether the `U`-coinvariants of a representation of `GL_k(q)` vanish,
/// with `U` the upper unitriangular subgroup. Always true for `k = 1`.
pub fn is_cuspidal(m: &RepModule, gl: &GeneralLinear) -> bool {
    if gl.k == 1 {
        return true;
    }
    let unip = gl.upper_unipotent();
    let id = FpMatrix::identity(m.field, m.dim);
    let mut stacked = FpMatrix::zeros(m.field, m.dim, m.dim * unip.len());
    for (i, &u) in unip.iter().enumerate() {
        stacked.set_block(0, i * m.dim, &m.action[u].sub(&id));
    }
    stacked.rank() == m.dim
}

/// The characters of the cyclic group `GL_1(q) = F_q^×` with values in `F_ℓ`,
/// indexed by the image of the primitive element in increasing order.
pub fn cyclic_characters(gl: &GeneralLinear, field: PrimeField) -> Vec<RepModule> {
    assert_eq!(gl.k, 1);
    let n = gl.order() as u64;
    let gamma = gl.field.primitive_element();
    let group = Arc::new(gl.table.clone());
    let mut log = vec![0u64; gl.order()];
    let mut x = 1;
    for i in 0..n {
        log[gl.index_of(&crate::gfp::FqMat::from_data(1, 1, vec![x]))] = i;
        x = gl.field.mul(x, gamma);
    }
    field
        .elements()
        .filter(|&z| z != 0 && field.pow(z, n) == 1)
        .map(|z| {
            let action = (0..gl.order())
                .map(|g| FpMatrix::scalar(field, 1, field.pow(z, log[g])))
                .collect();
            RepModule::new(group.clone(), field, action)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfp::FqField;

    fn gl(k: usize, q: u32) -> GeneralLinear {
        GeneralLinear::new(k, FqField::new(q).unwrap())
    }

    #[test]
    fn characters_are_homomorphisms() {
        let f5 = PrimeField::new(5).unwrap();
        let g = gl(1, 5);
        let chars = cyclic_characters(&g, f5);
        assert_eq!(chars.len(), 4);
        assert!(chars.iter().all(|c| c.is_homomorphism()));
        assert!(chars[0].action.iter().all(|m| m.is_identity()));
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(cyclic_characters(&gl(1, 4), f3).len(), 1);
    }

    #[test]
    fn contragredient_inverts_characters() {
        let f7 = PrimeField::new(7).unwrap();
        let g = gl(1, 4);
        let chars = cyclic_characters(&g, f7);
        assert_eq!(chars.len(), 3);
        for c in &chars {
            let d = c.contragredient();
            for h in 0..3 {
                assert!(c.action[h].mul(&d.action[h]).is_identity());
            }
            assert_eq!(d.contragredient().action, c.action);
        }
    }

    #[test]
    fn cuspidality_of_small_representations() {
        let f3 = PrimeField::new(3).unwrap();
        let g = gl(2, 2);
        let triv = RepModule::trivial(Arc::new(g.table.clone()), f3);
        assert!(!is_cuspidal(&triv, &g));
        let g1 = gl(1, 4);
        assert!(is_cuspidal(&cyclic_characters(&g1, f3)[0], &g1));
    }

    #[test]
    fn regular_module_hom_dimension() {
        let f2 = PrimeField::new(2).unwrap();
        let g = gl(1, 3);
        let group = Arc::new(g.table.clone());
        let reg = RepModule::regular(group.clone(), f2);
        assert!(reg.is_homomorphism());
        // End of the regular module is the group algebra
        assert_eq!(hom_basis(&reg, &reg).len(), 2);
        let triv = RepModule::trivial(group, f2);
        assert_eq!(hom_basis(&reg, &triv).len(), 1);
    }
}
