use super::{
    cyclic_characters, hom_basis, irreducible_constituents, is_cuspidal, projective_cover,
    FiniteGroupTable, GeneralLinear, ModRepError, RepModule,
};
use crate::gfp::{FpMatrix, FqField, PrimeField};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Which module over the Levi quotient is used as `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RepChoice {
    /// `V = ρ₀ ⊠ ρ₀`.
    Rho,
    /// `V = P ⊕ P*` with `P` the projective cover of `ρ₀ ⊠ ρ₀`.
    ProjectiveCover,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub k: usize,
    pub q: u32,
    pub ell: u32,
    /// Index into the cuspidal irreducibles of `GL_k(q)` over `F_ℓ`.
    pub cuspidal: usize,
    pub choice: RepChoice,
}

impl SystemConfig {
    pub fn new(k: usize, q: u32, ell: u32, cuspidal: usize, choice: RepChoice) -> Self {
        Self {
            k,
            q,
            ell,
            cuspidal,
            choice,
        }
    }

    pub fn descriptor(&self) -> String {
        let v = match self.choice {
            RepChoice::Rho => "rho",
            RepChoice::ProjectiveCover => "P+P*",
        };
        format!("k={} q={} l={} cuspidal#{} V={}", self.k, self.q, self.ell, self.cuspidal, v)
    }
}

/// The graded coefficient data `(I₁, I_w, T*)` attached to a module `V` over
/// `M = GL_k(q) × GL_k(q)`.
///
/// `V` is kept as a direct sum of outer tensor products `A_i ⊠ B_i`, which
/// makes intertwiner spaces products of `Hom` spaces over a single factor.
#[derive(Debug, Clone)]
pub struct CoefficientSystem {
    pub config: SystemConfig,
    pub field: PrimeField,
    pub tau: u32,
    pub gl: Arc<GeneralLinear>,
    pub levi: Arc<FiniteGroupTable>,
    pub rho0: RepModule,
    pub summands: Vec<(RepModule, RepModule)>,
    pub v: RepModule,
    pub i1_basis: Vec<FpMatrix>,
    pub iw_basis: Vec<FpMatrix>,
    pub tstar: FpMatrix,
}

/// Permutation `u ⊗ v ↦ v ⊗ u` from `F^a ⊗ F^b` to `F^b ⊗ F^a`.
fn flip(field: PrimeField, a: usize, b: usize) -> FpMatrix {
    FpMatrix::from_fn(field, a * b, a * b, |r, c| {
        let (i, j) = (c / b, c % b);
        (r == j * a + i) as i64
    })
}

fn offsets(summands: &[(RepModule, RepModule)]) -> Vec<usize> {
    let mut off = vec![0];
    for (a, b) in summands {
        off.push(off.last().unwrap() + a.dim * b.dim);
    }
    off
}

/// Basis of `Hom_M(⊕ A_i ⊠ B_i, ⊕ C_j ⊠ D_j)`, or of `Hom_M(V^w, W)` when
/// `twisted`, where `V^w` lets `(a, d)` act through `(d, a)`.
pub fn hom_between_sums(
    src: &[(RepModule, RepModule)],
    dst: &[(RepModule, RepModule)],
    twisted: bool,
) -> Vec<FpMatrix> {
    let field = src[0].0.field;
    let (so, dof) = (offsets(src), offsets(dst));
    let (n, m) = (*so.last().unwrap(), *dof.last().unwrap());
    let mut basis = Vec::new();
    for (i, (a, b)) in src.iter().enumerate() {
        for (j, (c, d)) in dst.iter().enumerate() {
            let (left, right) = if twisted {
                (hom_basis(b, c), hom_basis(a, d))
            } else {
                (hom_basis(a, c), hom_basis(b, d))
            };
            let fl = flip(field, a.dim, b.dim);
            for h1 in &left {
                for h2 in &right {
                    let mut blk = h1.kron(h2);
                    if twisted {
                        blk = blk.mul(&fl);
                    }
                    let mut x = FpMatrix::zeros(field, m, n);
                    x.set_block(dof[j], so[i], &blk);
                    basis.push(x);
                }
            }
        }
    }
    basis
}

fn cuspidal_irreducibles(gl: &GeneralLinear, field: PrimeField) -> Result<Vec<RepModule>, ModRepError> {
    match gl.k {
        1 => Ok(cyclic_characters(gl, field)),
        2 => Ok(irreducible_constituents(Arc::new(gl.table.clone()), field)?
            .into_iter()
            .filter(|(s, end)| *end == 1 && is_cuspidal(s, gl))
            .map(|(s, _)| s)
            .collect()),
        k => Err(ModRepError::UnsupportedRank(k)),
    }
}

pub fn build_coefficient_system(config: &SystemConfig) -> Result<CoefficientSystem, ModRepError> {
    let field = PrimeField::new(config.ell)?;
    let fq = FqField::new(config.q)?;
    if fq.characteristic() == config.ell {
        return Err(ModRepError::SameCharacteristic {
            ell: config.ell,
            q: config.q,
        });
    }
    let gl = Arc::new(GeneralLinear::new(config.k, fq));
    let cusp = cuspidal_irreducibles(&gl, field)?;
    let rho0 = cusp
        .get(config.cuspidal)
        .cloned()
        .ok_or(ModRepError::NoSuchCuspidal(config.cuspidal, cusp.len()))?;
    let levi = Arc::new(gl.table.direct_product(&gl.table));
    let summands = match config.choice {
        RepChoice::Rho => vec![(rho0.clone(), rho0.clone())],
        RepChoice::ProjectiveCover => {
            let p0 = projective_cover(&rho0)?.module;
            let d0 = p0.contragredient();
            vec![(p0.clone(), p0), (d0.clone(), d0)]
        }
    };
    let v = summands
        .iter()
        .map(|(a, b)| a.outer_tensor(b, levi.clone()))
        .reduce(|x, y| x.direct_sum(&y))
        .unwrap();
    let n = gl.order();
    let mut tstar = FpMatrix::zeros(field, v.dim, v.dim);
    for g in 0..n {
        tstar = tstar.add(&v.action[g * n + gl.neg_inverse(g)]);
    }
    let tau = field.pow(field.reduce(config.q as i64), (config.k * config.k) as u64);
    Ok(CoefficientSystem {
        config: config.clone(),
        field,
        tau,
        i1_basis: hom_between_sums(&summands, &summands, false),
        iw_basis: hom_between_sums(&summands, &summands, true),
        gl,
        levi,
        rho0,
        summands,
        v,
        tstar,
    })
}

impl CoefficientSystem {
    pub fn dim(&self) -> usize {
        self.v.dim
    }

    /// `σ(a, d)` for indices `a, d` of `GL_k(q)`.
    pub fn sigma(&self, a: usize, d: usize) -> &FpMatrix {
        &self.v.action[a * self.gl.order() + d]
    }

    pub fn identity(&self) -> FpMatrix {
        FpMatrix::identity(self.field, self.dim())
    }

    fn coordinates(basis: &[FpMatrix], x: &FpMatrix) -> Option<Vec<u32>> {
        let f = x.field();
        let len = x.rows() * x.cols();
        let sys = FpMatrix::from_fn(f, len, basis.len(), |r, c| basis[c].data()[r] as i64);
        sys.solve(x.data())
    }

    pub fn in_i1(&self, x: &FpMatrix) -> bool {
        Self::coordinates(&self.i1_basis, x).is_some()
    }

    pub fn in_iw(&self, x: &FpMatrix) -> bool {
        Self::coordinates(&self.iw_basis, x).is_some()
    }

    /// Every `(a, d) ∈ M` satisfies `x·σ(a,d) = σ(a,d)·x`.
    pub fn commutes_with_levi(&self, x: &FpMatrix) -> bool {
        self.v.action.iter().all(|s| x.mul(s) == s.mul(x))
    }

    /// Every `(a, d) ∈ M` satisfies `x·σ(d,a) = σ(a,d)·x`.
    pub fn is_twisted_intertwiner(&self, x: &FpMatrix) -> bool {
        let n = self.gl.order();
        (0..n).all(|a| (0..n).all(|d| x.mul(self.sigma(d, a)) == self.sigma(a, d).mul(x)))
    }

    /// An invertible `M`-map `V → V*`, if one exists among a few combinations
    /// of the `Hom` basis.
    pub fn self_duality_witness(&self) -> Option<FpMatrix> {
        let dual: Vec<(RepModule, RepModule)> = self
            .summands
            .iter()
            .map(|(a, b)| (a.contragredient(), b.contragredient()))
            .collect();
        let basis = hom_between_sums(&self.summands, &dual, false);
        let f = self.field;
        let p = f.p() as u64;
        for seed in 1..64u64 {
            let mut x = FpMatrix::zeros(f, self.dim(), self.dim());
            let mut s = seed;
            for b in &basis {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                x.axpy(((s >> 33) % p) as u32, b);
            }
            if x.inverse().is_some() {
                return Some(x);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(k: usize, q: u32, ell: u32, choice: RepChoice) -> CoefficientSystem {
        build_coefficient_system(&SystemConfig::new(k, q, ell, 0, choice)).unwrap()
    }

    #[test]
    fn trivial_character_tstar_values() {
        let s = sys(1, 4, 3, RepChoice::Rho);
        assert!(s.tstar.is_zero());
        assert_eq!(s.tau, 1);
        let s = sys(1, 4, 5, RepChoice::Rho);
        assert_eq!(s.tstar, FpMatrix::scalar(s.field, 1, 3));
        assert_eq!(s.tau, 4);
    }

    #[test]
    fn projective_cover_system_dimensions() {
        let s = sys(1, 4, 3, RepChoice::ProjectiveCover);
        assert_eq!(s.dim(), 18);
        assert_eq!(s.tau, 1);
        let s = sys(2, 2, 3, RepChoice::ProjectiveCover);
        assert_eq!(s.dim(), 18);
        let s = sys(2, 2, 5, RepChoice::ProjectiveCover);
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn bases_satisfy_their_defining_equations() {
        for (k, q, ell) in [(1, 4, 3), (1, 5, 2), (1, 3, 2), (2, 2, 3), (2, 2, 7)] {
            let s = sys(k, q, ell, RepChoice::ProjectiveCover);
            assert!(s.i1_basis.iter().all(|x| s.commutes_with_levi(x)));
            assert!(s.iw_basis.iter().all(|x| s.is_twisted_intertwiner(x)));
            assert!(s.in_iw(&s.tstar));
            for f in s.i1_basis.iter().chain(&s.iw_basis) {
                assert_eq!(s.tstar.mul(f), f.mul(&s.tstar));
            }
            if (q - 1) % ell == 0 {
                assert!(s.tstar.mul(&s.tstar).is_zero());
            }
            assert!(s.self_duality_witness().is_some());
        }
    }

    #[test]
    fn product_formula_matches_direct_solve() {
        for (k, q, ell) in [(1, 3, 2), (1, 4, 5), (2, 2, 5)] {
            let s = sys(k, q, ell, RepChoice::ProjectiveCover);
            assert_eq!(hom_basis(&s.v, &s.v).len(), s.i1_basis.len());
            let n = s.gl.order();
            let swapped: Vec<FpMatrix> = (0..n * n)
                .map(|i| s.v.action[(i % n) * n + i / n].clone())
                .collect();
            let vw = RepModule::new(s.levi.clone(), s.field, swapped);
            assert_eq!(hom_basis(&vw, &s.v).len(), s.iw_basis.len());
        }
    }
}
