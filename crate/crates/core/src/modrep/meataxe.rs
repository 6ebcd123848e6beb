use super::{hom_basis, ModRepError, RepModule};
use crate::gfp::{FpMatrix, FpPoly, PrimeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x6d65_6174;
const MAX_GROUP: usize = 64;
const MAX_DIM: usize = 80;

/// Subspace of `F_ℓ^n` kept as fully reduced echelon rows.
#[derive(Debug, Clone)]
struct Subspace {
    field: PrimeField,
    n: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn new(field: PrimeField, n: usize) -> Self {
        Self {
            field,
            n,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        v
    }

    /// Adds `v`; returns whether the dimension grew.
    fn insert(&mut self, v: &[u32]) -> bool {
        let f = self.field;
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[p]);
        v.iter_mut().for_each(|x| *x = f.mul(*x, inv));
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                for (x, &r) in row.iter_mut().zip(&v) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    fn coords(&self, v: &[u32]) -> Vec<u32> {
        self.pivots.iter().map(|&p| v[p]).collect()
    }
}

fn spin(seed: &[u32], gens: &[&FpMatrix], field: PrimeField) -> Subspace {
    let mut s = Subspace::new(field, seed.len());
    let mut queue = vec![seed.to_vec()];
    s.insert(seed);
    while let Some(v) = queue.pop() {
        for g in gens {
            let img = g.mul_vec(&v);
            if s.insert(&img) {
                queue.push(img);
            }
        }
    }
    s
}

/// Action restricted to an invariant subspace.
fn sub_action(m: &RepModule, s: &Subspace) -> RepModule {
    let d = s.dim();
    let action = m
        .action
        .iter()
        .map(|g| {
            let mut a = FpMatrix::zeros(m.field, d, d);
            for (j, b) in s.rows.iter().enumerate() {
                for (i, c) in s.coords(&g.mul_vec(b)).into_iter().enumerate() {
                    a.set(i, j, c);
                }
            }
            a
        })
        .collect();
    RepModule::new(m.group.clone(), m.field, action)
}

/// Action on the quotient by an invariant subspace.
fn quotient_action(m: &RepModule, s: &Subspace) -> RepModule {
    let free: Vec<usize> = (0..s.n).filter(|c| !s.pivots.contains(c)).collect();
    let d = free.len();
    let action = m
        .action
        .iter()
        .map(|g| {
            let mut a = FpMatrix::zeros(m.field, d, d);
            for (j, &fc) in free.iter().enumerate() {
                let mut e = vec![0; s.n];
                e[fc] = 1;
                let img = s.reduce(&g.mul_vec(&e));
                for (i, &fr) in free.iter().enumerate() {
                    a.set(i, j, img[fr]);
                }
            }
            a
        })
        .collect();
    RepModule::new(m.group.clone(), m.field, action)
}

fn minimal_polynomial(a: &FpMatrix) -> FpPoly {
    let f = a.field();
    let n = a.rows();
    let mut span = Subspace::new(f, n * n);
    let mut powers = vec![FpMatrix::identity(f, n)];
    span.insert(powers[0].data());
    loop {
        let next = powers.last().unwrap().mul(a);
        let d = powers.len();
        // solve next = Σ c_i powers[i]
        let sys = FpMatrix::from_fn(f, n * n, d, |r, c| powers[c].data()[r] as i64);
        if let Some(c) = sys.solve(next.data()) {
            let mut coeffs: Vec<u32> = c.iter().map(|&x| f.neg(x)).collect();
            coeffs.push(1);
            return FpPoly::new(f, coeffs);
        }
        powers.push(next);
    }
}

fn random_algebra_element(m: &RepModule, rng: &mut ChaCha8Rng) -> FpMatrix {
    let p = m.field.p();
    let coeffs: Vec<u32> = (0..m.group.order()).map(|_| rng.gen_range(0..p)).collect();
    m.algebra_element(&coeffs)
}

/// A proper nonzero submodule, or `None` when the module is irreducible
/// (decided by Norton's criterion).
pub fn split_module(m: &RepModule) -> Option<Vec<Vec<u32>>> {
    if m.dim <= 1 {
        return None;
    }
    let f = m.field;
    let gens = m.generator_matrices();
    let gens_t: Vec<FpMatrix> = gens.iter().map(|g| g.transpose()).collect();
    let gens_t: Vec<&FpMatrix> = gens_t.iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ m.dim as u64);
    for _ in 0..500 {
        let a = random_algebra_element(m, &mut rng);
        let mut factors: Vec<FpPoly> = minimal_polynomial(&a)
            .factor()
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        factors.sort_by_key(|p| p.degree());
        for p in factors {
            let pa = p.eval_matrix(&a);
            let kernel = pa.nullspace();
            let s = spin(&kernel[0], &gens, f);
            if s.dim() < m.dim {
                return Some(s.rows);
            }
            let kernel_t = pa.transpose().nullspace();
            let st = spin(&kernel_t[0], &gens_t, f);
            if st.dim() < m.dim {
                let ann = FpMatrix::from_fn(f, st.dim(), m.dim, |r, c| st.rows[r][c] as i64);
                return Some(ann.nullspace());
            }
            if kernel.len() == p.degree().unwrap() {
                return None;
            }
        }
    }
    panic!("meataxe failed to decide irreducibility of a {}-dimensional module", m.dim);
}

fn composition_factors(m: &RepModule, out: &mut Vec<RepModule>) {
    match split_module(m) {
        None => out.push(m.clone()),
        Some(basis) => {
            let mut s = Subspace::new(m.field, m.dim);
            for v in &basis {
                s.insert(v);
            }
            composition_factors(&sub_action(m, &s), out);
            composition_factors(&quotient_action(m, &s), out);
        }
    }
}

pub(crate) fn is_isomorphic_irreducible(a: &RepModule, b: &RepModule) -> bool {
    a.dim == b.dim && !hom_basis(a, b).is_empty()
}

/// Pairwise non-isomorphic irreducible modules, as composition factors of the
/// regular module, sorted by dimension. Each comes with `dim End(S)`; a value
/// above one flags a module that is not absolutely irreducible.
pub fn irreducible_constituents(
    group: std::sync::Arc<super::FiniteGroupTable>,
    field: PrimeField,
) -> Result<Vec<(RepModule, usize)>, ModRepError> {
    if group.order() > MAX_GROUP {
        return Err(ModRepError::TooLarge(group.order(), MAX_GROUP));
    }
    let reg = RepModule::regular(group, field);
    let mut factors = Vec::new();
    composition_factors(&reg, &mut factors);
    let mut distinct: Vec<RepModule> = Vec::new();
    for s in factors {
        if !distinct.iter().any(|d| is_isomorphic_irreducible(d, &s)) {
            distinct.push(s);
        }
    }
    distinct.sort_by_key(|s| s.dim);
    Ok(distinct
        .into_iter()
        .map(|s| {
            let e = hom_basis(&s, &s).len();
            (s, e)
        })
        .collect())
}

/// An indecomposable projective `F_ℓ[G]·e` with its defining idempotent.
#[derive(Debug, Clone)]
pub struct ProjectiveCover {
    pub module: RepModule,
    pub idempotent: Vec<u32>,
}

fn algebra_mul(group: &super::FiniteGroupTable, f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = vec![0; a.len()];
    for (g, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (h, &y) in b.iter().enumerate() {
            if y != 0 {
                let gh = group.mul(g, h);
                out[gh] = f.add(out[gh], f.mul(x, y));
            }
        }
    }
    out
}

/// Minimal polynomial of `y` inside the corner algebra with unit `e`.
fn corner_minpoly(group: &super::FiniteGroupTable, f: PrimeField, e: &[u32], y: &[u32]) -> FpPoly {
    let n = e.len();
    let mut powers = vec![e.to_vec()];
    loop {
        let next = algebra_mul(group, f, powers.last().unwrap(), y);
        let d = powers.len();
        let sys = FpMatrix::from_fn(f, n, d, |r, c| powers[c][r] as i64);
        if let Some(c) = sys.solve(&next) {
            let mut coeffs: Vec<u32> = c.iter().map(|&x| f.neg(x)).collect();
            coeffs.push(1);
            return FpPoly::new(f, coeffs);
        }
        powers.push(next);
    }
}

fn corner_eval(group: &super::FiniteGroupTable, f: PrimeField, p: &FpPoly, e: &[u32], y: &[u32]) -> Vec<u32> {
    let mut acc = vec![0; e.len()];
    for &c in p.coeffs().iter().rev() {
        acc = algebra_mul(group, f, &acc, y);
        for (a, &b) in acc.iter_mut().zip(e) {
            *a = f.add(*a, f.mul(c, b));
        }
    }
    acc
}

fn left_ideal(m: &RepModule, e: &[u32]) -> RepModule {
    let group = &m.group;
    let f = m.field;
    let mut s = Subspace::new(f, e.len());
    for g in 0..group.order() {
        let mut unit = vec![0; e.len()];
        unit[g] = 1;
        s.insert(&algebra_mul(group, f, &unit, e));
    }
    let reg = RepModule::regular(group.clone(), f);
    sub_action(&reg, &s)
}

/// The projective indecomposable module whose head is `irreducible`, found
/// by splitting idempotents of the group algebra until the corner algebra
/// looks local, then confirmed through `Hom` into every simple module.
pub fn projective_cover(irreducible: &RepModule) -> Result<ProjectiveCover, ModRepError> {
    let group = irreducible.group.clone();
    let f = irreducible.field;
    let n = group.order();
    if n > MAX_GROUP || n > MAX_DIM {
        return Err(ModRepError::TooLarge(n, MAX_GROUP));
    }
    if split_module(irreducible).is_some() {
        return Err(ModRepError::NotIrreducible);
    }
    let simples = irreducible_constituents(group.clone(), f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut e = vec![0; n];
    e[0] = 1;
    let mut quiet = 0;
    for _ in 0..2000 {
        if quiet >= 30 {
            let module = left_ideal(irreducible, &e);
            let head_ok = simples.iter().all(|(s, end)| {
                let h = hom_basis(&module, s).len();
                if is_isomorphic_irreducible(s, irreducible) {
                    h == *end
                } else {
                    h == 0
                }
            });
            if head_ok {
                return Ok(ProjectiveCover { module, idempotent: e });
            }
            quiet = 0;
        }
        let r: Vec<u32> = (0..n).map(|_| rng.gen_range(0..f.p())).collect();
        let y = algebra_mul(&group, f, &algebra_mul(&group, f, &e, &r), &e);
        let mp = corner_minpoly(&group, f, &e, &y);
        let factors = mp.factor();
        if factors.len() < 2 {
            quiet += 1;
            continue;
        }
        let (p1, a1) = &factors[0];
        let mut m1 = FpPoly::one(f);
        for _ in 0..*a1 {
            m1 = m1.mul(p1);
        }
        let m2 = mp.divrem(&m1).0;
        let (_, _, t) = m1.ext_gcd(&m2);
        let eps = corner_eval(&group, f, &t.mul(&m2).rem(&mp), &e, &y);
        let rest: Vec<u32> = e.iter().zip(&eps).map(|(&a, &b)| f.sub(a, b)).collect();
        e = if irreducible.algebra_element(&eps).is_zero() {
            rest
        } else {
            eps
        };
        quiet = 0;
    }
    Err(ModRepError::NotIndecomposable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfp::FqField;
    use crate::modrep::{cyclic_characters, is_cuspidal, GeneralLinear};
    use std::sync::Arc;

    fn setup(k: usize, q: u32, ell: u32) -> (GeneralLinear, Arc<super::super::FiniteGroupTable>, PrimeField) {
        let g = GeneralLinear::new(k, FqField::new(q).unwrap());
        let t = Arc::new(g.table.clone());
        (g, t, PrimeField::new(ell).unwrap())
    }

    #[test]
    fn symmetric_group_simples_mod_three() {
        let (g, t, f) = setup(2, 2, 3);
        let simples = irreducible_constituents(t, f).unwrap();
        assert_eq!(simples.len(), 2);
        assert!(simples.iter().all(|(s, e)| s.dim == 1 && *e == 1));
        let cusp: Vec<_> = simples.iter().filter(|(s, _)| is_cuspidal(s, &g)).collect();
        assert_eq!(cusp.len(), 1);
    }

    #[test]
    fn symmetric_group_simples_mod_five() {
        let (g, t, f) = setup(2, 2, 5);
        let simples = irreducible_constituents(t, f).unwrap();
        let dims: Vec<usize> = simples.iter().map(|(s, _)| s.dim).collect();
        assert_eq!(dims, vec![1, 1, 2]);
        assert_eq!(simples.iter().filter(|(s, _)| is_cuspidal(s, &g)).count(), 1);
    }

    #[test]
    fn cyclic_projective_covers() {
        let (g, _, f) = setup(1, 4, 3);
        let chi = &cyclic_characters(&g, f)[0];
        let p = projective_cover(chi).unwrap();
        assert_eq!(p.module.dim, 3);
        assert!(p.module.is_homomorphism());
        let (g, _, f) = setup(1, 3, 5);
        for chi in cyclic_characters(&g, f) {
            assert_eq!(projective_cover(&chi).unwrap().module.dim, 1);
        }
    }

    #[test]
    fn sign_cover_of_symmetric_group() {
        let (g, t, f) = setup(2, 2, 3);
        let simples = irreducible_constituents(t, f).unwrap();
        let sign = &simples.iter().find(|(s, _)| is_cuspidal(s, &g)).unwrap().0;
        let p = projective_cover(sign).unwrap();
        assert_eq!(p.module.dim, 3);
        let e = &p.idempotent;
        assert_eq!(&algebra_mul(&g.table, f, e, e), e);
        let dual = p.module.contragredient();
        assert_eq!(dual.dim, 3);
        assert!(dual.is_homomorphism());
    }
}
