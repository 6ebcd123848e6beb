use crate::gfp::{FpPoly, PrimeField};
use crate::weyl::WeylElement;
use parking_lot::RwLock;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

/// `[η]_f ∗ [δ]_g = Σ_ε [ε]_{p_ε(T*)·fg}` with `p_ε` an ordinary polynomial in
/// the central element `T*`; these polynomials depend only on `(ℓ, τ, η, δ)`.
pub type Expansion = BTreeMap<WeylElement, FpPoly>;

/// Memoised structure constants of the Hecke algebra on the basis `[η]`.
#[derive(Debug)]
pub struct StructureConstants {
    field: PrimeField,
    tau: u32,
    cache: RwLock<HashMap<(WeylElement, WeylElement), Arc<Expansion>>>,
}

fn accumulate(acc: &mut Expansion, eps: WeylElement, p: FpPoly) {
    let entry = acc.entry(eps).or_insert_with(|| FpPoly::zero(p.field()));
    *entry = entry.add(&p);
    if entry.is_zero() {
        acc.remove(&eps);
    }
}

impl StructureConstants {
    pub fn new(field: PrimeField, tau: u32) -> Self {
        assert!(field.reduce(tau as i64) != 0, "τ must be nonzero");
        Self {
            field,
            tau: field.reduce(tau as i64),
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn tau(&self) -> u32 {
        self.tau
    }

    pub fn cached(&self) -> usize {
        self.cache.read().len()
    }

    pub fn product(&self, eta: WeylElement, delta: WeylElement) -> Arc<Expansion> {
        if let Some(hit) = self.cache.read().get(&(eta, delta)) {
            return hit.clone();
        }
        let result = Arc::new(self.compute(eta, delta));
        self.cache.write().entry((eta, delta)).or_insert(result).clone()
    }

    /// `Σ_ε p_ε · (η₁ ∗ ε)` for an expansion of a right-hand factor.
    fn left_apply(&self, left: WeylElement, inner: &Expansion) -> Expansion {
        let mut out = Expansion::new();
        for (&eps, p) in inner {
            for (&z, q) in self.product(left, eps).iter() {
                accumulate(&mut out, z, q.mul(p));
            }
        }
        out
    }

    fn right_apply(&self, inner: &Expansion, right: WeylElement) -> Expansion {
        let mut out = Expansion::new();
        for (&eps, p) in inner {
            for (&z, q) in self.product(eps, right).iter() {
                accumulate(&mut out, z, q.mul(p));
            }
        }
        out
    }

    fn compute(&self, eta: WeylElement, delta: WeylElement) -> Expansion {
        let f = self.field;
        let (le, ld) = (eta.length(), delta.length());
        let prod = eta.mul(&delta);
        let mut out = Expansion::new();
        if prod.length() == le + ld {
            out.insert(prod, FpPoly::one(f));
            return out;
        }
        if le == 1 && ld == 1 {
            // η = t^α·v with v a single letter; the T*-term drops the letter
            let alpha = eta.reduced_expression().alpha;
            accumulate(&mut out, prod, FpPoly::new(f, vec![self.tau]));
            accumulate(&mut out, WeylElement::t_pow(alpha).mul(&delta), FpPoly::x(f));
        } else if le >= 2 {
            let (e1, e2) = eta.split_diagonal_letter().expect("length checked");
            out = self.left_apply(e1, &self.product(e2, delta));
        } else {
            let (a1, a2) = delta.inverse().split_diagonal_letter().expect("length checked");
            let (d2, d1) = (a2.inverse(), a1.inverse());
            out = self.right_apply(&self.product(eta, d2), d1);
        }
        assert!(
            out.keys().all(|e| e.length() < le + ld),
            "support bound violated for {eta} * {delta}"
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(ell: u32, tau: u32) -> StructureConstants {
        StructureConstants::new(PrimeField::new(ell).unwrap(), tau)
    }

    #[test]
    fn quadratic_relation_for_w() {
        let e = engine(5, 4);
        let w = WeylElement::w();
        let p = e.product(w, w);
        assert_eq!(p.len(), 2);
        assert_eq!(p[&WeylElement::identity()].coeffs(), &[4]);
        assert_eq!(p[&w].coeffs(), &[0, 1]);
    }

    #[test]
    fn cache_is_reused() {
        let e = engine(3, 1);
        let a = WeylElement::diag(0, 2).mul(&WeylElement::w());
        let first = e.product(a, a);
        let n = e.cached();
        assert!(Arc::ptr_eq(&first, &e.product(a, a)));
        assert_eq!(n, e.cached());
    }
}
