//! Twisted tensor products `R[Z²] ⊗^ψ B` for a right factor `B`, the two
//! concrete twisting maps relating them to the affine Hecke algebra, and the
//! comparison with the classical Iwahori–Hecke algebra.

mod iwahori;
mod psi;
mod zeta;

pub use iwahori::{iwahori_compare, IwahoriModel, IwahoriReport};
pub use psi::{build_psi, iso_e_g, IsoReport, PsiTwist, QuotientRing};
pub use zeta::{build_psi3, build_zeta, iso_zeta, ComposedTwist, HeckeFactor, ZetaTwist};

use std::collections::BTreeMap;
use std::fmt::Debug;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwistError {
    #[error("ℓ = {ell} divides neither q - 1 nor q + 1 for q = {q}")]
    WrongModularCase { q: u32, ell: u32 },
    #[error("factors live over different bases")]
    BasisMismatch,
    #[error("coefficient system: {0}")]
    System(String),
}

/// A lattice point `(α, β)`, standing for the group element `δ_{α,β}` of `R[Z²]`.
pub type Z2 = (i32, i32);

/// An `R`-algebra used as the right tensor factor.
pub trait Factor {
    type Elem: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, s: u32) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

/// A finite sum `Σ (α, β) ⊗ b_{α,β}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TTElement<E> {
    pub terms: BTreeMap<Z2, E>,
}

impl<E> TTElement<E> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `ψ: B ⊗ R[Z²] → R[Z²] ⊗ B`, given on `b ⊗ (α, β)`.
pub trait TwistingMap {
    type F: Factor;
    fn factor(&self) -> &Self::F;
    fn twist(&self, b: &<Self::F as Factor>::Elem, a: Z2) -> TTElement<<Self::F as Factor>::Elem>;
}

type Elem<T> = <<T as TwistingMap>::F as Factor>::Elem;

/// Arithmetic in `R[Z²] ⊗^ψ B`.
pub struct TwistedTensor<T: TwistingMap> {
    pub psi: T,
}

impl<T: TwistingMap> TwistedTensor<T> {
    pub fn new(psi: T) -> Self {
        Self { psi }
    }

    fn f(&self) -> &T::F {
        self.psi.factor()
    }

    pub fn pure(&self, a: Z2, b: Elem<T>) -> TTElement<Elem<T>> {
        let mut out = TTElement::zero();
        self.add_term(&mut out, a, b);
        out
    }

    pub fn unit(&self) -> TTElement<Elem<T>> {
        self.pure((0, 0), self.f().one())
    }

    pub fn add_term(&self, x: &mut TTElement<Elem<T>>, a: Z2, b: Elem<T>) {
        let f = self.f();
        let sum = match x.terms.get(&a) {
            Some(cur) => f.add(cur, &b),
            None => b,
        };
        if f.is_zero(&sum) {
            x.terms.remove(&a);
        } else {
            x.terms.insert(a, sum);
        }
    }

    pub fn add(&self, x: &TTElement<Elem<T>>, y: &TTElement<Elem<T>>) -> TTElement<Elem<T>> {
        let mut out = x.clone();
        for (a, b) in &y.terms {
            self.add_term(&mut out, *a, b.clone());
        }
        out
    }

    pub fn scale(&self, x: &TTElement<Elem<T>>, s: u32) -> TTElement<Elem<T>> {
        let mut out = TTElement::zero();
        for (a, b) in &x.terms {
            self.add_term(&mut out, *a, self.f().scale(b, s));
        }
        out
    }

    /// `(a₁ ⊗ b₁)(a₂ ⊗ b₂) = Σ_i a₁a₂^i ⊗ b₁^i b₂` where `ψ(b₁ ⊗ a₂) = Σ_i a₂^i ⊗ b₁^i`.
    pub fn mul(&self, x: &TTElement<Elem<T>>, y: &TTElement<Elem<T>>) -> TTElement<Elem<T>> {
        let f = self.f();
        let mut out = TTElement::zero();
        for (a1, b1) in &x.terms {
            for (a2, b2) in &y.terms {
                for (a, b) in self.psi.twist(b1, *a2).terms {
                    self.add_term(&mut out, (a1.0 + a.0, a1.1 + a.1), f.mul(&b, b2));
                }
            }
        }
        out
    }

    /// `ψ(1 ⊗ a) = a ⊗ 1` and `ψ(b ⊗ 1) = 1 ⊗ b` on the given samples.
    pub fn unit_axioms_hold(&self, points: &[Z2], elems: &[Elem<T>]) -> bool {
        let one = self.f().one();
        points.iter().all(|&a| self.psi.twist(&one, a) == self.pure(a, one.clone()))
            && elems.iter().all(|b| self.psi.twist(b, (0, 0)) == self.pure((0, 0), b.clone()))
    }
}

/// The untwisted flip `b ⊗ a ↦ a ⊗ b`.
pub struct FlipTwist<F: Factor> {
    pub factor: F,
}

impl<F: Factor> TwistingMap for FlipTwist<F> {
    type F = F;

    fn factor(&self) -> &F {
        &self.factor
    }

    fn twist(&self, b: &F::Elem, a: Z2) -> TTElement<F::Elem> {
        let mut out = TTElement::zero();
        if !self.factor.is_zero(b) {
            out.terms.insert(a, b.clone());
        }
        out
    }
}

/// All lattice points with both coordinates in `-r..=r`.
pub fn lattice_window(r: i32) -> Vec<Z2> {
    (-r..=r).flat_map(|x| (-r..=r).map(move |y| (x, y))).collect()
}

#[cfg(test)]
mod tests;
