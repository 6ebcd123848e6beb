//! The Hecke algebra `ℋ_R(G, 𝒫, V)` as formal combinations of symbols
//! `[η]_f`, with `η ∈ W` and `f` a coefficient of the matching grade.

mod coeffs;
mod engine;

pub use coeffs::{Coefficients, ConcreteCoefficients, FreeCoefficients, FreeElem, Word};
pub use engine::{Expansion, StructureConstants};

use crate::gfp::PrimeField;
use crate::tpoly::TwistedPoly;
use crate::weyl::{ShapeClass, WeylElement};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HeckeError {
    #[error("coefficient does not have the grade required by {0}")]
    ParityViolation(WeylElement),
    #[error("operands come from different coefficient systems")]
    SystemMismatch,
}

/// A finite sum `Σ [η]_{f_η}`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct HeckeElement<E> {
    pub terms: BTreeMap<WeylElement, E>,
}

impl<E> HeckeElement<E> {
    pub fn support(&self) -> impl Iterator<Item = &WeylElement> {
        self.terms.keys()
    }

    pub fn coefficient(&self, eta: &WeylElement) -> Option<&E> {
        self.terms.get(eta)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

pub fn grade(eta: &WeylElement) -> u8 {
    eta.flip as u8
}

/// The left factor moved across `[η]^a` by [`HeckeAlgebra::commute_w`].
#[derive(Debug, Clone)]
pub enum FiniteSymbol<E> {
    One(E),
    W(E),
}

/// Outcome of the two simplification identities. The second one only holds
/// when `ηw` is shorter than `η` and is left unevaluated otherwise.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub first: bool,
    pub second: Option<bool>,
}

/// The Hecke algebra over a coefficient ring, sharing a structure-constant cache.
pub struct HeckeAlgebra<C: Coefficients> {
    pub coeffs: C,
    engine: Arc<StructureConstants>,
}

impl<C: Coefficients> HeckeAlgebra<C> {
    pub fn new(coeffs: C) -> Self {
        let engine = Arc::new(StructureConstants::new(coeffs.field(), coeffs.tau()));
        Self { coeffs, engine }
    }

    /// Reuses an existing cache; fails if `ℓ` or `τ` disagree.
    pub fn with_engine(coeffs: C, engine: Arc<StructureConstants>) -> Result<Self, HeckeError> {
        if engine.field() != coeffs.field() || engine.tau() != coeffs.tau() {
            return Err(HeckeError::SystemMismatch);
        }
        Ok(Self { coeffs, engine })
    }

    pub fn engine(&self) -> &Arc<StructureConstants> {
        &self.engine
    }

    pub fn field(&self) -> PrimeField {
        self.coeffs.field()
    }

    pub fn tau(&self) -> u32 {
        self.coeffs.tau()
    }

    pub fn tau_inv(&self) -> u32 {
        self.field().inv(self.tau())
    }

    pub fn zero(&self) -> HeckeElement<C::Elem> {
        HeckeElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn unit(&self) -> HeckeElement<C::Elem> {
        self.from_term(WeylElement::identity(), self.coeffs.one())
    }

    fn from_term(&self, eta: WeylElement, f: C::Elem) -> HeckeElement<C::Elem> {
        let mut terms = BTreeMap::new();
        if !self.coeffs.is_zero(&f) {
            terms.insert(eta, f);
        }
        HeckeElement { terms }
    }

    /// `[η]^j_f = [η]_{(T*)^j f}`.
    pub fn symbol(&self, eta: WeylElement, j: usize, f: &C::Elem) -> Result<HeckeElement<C::Elem>, HeckeError> {
        let c = self.coeffs.tstar_power(j, f);
        if !self.coeffs.belongs(&c, grade(&eta)) {
            return Err(HeckeError::ParityViolation(eta));
        }
        Ok(self.from_term(eta, c))
    }

    /// `[η]^j = [η]^j_1`.
    pub fn basis(&self, eta: WeylElement, j: usize) -> Result<HeckeElement<C::Elem>, HeckeError> {
        self.symbol(eta, j, &self.coeffs.one())
    }

    pub fn add(&self, a: &HeckeElement<C::Elem>, b: &HeckeElement<C::Elem>) -> HeckeElement<C::Elem> {
        let mut out = a.clone();
        for (eta, f) in &b.terms {
            self.add_term(&mut out, *eta, f.clone());
        }
        out
    }

    fn add_term(&self, acc: &mut HeckeElement<C::Elem>, eta: WeylElement, f: C::Elem) {
        let sum = match acc.terms.remove(&eta) {
            Some(g) => self.coeffs.add(&g, &f),
            None => f,
        };
        if !self.coeffs.is_zero(&sum) {
            acc.terms.insert(eta, sum);
        }
    }

    pub fn scale(&self, a: &HeckeElement<C::Elem>, s: u32) -> HeckeElement<C::Elem> {
        let mut out = self.zero();
        for (eta, f) in &a.terms {
            self.add_term(&mut out, *eta, self.coeffs.scale(f, s));
        }
        out
    }

    pub fn sub(&self, a: &HeckeElement<C::Elem>, b: &HeckeElement<C::Elem>) -> HeckeElement<C::Elem> {
        let minus_one = self.field().p() - 1;
        self.add(a, &self.scale(b, minus_one))
    }

    pub fn mul(&self, a: &HeckeElement<C::Elem>, b: &HeckeElement<C::Elem>) -> HeckeElement<C::Elem> {
        let mut out = self.zero();
        for (eta, f) in &a.terms {
            for (delta, g) in &b.terms {
                let fg = self.coeffs.compose(f, g);
                if self.coeffs.is_zero(&fg) {
                    continue;
                }
                for (eps, p) in self.engine.product(*eta, *delta).iter() {
                    self.add_term(&mut out, *eps, self.coeffs.apply_tstar_poly(p, &fg));
                }
            }
        }
        out
    }

    /// Moves `[1]_f` or `[w]_f` to the right of `[η]^a` following the four
    /// shape classes of `η`.
    pub fn commute_w(
        &self,
        left: &FiniteSymbol<C::Elem>,
        eta: WeylElement,
        a: usize,
    ) -> Result<HeckeElement<C::Elem>, HeckeError> {
        let eta_a = self.basis(eta, a)?;
        let f = match left {
            FiniteSymbol::One(f) => {
                return Ok(self.mul(&eta_a, &self.symbol(WeylElement::identity(), 0, f)?));
            }
            FiniteSymbol::W(f) => f,
        };
        let w = WeylElement::w();
        let wf = self.symbol(w, 0, f)?;
        let one_f1 = self.symbol(WeylElement::identity(), 1, f)?;
        let weta_w = self.basis(w.mul(&eta).mul(&w), a)?;
        Ok(match commutation_class(&eta) {
            ShapeClass::A => self.mul(&weta_w, &wf),
            ShapeClass::B => self.add(
                &self.scale(&self.mul(&weta_w, &wf), self.tau()),
                &self.mul(&eta_a, &one_f1),
            ),
            ShapeClass::C | ShapeClass::PureT => self.scale(&self.mul(&weta_w, &self.sub(&wf, &one_f1)), self.tau_inv()),
            ShapeClass::D => self.add(
                &self.mul(&weta_w, &wf),
                &self.mul(&self.sub(&eta_a, &weta_w), &one_f1),
            ),
        })
    }

    /// `τ[1]^1_f = ([w]^1 − [1]^2)[w]_f` for `f ∈ I_w`, and
    /// `[η]^c([w]^1 − [1]^2) = τ[ηw]^{c+1}` when `l(ηw) < l(η)`.
    pub fn check_identities(&self, f: &C::Elem, eta: WeylElement, c: usize) -> Result<IdentityReport, HeckeError> {
        let w = WeylElement::w();
        let id = WeylElement::identity();
        let bracket = self.sub(&self.basis(w, 1)?, &self.basis(id, 2)?);
        let lhs1 = self.scale(&self.symbol(id, 1, f)?, self.tau());
        let rhs1 = self.mul(&bracket, &self.symbol(w, 0, f)?);
        let second = if eta.mul(&w).length() < eta.length() {
            let lhs2 = self.mul(&self.basis(eta, c)?, &bracket);
            let rhs2 = self.scale(&self.basis(eta.mul(&w), c + 1)?, self.tau());
            Some(lhs2 == rhs2)
        } else {
            None
        };
        Ok(IdentityReport {
            first: lhs1 == rhs1,
            second,
        })
    }

    /// `Σ r_i T^i ↦ Σ r_i [w^i]^i`.
    pub fn hdagger_embed(&self, p: &TwistedPoly) -> HeckeElement<C::Elem> {
        let mut out = self.zero();
        for (i, &r) in p.coeffs().iter().enumerate() {
            if r != 0 {
                let eta = if i % 2 == 0 { WeylElement::identity() } else { WeylElement::w() };
                let term = self.basis(eta, i).expect("parity matches by construction");
                out = self.add(&out, &self.scale(&term, r));
            }
        }
        out
    }

    /// Left inverse of [`Self::hdagger_embed`] on polynomials of degree below `bound`.
    pub fn hdagger_extract(&self, h: &HeckeElement<C::Elem>, bound: usize) -> Option<TwistedPoly> {
        let id = WeylElement::identity();
        let w = WeylElement::w();
        if h.support().any(|e| *e != id && *e != w) {
            return None;
        }
        let mut coeffs = vec![0; bound];
        for (eta, parity) in [(id, 0), (w, 1)] {
            if let Some(c) = h.coefficient(&eta) {
                for (i, r) in self.coeffs.tstar_coordinates(c, parity, bound)? {
                    coeffs[i] = r;
                }
            }
        }
        TwistedPoly::new(self.field(), self.tau(), coeffs).ok()
    }

    pub fn render(&self, a: &HeckeElement<C::Elem>) -> String {
        if a.is_zero() {
            return "0".into();
        }
        a.terms
            .iter()
            .map(|(eta, f)| format!("[{}]_{{{}}}", eta, self.coeffs.render(f)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Shape class used when moving `[w]_f` across `[η]^a`.
///
/// Agrees with [`WeylElement::shape_class`] except for two families: a single
/// letter `t^{2b}w` behaves like class A, and pure odd powers `t^{2b+1}` obey
/// the class C formula.
pub fn commutation_class(eta: &WeylElement) -> ShapeClass {
    match eta.shape_class() {
        ShapeClass::B if eta.length() == 1 => ShapeClass::A,
        ShapeClass::PureT => ShapeClass::C,
        c => c,
    }
}

/// A product `[η]_f ∗ [δ]_g = τ[ε₀]_{fg} + [ε₁]^1_{fg}` of two length-one
/// symbols whose product has length zero.
#[derive(Debug, Clone, Copy)]
pub struct LowCase {
    pub name: &'static str,
    pub eta: WeylElement,
    pub delta: WeylElement,
    pub tau_term: WeylElement,
    pub tstar_term: WeylElement,
}

/// The eight length-dropping products of length-one elements.
pub fn low_cases() -> Vec<LowCase> {
    let t = WeylElement::t();
    let ti = WeylElement::t_pow(-1);
    let w = WeylElement::w();
    let wp = WeylElement::w_prime();
    let id = WeylElement::identity();
    let m = |a: WeylElement, b: WeylElement| a.mul(&b);
    let m3 = |a: WeylElement, b: WeylElement, c: WeylElement| a.mul(&b).mul(&c);
    vec![
        LowCase { name: "[w][w]", eta: w, delta: w, tau_term: id, tstar_term: w },
        LowCase { name: "[tw][wt^-1]", eta: m(t, w), delta: m(w, ti), tau_term: id, tstar_term: m3(t, w, ti) },
        LowCase { name: "[w'][w']", eta: wp, delta: wp, tau_term: id, tstar_term: wp },
        LowCase { name: "[wt^-1][tw]", eta: m(w, ti), delta: m(t, w), tau_term: id, tstar_term: w },
        LowCase { name: "[w][wt^-1]", eta: w, delta: m(w, ti), tau_term: ti, tstar_term: m(w, ti) },
        LowCase { name: "[t^-1w'][w']", eta: m(ti, wp), delta: wp, tau_term: ti, tstar_term: m(ti, wp) },
        LowCase { name: "[tw][w]", eta: m(t, w), delta: w, tau_term: t, tstar_term: m(t, w) },
        LowCase { name: "[w'][w't]", eta: wp, delta: m(wp, t), tau_term: t, tstar_term: m(wp, t) },
    ]
}

/// A random element of `W` of length at most `max_len`.
pub fn random_weyl(rng: &mut dyn rand::RngCore, max_len: usize) -> WeylElement {
    use rand::Rng;
    let r = (max_len as i32) / 2 + 2;
    loop {
        let e = WeylElement::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r), rng.gen_bool(0.5));
        if e.length() <= max_len {
            return e;
        }
    }
}

impl<C: Coefficients> HeckeAlgebra<C> {
    /// A random sum of `terms` symbols `[η]_f` with `l(η) ≤ max_len`.
    pub fn random_element(&self, rng: &mut dyn rand::RngCore, max_len: usize, terms: usize) -> HeckeElement<C::Elem> {
        let mut out = self.zero();
        for _ in 0..terms {
            let eta = random_weyl(rng, max_len);
            let f = self.coeffs.sample(rng, grade(&eta));
            out = self.add(&out, &self.from_term(eta, f));
        }
        out
    }
}

#[cfg(test)]
mod tests;
