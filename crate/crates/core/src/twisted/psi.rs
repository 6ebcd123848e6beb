use super::{Factor, TTElement, TwistError, TwistedTensor, TwistingMap, Z2};
use crate::finhecke::CharPoly;
use crate::gfp::{FpMatrix, PrimeField};
use crate::heckealg::{ConcreteCoefficients, Coefficients, HeckeAlgebra, HeckeElement};
use crate::tpoly::{tp_reduce, TwistedPoly};
use crate::weyl::WeylElement;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// `R[T]^τ / (Ϝ)`, elements kept in normal form.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    pub modulus: TwistedPoly,
}

impl QuotientRing {
    pub fn new(modulus: TwistedPoly) -> Self {
        Self { modulus }
    }

    pub fn field(&self) -> PrimeField {
        self.modulus.field()
    }

    pub fn tau(&self) -> u32 {
        self.modulus.tau()
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn reduce(&self, p: &TwistedPoly) -> TwistedPoly {
        tp_reduce(p, &self.modulus).rep
    }

    pub fn poly(&self, coeffs: Vec<u32>) -> TwistedPoly {
        self.reduce(&TwistedPoly::new(self.field(), self.tau(), coeffs).expect("tau matches"))
    }

    pub fn monomial(&self, c: u32, d: usize) -> TwistedPoly {
        self.reduce(&TwistedPoly::monomial(self.field(), self.tau(), c, d).expect("tau matches"))
    }
}

impl Factor for QuotientRing {
    type Elem = TwistedPoly;

    fn zero(&self) -> TwistedPoly {
        self.poly(vec![])
    }

    fn one(&self) -> TwistedPoly {
        self.monomial(1, 0)
    }

    fn add(&self, a: &TwistedPoly, b: &TwistedPoly) -> TwistedPoly {
        a.add(b)
    }

    fn scale(&self, a: &TwistedPoly, s: u32) -> TwistedPoly {
        a.scale(s)
    }

    fn mul(&self, a: &TwistedPoly, b: &TwistedPoly) -> TwistedPoly {
        self.reduce(&a.mul(b).expect("same tau"))
    }

    fn is_zero(&self, a: &TwistedPoly) -> bool {
        a.is_zero()
    }
}

/// `Σ r_i T^i ⊗ (α, β)` goes to `(α, β) ⊗ (even part) + (β, α) ⊗ (odd part)`
/// when `α ≤ β`, and to
/// `(α, β) ⊗ Σ_{i even} (r_i + r_{i-1}) T^i + (β, α) ⊗ Σ_{i odd} r_i (T^i - T^{i+1})`
/// when `α ≥ β`.
pub struct PsiTwist {
    pub ring: QuotientRing,
}

impl PsiTwist {
    /// Both branches of the rule; they must agree when `α = β`.
    pub fn branches(&self, p: &TwistedPoly, a: Z2) -> (TTElement<TwistedPoly>, TTElement<TwistedPoly>) {
        let f = self.ring.field();
        let n = p.coeffs().len();
        let swapped = (a.1, a.0);
        let mut even = vec![0; n + 1];
        let mut odd = vec![0; n + 1];
        for (i, &r) in p.coeffs().iter().enumerate() {
            if i % 2 == 0 {
                even[i] = r;
            } else {
                odd[i] = r;
            }
        }
        let tt = TwistedTensor::new(FlipRing(&self.ring));
        let mut low = TTElement::zero();
        tt.add_term(&mut low, a, self.ring.poly(even.clone()));
        tt.add_term(&mut low, swapped, self.ring.poly(odd.clone()));

        let mut shifted_even = even;
        let mut odd_part = vec![0; n + 1];
        for i in (1..n).step_by(2) {
            let r = p.coeff(i);
            shifted_even[i + 1] = f.add(shifted_even[i + 1], r);
            odd_part[i] = f.add(odd_part[i], r);
            odd_part[i + 1] = f.sub(odd_part[i + 1], r);
        }
        let mut high = TTElement::zero();
        tt.add_term(&mut high, a, self.ring.poly(shifted_even));
        tt.add_term(&mut high, swapped, self.ring.poly(odd_part));
        (low, high)
    }
}

struct FlipRing<'a>(&'a QuotientRing);

impl TwistingMap for FlipRing<'_> {
    type F = QuotientRing;
    fn factor(&self) -> &QuotientRing {
        self.0
    }
    fn twist(&self, b: &TwistedPoly, a: Z2) -> TTElement<TwistedPoly> {
        let mut out = TTElement::zero();
        if !b.is_zero() {
            out.terms.insert(a, b.clone());
        }
        out
    }
}

impl TwistingMap for PsiTwist {
    type F = QuotientRing;

    fn factor(&self) -> &QuotientRing {
        &self.ring
    }

    fn twist(&self, p: &TwistedPoly, a: Z2) -> TTElement<TwistedPoly> {
        let (low, high) = self.branches(p, a);
        if a.0 <= a.1 {
            low
        } else {
            high
        }
    }
}

pub fn build_psi(tau: u32, fpoly: &CharPoly) -> Result<PsiTwist, TwistError> {
    let modulus = fpoly.to_twisted(tau).map_err(|e| TwistError::System(e.to_string()))?;
    Ok(PsiTwist {
        ring: QuotientRing::new(modulus),
    })
}

/// `E((α, β) ⊗ Σ r_i T^i) = [δ_{α,β}] ∗ Σ r_i [w^i]^i`.
pub fn e_map(alg: &HeckeAlgebra<ConcreteCoefficients>, x: &TTElement<TwistedPoly>) -> HeckeElement<FpMatrix> {
    let mut out = alg.zero();
    for (&(a, b), p) in &x.terms {
        let delta = alg.basis(WeylElement::diag(a, b), 0).expect("diagonal unit symbol");
        out = alg.add(&out, &alg.mul(&delta, &alg.hdagger_embed(p)));
    }
    out
}

/// Inverse of [`e_map`]: `[η]^a` goes to `(x, y) ⊗ T^a` when `η = δ_{x,y}` or
/// `η = δ_{x,y}w` with `x ≥ y`, and to `(x, y) ⊗ τ⁻¹(T^a - T^{a+1})` when
/// `η = δ_{x,y}w` with `x < y`. Returns `None` off the span of the `[η]^a`.
pub fn g_map(alg: &HeckeAlgebra<ConcreteCoefficients>, ring: &QuotientRing, h: &HeckeElement<FpMatrix>) -> Option<TTElement<TwistedPoly>> {
    let bound = 2 * ring.degree() + 2;
    let tt = TwistedTensor::new(FlipRing(ring));
    let mut out = TTElement::zero();
    for (eta, coeff) in &h.terms {
        let parity = usize::from(eta.flip);
        for (a, c) in alg.coeffs.tstar_coordinates(coeff, parity, bound)? {
            let (z, p) = g_symbol(ring, eta, a);
            tt.add_term(&mut out, z, p.scale(c));
        }
    }
    Some(out)
}

/// Image of a single `[η]^a` under the inverse of [`e_map`].
pub fn g_symbol(ring: &QuotientRing, eta: &WeylElement, a: usize) -> (Z2, TwistedPoly) {
    let f = ring.field();
    let p = if eta.flip && eta.x < eta.y {
        let mut v = vec![0; a + 2];
        v[a] = f.inv(ring.tau());
        v[a + 1] = f.neg(v[a]);
        ring.poly(v)
    } else {
        ring.monomial(1, a)
    };
    ((eta.x, eta.y), p)
}

/// Outcome of checking an isomorphism candidate: round trips on a spanning
/// set and multiplicativity on random pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub round_trips: usize,
    pub round_trip_failures: usize,
    pub products: usize,
    pub product_failures: usize,
    pub twisting_axiom_failures: usize,
    pub first_failure: Option<String>,
}

impl IsoReport {
    pub fn passed(&self) -> bool {
        self.round_trip_failures == 0 && self.product_failures == 0 && self.twisting_axiom_failures == 0
    }

    pub(crate) fn fail(&mut self, what: impl FnOnce() -> String) {
        if self.first_failure.is_none() {
            self.first_failure = Some(what());
        }
    }
}

fn random_tt(ring: &QuotientRing, rng: &mut ChaCha8Rng, radius: i32) -> TTElement<TwistedPoly> {
    let tt = TwistedTensor::new(FlipRing(ring));
    let mut out = TTElement::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let a = (rng.gen_range(-radius..=radius), rng.gen_range(-radius..=radius));
        let coeffs = (0..ring.degree()).map(|_| rng.gen_range(0..ring.field().p())).collect();
        tt.add_term(&mut out, a, ring.poly(coeffs));
    }
    out
}

/// Checks `R[Z²] ⊗^ψ R[T]^τ/(Ϝ) ≅ ℋ†` through `E` and its inverse `G`.
pub fn iso_e_g(alg: &HeckeAlgebra<ConcreteCoefficients>, psi: &PsiTwist, radius: i32, pairs: usize, seed: u64) -> IsoReport {
    let ring = &psi.ring;
    let d = ring.degree();
    let tt = TwistedTensor::new(PsiTwist { ring: ring.clone() });
    let mut report = IsoReport::default();
    let window = super::lattice_window(radius);

    // the two branches of ψ agree on the diagonal and ψ fixes units
    for i in 0..d {
        let p = ring.monomial(1, i);
        for a in -radius..=radius {
            let (low, high) = psi.branches(&p, (a, a));
            if low != high {
                report.twisting_axiom_failures += 1;
                report.fail(|| format!("branches differ at ({a},{a}) on T^{i}"));
            }
        }
    }
    let samples: Vec<TwistedPoly> = (0..d).map(|i| ring.monomial(1, i)).collect();
    if !tt.unit_axioms_hold(&window, &samples) {
        report.twisting_axiom_failures += 1;
        report.fail(|| "unit axioms".into());
    }

    for &a in &window {
        for i in 0..d {
            let x = tt.pure(a, ring.monomial(1, i));
            report.round_trips += 1;
            let back = g_map(alg, ring, &e_map(alg, &x));
            if back.as_ref() != Some(&x) {
                report.round_trip_failures += 1;
                report.fail(|| format!("G(E({a:?} ⊗ T^{i})) = {back:?}"));
            }
        }
    }
    for &(x, y) in &window {
        for flip in [false, true] {
            let eta = WeylElement::new(x, y, flip);
            for j in (usize::from(flip)..d).step_by(2) {
                let h = alg.basis(eta, j).expect("parity respected");
                if h.is_zero() {
                    continue;
                }
                report.round_trips += 1;
                let ok = g_map(alg, ring, &h).map(|g| e_map(alg, &g)) == Some(h.clone());
                if !ok {
                    report.round_trip_failures += 1;
                    report.fail(|| format!("E(G([{eta:?}]^{j})) differs"));
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..pairs {
        let x = random_tt(ring, &mut rng, 2);
        let y = random_tt(ring, &mut rng, 2);
        report.products += 1;
        let lhs = e_map(alg, &tt.mul(&x, &y));
        let rhs = alg.mul(&e_map(alg, &x), &e_map(alg, &y));
        if lhs != rhs {
            report.product_failures += 1;
            report.fail(|| format!("E(x ∗ y) ≠ E(x)E(y) for x = {x:?}, y = {y:?}"));
        }
    }
    report
}
