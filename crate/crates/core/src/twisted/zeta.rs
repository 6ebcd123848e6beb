use super::psi::{g_symbol, IsoReport, QuotientRing};
use super::{lattice_window, Factor, TTElement, TwistedTensor, TwistingMap, Z2};
use crate::finhecke::{FinHecke, FinHeckeElement};
use crate::gfp::FpMatrix;
use crate::heckealg::{commutation_class, ConcreteCoefficients, HeckeAlgebra, HeckeElement};
use crate::tpoly::TwistedPoly;
use crate::weyl::{Letter, ShapeClass, WeylElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The finite Hecke algebra `ℋ(𝒢, 𝒫, V)` as a tensor factor.
pub struct HeckeFactor {
    pub fin: FinHecke,
}

impl Factor for HeckeFactor {
    type Elem = FinHeckeElement;

    fn zero(&self) -> FinHeckeElement {
        self.fin.unit().scale(0)
    }

    fn one(&self) -> FinHeckeElement {
        self.fin.unit()
    }

    fn add(&self, a: &FinHeckeElement, b: &FinHeckeElement) -> FinHeckeElement {
        a.add(b)
    }

    fn scale(&self, a: &FinHeckeElement, s: u32) -> FinHeckeElement {
        a.scale(s)
    }

    fn mul(&self, a: &FinHeckeElement, b: &FinHeckeElement) -> FinHeckeElement {
        self.fin.mul(a, b)
    }

    fn is_zero(&self, a: &FinHeckeElement) -> bool {
        a.is_zero()
    }
}

impl HeckeFactor {
    /// `[1]^1_f = [1]_{T* f}`.
    fn one_tstar(&self, f: &FpMatrix) -> FinHeckeElement {
        self.fin.one_part(self.fin.system.tstar.mul(f))
    }

    /// `s · b` for `s ∈ R[T]^τ`, through `T^i ↦ [w^i]^i`.
    pub fn act(&self, s: &TwistedPoly, b: &FinHeckeElement) -> FinHeckeElement {
        let mut acc = self.zero();
        for (i, &c) in s.coeffs().iter().enumerate() {
            if c != 0 {
                acc = acc.add(&self.fin.mul(&self.fin.graded_power(i), b).scale(c));
            }
        }
        acc
    }

    pub fn basis(&self) -> Vec<FinHeckeElement> {
        let s = &self.fin.system;
        s.i1_basis
            .iter()
            .map(|f| self.fin.one_part(f.clone()))
            .chain(s.iw_basis.iter().map(|f| self.fin.w_part(f.clone())))
            .collect()
    }
}

/// `[1]_f ⊗ (α, β) ↦ (α, β) ⊗ [1]_f`, and `[w]_f ⊗ (α, β)` goes to
/// `(β, α) ⊗ [w]_f` if `α ≤ β`, otherwise to
/// `(α, β) ⊗ [1]^1_f + (β, α) ⊗ ([w]_f - [1]^1_f)`.
pub struct ZetaTwist {
    pub factor: HeckeFactor,
}

impl ZetaTwist {
    pub fn branches(&self, b: &FinHeckeElement, a: Z2) -> (TTElement<FinHeckeElement>, TTElement<FinHeckeElement>) {
        let h = &self.factor;
        let tt = TwistedTensor::new(FlipFactor(h));
        let swapped = (a.1, a.0);
        let mut low = TTElement::zero();
        tt.add_term(&mut low, a, h.fin.one_part(b.f1.clone()));
        let mut high = low.clone();
        tt.add_term(&mut low, swapped, h.fin.w_part(b.fw.clone()));
        let t1 = h.one_tstar(&b.fw);
        tt.add_term(&mut high, a, t1.clone());
        tt.add_term(&mut high, swapped, h.fin.w_part(b.fw.clone()).sub(&t1));
        (low, high)
    }
}

struct FlipFactor<'a>(&'a HeckeFactor);

impl TwistingMap for FlipFactor<'_> {
    type F = HeckeFactor;
    fn factor(&self) -> &HeckeFactor {
        self.0
    }
    fn twist(&self, b: &FinHeckeElement, a: Z2) -> TTElement<FinHeckeElement> {
        let mut out = TTElement::zero();
        if !b.is_zero() {
            out.terms.insert(a, b.clone());
        }
        out
    }
}

impl TwistingMap for ZetaTwist {
    type F = HeckeFactor;

    fn factor(&self) -> &HeckeFactor {
        &self.factor
    }

    fn twist(&self, b: &FinHeckeElement, a: Z2) -> TTElement<FinHeckeElement> {
        let (low, high) = self.branches(b, a);
        if a.0 <= a.1 {
            low
        } else {
            high
        }
    }
}

pub fn build_zeta(fin: FinHecke) -> ZetaTwist {
    ZetaTwist {
        factor: HeckeFactor { fin },
    }
}

type Psi2 = Box<dyn Fn(&FinHeckeElement, Z2) -> Vec<(Z2, TwistedPoly, FinHeckeElement)>>;

/// `ψ₃ = γ ∘ ψ₂ ∘ (id ⊗ ι)`: `ψ₂` sends `b ⊗ ((α, β) ⊗ 1)` to a sum of
/// `(α', β') ⊗ s ⊗ b'` and `γ` folds `s` into `b'`.
pub struct ComposedTwist {
    pub factor: HeckeFactor,
    psi2: Psi2,
}

impl ComposedTwist {
    pub fn new(factor: HeckeFactor, psi2: Psi2) -> Self {
        Self { factor, psi2 }
    }
}

impl TwistingMap for ComposedTwist {
    type F = HeckeFactor;

    fn factor(&self) -> &HeckeFactor {
        &self.factor
    }

    fn twist(&self, b: &FinHeckeElement, a: Z2) -> TTElement<FinHeckeElement> {
        let tt = TwistedTensor::new(FlipFactor(&self.factor));
        let mut out = TTElement::zero();
        for (z, s, b2) in (self.psi2)(b, a) {
            tt.add_term(&mut out, z, self.factor.act(&s, &b2));
        }
        out
    }
}

/// The finite-by-affine twist on `[1]_{f₁} + [w]_{f_w}` against `[η]^a`,
/// written as a list of `[η']^{a'} ⊗ b'`.
pub fn big_psi(h: &HeckeFactor, b: &FinHeckeElement, eta: &WeylElement, a: usize) -> Vec<(WeylElement, usize, FinHeckeElement)> {
    let fin = &h.fin;
    let field = fin.system.field;
    let tau = fin.system.tau;
    let w = WeylElement::w();
    let conj = w.mul(eta).mul(&w);
    let wf = fin.w_part(b.fw.clone());
    let t1 = h.one_tstar(&b.fw);
    let mut out = vec![(*eta, a, fin.one_part(b.f1.clone()))];
    match commutation_class(eta) {
        ShapeClass::A => out.push((conj, a, wf)),
        ShapeClass::B => {
            out.push((conj, a, wf.scale(tau)));
            out.push((*eta, a, t1));
        }
        ShapeClass::C => out.push((conj, a, wf.sub(&t1).scale(field.inv(tau)))),
        ShapeClass::D | ShapeClass::PureT => {
            out.push((conj, a, wf.sub(&t1)));
            out.push((*eta, a, t1));
        }
    }
    out
}

/// `ψ₃` built from the first twisting map (through its inverse isomorphism on
/// `[η]^a`) and the finite-by-affine twist.
pub fn build_psi3(fin: FinHecke, ring: QuotientRing) -> ComposedTwist {
    let helper = HeckeFactor {
        fin: FinHecke::new(fin.system.clone()),
    };
    let psi2: Psi2 = Box::new(move |b, (x, y)| {
        big_psi(&helper, b, &WeylElement::diag(x, y), 0)
            .into_iter()
            .map(|(eta, j, b2)| {
                let (z, s) = g_symbol(&ring, &eta, j);
                (z, s, b2)
            })
            .collect()
    });
    ComposedTwist::new(HeckeFactor { fin }, psi2)
}

/// `E'((α, β) ⊗ ([1]_{f₁} + [w]_{f_w})) = [δ_{α,β}] ∗ ([1]_{f₁} + [w]_{f_w})`.
pub fn e_prime(alg: &HeckeAlgebra<ConcreteCoefficients>, x: &TTElement<FinHeckeElement>) -> HeckeElement<FpMatrix> {
    let mut out = alg.zero();
    for (&(a, b), el) in &x.terms {
        let delta = alg.basis(WeylElement::diag(a, b), 0).expect("unit symbol");
        let fin = alg.add(
            &alg.symbol(WeylElement::identity(), 0, &el.f1).expect("I1 coefficient"),
            &alg.symbol(WeylElement::w(), 0, &el.fw).expect("Iw coefficient"),
        );
        out = alg.add(&out, &alg.mul(&delta, &fin));
    }
    out
}

fn ends_on_w(eta: &WeylElement) -> bool {
    eta.reduced_expression().letters.last() == Some(&Letter::W)
}

/// Inverse of [`e_prime`]: `[η]_f` goes to `(x, y) ⊗ [1]_f` for diagonal
/// `η = δ_{x,y}`; otherwise with `ηw = δ_{x,y}` to `(x, y) ⊗ [w]_f` if a reduced
/// expression of `η` ends on `w`, and to `τ⁻¹ (x, y) ⊗ ([w]_f - [1]^1_f)` if not.
pub fn g_prime(h: &HeckeFactor, x: &HeckeElement<FpMatrix>) -> TTElement<FinHeckeElement> {
    let tt = TwistedTensor::new(FlipFactor(h));
    let fin = &h.fin;
    let mut out = TTElement::zero();
    for (eta, f) in &x.terms {
        if !eta.flip {
            tt.add_term(&mut out, (eta.x, eta.y), fin.one_part(f.clone()));
            continue;
        }
        let d = eta.mul(&WeylElement::w());
        let b = if ends_on_w(eta) {
            fin.w_part(f.clone())
        } else {
            let tau_inv = fin.system.field.inv(fin.system.tau);
            fin.w_part(f.clone()).sub(&h.one_tstar(f)).scale(tau_inv)
        };
        tt.add_term(&mut out, (d.x, d.y), b);
    }
    out
}

fn random_fin(h: &HeckeFactor, rng: &mut ChaCha8Rng, radius: i32) -> TTElement<FinHeckeElement> {
    let tt = TwistedTensor::new(FlipFactor(h));
    let mut out = TTElement::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let a = (rng.gen_range(-radius..=radius), rng.gen_range(-radius..=radius));
        tt.add_term(&mut out, a, h.fin.random(rng));
    }
    out
}

/// Checks `R[Z²] ⊗^ζ ℋ(𝒢, 𝒫, V) ≅ ℋ(G, 𝒫, V)` through `E'` and `G'`, and that
/// the composite `ψ₃` agrees with `ζ` on basis pairs.
pub fn iso_zeta(alg: &HeckeAlgebra<ConcreteCoefficients>, ring: &QuotientRing, radius: i32, pairs: usize, seed: u64) -> IsoReport {
    let system = alg.coeffs.system.clone();
    let zeta = build_zeta(FinHecke::new(system.clone()));
    let psi3 = build_psi3(FinHecke::new(system.clone()), ring.clone());
    let h = &zeta.factor;
    let basis = h.basis();
    let window = lattice_window(radius);
    let tt = TwistedTensor::new(zeta);
    let mut report = IsoReport::default();

    if !tt.unit_axioms_hold(&window, &basis) {
        report.twisting_axiom_failures += 1;
        report.fail(|| "unit axioms for ζ".into());
    }
    for b in &basis {
        for a in -radius..=radius {
            let (low, high) = tt.psi.branches(b, (a, a));
            if low != high {
                report.twisting_axiom_failures += 1;
                report.fail(|| format!("ζ branches differ at ({a},{a})"));
            }
        }
        for &a in &lattice_window(radius.min(2)) {
            if psi3.twist(b, a) != tt.psi.twist(b, a) {
                report.twisting_axiom_failures += 1;
                report.fail(|| format!("ψ₃ and ζ differ at {a:?}"));
            }
        }
    }

    let h = &tt.psi.factor;
    for &a in &window {
        for b in &basis {
            let x = tt.pure(a, b.clone());
            report.round_trips += 1;
            if g_prime(h, &e_prime(alg, &x)) != x {
                report.round_trip_failures += 1;
                report.fail(|| format!("G'(E'({a:?} ⊗ b)) differs"));
            }
        }
    }
    for &(x, y) in &window {
        for flip in [false, true] {
            let eta = WeylElement::new(x, y, flip);
            let fs = if flip { &system.iw_basis } else { &system.i1_basis };
            for f in fs {
                let sym = alg.symbol(eta, 0, f).expect("basis coefficient");
                report.round_trips += 1;
                if e_prime(alg, &g_prime(h, &sym)) != sym {
                    report.round_trip_failures += 1;
                    report.fail(|| format!("E'(G'([{eta:?}]_f)) differs"));
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..pairs {
        let x = random_fin(h, &mut rng, 2);
        let y = random_fin(h, &mut rng, 2);
        report.products += 1;
        let lhs = e_prime(alg, &tt.mul(&x, &y));
        let rhs = alg.mul(&e_prime(alg, &x), &e_prime(alg, &y));
        if lhs != rhs {
            report.product_failures += 1;
            report.fail(|| "E'(x ∗ y) ≠ E'(x)E'(y)".into());
        }
    }
    report
}
