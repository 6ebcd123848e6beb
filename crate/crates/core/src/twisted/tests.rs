use super::psi::{e_map, g_map};
use super::zeta::{e_prime, g_prime};
use super::*;
use crate::finhecke::{compute_fpoly, FinHecke};
use crate::heckealg::{ConcreteCoefficients, HeckeAlgebra};
use crate::modrep::{build_coefficient_system, CoefficientSystem, RepChoice, SystemConfig};
use crate::weyl::WeylElement;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn setup(k: usize, q: u32, ell: u32, choice: RepChoice) -> (Arc<CoefficientSystem>, HeckeAlgebra<ConcreteCoefficients>, PsiTwist) {
    let s = Arc::new(build_coefficient_system(&SystemConfig::new(k, q, ell, 0, choice)).unwrap());
    let alg = HeckeAlgebra::new(ConcreteCoefficients::new(s.clone()));
    let psi = build_psi(s.tau, &compute_fpoly(&s).unwrap()).unwrap();
    (s, alg, psi)
}

#[test]
fn flip_gives_componentwise_product() {
    let (_, _, psi) = setup(1, 5, 3, RepChoice::Rho);
    let ring = psi.ring.clone();
    let tt = TwistedTensor::new(FlipTwist { factor: ring.clone() });
    let t = ring.monomial(1, 1);
    let x = tt.pure((1, -1), t.clone());
    let y = tt.pure((2, 0), t.clone());
    assert_eq!(tt.mul(&x, &y), tt.pure((3, -1), ring.mul(&t, &t)));
    assert_eq!(tt.mul(&tt.unit(), &x), x);
}

#[test]
fn named_values_of_e_and_g() {
    let (_, alg, psi) = setup(1, 4, 3, RepChoice::ProjectiveCover);
    let ring = &psi.ring;
    let tt = TwistedTensor::new(FlipTwist { factor: ring.clone() });
    let x = tt.pure((0, 0), ring.monomial(1, 1));
    let w1 = alg.basis(WeylElement::w(), 1).unwrap();
    assert_eq!(e_map(&alg, &x), w1);
    assert_eq!(g_map(&alg, ring, &w1), Some(x));
    let d = tt.pure((2, -1), ring.monomial(1, 0));
    assert_eq!(e_map(&alg, &d), alg.basis(WeylElement::diag(2, -1), 0).unwrap());
}

fn degenerate(s: &CoefficientSystem) -> bool {
    s.tau == 1 && s.tstar.is_zero()
}

#[test]
fn first_isomorphism() {
    for (k, q, ell, choice) in [
        (1, 4, 3, RepChoice::ProjectiveCover),
        (1, 4, 3, RepChoice::Rho),
        (1, 4, 5, RepChoice::Rho),
        (1, 5, 2, RepChoice::Rho),
        (2, 2, 5, RepChoice::ProjectiveCover),
    ] {
        let (s, alg, psi) = setup(k, q, ell, choice);
        let report = iso_e_g(&alg, &psi, 3, 60, 1);
        assert_eq!(report.round_trip_failures, 0, "{report:?}");
        assert_eq!(report.twisting_axiom_failures, 0, "{report:?}");
        assert_eq!(report.product_failures == 0, degenerate(&s), "{k} {q} {ell}: {report:?}");
    }
}

#[test]
fn diagonal_symbols_do_not_multiply_like_lattice_points() {
    // [δ_{0,1}][δ_{0,-1}] = [tw][wt⁻¹] = τ[1] + [w']^1
    let (s, alg, psi) = setup(1, 4, 3, RepChoice::ProjectiveCover);
    let ring = &psi.ring;
    let tt = TwistedTensor::new(FlipTwist { factor: ring.clone() });
    let one = ring.monomial(1, 0);
    let lhs = alg.mul(&e_map(&alg, &tt.pure((0, 1), one.clone())), &e_map(&alg, &tt.pure((0, -1), one.clone())));
    let expected = alg.add(&alg.scale(&alg.unit(), s.tau), &alg.basis(WeylElement::w_prime(), 1).unwrap());
    assert_eq!(lhs, expected);
    assert_ne!(lhs, e_map(&alg, &tt.pure((0, 0), one)));
}

#[test]
fn zeta_isomorphism() {
    for (k, q, ell, choice) in [
        (1, 4, 3, RepChoice::ProjectiveCover),
        (1, 4, 3, RepChoice::Rho),
        (1, 4, 5, RepChoice::Rho),
        (1, 3, 2, RepChoice::Rho),
        (2, 2, 5, RepChoice::ProjectiveCover),
    ] {
        let (s, alg, psi) = setup(k, q, ell, choice);
        let report = iso_zeta(&alg, &psi.ring, 3, 40, 2);
        assert_eq!(report.round_trip_failures, 0, "{report:?}");
        assert_eq!(report.twisting_axiom_failures, 0, "{report:?}");
        assert_eq!(report.product_failures == 0, degenerate(&s), "{k} {q} {ell}: {report:?}");
    }
}

#[test]
fn named_values_of_g_prime() {
    let (s, alg, _) = setup(1, 4, 5, RepChoice::Rho);
    let fin = FinHecke::new(s.clone());
    let h = zeta::HeckeFactor { fin: FinHecke::new(s.clone()) };
    let f = s.iw_basis[0].clone();
    let tau_inv = s.field.inv(s.tau);
    let t_sym = alg.symbol(WeylElement::t(), 0, &f).unwrap();
    let expected_b = fin.w_part(f.clone()).sub(&fin.one_part(s.tstar.mul(&f))).scale(tau_inv);
    let tw = WeylElement::t().mul(&WeylElement::w());
    let g = g_prime(&h, &t_sym);
    assert_eq!(g.terms.len(), 1);
    assert_eq!(g.terms[&(tw.x, tw.y)], expected_b);
    let w_sym = alg.symbol(WeylElement::w(), 0, &f).unwrap();
    assert_eq!(g_prime(&h, &w_sym).terms[&(0, 0)], fin.w_part(f.clone()));
    assert_eq!(e_prime(&alg, &g), t_sym);
}

#[test]
fn composite_of_flips_is_a_flip() {
    let (s, _, _) = setup(1, 4, 5, RepChoice::Rho);
    let fin = FinHecke::new(s.clone());
    let b = fin.w_part(s.iw_basis[0].clone());
    let composed = ComposedTwist::new(
        zeta::HeckeFactor { fin: FinHecke::new(s.clone()) },
        Box::new(move |b, a| {
            let one = crate::tpoly::TwistedPoly::monomial(s.field, s.tau, 1, 0).unwrap();
            vec![(a, one, b.clone())]
        }),
    );
    let plain = FlipTwist { factor: zeta::HeckeFactor { fin } };
    for a in lattice_window(2) {
        assert_eq!(composed.twist(&b, a), plain.twist(&b, a));
    }
}

#[test]
fn twisted_products_are_associative_in_the_degenerate_case() {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (s, _, psi) = setup(1, 4, 3, RepChoice::Rho);
    let ring = psi.ring.clone();
    let tt = TwistedTensor::new(psi);
    let tz = TwistedTensor::new(build_zeta(FinHecke::new(s.clone())));
    for _ in 0..30 {
        let pick = |rng: &mut ChaCha8Rng| {
            let a = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            let c = (0..ring.degree()).map(|_| rng.gen_range(0..3)).collect();
            tt.pure(a, ring.poly(c))
        };
        let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        assert_eq!(tt.mul(&tt.mul(&x, &y), &z), tt.mul(&x, &tt.mul(&y, &z)));
        let fin = &tz.psi.factor.fin;
        let pick = |rng: &mut ChaCha8Rng| tz.pure((rng.gen_range(-2..=2), rng.gen_range(-2..=2)), fin.random(rng));
        let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        assert_eq!(tz.mul(&tz.mul(&x, &y), &z), tz.mul(&x, &tz.mul(&y, &z)));
    }
}

#[test]
fn twisted_products_lose_associativity() {
    // ψ with τ ≠ 1: ((0,0) ⊗ T)((0,1) ⊗ T)((0,1) ⊗ 1)
    let (s, _, psi) = setup(1, 4, 5, RepChoice::Rho);
    let ring = psi.ring.clone();
    let tt = TwistedTensor::new(psi);
    let (x, y, z) = (tt.pure((0, 0), ring.monomial(1, 1)), tt.pure((0, 1), ring.monomial(1, 1)), tt.pure((0, 1), ring.monomial(1, 0)));
    assert_ne!(tt.mul(&tt.mul(&x, &y), &z), tt.mul(&x, &tt.mul(&y, &z)));

    // ζ with T* ≠ 0: ((0,0) ⊗ [w])((0,1) ⊗ [w])((0,1) ⊗ [1])
    let tz = TwistedTensor::new(build_zeta(FinHecke::new(s.clone())));
    let fin = &tz.psi.factor.fin;
    let w = fin.w_part(s.iw_basis[0].clone());
    let (x, y, z) = (tz.pure((0, 0), w.clone()), tz.pure((0, 1), w), tz.pure((0, 1), fin.unit()));
    assert_ne!(tz.mul(&tz.mul(&x, &y), &z), tz.mul(&x, &tz.mul(&y, &z)));
}

#[test]
fn iwahori_models() {
    let r = iwahori_compare(4, 3, 2).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].model, IwahoriModel::GroupAlgebra);
    assert!(r[0].passed(), "{:?}", r[0]);
    let r = iwahori_compare(3, 2, 2).unwrap();
    assert!(r.iter().any(|x| x.model == IwahoriModel::AffineHecke));
    assert!(r.iter().all(|x| x.passed()), "{r:?}");
    let r = iwahori_compare(4, 5, 2).unwrap();
    assert_eq!(r[0].model, IwahoriModel::AffineHecke);
    assert!(r[0].passed(), "{:?}", r[0]);
    assert_eq!(iwahori_compare(4, 7, 1), Err(TwistError::WrongModularCase { q: 4, ell: 7 }));
}
