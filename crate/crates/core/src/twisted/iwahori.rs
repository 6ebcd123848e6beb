use super::TwistError;
use crate::gfp::PrimeField;
use crate::heckealg::{ConcreteCoefficients, HeckeAlgebra};
use crate::modrep::{build_coefficient_system, RepChoice, SystemConfig};
use crate::weyl::{Letter, WeylElement};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IwahoriModel {
    /// The group algebra of `Z² ⋊ S₂`.
    GroupAlgebra,
    /// The affine Hecke algebra `H(W̃, Q)` with `Q = q mod ℓ`.
    AffineHecke,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IwahoriReport {
    pub q: u32,
    pub ell: u32,
    pub model: IwahoriModel,
    pub products: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<String>,
}

impl IwahoriReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0
    }
}

type Sparse = BTreeMap<WeylElement, u32>;

fn add_to(out: &mut Sparse, e: WeylElement, c: u32, f: PrimeField) {
    let v = f.add(out.get(&e).copied().unwrap_or(0), c);
    if v == 0 {
        out.remove(&e);
    } else {
        out.insert(e, v);
    }
}

/// `T_s T_x = T_{sx}` if `l(sx) > l(x)`, else `Q T_{sx} + (Q - 1) T_x`.
fn reflect_left(s: &WeylElement, x: &Sparse, big_q: u32, f: PrimeField) -> Sparse {
    let mut out = Sparse::new();
    for (e, &c) in x {
        let se = s.mul(e);
        if se.length() > e.length() {
            add_to(&mut out, se, c, f);
        } else {
            add_to(&mut out, se, f.mul(c, big_q), f);
            add_to(&mut out, *e, f.mul(c, f.sub(big_q, 1)), f);
        }
    }
    out
}

/// `T_x T_y` in `H(W̃, Q)`, peeling a reduced expression of `x` from the right.
fn affine_hecke_product(x: &WeylElement, y: &WeylElement, big_q: u32, f: PrimeField) -> Sparse {
    let red = x.reduced_expression();
    let mut acc = Sparse::from([(*y, 1)]);
    for letter in red.letters.iter().rev() {
        let s = match letter {
            Letter::W => WeylElement::w(),
            Letter::WPrime => WeylElement::w_prime(),
        };
        acc = reflect_left(&s, &acc, big_q, f);
    }
    let shift = WeylElement::t_pow(red.alpha);
    acc.into_iter().map(|(e, c)| (shift.mul(&e), c)).collect()
}

/// Compares the Hecke algebra of the trivial representation of the Iwahori
/// subgroup (`k = 1`) with the classical models that apply to `(q, ℓ)`, on all
/// products of basis elements `[η]` with `|x|, |y| ≤ radius`.
pub fn iwahori_compare(q: u32, ell: u32, radius: i32) -> Result<Vec<IwahoriReport>, TwistError> {
    let mut models = Vec::new();
    if (q + 1) % ell == 0 {
        models.push(IwahoriModel::AffineHecke);
    }
    if (q - 1) % ell == 0 {
        models.push(IwahoriModel::GroupAlgebra);
    }
    if models.is_empty() {
        return Err(TwistError::WrongModularCase { q, ell });
    }
    let system = build_coefficient_system(&SystemConfig::new(1, q, ell, 0, RepChoice::Rho))
        .map_err(|e| TwistError::System(e.to_string()))?;
    let f = system.field;
    let alg = HeckeAlgebra::new(ConcreteCoefficients::new(Arc::new(system)));
    let elems: Vec<WeylElement> = (-radius..=radius)
        .flat_map(|x| (-radius..=radius).flat_map(move |y| [false, true].map(|fl| WeylElement::new(x, y, fl))))
        .collect();
    let big_q = q % ell;
    let mut reports: Vec<IwahoriReport> = models
        .iter()
        .map(|&model| IwahoriReport {
            q,
            ell,
            model,
            products: 0,
            mismatches: 0,
            first_mismatch: None,
        })
        .collect();
    for x in &elems {
        let bx = alg.basis(*x, 0).expect("unit coefficient");
        for y in &elems {
            let prod = alg.mul(&bx, &alg.basis(*y, 0).expect("unit coefficient"));
            let ours: Sparse = prod.terms.iter().map(|(e, m)| (*e, m.get(0, 0))).collect();
            for r in reports.iter_mut() {
                let theirs = match r.model {
                    IwahoriModel::GroupAlgebra => Sparse::from([(x.mul(y), 1)]),
                    IwahoriModel::AffineHecke => affine_hecke_product(x, y, big_q, f),
                };
                r.products += 1;
                if ours != theirs {
                    r.mismatches += 1;
                    if r.first_mismatch.is_none() {
                        r.first_mismatch = Some(format!("{x:?} * {y:?}: {ours:?} vs {theirs:?}"));
                    }
                }
            }
        }
    }
    Ok(reports)
}
