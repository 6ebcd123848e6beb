//! The finite Hecke algebra `End_{F_ℓ[𝒫]}(ind V)`, presented by the pair of
//! operators attached to the double cosets of `1` and `w`.

mod oracle;

pub use oracle::ConvolutionOracle;

use crate::gfp::{minimal_monic_relation, FpMatrix, FqField, FqMat, GfpError};
use crate::modrep::{CoefficientSystem, GeneralLinear};
use crate::tpoly::{tp_reduce, TwistedPoly};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FinHeckeError {
    #[error("group of order {0} is too large to enumerate")]
    TooLarge(usize),
    #[error("convolution is not bi-equivariant: {0}")]
    NotBiEquivariant(String),
    #[error("operator does not lie in the expected intertwiner space")]
    NotIntertwiner,
    #[error("relation {0} does not generate the full kernel")]
    KernelNotPrincipal(String),
    #[error(transparent)]
    Field(#[from] GfpError),
}

/// `[1]_{f1} + [w]_{fw}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinHeckeElement {
    pub f1: FpMatrix,
    pub fw: FpMatrix,
}

impl FinHeckeElement {
    pub fn add(&self, o: &Self) -> Self {
        Self {
            f1: self.f1.add(&o.f1),
            fw: self.fw.add(&o.fw),
        }
    }

    pub fn scale(&self, s: u32) -> Self {
        Self {
            f1: self.f1.scale(s),
            fw: self.fw.scale(s),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            f1: self.f1.sub(&o.f1),
            fw: self.fw.sub(&o.fw),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.f1.is_zero() && self.fw.is_zero()
    }
}

pub struct FinHecke {
    pub system: Arc<CoefficientSystem>,
}

impl FinHecke {
    pub fn new(system: Arc<CoefficientSystem>) -> Self {
        Self { system }
    }

    fn zero_op(&self) -> FpMatrix {
        FpMatrix::zeros(self.system.field, self.system.dim(), self.system.dim())
    }

    pub fn unit(&self) -> FinHeckeElement {
        FinHeckeElement {
            f1: self.system.identity(),
            fw: self.zero_op(),
        }
    }

    pub fn element(&self, f1: FpMatrix, fw: FpMatrix) -> Result<FinHeckeElement, FinHeckeError> {
        if !self.system.in_i1(&f1) || !self.system.in_iw(&fw) {
            return Err(FinHeckeError::NotIntertwiner);
        }
        Ok(FinHeckeElement { f1, fw })
    }

    pub fn one_part(&self, f: FpMatrix) -> FinHeckeElement {
        FinHeckeElement { f1: f, fw: self.zero_op() }
    }

    pub fn w_part(&self, f: FpMatrix) -> FinHeckeElement {
        FinHeckeElement { f1: self.zero_op(), fw: f }
    }

    pub fn random(&self, rng: &mut dyn RngCore) -> FinHeckeElement {
        let p = self.system.field.p();
        let mut pick = |basis: &[FpMatrix]| {
            let mut acc = self.zero_op();
            for b in basis {
                acc.axpy(rng.gen_range(0..p), b);
            }
            acc
        };
        let f1 = pick(&self.system.i1_basis);
        let fw = pick(&self.system.iw_basis);
        FinHeckeElement { f1, fw }
    }

    /// Product from the quadratic relation `[w]^2 = τ[1] + [w]_{T*}`.
    pub fn mul(&self, a: &FinHeckeElement, b: &FinHeckeElement) -> FinHeckeElement {
        let tau = self.system.tau;
        let ww = a.fw.mul(&b.fw);
        let f1 = a.f1.mul(&b.f1).add(&ww.scale(tau));
        let fw = a
            .f1
            .mul(&b.fw)
            .add(&a.fw.mul(&b.f1))
            .add(&self.system.tstar.mul(&ww));
        FinHeckeElement { f1, fw }
    }

    /// `[w^i]^i`: `[1]_{T*^i}` for even `i`, `[w]_{T*^i}` for odd `i`.
    pub fn graded_power(&self, i: usize) -> FinHeckeElement {
        let m = self.system.tstar.pow(i as u64);
        if i % 2 == 0 {
            self.one_part(m)
        } else {
            self.w_part(m)
        }
    }
}

/// The monic generator `Ϝ` of the kernel of `R[T]^τ → H(G, 𝒫, V)`, `T ↦ [w]^1`,
/// together with the data it was computed from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharPoly {
    pub l: u32,
    pub q: u32,
    pub k: usize,
    #[serde(rename = "V")]
    pub v: String,
    /// Coefficients from the constant term up; the last entry is `1`.
    pub coeffs: Vec<u32>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn to_twisted(&self, tau: u32) -> Result<TwistedPoly, crate::tpoly::TpolyError> {
        let f = crate::gfp::PrimeField::new(self.l).expect("stored characteristic is prime");
        TwistedPoly::new(f, tau, self.coeffs.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{i}"),
            };
            parts.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}{mono}"),
            });
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn graded_powers(system: &CoefficientSystem, top: usize) -> (Vec<FpMatrix>, Vec<FpMatrix>) {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    let mut cur = system.identity();
    for i in 0..=top {
        if i % 2 == 0 {
            even.push(cur.clone());
        } else {
            odd.push(cur.clone());
        }
        cur = cur.mul(&system.tstar);
    }
    (even, odd)
}

/// Minimal monic relation among the `[w^i]^i`, checked against the full kernel
/// in degrees up to twice its own degree.
pub fn compute_fpoly(system: &CoefficientSystem) -> Result<CharPoly, FinHeckeError> {
    let bound = 2 * system.dim() + 2;
    let (even, odd) = graded_powers(system, bound);
    let mut coeffs = minimal_monic_relation(&even, &odd)?;
    coeffs.push(1);
    let out = CharPoly {
        l: system.config.ell,
        q: system.config.q,
        k: system.config.k,
        v: system.config.descriptor(),
        coeffs,
    };
    verify_kernel(system, &out)?;
    Ok(out)
}

fn verify_kernel(system: &CoefficientSystem, fp: &CharPoly) -> Result<(), FinHeckeError> {
    let d = fp.degree();
    let top = 2 * d.max(1);
    let (even, odd) = graded_powers(system, top);
    let cells = system.dim() * system.dim();
    let f = system.field;
    let sys = FpMatrix::from_fn(f, 2 * cells, top + 1, |r, c| {
        let (block, cell) = (r / cells, r % cells);
        if block != c % 2 {
            return 0;
        }
        let m = if c % 2 == 0 { &even[c / 2] } else { &odd[c / 2] };
        m.data()[cell] as i64
    });
    let modulus = fp.to_twisted(system.tau).map_err(|_| FinHeckeError::KernelNotPrincipal(fp.to_string()))?;
    for v in sys.nullspace() {
        let p = TwistedPoly::new(f, system.tau, v).map_err(|_| FinHeckeError::KernelNotPrincipal(fp.to_string()))?;
        if !tp_reduce(&p, &modulus).rep.is_zero() {
            return Err(FinHeckeError::KernelNotPrincipal(fp.to_string()));
        }
    }
    Ok(())
}

/// The square of `T* = Σ_g (g, -g⁻¹)` in the group algebra of `GL_k × GL_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TStarSquare {
    pub k: usize,
    pub q: u32,
    pub ell: u32,
    pub is_zero: bool,
    pub support: usize,
    /// `c` with `T*² = c·T*`, when such a scalar exists.
    pub multiple_of_tstar: Option<u32>,
}

pub fn tstar_square_check(k: usize, q: u32, ell: u32) -> Result<TStarSquare, FinHeckeError> {
    let field = FqField::new(q)?;
    let fl = crate::gfp::PrimeField::new(ell)?;
    let gl = GeneralLinear::new(k, field);
    let n = gl.order();
    let tstar: HashMap<(usize, usize), u32> = (0..n).map(|g| ((g, gl.neg_inverse(g)), 1)).collect();
    let mut sq: HashMap<(usize, usize), u32> = HashMap::new();
    for (&(a1, d1), &c1) in &tstar {
        for (&(a2, d2), &c2) in &tstar {
            let key = (gl.table.mul(a1, a2), gl.table.mul(d1, d2));
            let e = sq.entry(key).or_insert(0);
            *e = fl.add(*e, fl.mul(c1, c2));
        }
    }
    sq.retain(|_, c| *c != 0);
    let multiple_of_tstar = if sq.is_empty() {
        Some(0)
    } else {
        let c = *sq.values().next().unwrap();
        (sq.len() == tstar.len() && tstar.keys().all(|key| sq.get(key) == Some(&c))).then_some(c)
    };
    Ok(TStarSquare {
        k,
        q,
        ell,
        is_zero: sq.is_empty(),
        support: sq.len(),
        multiple_of_tstar,
    })
}

/// Number of left `𝒫`-cosets inside the double coset `𝒫w𝒫` of `GL_{2k}(q)`,
/// counted as the `𝒫`-orbit of `w𝒫`.
pub fn coset_count(k: usize, q: u32) -> Result<usize, FinHeckeError> {
    let field = FqField::new(q)?;
    let gl = GeneralLinear::new(k, field.clone());
    let size = gl.order().pow(2) * (q as usize).pow((k * k) as u32);
    if size > 2_000_000 {
        return Err(FinHeckeError::TooLarge(size));
    }
    let id = FqMat::identity(k);
    let zero = FqMat::zeros(k, k);
    let w = FqMat::from_blocks(&zero, &id, &id, &zero);
    let tops = FqMat::enumerate_all(k, k, &field);
    let mut seen = HashSet::new();
    for a in &gl.elements {
        for d in &gl.elements {
            for b in &tops {
                let p = FqMat::from_blocks(a, b, &zero, d);
                seen.insert(p.mul(&w, &field).column_span_key(k, &field));
            }
        }
    }
    Ok(seen.len())
}
