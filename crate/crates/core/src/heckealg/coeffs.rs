use crate::gfp::{FpMatrix, FpPoly, PrimeField};
use crate::modrep::CoefficientSystem;
use rand::{Rng, RngCore};
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::sync::Arc;

/// The graded coefficient ring `I₁ ⊕ I_w` with its central element `T*`.
pub trait Coefficients: Send + Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn field(&self) -> PrimeField;
    fn tau(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn tstar(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, a: &Self::Elem, s: u32) -> Self::Elem;
    fn compose(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Whether `a` lies in `I₁` (grade 0) or `I_w` (grade 1).
    fn belongs(&self, a: &Self::Elem, grade: u8) -> bool;
    fn render(&self, a: &Self::Elem) -> String;

    /// `p(T*) ∘ a`.
    fn apply_tstar_poly(&self, p: &FpPoly, a: &Self::Elem) -> Self::Elem {
        let t = self.tstar();
        let mut acc = self.zero();
        for &c in p.coeffs().iter().rev() {
            acc = self.compose(&t, &acc);
            if c != 0 {
                acc = self.add(&acc, &self.scale(a, c));
            }
        }
        acc
    }

    /// `(T*)^j ∘ a`.
    fn tstar_power(&self, j: usize, a: &Self::Elem) -> Self::Elem {
        self.apply_tstar_poly(&FpPoly::monomial(self.field(), 1, j), a)
    }

    /// Coefficients `r_i` (for `i ≡ parity`, `i < bound`) with
    /// `Σ r_i (T*)^i = a`, if `a` is such a combination.
    fn tstar_coordinates(&self, a: &Self::Elem, parity: usize, bound: usize) -> Option<Vec<(usize, u32)>>;

    /// A random element of `I₁` (grade 0) or `I_w` (grade 1).
    fn sample(&self, rng: &mut dyn RngCore, grade: u8) -> Self::Elem;
}

/// Coefficients realised as matrices on a concrete module `V`.
#[derive(Debug, Clone)]
pub struct ConcreteCoefficients {
    pub system: Arc<CoefficientSystem>,
}

impl ConcreteCoefficients {
    pub fn new(system: Arc<CoefficientSystem>) -> Self {
        Self { system }
    }
}

impl Coefficients for ConcreteCoefficients {
    type Elem = FpMatrix;

    fn field(&self) -> PrimeField {
        self.system.field
    }

    fn tau(&self) -> u32 {
        self.system.tau
    }

    fn zero(&self) -> FpMatrix {
        FpMatrix::zeros(self.system.field, self.system.dim(), self.system.dim())
    }

    fn one(&self) -> FpMatrix {
        self.system.identity()
    }

    fn tstar(&self) -> FpMatrix {
        self.system.tstar.clone()
    }

    fn add(&self, a: &FpMatrix, b: &FpMatrix) -> FpMatrix {
        a.add(b)
    }

    fn scale(&self, a: &FpMatrix, s: u32) -> FpMatrix {
        a.scale(s)
    }

    fn compose(&self, a: &FpMatrix, b: &FpMatrix) -> FpMatrix {
        a.mul(b)
    }

    fn is_zero(&self, a: &FpMatrix) -> bool {
        a.is_zero()
    }

    fn belongs(&self, a: &FpMatrix, grade: u8) -> bool {
        if grade == 0 {
            self.system.in_i1(a)
        } else {
            self.system.in_iw(a)
        }
    }

    fn render(&self, a: &FpMatrix) -> String {
        if a.is_identity() {
            "id".into()
        } else if a.rows() == 1 {
            a.get(0, 0).to_string()
        } else {
            format!("<{}x{} map>", a.rows(), a.cols())
        }
    }

    fn apply_tstar_poly(&self, p: &FpPoly, a: &FpMatrix) -> FpMatrix {
        let t = &self.system.tstar;
        let mut acc = self.zero();
        for &c in p.coeffs().iter().rev() {
            acc = t.mul(&acc);
            if c != 0 {
                acc.axpy(c, a);
            }
        }
        acc
    }

    fn tstar_coordinates(&self, a: &FpMatrix, parity: usize, bound: usize) -> Option<Vec<(usize, u32)>> {
        let degs: Vec<usize> = (parity..bound).step_by(2).collect();
        let one = self.one();
        let cols: Vec<FpMatrix> = degs.iter().map(|&i| self.tstar_power(i, &one)).collect();
        let len = a.rows() * a.cols();
        let sys = FpMatrix::from_fn(self.field(), len, cols.len(), |r, c| cols[c].data()[r] as i64);
        let sol = if cols.is_empty() {
            if a.is_zero() {
                Some(Vec::new())
            } else {
                None
            }
        } else {
            sys.solve(a.data())
        };
        sol.map(|s| degs.into_iter().zip(s).filter(|&(_, c)| c != 0).collect())
    }

    fn sample(&self, rng: &mut dyn RngCore, grade: u8) -> FpMatrix {
        let basis = if grade == 0 { &self.system.i1_basis } else { &self.system.iw_basis };
        let p = self.field().p();
        let mut acc = self.zero();
        for b in basis {
            acc.axpy(rng.gen_range(0..p), b);
        }
        acc
    }
}

/// A free coefficient word: a product of named generators.
pub type Word = Vec<u8>;

/// Formal coefficients: `R`-combinations of generator words times polynomials
/// in a central `T*`, optionally modulo a relation `m(T*) = 0`.
#[derive(Debug, Clone)]
pub struct FreeCoefficients {
    field: PrimeField,
    tau: u32,
    grades: Vec<u8>,
    names: Vec<String>,
    relation: Option<FpPoly>,
}

pub type FreeElem = BTreeMap<Word, FpPoly>;

impl FreeCoefficients {
    /// `gens` lists generator names with their grade (0 for `I₁`, 1 for `I_w`).
    pub fn new(field: PrimeField, tau: u32, gens: &[(&str, u8)], relation: Option<FpPoly>) -> Self {
        Self {
            field,
            tau: field.reduce(tau as i64),
            grades: gens.iter().map(|g| g.1 % 2).collect(),
            names: gens.iter().map(|g| g.0.to_string()).collect(),
            relation: relation.map(|r| r.monic()),
        }
    }

    pub fn generator_count(&self) -> usize {
        self.grades.len()
    }

    pub fn generator_grade(&self, i: usize) -> u8 {
        self.grades[i]
    }

    pub fn relation(&self) -> Option<&FpPoly> {
        self.relation.as_ref()
    }

    /// The element `word · (T*)^j`.
    pub fn monomial(&self, word: Word, j: usize) -> FreeElem {
        self.normalize(BTreeMap::from([(word, FpPoly::monomial(self.field, 1, j))]))
    }

    pub fn word_grade(&self, w: &[u8]) -> u8 {
        w.iter().map(|&g| self.grades[g as usize]).sum::<u8>() % 2
    }

    fn normalize(&self, mut e: FreeElem) -> FreeElem {
        if let Some(r) = &self.relation {
            for p in e.values_mut() {
                *p = p.rem(r);
            }
        }
        e.retain(|_, p| !p.is_zero());
        e
    }
}

impl Coefficients for FreeCoefficients {
    type Elem = FreeElem;

    fn field(&self) -> PrimeField {
        self.field
    }

    fn tau(&self) -> u32 {
        self.tau
    }

    fn zero(&self) -> FreeElem {
        FreeElem::new()
    }

    fn one(&self) -> FreeElem {
        self.monomial(Vec::new(), 0)
    }

    fn tstar(&self) -> FreeElem {
        self.monomial(Vec::new(), 1)
    }

    fn add(&self, a: &FreeElem, b: &FreeElem) -> FreeElem {
        let mut out = a.clone();
        for (w, p) in b {
            let e = out.entry(w.clone()).or_insert_with(|| FpPoly::zero(self.field));
            *e = e.add(p);
        }
        self.normalize(out)
    }

    fn scale(&self, a: &FreeElem, s: u32) -> FreeElem {
        self.normalize(a.iter().map(|(w, p)| (w.clone(), p.scale(s))).collect())
    }

    fn compose(&self, a: &FreeElem, b: &FreeElem) -> FreeElem {
        let mut out = FreeElem::new();
        for (w1, p1) in a {
            for (w2, p2) in b {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                let e = out.entry(w).or_insert_with(|| FpPoly::zero(self.field));
                *e = e.add(&p1.mul(p2));
            }
        }
        self.normalize(out)
    }

    fn is_zero(&self, a: &FreeElem) -> bool {
        a.is_empty()
    }

    fn belongs(&self, a: &FreeElem, grade: u8) -> bool {
        a.iter().all(|(w, p)| {
            let wg = self.word_grade(w) as usize;
            p.coeffs()
                .iter()
                .enumerate()
                .all(|(j, &c)| c == 0 || (wg + j) % 2 == grade as usize)
        })
    }

    fn render(&self, a: &FreeElem) -> String {
        if a.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = a
            .iter()
            .map(|(w, p)| {
                let word: String = if w.is_empty() {
                    "1".into()
                } else {
                    w.iter().map(|&g| self.names[g as usize].as_str()).collect::<Vec<_>>().join("")
                };
                let poly: Vec<String> = p
                    .coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(j, &c)| match j {
                        0 => format!("{c}"),
                        1 => format!("{c}T*"),
                        _ => format!("{c}T*^{j}"),
                    })
                    .collect();
                format!("({})·{}", poly.join("+"), word)
            })
            .collect();
        parts.join(" + ")
    }

    fn apply_tstar_poly(&self, p: &FpPoly, a: &FreeElem) -> FreeElem {
        self.normalize(a.iter().map(|(w, q)| (w.clone(), q.mul(p))).collect())
    }

    fn tstar_coordinates(&self, a: &FreeElem, parity: usize, bound: usize) -> Option<Vec<(usize, u32)>> {
        if a.is_empty() {
            return Some(Vec::new());
        }
        if a.len() > 1 || !a.contains_key(&Vec::new()) {
            return None;
        }
        let p = &a[&Vec::new()];
        let coeffs: Vec<(usize, u32)> = p.coeffs().iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
        coeffs
            .iter()
            .all(|&(i, _)| i % 2 == parity && i < bound)
            .then_some(coeffs)
    }

    fn sample(&self, rng: &mut dyn RngCore, grade: u8) -> FreeElem {
        let p = self.field.p();
        let mut acc = FreeElem::new();
        for _ in 0..rng.gen_range(1..=2) {
            let len = rng.gen_range(0..=2);
            let word: Word = (0..len).map(|_| rng.gen_range(0..self.grades.len()) as u8).collect();
            let j = 2 * rng.gen_range(0..=1) + ((self.word_grade(&word) + grade) % 2) as usize;
            let c = rng.gen_range(1..p);
            acc = self.add(&acc, &self.scale(&self.monomial(word, j), c));
        }
        acc
    }
}
