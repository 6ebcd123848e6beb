use super::{FinHeckeElement, FinHeckeError};
use crate::gfp::{FpMatrix, FqField, FqMat};
use crate::modrep::CoefficientSystem;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::sync::Arc;

const MAX_ORDER: usize = 70_000;

/// Elements of `End(V)`-valued functions on `GL_{2k}(q)` that transform as
/// `φ(p₁gp₂) = σ(p₁)φ(g)σ(p₂)`, convolved over coset representatives of `G/𝒫`.
pub struct ConvolutionOracle {
    system: Arc<CoefficientSystem>,
    field: FqField,
    k: usize,
    reps: Vec<(FqMat, FqMat)>,
    w: FqMat,
    middle: Option<FqMat>,
}

impl ConvolutionOracle {
    pub fn new(system: Arc<CoefficientSystem>) -> Result<Self, FinHeckeError> {
        let k = system.config.k;
        let field = system.gl.field.clone();
        let order = (field.q() as usize).pow((4 * k * k) as u32);
        if order > MAX_ORDER {
            return Err(FinHeckeError::TooLarge(order));
        }
        let mut seen = HashSet::new();
        let mut reps = Vec::new();
        for g in FqMat::enumerate_gl(2 * k, &field) {
            if seen.insert(g.column_span_key(k, &field)) {
                let gi = g.inverse(&field).unwrap();
                reps.push((g, gi));
            }
        }
        let id = FqMat::identity(k);
        let zero = FqMat::zeros(k, k);
        let w = FqMat::from_blocks(&zero, &id, &id, &zero);
        // permutation matrix exchanging the k-th and (k+1)-th basis vectors
        let middle = (k > 1).then(|| {
            let mut m = FqMat::identity(2 * k);
            m.set(k - 1, k - 1, 0);
            m.set(k, k, 0);
            m.set(k - 1, k, 1);
            m.set(k, k - 1, 1);
            m
        });
        Ok(Self {
            system,
            field,
            k,
            reps,
            w,
            middle,
        })
    }

    pub fn coset_count(&self) -> usize {
        self.reps.len()
    }

    fn sigma(&self, a: &FqMat, d: &FqMat) -> &FpMatrix {
        let gl = &self.system.gl;
        self.system.sigma(gl.index_of(a), gl.index_of(d))
    }

    /// Value of the function attached to `x` at the group element `g`.
    pub fn evaluate(&self, x: &FinHeckeElement, g: &FqMat) -> FpMatrix {
        let (k, f) = (self.k, &self.field);
        let a = g.block(0, 0, k, k);
        let b = g.block(0, k, k, k);
        let c = g.block(k, 0, k, k);
        let d = g.block(k, k, k, k);
        if c.is_zero() {
            return self.sigma(&a, &d).mul(&x.f1);
        }
        match c.inverse(f) {
            Some(ci) => {
                let left = b.sub(&a.mul(&ci, f).mul(&d, f), f);
                self.sigma(&left, &c).mul(&x.fw)
            }
            None => FpMatrix::zeros(self.system.field, self.system.dim(), self.system.dim()),
        }
    }

    /// `(φ₁ ∗ φ₂)(g) = Σ_{y ∈ G/𝒫} φ₁(y) φ₂(y⁻¹g)`.
    pub fn convolve_at(&self, a: &FinHeckeElement, b: &FinHeckeElement, g: &FqMat) -> FpMatrix {
        let n = self.system.dim();
        let mut acc = FpMatrix::zeros(self.system.field, n, n);
        for (y, yi) in &self.reps {
            let left = self.evaluate(a, y);
            if left.is_zero() {
                continue;
            }
            let right = self.evaluate(b, &yi.mul(g, &self.field));
            if !right.is_zero() {
                acc = acc.add(&left.mul(&right));
            }
        }
        acc
    }

    fn random_parahoric(&self, rng: &mut ChaCha8Rng) -> FqMat {
        let gl = &self.system.gl;
        let k = self.k;
        let a = &gl.elements[rng.gen_range(0..gl.order())];
        let d = &gl.elements[rng.gen_range(0..gl.order())];
        let b = FqMat::from_data(k, k, (0..k * k).map(|_| rng.gen_range(0..self.field.q())).collect());
        FqMat::from_blocks(a, &b, &FqMat::zeros(k, k), d)
    }

    fn levi_sigma(&self, p: &FqMat) -> &FpMatrix {
        let k = self.k;
        self.sigma(&p.block(0, 0, k, k), &p.block(k, k, k, k))
    }

    /// The convolution product read back at `1` and `w`, after checking that it
    /// vanishes on the middle double coset and transforms correctly at a few
    /// random points.
    pub fn convolve(&self, a: &FinHeckeElement, b: &FinHeckeElement, seed: u64) -> Result<FinHeckeElement, FinHeckeError> {
        let one = FqMat::identity(2 * self.k);
        let f1 = self.convolve_at(a, b, &one);
        let fw = self.convolve_at(a, b, &self.w);
        let out = FinHeckeElement { f1, fw };
        if let Some(m) = &self.middle {
            if !self.convolve_at(a, b, m).is_zero() {
                return Err(FinHeckeError::NotBiEquivariant("support meets the middle double coset".into()));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p1 = self.random_parahoric(&mut rng);
        let p2 = self.random_parahoric(&mut rng);
        let f = &self.field;
        for (x, base) in [(p1.mul(&p2, f), &out.f1), (p1.mul(&self.w, f).mul(&p2, f), &out.fw)] {
            let direct = self.convolve_at(a, b, &x);
            let expected = self.levi_sigma(&p1).mul(base).mul(self.levi_sigma(&p2));
            if direct != expected {
                return Err(FinHeckeError::NotBiEquivariant(format!("at {:?}", x.data)));
            }
        }
        Ok(out)
    }
}
