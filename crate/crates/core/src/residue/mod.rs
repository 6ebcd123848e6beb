//! Matrices over `F_q((ϖ))`, the parahoric `𝒫` with `k × k` blocks, and a
//! brute-force evaluation of Hecke products by summing over admissible coset
//! pairs.

mod matrix;

pub use matrix::{TruncatedMatrix, DEFAULT_WINDOW};

use crate::gfp::{FpMatrix, FqField, FqMat};
use crate::modrep::CoefficientSystem;
use crate::weyl::WeylElement;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResidueError {
    #[error("valuation {0} falls outside the matrix window")]
    WindowExhausted(i32),
    #[error("coset gap {0} is too large to enumerate")]
    GapTooLarge(i32),
    #[error("matrix is not unipotent of nilpotency order two")]
    NotUnipotent,
    #[error("element {0:?} is too long for the oracle")]
    TooLong(WeylElement),
    #[error("pair lands in several Weyl double cosets")]
    AmbiguousSupport,
}

/// A subgroup of `GL_{2k}(𝒪)` described blockwise: entries of block `(i, j)`
/// have valuation at least `min_val[i][j]`, and each diagonal block flagged in
/// `diag_units` is invertible modulo `ϖ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockPattern {
    pub min_val: [[i32; 2]; 2],
    pub diag_units: [bool; 2],
}

impl BlockPattern {
    /// The parahoric `𝒫`: `GL_k(𝒪)` on the diagonal, `𝔓` in the lower corner.
    pub const PARAHORIC: Self = Self {
        min_val: [[0, 0], [1, 0]],
        diag_units: [true, true],
    };

    pub fn upper(&self) -> i32 {
        self.min_val[0][1]
    }

    pub fn lower(&self) -> i32 {
        self.min_val[1][0]
    }
}

pub fn in_pattern(m: &TruncatedMatrix, p: &BlockPattern, f: &FqField) -> Result<bool, ResidueError> {
    let k = m.size() / 2;
    let (vmin, width) = m.window();
    for i in 0..2 {
        for j in 0..2 {
            let bound = p.min_val[i][j];
            if bound > vmin + width as i32 {
                return Err(ResidueError::WindowExhausted(bound));
            }
            if let Some(v) = m.block_valuation(i * k..(i + 1) * k, j * k..(j + 1) * k) {
                if v < bound {
                    return Ok(false);
                }
            }
        }
    }
    for i in 0..2 {
        if p.diag_units[i] && !m.block_coefficient(i * k, i * k, k, 0).is_invertible(f) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `𝒫 ∩ η𝒫η⁻¹`, computed by conjugating the block valuations of `𝒫`.
pub fn p_eta_pattern(eta: &WeylElement) -> BlockPattern {
    let d = [eta.x, eta.y];
    let v = |i: usize| if eta.flip { 1 - i } else { i };
    let b = BlockPattern::PARAHORIC.min_val;
    let conj = |i: usize, j: usize| d[i] - d[j] + b[v(i)][v(j)];
    BlockPattern {
        min_val: [[0, conj(0, 1).max(0)], [conj(1, 0).max(1), 0]],
        diag_units: [true, true],
    }
}

/// The same subgroup read off from a closed-form case split on
/// `δ = a₁ − a_{k+1}`, where `η = v · diag(ϖ^{a₁}, …)` with `v ∈ {1, w}`.
/// Kept to compare against [`p_eta_pattern`].
pub fn closed_form_pattern(eta: &WeylElement) -> BlockPattern {
    let (upper, lower) = if eta.flip {
        let delta = eta.y - eta.x;
        if delta <= 0 {
            (1 - delta, 1)
        } else {
            (0, delta)
        }
    } else {
        let delta = eta.x - eta.y;
        if delta >= 0 {
            (delta, 1)
        } else {
            (0, 2 - delta)
        }
    };
    BlockPattern {
        min_val: [[0, upper], [lower, 0]],
        diag_units: [true, true],
    }
}

fn window_for(elems: &[WeylElement]) -> (i32, usize) {
    let span: i32 = elems.iter().map(|e| e.x.abs().max(e.y.abs())).sum();
    let half = 2 * span + 8;
    (-half, 2 * half as usize)
}

fn unipotent(k: usize, upper: bool, levels: &[FqMat], shift: i32, window: (i32, usize), f: &FqField) -> Result<TruncatedMatrix, ResidueError> {
    let mut m = TruncatedMatrix::identity(2 * k, window.0, window.1)?;
    for (i, x) in levels.iter().enumerate() {
        if upper {
            m.add_block(0, k, i as i32, x, f)?;
        } else {
            m.add_block(k, 0, shift + i as i32, x, f)?;
        }
    }
    Ok(m)
}

/// Representatives of `𝒫^{(η)} \ 𝒫`: `α_x = (1 x; 0 1)` with `x` read modulo the
/// upper gap, or `β_y = (1 0; ϖy 1)` with `y` modulo the lower gap.
pub fn coset_reps(eta: &WeylElement, k: usize, f: &FqField) -> Result<Vec<TruncatedMatrix>, ResidueError> {
    coset_reps_in(eta, k, f, (-(DEFAULT_WINDOW as i32) / 2, DEFAULT_WINDOW))
}

fn coset_reps_in(eta: &WeylElement, k: usize, f: &FqField, window: (i32, usize)) -> Result<Vec<TruncatedMatrix>, ResidueError> {
    let pat = p_eta_pattern(eta);
    let (upper, gap) = if pat.upper() > 0 {
        (true, pat.upper())
    } else {
        (false, pat.lower() - 1)
    };
    if gap > 2 {
        return Err(ResidueError::GapTooLarge(gap));
    }
    let all = FqMat::enumerate_all(k, k, f);
    let mut choices: Vec<Vec<FqMat>> = vec![Vec::new()];
    for _ in 0..gap {
        choices = choices
            .into_iter()
            .flat_map(|c| {
                all.iter().map(move |x| {
                    let mut c = c.clone();
                    c.push(x.clone());
                    c
                })
            })
            .collect();
    }
    let reps: Vec<TruncatedMatrix> = choices
        .iter()
        .map(|levels| unipotent(k, upper, levels, 1, window, f))
        .collect::<Result<_, _>>()?;
    // spot check: the first representative is separated from all others
    if let Some(first) = reps.first() {
        for r in reps.iter().skip(1) {
            if in_pattern(&first.mul(&r.unipotent_inverse(f)?, f)?, &pat, f)? {
                panic!("coset representatives collide for {eta:?}");
            }
        }
    }
    Ok(reps)
}

/// The product `[η]_f [δ]_g` evaluated coset by coset, with the number of
/// admissible pairs behind each support element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleProduct {
    pub terms: BTreeMap<WeylElement, FpMatrix>,
    pub admissible: BTreeMap<WeylElement, usize>,
}

fn rho(system: &CoefficientSystem, m: &TruncatedMatrix) -> FpMatrix {
    let k = system.config.k;
    let a = m.block_coefficient(0, 0, k, 0);
    let d = m.block_coefficient(k, k, k, 0);
    system.sigma(system.gl.index_of(&a), system.gl.index_of(&d)).clone()
}

/// `h_ε = Σ ρ(k₀) f ρ(k₁) g ρ(k₂)` over pairs `(k₁, k₂)` of coset
/// representatives for `𝒫^{(η⁻¹)} \ 𝒫` and `𝒫^{(δ⁻¹)} \ 𝒫` with
/// `k₀ = ε k₂⁻¹ δ⁻¹ k₁⁻¹ η⁻¹ ∈ 𝒫`.
pub fn oracle_product(
    eta: &WeylElement,
    delta: &WeylElement,
    f: &FpMatrix,
    g: &FpMatrix,
    system: &CoefficientSystem,
) -> Result<OracleProduct, ResidueError> {
    for e in [eta, delta] {
        if e.length() > 2 {
            return Err(ResidueError::TooLong(*e));
        }
    }
    let k = system.config.k;
    let fq = &system.gl.field;
    let window = window_for(&[*eta, *delta]);
    let box_bound = eta.x.abs().max(eta.y.abs()) + delta.x.abs().max(delta.y.abs()) + 1;
    let det = eta.det_valuation() + delta.det_valuation();
    let candidates: Vec<(WeylElement, TruncatedMatrix)> = (-box_bound..=box_bound)
        .filter(|x| (det - x).abs() <= box_bound)
        .flat_map(|x| [false, true].map(|fl| WeylElement::new(x, det - x, fl)))
        .map(|e| TruncatedMatrix::from_weyl(&e, k, window.0, window.1).map(|m| (e, m)))
        .collect::<Result<_, _>>()?;
    let eta_inv = TruncatedMatrix::from_weyl(&eta.inverse(), k, window.0, window.1)?;
    let delta_inv = TruncatedMatrix::from_weyl(&delta.inverse(), k, window.0, window.1)?;
    let reps1 = coset_reps_in(&eta.inverse(), k, fq, window)?;
    let reps2 = coset_reps_in(&delta.inverse(), k, fq, window)?;
    let inv1: Vec<TruncatedMatrix> = reps1.iter().map(|r| r.unipotent_inverse(fq)).collect::<Result<_, _>>()?;
    let inv2: Vec<TruncatedMatrix> = reps2.iter().map(|r| r.unipotent_inverse(fq)).collect::<Result<_, _>>()?;

    let mut terms: BTreeMap<WeylElement, FpMatrix> = BTreeMap::new();
    let mut admissible: BTreeMap<WeylElement, usize> = BTreeMap::new();
    let tail_by_k1: Vec<TruncatedMatrix> = inv1
        .iter()
        .map(|k1i| k1i.mul(&eta_inv, fq))
        .collect::<Result<_, _>>()?;
    for (i2, k2i) in inv2.iter().enumerate() {
        let head = k2i.mul(&delta_inv, fq)?;
        for (i1, tail) in tail_by_k1.iter().enumerate() {
            let rest = head.mul(tail, fq)?;
            let mut hit = None;
            for (e, em) in &candidates {
                let k0 = em.mul(&rest, fq)?;
                if in_pattern(&k0, &BlockPattern::PARAHORIC, fq)? {
                    if hit.is_some() {
                        return Err(ResidueError::AmbiguousSupport);
                    }
                    hit = Some((*e, k0));
                }
            }
            if let Some((e, k0)) = hit {
                let term = rho(system, &k0)
                    .mul(f)
                    .mul(&rho(system, &reps1[i1]))
                    .mul(g)
                    .mul(&rho(system, &reps2[i2]));
                *admissible.entry(e).or_insert(0) += 1;
                let slot = terms.entry(e).or_insert_with(|| FpMatrix::zeros(system.field, f.rows(), f.cols()));
                *slot = slot.add(&term);
            }
        }
    }
    terms.retain(|_, m| !m.is_zero());
    Ok(OracleProduct { terms, admissible })
}
