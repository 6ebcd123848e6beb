//! The group `W` generated by `w`, `w' = t w t^{-1}` and the length-zero
//! element `t`, realised as block-monomial matrices `δ_{x,y}·v` of `GL_{2k}(F)`.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeylError {
    #[error("element {0} has length {1}, factorisation needs length at least 2")]
    TooShort(WeylElement, usize),
}

/// A simple reflection of the infinite dihedral part of `W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    W,
    WPrime,
}

impl Letter {
    pub fn swap(self) -> Letter {
        match self {
            Letter::W => Letter::WPrime,
            Letter::WPrime => Letter::W,
        }
    }

    pub fn element(self) -> WeylElement {
        match self {
            Letter::W => WeylElement::w(),
            Letter::WPrime => WeylElement::w_prime(),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::W => write!(f, "w"),
            Letter::WPrime => write!(f, "w'"),
        }
    }
}

/// `δ_{x,y}` if `flip` is false, `δ_{x,y}·w` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeylElement {
    pub x: i32,
    pub y: i32,
    pub flip: bool,
}

/// `t^alpha · letters[0] · letters[1] ⋯` with alternating letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReducedExpression {
    pub alpha: i32,
    pub letters: Vec<Letter>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShapeClass {
    A,
    B,
    C,
    D,
    PureT,
}

impl WeylElement {
    pub const fn new(x: i32, y: i32, flip: bool) -> Self {
        Self { x, y, flip }
    }

    pub const fn identity() -> Self {
        Self::new(0, 0, false)
    }

    pub const fn diag(x: i32, y: i32) -> Self {
        Self::new(x, y, false)
    }

    pub const fn w() -> Self {
        Self::new(0, 0, true)
    }

    pub const fn w_prime() -> Self {
        Self::new(-1, 1, true)
    }

    pub const fn t() -> Self {
        Self::new(0, 1, true)
    }

    /// `t^n`; `t^{2b} = δ_{b,b}` and `t^{2b+1} = δ_{b,b+1}·w`.
    pub fn t_pow(n: i32) -> Self {
        let b = n.div_euclid(2);
        if n.rem_euclid(2) == 0 {
            Self::diag(b, b)
        } else {
            Self::new(b, b + 1, true)
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.flip {
            Self::new(self.x + o.y, self.y + o.x, !o.flip)
        } else {
            Self::new(self.x + o.x, self.y + o.y, o.flip)
        }
    }

    pub fn inverse(&self) -> Self {
        if self.flip {
            Self::new(-self.y, -self.x, true)
        } else {
            Self::new(-self.x, -self.y, false)
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn is_diagonal(&self) -> bool {
        !self.flip
    }

    /// Valuation of the determinant divided by `k`.
    pub fn det_valuation(&self) -> i32 {
        self.x + self.y
    }

    pub fn reduced_expression(&self) -> ReducedExpression {
        let alpha = self.det_valuation();
        let u = Self::t_pow(-alpha).mul(self);
        debug_assert_eq!(u.x + u.y, 0);
        let m = u.y;
        let pair = |a: Letter, n: usize| -> Vec<Letter> {
            (0..2 * n)
                .map(|i| if i % 2 == 0 { a } else { a.swap() })
                .collect()
        };
        let letters = match (u.flip, m >= 0) {
            (false, true) => pair(Letter::WPrime, m as usize),
            (false, false) => pair(Letter::W, m.unsigned_abs() as usize),
            (true, true) if m > 0 => {
                let mut l = pair(Letter::WPrime, (m - 1) as usize);
                l.push(Letter::WPrime);
                l
            }
            (true, _) => {
                let mut l = pair(Letter::W, m.unsigned_abs() as usize);
                l.push(Letter::W);
                l
            }
        };
        ReducedExpression { alpha, letters }
    }

    pub fn length(&self) -> usize {
        self.reduced_expression().letters.len()
    }

    pub fn is_length_additive(&self, o: &Self) -> bool {
        self.mul(o).length() == self.length() + o.length()
    }

    /// Membership in `W_0`, the elements with determinant of valuation zero.
    pub fn is_w0(&self) -> bool {
        self.det_valuation() == 0
    }

    pub fn shape_class(&self) -> ShapeClass {
        let r = self.reduced_expression();
        let even = r.alpha.rem_euclid(2) == 0;
        let (first, last) = match (r.letters.first(), r.letters.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return if even { ShapeClass::A } else { ShapeClass::PureT },
        };
        // with odd alpha the leading t converts the first letter
        let first = if even { first } else { first.swap() };
        match (first, last) {
            (Letter::WPrime, Letter::W) => ShapeClass::A,
            (Letter::W, Letter::W) => ShapeClass::B,
            (Letter::WPrime, Letter::WPrime) => ShapeClass::C,
            (Letter::W, Letter::WPrime) => ShapeClass::D,
        }
    }

    /// Splits an element of length at least two as `a1·a2` with `a1` diagonal
    /// of length one and lengths adding up.
    pub fn split_diagonal_letter(&self) -> Result<(Self, Self), WeylError> {
        let r = self.reduced_expression();
        if r.letters.len() < 2 {
            return Err(WeylError::TooShort(*self, r.letters.len()));
        }
        let w1 = r.letters[0];
        let rest = ReducedExpression {
            alpha: 0,
            letters: r.letters[1..].to_vec(),
        }
        .evaluate();
        let (a1, a2) = if r.alpha.rem_euclid(2) == 1 {
            (Self::t_pow(r.alpha).mul(&w1.element()), rest)
        } else if r.alpha == 0 && w1 == Letter::WPrime {
            (
                Self::t().mul(&w1.swap().element()),
                Self::t_pow(-1).mul(&rest),
            )
        } else {
            (
                Self::t_pow(r.alpha - 1).mul(&w1.swap().element()),
                Self::t().mul(&rest),
            )
        };
        debug_assert_eq!(a1.mul(&a2), *self);
        Ok((a1, a2))
    }

    /// `t·a·t^{-1}`.
    pub fn conjugate_by_t(&self) -> Self {
        Self::t().mul(self).mul(&Self::t_pow(-1))
    }
}

impl ReducedExpression {
    pub fn evaluate(&self) -> WeylElement {
        self.letters
            .iter()
            .fold(WeylElement::t_pow(self.alpha), |acc, l| acc.mul(&l.element()))
    }
}

impl fmt::Display for ReducedExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.alpha {
            0 => {}
            1 => parts.push("t".into()),
            a => parts.push(format!("t^{a}")),
        }
        parts.extend(self.letters.iter().map(|l| l.to_string()));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("·"))
        }
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.reduced_expression())
    }
}
