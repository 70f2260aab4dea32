use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::AlgebraKind;

/// Identifies the algebra an [`Element`] or endomorphism belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraTag {
    pub kind: AlgebraKind,
    pub rank: usize,
    pub dim: usize,
}

/// A vector of an algebra, stored by its coordinates over the algebra's
/// orthonormal basis (orthonormal for `⟨x, y⟩ = tr(x ∘ y)`).
///
/// The arithmetic operators panic when the operands come from different
/// algebras; the algebra methods report the mismatch as an error instead.
#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub(crate) tag: AlgebraTag,
    pub(crate) coords: DVector<f64>,
}

impl Element {
    pub(crate) fn new(tag: AlgebraTag, coords: DVector<f64>) -> Self {
        debug_assert_eq!(coords.len(), tag.dim);
        Element { tag, coords }
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn as_slice(&self) -> &[f64] {
        self.coords.as_slice()
    }

    pub fn into_coords(self) -> DVector<f64> {
        self.coords
    }

    /// `⟨x, y⟩ = tr(x ∘ y)`, which is the Euclidean product of coordinates.
    pub fn inner(&self, other: &Element) -> crate::Result<f64> {
        if self.tag != other.tag {
            return Err(crate::Error::AlgebraMismatch);
        }
        Ok(self.coords.dot(&other.coords))
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    pub fn scale(&self, s: f64) -> Element {
        Element::new(self.tag, &self.coords * s)
    }

    pub fn max_abs_diff(&self, other: &Element) -> f64 {
        assert_eq!(self.tag, other.tag, "elements of different algebras");
        (&self.coords - &other.coords).amax()
    }
}

impl Add for &Element {
    type Output = Element;

    fn add(self, rhs: &Element) -> Element {
        assert_eq!(self.tag, rhs.tag, "elements of different algebras");
        Element::new(self.tag, &self.coords + &rhs.coords)
    }
}

impl Add for Element {
    type Output = Element;

    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        assert_eq!(self.tag, rhs.tag, "elements of different algebras");
        Element::new(self.tag, &self.coords - &rhs.coords)
    }
}

impl Sub for Element {
    type Output = Element;

    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Mul<f64> for &Element {
    type Output = Element;

    fn mul(self, rhs: f64) -> Element {
        self.scale(rhs)
    }
}

impl Mul<f64> for Element {
    type Output = Element;

    fn mul(self, rhs: f64) -> Element {
        self.scale(rhs)
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

impl Neg for Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}
