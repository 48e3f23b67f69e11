//! Dense finite-dimensional coordinate vectors, the universal element type.

use std::ops::{Add, Index, IndexMut, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense real coordinate vector. Serialized as a plain JSON array; the
/// dimension is the length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector<F>(pub Vec<F>);

impl<F: Real> Vector<F> {
    pub fn new(coords: Vec<F>) -> Self {
        Vector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![F::zero(); dim])
    }

    /// Standard basis vector e_i.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = F::one();
        v
    }

    pub fn from_f64s(coords: &[f64]) -> Self {
        Vector(coords.iter().map(|&c| F::of(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, F> {
        self.0.iter()
    }

    /// All entries finite (the type invariant).
    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimMismatch {
                expected,
                got: self.dim(),
            })
        }
    }

    pub fn dot(&self, other: &Self) -> F {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(&a, &b)| a * b)
            .sum()
    }

    pub fn scale(&self, s: F) -> Self {
        Vector(self.0.iter().map(|&a| a * s).collect())
    }

    /// self + s * other.
    pub fn add_scaled(&self, s: F, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a + s * b)
                .collect(),
        )
    }

    pub fn sup_norm(&self) -> F {
        self.0
            .iter()
            .fold(F::zero(), |acc, &a| if a.abs() > acc { a.abs() } else { acc })
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == F::zero())
    }

    /// Coordinatewise absolute value.
    pub fn abs(&self) -> Self {
        Vector(self.0.iter().map(|&a| a.abs()).collect())
    }

    /// Coordinatewise maximum.
    pub fn sup(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| if a > b { a } else { b })
                .collect(),
        )
    }

    /// Coordinatewise minimum.
    pub fn inf(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Vector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| if a < b { a } else { b })
                .collect(),
        )
    }

    /// Coordinatewise `self <= other`.
    pub fn le_coordinatewise(&self, other: &Self) -> bool {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(other.0.iter()).all(|(&a, &b)| a <= b)
    }
}

impl<F: Real> Index<usize> for Vector<F> {
    type Output = F;
    fn index(&self, i: usize) -> &F {
        &self.0[i]
    }
}

impl<F: Real> IndexMut<usize> for Vector<F> {
    fn index_mut(&mut self, i: usize) -> &mut F {
        &mut self.0[i]
    }
}

impl<F: Real> Add for &Vector<F> {
    type Output = Vector<F>;
    fn add(self, rhs: &Vector<F>) -> Vector<F> {
        self.add_scaled(F::one(), rhs)
    }
}

impl<F: Real> Sub for &Vector<F> {
    type Output = Vector<F>;
    fn sub(self, rhs: &Vector<F>) -> Vector<F> {
        self.add_scaled(-F::one(), rhs)
    }
}

impl<F: Real> Neg for &Vector<F> {
    type Output = Vector<F>;
    fn neg(self) -> Vector<F> {
        self.scale(-F::one())
    }
}
