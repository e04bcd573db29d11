use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Per-level phase angles (radians) parameterising a diagonal gate.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    angles: Vec<f64>,
}

impl PhaseVector {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.len() < 2 {
            return Err(Error::InvalidDimension(angles.len()));
        }
        Ok(Self { angles })
    }

    pub fn zeros(d: usize) -> Self {
        Self {
            angles: vec![0.0; d],
        }
    }

    /// Angles `2 pi * e_l / d` for integer exponents of `omega`.
    pub fn from_omega_exponents(exponents: &[usize]) -> Self {
        let d = exponents.len() as f64;
        Self {
            angles: exponents.iter().map(|&e| TAU * e as f64 / d).collect(),
        }
    }

    /// The phases of `Z^k`: `(z^k)_l = 2 pi k l / d`.
    pub fn pauli_z_power(d: usize, k: i64) -> Self {
        let k = k.rem_euclid(d as i64) as usize;
        Self::from_omega_exponents(&(0..d).map(|l| (k * l) % d).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.angles.len()
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn negated(&self) -> Self {
        Self {
            angles: self.angles.iter().map(|a| -a).collect(),
        }
    }

    /// Re-indexes the vector: entry `k` of the result is `self[index(k)]`.
    pub(crate) fn reindexed(&self, index: impl Fn(usize) -> usize) -> Self {
        Self {
            angles: (0..self.dim()).map(|k| self.angles[index(k)]).collect(),
        }
    }

    pub(crate) fn ensure_dim(&self, d: usize) -> Result<()> {
        if self.dim() != d {
            return Err(Error::ShapeMismatch {
                expected: format!("phase vector of length {d}"),
                found: format!("length {}", self.dim()),
            });
        }
        Ok(())
    }
}
