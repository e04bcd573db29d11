//! Seeded random samplers for states, unitaries and phase vectors.

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{CMatrix, C64};
use super::phase::PhaseVector;

fn gaussian_complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed random unit vector of length `len`.
pub fn random_state_vector(len: usize, rng: &mut impl Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..len).map(|_| gaussian_complex(rng)).collect();
    let n = v.iter().map(C64::norm_sqr).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / n).collect()
}

/// Haar-distributed random unitary (Gram-Schmidt on a Ginibre matrix).
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian_complex(rng)).collect();
        for c in &cols {
            let proj: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= proj * ci;
            }
        }
        let norm = v.iter().map(C64::norm_sqr).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    CMatrix::from_columns(&cols).expect("square by construction")
}

/// Phase vector with independent uniform angles in `[0, 2 pi)`.
pub fn random_phase_vector(d: usize, rng: &mut impl Rng) -> PhaseVector {
    PhaseVector::new((0..d).map(|_| rng.random::<f64>() * TAU).collect())
        .expect("random phase vectors have length >= 2")
}
