//! Comparisons modulo a global phase.

use super::matrix::{CMatrix, C64};
use crate::error::{Error, Result};

/// Default tolerance for phase-insensitive comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseComparison {
    pub equal: bool,
    /// `|<u,v>| / (|u| |v|)`; for matrices the normalised Hilbert-Schmidt overlap.
    pub fidelity: f64,
    /// `|u - e^{i theta*} v|` (Frobenius for matrices) with the optimal phase `theta*`,
    /// after normalising both sides for vectors.
    pub residual: f64,
}

fn overlap(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm(u: &[C64]) -> f64 {
    u.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
}

/// Compares two state vectors up to global phase. Equal iff the fidelity
/// `|<u,v>|/(|u||v|)` is at least `1 - tol`.
pub fn states_equal_up_to_phase(u: &[C64], v: &[C64], tol: f64) -> Result<PhaseComparison> {
    if u.len() != v.len() {
        return Err(Error::ShapeMismatch {
            expected: format!("vector of length {}", u.len()),
            found: format!("length {}", v.len()),
        });
    }
    let (nu, nv) = (norm(u), norm(v));
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let ov = overlap(v, u);
    let fidelity = (ov.norm() / (nu * nv)).min(1.0);
    let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { C64::new(1.0, 0.0) };
    let residual = u
        .iter()
        .zip(v)
        .map(|(a, b)| (a / nu - phase * b / nv).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(PhaseComparison {
        equal: fidelity >= 1.0 - tol,
        fidelity,
        residual,
    })
}

/// Compares two matrices up to global phase. Equal iff
/// `min_theta |U - e^{i theta} V|_F <= tol`.
pub fn matrices_equal_up_to_phase(u: &CMatrix, v: &CMatrix, tol: f64) -> Result<PhaseComparison> {
    if (u.rows(), u.cols()) != (v.rows(), v.cols()) {
        return Err(Error::ShapeMismatch {
            expected: format!("{}x{}", u.rows(), u.cols()),
            found: format!("{}x{}", v.rows(), v.cols()),
        });
    }
    let (nu, nv) = (u.frobenius_norm(), v.frobenius_norm());
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let ov = overlap(v.as_slice(), u.as_slice());
    let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { C64::new(1.0, 0.0) };
    let residual = u.sub(&v.scale(phase)).frobenius_norm();
    Ok(PhaseComparison {
        equal: residual <= tol,
        fidelity: (ov.norm() / (nu * nv)).min(1.0),
        residual,
    })
}

/// Objects that can be compared modulo a global phase.
pub trait UpToPhase {
    fn compare_up_to_phase(&self, other: &Self, tol: f64) -> Result<PhaseComparison>;

    fn equal_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        self.compare_up_to_phase(other, tol)
            .map(|c| c.equal)
            .unwrap_or(false)
    }
}

impl UpToPhase for CMatrix {
    fn compare_up_to_phase(&self, other: &Self, tol: f64) -> Result<PhaseComparison> {
        matrices_equal_up_to_phase(self, other, tol)
    }
}

impl UpToPhase for Vec<C64> {
    fn compare_up_to_phase(&self, other: &Self, tol: f64) -> Result<PhaseComparison> {
        states_equal_up_to_phase(self, other, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::gates::{basis_vector, fourier_gate, perm_gate_sc};
    use crate::math::matrix::omega;
    use crate::math::modular::ModUnit;

    #[test]
    fn vector_examples() {
        let zero = basis_vector(3, 0);
        let rotated: Vec<C64> = zero
            .iter()
            .map(|a| a * C64::from_polar(1.0, std::f64::consts::PI / 7.0))
            .collect();
        let cmp = states_equal_up_to_phase(&zero, &rotated, DEFAULT_TOLERANCE).unwrap();
        assert!(cmp.equal);
        assert!(cmp.residual < 1e-15);
        let cmp = states_equal_up_to_phase(&zero, &basis_vector(3, 1), DEFAULT_TOLERANCE).unwrap();
        assert!(!cmp.equal);
        assert!(cmp.fidelity < 1e-15);
        assert!(states_equal_up_to_phase(&zero, &basis_vector(2, 0), 1e-10).is_err());
        assert_eq!(
            states_equal_up_to_phase(&zero, &[C64::new(0.0, 0.0); 3], 1e-10),
            Err(Error::ZeroNorm)
        );
    }

    #[test]
    fn fourier_squared_is_negation_permutation() {
        let d = 5;
        let f = fourier_gate(d).unwrap();
        let f2 = f.matmul(&f);
        // oracle: F^2 |k> = |-k>, verified column by column
        for k in 0..d {
            assert!(
                states_equal_up_to_phase(&f2.column(k), &basis_vector(d, (d - k) % d), 1e-12)
                    .unwrap()
                    .equal
            );
        }
        let cmp = f2.compare_up_to_phase(&perm_gate_sc(ModUnit::minus_one(d)), DEFAULT_TOLERANCE).unwrap();
        assert!(cmp.equal, "{cmp:?}");
    }

    #[test]
    fn matrix_phase_is_optimised() {
        let f = fourier_gate(3).unwrap();
        let g = f.scale(omega(3, 1));
        assert!(f.equal_up_to_phase(&g, 1e-12));
        assert!(!f.equal_up_to_phase(&f.adjoint(), 1e-6));
    }
}
