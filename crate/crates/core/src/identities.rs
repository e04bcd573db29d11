//! Residuals of the gate identities the frame tracker relies on.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frame::{scale_phase_vector, shift_phase_vector, swap_identity_residual};
use crate::math::matrix::CMatrix;
use crate::math::{
    controlled_z, fourier_gate, fourier_vector, matrices_equal_up_to_phase, omega, pauli_word, pauli_x_power,
    pauli_z_power, perm_gate_sc, phase_gate, random_phase_vector, units, ModUnit,
};

/// Largest single-qudit dimension the suite enumerates.
pub const MAX_IDENTITY_DIM: usize = 7;

/// Random phase vectors drawn per identity that takes one.
const SAMPLES: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub dim: usize,
    /// Largest entrywise deviation (Frobenius after phase alignment for
    /// identities that hold up to a global phase).
    pub residual: f64,
}

fn exact(lhs: &CMatrix, rhs: &CMatrix) -> f64 {
    lhs.max_diff(rhs)
}

fn projective(lhs: &CMatrix, rhs: &CMatrix) -> Result<f64> {
    Ok(matrices_equal_up_to_phase(lhs, rhs, 0.0)?.residual)
}

fn vec_diff(a: &[crate::math::C64], b: &[crate::math::C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Evaluates every identity in dimension `d`; the swap identities are included for `d <= 5`.
pub fn identity_residuals(d: usize, seed: u64) -> Result<Vec<IdentityCheck>> {
    if !(2..=MAX_IDENTITY_DIM).contains(&d) {
        return Err(Error::UnsupportedDimension {
            d,
            reason: format!("the identity suite covers 2 <= d <= {MAX_IDENTITY_DIM}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = pauli_x_power(d, 1)?;
    let z = pauli_z_power(d, 1)?;
    let f = fourier_gate(d)?;
    let di = d as i64;
    let mut out = Vec::new();
    let mut push = |name, residual| out.push(IdentityCheck { name, dim: d, residual });

    // Z^j |+_k> = |+_{j+k}>,  X^j |+_k> = omega^{jk} |+_k>
    let (mut zs, mut xs) = (0.0f64, 0.0f64);
    for j in 0..di {
        for k in 0..di {
            let plus = fourier_vector(d, k);
            zs = zs.max(vec_diff(&pauli_z_power(d, j)?.apply(&plus), &fourier_vector(d, j + k)));
            let phased: Vec<_> = plus.iter().map(|a| a * omega(d, j * k)).collect();
            xs = xs.max(vec_diff(&pauli_x_power(d, j)?.apply(&plus), &phased));
        }
    }
    push("z-shifts-fourier-basis", zs);
    push("x-phases-fourier-basis", xs);

    push("xz-commutation", exact(&x.matmul(&z), &z.matmul(&x).scale(omega(d, 1))));

    let (mut zx, mut zz) = (0.0f64, 0.0f64);
    let mut scaled = 0.0f64;
    for _ in 0..SAMPLES {
        let a = random_phase_vector(d, &mut rng);
        let za = phase_gate(&a);
        zx = zx.max(exact(&za.matmul(&x), &x.matmul(&phase_gate(&shift_phase_vector(&a, 1)))));
        zz = zz.max(exact(&za.matmul(&z), &z.matmul(&za)));
        for c in units(d) {
            let c = ModUnit::new(c as i64, d)?;
            let s = perm_gate_sc(c);
            scaled = scaled.max(exact(&za.matmul(&s), &s.matmul(&phase_gate(&scale_phase_vector(&a, c)?))));
        }
    }
    push("phase-vector-past-x", zx);
    push("phase-vector-past-z", zz);
    push("phase-vector-past-scaling", scaled);

    push("fourier-z", exact(&f.matmul(&z), &x.matmul(&f)));
    push("fourier-x", exact(&f.matmul(&x), &pauli_z_power(d, -1)?.matmul(&f)));

    let (mut fs, mut sx, mut sz) = (0.0f64, 0.0f64, 0.0f64);
    for c in units(d) {
        let c = ModUnit::new(c as i64, d)?;
        let s = perm_gate_sc(c);
        fs = fs.max(exact(&f.matmul(&s), &perm_gate_sc(c.inverse()).matmul(&f)));
        sx = sx.max(exact(&s.matmul(&x), &pauli_x_power(d, c.value() as i64)?.matmul(&s)));
        sz = sz.max(exact(&s.matmul(&z), &pauli_z_power(d, c.inverse().value() as i64)?.matmul(&s)));
    }
    push("fourier-past-scaling", fs);
    push("scaling-past-x", sx);
    push("scaling-past-z", sz);

    if d <= 5 {
        let cz = controlled_z(d, 1)?;
        let id = CMatrix::identity(d);
        let zinv = pauli_z_power(d, -1)?;
        let mut single = 0.0f64;
        single = single.max(exact(&cz.matmul(&x.kron(&id)), &x.kron(&zinv).matmul(&cz)));
        single = single.max(exact(&cz.matmul(&id.kron(&x)), &zinv.kron(&x).matmul(&cz)));
        single = single.max(exact(&cz.matmul(&z.kron(&id)), &z.kron(&id).matmul(&cz)));
        single = single.max(exact(&cz.matmul(&id.kron(&z)), &id.kron(&z).matmul(&cz)));
        push("cz-past-paulis", single);

        // (X^x1 Z^z1 ⊗ X^x2 Z^z2) after CZ becomes (X^x1 Z^{z1-x2} ⊗ X^x2 Z^{z2-x1}) before it
        let mut frame = 0.0f64;
        for t in 0..d.pow(4) {
            let (x1, z1, x2, z2) = ((t / (d * d * d)) as i64, (t / (d * d) % d) as i64, (t / d % d) as i64, (t % d) as i64);
            let before = pauli_word(d, 0, x1, z1)?.kron(&pauli_word(d, 0, x2, z2)?);
            let after = pauli_word(d, 0, x1, z1 - x2)?.kron(&pauli_word(d, 0, x2, z2 - x1)?);
            frame = frame.max(projective(&cz.matmul(&before), &after.matmul(&cz))?);
        }
        push("cz-past-pauli-frame", frame);

        let mut cs = 0.0f64;
        for c in units(d) {
            let c = ModUnit::new(c as i64, d)?;
            let s = perm_gate_sc(c).kron(&id);
            cs = cs.max(exact(&cz.matmul(&s), &s.matmul(&controlled_z(d, c.value() as i64)?)));
        }
        push("cz-past-scaling", cs);
        push("swap", swap_identity_residual(d, seed)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_identities_hold() {
        for d in 2..=MAX_IDENTITY_DIM {
            let checks = identity_residuals(d, 3).unwrap();
            assert_eq!(checks.len(), if d <= 5 { 15 } else { 11 });
            for c in checks {
                assert!(c.residual < 1e-10, "{} d={d}: {}", c.name, c.residual);
            }
        }
        assert!(identity_residuals(8, 0).is_err());
        assert!(identity_residuals(1, 0).is_err());
    }
}
