//! The single- and two-qudit gates used throughout the crate.
//!
//! Conventions: `omega = e^{2 pi i / d}`, `Z|k> = omega^k |k>`,
//! `X|k> = |k-1 mod d>` and `F|k> = |+_k>` with `|+_j> = d^{-1/2} sum_k omega^{jk} |k>`.

use super::matrix::{omega, CMatrix, C64, ONE, ZERO};
use super::modular::{modp, ModUnit};
use super::phase::PhaseVector;
use crate::error::{Error, Result};

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(())
}

/// Permutation matrix sending `|k>` to `|perm(k)>`.
pub fn permutation_matrix(d: usize, perm: impl Fn(usize) -> usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    for k in 0..d {
        m[(perm(k), k)] = ONE;
    }
    m
}

/// The `d`-dimensional quantum Fourier transform.
pub fn fourier_gate(d: usize) -> Result<CMatrix> {
    check_dim(d)?;
    let norm = 1.0 / (d as f64).sqrt();
    Ok(CMatrix::from_fn(d, d, |j, k| {
        omega(d, (j * k) as i64) * norm
    }))
}

/// Generalised Pauli shift and clock operators `(X, Z)`.
pub fn pauli_gates(d: usize) -> Result<(CMatrix, CMatrix)> {
    Ok((pauli_x_power(d, 1)?, pauli_z_power(d, 1)?))
}

/// `X^e`, i.e. `|k> -> |k - e mod d>`.
pub fn pauli_x_power(d: usize, e: i64) -> Result<CMatrix> {
    check_dim(d)?;
    Ok(permutation_matrix(d, |k| modp(k as i64 - e, d)))
}

/// `Z^e = diag(omega^{e k})`.
pub fn pauli_z_power(d: usize, e: i64) -> Result<CMatrix> {
    check_dim(d)?;
    Ok(CMatrix::from_diagonal(
        &(0..d).map(|k| omega(d, e * k as i64)).collect::<Vec<_>>(),
    ))
}

/// `omega^a X^b Z^c`.
pub fn pauli_word(d: usize, a: i64, b: i64, c: i64) -> Result<CMatrix> {
    Ok(pauli_x_power(d, b)?
        .matmul(&pauli_z_power(d, c)?)
        .scale(omega(d, a)))
}

/// Diagonal phase gate `Z(a) = sum_k e^{i a_k} |k><k|`.
pub fn phase_gate(a: &PhaseVector) -> CMatrix {
    CMatrix::from_diagonal(
        &a.angles()
            .iter()
            .map(|&t| C64::from_polar(1.0, t))
            .collect::<Vec<_>>(),
    )
}

/// `X(a) = sum_k e^{i a_k} |+_k><+_k| = F Z(a) F^†`.
pub fn fourier_phase_gate(a: &PhaseVector) -> CMatrix {
    let f = fourier_gate(a.dim()).expect("phase vectors have length >= 2");
    f.matmul(&phase_gate(a)).matmul(&f.adjoint())
}

/// Multiplicative permutation `S_c = sum_k |ck><k|`.
pub fn perm_gate_sc(c: ModUnit) -> CMatrix {
    permutation_matrix(c.modulus(), |k| c.times(k as i64))
}

/// `F_c = S_{c^{-1}} F`, the gate implemented by adaptive computation with unit `c`.
pub fn fourier_c(c: ModUnit) -> CMatrix {
    let f = fourier_gate(c.modulus()).expect("unit moduli are >= 2");
    perm_gate_sc(c.inverse()).matmul(&f)
}

/// `C[Z^power] = sum_{k,l} omega^{power k l} |kl><kl|` on two qudits.
pub fn controlled_z(d: usize, power: i64) -> Result<CMatrix> {
    check_dim(d)?;
    Ok(CMatrix::from_diagonal(
        &(0..d * d)
            .map(|idx| omega(d, power * ((idx / d) * (idx % d)) as i64))
            .collect::<Vec<_>>(),
    ))
}

/// Two-qudit swap `V`.
pub fn swap_gate(d: usize) -> Result<CMatrix> {
    check_dim(d)?;
    Ok(permutation_matrix(d * d, |idx| (idx % d) * d + idx / d))
}

/// Integer `j(j+1)/2` reduced mod `d`.
pub(crate) fn triangular(j: usize, d: usize) -> usize {
    ((j * (j + 1)) / 2) % d
}

/// Clifford phase gate `P: |j> -> omega^{j(j+1)/2} |j>`.
pub fn clifford_p(d: usize) -> Result<CMatrix> {
    check_dim(d)?;
    Ok(CMatrix::from_diagonal(
        &(0..d)
            .map(|j| omega(d, triangular(j, d) as i64))
            .collect::<Vec<_>>(),
    ))
}

/// Computational basis vector `|k>` of a single qudit.
pub fn basis_vector(d: usize, k: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d];
    v[k % d] = ONE;
    v
}

/// Fourier basis vector `|+_j> = F|j>`.
pub fn fourier_vector(d: usize, j: i64) -> Vec<C64> {
    let norm = 1.0 / (d as f64).sqrt();
    (0..d).map(|k| omega(d, j * k as i64) * norm).collect()
}

/// Embeds a `k`-qudit gate acting on `targets` (in the gate's own qudit order)
/// into an `n`-qudit register. Qudit 0 is the most significant digit.
pub fn embed(d: usize, n: usize, targets: &[usize], gate: &CMatrix) -> Result<CMatrix> {
    check_dim(d)?;
    let k = targets.len();
    let sub = d.pow(k as u32);
    if gate.rows() != sub || gate.cols() != sub {
        return Err(Error::ShapeMismatch {
            expected: format!("{sub}x{sub} gate"),
            found: format!("{}x{}", gate.rows(), gate.cols()),
        });
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= n {
            return Err(Error::QuditOutOfRange { qudit: t, n });
        }
        if targets[..i].contains(&t) {
            return Err(Error::InvalidArgument(format!("repeated target qudit {t}")));
        }
    }
    let dim = d.pow(n as u32);
    let digit = |idx: usize, q: usize| (idx / d.pow((n - 1 - q) as u32)) % d;
    let sub_index = |idx: usize| targets.iter().fold(0, |acc, &t| acc * d + digit(idx, t));
    let rest_matches = |i: usize, j: usize| (0..n).all(|q| targets.contains(&q) || digit(i, q) == digit(j, q));
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        if rest_matches(i, j) {
            gate[(sub_index(i), sub_index(j))]
        } else {
            ZERO
        }
    }))
}
