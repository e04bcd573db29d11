//! Mutually unbiased bases in prime dimension and measurement patterns for the
//! gates `Z(a)`, `X(a)` and `ZX^k(a)`.

mod euler;

pub use euler::{euler_universality_demo, euler_with_config, EulerConfig, EulerDecomposition, FactorKind};

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;

use crate::cluster::ClusterGraph;
use crate::error::{Error, Result};
use crate::frame::scale_phase_vector;
use crate::math::matrix::{CMatrix, C64};
use crate::math::{
    fourier_gate, fourier_phase_gate, is_prime, omega, phase_gate, unit_inverse, ModUnit, PhaseVector,
};
use crate::state::StateVector;
use crate::teleport::{run_pattern, BranchSelection, MeasurementPattern, PatternResult};

/// Exponents of `omega` defining the `ZX^k` eigenvector with eigenvalue 1.
pub type AlphaVector = Vec<usize>;

/// Singular values above this count towards [`spanning_rank`].
pub const RANK_THRESHOLD: f64 = 1e-8;

fn ensure_prime(d: usize) -> Result<()> {
    if !is_prime(d) {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "mutually unbiased bases are only constructed for prime dimensions".into(),
        });
    }
    Ok(())
}

fn ensure_power(d: usize, k: usize) -> Result<()> {
    if k == 0 || k >= d {
        return Err(Error::NotAUnit {
            value: k as i64,
            modulus: d,
        });
    }
    Ok(())
}

/// Solves `alpha_{l+k} + l = alpha_l (mod d)` with `alpha_0 = 0` by walking the
/// index cycle `0, k, 2k, ...`.
pub fn solve_alpha(d: usize, k: usize) -> Result<AlphaVector> {
    ensure_prime(d)?;
    if d == 2 {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "the recurrence is inconsistent for even dimension".into(),
        });
    }
    ensure_power(d, k)?;
    let mut alpha = vec![0; d];
    let mut l = 0;
    for _ in 1..d {
        let next = (l + k) % d;
        alpha[next] = (alpha[l] + d - l) % d;
        l = next;
    }
    Ok(alpha)
}

/// Exact check of the recurrence at every index.
pub fn alpha_satisfies_recurrence(alpha: &[usize], k: usize) -> bool {
    let d = alpha.len();
    alpha[0] == 0 && (0..d).all(|l| (alpha[(l + k) % d] + l) % d == alpha[l] % d)
}

/// The phase vector `b_k` with `Z(b_k)|+_j> ∝ |psi^k_{jk}>`. For `d = 2` this is
/// `(0, pi/2)`, i.e. `Z(b) = diag(1, i)`.
pub fn b_vector(d: usize, k: usize) -> Result<PhaseVector> {
    ensure_prime(d)?;
    ensure_power(d, k)?;
    if d == 2 {
        return PhaseVector::new(vec![0.0, FRAC_PI_2]);
    }
    Ok(PhaseVector::from_omega_exponents(&solve_alpha(d, k)?))
}

/// Eigenvector `|psi^k_m> = X^{-m} |alpha^(k)>` of `ZX^k` (eigenvalue `omega^m`).
/// For `d = 2`, `|psi_0> = (|0> + i|1>)/sqrt 2` and `|psi_1> = (|0> - i|1>)/sqrt 2`.
pub fn zx_eigenvector(d: usize, k: usize, m: usize) -> Result<Vec<C64>> {
    ensure_prime(d)?;
    ensure_power(d, k)?;
    let norm = 1.0 / (d as f64).sqrt();
    if d == 2 {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(vec![C64::new(norm, 0.0), C64::new(0.0, sign * norm)]);
    }
    let alpha = solve_alpha(d, k)?;
    let mut v = vec![C64::new(0.0, 0.0); d];
    for (l, &a) in alpha.iter().enumerate() {
        v[(l + m) % d] = omega(d, a as i64) * norm;
    }
    Ok(v)
}

/// Columns `|psi^k_0>, ..., |psi^k_{d-1}>`.
pub fn zx_eigenbasis(d: usize, k: usize) -> Result<CMatrix> {
    let columns = (0..d).map(|m| zx_eigenvector(d, k, m)).collect::<Result<Vec<_>>>()?;
    CMatrix::from_columns(&columns)
}

/// `|psi^k_m>` multiplied by `omega^{m (m k^{-1} + 1)/2}`, so that `Z(b_k)|+_j>`
/// equals the rephased `|psi^k_{jk}>` with no extra phase.
pub fn rephased_zx_eigenvector(d: usize, k: usize, m: usize) -> Result<Vec<C64>> {
    let v = zx_eigenvector(d, k, m)?;
    if d == 2 {
        return Ok(v);
    }
    let half = unit_inverse(2, d)?;
    let kinv = unit_inverse(k as i64, d)?;
    let e = (half * m % d) * ((m * kinv + 1) % d) % d;
    let phase = omega(d, e as i64);
    Ok(v.into_iter().map(|a| a * phase).collect())
}

/// `ZX^k(a) = sum_m e^{i a_m} |psi^k_m><psi^k_m|`.
pub fn zx_phase_gate(k: usize, a: &PhaseVector) -> Result<CMatrix> {
    let b = zx_eigenbasis(a.dim(), k)?;
    Ok(b.matmul(&phase_gate(a)).matmul(&b.adjoint()))
}

/// Largest deviation in `Z(b_k)|+_j> = omega^{j(j+1)k/2} |psi^k_{jk}>` over `j`.
pub fn eigenphase_relation_residual(d: usize, k: usize) -> Result<f64> {
    let zb = phase_gate(&b_vector(d, k)?);
    let f = fourier_gate(d)?;
    let mut worst: f64 = 0.0;
    for j in 0..d {
        let lhs = zb.apply(&f.column(j));
        let rhs: Vec<C64> = if d == 2 {
            zx_eigenvector(d, k, j)?
        } else {
            let half = unit_inverse(2, d)?;
            let e = (half * j % d) * ((j + 1) % d) % d * k % d;
            zx_eigenvector(d, k, j * k % d)?
                .into_iter()
                .map(|a| a * omega(d, e as i64))
                .collect()
        };
        let diff = lhs.iter().zip(&rhs).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        worst = worst.max(diff);
    }
    Ok(worst)
}

pub fn eigenphase_relation_check(d: usize, k: usize) -> Result<bool> {
    Ok(eigenphase_relation_residual(d, k)? <= 1e-10)
}

/// The `d + 1` bases built from eigenvectors of `Z, X, ZX, ..., ZX^{d-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MubFamily {
    d: usize,
    bases: Vec<CMatrix>,
    labels: Vec<String>,
}

impl MubFamily {
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Basis matrices; column `j` of each is a basis vector.
    pub fn bases(&self) -> &[CMatrix] {
        &self.bases
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Largest `|<a_i|a_j> - delta_ij|` within any basis.
    pub fn orthonormality_residual(&self) -> f64 {
        self.bases
            .iter()
            .map(|b| b.adjoint().matmul(b).max_diff(&CMatrix::identity(self.d)))
            .fold(0.0, f64::max)
    }

    /// Largest `| |<a_i|b_j>| - 1/sqrt d |` over all pairs of distinct bases.
    pub fn unbiasedness_residual(&self) -> f64 {
        let target = 1.0 / (self.d as f64).sqrt();
        let mut worst: f64 = 0.0;
        for (i, a) in self.bases.iter().enumerate() {
            for b in &self.bases[i + 1..] {
                let g = a.adjoint().matmul(b);
                for x in g.as_slice() {
                    worst = worst.max((x.norm() - target).abs());
                }
            }
        }
        worst
    }
}

/// Basis 0 is computational, basis 1 Fourier, basis `k+1` has columns `Z(b_k)|+_j>`.
pub fn build_mub_family(d: usize) -> Result<MubFamily> {
    ensure_prime(d)?;
    let f = fourier_gate(d)?;
    let mut bases = vec![CMatrix::identity(d), f.clone()];
    let mut labels = vec!["Z".to_string(), "X".to_string()];
    for k in 1..d {
        bases.push(phase_gate(&b_vector(d, k)?).matmul(&f));
        labels.push(if k == 1 { "ZX".into() } else { format!("ZX^{k}") });
    }
    Ok(MubFamily { d, bases, labels })
}

/// Rank of the real span of all `d(d+1)` basis projectors inside the
/// `d^2`-dimensional real space of Hermitian matrices.
pub fn spanning_rank(family: &MubFamily) -> usize {
    let d = family.d;
    let mut rows = Vec::new();
    for b in &family.bases {
        for j in 0..d {
            let v = b.column(j);
            let mut coords = Vec::with_capacity(d * d);
            for r in 0..d {
                coords.push(v[r].norm_sqr());
            }
            for r in 0..d {
                for c in r + 1..d {
                    let x = v[r] * v[c].conj();
                    coords.push(x.re);
                    coords.push(x.im);
                }
            }
            rows.push(coords);
        }
    }
    let m = DMatrix::from_fn(rows.len(), d * d, |i, j| rows[i][j]);
    m.svd(false, false)
        .singular_values
        .iter()
        .filter(|&&s| s > RANK_THRESHOLD)
        .count()
}

/// A single-qudit gate that can be compiled to a measurement pattern.
#[derive(Debug, Clone, PartialEq)]
pub enum GateTarget {
    /// `Z(a)`, diagonal in the computational basis.
    Z(PhaseVector),
    /// `X(a) = sum e^{i a_j} |+_j><+_j|`.
    X(PhaseVector),
    /// `ZX^k(a) = sum e^{i a_m} |psi^k_m><psi^k_m|`.
    Zx { k: usize, a: PhaseVector },
    /// `F Z(a)`, a single teleport.
    Native(PhaseVector),
}

impl GateTarget {
    pub fn dim(&self) -> usize {
        match self {
            GateTarget::Z(a) | GateTarget::X(a) | GateTarget::Native(a) | GateTarget::Zx { a, .. } => a.dim(),
        }
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        match self {
            GateTarget::Z(a) => Ok(phase_gate(a)),
            GateTarget::X(a) => Ok(fourier_phase_gate(a)),
            GateTarget::Zx { k, a } => zx_phase_gate(*k, a),
            GateTarget::Native(a) => Ok(fourier_gate(a.dim())?.matmul(&phase_gate(a))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            GateTarget::Z(_) => "Z(a)".into(),
            GateTarget::X(_) => "X(a)".into(),
            GateTarget::Zx { k: 1, .. } => "ZX(a)".into(),
            GateTarget::Zx { k, .. } => format!("ZX^{k}(a)"),
            GateTarget::Native(_) => "FZ(a)".into(),
        }
    }
}

/// A compiled gate: a pattern on a linear cluster plus the unitary it should realise.
#[derive(Debug, Clone, PartialEq)]
pub struct GatePattern {
    pub target: GateTarget,
    pub pattern: MeasurementPattern,
    pub expected: CMatrix,
}

impl GatePattern {
    /// Linear cluster with one more vertex than measurements.
    pub fn cluster(&self) -> Result<ClusterGraph> {
        ClusterGraph::linear(self.pattern.dim(), self.pattern.num_measurements() + 1)
    }

    pub fn run(&self, input: &StateVector, selection: &BranchSelection) -> Result<Vec<PatternResult>> {
        run_pattern(Some(input), &self.cluster()?, &self.pattern, selection)
    }
}

/// Emits the pattern for `target`. Every `F^†` is a teleport with adaptive unit `-1`.
/// Step lists are in time order, so the rightmost factor of each decomposition comes first:
///
/// * `Z(a) = F^† . F Z(a)`
/// * `X(a) = F Z(a) . F^†`
/// * `ZX^k(a) = F^† . F Z(b_k) . F Z(a') . F^† Z(-b_k)` with `a'_j = a_{jk}`
pub fn compile_gate(target: &GateTarget) -> Result<GatePattern> {
    let d = target.dim();
    ensure_prime(d)?;
    let zero = PhaseVector::zeros(d);
    let dagger = ModUnit::minus_one(d);
    let p = MeasurementPattern::empty(d)?;
    let pattern = match target {
        GateTarget::Z(a) => p.measure(0, a.clone())?.measure_fc(1, zero, dagger)?,
        GateTarget::X(a) => p.measure_fc(0, zero, dagger)?.measure(1, a.clone())?,
        GateTarget::Zx { k, a } => {
            let b = b_vector(d, *k)?;
            let permuted = scale_phase_vector(a, ModUnit::new(*k as i64, d)?)?;
            p.measure_fc(0, b.negated(), dagger)?
                .measure(1, permuted)?
                .measure(2, b)?
                .measure_fc(3, zero, dagger)?
        }
        GateTarget::Native(a) => p.measure(0, a.clone())?,
    };
    Ok(GatePattern {
        target: target.clone(),
        pattern,
        expected: target.matrix()?,
    })
}
