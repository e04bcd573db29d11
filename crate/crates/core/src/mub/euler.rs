//! Approximate decomposition of a single-qudit unitary into alternating
//! `Z(a)`, `X(a)` and `ZX^k(a)` factors, each compiled to a pattern.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{compile_gate, zx_eigenbasis, GatePattern, GateTarget};
use crate::error::{Error, Result};
use crate::math::matrix::{CMatrix, C64};
use crate::math::{fourier_gate, PhaseVector};

/// Sweeps without at least this much progress count as a stall.
const STALL_WINDOW: usize = 200;
const STALL_GAIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    Z,
    X,
    Zx(usize),
}

impl FactorKind {
    fn basis(self, d: usize) -> Result<CMatrix> {
        match self {
            FactorKind::Z => Ok(CMatrix::identity(d)),
            FactorKind::X => fourier_gate(d),
            FactorKind::Zx(k) => zx_eigenbasis(d, k),
        }
    }

    fn target(self, a: PhaseVector) -> GateTarget {
        match self {
            FactorKind::Z => GateTarget::Z(a),
            FactorKind::X => GateTarget::X(a),
            FactorKind::Zx(k) => GateTarget::Zx { k, a },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerConfig {
    /// Sweeps over all factors per restart.
    pub max_sweeps: usize,
    pub restarts: usize,
    /// Required `|tr(U^† V)| / d`.
    pub target_fidelity: f64,
    pub seed: u64,
}

impl Default for EulerConfig {
    fn default() -> Self {
        Self {
            max_sweeps: 10_000,
            restarts: 8,
            target_fidelity: 1.0 - 1e-6,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerDecomposition {
    /// Compiled factors in application order (first element acts first).
    pub factors: Vec<GatePattern>,
    pub fidelity: f64,
    pub sweeps: usize,
}

impl EulerDecomposition {
    /// Product of the factors' unitaries.
    pub fn product(&self) -> CMatrix {
        let d = self.factors[0].expected.rows();
        self.factors
            .iter()
            .fold(CMatrix::identity(d), |acc, f| f.expected.matmul(&acc))
    }
}

/// [`euler_with_config`] with the default configuration.
pub fn euler_universality_demo(u: &CMatrix, d: usize) -> Result<EulerDecomposition> {
    euler_with_config(u, d, &EulerConfig::default())
}

fn fidelity(u: &CMatrix, v: &CMatrix) -> f64 {
    u.adjoint().matmul(v).trace().norm() / u.rows() as f64
}

fn single(target: GateTarget, u: &CMatrix) -> Result<EulerDecomposition> {
    let factor = compile_gate(&target)?;
    let fidelity = fidelity(u, &factor.expected);
    Ok(EulerDecomposition {
        factors: vec![factor],
        fidelity,
        sweeps: 0,
    })
}

/// Decomposes `u` for `d` in {2, 3}. Diagonal `u` becomes one `Z(a)`, and `u` with
/// diagonal `F^† u` a single native `F Z(a)` teleport. Otherwise block-coordinate
/// ascent over a fixed factor sequence (`Z X Z` for qubits, twelve factors cycling
/// `Z, X, ZX, ZX^2` for qutrits): with the other factors fixed, the optimal phases
/// of factor `B Z(a) B^†` are `a_j = -arg M_jj` where `M = B^† R U^† L B`.
pub fn euler_with_config(u: &CMatrix, d: usize, config: &EulerConfig) -> Result<EulerDecomposition> {
    if d != 2 && d != 3 {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "the universality demo covers qubits and qutrits".into(),
        });
    }
    if u.rows() != d || u.cols() != d {
        return Err(Error::ShapeMismatch {
            expected: format!("{d}x{d} matrix"),
            found: format!("{}x{}", u.rows(), u.cols()),
        });
    }
    u.ensure_unitary(1e-8)?;

    let args = |m: &CMatrix| PhaseVector::new(m.diagonal().iter().map(|z| z.arg()).collect());
    if u.is_diagonal(1e-12) {
        return single(GateTarget::Z(args(u)?), u);
    }
    let f = fourier_gate(d)?;
    let rest = f.adjoint().matmul(u);
    if rest.is_diagonal(1e-12) {
        return single(GateTarget::Native(args(&rest)?), u);
    }

    let kinds: Vec<FactorKind> = if d == 2 {
        vec![FactorKind::Z, FactorKind::X, FactorKind::Z]
    } else {
        let cycle = [FactorKind::Z, FactorKind::X, FactorKind::Zx(1), FactorKind::Zx(2)];
        (0..12).map(|i| cycle[i % 4]).collect()
    };
    let bases = kinds.iter().map(|k| k.basis(d)).collect::<Result<Vec<_>>>()?;
    let u_dag = u.adjoint();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    let mut total_sweeps = 0;

    for _ in 0..config.restarts.max(1) {
        let mut phases: Vec<Vec<f64>> = kinds
            .iter()
            .map(|_| (0..d).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect())
            .collect();
        let factor = |b: &CMatrix, a: &[f64]| {
            let z = CMatrix::from_diagonal(&a.iter().map(|&t| C64::from_polar(1.0, t)).collect::<Vec<_>>());
            b.matmul(&z).matmul(&b.adjoint())
        };
        let mut current: Vec<CMatrix> = bases.iter().zip(&phases).map(|(b, a)| factor(b, a)).collect();
        let mut fid = 0.0;
        let mut checkpoint = 0.0;
        for sweep in 0..config.max_sweeps {
            total_sweeps += 1;
            let n = current.len();
            let mut suffix = vec![CMatrix::identity(d); n + 1];
            for i in (0..n).rev() {
                suffix[i] = current[i].matmul(&suffix[i + 1]);
            }
            let mut prefix = CMatrix::identity(d);
            for i in 0..n {
                let b = &bases[i];
                let m = b.adjoint().matmul(&suffix[i + 1]).matmul(&u_dag).matmul(&prefix).matmul(b);
                let diag = m.diagonal();
                phases[i] = diag.iter().map(|z| -z.arg()).collect();
                fid = diag.iter().map(|z| z.norm()).sum::<f64>() / d as f64;
                current[i] = factor(b, &phases[i]);
                prefix = prefix.matmul(&current[i]);
            }
            if fid >= config.target_fidelity {
                break;
            }
            if sweep % STALL_WINDOW == 0 {
                if sweep > 0 && fid - checkpoint < STALL_GAIN {
                    break;
                }
                checkpoint = fid;
            }
        }
        if best.as_ref().is_none_or(|(f, _)| fid > *f) {
            best = Some((fid, phases));
        }
        if fid >= config.target_fidelity {
            break;
        }
    }

    let (best_fidelity, phases) = best.expect("at least one restart");
    if best_fidelity < config.target_fidelity {
        return Err(Error::DecompositionFailed {
            restarts: config.restarts,
            best_fidelity,
        });
    }
    // matrix order V_0 V_1 ... acts right to left
    let factors = kinds
        .iter()
        .zip(phases)
        .rev()
        .map(|(k, a)| compile_gate(&k.target(PhaseVector::new(a)?)))
        .collect::<Result<Vec<_>>>()?;
    let decomposition = EulerDecomposition {
        factors,
        fidelity: 0.0,
        sweeps: total_sweeps,
    };
    let fidelity = fidelity(u, &decomposition.product());
    Ok(EulerDecomposition {
        fidelity,
        ..decomposition
    })
}
