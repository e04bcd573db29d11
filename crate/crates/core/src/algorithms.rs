//! Recovering the hidden parameters of `f(x, y) = (x - a)(y - b)` with a single
//! oracle call, as a circuit and as a measurement pattern on a six-qudit cluster.

use crate::cluster::ClusterGraph;
use crate::error::{Error, Result};
use crate::frame::classical_readout_correct;
use crate::math::matrix::CMatrix;
use crate::math::{fourier_gate, modp, permutation_matrix, ModUnit, PhaseVector};
use crate::state::StateVector;
use crate::teleport::{run_pattern, BranchSelection, MeasurementPattern, PatternResult};

/// Probability above which a computational-basis readout counts as deterministic.
const DETERMINISTIC: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HiddenShiftInstance {
    pub d: usize,
    pub a: usize,
    pub b: usize,
}

impl HiddenShiftInstance {
    pub fn new(d: usize, a: usize, b: usize) -> Result<Self> {
        crate::math::gates::check_dim(d)?;
        if a >= d || b >= d {
            return Err(Error::InvalidArgument(format!(
                "hidden parameters ({a}, {b}) must lie in [0, {d})"
            )));
        }
        Ok(Self { d, a, b })
    }

    /// `f(x, y) = (x - a)(y - b) mod d`.
    pub fn f(&self, x: usize, y: usize) -> usize {
        modp((x as i64 - self.a as i64) * (y as i64 - self.b as i64), self.d)
    }

    /// Every instance of dimension `d`, ordered by `(a, b)`.
    pub fn all(d: usize) -> Result<Vec<Self>> {
        (0..d * d).map(|t| Self::new(d, t / d, t % d)).collect()
    }
}

/// `U_f |x1, x2, y> = |x1, x2, y + f(x1, x2)>` on three qudits.
pub fn oracle_uf(inst: &HiddenShiftInstance) -> CMatrix {
    let d = inst.d;
    permutation_matrix(d * d * d, |idx| {
        let (x1, x2, y) = (idx / (d * d), (idx / d) % d, idx % d);
        (x1 * d + x2) * d + (y + inst.f(x1, x2)) % d
    })
}

/// Computational readout of `qudits`, each of which must be (almost) deterministic.
fn deterministic_readout(s: &StateVector, qudits: &[usize]) -> Result<Vec<usize>> {
    qudits
        .iter()
        .map(|&q| {
            let marginal = s.marginal(q)?;
            let (k, p) = marginal
                .iter()
                .copied()
                .enumerate()
                .fold((0, 0.0), |best, (k, p)| if p > best.1 { (k, p) } else { best });
            if p < DETERMINISTIC {
                return Err(Error::InvalidArgument(format!(
                    "readout of qudit {q} is not deterministic (largest probability {p:.3e})"
                )));
            }
            Ok(k)
        })
        .collect()
}

/// Reference circuit: `|+>|+>|+_{d-1}>`, then `U_f`, then `C[Z^{-1}]` on the first
/// two qudits, then `F^†` on both and a computational readout. The oracle leaves the
/// phase `omega^{x1 x2 - b x1 - a x2}`, so the first qudit reads `-b` and the second `-a`.
pub fn run_circuit_reference(inst: &HiddenShiftInstance) -> Result<(usize, usize)> {
    let d = inst.d;
    let plus = StateVector::plus(d, 0)?;
    let mut s = StateVector::product(d, &[plus.clone(), plus, StateVector::plus(d, d as i64 - 1)?])?;
    s.apply_full(&oracle_uf(inst))?;
    s.apply_cz(0, 1, -1)?;
    let fd = fourier_gate(d)?.adjoint();
    s.apply_single(0, &fd)?;
    s.apply_single(1, &fd)?;
    let m = deterministic_readout(&s, &[0, 1])?;
    Ok((modp(-(m[1] as i64), d), modp(-(m[0] as i64), d)))
}

/// Two rows `0 1 2` and `3 4 5` joined by the vertical edges `0-3` and `1-4`.
pub fn dj_cluster(d: usize) -> Result<ClusterGraph> {
    ClusterGraph::new(d, 6, [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4)])
}

/// Measures 0 and 3 with the phases of `Z^{-a}` and `Z^{-b}`, then 1 and 4 with zero
/// phases. Qudits 3 and 1 use the adaptive unit `-1` so that their step is `F^†`.
pub fn dj_pattern(inst: &HiddenShiftInstance) -> Result<MeasurementPattern> {
    let d = inst.d;
    let dagger = ModUnit::minus_one(d);
    MeasurementPattern::empty(d)?
        .measure(0, PhaseVector::pauli_z_power(d, -(inst.a as i64)))?
        .measure_fc(3, PhaseVector::pauli_z_power(d, -(inst.b as i64)), dagger)?
        .measure_fc(1, PhaseVector::zeros(d), dagger)?
        .measure(4, PhaseVector::zeros(d))
}

/// One outcome branch of the cluster run.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterBranch {
    /// Outcomes at qudits 0, 3, 1, 4 (pattern order).
    pub outcomes: Vec<usize>,
    pub probability: f64,
    /// Computational readout of the output qudits 2 and 5.
    pub raw: (usize, usize),
    /// Readout mapped back through the error frame.
    pub corrected: (usize, usize),
    /// `-(top + m_1 - m_3)` and `-(bottom + m_4 - m_0)` from the raw readout,
    /// with `m_v` the outcome at qudit `v`.
    pub by_formula: (usize, usize),
    /// `(a, b)`; the top wire carries `b` and the bottom wire `a`.
    pub recovered: (usize, usize),
}

fn branch(inst: &HiddenShiftInstance, r: &PatternResult) -> Result<ClusterBranch> {
    let d = inst.d as i64;
    let raw = deterministic_readout(&r.state, &[0, 1])?;
    let corrected = classical_readout_correct(&r.frame, &raw)?;
    let o: Vec<i64> = r.outcomes.iter().map(|&m| m as i64).collect();
    let (m0, m3, m1, m4) = (o[0], o[1], o[2], o[3]);
    let (top, bottom) = (raw[0] as i64, raw[1] as i64);
    let by_formula = (
        modp(-(top + m1 - m3), d as usize),
        modp(-(bottom + m4 - m0), d as usize),
    );
    Ok(ClusterBranch {
        outcomes: r.outcomes.clone(),
        probability: r.probability,
        raw: (raw[0], raw[1]),
        corrected: (corrected[0], corrected[1]),
        by_formula,
        recovered: (corrected[1], corrected[0]),
    })
}

/// Runs the pattern on [`dj_cluster`] and reads `(a, b)` from every selected branch.
pub fn run_cluster_version(inst: &HiddenShiftInstance, selection: &BranchSelection) -> Result<Vec<ClusterBranch>> {
    let g = dj_cluster(inst.d)?;
    let results = run_pattern(None, &g, &dj_pattern(inst)?, selection)?;
    results.iter().map(|r| branch(inst, r)).collect()
}
