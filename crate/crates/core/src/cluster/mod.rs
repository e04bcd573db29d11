//! Cluster (graph) states, projective measurement with branch enumeration,
//! stabiliser checks and the maximal-connectedness property.

mod graph;

pub use graph::ClusterGraph;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math::matrix::{CMatrix, C64, ZERO};
use crate::math::{embed, pauli_x_power, pauli_z_power, DEFAULT_TOLERANCE};
use crate::state::StateVector;

/// Branches with probability below this are dropped from enumeration.
pub const PRUNE_PROBABILITY: f64 = 1e-14;

/// Residual above which a measurement basis is rejected as non-unitary.
pub const BASIS_UNITARITY_TOLERANCE: f64 = 1e-8;

/// One observed (or enumerated) measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub qudit: usize,
    /// Unitary whose columns are the measurement basis; outcome `k` is column `k`.
    pub basis: CMatrix,
    pub outcome: usize,
    pub probability: f64,
}

/// A measurement outcome together with the renormalised post-measurement state.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub record: MeasurementRecord,
    pub state: StateVector,
}

/// `(prod_{(a,b) in E} CZ_{ab}) (⊗_a |in_a>)`, with `|in_a> = |+>` unless overridden.
pub fn build_cluster_state(g: &ClusterGraph) -> Result<StateVector> {
    let d = g.dim();
    let plus = StateVector::plus(d, 0)?;
    let factors: Vec<StateVector> = (0..g.num_vertices())
        .map(|v| g.input(v).cloned().unwrap_or_else(|| plus.clone()))
        .collect();
    let mut state = StateVector::product(d, &factors)?;
    for &(a, b) in g.edges() {
        state.apply_cz(a, b, 1)?;
    }
    Ok(state)
}

/// Unnormalised post-measurement amplitudes for outcome `k` (qudit `q` removed).
fn project(s: &StateVector, q: usize, u: &CMatrix, k: usize) -> Vec<C64> {
    let d = s.dim();
    let stride = s.stride(q);
    let block = stride * d;
    let bra: Vec<C64> = (0..d).map(|j| u[(j, k)].conj()).collect();
    let mut out = Vec::with_capacity(s.amplitudes().len() / d);
    let amps = s.amplitudes();
    for base in (0..amps.len()).step_by(block) {
        for offset in 0..stride {
            let start = base + offset;
            let mut acc = ZERO;
            for (j, b) in bra.iter().enumerate() {
                acc += b * amps[start + j * stride];
            }
            out.push(acc);
        }
    }
    out
}

fn check_basis(s: &StateVector, q: usize, u: &CMatrix) -> Result<()> {
    s.check_qudit(q)?;
    let d = s.dim();
    if u.rows() != d || u.cols() != d {
        return Err(Error::ShapeMismatch {
            expected: format!("{d}x{d} basis"),
            found: format!("{}x{}", u.rows(), u.cols()),
        });
    }
    u.ensure_unitary(BASIS_UNITARITY_TOLERANCE)
}

fn make_branch(s: &StateVector, q: usize, u: &CMatrix, k: usize) -> Result<Option<Branch>> {
    let amps = project(s, q, u, k);
    let probability: f64 = amps.iter().map(C64::norm_sqr).sum();
    if probability < PRUNE_PROBABILITY {
        return Ok(None);
    }
    let state = StateVector::from_amplitudes(s.dim(), s.num_qudits() - 1, amps)?;
    Ok(Some(Branch {
        record: MeasurementRecord {
            qudit: q,
            basis: u.clone(),
            outcome: k,
            probability,
        },
        state,
    }))
}

/// Measures qudit `q` in the basis given by the columns of `u` and returns every
/// branch with non-negligible probability, in outcome order. The measured qudit
/// is removed from each post-state; higher qudit indices shift down by one.
pub fn measure_in_basis(s: &StateVector, q: usize, u: &CMatrix) -> Result<Vec<Branch>> {
    check_basis(s, q, u)?;
    let mut out = Vec::with_capacity(s.dim());
    for k in 0..s.dim() {
        if let Some(b) = make_branch(s, q, u, k)? {
            out.push(b);
        }
    }
    Ok(out)
}

/// Post-selects outcome `k`; `None` if that outcome has (numerically) zero probability.
pub fn measure_outcome(s: &StateVector, q: usize, u: &CMatrix, k: usize) -> Result<Option<Branch>> {
    check_basis(s, q, u)?;
    if k >= s.dim() {
        return Err(Error::OutcomeOutOfRange {
            outcome: k,
            d: s.dim(),
        });
    }
    make_branch(s, q, u, k)
}

/// Samples one branch according to the Born rule using the given generator.
pub fn measure_with_rng(s: &StateVector, q: usize, u: &CMatrix, rng: &mut impl Rng) -> Result<Branch> {
    let branches = measure_in_basis(s, q, u)?;
    let total: f64 = branches.iter().map(|b| b.record.probability).sum();
    let mut r = rng.random::<f64>() * total;
    let last = branches.len() - 1;
    for (i, b) in branches.iter().enumerate() {
        if r < b.record.probability || i == last {
            return Ok(b.clone());
        }
        r -= b.record.probability;
    }
    unreachable!("branch list is never empty for a normalised state")
}

/// Samples one branch with a ChaCha8 generator seeded from `seed`.
pub fn measure_sampled(s: &StateVector, q: usize, u: &CMatrix, seed: u64) -> Result<Branch> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    measure_with_rng(s, q, u, &mut rng)
}

/// `S(a) = X_a^† ⊗ (⊗_{b in N(a)} Z_b)` on the whole register.
pub fn stabilizer_operator(g: &ClusterGraph, a: usize) -> Result<CMatrix> {
    g.check_vertex(a)?;
    let d = g.dim();
    let n = g.num_vertices();
    let mut op = embed(d, n, &[a], &pauli_x_power(d, -1)?)?;
    let z = pauli_z_power(d, 1)?;
    for b in g.neighbors(a) {
        op = op.matmul(&embed(d, n, &[b], &z)?);
    }
    Ok(op)
}

/// Applies `S(a)` to a state without materialising the full operator.
pub fn apply_stabilizer(g: &ClusterGraph, a: usize, state: &StateVector) -> Result<StateVector> {
    g.check_vertex(a)?;
    let d = g.dim();
    let mut out = state.clone();
    let z = pauli_z_power(d, 1)?;
    for b in g.neighbors(a) {
        out.apply_single(b, &z)?;
    }
    out.apply_single(a, &pauli_x_power(d, -1)?)?;
    Ok(out)
}

/// Largest `|S(a)|psi> - |psi>|` over all vertices.
pub fn stabilizer_residual(g: &ClusterGraph, state: &StateVector) -> Result<f64> {
    if state.num_qudits() != g.num_vertices() || state.dim() != g.dim() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} qudits of dimension {}", g.num_vertices(), g.dim()),
            found: format!("{} qudits of dimension {}", state.num_qudits(), state.dim()),
        });
    }
    let mut worst: f64 = 0.0;
    for a in 0..g.num_vertices() {
        let image = apply_stabilizer(g, a, state)?;
        let diff = image
            .amplitudes()
            .iter()
            .zip(state.amplitudes())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(diff);
    }
    Ok(worst)
}

/// True iff every stabiliser fixes the given state within `tol`.
pub fn stabilizers_hold(g: &ClusterGraph, state: &StateVector, tol: f64) -> Result<bool> {
    Ok(stabilizer_residual(g, state)? <= tol)
}

/// Builds the cluster state of `g` (default `|+>` inputs) and checks `S(a)|phi> = |phi>`
/// for every vertex within `1e-10`.
pub fn verify_stabilizers(g: &ClusterGraph) -> Result<bool> {
    let g = g.without_inputs();
    stabilizers_hold(&g, &build_cluster_state(&g)?, DEFAULT_TOLERANCE)
}

/// Measures vertex `q` of the cluster state of `g` in the computational basis,
/// post-selects outcome `j`, and compares the remainder with
/// `(⊗_{b in N(q)} Z_b^j) |phi_{G - q}>` up to phase. Returns the comparison fidelity.
pub fn z_measure_removal_fidelity(g: &ClusterGraph, q: usize, j: usize) -> Result<f64> {
    let g = g.without_inputs();
    g.check_vertex(q)?;
    let d = g.dim();
    if j >= d {
        return Err(Error::OutcomeOutOfRange { outcome: j, d });
    }
    let state = build_cluster_state(&g)?;
    let branch = measure_outcome(&state, q, &CMatrix::identity(d), j)?
        .ok_or(Error::ZeroNorm)?;
    let smaller = g.without_vertex(q)?;
    let mut expected = build_cluster_state(&smaller)?;
    let zj = pauli_z_power(d, j as i64)?;
    for b in g.neighbors(q) {
        let b = if b > q { b - 1 } else { b };
        expected.apply_single(b, &zj)?;
    }
    Ok(branch.state.compare_up_to_phase(&expected, DEFAULT_TOLERANCE)?.fidelity)
}

/// Maximal connectedness for one vertex and outcome.
pub fn z_measure_removal_check(g: &ClusterGraph, q: usize, j: usize) -> Result<bool> {
    Ok(z_measure_removal_fidelity(g, q, j)? >= 1.0 - DEFAULT_TOLERANCE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{
        fourier_gate, phase_gate, random_phase_vector, random_state_vector, random_unitary,
        states_equal_up_to_phase, PhaseVector,
    };
    use crate::math::matrix::ONE;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn two_qubit_cluster() {
        let g = ClusterGraph::linear(2, 2).unwrap();
        let s = build_cluster_state(&g).unwrap();
        let expected = [0.5, 0.5, 0.5, -0.5];
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!((a - C64::new(e, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn edgeless_graph_is_product_of_plus() {
        for d in [2, 3, 5] {
            let g = ClusterGraph::edgeless(d, 3).unwrap();
            let s = build_cluster_state(&g).unwrap();
            let amp = C64::new((d as f64).powf(-1.5), 0.0);
            assert!(s.amplitudes().iter().all(|a| (a - amp).norm() < 1e-12));
        }
    }

    #[test]
    fn path_of_three_is_stabilised() {
        let g = ClusterGraph::linear(3, 3).unwrap();
        assert!(verify_stabilizers(&g).unwrap());
        let s = build_cluster_state(&g).unwrap();
        let middle = stabilizer_operator(&g, 1).unwrap();
        let image = middle.apply(s.amplitudes());
        assert!(image.iter().zip(s.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn stabilizer_operator_examples() {
        let g = ClusterGraph::edgeless(3, 2).unwrap();
        let op = stabilizer_operator(&g, 1).unwrap();
        let expected = embed(3, 2, &[1], &pauli_x_power(3, -1).unwrap()).unwrap();
        assert_eq!(op, expected);

        let g = ClusterGraph::linear(2, 2).unwrap();
        let op = stabilizer_operator(&g, 0).unwrap();
        let (x, z) = crate::math::pauli_gates(2).unwrap();
        assert!(op.max_diff(&x.kron(&z)) < 1e-12);
        assert!(stabilizer_operator(&g, 2).is_err());
    }

    #[test]
    fn non_cluster_states_fail_stabilizer_check() {
        let g = ClusterGraph::linear(3, 3).unwrap();
        let zeros = StateVector::basis(3, &[0, 0, 0]).unwrap();
        assert!(!stabilizers_hold(&g, &zeros, DEFAULT_TOLERANCE).unwrap());

        let s = build_cluster_state(&g).unwrap();
        let mut amps = s.into_amplitudes();
        amps[4] += C64::new(1e-3, 0.0);
        let perturbed = StateVector::from_amplitudes(3, 3, amps).unwrap();
        let residual = stabilizer_residual(&g, &perturbed).unwrap();
        assert!(residual > 1e-4, "residual {residual}");
        assert!(!stabilizers_hold(&g, &perturbed, DEFAULT_TOLERANCE).unwrap());
    }

    #[test]
    fn removal_examples() {
        let tri = ClusterGraph::new(3, 3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(z_measure_removal_check(&tri, 0, 1).unwrap());
        // outcome 0 leaves exactly the smaller cluster state
        let g = ClusterGraph::grid(2, 2, 2).unwrap();
        for q in 0..4 {
            assert!(z_measure_removal_check(&g, q, 0).unwrap());
        }
        assert!(z_measure_removal_check(&g, 0, 2).is_err());
    }

    #[test]
    fn removal_check_detects_wrong_correction() {
        // Oracle: applying the Z^j correction to a non-neighbour must break equality.
        let d = 3;
        let g = ClusterGraph::linear(d, 3).unwrap();
        let state = build_cluster_state(&g).unwrap();
        let branch = measure_outcome(&state, 0, &CMatrix::identity(d), 1).unwrap().unwrap();
        let mut wrong = build_cluster_state(&g.without_vertex(0).unwrap()).unwrap();
        wrong.apply_single(1, &pauli_z_power(d, 1).unwrap()).unwrap();
        let cmp = branch.state.compare_up_to_phase(&wrong, DEFAULT_TOLERANCE).unwrap();
        assert!(!cmp.equal);
    }

    #[test]
    fn computational_measurement_of_basis_state() {
        let s = StateVector::basis(3, &[0, 0]).unwrap();
        let branches = measure_in_basis(&s, 0, &CMatrix::identity(3)).unwrap();
        assert_eq!(branches.len(), 1);
        assert_eq!(branches[0].record.outcome, 0);
        assert!((branches[0].record.probability - 1.0).abs() < 1e-15);
        assert_eq!(branches[0].state, StateVector::basis(3, &[0]).unwrap());
    }

    #[test]
    fn rejects_non_unitary_basis() {
        let s = StateVector::basis(2, &[0]).unwrap();
        let bad = CMatrix::from_diagonal(&[ONE, C64::new(2.0, 0.0)]);
        assert!(matches!(measure_in_basis(&s, 0, &bad), Err(Error::NotUnitary { .. })));
        assert!(matches!(
            measure_in_basis(&s, 1, &CMatrix::identity(2)),
            Err(Error::QuditOutOfRange { .. })
        ));
    }

    #[test]
    fn lemma_one_equivalence() {
        // Measuring in the basis of U equals applying U^† then measuring computationally.
        let mut r = rng(5);
        for d in [2, 3, 5] {
            for n in 1..=3usize {
                let s = StateVector::from_amplitudes(d, n, random_state_vector(d.pow(n as u32), &mut r)).unwrap();
                let u = random_unitary(d, &mut r);
                for q in 0..n {
                    let direct = measure_in_basis(&s, q, &u).unwrap();
                    let mut rotated = s.clone();
                    rotated.apply_single(q, &u.adjoint()).unwrap();
                    let via = measure_in_basis(&rotated, q, &CMatrix::identity(d)).unwrap();
                    assert_eq!(direct.len(), via.len());
                    let total: f64 = direct.iter().map(|b| b.record.probability).sum();
                    assert!((total - 1.0).abs() < 1e-10);
                    for (a, b) in direct.iter().zip(&via) {
                        assert_eq!(a.record.outcome, b.record.outcome);
                        assert!((a.record.probability - b.record.probability).abs() < 1e-12);
                        if a.state.num_qudits() > 0 {
                            assert!(a.state.compare_up_to_phase(&b.state, 1e-10).unwrap().equal);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn teleport_measurement_is_uniform() {
        let mut r = rng(9);
        for d in [2, 3, 5] {
            let psi = StateVector::from_amplitudes(d, 1, random_state_vector(d, &mut r)).unwrap();
            let mut s = psi.tensor(&StateVector::plus(d, 0).unwrap()).unwrap();
            s.apply_cz(0, 1, 1).unwrap();
            let a = random_phase_vector(d, &mut r);
            let basis = fourier_gate(d).unwrap().matmul(&phase_gate(&a)).adjoint();
            let branches = measure_in_basis(&s, 0, &basis).unwrap();
            assert_eq!(branches.len(), d);
            for b in branches {
                assert!((b.record.probability - 1.0 / d as f64).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let d = 3;
        let mut s = StateVector::basis(d, &[0]).unwrap().tensor(&StateVector::plus(d, 0).unwrap()).unwrap();
        s.apply_single(0, &fourier_gate(d).unwrap()).unwrap();
        s.apply_cz(0, 1, 1).unwrap();
        let basis = fourier_gate(d).unwrap().adjoint();
        let a = measure_sampled(&s, 0, &basis, 0).unwrap();
        let b = measure_sampled(&s, 0, &basis, 0).unwrap();
        assert_eq!(a, b);
        let outcomes: Vec<usize> = (0..16)
            .map(|seed| measure_sampled(&s, 0, &basis, seed).unwrap().record.outcome)
            .collect();
        assert_eq!(
            outcomes,
            (0..16)
                .map(|seed| measure_sampled(&s, 0, &basis, seed).unwrap().record.outcome)
                .collect::<Vec<_>>()
        );
        // deterministic branch regardless of seed
        let det = StateVector::basis(d, &[2, 1]).unwrap();
        for seed in 0..10 {
            let br = measure_sampled(&det, 0, &CMatrix::identity(d), seed).unwrap();
            assert_eq!(br.record.outcome, 2);
        }
    }

    #[test]
    fn sampled_frequencies_match_born_rule() {
        // Binomial oracle: each of the three outcomes has p = 1/3, so counts over
        // N samples have standard deviation sqrt(N p (1-p)).
        let d = 3;
        let mut s = StateVector::plus(d, 0).unwrap().tensor(&StateVector::plus(d, 0).unwrap()).unwrap();
        s.apply_cz(0, 1, 1).unwrap();
        let basis = fourier_gate(d).unwrap().matmul(&phase_gate(&PhaseVector::zeros(d))).adjoint();
        let samples = 100_000usize;
        let mut r = rng(2024);
        let mut counts = [0usize; 3];
        for _ in 0..samples {
            counts[measure_with_rng(&s, 0, &basis, &mut r).unwrap().record.outcome] += 1;
        }
        let p = 1.0 / 3.0;
        let mean = samples as f64 * p;
        let sigma = (samples as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - mean).abs() < 3.0 * sigma, "counts {counts:?}");
        }
    }

    #[test]
    fn edge_order_is_irrelevant() {
        let g = ClusterGraph::new(3, 4, [(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)]).unwrap();
        let reordered = g.with_edge_order(&[4, 2, 0, 3, 1]).unwrap();
        let a = build_cluster_state(&g).unwrap();
        let b = build_cluster_state(&reordered).unwrap();
        assert!(a.amplitudes().iter().zip(b.amplitudes()).all(|(x, y)| (x - y).norm() < 1e-12));
    }

    #[test]
    fn custom_inputs_replace_plus() {
        let d = 3;
        let g = ClusterGraph::linear(d, 2)
            .unwrap()
            .with_input(0, StateVector::basis(d, &[1]).unwrap())
            .unwrap();
        let s = build_cluster_state(&g).unwrap();
        let expected = StateVector::basis(d, &[1]).unwrap().tensor(&StateVector::plus(d, 1).unwrap()).unwrap();
        assert!(states_equal_up_to_phase(s.amplitudes(), expected.amplitudes(), 1e-12).unwrap().equal);
    }
}
