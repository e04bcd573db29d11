//! One-dit teleportation and execution of measurement patterns on clusters.

mod layout;
mod pattern;

pub use layout::{infer_layout, Interaction, WireLayout};
pub use pattern::{MeasurementPattern, PatternStep};

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cluster::{self, ClusterGraph, MeasurementRecord};
use crate::error::{Error, Result};
use crate::frame::ErrorFrame;
use crate::math::matrix::CMatrix;
use crate::math::{
    embed, fourier_c, fourier_gate, phase_gate, states_equal_up_to_phase, ModUnit, PhaseComparison,
    PhaseVector,
};
use crate::state::StateVector;

/// Basis `(F Z(a))^†` whose measurement teleports `Z(a)|psi>` through a CZ link.
pub fn teleport_basis(a: &PhaseVector) -> CMatrix {
    let f = fourier_gate(a.dim()).expect("phase vectors have length >= 2");
    f.matmul(&phase_gate(a)).adjoint()
}

/// Runs `CZ(|psi> ⊗ |+>)`, measures qudit 0 in the basis `(F Z(a))^†` and
/// post-selects outcome `m`. Returns the remaining qudit and the outcome probability;
/// the state equals `X^m F Z(a)|psi>` up to phase.
pub fn one_dit_teleport_with_probability(
    psi: &StateVector,
    a: &PhaseVector,
    m: usize,
) -> Result<(StateVector, f64)> {
    if psi.num_qudits() != 1 {
        return Err(Error::ShapeMismatch {
            expected: "a single qudit".into(),
            found: format!("{} qudits", psi.num_qudits()),
        });
    }
    let d = psi.dim();
    a.ensure_dim(d)?;
    let mut s = psi.tensor(&StateVector::plus(d, 0)?)?;
    s.apply_cz(0, 1, 1)?;
    let branch = cluster::measure_outcome(&s, 0, &teleport_basis(a), m)?
        .ok_or_else(|| Error::InvalidArgument(format!("outcome {m} has zero probability")))?;
    Ok((branch.state, branch.record.probability))
}

pub fn one_dit_teleport(psi: &StateVector, a: &PhaseVector, m: usize) -> Result<StateVector> {
    Ok(one_dit_teleport_with_probability(psi, a, m)?.0)
}

/// How measurement outcomes are chosen when running a pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchSelection {
    /// Every outcome of every measurement; results sorted by outcome tuple.
    Exhaustive,
    /// Born-rule sampling with a ChaCha8 generator.
    Seeded(u64),
    /// Fixed outcomes, one per measurement in pattern order.
    Outcomes(Vec<usize>),
}

/// A gate of the logical circuit a pattern implements, acting on wire indices.
#[derive(Debug, Clone, PartialEq)]
pub enum LogicalOp {
    Single { wire: usize, gate: CMatrix },
    ControlledZ { w1: usize, w2: usize, power: usize },
}

impl LogicalOp {
    fn apply(&self, s: &mut StateVector) -> Result<()> {
        match self {
            LogicalOp::Single { wire, gate } => s.apply_single(*wire, gate),
            LogicalOp::ControlledZ { w1, w2, power } => s.apply_cz(*w1, *w2, *power as i64),
        }
    }
}

#[derive(Debug, Clone)]
enum PlanStep {
    Cz { w1: usize, w2: usize, power: usize },
    Teleport { vertex: usize, wire: usize, phases: PhaseVector, fc: ModUnit },
}

/// Outcome-independent part of a pattern run.
#[derive(Debug)]
struct Plan {
    d: usize,
    layout: WireLayout,
    steps: Vec<PlanStep>,
    ops: Vec<LogicalOp>,
    input: StateVector,
    initial: StateVector,
}

impl Plan {
    fn new(input: Option<&StateVector>, g: &ClusterGraph, p: &MeasurementPattern) -> Result<Self> {
        let layout = infer_layout(g, p)?;
        let d = g.dim();
        let starts = layout.inputs();
        let wires = layout.num_wires();
        for v in 0..g.num_vertices() {
            if g.input(v).is_some() && !starts.contains(&v) {
                return Err(Error::PatternMismatch(format!(
                    "vertex {v} has a custom input state but is not an input of any wire"
                )));
            }
        }
        let plus = StateVector::plus(d, 0)?;
        let input = match input {
            Some(s) => {
                if s.dim() != d || s.num_qudits() != wires {
                    return Err(Error::ShapeMismatch {
                        expected: format!("{wires} input qudits of dimension {d}"),
                        found: format!("{} qudits of dimension {}", s.num_qudits(), s.dim()),
                    });
                }
                s.clone()
            }
            None => {
                let factors: Vec<StateVector> = starts
                    .iter()
                    .map(|&v| g.input(v).cloned().unwrap_or_else(|| plus.clone()))
                    .collect();
                StateVector::product(d, &factors)?
            }
        };

        // input on the wire starts, |+> elsewhere, then every edge
        let others: Vec<usize> = (0..g.num_vertices()).filter(|v| !starts.contains(v)).collect();
        let mut placed = input.clone();
        for _ in &others {
            placed = placed.tensor(&plus)?;
        }
        let slots: Vec<usize> = starts.iter().chain(&others).copied().collect();
        let mut order = vec![0; slots.len()];
        for (pos, &v) in slots.iter().enumerate() {
            order[v] = pos;
        }
        let mut initial = placed.permute_qudits(&order)?;
        for &(u, v) in g.edges() {
            initial.apply_cz(u, v, 1)?;
        }

        let measures: Vec<(usize, PhaseVector, ModUnit)> = p
            .steps()
            .iter()
            .filter_map(|s| match s {
                PatternStep::Measure { qudit, phases, fc } => {
                    Some((*qudit, phases.clone(), fc.unwrap_or_else(|| ModUnit::one(d))))
                }
                PatternStep::Interact { .. } => None,
            })
            .collect();
        let mut c = vec![ModUnit::one(d); wires];
        let mut steps = Vec::new();
        let mut ops = Vec::new();
        let mut pending = layout.interactions.iter().peekable();
        for tau in 0..=measures.len() {
            while let Some(e) = pending.next_if(|e| e.time == tau) {
                let (w1, w2) = (layout.wire_of[e.u], layout.wire_of[e.v]);
                let power = c[w1].mul(c[w2]).value();
                steps.push(PlanStep::Cz { w1, w2, power });
                ops.push(LogicalOp::ControlledZ { w1, w2, power });
            }
            if let Some((vertex, phases, fc)) = measures.get(tau) {
                let wire = layout.wire_of[*vertex];
                ops.push(LogicalOp::Single {
                    wire,
                    gate: fourier_c(*fc).matmul(&phase_gate(phases)),
                });
                c[wire] = c[wire].inverse().mul(*fc);
                steps.push(PlanStep::Teleport {
                    vertex: *vertex,
                    wire,
                    phases: phases.clone(),
                    fc: *fc,
                });
            }
        }
        Ok(Self {
            d,
            layout,
            steps,
            ops,
            input,
            initial,
        })
    }
}

/// One branch of a pattern execution.
#[derive(Debug, Clone)]
pub struct PatternResult {
    /// Output qudits, one per wire, in wire order.
    pub state: StateVector,
    /// Byproducts on the output wires.
    pub frame: ErrorFrame,
    pub records: Vec<MeasurementRecord>,
    pub outcomes: Vec<usize>,
    /// Probability of this outcome sequence.
    pub probability: f64,
    plan: Arc<Plan>,
}

impl PatternResult {
    pub fn layout(&self) -> &WireLayout {
        &self.plan.layout
    }

    /// Logical input state, one qudit per wire.
    pub fn input(&self) -> &StateVector {
        &self.plan.input
    }

    /// The logical circuit, in application order.
    pub fn logical_ops(&self) -> &[LogicalOp] {
        &self.plan.ops
    }

    /// Matrix of the logical circuit on the wires.
    pub fn intended_gate(&self) -> Result<CMatrix> {
        let d = self.plan.d;
        let n = self.plan.layout.num_wires();
        let mut u = CMatrix::identity(d.pow(n as u32));
        for op in &self.plan.ops {
            let g = match op {
                LogicalOp::Single { wire, gate } => embed(d, n, &[*wire], gate)?,
                LogicalOp::ControlledZ { w1, w2, power } => {
                    embed(d, n, &[*w1, *w2], &crate::math::controlled_z(d, *power as i64)?)?
                }
            };
            u = g.matmul(&u);
        }
        Ok(u)
    }

    /// Intended gate applied to the input.
    pub fn expected_output(&self) -> Result<StateVector> {
        let mut s = self.plan.input.clone();
        for op in &self.plan.ops {
            op.apply(&mut s)?;
        }
        Ok(s)
    }

    /// `realize(frame)^† |state>`.
    pub fn corrected_state(&self) -> Result<StateVector> {
        self.frame.apply_inverse(&self.state)
    }

    /// Compares the corrected state with the expected output up to phase.
    pub fn soundness(&self, tol: f64) -> Result<PhaseComparison> {
        let corrected = self.corrected_state()?;
        let expected = self.expected_output()?;
        states_equal_up_to_phase(corrected.amplitudes(), expected.amplitudes(), tol)
    }
}

/// Smallest soundness fidelity over a set of branches.
pub fn min_soundness_fidelity(results: &[PatternResult]) -> Result<f64> {
    results
        .iter()
        .map(|r| r.soundness(0.0).map(|c| c.fidelity))
        .try_fold(1.0f64, |acc, f| f.map(|f| acc.min(f)))
}

/// Smallest pairwise fidelity between corrected states, measured against the first branch.
pub fn branch_agreement_fidelity(results: &[PatternResult]) -> Result<f64> {
    let Some(first) = results.first() else {
        return Ok(1.0);
    };
    let reference = first.corrected_state()?;
    results.iter().try_fold(1.0f64, |acc, r| {
        let c = states_equal_up_to_phase(r.corrected_state()?.amplitudes(), reference.amplitudes(), 0.0)?;
        Ok(acc.min(c.fidelity))
    })
}

#[derive(Clone)]
struct Walker {
    state: StateVector,
    alive: Vec<usize>,
    frame: ErrorFrame,
    records: Vec<MeasurementRecord>,
    outcomes: Vec<usize>,
    probability: f64,
}

enum Chooser<'a> {
    All,
    Rng(&'a mut ChaCha8Rng),
    Fixed(&'a [usize]),
}

impl Walker {
    /// Advances through the plan from `step`. Returns the finished walkers.
    fn run(mut self, plan: &Arc<Plan>, mut step: usize, chooser: &mut Chooser) -> Result<Vec<Walker>> {
        while step < plan.steps.len() {
            match &plan.steps[step] {
                PlanStep::Cz { w1, w2, power } => {
                    let p = self.frame.commute_through_cz(*w1, *w2)?;
                    debug_assert_eq!(p, *power);
                }
                PlanStep::Teleport {
                    vertex,
                    wire,
                    phases,
                    fc,
                } => {
                    let idx = self
                        .alive
                        .iter()
                        .position(|v| v == vertex)
                        .expect("planned vertices are alive");
                    let adapted = self.frame.adapted_phase_vector(*wire, phases)?;
                    let basis = teleport_basis(&adapted);
                    let mut alive = self.alive.clone();
                    alive.remove(idx);
                    let advance = |branch: cluster::Branch, mut w: Walker| -> Result<Walker> {
                        w.frame.absorb_teleport(*wire, branch.record.outcome)?;
                        w.frame.absorb_adaptive_fc(*wire, *fc)?;
                        w.outcomes.push(branch.record.outcome);
                        w.probability *= branch.record.probability;
                        w.records.push(MeasurementRecord {
                            qudit: *vertex,
                            ..branch.record
                        });
                        w.state = branch.state;
                        w.alive = alive.clone();
                        Ok(w)
                    };
                    match chooser {
                        Chooser::All => {
                            let branches = cluster::measure_in_basis(&self.state, idx, &basis)?;
                            let nested: Vec<Vec<Walker>> = branches
                                .into_par_iter()
                                .map(|b| {
                                    let w = advance(b, self.clone())?;
                                    w.run(plan, step + 1, &mut Chooser::All)
                                })
                                .collect::<Result<_>>()?;
                            return Ok(nested.into_iter().flatten().collect());
                        }
                        Chooser::Rng(rng) => {
                            let b = cluster::measure_with_rng(&self.state, idx, &basis, rng)?;
                            self = advance(b, self.clone())?;
                        }
                        Chooser::Fixed(outcomes) => {
                            let m = outcomes[self.outcomes.len()];
                            let b = cluster::measure_outcome(&self.state, idx, &basis, m)?.ok_or_else(|| {
                                Error::InvalidArgument(format!(
                                    "outcome {m} at qudit {vertex} has zero probability"
                                ))
                            })?;
                            self = advance(b, self.clone())?;
                        }
                    }
                }
            }
            step += 1;
        }
        Ok(vec![self])
    }

    fn finish(self, plan: &Arc<Plan>) -> Result<PatternResult> {
        let order: Vec<usize> = plan
            .layout
            .outputs()
            .iter()
            .map(|o| self.alive.iter().position(|v| v == o).expect("outputs stay alive"))
            .collect();
        Ok(PatternResult {
            state: self.state.permute_qudits(&order)?,
            frame: self.frame,
            records: self.records,
            outcomes: self.outcomes,
            probability: self.probability,
            plan: Arc::clone(plan),
        })
    }
}

fn execute(plan: Plan, selection: &BranchSelection) -> Result<Vec<PatternResult>> {
    let plan = Arc::new(plan);
    let walker = Walker {
        state: plan.initial.clone(),
        alive: (0..plan.initial.num_qudits()).collect(),
        frame: ErrorFrame::new(plan.d, plan.layout.num_wires())?,
        records: Vec::new(),
        outcomes: Vec::new(),
        probability: 1.0,
    };
    let finished = match selection {
        BranchSelection::Exhaustive => walker.run(&plan, 0, &mut Chooser::All)?,
        BranchSelection::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            walker.run(&plan, 0, &mut Chooser::Rng(&mut rng))?
        }
        BranchSelection::Outcomes(outcomes) => {
            let expected = plan
                .steps
                .iter()
                .filter(|s| matches!(s, PlanStep::Teleport { .. }))
                .count();
            if outcomes.len() != expected {
                return Err(Error::InvalidArgument(format!(
                    "{} outcomes given for {expected} measurements",
                    outcomes.len()
                )));
            }
            if let Some(&m) = outcomes.iter().find(|&&m| m >= plan.d) {
                return Err(Error::OutcomeOutOfRange { outcome: m, d: plan.d });
            }
            walker.run(&plan, 0, &mut Chooser::Fixed(outcomes))?
        }
    };
    finished.into_iter().map(|w| w.finish(&plan)).collect()
}

/// Executes `p` on the cluster `g`. The logical input (one qudit per wire, wires
/// ordered by their first vertex) defaults to the graph's per-vertex inputs, else `|+>`.
/// Exhaustive selection returns every branch sorted by outcome tuple; the other
/// selections return exactly one result.
pub fn run_pattern(
    input: Option<&StateVector>,
    g: &ClusterGraph,
    p: &MeasurementPattern,
    selection: &BranchSelection,
) -> Result<Vec<PatternResult>> {
    execute(Plan::new(input, g, p)?, selection)
}

/// As [`run_pattern`], with a generator supplied by the caller for sampling.
pub fn run_pattern_with_rng(
    input: Option<&StateVector>,
    g: &ClusterGraph,
    p: &MeasurementPattern,
    rng: &mut impl Rng,
) -> Result<PatternResult> {
    let seed = rng.random::<u64>();
    Ok(execute(Plan::new(input, g, p)?, &BranchSelection::Seeded(seed))?
        .pop()
        .expect("sampling yields one branch"))
}

/// Runs a pattern on a `rows x cols` grid-shaped cluster whose rows must be the
/// logical wires. Edges may be any subset of the grid edges; column edges act as
/// two-qudit gates.
pub fn run_grid_pattern(
    input: Option<&StateVector>,
    g: &ClusterGraph,
    rows: usize,
    cols: usize,
    p: &MeasurementPattern,
    selection: &BranchSelection,
) -> Result<Vec<PatternResult>> {
    if g.num_vertices() != rows * cols {
        return Err(Error::UnsupportedTopology(format!(
            "{} vertices do not form a {rows}x{cols} grid",
            g.num_vertices()
        )));
    }
    for &(u, v) in g.edges() {
        let (ru, cu, rv, cv) = (u / cols, u % cols, v / cols, v % cols);
        if ru.abs_diff(rv) + cu.abs_diff(cv) != 1 {
            return Err(Error::UnsupportedTopology(format!("edge {u}-{v} is not a grid edge")));
        }
    }
    let plan = Plan::new(input, g, p)?;
    let rows_as_wires: Vec<Vec<usize>> = (0..rows).map(|r| (r * cols..(r + 1) * cols).collect()).collect();
    if plan.layout.wires != rows_as_wires {
        return Err(Error::UnsupportedTopology(format!(
            "pattern does not run along the grid rows: wires {:?}",
            plan.layout.wires
        )));
    }
    execute(plan, selection)
}
