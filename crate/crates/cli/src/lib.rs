//! Report generation behind the `qudit-cluster` command. Every command produces
//! line-delimited JSON records carrying at least `check`, `dim`, `residual` and `pass`.

use std::fmt;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use qudit_cluster::algorithms::{run_circuit_reference, run_cluster_version, HiddenShiftInstance};
use qudit_cluster::clifford::{
    commutator_exponent, conjugate_pauli, generator_matrix, verify_generation, Generator, PauliLabel,
};
use qudit_cluster::cluster::{build_cluster_state, stabilizer_residual, z_measure_removal_fidelity, ClusterGraph};
use qudit_cluster::identities::identity_residuals;
use qudit_cluster::math::{is_prime, random_phase_vector, random_state_vector, units, PhaseVector};
use qudit_cluster::mub::{build_mub_family, compile_gate, eigenphase_relation_residual, spanning_rank, GateTarget};
use qudit_cluster::teleport::{min_soundness_fidelity, run_pattern, BranchSelection, MeasurementPattern};
use qudit_cluster::{Error, StateVector};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Random graphs per vertex count in the stabilizer suite.
const GRAPHS_PER_SIZE: usize = 3;
/// Random targets per gate class in the MUB suite.
const TARGETS_PER_CLASS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    Mub,
    Clifford,
    Stabilizer,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Mode {
    #[default]
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateKind {
    Z,
    X,
    Zx,
    Native,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub mode: Mode,
}

impl RunConfig {
    pub fn new(dim: usize, seed: u64, tolerance: f64, mode: Mode) -> Result<Self, CliError> {
        if dim < 2 {
            return Err(CliError::Usage(format!("--dim must be at least 2, got {dim}")));
        }
        if !(tolerance > 0.0) {
            return Err(CliError::Usage(format!("--tolerance must be positive, got {tolerance}")));
        }
        Ok(Self {
            dim,
            seed,
            tolerance,
            mode,
        })
    }

    fn selection(&self) -> BranchSelection {
        match self.mode {
            Mode::Exhaustive => BranchSelection::Exhaustive,
            Mode::Sampled => BranchSelection::Seeded(self.seed),
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(std::io::Error),
    Core(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub dim: usize,
    pub residual: f64,
    pub pass: bool,
}

impl CheckRecord {
    fn new(check: impl Into<String>, dim: usize, residual: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            dim,
            residual,
            pass: residual <= tolerance,
        }
    }
}

/// A finished report: JSON records in output order.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub records: Vec<Value>,
}

impl Report {
    fn from_checks(mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.check.cmp(&b.check).then(a.dim.cmp(&b.dim)));
        Self {
            records: checks
                .iter()
                .map(|c| serde_json::to_value(c).expect("records serialise"))
                .collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r["pass"] == Value::Bool(true))
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_lines(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }

    /// Writes to `out`, or to stdout when `out` is `None`.
    pub fn write(&self, out: Option<&Path>) -> Result<(), CliError> {
        let text = self.to_lines();
        match out {
            Some(p) => std::fs::write(p, text)?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn identity_checks(cfg: &RunConfig) -> Result<Vec<CheckRecord>, CliError> {
    Ok(identity_residuals(cfg.dim, cfg.seed)?
        .into_iter()
        .map(|c| CheckRecord::new(format!("identity/{}", c.name), c.dim, c.residual, cfg.tolerance))
        .collect())
}

fn mub_checks(cfg: &RunConfig) -> Result<Vec<CheckRecord>, CliError> {
    let d = cfg.dim;
    let family = build_mub_family(d)?;
    let tol = cfg.tolerance;
    let mut out = vec![
        CheckRecord::new("mub/orthonormality", d, family.orthonormality_residual(), tol),
        CheckRecord::new("mub/unbiasedness", d, family.unbiasedness_residual(), tol),
        CheckRecord::new("mub/spanning-rank", d, spanning_rank(&family).abs_diff(d * d) as f64, 0.0),
    ];
    for k in 1..d {
        out.push(CheckRecord::new(
            format!("mub/eigenphase-relation/k={k}"),
            d,
            eigenphase_relation_residual(d, k)?,
            tol,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut classes: Vec<(String, Box<dyn Fn(PhaseVector) -> GateTarget>)> = vec![
        ("z".into(), Box::new(GateTarget::Z)),
        ("x".into(), Box::new(GateTarget::X)),
    ];
    for k in 1..d {
        classes.push((format!("zx{k}"), Box::new(move |a| GateTarget::Zx { k, a })));
    }
    for (name, make) in classes {
        let mut worst: f64 = 0.0;
        for _ in 0..TARGETS_PER_CLASS {
            let gp = compile_gate(&make(random_phase_vector(d, &mut rng)))?;
            let psi = StateVector::single(random_state_vector(d, &mut rng))?;
            let results = gp.run(&psi, &BranchSelection::Exhaustive)?;
            worst = worst.max(1.0 - min_soundness_fidelity(&results)?);
        }
        out.push(CheckRecord::new(format!("mub/compile-soundness/{name}"), d, worst, 1e-9));
    }
    Ok(out)
}

fn clifford_checks(cfg: &RunConfig) -> Result<Vec<CheckRecord>, CliError> {
    let d = cfg.dim;
    let report = verify_generation(d)?;
    let expected = d * (d * d - 1);
    let mut out = vec![
        CheckRecord::new("clifford/action-count", d, report.records.len().abs_diff(expected) as f64, 0.0),
        CheckRecord::new("clifford/generation-failures", d, report.failures().len() as f64, 0.0),
    ];
    let mut gens = vec![Generator::Z, Generator::X, Generator::F, Generator::P];
    gens.extend(units(d).into_iter().map(Generator::S));
    let labels: Vec<PauliLabel> = (0..d * d)
        .map(|t| PauliLabel::xz(d, (t / d) as i64, (t % d) as i64))
        .collect();
    for g in gens {
        let u = generator_matrix(g, d)?;
        let images = labels
            .iter()
            .map(|p| conjugate_pauli(&u, p))
            .collect::<Result<Vec<_>, _>>()?;
        let mut broken = 0usize;
        for (p, pi) in labels.iter().zip(&images) {
            for (q, qi) in labels.iter().zip(&images) {
                if commutator_exponent(pi, qi) != commutator_exponent(p, q) {
                    broken += 1;
                }
            }
        }
        out.push(CheckRecord::new(format!("clifford/commutators-preserved/{g}"), d, broken as f64, 0.0));
    }
    Ok(out)
}

fn stabilizer_checks(cfg: &RunConfig) -> Result<Vec<CheckRecord>, CliError> {
    let d = cfg.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for n in 2..=4 {
        for i in 0..GRAPHS_PER_SIZE {
            let g = ClusterGraph::random(d, n, 0.5, &mut rng)?;
            let state = build_cluster_state(&g)?;
            let tag = format!("n={n}/graph={i}");
            out.push(CheckRecord::new(
                format!("stabilizer/eigenvalue/{tag}"),
                d,
                stabilizer_residual(&g, &state)?,
                cfg.tolerance,
            ));
            let mut worst: f64 = 0.0;
            for q in 0..n {
                for j in 0..d {
                    worst = worst.max(1.0 - z_measure_removal_fidelity(&g, q, j)?);
                }
            }
            out.push(CheckRecord::new(format!("stabilizer/z-removal/{tag}"), d, worst, cfg.tolerance));
        }
    }
    Ok(out)
}

/// Runs an invariant suite.
pub fn cmd_verify(suite: Suite, cfg: &RunConfig) -> Result<Report, CliError> {
    let checks = match suite {
        Suite::Identities => identity_checks(cfg)?,
        Suite::Mub => mub_checks(cfg)?,
        Suite::Clifford => clifford_checks(cfg)?,
        Suite::Stabilizer => stabilizer_checks(cfg)?,
        Suite::All => {
            let mut all = identity_checks(cfg)?;
            all.extend(stabilizer_checks(cfg)?);
            if is_prime(cfg.dim) {
                all.extend(mub_checks(cfg)?);
                all.extend(clifford_checks(cfg)?);
            }
            all
        }
    };
    Ok(Report::from_checks(checks))
}

/// Executes a pattern file on a graph file; one record per branch.
pub fn cmd_run_pattern(graph_text: &str, pattern_text: &str, cfg: &RunConfig) -> Result<Report, CliError> {
    let g = ClusterGraph::parse(graph_text)?;
    if g.dim() != cfg.dim {
        return Err(CliError::Usage(format!(
            "graph file declares d={} but --dim is {}",
            g.dim(),
            cfg.dim
        )));
    }
    let p = MeasurementPattern::parse(pattern_text, g.dim())?;
    let results = run_pattern(None, &g, &p, &cfg.selection())?;
    let mut records = Vec::new();
    for r in &results {
        let cmp = r.soundness(cfg.tolerance)?;
        let frame: Vec<Value> = r
            .frame
            .entries()
            .iter()
            .map(|e| json!({"x": e.x, "z": e.z, "c": e.c.value()}))
            .collect();
        records.push(json!({
            "check": "pattern/branch",
            "dim": g.dim(),
            "outcomes": r.outcomes,
            "probability": r.probability,
            "frame": frame,
            "residual": 1.0 - cmp.fidelity,
            "pass": cmp.equal,
        }));
    }
    Ok(Report { records })
}

/// Recovers `(a, b)` with the reference circuit and on every selected cluster branch.
pub fn cmd_dj(a: usize, b: usize, cfg: &RunConfig) -> Result<Report, CliError> {
    let inst = HiddenShiftInstance::new(cfg.dim, a, b).map_err(|e| CliError::Usage(e.to_string()))?;
    let reference = run_circuit_reference(&inst)?;
    let branches = run_cluster_version(&inst, &cfg.selection())?;
    let wrong = branches.iter().filter(|br| br.recovered != reference).count();
    let reference_ok = reference == (a, b);
    Ok(Report {
        records: vec![
            json!({
                "check": "dj/reference",
                "dim": cfg.dim,
                "recovered": [reference.0, reference.1],
                "residual": if reference_ok { 0.0 } else { 1.0 },
                "pass": reference_ok,
            }),
            json!({
                "check": "dj/cluster",
                "dim": cfg.dim,
                "branches": branches.len(),
                "recovered": branches.first().map(|br| [br.recovered.0, br.recovered.1]),
                "agreement": wrong == 0,
                "residual": wrong as f64,
                "pass": wrong == 0 && reference_ok,
            }),
        ],
    })
}

/// Parses `0,0.5,1`-style phase lists.
pub fn parse_phases(csv: &str, d: usize) -> Result<PhaseVector, CliError> {
    let angles = csv
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("invalid angle `{v}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    if angles.len() != d {
        return Err(CliError::Usage(format!("expected {d} phases, found {}", angles.len())));
    }
    Ok(PhaseVector::new(angles)?)
}

/// Compiles a gate and checks the pattern exhaustively on a random input.
/// Returns the report and the pattern text.
pub fn cmd_compile_gate(
    kind: GateKind,
    k: usize,
    phases: Option<&str>,
    cfg: &RunConfig,
) -> Result<(Report, String), CliError> {
    let d = cfg.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let a = match phases {
        Some(csv) => parse_phases(csv, d)?,
        None => random_phase_vector(d, &mut rng),
    };
    let target = match kind {
        GateKind::Z => GateTarget::Z(a),
        GateKind::X => GateTarget::X(a),
        GateKind::Zx => GateTarget::Zx { k, a },
        GateKind::Native => GateTarget::Native(a),
    };
    let gp = compile_gate(&target)?;
    let psi = StateVector::single(random_state_vector(d, &mut rng))?;
    let results = gp.run(&psi, &cfg.selection())?;
    let residual = 1.0 - min_soundness_fidelity(&results)?;
    let text = gp.pattern.to_text();
    let record = json!({
        "check": format!("compile/{}", target.label()),
        "dim": d,
        "steps": gp.pattern.num_measurements(),
        "pattern": text,
        "residual": residual,
        "pass": residual <= 1e-9_f64.max(cfg.tolerance),
    });
    Ok((Report { records: vec![record] }, text))
}

/// One record per symplectic action with its generator word.
pub fn cmd_clifford_report(cfg: &RunConfig) -> Result<Report, CliError> {
    let d = cfg.dim;
    let report = verify_generation(d)?;
    let records = report
        .records
        .iter()
        .map(|r| {
            json!({
                "check": "clifford/action",
                "dim": d,
                "action": [r.action.i, r.action.j, r.action.k, r.action.l],
                "word": r.word_text(),
                "word_length": r.word.len(),
                "residual": if r.pass { 0.0 } else { 1.0 },
                "pass": r.pass,
            })
        })
        .collect();
    Ok(Report { records })
}
