use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::math::{ModUnit, PhaseVector};

/// One instruction of a measurement pattern.
#[derive(Debug, Clone, PartialEq)]
pub enum PatternStep {
    /// Teleport the logical state out of `qudit`, implementing `F_c Z(phases)` where
    /// `c` is `fc` (default 1). The measured basis is adapted to the live frame.
    Measure {
        qudit: usize,
        phases: PhaseVector,
        fc: Option<ModUnit>,
    },
    /// Treat the cluster edge `q1 - q2` as a two-qudit gate at this point.
    Interact { q1: usize, q2: usize },
}

/// Ordered list of measurements (and optional interaction markers) on a cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementPattern {
    d: usize,
    steps: Vec<PatternStep>,
}

impl MeasurementPattern {
    pub fn new(d: usize, steps: Vec<PatternStep>) -> Result<Self> {
        crate::math::gates::check_dim(d)?;
        let mut measured = Vec::new();
        for step in &steps {
            match step {
                PatternStep::Measure { qudit, phases, fc } => {
                    phases.ensure_dim(d)?;
                    if let Some(c) = fc {
                        if c.modulus() != d {
                            return Err(Error::NotAUnit {
                                value: c.value() as i64,
                                modulus: d,
                            });
                        }
                    }
                    if measured.contains(qudit) {
                        return Err(Error::PatternMismatch(format!("qudit {qudit} is measured twice")));
                    }
                    measured.push(*qudit);
                }
                PatternStep::Interact { q1, q2 } => {
                    if q1 == q2 {
                        return Err(Error::PatternMismatch(format!("interaction of qudit {q1} with itself")));
                    }
                }
            }
        }
        Ok(Self { d, steps })
    }

    pub fn empty(d: usize) -> Result<Self> {
        Self::new(d, Vec::new())
    }

    /// Appends `measure q a=phases`.
    pub fn measure(mut self, qudit: usize, phases: PhaseVector) -> Result<Self> {
        self.steps.push(PatternStep::Measure {
            qudit,
            phases,
            fc: None,
        });
        Self::new(self.d, self.steps)
    }

    /// Appends `measure q a=phases fc=c`.
    pub fn measure_fc(mut self, qudit: usize, phases: PhaseVector, c: ModUnit) -> Result<Self> {
        self.steps.push(PatternStep::Measure {
            qudit,
            phases,
            fc: Some(c),
        });
        Self::new(self.d, self.steps)
    }

    pub fn interact(mut self, q1: usize, q2: usize) -> Result<Self> {
        self.steps.push(PatternStep::Interact { q1, q2 });
        Self::new(self.d, self.steps)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn steps(&self) -> &[PatternStep] {
        &self.steps
    }

    /// Measured qudits in pattern order.
    pub fn measured_qudits(&self) -> Vec<usize> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                PatternStep::Measure { qudit, .. } => Some(*qudit),
                PatternStep::Interact { .. } => None,
            })
            .collect()
    }

    pub fn num_measurements(&self) -> usize {
        self.measured_qudits().len()
    }

    /// Parses the text format, one step per line:
    ///
    /// ```text
    /// # comments and blank lines are ignored
    /// measure 0 a=0,0,2.0943951023931953
    /// measure 1 a=0,0,0 fc=-1
    /// interact 1 4
    /// ```
    pub fn parse(text: &str, d: usize) -> Result<Self> {
        crate::math::gates::check_dim(d)?;
        let mut steps = Vec::new();
        let mut measured: Vec<usize> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_qudit = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| err(format!("invalid qudit `{s}`")))
            };
            match fields[0] {
                "measure" => {
                    if fields.len() < 3 || fields.len() > 4 {
                        return Err(err("expected `measure <qudit> a=<phases> [fc=<unit>]`".into()));
                    }
                    let qudit = parse_qudit(fields[1])?;
                    if measured.contains(&qudit) {
                        return Err(err(format!("qudit {qudit} is measured twice")));
                    }
                    let mut phases = None;
                    let mut fc = None;
                    for field in &fields[2..] {
                        match field.split_once('=') {
                            Some(("a", csv)) if phases.is_none() => {
                                let angles = csv
                                    .split(',')
                                    .map(|v| {
                                        v.trim()
                                            .parse::<f64>()
                                            .map_err(|_| err(format!("invalid angle `{v}`")))
                                    })
                                    .collect::<Result<Vec<f64>>>()?;
                                if angles.len() != d {
                                    return Err(err(format!(
                                        "expected {d} phases, found {}",
                                        angles.len()
                                    )));
                                }
                                phases = Some(PhaseVector::new(angles).map_err(|e| err(e.to_string()))?);
                            }
                            Some(("fc", v)) if fc.is_none() => {
                                let c: i64 = v.parse().map_err(|_| err(format!("invalid unit `{v}`")))?;
                                fc = Some(ModUnit::new(c, d).map_err(|e| err(e.to_string()))?);
                            }
                            _ => return Err(err(format!("unexpected field `{field}`"))),
                        }
                    }
                    let phases = phases.ok_or_else(|| err("missing `a=<phases>`".into()))?;
                    measured.push(qudit);
                    steps.push(PatternStep::Measure { qudit, phases, fc });
                }
                "interact" => {
                    if fields.len() != 3 {
                        return Err(err("expected `interact <q1> <q2>`".into()));
                    }
                    let (q1, q2) = (parse_qudit(fields[1])?, parse_qudit(fields[2])?);
                    if q1 == q2 {
                        return Err(err(format!("interaction of qudit {q1} with itself")));
                    }
                    steps.push(PatternStep::Interact { q1, q2 });
                }
                other => return Err(err(format!("unknown instruction `{other}`"))),
            }
        }
        Self::new(d, steps)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for step in &self.steps {
            match step {
                PatternStep::Measure { qudit, phases, fc } => {
                    let csv: Vec<String> = phases.angles().iter().map(|a| format!("{a:?}")).collect();
                    let _ = write!(s, "measure {qudit} a={}", csv.join(","));
                    if let Some(c) = fc {
                        let _ = write!(s, " fc={}", c.value());
                    }
                    s.push('\n');
                }
                PatternStep::Interact { q1, q2 } => {
                    let _ = writeln!(s, "interact {q1} {q2}");
                }
            }
        }
        s
    }
}
