//! Classical error-frame tracking.
//!
//! A frame records, per qudit, a byproduct operator `X^x Z^z S_c` (applied in that
//! order, left to right) and a register permutation. The physical state always
//! equals `realize_frame(frame) * (logical state)` up to a global phase.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math::matrix::CMatrix;
use crate::math::{
    controlled_z, embed, matrices_equal_up_to_phase, modp, pauli_x_power, pauli_z_power,
    perm_gate_sc, random_unitary, swap_gate, unit_inverse, ModUnit, PhaseVector, DEFAULT_TOLERANCE,
};
use crate::state::StateVector;

/// `a^(l)` with `a^(l)_k = a_{k-l}`, so that `Z(a) X^l = X^l Z(a^(l))`.
pub fn shift_phase_vector(a: &PhaseVector, l: i64) -> PhaseVector {
    let d = a.dim();
    a.reindexed(|k| modp(k as i64 - l, d))
}

/// `a'` with `a'_k = a_{ck}`, so that `Z(a) S_c = S_c Z(a')`.
pub fn scale_phase_vector(a: &PhaseVector, c: ModUnit) -> Result<PhaseVector> {
    a.ensure_dim(c.modulus())?;
    Ok(a.reindexed(|k| c.times(k as i64)))
}

/// `a^(x,k)` with `a^(x,k)_l = a_{k^{-1} l}`.
pub fn mub_index_phase_vector(a: &PhaseVector, k: i64) -> Result<PhaseVector> {
    let d = a.dim();
    let inv = unit_inverse(k, d)?;
    Ok(a.reindexed(|l| (inv * l) % d))
}

/// Byproduct `X^x Z^z S_c` on one qudit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameEntry {
    pub x: usize,
    pub z: usize,
    pub c: ModUnit,
}

impl FrameEntry {
    pub fn identity(d: usize) -> Self {
        Self {
            x: 0,
            z: 0,
            c: ModUnit::one(d),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0 && self.c.is_one()
    }

    /// The single-qudit matrix `X^x Z^z S_c`.
    pub fn matrix(&self) -> CMatrix {
        let d = self.c.modulus();
        let x = pauli_x_power(d, self.x as i64).expect("frame dimension is valid");
        let z = pauli_z_power(d, self.z as i64).expect("frame dimension is valid");
        x.matmul(&z).matmul(&perm_gate_sc(self.c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorFrame {
    d: usize,
    entries: Vec<FrameEntry>,
    /// Physical qudit `i` carries slot `register_perm[i]` of the unpermuted register.
    register_perm: Vec<usize>,
}

impl ErrorFrame {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        crate::math::gates::check_dim(d)?;
        Ok(Self {
            d,
            entries: vec![FrameEntry::identity(d); n],
            register_perm: (0..n).collect(),
        })
    }

    pub fn from_entries(d: usize, entries: Vec<FrameEntry>) -> Result<Self> {
        let mut f = Self::new(d, entries.len())?;
        for (q, e) in entries.into_iter().enumerate() {
            if e.c.modulus() != d {
                return Err(Error::NotAUnit {
                    value: e.c.value() as i64,
                    modulus: d,
                });
            }
            f.entries[q] = FrameEntry {
                x: e.x % d,
                z: e.z % d,
                c: e.c,
            };
        }
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn num_qudits(&self) -> usize {
        self.entries.len()
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().all(FrameEntry::is_identity)
            && self.register_perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn register_perm(&self) -> &[usize] {
        &self.register_perm
    }

    /// Slot of the unpermuted register held by physical qudit `q`.
    pub fn logical_qudit(&self, q: usize) -> Result<usize> {
        self.register_perm
            .get(q)
            .copied()
            .ok_or(Error::QuditOutOfRange {
                qudit: q,
                n: self.num_qudits(),
            })
    }

    /// Frame entry governing physical qudit `q`.
    pub fn entry(&self, q: usize) -> Result<FrameEntry> {
        Ok(self.entries[self.logical_qudit(q)?])
    }

    fn entry_mut(&mut self, q: usize) -> Result<&mut FrameEntry> {
        let slot = self.logical_qudit(q)?;
        Ok(&mut self.entries[slot])
    }

    pub fn entries(&self) -> &[FrameEntry] {
        &self.entries
    }

    pub fn set_entry(&mut self, q: usize, entry: FrameEntry) -> Result<()> {
        if entry.c.modulus() != self.d {
            return Err(Error::NotAUnit {
                value: entry.c.value() as i64,
                modulus: self.d,
            });
        }
        let d = self.d;
        *self.entry_mut(q)? = FrameEntry {
            x: entry.x % d,
            z: entry.z % d,
            c: entry.c,
        };
        Ok(())
    }

    /// Phase vector to measure with so that a teleport of qudit `q` implements
    /// `F Z(a)` on the logical state: `shift(scale(a, c^{-1}), -x)`.
    pub fn adapted_phase_vector(&self, q: usize, a: &PhaseVector) -> Result<PhaseVector> {
        a.ensure_dim(self.d)?;
        let e = self.entry(q)?;
        let scaled = scale_phase_vector(a, e.c.inverse())?;
        Ok(shift_phase_vector(&scaled, -(e.x as i64)))
    }

    /// Teleport with outcome `m` through the adapted measurement:
    /// `(x, z, c) -> (m + z, -x, c^{-1})`.
    pub fn absorb_teleport(&mut self, q: usize, m: usize) -> Result<()> {
        let d = self.d;
        if m >= d {
            return Err(Error::OutcomeOutOfRange { outcome: m, d });
        }
        let e = self.entry_mut(q)?;
        *e = FrameEntry {
            x: (m + e.z) % d,
            z: (d - e.x) % d,
            c: e.c.inverse(),
        };
        Ok(())
    }

    /// Adaptive computation `F = S_c F_c`: `c_new = c_old * c`.
    pub fn absorb_adaptive_fc(&mut self, q: usize, c: ModUnit) -> Result<()> {
        if c.modulus() != self.d {
            return Err(Error::NotAUnit {
                value: c.value() as i64,
                modulus: self.d,
            });
        }
        let e = self.entry_mut(q)?;
        e.c = e.c.mul(c);
        Ok(())
    }

    /// Pulls the frame of qudits `q1, q2` through a physical `CZ`. Returns the power
    /// `p` of the logical interaction `C[Z^p]` that was actually applied.
    pub fn commute_through_cz(&mut self, q1: usize, q2: usize) -> Result<usize> {
        if q1 == q2 {
            return Err(Error::InvalidArgument(format!(
                "controlled-Z needs two distinct qudits, got {q1} twice"
            )));
        }
        let d = self.d;
        let e1 = self.entry(q1)?;
        let e2 = self.entry(q2)?;
        self.entry_mut(q1)?.z = modp(e1.z as i64 - e2.x as i64, d);
        self.entry_mut(q2)?.z = modp(e2.z as i64 - e1.x as i64, d);
        Ok(e1.c.mul(e2.c).value())
    }

    /// Records a physical swap `V` of qudits `q1` and `q2` applied after the frame.
    pub fn absorb_swap(&mut self, q1: usize, q2: usize) -> Result<()> {
        self.logical_qudit(q1)?;
        self.logical_qudit(q2)?;
        self.register_perm.swap(q1, q2);
        Ok(())
    }

    /// Computational-basis outcome `k` on physical qudit `q` mapped back to the
    /// logical label: `c^{-1} (k + x)`.
    pub fn correct_label(&self, q: usize, k: usize) -> Result<usize> {
        if k >= self.d {
            return Err(Error::OutcomeOutOfRange {
                outcome: k,
                d: self.d,
            });
        }
        let e = self.entry(q)?;
        Ok(e.c.inverse().times((k + e.x) as i64))
    }

    /// Explicit operator `Perm * (⊗_q X^x Z^z S_c)` on the whole register.
    pub fn realize(&self) -> CMatrix {
        let n = self.num_qudits();
        let mut m = CMatrix::identity(self.d.pow(n as u32));
        for (q, e) in self.entries.iter().enumerate() {
            if !e.is_identity() {
                m = embed(self.d, n, &[q], &e.matrix())
                    .expect("frame qudits are in range")
                    .matmul(&m);
            }
        }
        if self.register_perm.iter().enumerate().any(|(i, &p)| i != p) {
            let dim = self.d.pow(n as u32);
            let d = self.d;
            let perm = &self.register_perm;
            // basis |k_0..k_{n-1}> of the unpermuted register goes to the index whose
            // digit i is k_{perm[i]}
            let p = crate::math::permutation_matrix(dim, |idx| {
                let digit = |slot: usize| (idx / d.pow((n - 1 - slot) as u32)) % d;
                perm.iter().fold(0, |acc, &slot| acc * d + digit(slot))
            });
            m = p.matmul(&m);
        }
        m
    }

    /// Applies `realize()^†` to a state without building the full matrix.
    pub fn apply_inverse(&self, state: &StateVector) -> Result<StateVector> {
        if state.num_qudits() != self.num_qudits() || state.dim() != self.d {
            return Err(Error::ShapeMismatch {
                expected: format!("{} qudits of dimension {}", self.num_qudits(), self.d),
                found: format!("{} qudits of dimension {}", state.num_qudits(), state.dim()),
            });
        }
        let mut inverse = vec![0; self.num_qudits()];
        for (i, &p) in self.register_perm.iter().enumerate() {
            inverse[p] = i;
        }
        let mut out = state.permute_qudits(&inverse)?;
        for (q, e) in self.entries.iter().enumerate() {
            if !e.is_identity() {
                out.apply_single(q, &e.matrix().adjoint())?;
            }
        }
        Ok(out)
    }
}

/// Functional form of [`ErrorFrame::absorb_teleport`].
pub fn absorb_teleport(frame: &ErrorFrame, q: usize, m: usize) -> Result<ErrorFrame> {
    let mut f = frame.clone();
    f.absorb_teleport(q, m)?;
    Ok(f)
}

/// Functional form of [`ErrorFrame::absorb_adaptive_fc`].
pub fn absorb_adaptive_fc(frame: &ErrorFrame, q: usize, c: ModUnit) -> Result<ErrorFrame> {
    let mut f = frame.clone();
    f.absorb_adaptive_fc(q, c)?;
    Ok(f)
}

/// Functional form of [`ErrorFrame::commute_through_cz`]; also returns the logical CZ power.
pub fn commute_frame_through_cz(frame: &ErrorFrame, q1: usize, q2: usize) -> Result<(ErrorFrame, usize)> {
    let mut f = frame.clone();
    let p = f.commute_through_cz(q1, q2)?;
    Ok((f, p))
}

pub fn realize_frame(frame: &ErrorFrame) -> CMatrix {
    frame.realize()
}

/// Maps measured computational labels back through the frame, qudit by qudit.
pub fn classical_readout_correct(frame: &ErrorFrame, outcomes: &[usize]) -> Result<Vec<usize>> {
    if outcomes.len() != frame.num_qudits() {
        return Err(Error::ShapeMismatch {
            expected: format!("{} outcomes", frame.num_qudits()),
            found: format!("{}", outcomes.len()),
        });
    }
    outcomes
        .iter()
        .enumerate()
        .map(|(q, &k)| frame.correct_label(q, k))
        .collect()
}

/// Checks `V(A ⊗ B) = (B ⊗ A)V`, `CZ_{12} V_{23} = V_{23} CZ_{13}` and `V^2 = I`
/// for random single-qudit `A`, `B`.
pub fn verify_swap_identities(d: usize) -> Result<bool> {
    Ok(swap_identity_residual(d, 0x5eed)? <= DEFAULT_TOLERANCE)
}

/// Largest residual of the swap identities for random `A`, `B` drawn from `seed`.
pub fn swap_identity_residual(d: usize, seed: u64) -> Result<f64> {
    if d > 5 {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "three-qudit swap checks are limited to d <= 5".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = swap_gate(d)?;
    let a = random_unitary(d, &mut rng);
    let b = random_unitary(d, &mut rng);
    let lhs = v.matmul(&a.kron(&b));
    let rhs = b.kron(&a).matmul(&v);
    let mut worst = lhs.max_diff(&rhs);

    let cz = controlled_z(d, 1)?;
    let cz12 = embed(d, 3, &[0, 1], &cz)?;
    let cz13 = embed(d, 3, &[0, 2], &cz)?;
    let v23 = embed(d, 3, &[1, 2], &v)?;
    worst = worst.max(cz12.matmul(&v23).max_diff(&v23.matmul(&cz13)));
    worst = worst.max(v.matmul(&v).max_diff(&CMatrix::identity(d * d)));
    // the frame's bookkeeping of a swap agrees with the explicit gate
    let mut frame = ErrorFrame::new(d, 2)?;
    frame.absorb_swap(0, 1)?;
    worst = worst.max(matrices_equal_up_to_phase(&frame.realize(), &v, DEFAULT_TOLERANCE)?.residual);
    Ok(worst)
}
