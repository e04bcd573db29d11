//! Dense state vectors over `(C^d)^{⊗n}`.
//!
//! Qudit 0 is the leftmost tensor factor: the basis state `|k_0 k_1 ... k_{n-1}>`
//! sits at index `sum_i k_i d^{n-1-i}`.

use crate::error::{Error, Result};
use crate::math::gates::check_dim;
use crate::math::matrix::{omega, CMatrix, C64, ONE, ZERO};
use crate::math::{fourier_vector, states_equal_up_to_phase, PhaseComparison};

/// Tolerance on the norm invariant.
pub const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    d: usize,
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, normalising them.
    pub fn from_amplitudes(d: usize, n: usize, amps: Vec<C64>) -> Result<Self> {
        check_dim(d)?;
        let len = d.pow(n as u32);
        if amps.len() != len {
            return Err(Error::ShapeMismatch {
                expected: format!("{len} amplitudes for {n} qudits of dimension {d}"),
                found: format!("{} amplitudes", amps.len()),
            });
        }
        let mut s = Self { d, n, amps };
        s.normalize()?;
        Ok(s)
    }

    /// Single-qudit state from amplitudes.
    pub fn single(amps: Vec<C64>) -> Result<Self> {
        let d = amps.len();
        Self::from_amplitudes(d, 1, amps)
    }

    /// Computational basis state `|digits>`.
    pub fn basis(d: usize, digits: &[usize]) -> Result<Self> {
        check_dim(d)?;
        if let Some(&bad) = digits.iter().find(|&&k| k >= d) {
            return Err(Error::OutcomeOutOfRange { outcome: bad, d });
        }
        let idx = digits.iter().fold(0, |acc, &k| acc * d + k);
        let mut amps = vec![ZERO; d.pow(digits.len() as u32)];
        amps[idx] = ONE;
        Ok(Self {
            d,
            n: digits.len(),
            amps,
        })
    }

    /// Fourier basis state `|+_j>`.
    pub fn plus(d: usize, j: i64) -> Result<Self> {
        check_dim(d)?;
        Ok(Self {
            d,
            n: 1,
            amps: fourier_vector(d, j),
        })
    }

    /// The zero-qudit register (a single unit amplitude).
    pub fn empty(d: usize) -> Self {
        Self {
            d,
            n: 0,
            amps: vec![ONE],
        }
    }

    pub fn product(d: usize, factors: &[StateVector]) -> Result<Self> {
        factors
            .iter()
            .try_fold(Self::empty(d), |acc, f| acc.tensor(f))
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::ShapeMismatch {
                expected: format!("dimension {}", self.d),
                found: format!("dimension {}", other.d),
            });
        }
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(Self {
            d: self.d,
            n: self.n + other.n,
            amps,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn num_qudits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(C64::norm_sqr).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        for a in &mut self.amps {
            *a /= n;
        }
        Ok(())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn compare_up_to_phase(&self, other: &Self, tol: f64) -> Result<PhaseComparison> {
        if (self.d, self.n) != (other.d, other.n) {
            return Err(Error::ShapeMismatch {
                expected: format!("{} qudits of dimension {}", self.n, self.d),
                found: format!("{} qudits of dimension {}", other.n, other.d),
            });
        }
        states_equal_up_to_phase(&self.amps, &other.amps, tol)
    }

    pub(crate) fn check_qudit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::QuditOutOfRange { qudit: q, n: self.n });
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn stride(&self, q: usize) -> usize {
        self.d.pow((self.n - 1 - q) as u32)
    }

    /// Digit of qudit `q` in basis index `idx`.
    #[inline]
    pub fn digit(&self, idx: usize, q: usize) -> usize {
        (idx / self.stride(q)) % self.d
    }

    /// Applies a `d x d` gate to qudit `q` in place.
    pub fn apply_single(&mut self, q: usize, gate: &CMatrix) -> Result<()> {
        self.check_qudit(q)?;
        let d = self.d;
        if gate.rows() != d || gate.cols() != d {
            return Err(Error::ShapeMismatch {
                expected: format!("{d}x{d} gate"),
                found: format!("{}x{}", gate.rows(), gate.cols()),
            });
        }
        let stride = self.stride(q);
        let block = stride * d;
        let mut buf = vec![ZERO; d];
        for base in (0..self.amps.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (k, b) in buf.iter_mut().enumerate() {
                    *b = self.amps[start + k * stride];
                }
                for i in 0..d {
                    let mut acc = ZERO;
                    for (k, b) in buf.iter().enumerate() {
                        acc += gate[(i, k)] * b;
                    }
                    self.amps[start + i * stride] = acc;
                }
            }
        }
        Ok(())
    }

    /// Applies a `d^k x d^k` gate to the listed qudits (gate's own order) in place.
    pub fn apply_multi(&mut self, targets: &[usize], gate: &CMatrix) -> Result<()> {
        let k = targets.len();
        let sub = self.d.pow(k as u32);
        if gate.rows() != sub || gate.cols() != sub {
            return Err(Error::ShapeMismatch {
                expected: format!("{sub}x{sub} gate"),
                found: format!("{}x{}", gate.rows(), gate.cols()),
            });
        }
        for (i, &t) in targets.iter().enumerate() {
            self.check_qudit(t)?;
            if targets[..i].contains(&t) {
                return Err(Error::InvalidArgument(format!("repeated target qudit {t}")));
            }
        }
        let strides: Vec<usize> = targets.iter().map(|&t| self.stride(t)).collect();
        // offset of each sub-basis index within the full index
        let offsets: Vec<usize> = (0..sub)
            .map(|s| {
                let mut rem = s;
                let mut off = 0;
                for j in (0..k).rev() {
                    off += (rem % self.d) * strides[j];
                    rem /= self.d;
                }
                off
            })
            .collect();
        let mut buf = vec![ZERO; sub];
        for idx in 0..self.amps.len() {
            if targets.iter().any(|&t| self.digit(idx, t) != 0) {
                continue;
            }
            for (b, &off) in buf.iter_mut().zip(&offsets) {
                *b = self.amps[idx + off];
            }
            for (i, &off) in offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (j, b) in buf.iter().enumerate() {
                    acc += gate[(i, j)] * b;
                }
                self.amps[idx + off] = acc;
            }
        }
        Ok(())
    }

    /// Applies a full-register unitary.
    pub fn apply_full(&mut self, gate: &CMatrix) -> Result<()> {
        if gate.cols() != self.amps.len() || gate.rows() != self.amps.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{0}x{0} gate", self.amps.len()),
                found: format!("{}x{}", gate.rows(), gate.cols()),
            });
        }
        self.amps = gate.apply(&self.amps);
        Ok(())
    }

    /// Applies `C[Z^power]` between two distinct qudits (diagonal, in place).
    pub fn apply_cz(&mut self, q1: usize, q2: usize, power: i64) -> Result<()> {
        self.check_qudit(q1)?;
        self.check_qudit(q2)?;
        if q1 == q2 {
            return Err(Error::InvalidArgument(format!(
                "controlled-Z needs two distinct qudits, got {q1} twice"
            )));
        }
        let d = self.d;
        let (s1, s2) = (self.stride(q1), self.stride(q2));
        for (idx, a) in self.amps.iter_mut().enumerate() {
            let k = (idx / s1) % d;
            let l = (idx / s2) % d;
            if k != 0 && l != 0 {
                *a *= omega(d, power * (k * l) as i64);
            }
        }
        Ok(())
    }

    /// Reorders the register: qudit `i` of the result is qudit `order[i]` of `self`.
    pub fn permute_qudits(&self, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n];
        if order.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "permutation of length {} for {} qudits",
                order.len(),
                self.n
            )));
        }
        for &o in order {
            if o >= self.n || seen[o] {
                return Err(Error::InvalidArgument(format!("{order:?} is not a permutation")));
            }
            seen[o] = true;
        }
        let mut amps = vec![ZERO; self.amps.len()];
        for (idx, a) in self.amps.iter().enumerate() {
            let new_idx = order.iter().fold(0, |acc, &o| acc * self.d + self.digit(idx, o));
            amps[new_idx] = *a;
        }
        Ok(Self {
            d: self.d,
            n: self.n,
            amps,
        })
    }

    /// Computational-basis outcome distribution of qudit `q`.
    pub fn marginal(&self, q: usize) -> Result<Vec<f64>> {
        self.check_qudit(q)?;
        let mut p = vec![0.0; self.d];
        for (idx, a) in self.amps.iter().enumerate() {
            p[self.digit(idx, q)] += a.norm_sqr();
        }
        Ok(p)
    }
}
