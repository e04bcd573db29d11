//! Conjugation actions on the generalised Pauli group and words in the
//! generators `Z, X, F, S_c, P` realising every symplectic action in prime `d`.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::math::matrix::{CMatrix, C64};
use crate::math::{clifford_p, fourier_gate, is_prime, modp, pauli_word, perm_gate_sc, unit_inverse, ModUnit};

const MATCH_TOLERANCE: f64 = 1e-10;

/// `omega^a X^b Z^c`. The phase exponent is carried along but ignored by
/// projective comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliLabel {
    pub d: usize,
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl PauliLabel {
    pub fn new(d: usize, a: i64, b: i64, c: i64) -> Self {
        Self {
            d,
            a: modp(a, d),
            b: modp(b, d),
            c: modp(c, d),
        }
    }

    /// `X^b Z^c` with trivial phase.
    pub fn xz(d: usize, b: i64, c: i64) -> Self {
        Self::new(d, 0, b, c)
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        pauli_word(self.d, self.a as i64, self.b as i64, self.c as i64)
    }

    /// Equality of the `(b, c)` exponents.
    pub fn same_up_to_phase(&self, other: &Self) -> bool {
        self.d == other.d && self.b == other.b && self.c == other.c
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w^{} X^{} Z^{}", self.a, self.b, self.c)
    }
}

/// `X -> X^i Z^j`, `Z -> X^k Z^l` with `il - jk = 1 (mod d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymplecticAction {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl SymplecticAction {
    pub fn determinant(&self, d: usize) -> usize {
        modp(self.i as i64 * self.l as i64 - self.j as i64 * self.k as i64, d)
    }

    pub fn image_of_x(&self, d: usize) -> PauliLabel {
        PauliLabel::xz(d, self.i as i64, self.j as i64)
    }

    pub fn image_of_z(&self, d: usize) -> PauliLabel {
        PauliLabel::xz(d, self.k as i64, self.l as i64)
    }
}

/// `alpha(p, q)` defined by `pq = omega^alpha qp`; for `p = X^{b1} Z^{c1}`,
/// `q = X^{b2} Z^{c2}` this is `b1 c2 - b2 c1`, so `alpha(X, Z) = 1`.
pub fn commutator_exponent(p: &PauliLabel, q: &PauliLabel) -> usize {
    modp(p.b as i64 * q.c as i64 - q.b as i64 * p.c as i64, p.d)
}

/// Identifies `u p u^†` as a Pauli operator. The `(b, c)` exponents are found by
/// testing every candidate up to global phase; the phase exponent is the nearest
/// power of `omega` (for `d = 2` the phase may be `±i`, which has no exact label).
pub fn conjugate_pauli(u: &CMatrix, p: &PauliLabel) -> Result<PauliLabel> {
    let d = p.d;
    if u.rows() != d || u.cols() != d {
        return Err(Error::ShapeMismatch {
            expected: format!("{d}x{d} matrix"),
            found: format!("{}x{}", u.rows(), u.cols()),
        });
    }
    u.ensure_unitary(1e-8)?;
    let image = u.matmul(&p.matrix()?).matmul(&u.adjoint());
    for b in 0..d {
        for c in 0..d {
            let candidate = PauliLabel::xz(d, b as i64, c as i64).matrix()?;
            let overlap: C64 = candidate.adjoint().matmul(&image).trace() / d as f64;
            if (overlap.norm() - 1.0).abs() > MATCH_TOLERANCE {
                continue;
            }
            if image.max_diff(&candidate.scale(overlap)) > MATCH_TOLERANCE {
                continue;
            }
            let turns = overlap.arg() / std::f64::consts::TAU * d as f64;
            return Ok(PauliLabel::new(d, turns.round() as i64, b as i64, c as i64));
        }
    }
    Err(Error::NotClifford(format!("conjugate of {p} is not a Pauli operator")))
}

/// Symplectic action of a Clifford unitary, read off from the images of `X` and `Z`.
pub fn action_of(u: &CMatrix) -> Result<SymplecticAction> {
    let d = u.rows();
    let x = conjugate_pauli(u, &PauliLabel::xz(d, 1, 0))?;
    let z = conjugate_pauli(u, &PauliLabel::xz(d, 0, 1))?;
    Ok(SymplecticAction {
        i: x.b,
        j: x.c,
        k: z.b,
        l: z.c,
    })
}

/// The generators `Z, X, F, S_c, P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Z,
    X,
    F,
    S(usize),
    P,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Z => write!(f, "Z"),
            Generator::X => write!(f, "X"),
            Generator::F => write!(f, "F"),
            Generator::S(c) => write!(f, "S{c}"),
            Generator::P => write!(f, "P"),
        }
    }
}

/// Phase gate used as the generator `P`. For odd `d` this is
/// `|j> -> omega^{j(j+1)/2} |j>`. For `d = 2` that formula gives `Z`, which acts
/// trivially on Pauli labels, so the qubit phase gate `diag(1, i)` is used instead.
pub fn generator_p(d: usize) -> Result<CMatrix> {
    if d == 2 {
        return Ok(CMatrix::from_diagonal(&[C64::new(1.0, 0.0), C64::new(0.0, 1.0)]));
    }
    clifford_p(d)
}

pub fn generator_matrix(g: Generator, d: usize) -> Result<CMatrix> {
    match g {
        Generator::Z => pauli_word(d, 0, 0, 1),
        Generator::X => pauli_word(d, 0, 1, 0),
        Generator::F => fourier_gate(d),
        Generator::S(c) => Ok(perm_gate_sc(ModUnit::new(c as i64, d)?)),
        Generator::P => generator_p(d),
    }
}

/// Matrix of a word; the leftmost generator is applied last.
pub fn word_matrix(word: &[Generator], d: usize) -> Result<CMatrix> {
    let mut m = CMatrix::identity(d);
    for &g in word {
        m = m.matmul(&generator_matrix(g, d)?);
    }
    Ok(m)
}

fn ensure_prime(d: usize) -> Result<()> {
    if !is_prime(d) {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "Clifford words are constructed for prime dimensions".into(),
        });
    }
    Ok(())
}

/// `C(i, m, n) = S_i P^m Q^n` with `Q = F P F^† = F P F^3`, as a generator word.
pub fn c_imn_word(i: usize, m: usize, n: usize, d: usize) -> Result<Vec<Generator>> {
    ensure_prime(d)?;
    let i = ModUnit::new(i as i64, d)?;
    let mut word = Vec::new();
    if !i.is_one() {
        word.push(Generator::S(i.value()));
    }
    word.extend(std::iter::repeat_n(Generator::P, m % d));
    for _ in 0..n % d {
        word.extend([Generator::F, Generator::P, Generator::F, Generator::F, Generator::F]);
    }
    Ok(word)
}

/// Matrix of `C(i, m, n)`.
pub fn build_c_imn(i: usize, m: usize, n: usize, d: usize) -> Result<CMatrix> {
    word_matrix(&c_imn_word(i, m, n, d)?, d)
}

/// All actions with `il - jk = 1`, sorted by `(i, j, k, l)`.
pub fn enumerate_actions(d: usize) -> Vec<SymplecticAction> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let a = SymplecticAction { i, j, k, l };
                    if a.determinant(d) == 1 {
                        out.push(a);
                    }
                }
            }
        }
    }
    out
}

/// A generator word realising `action`. For `i != 0` this is `C(i, -ij, i^{-1}k)`.
/// For `i = 0` (so `jk = -1`) it first realises `X -> X^{-j}`, `Z -> X^{-l} Z^k`
/// with `C(-j, 0, j^{-1} l)` and then conjugates by `F`.
pub fn realizing_word(action: &SymplecticAction, d: usize) -> Result<Vec<Generator>> {
    ensure_prime(d)?;
    if action.determinant(d) != 1 {
        return Err(Error::InvalidArgument(format!("{action:?} has determinant {}", action.determinant(d))));
    }
    let (i, j, k, l) = (action.i as i64, action.j as i64, action.k as i64, action.l as i64);
    if i != 0 {
        let inv = unit_inverse(i, d)? as i64;
        c_imn_word(action.i, modp(-i * j, d), modp(inv * k, d), d)
    } else {
        let inv = unit_inverse(j, d)? as i64;
        let mut word = vec![Generator::F];
        word.extend(c_imn_word(modp(-j, d), 0, modp(inv * l, d), d)?);
        Ok(word)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionRecord {
    pub action: SymplecticAction,
    pub word: Vec<Generator>,
    pub image_x: PauliLabel,
    pub image_z: PauliLabel,
    pub pass: bool,
}

impl ActionRecord {
    pub fn word_text(&self) -> String {
        if self.word.is_empty() {
            return "I".into();
        }
        self.word.iter().map(Generator::to_string).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationReport {
    pub d: usize,
    pub records: Vec<ActionRecord>,
}

impl GenerationReport {
    pub fn failures(&self) -> Vec<&ActionRecord> {
        self.records.iter().filter(|r| !r.pass).collect()
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
}

/// Builds and checks a word for every action with determinant 1.
pub fn verify_generation(d: usize) -> Result<GenerationReport> {
    ensure_prime(d)?;
    if d > 7 {
        return Err(Error::UnsupportedDimension {
            d,
            reason: "enumeration is limited to d <= 7".into(),
        });
    }
    let records = enumerate_actions(d)
        .into_par_iter()
        .map(|action| {
            let word = realizing_word(&action, d)?;
            let u = word_matrix(&word, d)?;
            let image_x = conjugate_pauli(&u, &PauliLabel::xz(d, 1, 0))?;
            let image_z = conjugate_pauli(&u, &PauliLabel::xz(d, 0, 1))?;
            let pass = image_x.same_up_to_phase(&action.image_of_x(d))
                && image_z.same_up_to_phase(&action.image_of_z(d));
            Ok(ActionRecord {
                action,
                word,
                image_x,
                image_z,
                pass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GenerationReport { d, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{random_unitary, units};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn all_labels(d: usize) -> Vec<PauliLabel> {
        (0..d * d).map(|t| PauliLabel::xz(d, (t / d) as i64, (t % d) as i64)).collect()
    }

    #[test]
    fn commutator_matches_matrices() {
        for d in [2, 3, 5] {
            for p in all_labels(d) {
                for q in all_labels(d) {
                    let (mp, mq) = (p.matrix().unwrap(), q.matrix().unwrap());
                    let lhs = mp.matmul(&mq);
                    let rhs = mq.matmul(&mp).scale(crate::math::omega(d, commutator_exponent(&p, &q) as i64));
                    assert!(lhs.max_diff(&rhs) < 1e-12, "{p} {q}");
                }
            }
        }
        let x = PauliLabel::xz(3, 1, 0);
        let z = PauliLabel::xz(3, 0, 1);
        assert_eq!(commutator_exponent(&x, &z), 1);
        assert_eq!(commutator_exponent(&x, &x), 0);
        // X^2 Z and X Z^3 in d = 5: 2*3 - 1*1 = 5 = 0, so they commute
        assert_eq!(commutator_exponent(&PauliLabel::xz(5, 2, 1), &PauliLabel::xz(5, 1, 3)), 0);
    }

    #[test]
    fn fourier_and_scaling_actions() {
        for d in [3, 5, 7] {
            let f = fourier_gate(d).unwrap();
            let x = conjugate_pauli(&f, &PauliLabel::xz(d, 1, 0)).unwrap();
            let z = conjugate_pauli(&f, &PauliLabel::xz(d, 0, 1)).unwrap();
            assert!(x.same_up_to_phase(&PauliLabel::xz(d, 0, -1)));
            assert!(z.same_up_to_phase(&PauliLabel::xz(d, 1, 0)));
            for c in units(d) {
                let c = ModUnit::new(c as i64, d).unwrap();
                let s = perm_gate_sc(c);
                let x = conjugate_pauli(&s, &PauliLabel::xz(d, 1, 0)).unwrap();
                let z = conjugate_pauli(&s, &PauliLabel::xz(d, 0, 1)).unwrap();
                assert_eq!(x, PauliLabel::xz(d, c.value() as i64, 0));
                assert_eq!(z, PauliLabel::xz(d, 0, c.inverse().value() as i64));
            }
            let p = PauliLabel::new(d, 2, 1, 1);
            assert_eq!(conjugate_pauli(&CMatrix::identity(d), &p).unwrap(), p);
        }
    }

    #[test]
    fn generators_are_clifford_and_preserve_commutators() {
        for d in [2, 3, 5] {
            let mut gens = vec![Generator::Z, Generator::X, Generator::F, Generator::P];
            gens.extend(units(d).into_iter().map(Generator::S));
            for g in gens {
                let u = generator_matrix(g, d).unwrap();
                let labels = all_labels(d);
                let images: Vec<PauliLabel> = labels.iter().map(|p| conjugate_pauli(&u, p).unwrap()).collect();
                for (p, pi) in labels.iter().zip(&images) {
                    for (q, qi) in labels.iter().zip(&images) {
                        assert_eq!(commutator_exponent(pi, qi), commutator_exponent(p, q));
                    }
                }
            }
        }
        // the integer-exponent qubit P is Z, which is Clifford but acts trivially
        let p2 = clifford_p(2).unwrap();
        let x = PauliLabel::xz(2, 1, 0);
        assert!(conjugate_pauli(&p2, &x).unwrap().same_up_to_phase(&x));
    }

    #[test]
    fn random_unitary_is_not_clifford() {
        let u = random_unitary(3, &mut ChaCha8Rng::seed_from_u64(4));
        assert!(matches!(
            conjugate_pauli(&u, &PauliLabel::xz(3, 1, 0)),
            Err(Error::NotClifford(_))
        ));
    }

    #[test]
    fn c_imn_conjugation_formula() {
        for d in [3, 5] {
            assert!(build_c_imn(1, 0, 0, d).unwrap().max_diff(&CMatrix::identity(d)) < 1e-12);
            for i in units(d) {
                let inv = unit_inverse(i as i64, d).unwrap() as i64;
                for m in 0..d {
                    for n in 0..d {
                        let a = action_of(&build_c_imn(i, m, n, d).unwrap()).unwrap();
                        let (i, m, n) = (i as i64, m as i64, n as i64);
                        let expected = SymplecticAction {
                            i: modp(i, d),
                            j: modp(-inv * m, d),
                            k: modp(i * n, d),
                            l: modp(inv * (1 - m * n), d),
                        };
                        assert_eq!(a, expected);
                    }
                }
            }
        }
        assert!(build_c_imn(0, 0, 0, 3).is_err());
        assert!(build_c_imn(1, 0, 0, 4).is_err());
    }

    #[test]
    fn generation_counts_and_passes() {
        for (d, count) in [(2, 6), (3, 24), (5, 120)] {
            let report = verify_generation(d).unwrap();
            assert_eq!(report.records.len(), count);
            assert!(report.failures().is_empty(), "{:?}", report.failures());
            assert!(report.records.iter().all(|r| r.action.determinant(d) == 1));
            assert!(report.records.windows(2).all(|w| w[0].action < w[1].action));
        }
        assert!(verify_generation(4).is_err());
    }

    #[test]
    fn identity_action_uses_empty_word() {
        let id = SymplecticAction { i: 1, j: 0, k: 0, l: 1 };
        assert!(realizing_word(&id, 5).unwrap().is_empty());
        let bad = SymplecticAction { i: 1, j: 0, k: 0, l: 2 };
        assert!(realizing_word(&bad, 5).is_err());
    }
}
