//! Arithmetic over the ring of integers modulo `d`.

use std::fmt;

use crate::error::{Error, Result};

/// Reduces a signed integer into `[0, d)`.
#[inline]
pub fn modp(x: i64, d: usize) -> usize {
    x.rem_euclid(d as i64) as usize
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b)`.
fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

/// Multiplicative inverse of `c` modulo `d`.
///
/// ```
/// use qudit_cluster::math::unit_inverse;
/// assert_eq!(unit_inverse(2, 5).unwrap(), 3);
/// assert!(unit_inverse(2, 4).is_err());
/// ```
pub fn unit_inverse(c: i64, d: usize) -> Result<usize> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let reduced = modp(c, d) as i64;
    let (g, s, _) = extended_gcd(reduced, d as i64);
    if g != 1 {
        return Err(Error::NotAUnit {
            value: c,
            modulus: d,
        });
    }
    Ok(modp(s, d))
}

pub fn is_prime(d: usize) -> bool {
    if d < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= d {
        if d % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// All units of `Z_d` in increasing order.
pub fn units(d: usize) -> Vec<usize> {
    (1..d.max(2))
        .filter(|&c| extended_gcd(c as i64, d as i64).0 == 1)
        .collect()
}

/// An invertible element of `Z_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModUnit {
    value: usize,
    modulus: usize,
}

impl ModUnit {
    pub fn new(value: i64, modulus: usize) -> Result<Self> {
        // Validates and reduces in one go.
        unit_inverse(value, modulus)?;
        Ok(Self {
            value: modp(value, modulus),
            modulus,
        })
    }

    pub fn one(modulus: usize) -> Self {
        Self { value: 1, modulus }
    }

    /// `-1 mod d`; equal to `1` for `d = 2`.
    pub fn minus_one(modulus: usize) -> Self {
        Self {
            value: modulus - 1,
            modulus,
        }
    }

    pub fn value(self) -> usize {
        self.value
    }

    pub fn modulus(self) -> usize {
        self.modulus
    }

    pub fn is_one(self) -> bool {
        self.value == 1
    }

    pub fn inverse(self) -> Self {
        let inv = unit_inverse(self.value as i64, self.modulus).expect("units are invertible");
        Self {
            value: inv,
            modulus: self.modulus,
        }
    }

    pub fn mul(self, other: Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        Self {
            value: (self.value * other.value) % self.modulus,
            modulus: self.modulus,
        }
    }

    /// `value * k mod d` for an arbitrary integer `k`.
    pub fn times(self, k: i64) -> usize {
        modp(self.value as i64 * modp(k, self.modulus) as i64, self.modulus)
    }
}

impl fmt::Display for ModUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        assert_eq!(unit_inverse(2, 5).unwrap(), 3);
        for d in 2..12 {
            assert_eq!(unit_inverse(1, d).unwrap(), 1 % d);
        }
        assert_eq!(
            unit_inverse(2, 4),
            Err(Error::NotAUnit {
                value: 2,
                modulus: 4
            })
        );
        assert_eq!(unit_inverse(-1, 7).unwrap(), 6);
    }

    #[test]
    fn inverse_matches_brute_force() {
        for d in 2..20usize {
            for c in 0..d {
                let brute = (0..d).find(|&x| (x * c) % d == 1 % d && d > 1);
                match unit_inverse(c as i64, d) {
                    Ok(inv) => assert_eq!(Some(inv), brute, "c={c} d={d}"),
                    Err(_) => assert!(brute.is_none() || c == 0, "c={c} d={d}"),
                }
            }
        }
    }

    #[test]
    fn units_of_small_rings() {
        assert_eq!(units(2), vec![1]);
        assert_eq!(units(4), vec![1, 3]);
        assert_eq!(units(5), vec![1, 2, 3, 4]);
        assert_eq!(units(6), vec![1, 5]);
    }

    #[test]
    fn mod_unit_rejects_non_units() {
        assert!(ModUnit::new(2, 4).is_err());
        assert!(ModUnit::new(0, 3).is_err());
        assert_eq!(ModUnit::new(-1, 5).unwrap().value(), 4);
        assert_eq!(ModUnit::minus_one(2).value(), 1);
        let c = ModUnit::new(2, 5).unwrap();
        assert_eq!(c.mul(ModUnit::new(3, 5).unwrap()), ModUnit::one(5));
        assert_eq!(c.inverse().value(), 3);
    }

    #[test]
    fn primality() {
        let primes: Vec<usize> = (0..30).filter(|&d| is_prime(d)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
