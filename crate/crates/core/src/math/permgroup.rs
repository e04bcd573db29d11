//! Permutations of the computational labels `Z_d` and their generated groups.

use std::collections::{HashSet, VecDeque};

use super::modular::ModUnit;
use crate::error::{Error, Result};

/// A permutation of `{0, ..., d-1}` stored as its image table: `k -> table[k]`.
pub type LabelPermutation = Vec<usize>;

/// Action of `X` on labels: `X|k> = |k-1>`.
pub fn x_label_permutation(d: usize) -> LabelPermutation {
    (0..d).map(|k| (k + d - 1) % d).collect()
}

/// Action of `S_c` on labels: `S_c|k> = |ck>`.
pub fn sc_label_permutation(c: ModUnit) -> LabelPermutation {
    (0..c.modulus()).map(|k| c.times(k as i64)).collect()
}

/// `(p ∘ q)(k) = p(q(k))`.
pub fn compose(p: &[usize], q: &[usize]) -> LabelPermutation {
    q.iter().map(|&k| p[k]).collect()
}

/// Order of the group generated by `generators`, found by breadth-first closure.
pub fn generated_group_order(d: usize, generators: &[LabelPermutation]) -> Result<usize> {
    for g in generators {
        let mut seen = vec![false; d];
        if g.len() != d || g.iter().any(|&k| k >= d || std::mem::replace(&mut seen[k], true)) {
            return Err(Error::InvalidArgument(format!(
                "{g:?} is not a permutation of {d} labels"
            )));
        }
    }
    let identity: LabelPermutation = (0..d).collect();
    let mut group = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in generators {
            let next = compose(g, &p);
            if group.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(group.len())
}

/// Order of `<X, S_c : c a unit of Z_d>`.
pub fn affine_group_order(d: usize) -> Result<usize> {
    let mut generators = vec![x_label_permutation(d)];
    for c in super::modular::units(d) {
        generators.push(sc_label_permutation(ModUnit::new(c as i64, d)?));
    }
    generated_group_order(d, &generators)
}
