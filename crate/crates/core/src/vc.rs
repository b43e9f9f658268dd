//! φ-independence (shattering) and the independence dimension.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::bits::BitSet;
use crate::error::Result;
use crate::structure::{BipartiteStructure, Param};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceReport {
    /// Largest size of a φ-independent set, searched up to the cap.
    pub id_value: usize,
    /// Lexicographically least independent set of size `id_value`.
    pub witness: Vec<Param>,
    /// Some set one larger than the cap is also independent.
    pub capped: bool,
}

/// Whether every sign pattern over `set` is realized.
pub fn is_phi_independent(s: &BipartiteStructure, set: &[Param]) -> Result<bool> {
    for &b in set {
        s.check_param(b)?;
    }
    let mut cols: Vec<Param> = set.to_vec();
    cols.sort_unstable();
    cols.dedup();
    Ok(shatters(s, &cols))
}

fn shatters(s: &BipartiteStructure, cols: &[Param]) -> bool {
    let k = cols.len();
    if k == 0 {
        return true;
    }
    // 2^k distinct rows are needed.
    if k >= usize::BITS as usize - 1 || (1usize << k) > s.num_elements() {
        return false;
    }
    let mut seen = BitSet::empty(1 << k);
    let mut distinct = 0;
    for a in s.elements() {
        let row = s.row(a);
        let key = cols
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, b)| acc | (usize::from(row.contains(b.0)) << i));
        if !seen.contains(key) {
            seen.insert(key);
            distinct += 1;
            if distinct == 1 << k {
                return true;
            }
        }
    }
    false
}

/// Layered search for the largest independent set of size at most `cap`.
///
/// Level `k + 1` is generated from level `k` by appending a larger index, and a
/// candidate is only tested when all of its `k`-subsets are independent.
pub fn independence_dimension(s: &BipartiteStructure, cap: usize) -> IndependenceReport {
    let singles: Vec<usize> = s
        .params()
        .filter(|&b| shatters(s, &[b]))
        .map(|b| b.0)
        .collect();

    let mut level: Vec<Vec<usize>> = alloc::vec![Vec::new()];
    let mut size = 0;
    loop {
        let next_size = size + 1;
        let searching_cap = next_size > cap;
        let members: BTreeSet<&[usize]> = level.iter().map(|v| v.as_slice()).collect();
        let mut next = Vec::new();
        'outer: for set in &level {
            let last = set.last().copied();
            for &j in singles.iter().filter(|&&j| last.is_none_or(|l| j > l)) {
                let mut candidate = set.clone();
                candidate.push(j);
                if next_size > 1 && !all_faces_present(&candidate, &members) {
                    continue;
                }
                let params: Vec<Param> = candidate.iter().map(|&b| Param(b)).collect();
                if shatters(s, &params) {
                    next.push(candidate);
                    if searching_cap {
                        break 'outer;
                    }
                }
            }
        }
        if searching_cap {
            let witness = level.first().cloned().unwrap_or_default();
            return IndependenceReport {
                id_value: size,
                witness: witness.into_iter().map(Param).collect(),
                capped: !next.is_empty(),
            };
        }
        if next.is_empty() {
            let witness = level.swap_remove(0);
            return IndependenceReport {
                id_value: size,
                witness: witness.into_iter().map(Param).collect(),
                capped: false,
            };
        }
        drop(members);
        level = next;
        size = next_size;
    }
}

fn all_faces_present(candidate: &[usize], members: &BTreeSet<&[usize]>) -> bool {
    let mut face = Vec::with_capacity(candidate.len() - 1);
    (0..candidate.len()).all(|skip| {
        face.clear();
        face.extend(
            candidate
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &b)| b),
        );
        members.contains(face.as_slice())
    })
}

/// `ID(φ)` over the whole parameter set.
pub fn id(s: &BipartiteStructure) -> usize {
    independence_dimension(s, s.num_params()).id_value
}
