//! Brute-force reference implementations.
//!
//! Everything here reads the structure through [`BipartiteStructure::truth`]
//! and the designated sets only, and transcribes each definition with no
//! pruning beyond what the definition itself licenses. Nothing is shared with
//! the subject modules.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::structure::{BipartiteStructure, Elem, Param, PhiType};

/// Guards for the oracles. Exceeding one is an error, never a truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub vc_params: usize,
    pub isolating_domain: usize,
    pub theta: usize,
    pub max_k: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            vc_params: 10,
            isolating_domain: 14,
            theta: 10,
            max_k: 3,
        }
    }
}

fn over(what: &'static str, required: usize, limit: usize) -> Result<()> {
    if required > limit {
        return Err(Error::ResourceLimit {
            what,
            required: required as u128,
            limit: limit as u128,
        });
    }
    Ok(())
}

fn subset_of(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask & (1 << i) != 0).collect()
}

/// Largest `|C|` such that every sign pattern on `C` is realized by some row.
pub fn oracle_vc(s: &BipartiteStructure, limits: &OracleLimits) -> Result<usize> {
    let n = s.num_params();
    over("oracle_vc parameters", n, limits.vc_params)?;
    let mut best = 0;
    for mask in 0u32..(1u32 << n) {
        let set = subset_of(mask, n);
        let k = set.len();
        if k <= best {
            continue;
        }
        let shattered = (0u32..(1u32 << k)).all(|pattern| {
            (0..s.num_elements()).any(|a| {
                set.iter()
                    .enumerate()
                    .all(|(i, &b)| s.truth(Elem(a), Param(b)) == (pattern >> i & 1 == 1))
            })
        });
        if shattered {
            best = k;
        }
    }
    Ok(best)
}

fn satisfies(s: &BipartiteStructure, a: usize, lits: &[(Param, bool)]) -> bool {
    lits.iter().all(|&(b, v)| s.truth(Elem(a), b) == v)
}

/// Fewest literals of `p` whose realizers all realize `p`.
pub fn oracle_min_isolating(s: &BipartiteStructure, p: &PhiType, limits: &OracleLimits) -> Result<usize> {
    let lits: Vec<(Param, bool)> = p.iter().collect();
    for &(b, _) in &lits {
        if b.0 >= s.num_params() {
            return Err(Error::UnknownParameter(b.0));
        }
    }
    over("oracle_min_isolating domain", lits.len(), limits.isolating_domain)?;
    let mut best = lits.len();
    for mask in 0u32..(1u32 << lits.len()) {
        let sub: Vec<(Param, bool)> = subset_of(mask, lits.len()).iter().map(|&i| lits[i]).collect();
        if sub.len() >= best {
            continue;
        }
        let entails = (0..s.num_elements()).all(|a| !satisfies(s, a, &sub) || satisfies(s, a, &lits));
        if entails {
            best = sub.len();
        }
    }
    Ok(best)
}

/// The set of `(φ(x;c), φ(x;b_1), …, φ(x;b_n))` rows realized for `c` and
/// one tuple, i.e. which `(t, s)` entries of the Δ-table are true.
fn realized(s: &BipartiteStructure, c: Param, tuple: &[Param]) -> BTreeSet<(bool, Vec<bool>)> {
    (0..s.num_elements())
        .map(|a| {
            let x = Elem(a);
            (s.truth(x, c), tuple.iter().map(|&b| s.truth(x, b)).collect())
        })
        .collect()
}

fn same_delta_type(s: &BipartiteStructure, arity: usize, c0: Param, c1: Param, domain: &[Param]) -> bool {
    if arity == 0 {
        return realized(s, c0, &[]) == realized(s, c1, &[]);
    }
    if domain.is_empty() {
        return true;
    }
    let mut counter = vec![0usize; arity];
    loop {
        let tuple: Vec<Param> = counter.iter().map(|&i| domain[i]).collect();
        if realized(s, c0, &tuple) != realized(s, c1, &tuple) {
            return false;
        }
        let mut pos = arity;
        loop {
            if pos == 0 {
                return true;
            }
            pos -= 1;
            counter[pos] += 1;
            if counter[pos] < domain.len() {
                break;
            }
            counter[pos] = 0;
        }
    }
}

fn clauses_hold(s: &BipartiteStructure, p: &[(Param, bool)], arity: usize, pairs: &[(Param, Param)]) -> bool {
    let theta = s.theta_set();
    if !pairs.iter().all(|(c0, c1)| theta.contains(c0) && theta.contains(c1)) {
        return false;
    }
    let mut lits = p.to_vec();
    for &(c0, c1) in pairs {
        lits.push((c0, false));
        lits.push((c1, true));
    }
    if !(0..s.num_elements()).any(|a| satisfies(s, a, &lits)) {
        return false;
    }
    let k = pairs.len();
    (0u32..(1u32 << k)).all(|signs| {
        (0..k).all(|j| {
            let mut domain: Vec<Param> = s.base_set().to_vec();
            for (i, &(d0, d1)) in pairs.iter().enumerate() {
                if i != j {
                    domain.push(if signs >> i & 1 == 1 { d1 } else { d0 });
                }
            }
            same_delta_type(s, arity, pairs[j].0, pairs[j].1, &domain)
        })
    })
}

/// Every pair list of length at most `max_k` that is good for `p`, in
/// lexicographic order, with Δ arity `oracle_vc(s)`.
///
/// Goodness passes to prefixes, so a list is only extended once it is good.
pub fn oracle_all_good_configs(
    s: &BipartiteStructure,
    p: &PhiType,
    max_k: usize,
    limits: &OracleLimits,
) -> Result<Vec<Vec<(Param, Param)>>> {
    over("oracle_all_good_configs theta", s.theta_set().len(), limits.theta)?;
    over("oracle_all_good_configs max_k", max_k, limits.max_k)?;
    let p: Vec<(Param, bool)> = p.iter().collect();
    let base = s.base_set();
    if let Some(&(b, _)) = p.iter().find(|(b, _)| !base.contains(b)) {
        return Err(Error::Precondition(alloc::format!("{b} is not in B")));
    }
    let arity = oracle_vc(s, limits)?;
    let theta = s.theta_set();
    let candidates: Vec<(Param, Param)> =
        theta.iter().flat_map(|&c0| theta.iter().map(move |&c1| (c0, c1))).collect();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<(Param, Param)>> = vec![Vec::new()];
    // Depth-first in reverse so the pops come out in lexicographic order.
    while let Some(list) = stack.pop() {
        if !clauses_hold(s, &p, arity, &list) {
            continue;
        }
        if list.len() < max_k {
            for &pair in candidates.iter().rev() {
                let mut next = list.clone();
                next.push(pair);
                stack.push(next);
            }
        }
        out.push(list);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goodconfig::GoodConfiguration;
    use crate::lab::Lab;
    use crate::structure::tests::{s1, s2};

    const L: OracleLimits = OracleLimits {
        vc_params: 10,
        isolating_domain: 14,
        theta: 10,
        max_k: 3,
    };

    fn shattered(k: usize) -> BipartiteStructure {
        let all: Vec<usize> = (0..k).collect();
        BipartiteStructure::from_fn(1 << k, k, |a, b| a >> b & 1 == 1, &all, None).unwrap()
    }

    #[test]
    fn vc_examples() {
        assert_eq!(oracle_vc(&s1(), &L).unwrap(), 2);
        assert_eq!(oracle_vc(&s2(), &L).unwrap(), 1);
        assert_eq!(oracle_vc(&shattered(3), &L).unwrap(), 3);
        let wide = BipartiteStructure::from_fn(2, 11, |_, _| true, &[], None).unwrap();
        assert!(matches!(oracle_vc(&wide, &L), Err(Error::ResourceLimit { .. })));
    }

    #[test]
    fn min_isolating_examples() {
        let s = shattered(3);
        for a in 0..8 {
            let p = s.full_trace(Elem(a)).unwrap();
            assert_eq!(oracle_min_isolating(&s, &p, &L).unwrap(), 3);
        }
        assert_eq!(oracle_min_isolating(&s, &PhiType::new(), &L).unwrap(), 0);
        // Chain: a cut type {b0=0, b2=1} needs both literals.
        let c = s2();
        let p = c.trace(Elem(1), c.base_set()).unwrap();
        assert_eq!(oracle_min_isolating(&c, &p, &L).unwrap(), 2);
    }

    #[test]
    fn good_configs_start_empty_and_pass_subject_checker() {
        for s in [s1(), s2()] {
            let lab = Lab::new(&s);
            for a in s.elements() {
                let p = s.trace(a, s.base_set()).unwrap();
                let all = oracle_all_good_configs(&s, &p, 2, &L).unwrap();
                assert_eq!(all[0], Vec::new());
                assert!(all.windows(2).all(|w| w[0] < w[1]));
                for pairs in &all {
                    let config = GoodConfiguration { pairs: pairs.clone(), base_type: p.clone() };
                    assert!(lab.is_good_configuration(&config).unwrap());
                    assert!(pairs.len() <= oracle_vc(&s, &L).unwrap());
                }
            }
        }
    }

    #[test]
    fn guards_are_errors() {
        let s = s2();
        let p = PhiType::new();
        assert!(matches!(oracle_all_good_configs(&s, &p, 4, &L), Err(Error::ResourceLimit { .. })));
        let big = BipartiteStructure::from_fn(2, 11, |a, _| a == 0, &[], None).unwrap();
        assert!(matches!(oracle_all_good_configs(&big, &p, 1, &L), Err(Error::ResourceLimit { .. })));
    }
}
