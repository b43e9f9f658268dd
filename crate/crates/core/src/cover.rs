//! Lexicographically least minimum set cover.
//!
//! Isolating subtypes, γ certificates and disjunct selection all reduce to the
//! same question: which fewest candidates (a literal excludes the elements
//! that falsify it) together cover a set of elements that must be ruled out.

use alloc::vec::Vec;

use crate::bits::BitSet;

/// Smallest set of candidate indices whose union contains `universe`, ties
/// broken by the lexicographic order of the ascending index lists. Searches
/// sizes `0..=max_size`; `None` if no cover of that size exists.
pub fn min_cover(universe: &BitSet, candidates: &[BitSet], max_size: usize) -> Option<Vec<usize>> {
    if universe.is_empty() {
        return Some(Vec::new());
    }
    // Restrict to the universe and keep the first of each distinct trace; a
    // later duplicate can always be swapped for the earlier one.
    let mut reps: Vec<(usize, BitSet)> = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        let mut r = c.clone();
        r.intersect_with(universe);
        if !r.is_empty() && !reps.iter().any(|(_, seen)| *seen == r) {
            reps.push((i, r));
        }
    }
    let mut suffix = Vec::with_capacity(reps.len() + 1);
    let mut acc = BitSet::empty(universe.len());
    suffix.push(acc.clone());
    for (_, r) in reps.iter().rev() {
        acc.union_with(r);
        suffix.push(acc.clone());
    }
    suffix.reverse();
    if !universe.is_subset(&suffix[0]) {
        return None;
    }
    let mut chosen = Vec::new();
    for size in 1..=max_size.min(reps.len()) {
        if search(&reps, &suffix, universe.clone(), 0, size, &mut chosen) {
            return Some(chosen.iter().map(|&k| reps[k].0).collect());
        }
    }
    None
}

fn search(
    reps: &[(usize, BitSet)],
    suffix: &[BitSet],
    uncovered: BitSet,
    start: usize,
    slots: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if uncovered.is_empty() {
        return true;
    }
    if slots == 0 || !uncovered.is_subset(&suffix[start]) {
        return false;
    }
    for k in start..reps.len() {
        if !uncovered.is_subset(&suffix[k]) {
            return false;
        }
        if !reps[k].1.intersects(&uncovered) {
            continue;
        }
        let mut rest = uncovered.clone();
        rest.difference_with(&reps[k].1);
        chosen.push(k);
        if search(reps, suffix, rest, k + 1, slots - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn set(len: usize, idx: &[usize]) -> BitSet {
        BitSet::from_indices(len, idx.iter().copied())
    }

    #[test]
    fn picks_lexicographically_least_minimum() {
        let u = set(4, &[0, 1, 2, 3]);
        let c = [set(4, &[0, 1]), set(4, &[2]), set(4, &[2, 3]), set(4, &[0, 1, 2, 3])];
        assert_eq!(min_cover(&u, &c, 4), Some(vec![3]));
        let c2 = [set(4, &[0, 1]), set(4, &[1, 2]), set(4, &[2, 3]), set(4, &[3, 0])];
        assert_eq!(min_cover(&u, &c2, 4), Some(vec![0, 2]));
        assert_eq!(min_cover(&u, &c2, 1), None);
        assert_eq!(min_cover(&set(4, &[]), &c2, 0), Some(vec![]));
    }

    #[test]
    fn duplicates_resolve_to_first() {
        let u = set(3, &[0, 1, 2]);
        let c = [set(3, &[0]), set(3, &[1, 2]), set(3, &[1, 2])];
        assert_eq!(min_cover(&u, &c, 3), Some(vec![0, 1]));
    }

    proptest! {
        #[test]
        fn agrees_with_enumeration(sets in proptest::collection::vec(0u8..64, 0..8), want in 0u8..64) {
            let len = 6;
            let to_set = |m: u8| BitSet::from_indices(len, (0..len).filter(|i| m >> i & 1 == 1));
            let cands: Vec<BitSet> = sets.iter().map(|&m| to_set(m)).collect();
            let u = to_set(want);
            let mut best: Option<Vec<usize>> = None;
            for mask in 0u32..(1 << cands.len()) {
                let idx: Vec<usize> = (0..cands.len()).filter(|i| mask >> i & 1 == 1).collect();
                let covered = idx.iter().fold(0u8, |acc, &i| acc | sets[i]);
                if covered & want == want {
                    let better = match &best {
                        None => true,
                        Some(b) => idx.len() < b.len() || (idx.len() == b.len() && idx < *b),
                    };
                    if better { best = Some(idx); }
                }
            }
            prop_assert_eq!(min_cover(&u, &cands, cands.len()), best);
        }
    }
}
