//! The formula family
//! `Δ(y; z₀…z_{n−1}) = { ∃x (φ(x;y)^t ∧ ⋀ φ(x;z_i)^{s(i)}) : t < 2, s ∈ 2^n }`
//! and Δ-types of single parameters over `D^n`.
//!
//! A Δ-type table is laid out tuple-major: tuples of `D^n` in lexicographic
//! order (slot 0 most significant), then `t`, then the sign vector `s` read as
//! the integer `Σ s(i)·2^i`.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BitSet;
use crate::error::{guard, Error, Result};
use crate::limits::Limits;
use crate::structure::{BipartiteStructure, Param};

/// Number of `z` slots of the Δ family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaFamily {
    pub arity: usize,
}

/// How much of a Δ-type must be realized inside `B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Satisfiability {
    /// Every subset of at most `k` table entries is matched by some `b ∈ B`.
    AtMost(usize),
    /// A single `b ∈ B` matches the whole table.
    All,
}

impl Default for Satisfiability {
    fn default() -> Self {
        Satisfiability::All
    }
}

/// `tp_Δ(subject / domain^n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaType {
    pub subject: Param,
    pub domain: Vec<Param>,
    pub arity: usize,
    table: BitSet,
}

/// One cell of a Δ-type table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaEntry {
    pub tuple: Vec<Param>,
    pub t: bool,
    pub signs: Vec<bool>,
}

impl DeltaType {
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.len() == 0
    }

    pub fn get(&self, entry: usize) -> bool {
        self.table.contains(entry)
    }

    /// Truth values in table order.
    pub fn values(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.table.len()).map(|i| self.table.contains(i))
    }

    /// Table equality, ignoring the subject.
    pub fn same_table(&self, other: &DeltaType) -> bool {
        self.arity == other.arity && self.domain == other.domain && self.table == other.table
    }

    /// Decodes a table index.
    pub fn entry(&self, index: usize) -> DeltaEntry {
        decode_entry(&self.domain, self.arity, index)
    }
}

fn decode_entry(domain: &[Param], arity: usize, index: usize) -> DeltaEntry {
    let patterns = 1usize << arity;
    let s_code = index % patterns;
    let t = (index / patterns) % 2 == 1;
    let mut tuple_idx = index / patterns / 2;
    let mut tuple = vec![Param(0); arity];
    for slot in (0..arity).rev() {
        tuple[slot] = domain[tuple_idx % domain.len()];
        tuple_idx /= domain.len();
    }
    DeltaEntry {
        tuple,
        t,
        signs: (0..arity).map(|i| s_code >> i & 1 == 1).collect(),
    }
}

impl DeltaFamily {
    pub fn new(arity: usize) -> Self {
        DeltaFamily { arity }
    }

    fn patterns(&self) -> usize {
        1 << self.arity
    }

    /// Table size `|D|^n · 2^(n+1)`, or `None` on overflow.
    pub fn table_size(&self, domain_len: usize) -> Option<u128> {
        let tuples = (domain_len as u128).checked_pow(self.arity as u32)?;
        tuples.checked_mul(2u128.checked_pow(self.arity as u32 + 1)?)
    }

    fn check_size(&self, domain_len: usize, limits: &Limits) -> Result<usize> {
        let size = self.table_size(domain_len).unwrap_or(u128::MAX);
        guard("delta table entries", size, limits.delta_entries)?;
        Ok(size as usize)
    }

    /// `∃x (φ(x;c)^t ∧ ⋀ φ(x;b_i)^{s(i)})`, by one scan of the matrix.
    pub fn eval(
        &self,
        s: &BipartiteStructure,
        c: Param,
        tuple: &[Param],
        t: bool,
        signs: &[bool],
    ) -> Result<bool> {
        if tuple.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: tuple.len(),
            });
        }
        if signs.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: signs.len(),
            });
        }
        s.check_param(c)?;
        for &b in tuple {
            s.check_param(b)?;
        }
        Ok(s.elements().any(|a| {
            s.truth(a, c) == t && tuple.iter().zip(signs).all(|(&b, &sign)| s.truth(a, b) == sign)
        }))
    }

    /// Fills the Δ-type table of `c` over `domain^n`.
    pub fn delta_type(
        &self,
        s: &BipartiteStructure,
        c: Param,
        domain: &[Param],
        limits: &Limits,
    ) -> Result<DeltaType> {
        s.check_param(c)?;
        let domain = normalize(s, domain)?;
        let size = self.check_size(domain.len(), limits)?;
        let mut table = BitSet::empty(size);
        let mut scratch = BitSet::empty(2 * self.patterns());
        let mut index = 0;
        for tuple in Tuples::new(domain.len(), self.arity) {
            self.realized_patterns(s, c, &domain, &tuple, &mut scratch);
            for p in scratch.iter() {
                table.insert(index + p);
            }
            index += 2 * self.patterns();
        }
        Ok(DeltaType {
            subject: c,
            domain,
            arity: self.arity,
            table,
        })
    }

    /// Patterns `(t, s)` realized for `(c, tuple)`, as `t·2^n + s_code`.
    fn realized_patterns(
        &self,
        s: &BipartiteStructure,
        c: Param,
        domain: &[Param],
        tuple: &[usize],
        out: &mut BitSet,
    ) {
        *out = BitSet::empty(2 * self.patterns());
        for a in s.elements() {
            let row = s.row(a);
            let mut code = 0;
            for (i, &slot) in tuple.iter().enumerate() {
                if row.contains(domain[slot].0) {
                    code |= 1 << i;
                }
            }
            if row.contains(c.0) {
                code += self.patterns();
            }
            out.insert(code);
        }
    }

    /// Compares the Δ-types of `c0` and `c1` over `domain^n`, stopping at the
    /// first disagreeing entry.
    pub fn compare(
        &self,
        s: &BipartiteStructure,
        c0: Param,
        c1: Param,
        domain: &[Param],
        limits: &Limits,
    ) -> Result<Option<DeltaEntry>> {
        s.check_param(c0)?;
        s.check_param(c1)?;
        let domain = normalize(s, domain)?;
        self.check_size(domain.len(), limits)?;
        if c0 == c1 || s.column(c0) == s.column(c1) {
            return Ok(None);
        }
        let mut left = BitSet::empty(2 * self.patterns());
        let mut right = left.clone();
        for (tuple_idx, tuple) in Tuples::new(domain.len(), self.arity).enumerate() {
            self.realized_patterns(s, c0, &domain, &tuple, &mut left);
            self.realized_patterns(s, c1, &domain, &tuple, &mut right);
            if left != right {
                let mut diff = left.clone();
                let mut other = right.clone();
                diff.difference_with(&right);
                other.difference_with(&left);
                diff.union_with(&other);
                let p = diff.first().expect("sets differ");
                let index = tuple_idx * 2 * self.patterns() + p;
                return Ok(Some(decode_entry(&domain, self.arity, index)));
            }
        }
        Ok(None)
    }

    /// Whether `c0` and `c1` have the same Δ-type over `domain^n`.
    pub fn equal(
        &self,
        s: &BipartiteStructure,
        c0: Param,
        c1: Param,
        domain: &[Param],
        limits: &Limits,
    ) -> Result<bool> {
        Ok(self.compare(s, c0, c1, domain, limits)?.is_none())
    }

    /// Whether `dt` is realized in `base` to the degree `k`.
    ///
    /// For `AtMost(k)` the question is whether some set of at most `k` entries
    /// meets the disagreement set of every `b ∈ base`; such a set is exactly a
    /// part of `dt` that no `b` matches.
    pub fn finitely_satisfiable_in(
        &self,
        s: &BipartiteStructure,
        dt: &DeltaType,
        base: &[Param],
        k: Satisfiability,
        limits: &Limits,
    ) -> Result<bool> {
        if dt.arity != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: dt.arity,
            });
        }
        let mut disagreements = Vec::with_capacity(base.len());
        for &b in base {
            let other = self.delta_type(s, b, &dt.domain, limits)?;
            let mut diff = other.table.clone();
            let mut rev = dt.table.clone();
            diff.difference_with(&dt.table);
            rev.difference_with(&other.table);
            diff.union_with(&rev);
            if diff.is_empty() {
                return Ok(true);
            }
            disagreements.push(diff);
        }
        if disagreements.is_empty() {
            return Ok(false);
        }
        match k {
            Satisfiability::All => Ok(false),
            Satisfiability::AtMost(k) => {
                let mut hit = vec![false; disagreements.len()];
                Ok(!hitting_set_within(&disagreements, &mut hit, k))
            }
        }
    }
}

/// Is there a set of at most `budget` entries meeting every set not yet
/// marked in `hit`?
fn hitting_set_within(sets: &[BitSet], hit: &mut [bool], budget: usize) -> bool {
    let pending = (0..sets.len())
        .filter(|&i| !hit[i])
        .min_by_key(|&i| sets[i].count());
    let Some(pick) = pending else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    for e in sets[pick].iter() {
        let newly: Vec<usize> = (0..sets.len())
            .filter(|&i| !hit[i] && sets[i].contains(e))
            .collect();
        for &i in &newly {
            hit[i] = true;
        }
        let found = hitting_set_within(sets, hit, budget - 1);
        for &i in &newly {
            hit[i] = false;
        }
        if found {
            return true;
        }
    }
    false
}

/// Sorted, deduplicated and validated copy of a parameter set.
pub(crate) fn normalize(s: &BipartiteStructure, domain: &[Param]) -> Result<Vec<Param>> {
    for &b in domain {
        s.check_param(b)?;
    }
    let mut d = domain.to_vec();
    d.sort_unstable();
    d.dedup();
    Ok(d)
}

/// Odometer over `{0..base}^len` in lexicographic order.
struct Tuples {
    base: usize,
    current: Option<Vec<usize>>,
}

impl Tuples {
    fn new(base: usize, len: usize) -> Self {
        let current = if len > 0 && base == 0 {
            None
        } else {
            Some(vec![0; len])
        };
        Tuples { base, current }
    }
}

impl Iterator for Tuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().unwrap();
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < self.base {
                break;
            }
            cur[i] = 0;
        }
        Some(out)
    }
}
