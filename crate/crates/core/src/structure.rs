//! Finite interpretations of a partitioned formula and the φ-types over them.
//!
//! Entailment and consistency are relative to the structure: a type is
//! consistent when some element realizes it, and `p0 ⊢ p` means every
//! realizer of `p0` realizes `p`.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitSet;
use crate::error::{Error, Result};

/// Index of an element (a value of the object variable `x`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub usize);

/// Index of a parameter (a value of the parameter variable `y`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Param(pub usize);

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b{}", self.0)
    }
}

/// Truth matrix of `φ(x; y)` over `X × Y`, with the designated parameter sets
/// `B ⊆ Θ ⊆ Y`.
#[derive(Clone, PartialEq, Eq)]
pub struct BipartiteStructure {
    rows: Vec<BitSet>,
    cols: Vec<BitSet>,
    base: Vec<Param>,
    theta: Vec<Param>,
    base_mask: BitSet,
    theta_mask: BitSet,
    theta_all: bool,
}

impl BipartiteStructure {
    /// Builds a structure from row-major truth values.
    ///
    /// `theta = None` means every parameter. Index lists may be unsorted and
    /// may repeat; they are stored sorted.
    pub fn new(
        truth: Vec<Vec<bool>>,
        num_params: usize,
        base: &[usize],
        theta: Option<&[usize]>,
    ) -> Result<Self> {
        if truth.is_empty() {
            return Err(Error::InvalidStructure("x_elements must be nonempty".into()));
        }
        let m = truth.len();
        let mut rows = Vec::with_capacity(m);
        let mut cols = alloc::vec![BitSet::empty(m); num_params];
        for (a, row) in truth.iter().enumerate() {
            if row.len() != num_params {
                return Err(Error::InvalidStructure(format!(
                    "row a{a} has {} entries, expected {num_params}",
                    row.len()
                )));
            }
            let mut bits = BitSet::empty(num_params);
            for (b, &v) in row.iter().enumerate() {
                if v {
                    bits.insert(b);
                    cols[b].insert(a);
                }
            }
            rows.push(bits);
        }
        let mut s = BipartiteStructure {
            rows,
            cols,
            base: Vec::new(),
            theta: Vec::new(),
            base_mask: BitSet::empty(num_params),
            theta_mask: BitSet::empty(num_params),
            theta_all: false,
        };
        s.set_designated(base, theta)?;
        Ok(s)
    }

    /// Builds a structure from a truth function.
    pub fn from_fn(
        num_elements: usize,
        num_params: usize,
        mut truth: impl FnMut(usize, usize) -> bool,
        base: &[usize],
        theta: Option<&[usize]>,
    ) -> Result<Self> {
        let matrix = (0..num_elements)
            .map(|a| (0..num_params).map(|b| truth(a, b)).collect())
            .collect();
        Self::new(matrix, num_params, base, theta)
    }

    /// Replaces `B` and `Θ`.
    pub fn with_designated(mut self, base: &[usize], theta: Option<&[usize]>) -> Result<Self> {
        self.set_designated(base, theta)?;
        Ok(self)
    }

    fn set_designated(&mut self, base: &[usize], theta: Option<&[usize]>) -> Result<()> {
        let n = self.num_params();
        let base_mask = self.index_mask(base)?;
        let (theta_mask, theta_all) = match theta {
            None => (BitSet::full(n), true),
            Some(t) => (self.index_mask(t)?, false),
        };
        if !base_mask.is_subset(&theta_mask) {
            let stray = base_mask.iter().find(|&b| !theta_mask.contains(b)).unwrap_or(0);
            return Err(Error::InvalidStructure(format!(
                "base parameter b{stray} is not in theta_set"
            )));
        }
        self.base = base_mask.iter().map(Param).collect();
        self.theta = theta_mask.iter().map(Param).collect();
        self.base_mask = base_mask;
        self.theta_mask = theta_mask;
        self.theta_all = theta_all;
        Ok(())
    }

    fn index_mask(&self, indices: &[usize]) -> Result<BitSet> {
        let n = self.num_params();
        let mut mask = BitSet::empty(n);
        for &b in indices {
            if b >= n {
                return Err(Error::UnknownParameter(b));
            }
            mask.insert(b);
        }
        Ok(mask)
    }

    pub fn num_elements(&self) -> usize {
        self.rows.len()
    }

    pub fn num_params(&self) -> usize {
        self.cols.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.num_elements()).map(Elem)
    }

    pub fn params(&self) -> impl Iterator<Item = Param> {
        (0..self.num_params()).map(Param)
    }

    /// Truth value of `φ(a; b)`. Panics on out-of-range indices.
    pub fn truth(&self, a: Elem, b: Param) -> bool {
        self.rows[a.0].contains(b.0)
    }

    /// Elements satisfying `φ(x; b)`.
    pub fn column(&self, b: Param) -> &BitSet {
        &self.cols[b.0]
    }

    /// Parameters `b` with `φ(a; b)`.
    pub fn row(&self, a: Elem) -> &BitSet {
        &self.rows[a.0]
    }

    /// Elements satisfying `φ(x; b)^sign`.
    pub fn literal_set(&self, b: Param, sign: bool) -> BitSet {
        if sign {
            self.cols[b.0].clone()
        } else {
            self.cols[b.0].complement()
        }
    }

    pub fn base_set(&self) -> &[Param] {
        &self.base
    }

    pub fn theta_set(&self) -> &[Param] {
        &self.theta
    }

    pub fn in_base(&self, b: Param) -> bool {
        self.base_mask.contains(b.0)
    }

    pub fn in_theta(&self, b: Param) -> bool {
        self.theta_mask.contains(b.0)
    }

    /// Whether `Θ` was declared as all of `Y` rather than as an explicit list.
    pub fn theta_is_all(&self) -> bool {
        self.theta_all
    }

    pub fn check_elem(&self, a: Elem) -> Result<()> {
        if a.0 < self.num_elements() {
            Ok(())
        } else {
            Err(Error::UnknownElement(a.0))
        }
    }

    pub fn check_param(&self, b: Param) -> Result<()> {
        if b.0 < self.num_params() {
            Ok(())
        } else {
            Err(Error::UnknownParameter(b.0))
        }
    }

    pub fn check_type(&self, p: &PhiType) -> Result<()> {
        p.domain().try_for_each(|b| self.check_param(b))
    }

    /// `tp_φ(a / D)`.
    pub fn trace(&self, a: Elem, domain: &[Param]) -> Result<PhiType> {
        self.check_elem(a)?;
        let mut literals = BTreeMap::new();
        for &b in domain {
            self.check_param(b)?;
            literals.insert(b, self.truth(a, b));
        }
        Ok(PhiType { literals })
    }

    /// Trace of `a` over every parameter: the complete type used wherever a
    /// complete type over the whole structure is needed.
    pub fn full_trace(&self, a: Elem) -> Result<PhiType> {
        self.check_elem(a)?;
        Ok(PhiType {
            literals: self.params().map(|b| (b, self.truth(a, b))).collect(),
        })
    }

    /// Elements realizing every literal of `p`.
    pub fn realizers(&self, p: &PhiType) -> Result<BitSet> {
        self.check_type(p)?;
        let mut set = BitSet::full(self.num_elements());
        for (b, sign) in p.iter() {
            if sign {
                set.intersect_with(&self.cols[b.0]);
            } else {
                set.difference_with(&self.cols[b.0]);
            }
        }
        Ok(set)
    }

    pub fn is_consistent(&self, p: &PhiType) -> Result<bool> {
        Ok(!self.realizers(p)?.is_empty())
    }

    /// `S_φ(D)`: the distinct traces over `D`, ordered by first realizing element.
    pub fn type_space(&self, domain: &[Param]) -> Result<Vec<PhiType>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for a in self.elements() {
            let t = self.trace(a, domain)?;
            if seen.insert(t.clone()) {
                out.push(t);
            }
        }
        Ok(out)
    }

    /// `p0 ⊢ p` relative to this structure.
    pub fn entails(&self, p0: &PhiType, p: &PhiType) -> Result<bool> {
        Ok(self.realizers(p0)?.is_subset(&self.realizers(p)?))
    }
}

impl fmt::Debug for BipartiteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "BipartiteStructure {}x{} B={:?} Θ={:?}",
            self.num_elements(),
            self.num_params(),
            self.base.iter().map(|b| b.0).collect::<Vec<_>>(),
            self.theta.iter().map(|b| b.0).collect::<Vec<_>>(),
        )?;
        for row in &self.rows {
            for b in 0..self.num_params() {
                f.write_str(if row.contains(b) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A φ-type: a finite set of literals `φ(x; b)^t`, at most one per parameter.
///
/// Literals are kept in parameter order, so the derived `Ord` is the
/// lexicographic literal order used for tie-breaking.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhiType {
    literals: BTreeMap<Param, bool>,
}

impl PhiType {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_literals(literals: impl IntoIterator<Item = (Param, bool)>) -> Result<Self> {
        let mut p = PhiType::new();
        for (b, sign) in literals {
            p.insert(b, sign)?;
        }
        Ok(p)
    }

    /// Adds `φ(x; b)^sign`. Re-adding the same literal is a no-op; the
    /// opposite sign is a [`Error::LiteralClash`].
    pub fn insert(&mut self, b: Param, sign: bool) -> Result<()> {
        match self.literals.get(&b) {
            Some(&s) if s != sign => Err(Error::LiteralClash { param: b.0 }),
            _ => {
                self.literals.insert(b, sign);
                Ok(())
            }
        }
    }

    pub fn get(&self, b: Param) -> Option<bool> {
        self.literals.get(&b).copied()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Param, bool)> + '_ {
        self.literals.iter().map(|(&b, &s)| (b, s))
    }

    pub fn domain(&self) -> impl Iterator<Item = Param> + '_ {
        self.literals.keys().copied()
    }

    pub fn union(&self, other: &PhiType) -> Result<PhiType> {
        let mut out = self.clone();
        for (b, s) in other.iter() {
            out.insert(b, s)?;
        }
        Ok(out)
    }

    /// Literal containment `self ⊆ other`.
    pub fn is_subtype_of(&self, other: &PhiType) -> bool {
        self.iter().all(|(b, s)| other.get(b) == Some(s))
    }

    pub fn restrict(&self, domain: &[Param]) -> PhiType {
        PhiType {
            literals: domain
                .iter()
                .filter_map(|&b| self.get(b).map(|s| (b, s)))
                .collect(),
        }
    }
}

impl fmt::Display for PhiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (b, s)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{b}={}", s as u8)?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use alloc::vec;

    /// Four elements realizing every pattern over two parameters.
    pub(crate) fn s1() -> BipartiteStructure {
        BipartiteStructure::from_fn(4, 2, |a, b| (a >> (1 - b)) & 1 == 1, &[0, 1], None).unwrap()
    }

    /// Elements 0..=4, parameters y1..y4 at indices 0..4, `φ(i; yj) = i < j`.
    pub(crate) fn s2() -> BipartiteStructure {
        BipartiteStructure::from_fn(5, 4, |i, j| i < j + 1, &[0, 2], None).unwrap()
    }

    fn lits(l: &[(usize, bool)]) -> PhiType {
        PhiType::from_literals(l.iter().map(|&(b, s)| (Param(b), s))).unwrap()
    }

    #[test]
    fn trace_reads_matrix() {
        let s = s1();
        assert_eq!(
            s.trace(Elem(3), &[Param(0), Param(1)]).unwrap(),
            lits(&[(0, true), (1, true)])
        );
        assert!(s.trace(Elem(0), &[]).unwrap().is_empty());
        assert_eq!(s.trace(Elem(1), &[Param(1)]).unwrap(), lits(&[(1, true)]));
        assert_eq!(s.trace(Elem(4), &[]), Err(Error::UnknownElement(4)));
        assert_eq!(s.trace(Elem(0), &[Param(2)]), Err(Error::UnknownParameter(2)));
    }

    #[test]
    fn realizers_and_consistency() {
        let s = s1();
        let r = s.realizers(&lits(&[(0, true), (1, true)])).unwrap();
        assert_eq!(r.iter().collect::<Vec<_>>(), [3]);
        assert_eq!(s.realizers(&PhiType::new()).unwrap().count(), 4);
        assert!(s.is_consistent(&lits(&[(0, false), (1, true)])).unwrap());
        assert!(s.is_consistent(&PhiType::new()).unwrap());

        let constant = BipartiteStructure::from_fn(3, 1, |_, _| true, &[], None).unwrap();
        assert!(!constant.is_consistent(&lits(&[(0, false)])).unwrap());
    }

    #[test]
    fn clash_rejected_at_construction() {
        let mut p = lits(&[(0, true), (1, true)]);
        assert_eq!(p.insert(Param(0), false), Err(Error::LiteralClash { param: 0 }));
        assert!(p.insert(Param(0), true).is_ok());
    }

    #[test]
    fn type_spaces() {
        assert_eq!(s1().type_space(&[Param(0), Param(1)]).unwrap().len(), 4);
        assert_eq!(s1().type_space(&[]).unwrap(), vec![PhiType::new()]);
        let chain = s2();
        let all: Vec<Param> = chain.params().collect();
        let space = chain.type_space(&all).unwrap();
        // Independently: row i of the chain is 0^i 1^(4-i) over y1..y4.
        assert_eq!(space.len(), 5);
        for (i, t) in space.iter().enumerate() {
            let expected: Vec<bool> = (1..=4).map(|j| i < j).collect();
            assert_eq!(t.iter().map(|(_, s)| s).collect::<Vec<_>>(), expected);
        }
    }

    #[test]
    fn entailment_examples() {
        let chain = s2();
        let all: Vec<Param> = chain.params().collect();
        let p = chain.trace(Elem(0), &all).unwrap();
        assert!(chain.entails(&lits(&[(0, true)]), &p).unwrap());

        let s = s1();
        assert!(!s
            .entails(&lits(&[(0, true)]), &lits(&[(0, true), (1, true)]))
            .unwrap());
        assert!(s.entails(&p_any(), &p_any()).unwrap());
    }

    fn p_any() -> PhiType {
        lits(&[(1, false)])
    }

    #[test]
    fn invariants_enforced() {
        assert!(matches!(
            BipartiteStructure::new(vec![], 0, &[], None),
            Err(Error::InvalidStructure(_))
        ));
        assert!(matches!(
            BipartiteStructure::new(vec![vec![true]], 1, &[0], Some(&[])),
            Err(Error::InvalidStructure(_))
        ));
        assert_eq!(
            BipartiteStructure::new(vec![vec![true]], 1, &[3], None),
            Err(Error::UnknownParameter(3))
        );
        let empty_y = BipartiteStructure::new(vec![vec![], vec![]], 0, &[], None).unwrap();
        assert_eq!(empty_y.type_space(&[]).unwrap().len(), 1);
    }
}
