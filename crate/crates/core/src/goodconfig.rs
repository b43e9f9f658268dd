//! Good configurations of a φ-type.
//!
//! A list of pairs `(c_{i,0}, c_{i,1})` is good for `p` when
//!
//! 1. every `c_{i,t}` lies in `Θ`;
//! 2. `p_C = p ∪ { φ(x; c_{j,t})^t }` is consistent;
//! 3. for every `s ∈ 2^K` and `j < K`, `c_{j,0}` and `c_{j,1}` have the same
//!    Δ-type over `B ∪ { c_{i,s(i)} : i ≠ j }`.
//!
//! Good configurations never have more than `ID(φ)` pairs when the Δ arity is
//! `ID(φ)`; [`Lab::verify_bound`] checks that on concrete outputs.

use alloc::format;
use alloc::vec::Vec;

use crate::delta::{DeltaEntry, Satisfiability};
use crate::error::{guard, Error, Result};
use crate::lab::Lab;
use crate::structure::{Param, PhiType};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodConfiguration {
    pub pairs: Vec<(Param, Param)>,
    /// The type `p` the configuration extends.
    pub base_type: PhiType,
}

impl GoodConfiguration {
    pub fn empty(base_type: PhiType) -> Self {
        GoodConfiguration {
            pairs: Vec::new(),
            base_type,
        }
    }

    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    /// `c_{0,0}, c_{0,1}, c_{1,0}, …`
    pub fn flattened(&self) -> Vec<Param> {
        self.pairs.iter().flat_map(|&(c0, c1)| [c0, c1]).collect()
    }

    pub fn with_pair(&self, pair: (Param, Param)) -> Self {
        let mut next = self.clone();
        next.pairs.push(pair);
        next
    }

    /// `p_C`.
    pub fn extended_type(&self) -> Result<PhiType> {
        extend_type(&self.base_type, &self.pairs)
    }
}

/// `p ∪ { φ(x; c_{j,t})^t : j < K, t < 2 }`.
pub fn extend_type(p: &PhiType, pairs: &[(Param, Param)]) -> Result<PhiType> {
    let mut out = p.clone();
    for &(c0, c1) in pairs {
        out.insert(c0, false)?;
        out.insert(c1, true)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Clause {
    /// Membership in `Θ`.
    Membership,
    /// Consistency of `p_C`.
    Consistency,
    /// Pairwise Δ-type agreement.
    DeltaAgreement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    OutsideTheta { param: Param },
    Clash { param: Param },
    Inconsistent,
    DeltaMismatch {
        pair: usize,
        signs: Vec<bool>,
        entry: DeltaEntry,
    },
}

impl Violation {
    pub fn clause(&self) -> Clause {
        match self {
            Violation::OutsideTheta { .. } => Clause::Membership,
            Violation::Clash { .. } | Violation::Inconsistent => Clause::Consistency,
            Violation::DeltaMismatch { .. } => Clause::DeltaAgreement,
        }
    }
}

/// Outcome of the good-configuration checker: one flag per clause and the
/// first violation in clause order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigCheck {
    pub membership: bool,
    pub consistency: bool,
    pub delta_agreement: bool,
    pub violation: Option<Violation>,
}

impl ConfigCheck {
    pub fn is_good(&self) -> bool {
        self.membership && self.consistency && self.delta_agreement
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Add extension pairs one at a time until none exists.
    #[default]
    Greedy,
    /// Largest good configuration overall, lexicographically least.
    Exhaustive,
}

impl Lab<'_> {
    /// Runs all three clauses on `config` for `config.base_type`.
    pub fn check_configuration(&self, config: &GoodConfiguration) -> Result<ConfigCheck> {
        let s = self.structure;
        let k = config.size();
        guard("configuration size", k as u128, self.limits.config_size)?;
        s.check_type(&config.base_type)?;
        let flat = config.flattened();
        for &c in &flat {
            s.check_param(c)?;
        }
        let mut violations = Vec::new();

        let outside = flat.iter().copied().find(|&c| !s.in_theta(c));
        if let Some(param) = outside {
            violations.push(Violation::OutsideTheta { param });
        }

        let consistency = match config.extended_type() {
            Err(Error::LiteralClash { param }) => Some(Violation::Clash {
                param: Param(param),
            }),
            Err(e) => return Err(e),
            Ok(p_c) if !s.is_consistent(&p_c)? => Some(Violation::Inconsistent),
            Ok(_) => None,
        };
        violations.extend(consistency.clone());

        let delta = self.first_delta_mismatch(&config.pairs)?;
        violations.extend(delta.clone());

        Ok(ConfigCheck {
            membership: outside.is_none(),
            consistency: consistency.is_none(),
            delta_agreement: delta.is_none(),
            violation: violations.into_iter().next(),
        })
    }

    fn first_delta_mismatch(&self, pairs: &[(Param, Param)]) -> Result<Option<Violation>> {
        let k = pairs.len();
        let base = self.structure.base_set();
        for code in 0u64..(1u64 << k) {
            let signs: Vec<bool> = (0..k).map(|i| code >> i & 1 == 1).collect();
            for (j, &(c0, c1)) in pairs.iter().enumerate() {
                let mut domain: Vec<Param> = base.to_vec();
                for (i, &(d0, d1)) in pairs.iter().enumerate() {
                    if i != j {
                        domain.push(if signs[i] { d1 } else { d0 });
                    }
                }
                if let Some(entry) =
                    self.delta
                        .compare(self.structure, c0, c1, &domain, &self.limits)?
                {
                    return Ok(Some(Violation::DeltaMismatch {
                        pair: j,
                        signs,
                        entry,
                    }));
                }
            }
        }
        Ok(None)
    }

    pub fn is_good_configuration(&self, config: &GoodConfiguration) -> Result<bool> {
        Ok(self.check_configuration(config)?.is_good())
    }

    /// Lexicographically least `(d0, d1) ∈ Θ²` such that `p_C ∪ {¬φ(x;d0), φ(x;d1)}`
    /// is consistent, `d0` and `d1` share their Δ-type over `B ∪ C`, and that
    /// Δ-type is realized in `B` to the degree `k_sat`.
    ///
    /// Every returned pair is re-checked; if the extended list is not good the
    /// call fails with [`Error::UnsoundExtension`]. That cannot happen for
    /// `k_sat` of at least 2 entries, since two table entries suffice to move
    /// a Δ disagreement from `d_t` onto a parameter of `B`.
    pub fn find_extension_pair(
        &self,
        config: &GoodConfiguration,
        k_sat: Satisfiability,
    ) -> Result<Option<(Param, Param)>> {
        let check = self.check_configuration(config)?;
        if !check.is_good() {
            return Err(Error::Precondition(format!(
                "configuration is not good: {:?}",
                check.violation
            )));
        }
        let s = self.structure;
        let p_c = config.extended_type()?;
        let realizers = s.realizers(&p_c)?;
        let mut domain: Vec<Param> = s.base_set().to_vec();
        domain.extend(config.flattened());
        let theta = s.theta_set();

        for &d0 in theta {
            let mut with_d0 = realizers.clone();
            with_d0.difference_with(s.column(d0));
            if with_d0.is_empty() {
                continue;
            }
            let mut realized_in_base: Option<bool> = None;
            for &d1 in theta {
                if d1 == d0 || !with_d0.intersects(s.column(d1)) {
                    continue;
                }
                let fs = match realized_in_base {
                    Some(v) => v,
                    None => {
                        let dt = self.delta.delta_type(s, d0, &domain, &self.limits)?;
                        let v = self.delta.finitely_satisfiable_in(
                            s,
                            &dt,
                            s.base_set(),
                            k_sat,
                            &self.limits,
                        )?;
                        realized_in_base = Some(v);
                        v
                    }
                };
                if !fs {
                    break;
                }
                if !self.delta.equal(s, d0, d1, &domain, &self.limits)? {
                    continue;
                }
                let extended = config.with_pair((d0, d1));
                let recheck = self.check_configuration(&extended)?;
                if !recheck.is_good() {
                    return Err(Error::UnsoundExtension(format!(
                        "pair (b{}, b{}) at k_sat {:?}: {:?}",
                        d0.0, d1.0, k_sat, recheck.violation
                    )));
                }
                return Ok(Some((d0, d1)));
            }
        }
        Ok(None)
    }

    /// A good configuration of `p` that admits no extension pair.
    ///
    /// `Exhaustive` ignores `k_sat`: it returns the largest good configuration
    /// (lexicographically least among those), which has no extension pair
    /// because any extension would be a larger good configuration.
    pub fn build_maximal(
        &self,
        p: &PhiType,
        strategy: Strategy,
        k_sat: Satisfiability,
    ) -> Result<GoodConfiguration> {
        let s = self.structure;
        s.check_type(p)?;
        if let Some(b) = p.domain().find(|&b| !s.in_base(b)) {
            return Err(Error::Precondition(format!("b{} of dom(p) is not in base_set", b.0)));
        }
        if !s.is_consistent(p)? {
            return Err(Error::Precondition("p is inconsistent".into()));
        }
        match strategy {
            Strategy::Greedy => {
                let mut config = GoodConfiguration::empty(p.clone());
                while let Some(pair) = self.find_extension_pair(&config, k_sat)? {
                    config.pairs.push(pair);
                    guard("configuration size", config.size() as u128, self.limits.config_size)?;
                }
                Ok(config)
            }
            Strategy::Exhaustive => {
                guard(
                    "theta_set for exhaustive search",
                    s.theta_set().len() as u128,
                    self.limits.exhaustive_theta,
                )?;
                let candidates = self.candidate_pairs(p)?;
                let mut best = GoodConfiguration::empty(p.clone());
                let mut current = GoodConfiguration::empty(p.clone());
                self.grow(&candidates, 0, &mut current, &mut best)?;
                Ok(best)
            }
        }
    }

    /// Ordered pairs of distinct `Θ` members consistent with `p` on their own.
    fn candidate_pairs(&self, p: &PhiType) -> Result<Vec<(Param, Param)>> {
        let s = self.structure;
        let r = s.realizers(p)?;
        let mut out = Vec::new();
        for &d0 in s.theta_set() {
            for &d1 in s.theta_set() {
                if d0 == d1 {
                    continue;
                }
                let mut both = r.clone();
                both.difference_with(s.column(d0));
                both.intersect_with(s.column(d1));
                if !both.is_empty() {
                    out.push((d0, d1));
                }
            }
        }
        Ok(out)
    }

    /// Depth-first over strictly increasing pair lists; good configurations
    /// are closed under prefixes and reordering, so this visits every good
    /// configuration up to order, in lexicographic order.
    fn grow(
        &self,
        candidates: &[(Param, Param)],
        start: usize,
        current: &mut GoodConfiguration,
        best: &mut GoodConfiguration,
    ) -> Result<()> {
        if current.size() > best.size() {
            *best = current.clone();
        }
        for (i, &pair) in candidates.iter().enumerate().skip(start) {
            current.pairs.push(pair);
            guard("configuration size", current.size() as u128, self.limits.config_size)?;
            if self.is_good_configuration(current)? {
                self.grow(candidates, i + 1, current, best)?;
            }
            current.pairs.pop();
        }
        Ok(())
    }

    /// `K ≤ ID(φ)`.
    pub fn verify_bound(&self, config: &GoodConfiguration) -> bool {
        config.size() <= self.id
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::tests::{s1, s2};
    use crate::structure::{BipartiteStructure, Elem};
    use alloc::vec;

    fn lits(l: &[(usize, bool)]) -> PhiType {
        PhiType::from_literals(l.iter().map(|&(b, s)| (Param(b), s))).unwrap()
    }

    /// Columns 0 and 1 are copies of the same threshold; base is {2}.
    fn duplicates() -> BipartiteStructure {
        BipartiteStructure::from_fn(4, 3, |a, b| if b < 2 { a < 2 } else { a % 2 == 0 }, &[2], None).unwrap()
    }

    #[test]
    fn extend_type_examples() {
        let p = lits(&[(0, true)]);
        assert_eq!(extend_type(&p, &[]).unwrap(), p);
        assert_eq!(
            extend_type(&p, &[(Param(2), Param(3))]).unwrap(),
            lits(&[(0, true), (2, false), (3, true)])
        );
        assert_eq!(
            extend_type(&p, &[(Param(0), Param(3))]),
            Err(Error::LiteralClash { param: 0 })
        );
    }

    #[test]
    fn empty_candidate_is_good() {
        let s = s1();
        let lab = Lab::new(&s);
        let check = lab
            .check_configuration(&GoodConfiguration::empty(lits(&[(0, true)])))
            .unwrap();
        assert!(check.is_good());
        assert_eq!(check.violation, None);
    }

    #[test]
    fn identical_columns_agree_but_cannot_split() {
        let s = duplicates();
        let lab = Lab::new(&s);
        let c = GoodConfiguration {
            pairs: vec![(Param(0), Param(1))],
            base_type: PhiType::new(),
        };
        let check = lab.check_configuration(&c).unwrap();
        assert!(check.delta_agreement);
        assert!(!check.consistency);
    }

    #[test]
    fn s1_consistency_violation() {
        let s = s1();
        let lab = Lab::new(&s);
        // The pair asks for ¬φ(x; b0) while p asserts φ(x; b0).
        let c = GoodConfiguration {
            pairs: vec![(Param(0), Param(1))],
            base_type: lits(&[(0, true)]),
        };
        let check = lab.check_configuration(&c).unwrap();
        assert!(!check.is_good());
        assert_eq!(check.violation.unwrap().clause(), Clause::Consistency);
    }

    #[test]
    fn membership_violation() {
        let s = s1().with_designated(&[], Some(&[0])).unwrap();
        let lab = Lab::new(&s);
        let c = GoodConfiguration {
            pairs: vec![(Param(0), Param(1))],
            base_type: PhiType::new(),
        };
        let v = lab.check_configuration(&c).unwrap().violation.unwrap();
        assert_eq!(v, Violation::OutsideTheta { param: Param(1) });
    }

    #[test]
    fn no_pairs_when_theta_is_base_and_nothing_fits() {
        // Constant columns: no pair can take opposite signs.
        let s = BipartiteStructure::from_fn(3, 2, |_, b| b == 0, &[0, 1], Some(&[0, 1])).unwrap();
        let lab = Lab::new(&s);
        let cfg = GoodConfiguration::empty(PhiType::new());
        assert_eq!(lab.find_extension_pair(&cfg, Satisfiability::All).unwrap(), None);
        for strategy in [Strategy::Greedy, Strategy::Exhaustive] {
            let c = lab.build_maximal(&PhiType::new(), strategy, Satisfiability::All).unwrap();
            assert_eq!(c.size(), 0);
        }
    }

    #[test]
    fn duplicate_pair_outside_base_is_found() {
        // φ(a; b) = a < b on 0..6; base {0, 3, 6} plus gap points 1, 2, 4, 5.
        // Over the base alone, 1 and 2 share their Δ-type, and the pair is
        // consistent with the cut type of element 1.
        let s = BipartiteStructure::from_fn(7, 7, |a, b| a < b, &[0, 3, 6], None).unwrap();
        let lab = Lab::new(&s);
        assert_eq!(lab.id, 1);
        let p = s.trace(Elem(1), s.base_set()).unwrap();
        let c = lab.build_maximal(&p, Strategy::Exhaustive, Satisfiability::All).unwrap();
        assert!(c.size() >= 1);
        assert!(lab.is_good_configuration(&c).unwrap());
        assert!(lab.verify_bound(&c));
        for k in [Satisfiability::AtMost(2), Satisfiability::AtMost(5), Satisfiability::All] {
            assert_eq!(lab.find_extension_pair(&c, k).unwrap(), None);
        }
    }

    #[test]
    fn greedy_output_is_good_and_maximal() {
        let s = s2().with_designated(&[0, 2], None).unwrap();
        let lab = Lab::new(&s);
        for a in s.elements() {
            let p = s.trace(a, s.base_set()).unwrap();
            for k in [Satisfiability::AtMost(2), Satisfiability::AtMost(3), Satisfiability::All] {
                let c = lab.build_maximal(&p, Strategy::Greedy, k).unwrap();
                assert!(lab.is_good_configuration(&c).unwrap());
                assert!(lab.verify_bound(&c));
                assert_eq!(lab.find_extension_pair(&c, k).unwrap(), None);
            }
        }
    }

    #[test]
    fn precondition_errors() {
        let s = s2();
        let lab = Lab::new(&s);
        assert!(matches!(
            lab.build_maximal(&lits(&[(1, true)]), Strategy::Greedy, Satisfiability::All),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            lab.build_maximal(&lits(&[(0, true), (2, false)]), Strategy::Greedy, Satisfiability::All),
            Err(Error::Precondition(_))
        ));
    }
}
