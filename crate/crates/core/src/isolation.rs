//! φ-isolation, φ-defining formulas and the isolated-extension pipeline.
//!
//! All searches report the smallest witness, ties broken by lexicographic
//! literal order. Complete types over the structure are full traces over
//! every parameter, since φ is the only relation the structure interprets.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::bits::BitSet;
use crate::cover::min_cover;
use crate::delta::{DeltaType, Satisfiability};
use crate::error::{guard, Error, Result};
use crate::goodconfig::{extend_type, GoodConfiguration, Strategy};
use crate::lab::Lab;
use crate::structure::{BipartiteStructure, Elem, Param, PhiType};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Minimum-size search by increasing size.
    Exhaustive,
    /// Literal elimination after the size budget ran out.
    Greedy,
}

/// A finite subtype `p₀ ⊆ p′` with `p₀ ⊢ p′`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolationCertificate {
    pub target: PhiType,
    pub subtype: PhiType,
    /// No subtype with fewer literals isolates the target.
    pub minimal: bool,
    pub method: Method,
}

/// `ψ(y) = ∀x (γ(x) → φ(x; y))` for a conjunction of literals `γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningFormula {
    pub gamma: PhiType,
    /// Domain of the type the formula was built for.
    pub domain: Vec<Param>,
    gamma_realizers: BitSet,
}

/// `ψ(b)` together with whether `b` lies in the defined type's domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PsiValue {
    pub value: bool,
    pub constrained: bool,
}

impl DefiningFormula {
    pub fn new(s: &BipartiteStructure, gamma: PhiType, domain: Vec<Param>) -> Result<Self> {
        let gamma_realizers = s.realizers(&gamma)?;
        Ok(DefiningFormula {
            gamma,
            domain,
            gamma_realizers,
        })
    }

    /// `ψ(b)`: every realizer of γ satisfies `φ(x; b)`.
    pub fn eval(&self, s: &BipartiteStructure, b: Param) -> Result<bool> {
        s.check_param(b)?;
        Ok(self.gamma_realizers.is_subset(s.column(b)))
    }

    pub fn eval_flagged(&self, s: &BipartiteStructure, b: Param) -> Result<PsiValue> {
        Ok(PsiValue {
            value: self.eval(s, b)?,
            constrained: self.domain.binary_search(&b).is_ok(),
        })
    }

    /// Whether `ψ(b) ⇔ φ(x; b) ∈ p` for every `b ∈ dom(p)`.
    pub fn defines(&self, s: &BipartiteStructure, p: &PhiType) -> Result<bool> {
        for (b, sign) in p.iter() {
            if self.eval(s, b)? != sign {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Reported when the extension did not beat isolating `p` directly: the finite
/// `Θ` lacks the parameters a saturated extension would supply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SaturationDeficit {
    pub base_subtype_size: usize,
    pub extended_subtype_size: usize,
    pub pairs_added: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatedExtension {
    pub base_type: PhiType,
    pub extended: PhiType,
    pub config: GoodConfiguration,
    pub certificate: IsolationCertificate,
    /// Certificate for the unextended type, for comparison.
    pub base_certificate: IsolationCertificate,
    /// `2K`.
    pub added: usize,
    /// `2·ID(φ)`.
    pub allowed: usize,
    pub diagnostic: Option<SaturationDeficit>,
}

impl IsolatedExtension {
    pub fn budget_ok(&self) -> bool {
        self.added <= self.allowed
    }
}

/// Outcome of a γ search for one realizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaCertificate {
    Witnessed {
        /// The literals `ψ_ℓ` drawn from the element's complete type.
        psi: PhiType,
        /// `γ = ⋀ψ_ℓ ∧ ⋀ φ(x; c_{i,u})^u`.
        gamma: PhiType,
    },
    /// No literal set within the budget decides every base parameter.
    NotWitnessed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PsiDisjunction {
    /// Disjuncts whose realizer sets cover exactly the realizers of `p_C`.
    Cover(Vec<PhiType>),
    NotWitnessed { element: Elem },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub extension: IsolatedExtension,
    pub formula: DefiningFormula,
}

/// The parts of the type a maximal configuration's tuple realizes over `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QType {
    /// Number of pairs `K`; tuples have length `2K`.
    pub pairs: usize,
    /// Finite conjunctions `ψ` of `p`; each asks for
    /// `∃x (ψ(x) ∧ ⋀ φ(x; c′_{i,t})^t)`.
    pub conjunctions: Vec<PhiType>,
    /// Δ-type over `B` of each tuple component.
    pub delta_types: Vec<DeltaType>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemarkReport {
    pub tuples_checked: usize,
    pub realizers: usize,
    /// Isolating-subtype size for the generating configuration.
    pub reference_size: usize,
    /// Realizing tuples whose extension needed a larger subtype, with that size
    /// (`None` when the extension was inconsistent).
    pub violations: Vec<(Vec<Param>, Option<usize>)>,
}

impl Lab<'_> {
    /// Minimum-cardinality `p₀ ⊆ p` with `p₀ ⊢ p`, searched up to `budget`
    /// literals (`None` for no limit). Past the budget, falls back to greedy
    /// literal elimination.
    pub fn find_isolating_subtype(
        &self,
        p: &PhiType,
        budget: Option<usize>,
    ) -> Result<IsolationCertificate> {
        let s = self.structure;
        let realizers = s.realizers(p)?;
        if realizers.is_empty() {
            return Err(Error::Precondition("p is inconsistent".into()));
        }
        let universe = realizers.complement();
        let literals: Vec<(Param, bool)> = p.iter().collect();
        let excluded: Vec<BitSet> = literals
            .iter()
            .map(|&(b, sign)| s.literal_set(b, !sign))
            .collect();
        let limit = budget.unwrap_or(literals.len());
        if let Some(chosen) = min_cover(&universe, &excluded, limit) {
            return Ok(IsolationCertificate {
                target: p.clone(),
                subtype: PhiType::from_literals(chosen.iter().map(|&i| literals[i]))?,
                minimal: true,
                method: Method::Exhaustive,
            });
        }
        let mut keep: Vec<usize> = (0..literals.len()).collect();
        let mut i = 0;
        while i < keep.len() {
            let mut covered = BitSet::empty(universe.len());
            for (pos, &k) in keep.iter().enumerate() {
                if pos != i {
                    covered.union_with(&excluded[k]);
                }
            }
            if universe.is_subset(&covered) {
                keep.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(IsolationCertificate {
            target: p.clone(),
            subtype: PhiType::from_literals(keep.iter().map(|&i| literals[i]))?,
            minimal: false,
            method: Method::Greedy,
        })
    }

    pub fn phi_defining_formula(&self, cert: &IsolationCertificate) -> Result<DefiningFormula> {
        DefiningFormula::new(self.structure, cert.subtype.clone(), cert.target.domain().collect())
    }

    /// Extends `p` by a maximal good configuration and isolates the result.
    pub fn isolated_extension(&self, p: &PhiType, k_sat: Satisfiability) -> Result<IsolatedExtension> {
        self.isolated_extension_with(p, Strategy::Greedy, k_sat)
    }

    pub fn isolated_extension_with(
        &self,
        p: &PhiType,
        strategy: Strategy,
        k_sat: Satisfiability,
    ) -> Result<IsolatedExtension> {
        let config = self.build_maximal(p, strategy, k_sat)?;
        let extended = config.extended_type()?;
        let certificate = self.find_isolating_subtype(&extended, None)?;
        let base_certificate = self.find_isolating_subtype(p, None)?;
        let (base_size, ext_size) = (base_certificate.subtype.len(), certificate.subtype.len());
        let diagnostic = (base_size > 0 && ext_size >= base_size).then_some(SaturationDeficit {
            base_subtype_size: base_size,
            extended_subtype_size: ext_size,
            pairs_added: config.size(),
        });
        let added = 2 * config.size();
        Ok(IsolatedExtension {
            base_type: p.clone(),
            extended,
            certificate,
            base_certificate,
            added,
            allowed: 2 * self.id,
            diagnostic,
            config,
        })
    }

    /// Smallest set of literals `ψ_ℓ` from the complete type of `a` such that
    /// their conjunction decides `φ(x; b)` for every `b ∈ B`, plus the
    /// configuration literals. `budget` bounds the number of `ψ_ℓ`.
    pub fn gamma_certificate(
        &self,
        a: Elem,
        config: &GoodConfiguration,
        budget: Option<usize>,
    ) -> Result<GammaCertificate> {
        let s = self.structure;
        let p_c = config.extended_type()?;
        if !s.realizers(&p_c)?.contains(a.0) {
            return Err(Error::Precondition(format!("a{} does not realize p_C", a.0)));
        }
        let complete = s.full_trace(a)?;
        // Elements disagreeing with a somewhere on B must be ruled out.
        let universe = s.realizers(&s.trace(a, s.base_set())?)?.complement();
        let literals: Vec<(Param, bool)> = complete.iter().collect();
        let excluded: Vec<BitSet> = literals
            .iter()
            .map(|&(b, sign)| s.literal_set(b, !sign))
            .collect();
        let Some(chosen) = min_cover(&universe, &excluded, budget.unwrap_or(literals.len())) else {
            return Ok(GammaCertificate::NotWitnessed);
        };
        let psi = PhiType::from_literals(chosen.iter().map(|&i| literals[i]))?;
        let config_literals = extend_type(&PhiType::new(), &config.pairs)?;
        let gamma = psi.union(&config_literals)?;
        if !s.entails(&gamma, &p_c)? {
            return Err(Error::Invariant(format!("gamma {gamma} does not entail p_C {p_c}")));
        }
        Ok(GammaCertificate::Witnessed { psi, gamma })
    }

    /// A disjunction of γ certificates equivalent to `p_C`: one candidate per
    /// complete type realized inside `p_C`, then a minimum subfamily whose
    /// realizers cover `p_C`'s.
    pub fn psi_disjunction(
        &self,
        config: &GoodConfiguration,
        budget: Option<usize>,
    ) -> Result<PsiDisjunction> {
        let s = self.structure;
        let p_c = config.extended_type()?;
        let target = s.realizers(&p_c)?;
        if target.is_empty() {
            return Err(Error::Precondition("p_C is inconsistent".into()));
        }
        let mut classes: BTreeMap<&BitSet, Elem> = BTreeMap::new();
        for a in target.iter().map(Elem) {
            classes.entry(s.row(a)).or_insert(a);
        }
        let mut reps: Vec<Elem> = classes.into_values().collect();
        reps.sort();
        let mut gammas = Vec::with_capacity(reps.len());
        let mut covers = Vec::with_capacity(reps.len());
        for a in reps {
            match self.gamma_certificate(a, config, budget)? {
                GammaCertificate::Witnessed { gamma, .. } => {
                    covers.push(s.realizers(&gamma)?);
                    gammas.push(gamma);
                }
                GammaCertificate::NotWitnessed => return Ok(PsiDisjunction::NotWitnessed { element: a }),
            }
        }
        let chosen = min_cover(&target, &covers, covers.len())
            .ok_or_else(|| Error::Invariant("gamma certificates do not cover p_C".into()))?;
        let mut union = BitSet::empty(target.len());
        for &i in &chosen {
            union.union_with(&covers[i]);
        }
        if union != target {
            return Err(Error::Invariant("disjunction is not equivalent to p_C".into()));
        }
        Ok(PsiDisjunction::Cover(chosen.into_iter().map(|i| gammas[i].clone()).collect()))
    }

    /// φ-defines `tp_φ(a / B)` through its isolated extension.
    pub fn embed_trace(&self, a: Elem, k_sat: Satisfiability) -> Result<Embedding> {
        let s = self.structure;
        let p = s.trace(a, s.base_set())?;
        let extension = self.isolated_extension(&p, k_sat)?;
        let formula = self.phi_defining_formula(&extension.certificate)?;
        for &b in s.base_set() {
            if formula.eval(s, b)? != s.truth(a, b) {
                return Err(Error::Invariant(format!("psi(b{}) disagrees with a{}", b.0, a.0)));
            }
        }
        Ok(Embedding { extension, formula })
    }

    /// Materializes q′, q″ and q‴ for a configuration of `config.base_type`.
    /// `sample` bounds the number of conjunctions of `p` kept, taken by
    /// increasing size then lexicographically (`None` keeps all of them).
    pub fn q_type(&self, config: &GoodConfiguration, sample: Option<usize>) -> Result<QType> {
        let s = self.structure;
        let p = &config.base_type;
        let literals: Vec<(Param, bool)> = p.iter().collect();
        let want = match sample {
            Some(n) => n,
            None => {
                guard("q'' conjunction domain", literals.len() as u128, self.limits.q_conjunction_dom)?;
                usize::MAX
            }
        };
        let mut conjunctions = Vec::new();
        'sizes: for size in 0..=literals.len() {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                if conjunctions.len() >= want {
                    break 'sizes;
                }
                conjunctions.push(PhiType::from_literals(idx.iter().map(|&i| literals[i]))?);
                if !next_combination(&mut idx, literals.len()) {
                    break;
                }
            }
        }
        let delta_types = config
            .flattened()
            .into_iter()
            .map(|c| self.delta.delta_type(s, c, s.base_set(), &self.limits))
            .collect::<Result<Vec<_>>>()?;
        Ok(QType {
            pairs: config.size(),
            conjunctions,
            delta_types,
        })
    }

    /// Whether `tuple = (c′_{0,0}, c′_{0,1}, …)` realizes `q`.
    pub fn check_q_realizer(&self, tuple: &[Param], q: &QType) -> Result<bool> {
        let s = self.structure;
        if tuple.len() != 2 * q.pairs {
            return Err(Error::Precondition(format!(
                "tuple has length {}, expected {}",
                tuple.len(),
                2 * q.pairs
            )));
        }
        for &c in tuple {
            s.check_param(c)?;
        }
        if !tuple.iter().all(|&c| s.in_theta(c)) {
            return Ok(false);
        }
        let Ok(config_literals) = PhiType::from_literals(
            tuple.iter().enumerate().map(|(i, &c)| (c, i % 2 == 1)),
        ) else {
            return Ok(false);
        };
        for psi in &q.conjunctions {
            match psi.union(&config_literals) {
                Ok(joint) if s.is_consistent(&joint)? => {}
                _ => return Ok(false),
            }
        }
        for (&c, dt) in tuple.iter().zip(&q.delta_types) {
            let own = self.delta.delta_type(s, c, &dt.domain, &self.limits)?;
            if !own.same_table(dt) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Enumerates `Θ^(2K)` and checks that every realizer of `q` yields an
    /// extension of `p` isolated by no more literals than `p_C` needs.
    pub fn remark_harness(&self, config: &GoodConfiguration, sample: Option<usize>) -> Result<RemarkReport> {
        let s = self.structure;
        let len = 2 * config.size();
        guard("q tuple length", len as u128, self.limits.q_tuple_len)?;
        guard("q theta size", s.theta_set().len() as u128, self.limits.q_theta)?;
        let q = self.q_type(config, sample)?;
        if !self.check_q_realizer(&config.flattened(), &q)? {
            return Err(Error::Invariant("generating tuple does not realize q".into()));
        }
        let reference_size = self
            .find_isolating_subtype(&config.extended_type()?, None)?
            .subtype
            .len();
        let theta = s.theta_set();
        let mut report = RemarkReport {
            tuples_checked: 0,
            realizers: 0,
            reference_size,
            violations: Vec::new(),
        };
        let mut odometer = alloc::vec![0usize; len];
        loop {
            let tuple: Vec<Param> = odometer.iter().map(|&i| theta[i]).collect();
            report.tuples_checked += 1;
            if self.check_q_realizer(&tuple, &q)? {
                report.realizers += 1;
                let pairs: Vec<(Param, Param)> = tuple.chunks(2).map(|c| (c[0], c[1])).collect();
                let size = match extend_type(&config.base_type, &pairs) {
                    Ok(ext) if s.is_consistent(&ext)? => {
                        Some(self.find_isolating_subtype(&ext, None)?.subtype.len())
                    }
                    _ => None,
                };
                if size.is_none_or(|n| n > reference_size) {
                    report.violations.push((tuple, size));
                }
            }
            if !advance(&mut odometer, theta.len()) {
                break;
            }
        }
        Ok(report)
    }
}

fn advance(odometer: &mut [usize], base: usize) -> bool {
    for slot in odometer.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Next ascending `idx.len()`-combination of `0..n`.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::tests::{s1, s2};
    use alloc::vec;

    fn lits(l: &[(usize, bool)]) -> PhiType {
        PhiType::from_literals(l.iter().map(|&(b, s)| (Param(b), s))).unwrap()
    }

    #[test]
    fn combinations_in_order() {
        let mut idx = vec![0, 1];
        let mut seen = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            seen.push(idx.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[5], [2, 3]);
        assert!(!next_combination(&mut [], 3));
    }

    #[test]
    fn isolating_subtype_examples() {
        let s = s1();
        let lab = Lab::new(&s);
        let empty = lab.find_isolating_subtype(&PhiType::new(), None).unwrap();
        assert!(empty.subtype.is_empty());
        let full = lits(&[(0, true), (1, true)]);
        let cert = lab.find_isolating_subtype(&full, None).unwrap();
        assert_eq!(cert.subtype, full);
        assert!(cert.minimal);

        let chain = s2();
        let lab = Lab::new(&chain);
        let all: Vec<Param> = chain.params().collect();
        let p = chain.trace(Elem(0), &all).unwrap();
        let cert = lab.find_isolating_subtype(&p, None).unwrap();
        assert_eq!(cert.subtype, lits(&[(0, true)]));
        let f = lab.phi_defining_formula(&cert).unwrap();
        for b in chain.params() {
            assert!(f.eval(&chain, b).unwrap());
        }
        assert!(f.defines(&chain, &p).unwrap());
    }

    #[test]
    fn budget_fallback_is_greedy() {
        let s = s1();
        let lab = Lab::new(&s);
        let full = lits(&[(0, true), (1, true)]);
        let cert = lab.find_isolating_subtype(&full, Some(1)).unwrap();
        assert_eq!(cert.method, Method::Greedy);
        assert!(!cert.minimal);
        assert!(s.entails(&cert.subtype, &full).unwrap());
    }

    #[test]
    fn psi_flag_outside_domain() {
        let chain = s2();
        let lab = Lab::new(&chain);
        let p = lits(&[(0, false)]);
        let cert = lab.find_isolating_subtype(&p, None).unwrap();
        let f = lab.phi_defining_formula(&cert).unwrap();
        assert!(f.eval_flagged(&chain, Param(0)).unwrap().constrained);
        assert!(!f.eval_flagged(&chain, Param(3)).unwrap().constrained);
    }

    #[test]
    fn extension_without_extra_parameters() {
        let s = s1();
        let lab = Lab::new(&s);
        let p = lits(&[(0, true), (1, true)]);
        let ext = lab.isolated_extension(&p, Satisfiability::All).unwrap();
        assert_eq!(ext.config.size(), 0);
        assert_eq!(ext.certificate, ext.base_certificate);
        assert!(ext.budget_ok());
        assert!(ext.diagnostic.is_some());
    }

    #[test]
    fn gamma_for_s1() {
        let s = s1();
        let lab = Lab::new(&s);
        let config = GoodConfiguration::empty(lits(&[(0, true), (1, true)]));
        let GammaCertificate::Witnessed { gamma, psi } = lab.gamma_certificate(Elem(3), &config, None).unwrap() else {
            panic!("expected a witness");
        };
        assert!(psi.len() <= 2);
        assert!(s.entails(&gamma, &config.extended_type().unwrap()).unwrap());
        assert_eq!(
            lab.psi_disjunction(&config, None).unwrap(),
            PsiDisjunction::Cover(vec![gamma])
        );
        assert_eq!(
            lab.gamma_certificate(Elem(3), &config, Some(1)).unwrap(),
            GammaCertificate::NotWitnessed
        );
        assert!(matches!(
            lab.gamma_certificate(Elem(0), &config, None),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn embed_chain_element() {
        let chain = s2().with_designated(&[0, 2], None).unwrap();
        let lab = Lab::new(&chain);
        let e = lab.embed_trace(Elem(2), Satisfiability::All).unwrap();
        // a = 2: 2 < 1 false, 2 < 3 true.
        assert!(!e.formula.eval(&chain, Param(0)).unwrap());
        assert!(e.formula.eval(&chain, Param(2)).unwrap());
    }
}
