//! Verification suites. Each one checks a single invariant over a list of
//! instances and reports every violation with a counterexample.

use philab_core::delta::Satisfiability;
use philab_core::goodconfig::Strategy;
use philab_core::isolation::IsolatedExtension;
use philab_core::oracle::{oracle_all_good_configs, oracle_min_isolating, oracle_vc, OracleLimits};
use philab_core::{vc, BipartiteStructure, Error, GoodConfiguration, Lab, Limits, Param, PhiType, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::certs::{LitMap, OracleReport};
use crate::corpus::{growth_instance, Instance};
use crate::format::serialize_structure;
use crate::genspec::digest;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    /// Good configurations never exceed ID (oracle enumeration).
    Bound,
    /// Isolated extensions add at most 2·ID parameters.
    Budget,
    /// Types over independent sets have no proper isolating subtype.
    Shatter,
    /// Independence holds exactly when all sign patterns occur.
    Typecount,
    /// Minimum isolating size grows with the base members of a class.
    Growth,
    /// Subject and oracle agree.
    Oracle,
    /// Defining formulas agree with the types they define.
    Defining,
    /// Realizers of the q-type yield extensions that stay isolated.
    Remark,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure {
    pub instance: String,
    pub detail: String,
    pub counterexample: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub instances: usize,
    pub checks: usize,
    pub skipped: usize,
    pub passed: bool,
    pub failures: Vec<Failure>,
    /// Values the suite measured, for suites whose output is a sequence.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<usize>,
    #[serde(skip)]
    pub oracle_reports: Vec<OracleReport>,
}

impl SuiteReport {
    fn new(suite: &'static str) -> Self {
        SuiteReport {
            suite,
            instances: 0,
            checks: 0,
            skipped: 0,
            passed: true,
            failures: Vec::new(),
            values: Vec::new(),
            oracle_reports: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, instance: &str, detail: impl FnOnce() -> (String, Value)) {
        self.checks += 1;
        if !ok {
            let (detail, counterexample) = detail();
            self.passed = false;
            self.failures.push(Failure { instance: instance.to_owned(), detail, counterexample });
        }
    }
}

/// Knobs shared by the suites.
#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub limits: Limits,
    pub oracle: OracleLimits,
    /// Satisfiability degrees used for greedy extensions.
    pub k_sats: Vec<Satisfiability>,
    /// Largest `|D|` for subset-enumerating suites.
    pub max_subset: usize,
    /// Largest `|Y|` whose subsets are enumerated.
    pub subset_params: usize,
    /// Number of conjunctions of `p` kept in the q-type (`None`: all).
    pub q_sample: Option<usize>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            limits: Limits::default(),
            oracle: OracleLimits::default(),
            k_sats: vec![Satisfiability::All, Satisfiability::AtMost(2), Satisfiability::AtMost(3)],
            max_subset: 5,
            subset_params: 16,
            q_sample: None,
        }
    }
}

pub fn k_sat_name(k: Satisfiability) -> String {
    match k {
        Satisfiability::All => "all".into(),
        Satisfiability::AtMost(n) => n.to_string(),
    }
}

fn base_types(s: &BipartiteStructure) -> Result<Vec<PhiType>> {
    s.type_space(s.base_set())
}

fn lits(p: &PhiType) -> Value {
    serde_json::to_value(LitMap(p.clone())).expect("literal map")
}

fn pair_list(pairs: &[(Param, Param)]) -> Value {
    json!(pairs.iter().map(|&(a, b)| [a.0, b.0]).collect::<Vec<_>>())
}

fn subsets(n: usize, max: usize, limit: usize, mut f: impl FnMut(&[Param]) -> Result<()>) -> Result<()> {
    if n > limit {
        return Err(Error::ResourceLimit { what: "subset enumeration parameters", required: n as u128, limit: limit as u128 });
    }
    for mask in 0u64..(1u64 << n) {
        if mask.count_ones() as usize <= max {
            let d: Vec<Param> = (0..n).filter(|i| mask >> i & 1 == 1).map(Param).collect();
            f(&d)?;
        }
    }
    Ok(())
}

fn pattern(d: &[Param], code: u64) -> Result<PhiType> {
    PhiType::from_literals(d.iter().enumerate().map(|(i, &b)| (b, code >> i & 1 == 1)))
}

pub fn run(suite: Suite, instances: &[Instance], opts: &SuiteOptions) -> Result<SuiteReport> {
    match suite {
        Suite::Bound => bound(instances, opts),
        Suite::Budget => budget(instances, opts),
        Suite::Shatter => shatter(instances, opts),
        Suite::Typecount => typecount(instances, opts),
        Suite::Growth => Err(Error::Precondition("the growth suite takes an eqrel pick list".into())),
        Suite::Oracle => oracle(instances, opts),
        Suite::Defining => defining(instances, opts),
        Suite::Remark => remark(instances, opts),
    }
}

/// Exhaustive oracle enumeration up to `ID + 1` pairs finds nothing larger
/// than `ID`; by prefix closure nothing larger exists at all.
pub fn bound(instances: &[Instance], opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("bound");
    for inst in instances {
        report.instances += 1;
        let s = &inst.structure;
        let id = vc::id(s);
        let limits = OracleLimits { max_k: id + 1, ..opts.oracle };
        for p in base_types(s)? {
            let configs = oracle_all_good_configs(s, &p, id + 1, &limits)?;
            let too_big = configs.iter().find(|c| c.len() > id);
            report.check(too_big.is_none(), &inst.label, || {
                let c = too_big.expect("violation");
                (
                    format!("good configuration of size {} exceeds ID = {id}", c.len()),
                    json!({"type": lits(&p), "pairs": pair_list(c), "id": id}),
                )
            });
        }
    }
    Ok(report)
}

/// Every isolated extension produced for the base types of `s`: greedy at
/// each configured degree, then the exhaustive maximum when `Θ` is small.
pub fn extensions(lab: &Lab<'_>, opts: &SuiteOptions) -> Result<Vec<(String, IsolatedExtension)>> {
    let s = lab.structure;
    let mut out = Vec::new();
    for p in base_types(s)? {
        for &k in &opts.k_sats {
            let ext = lab.isolated_extension_with(&p, Strategy::Greedy, k)?;
            out.push((format!("greedy k_sat={}", k_sat_name(k)), ext));
        }
        if s.theta_set().len() <= lab.limits.exhaustive_theta {
            let ext = lab.isolated_extension_with(&p, Strategy::Exhaustive, Satisfiability::All)?;
            out.push(("exhaustive".into(), ext));
        }
    }
    Ok(out)
}

pub fn budget(instances: &[Instance], opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("budget");
    for inst in instances {
        report.instances += 1;
        let lab = Lab::new(&inst.structure).with_limits(opts.limits);
        for (how, ext) in extensions(&lab, opts)? {
            report.check(ext.budget_ok(), &inst.label, || {
                (
                    format!("{how}: 2K = {} exceeds 2ID = {}", ext.added, ext.allowed),
                    json!({"type": lits(&ext.base_type), "pairs": pair_list(&ext.config.pairs)}),
                )
            });
        }
    }
    Ok(report)
}

/// For every independent `D` with `|D| ≤ max_subset` and every `p` over `D`,
/// the minimum isolating subtype is `p` itself, by subject and oracle.
pub fn shatter(instances: &[Instance], opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("shatter");
    for inst in instances {
        report.instances += 1;
        let s = &inst.structure;
        let lab = Lab::new(s).with_limits(opts.limits);
        subsets(s.num_params(), opts.max_subset, opts.subset_params, |d| {
            if !vc::is_phi_independent(s, d)? {
                return Ok(());
            }
            for code in 0..(1u64 << d.len()) {
                let p = pattern(d, code)?;
                let cert = lab.find_isolating_subtype(&p, None)?;
                let oracle = oracle_min_isolating(s, &p, &opts.oracle)?;
                let ok = cert.subtype == p && oracle == p.len();
                report.check(ok, &inst.label, || {
                    (
                        format!("type over an independent set isolated by {} literals (oracle {oracle})", cert.subtype.len()),
                        json!({"type": lits(&p), "subtype": lits(&cert.subtype)}),
                    )
                });
            }
            Ok(())
        })?;
    }
    Ok(report)
}

pub fn typecount(instances: &[Instance], opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("typecount");
    for inst in instances {
        report.instances += 1;
        let s = &inst.structure;
        subsets(s.num_params(), opts.max_subset, opts.subset_params, |d| {
            let independent = vc::is_phi_independent(s, d)?;
            let count = s.type_space(d)?.len();
            report.check(independent == (count == 1 << d.len()), &inst.label, || {
                (
                    format!("independent = {independent} but {count} types over {} parameters", d.len()),
                    json!({"domain": d.iter().map(|b| b.0).collect::<Vec<_>>()}),
                )
            });
            Ok(())
        })?;
    }
    Ok(report)
}

/// Minimum isolating sizes for the target type of each growth instance; the
/// sizes must strictly increase with `n`, stay at least `n`, and the subject
/// search and its defining formula must match the oracle.
pub fn growth(ns: &[usize], opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("growth");
    for &n in ns {
        let (inst, p) = growth_instance(n, &opts.limits)?;
        report.instances += 1;
        let s = &inst.structure;
        let oracle = oracle_min_isolating(s, &p, &opts.oracle)?;
        let lab = Lab::new(s).with_limits(opts.limits);
        let cert = lab.find_isolating_subtype(&p, None)?;
        let formula = lab.phi_defining_formula(&cert)?;
        report.check(cert.subtype.len() == oracle, &inst.label, || {
            (format!("subject size {} differs from oracle {oracle}", cert.subtype.len()), json!({"n": n}))
        });
        report.check(oracle >= n, &inst.label, || (format!("size {oracle} is below n = {n}"), json!({"n": n})));
        report.check(formula.defines(s, &p)?, &inst.label, || {
            ("defining formula disagrees with the target".into(), json!({"gamma": lits(&formula.gamma)}))
        });
        if let Some(&prev) = report.values.last() {
            report.check(oracle > prev, &inst.label, || {
                (format!("size {oracle} does not exceed the previous {prev}"), json!({"n": n}))
            });
        }
        report.values.push(oracle);
    }
    Ok(report)
}

pub fn oracle(instances: &[Instance], opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("oracle");
    for inst in instances {
        report.instances += 1;
        let s = &inst.structure;
        let id_digest = digest(&serialize_structure(s));
        let lab = Lab::new(s).with_limits(opts.limits);
        let push = |report: &mut SuiteReport, r: OracleReport| {
            let agree = r.agree;
            report.check(agree, &inst.label, || {
                (format!("{} disagrees", r.operation), json!({"oracle": r.oracle, "subject": r.subject}))
            });
            report.oracle_reports.push(r);
        };

        let r = OracleReport::new("independence_dimension", &id_digest, json!(oracle_vc(s, &opts.oracle)?), json!(lab.id));
        push(&mut report, r);

        let mut targets = base_types(s)?;
        for a in s.elements() {
            targets.push(s.full_trace(a)?);
        }
        for p in &targets {
            let subject = lab.find_isolating_subtype(p, None)?.subtype.len();
            let oracle = oracle_min_isolating(s, p, &opts.oracle)?;
            push(&mut report, OracleReport::new("min_isolating", &id_digest, json!(oracle), json!(subject)));
        }

        let limits = OracleLimits { max_k: lab.id + 1, ..opts.oracle };
        for p in base_types(s)? {
            let all = oracle_all_good_configs(s, &p, lab.id + 1, &limits)?;
            let oracle_max = all.iter().map(Vec::len).max().unwrap_or(0);
            let subject = lab.build_maximal(&p, Strategy::Exhaustive, Satisfiability::All)?;
            push(
                &mut report,
                OracleReport::new("max_good_configuration", &id_digest, json!(oracle_max), json!(subject.size())),
            );
            for pairs in &all {
                let config = GoodConfiguration { pairs: pairs.clone(), base_type: p.clone() };
                let good = lab.is_good_configuration(&config)?;
                push(&mut report, OracleReport::new("good_configuration", &id_digest, json!(true), json!(good)));
            }
        }
    }
    Ok(report)
}

/// Each emitted defining formula agrees with its type on the whole domain,
/// and `embed_trace` recovers `φ(a; B)` for every row.
pub fn defining(instances: &[Instance], opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("defining");
    for inst in instances {
        report.instances += 1;
        let s = &inst.structure;
        let lab = Lab::new(s).with_limits(opts.limits);
        for (how, ext) in extensions(&lab, opts)? {
            let formula = lab.phi_defining_formula(&ext.certificate)?;
            let ok = formula.defines(s, &ext.extended)? && formula.defines(s, &ext.base_type)?;
            report.check(ok, &inst.label, || {
                (
                    format!("{how}: formula does not define its type"),
                    json!({"type": lits(&ext.extended), "gamma": lits(&formula.gamma)}),
                )
            });
        }
        for a in s.elements() {
            for &k in &opts.k_sats {
                let trace = s.trace(a, s.base_set())?;
                let ok = match lab.embed_trace(a, k) {
                    Ok(e) => e.formula.defines(s, &trace)? && e.formula.defines(s, &e.extension.extended)?,
                    Err(Error::Invariant(_)) => false,
                    Err(e) => return Err(e),
                };
                report.check(ok, &inst.label, || {
                    (format!("embedding of a{} at k_sat={} fails", a.0, k_sat_name(k)), json!({"element": a.0}))
                });
            }
        }
    }
    Ok(report)
}

/// On instances with `|Θ| ≤ q_theta`, every realizer of the q-type of each
/// maximal configuration with `2K ≤ q_tuple_len` yields an extension isolated
/// by no more literals than the generating one.
pub fn remark(instances: &[Instance], opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("remark");
    for inst in instances {
        let s = &inst.structure;
        if s.theta_set().len() > opts.limits.q_theta {
            report.skipped += 1;
            continue;
        }
        report.instances += 1;
        let lab = Lab::new(s).with_limits(opts.limits);
        let mut configs = Vec::new();
        for p in base_types(s)? {
            configs.push(lab.build_maximal(&p, Strategy::Exhaustive, Satisfiability::All)?);
            for &k in &opts.k_sats {
                configs.push(lab.build_maximal(&p, Strategy::Greedy, k)?);
            }
        }
        configs.sort_by(|a, b| (&a.base_type, &a.pairs).cmp(&(&b.base_type, &b.pairs)));
        configs.dedup();
        for config in configs {
            if 2 * config.size() > opts.limits.q_tuple_len {
                report.skipped += 1;
                continue;
            }
            let r = lab.remark_harness(&config, opts.q_sample)?;
            report.check(r.violations.is_empty(), &inst.label, || {
                let (tuple, size) = &r.violations[0];
                (
                    format!(
                        "q realizer needs {} literals, generating configuration needs {}",
                        size.map_or("an inconsistent".into(), |n| n.to_string()),
                        r.reference_size
                    ),
                    json!({
                        "type": lits(&config.base_type),
                        "pairs": pair_list(&config.pairs),
                        "tuple": tuple.iter().map(|b| b.0).collect::<Vec<_>>(),
                    }),
                )
            });
        }
    }
    Ok(report)
}
