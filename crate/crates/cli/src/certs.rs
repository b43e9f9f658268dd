//! JSON certificate shapes. Field order is fixed by the struct definitions and
//! literal maps are emitted in parameter order, so output is byte-stable.

use philab_core::goodconfig::{ConfigCheck, Violation};
use philab_core::isolation::{Embedding, IsolatedExtension, Method};
use philab_core::{BipartiteStructure, DefiningFormula, GoodConfiguration, IndependenceReport, Param, PhiType, Result};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::Value;

/// A φ-type as `{"b3": 1, "b7": 0}`, keys in ascending parameter order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LitMap(pub PhiType);

impl Serialize for LitMap {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(Some(self.0.len()))?;
        for (b, sign) in self.0.iter() {
            map.serialize_entry(&b.to_string(), &u8::from(sign))?;
        }
        map.end()
    }
}

fn pairs(config: &GoodConfiguration) -> Vec<[usize; 2]> {
    config.pairs.iter().map(|&(c0, c1)| [c0.0, c1.0]).collect()
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn params(v: &[Param]) -> String {
    v.iter().map(Param::to_string).collect::<Vec<_>>().join(",")
}

pub fn describe_violation(v: &Violation) -> String {
    match v {
        Violation::OutsideTheta { param } => format!("membership: {param} is not in THETA"),
        Violation::Clash { param } => format!("consistency: {param} is asked to take both signs"),
        Violation::Inconsistent => "consistency: p_C has no realizer".into(),
        Violation::DeltaMismatch { pair, signs, entry } => format!(
            "delta-agreement: pair {pair} under s={} differs at tuple ({}) t={} signs={}",
            bits(signs),
            params(&entry.tuple),
            u8::from(entry.t),
            bits(&entry.signs)
        ),
    }
}

#[derive(Debug, Serialize)]
pub struct IdOutput {
    pub id: usize,
    pub witness: Vec<usize>,
    pub capped: bool,
}

impl From<&IndependenceReport> for IdOutput {
    fn from(r: &IndependenceReport) -> Self {
        IdOutput { id: r.id_value, witness: r.witness.iter().map(|b| b.0).collect(), capped: r.capped }
    }
}

impl IdOutput {
    pub fn text(&self) -> String {
        let w = self.witness.iter().map(usize::to_string).collect::<Vec<_>>().join(", ");
        let capped = if self.capped { " (capped)" } else { "" };
        format!("ID = {}, witness = [{w}]{capped}\n", self.id)
    }
}

#[derive(Debug, Serialize)]
pub struct TypesOutput {
    pub domain: Vec<usize>,
    pub count: usize,
    pub independent: bool,
    pub types: Vec<LitMap>,
}

#[derive(Debug, Serialize)]
pub struct CheckerOutput {
    pub membership: bool,
    pub consistency: bool,
    pub delta_agreement: bool,
    pub violation: Option<String>,
}

impl From<&ConfigCheck> for CheckerOutput {
    fn from(c: &ConfigCheck) -> Self {
        CheckerOutput {
            membership: c.membership,
            consistency: c.consistency,
            delta_agreement: c.delta_agreement,
            violation: c.violation.as_ref().map(describe_violation),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ConfigCertificate {
    #[serde(rename = "type")]
    pub base_type: LitMap,
    pub strategy: &'static str,
    pub k_sat: String,
    pub pairs: Vec<[usize; 2]>,
    pub size: usize,
    pub id: usize,
    pub bound_ok: bool,
    pub checker: CheckerOutput,
}

impl ConfigCertificate {
    pub fn new(
        config: &GoodConfiguration,
        check: &ConfigCheck,
        id: usize,
        bound_ok: bool,
        strategy: &'static str,
        k_sat: String,
    ) -> Self {
        ConfigCertificate {
            base_type: LitMap(config.base_type.clone()),
            strategy,
            k_sat,
            pairs: pairs(config),
            size: config.size(),
            id,
            bound_ok,
            checker: check.into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Budget {
    #[serde(rename = "2K")]
    pub added: usize,
    #[serde(rename = "2ID")]
    pub allowed: usize,
    pub ok: bool,
}

#[derive(Debug, Serialize)]
pub struct FormulaOutput {
    pub gamma: LitMap,
    pub domain: Vec<usize>,
    /// `ψ(b)` for every `b` in the domain.
    pub psi: LitMap,
    pub defines: bool,
}

impl FormulaOutput {
    pub fn new(s: &BipartiteStructure, formula: &DefiningFormula, target: &PhiType) -> Result<Self> {
        let psi = PhiType::from_literals(
            formula
                .domain
                .iter()
                .map(|&b| formula.eval(s, b).map(|v| (b, v)))
                .collect::<Result<Vec<_>>>()?,
        )?;
        Ok(FormulaOutput {
            gamma: LitMap(formula.gamma.clone()),
            domain: formula.domain.iter().map(|b| b.0).collect(),
            psi: LitMap(psi),
            defines: formula.defines(s, target)?,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct IsolationOutput {
    #[serde(rename = "type")]
    pub base_type: LitMap,
    pub extended: LitMap,
    pub subtype: LitMap,
    pub minimal: bool,
    pub method: &'static str,
    pub base_subtype: LitMap,
    pub config_pairs: Vec<[usize; 2]>,
    pub budget: Budget,
    pub defining_formula: FormulaOutput,
    pub diagnostic: Option<&'static str>,
}

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::Exhaustive => "exhaustive",
        Method::Greedy => "greedy",
    }
}

impl IsolationOutput {
    pub fn new(s: &BipartiteStructure, ext: &IsolatedExtension, formula: &DefiningFormula) -> Result<Self> {
        Ok(IsolationOutput {
            base_type: LitMap(ext.base_type.clone()),
            extended: LitMap(ext.extended.clone()),
            subtype: LitMap(ext.certificate.subtype.clone()),
            minimal: ext.certificate.minimal,
            method: method_name(ext.certificate.method),
            base_subtype: LitMap(ext.base_certificate.subtype.clone()),
            config_pairs: pairs(&ext.config),
            budget: Budget { added: ext.added, allowed: ext.allowed, ok: ext.budget_ok() },
            defining_formula: FormulaOutput::new(s, formula, &ext.extended)?,
            diagnostic: ext.diagnostic.map(|_| "saturation-deficit"),
        })
    }
}

#[derive(Debug, Serialize)]
pub struct EmbedOutput {
    pub element: usize,
    /// `ψ(B)` agrees with `φ(a; B)`.
    pub trace_defined: bool,
    pub certificate: IsolationOutput,
}

impl EmbedOutput {
    pub fn new(s: &BipartiteStructure, element: usize, e: &Embedding) -> Result<Self> {
        Ok(EmbedOutput {
            element,
            trace_defined: e.formula.defines(s, &e.extension.base_type)?,
            certificate: IsolationOutput::new(s, &e.extension, &e.formula)?,
        })
    }
}

/// One differential comparison.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct OracleReport {
    pub operation: String,
    pub instance: String,
    pub oracle: Value,
    pub subject: Value,
    pub agree: bool,
}

impl OracleReport {
    pub fn new(operation: impl Into<String>, instance: &str, oracle: Value, subject: Value) -> Self {
        let agree = oracle == subject;
        OracleReport { operation: operation.into(), instance: instance.to_owned(), oracle, subject, agree }
    }
}

/// Plain-text rendering of a JSON value as `path = value` lines.
pub fn render_text(value: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(map) if !map.is_empty() => {
                for (k, v) in map {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, v, out);
                }
            }
            Value::Array(items) if items.iter().any(|i| i.is_object()) => {
                for (i, v) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), v, out);
                }
            }
            other => {
                out.push_str(&format!("{prefix} = {other}\n"));
            }
        }
    }
    let mut out = String::new();
    walk("", value, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn literal_maps_are_numerically_ordered() {
        let p = PhiType::from_literals([(Param(10), true), (Param(2), false)]).unwrap();
        assert_eq!(serde_json::to_string(&LitMap(p)).unwrap(), r#"{"b2":0,"b10":1}"#);
    }

    #[test]
    fn budget_keys() {
        let b = Budget { added: 2, allowed: 4, ok: true };
        assert_eq!(serde_json::to_string(&b).unwrap(), r#"{"2K":2,"2ID":4,"ok":true}"#);
    }

    #[test]
    fn text_rendering() {
        let v = json!({"a": 1, "b": {"c": [1, 2]}, "d": [{"e": true}]});
        assert_eq!(render_text(&v), "a = 1\nb.c = [1,2]\nd[0].e = true\n");
    }

    #[test]
    fn oracle_report_agreement() {
        let r = OracleReport::new("vc", "abc", json!(2), json!(2));
        assert!(r.agree);
        assert!(!OracleReport::new("vc", "abc", json!(2), json!(1)).agree);
    }
}
