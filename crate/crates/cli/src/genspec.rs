//! Inline generator specs (`--gen eqrel:1,2,3`) and the metadata sidecar.
//!
//! | spec | family |
//! |------|--------|
//! | `shattered:K` | all sign patterns over `K` columns |
//! | `eqrel:P1,P2,…[/S1,S2,…][:compact]` | equivalence relation, `P` base picks per class, class sizes `S` (default `P+1`) |
//! | `order:N[/B1,B2,…][:nofill]`, `chain:…` | `a < b` on `0..N`, base defaults to the even points |
//! | `random[:intervals\|:unionsK][:XxY]` | seeded interval families, default `12x6` |

use std::fmt;
use std::str::FromStr;

use philab_core::generators::{
    gen_eqrel, gen_linear_order, gen_random_bounded, gen_shattered, ElemOrigin, EqRelSpec, Generated, ParamOrigin,
    RandomFamily,
};
use philab_core::{Limits, Result as CoreResult};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::format::serialize_structure;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenSpec {
    Shattered(usize),
    EqRel(EqRelSpec),
    Order { points: usize, base: Vec<usize>, fill_gaps: bool },
    Random { family: RandomFamily, x_size: usize, y_size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid generator spec `{spec}`: {reason}")]
pub struct SpecError {
    pub spec: String,
    pub reason: String,
}

fn list(text: &str) -> Option<Vec<usize>> {
    if text.is_empty() {
        return Some(Vec::new());
    }
    text.split(',').map(|t| t.trim().parse().ok()).collect()
}

impl FromStr for GenSpec {
    type Err = SpecError;

    fn from_str(spec: &str) -> Result<Self, SpecError> {
        let fail = |reason: &str| SpecError { spec: spec.to_owned(), reason: reason.to_owned() };
        let mut parts = spec.split(':');
        let family = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        match family {
            "shattered" => match rest.as_slice() {
                [k] => k.parse().map(GenSpec::Shattered).map_err(|_| fail("expected shattered:K")),
                _ => Err(fail("expected shattered:K")),
            },
            "eqrel" => {
                let (body, compact) = match rest.as_slice() {
                    [body] => (*body, false),
                    [body, "compact"] => (*body, true),
                    _ => return Err(fail("expected eqrel:PICKS[/SIZES][:compact]")),
                };
                let (picks, sizes) = match body.split_once('/') {
                    Some((p, s)) => (p, Some(s)),
                    None => (body, None),
                };
                let b_picks = list(picks).filter(|p| !p.is_empty()).ok_or_else(|| fail("bad pick list"))?;
                let class_sizes = match sizes {
                    Some(s) => list(s).ok_or_else(|| fail("bad class size list"))?,
                    None => b_picks.iter().map(|n| n + 1).collect(),
                };
                Ok(GenSpec::EqRel(EqRelSpec { class_sizes, b_picks, compact }))
            }
            "order" | "chain" => {
                let (body, fill_gaps) = match rest.as_slice() {
                    [body] => (*body, true),
                    [body, "nofill"] => (*body, false),
                    _ => return Err(fail("expected order:N[/BASE][:nofill]")),
                };
                let (n, base) = match body.split_once('/') {
                    Some((n, b)) => (n, Some(b)),
                    None => (body, None),
                };
                let points: usize = n.parse().map_err(|_| fail("bad point count"))?;
                let base = match base {
                    Some(b) => list(b).ok_or_else(|| fail("bad base list"))?,
                    None => (0..points).step_by(2).collect(),
                };
                Ok(GenSpec::Order { points, base, fill_gaps })
            }
            "random" => {
                let mut family = RandomFamily::Intervals;
                let (mut x_size, mut y_size) = (12, 6);
                for part in rest {
                    if part == "intervals" {
                        family = RandomFamily::Intervals;
                    } else if let Some(k) = part.strip_prefix("unions") {
                        family = RandomFamily::Unions(k.parse().map_err(|_| fail("expected unionsK"))?);
                    } else if let Some((x, y)) = part.split_once('x') {
                        x_size = x.parse().map_err(|_| fail("bad X size"))?;
                        y_size = y.parse().map_err(|_| fail("bad Y size"))?;
                    } else {
                        return Err(fail("expected random[:intervals|:unionsK][:XxY]"));
                    }
                }
                Ok(GenSpec::Random { family, x_size, y_size })
            }
            _ => Err(fail("unknown family")),
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        match self {
            GenSpec::Shattered(k) => write!(f, "shattered:{k}"),
            GenSpec::EqRel(s) => {
                write!(f, "eqrel:{}/{}", join(&s.b_picks), join(&s.class_sizes))?;
                if s.compact {
                    write!(f, ":compact")?;
                }
                Ok(())
            }
            GenSpec::Order { points, base, fill_gaps } => {
                write!(f, "order:{points}/{}", join(base))?;
                if !fill_gaps {
                    write!(f, ":nofill")?;
                }
                Ok(())
            }
            GenSpec::Random { family, x_size, y_size } => match family {
                RandomFamily::Intervals => write!(f, "random:intervals:{x_size}x{y_size}"),
                RandomFamily::Unions(k) => write!(f, "random:unions{k}:{x_size}x{y_size}"),
            },
        }
    }
}

impl GenSpec {
    pub fn is_seeded(&self) -> bool {
        matches!(self, GenSpec::Random { .. })
    }

    pub fn build(&self, seed: u64, limits: &Limits) -> CoreResult<Generated> {
        match self {
            GenSpec::Shattered(k) => gen_shattered(*k, limits),
            GenSpec::EqRel(spec) => gen_eqrel(spec, limits),
            GenSpec::Order { points, base, fill_gaps } => gen_linear_order(*points, base, *fill_gaps),
            GenSpec::Random { family, x_size, y_size } => gen_random_bounded(seed, *x_size, *y_size, *family, limits),
        }
    }

    /// Human-readable instance label, including the seed when it matters.
    pub fn label(&self, seed: u64) -> String {
        if self.is_seeded() {
            format!("{self} seed={seed}")
        } else {
            self.to_string()
        }
    }
}

/// Inclusive seed range `a..b`, or a single seed.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>, SpecError> {
    let fail = || SpecError { spec: text.to_owned(), reason: "expected SEED or FIRST..LAST".into() };
    match text.split_once("..") {
        Some((a, b)) => {
            let (a, b): (u64, u64) = (a.parse().map_err(|_| fail())?, b.parse().map_err(|_| fail())?);
            if a > b {
                return Err(fail());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![text.parse().map_err(|_| fail())?]),
    }
}

/// Hex SHA-256 of the canonical structure text.
pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamMeta {
    Point(usize),
    Coordinate(usize),
    Triple([usize; 3]),
    Intervals(Vec<[usize; 2]>),
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElemMeta {
    Point(usize),
    Pattern(usize),
    Member { class: usize, index: usize, in_base: bool },
}

/// Maps every compiled row and column back to the model it came from.
#[derive(Debug, Serialize)]
pub struct Sidecar {
    pub family: &'static str,
    pub spec: String,
    pub seed: Option<u64>,
    pub digest: String,
    pub params: Vec<ParamMeta>,
    pub elements: Vec<ElemMeta>,
}

impl Sidecar {
    pub fn new(spec: &GenSpec, seed: u64, generated: &Generated) -> Self {
        Sidecar {
            family: generated.family,
            spec: spec.to_string(),
            seed: spec.is_seeded().then_some(seed),
            digest: digest(&serialize_structure(&generated.structure)),
            params: generated
                .params
                .iter()
                .map(|p| match p {
                    ParamOrigin::Point(i) => ParamMeta::Point(*i),
                    ParamOrigin::Coordinate(i) => ParamMeta::Coordinate(*i),
                    ParamOrigin::Triple { y, z, w } => ParamMeta::Triple([*y, *z, *w]),
                    ParamOrigin::Intervals(v) => ParamMeta::Intervals(v.iter().map(|&(lo, hi)| [lo, hi]).collect()),
                })
                .collect(),
            elements: generated
                .elements
                .iter()
                .map(|e| match e {
                    ElemOrigin::Point(i) => ElemMeta::Point(*i),
                    ElemOrigin::Pattern(i) => ElemMeta::Pattern(*i),
                    ElemOrigin::Member { class, index, in_base } => {
                        ElemMeta::Member { class: *class, index: *index, in_base: *in_base }
                    }
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_displays() {
        let cases = [
            ("shattered:3", "shattered:3"),
            ("eqrel:1,2,3", "eqrel:1,2,3/2,3,4"),
            ("eqrel:1,0/2,1:compact", "eqrel:1,0/2,1:compact"),
            ("chain:5", "order:5/0,2,4"),
            ("order:7/0,3,6:nofill", "order:7/0,3,6:nofill"),
            ("random", "random:intervals:12x6"),
            ("random:unions2:10x4", "random:unions2:10x4"),
        ];
        for (input, shown) in cases {
            let spec: GenSpec = input.parse().unwrap();
            assert_eq!(spec.to_string(), shown);
            assert_eq!(shown.parse::<GenSpec>().unwrap(), spec);
        }
        for bad in ["", "cube:3", "shattered", "shattered:x", "eqrel:", "eqrel:1:big", "random:spheres"] {
            assert!(bad.parse::<GenSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn seeds() {
        assert_eq!(parse_seeds("0..3").unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(parse_seeds("7").unwrap(), vec![7]);
        assert!(parse_seeds("3..1").is_err());
        assert!(parse_seeds("a..b").is_err());
    }

    #[test]
    fn sidecar_tracks_triples() {
        let spec: GenSpec = "eqrel:1".parse().unwrap();
        let g = spec.build(0, &Limits::default()).unwrap();
        let meta = Sidecar::new(&spec, 0, &g);
        assert_eq!(meta.params.len(), 8);
        assert!(meta.seed.is_none());
        assert_eq!(meta.digest.len(), 64);
        let json = serde_json::to_string(&meta.params[1]).unwrap();
        assert_eq!(json, r#"{"triple":[0,0,1]}"#);
    }
}
