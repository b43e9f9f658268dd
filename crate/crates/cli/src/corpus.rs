//! The regression corpus: fixed, small instances from every generator family.

use philab_core::generators::{gen_eqrel, EqRelSpec};
use philab_core::{BipartiteStructure, Elem, Limits, PhiType, Result};

use crate::genspec::GenSpec;

#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub structure: BipartiteStructure,
}

impl Instance {
    pub fn from_spec(spec: &GenSpec, seed: u64, limits: &Limits) -> Result<Self> {
        Ok(Instance { label: spec.label(seed), structure: spec.build(seed, limits)?.structure })
    }
}

/// 100 seeds of each random family plus the curated families, every instance
/// with `|X| ≤ 64` and `|Y| ≤ 8`.
pub fn regression_corpus(limits: &Limits) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for family in ["random:intervals", "random:unions2"] {
        let spec: GenSpec = family.parse().expect("corpus spec");
        for seed in 0..100 {
            out.push(Instance::from_spec(&spec, seed, limits)?);
        }
    }
    let fixed = [
        "shattered:0",
        "shattered:1",
        "shattered:2",
        "shattered:3",
        "shattered:4",
        "order:5",
        "order:5:nofill",
        "order:6/1,4",
        "order:4/0,1,2,3",
        "order:7/0,3,6",
        "eqrel:1,0/2,1:compact",
        "eqrel:1,0/2,2:compact",
        "eqrel:2,0/3,1:compact",
        "eqrel:2/3:compact",
        "eqrel:1/2",
    ];
    for text in fixed {
        let spec: GenSpec = text.parse().expect("corpus spec");
        out.push(Instance::from_spec(&spec, 0, limits)?);
    }
    Ok(out)
}

/// For each `n`: a target class of size `n + 1` with `n` members in `B`, next
/// to a class of size 2 with one member in `B`. Element `n` is the target's
/// non-base member.
pub fn growth_instance(n: usize, limits: &Limits) -> Result<(Instance, PhiType)> {
    let spec = EqRelSpec { class_sizes: vec![n + 1, 2], b_picks: vec![n, 1], compact: false };
    let structure = gen_eqrel(&spec, limits)?.structure;
    let p = structure.trace(Elem(n), structure.base_set())?;
    let label = GenSpec::EqRel(spec).label(0);
    Ok((Instance { label, structure }, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shape() {
        let corpus = regression_corpus(&Limits::default()).unwrap();
        assert!(corpus.len() >= 200);
        assert!(corpus.iter().all(|i| i.structure.num_elements() <= 64 && i.structure.num_params() <= 8));
        let small = corpus.iter().filter(|i| i.structure.num_params() <= 6).count();
        assert!(small >= 200);
    }

    #[test]
    fn growth_target_is_outside_base() {
        for n in 1..=3 {
            let (inst, p) = growth_instance(n, &Limits::default()).unwrap();
            assert_eq!(p.len(), 2 * (n + 1));
            let realizers = inst.structure.realizers(&p).unwrap();
            assert_eq!(realizers.iter().collect::<Vec<_>>(), vec![n]);
        }
    }
}
