//! Curated structure families.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{guard, Error, Result};
use crate::limits::Limits;
use crate::structure::BipartiteStructure;

/// Where a compiled parameter comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamOrigin {
    /// A point of a linear order.
    Point(usize),
    /// Coordinate `index` of the shattered cube.
    Coordinate(usize),
    /// A model triple `(y, z, w)` of the equivalence-relation family.
    Triple { y: usize, z: usize, w: usize },
    /// A union of closed integer intervals `[lo, hi]`.
    Intervals(Vec<(usize, usize)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElemOrigin {
    Point(usize),
    /// Sign pattern over the coordinates, most significant first.
    Pattern(usize),
    /// Member `index` of E-class `class`.
    Member { class: usize, index: usize, in_base: bool },
}

/// A generated structure with provenance for every row and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub family: &'static str,
    pub structure: BipartiteStructure,
    pub params: Vec<ParamOrigin>,
    pub elements: Vec<ElemOrigin>,
}

/// An equivalence relation given by class sizes, with the first
/// `b_picks[i]` members of class `i` placed in `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqRelSpec {
    pub class_sizes: Vec<usize>,
    pub b_picks: Vec<usize>,
    /// Keep only the triples in `Θ` as columns instead of all of `M³`.
    pub compact: bool,
}

impl EqRelSpec {
    /// Classes of size `n + 1` holding `n` base members each.
    pub fn with_picks(picks: &[usize]) -> Self {
        EqRelSpec {
            class_sizes: picks.iter().map(|n| n + 1).collect(),
            b_picks: picks.to_vec(),
            compact: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.class_sizes.len() != self.b_picks.len() {
            return Err(Error::InvalidSpec("class_sizes and b_picks differ in length".into()));
        }
        if let Some(i) = (0..self.class_sizes.len()).find(|&i| self.b_picks[i] > self.class_sizes[i]) {
            return Err(Error::InvalidSpec(format!("class {i} picks more members than it has")));
        }
        if !(0..self.class_sizes.len()).any(|i| self.b_picks[i] < self.class_sizes[i]) {
            return Err(Error::InvalidSpec("every element is in B".into()));
        }
        Ok(())
    }
}

/// `φ(x; y, z, w) = (z = w → x = y) ∧ (z ≠ w → E(x, y))` over all triples.
///
/// For each base member `b` the base set holds `(b, b, b)`, which reads
/// `x = b`, and `(b, b, b′)` with `b′ ≠ b`, which reads `E(x, b)`. `Θ` adds the
/// same two triples for members of classes without base members, so no class
/// gains base-like parameters it did not already have.
pub fn gen_eqrel(spec: &EqRelSpec, limits: &Limits) -> Result<Generated> {
    spec.validate()?;
    let mut class_of = Vec::new();
    let mut elements = Vec::new();
    let mut base_members = Vec::new();
    let mut fresh_members = Vec::new();
    for (class, (&size, &picks)) in spec.class_sizes.iter().zip(&spec.b_picks).enumerate() {
        for index in 0..size {
            let e = class_of.len();
            class_of.push(class);
            let in_base = index < picks;
            elements.push(ElemOrigin::Member { class, index, in_base });
            if in_base {
                base_members.push(e);
            } else if picks == 0 {
                fresh_members.push(e);
            }
        }
    }
    let m = class_of.len();
    let eval = |x: usize, (y, z, w): (usize, usize, usize)| {
        if z == w {
            x == y
        } else {
            class_of[x] == class_of[y]
        }
    };
    let coded = |e: usize| {
        let mut v = alloc::vec![(e, e, e)];
        if m > 1 {
            v.push((e, e, (e + 1) % m));
        }
        v
    };
    let base_triples: Vec<(usize, usize, usize)> = base_members.iter().flat_map(|&b| coded(b)).collect();
    let fresh_triples: Vec<(usize, usize, usize)> = fresh_members.iter().flat_map(|&e| coded(e)).collect();

    let triples: Vec<(usize, usize, usize)> = if spec.compact {
        base_triples.iter().chain(&fresh_triples).copied().collect()
    } else {
        guard("generated parameters", (m as u128).pow(3), limits.generated_params)?;
        (0..m)
            .flat_map(|y| (0..m).flat_map(move |z| (0..m).map(move |w| (y, z, w))))
            .collect()
    };
    let index_of = |t: &(usize, usize, usize)| triples.iter().position(|u| u == t).expect("triple compiled");
    let base: Vec<usize> = base_triples.iter().map(index_of).collect();
    let mut theta = base.clone();
    theta.extend(fresh_triples.iter().map(index_of));
    let structure =
        BipartiteStructure::from_fn(m, triples.len(), |x, j| eval(x, triples[j]), &base, Some(&theta))?;
    Ok(Generated {
        family: "eqrel",
        structure,
        params: triples
            .iter()
            .map(|&(y, z, w)| ParamOrigin::Triple { y, z, w })
            .collect(),
        elements,
    })
}

/// `φ(a; b) = a < b` on `0..points`.
pub fn gen_linear_order(points: usize, b_indices: &[usize], fill_gaps: bool) -> Result<Generated> {
    if points == 0 {
        return Err(Error::InvalidSpec("a linear order needs at least one point".into()));
    }
    let theta = (!fill_gaps).then_some(b_indices);
    let structure = BipartiteStructure::from_fn(points, points, |a, b| a < b, b_indices, theta)?;
    Ok(Generated {
        family: "order",
        structure,
        params: (0..points).map(ParamOrigin::Point).collect(),
        elements: (0..points).map(ElemOrigin::Point).collect(),
    })
}

/// All `2^k` sign patterns over `k` columns; `B = Y`, `Θ = ALL`.
pub fn gen_shattered(k: usize, limits: &Limits) -> Result<Generated> {
    guard("shattered dimension", k as u128, limits.shattered_k)?;
    let all: Vec<usize> = (0..k).collect();
    let structure =
        BipartiteStructure::from_fn(1 << k, k, |a, b| (a >> (k - 1 - b)) & 1 == 1, &all, None)?;
    Ok(Generated {
        family: "shattered",
        structure,
        params: (0..k).map(ParamOrigin::Coordinate).collect(),
        elements: (0..1 << k).map(ElemOrigin::Pattern).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomFamily {
    /// One interval per parameter.
    Intervals,
    /// A union of this many intervals per parameter.
    Unions(usize),
}

/// Points `0..x_size` on a line against `y_size` random interval unions.
/// Each parameter joins `B` with probability one half; `Θ = Y`.
pub fn gen_random_bounded(
    seed: u64,
    x_size: usize,
    y_size: usize,
    family: RandomFamily,
    limits: &Limits,
) -> Result<Generated> {
    if x_size == 0 {
        return Err(Error::InvalidSpec("x_size must be positive".into()));
    }
    guard("generated parameters", y_size as u128, limits.generated_params)?;
    let pieces = match family {
        RandomFamily::Intervals => 1,
        RandomFamily::Unions(k) if k > 0 => k,
        RandomFamily::Unions(_) => return Err(Error::InvalidSpec("unions need k > 0".into())),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = Vec::with_capacity(y_size);
    let mut base = Vec::new();
    for j in 0..y_size {
        let intervals: Vec<(usize, usize)> = (0..pieces)
            .map(|_| {
                let lo = rng.random_range(0..x_size);
                let hi = rng.random_range(lo..x_size);
                (lo, hi)
            })
            .collect();
        if rng.random_bool(0.5) {
            base.push(j);
        }
        params.push(intervals);
    }
    let structure = BipartiteStructure::from_fn(
        x_size,
        y_size,
        |a, b| params[b].iter().any(|&(lo, hi)| lo <= a && a <= hi),
        &base,
        None,
    )?;
    Ok(Generated {
        family: match family {
            RandomFamily::Intervals => "intervals",
            RandomFamily::Unions(_) => "unions",
        },
        structure,
        params: params.into_iter().map(ParamOrigin::Intervals).collect(),
        elements: (0..x_size).map(ElemOrigin::Point).collect(),
    })
}
