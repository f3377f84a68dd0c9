//! Block designs and the structures derived from them.

mod gdd;
mod oa;
mod resolvable;

pub use gdd::{gdd_from_crd, gdd_lambda_closed, gdd_profile, trivial_gdd, GddPoint, GroupDivisibleDesign};
pub use oa::{
    covering_check, crd_from_oa, linear_code_oa, oa_min_distance, oa_profile, proper_oa, reed_solomon_oa,
    OaProfile, OrthogonalArray,
};
pub use resolvable::{crd_profile, resolvable_from_code, CrdProfile, Resolution};

use std::collections::HashMap;

use crate::math::{binom, is_sorted_subset, ratio, subsets_of, Ratio};
use crate::{Error, Result};

/// Declared `t-(v,k,λ)` parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DesignParams {
    pub t: usize,
    pub v: usize,
    pub k: usize,
    pub lambda: u64,
}

impl std::fmt::Display for DesignParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-({},{},{})", self.t, self.v, self.k, self.lambda)
    }
}

/// Result of an exhaustive incidence count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Uniform(u64),
    Nonuniform,
}

impl Profile {
    pub fn uniform(self) -> Option<u64> {
        match self {
            Profile::Uniform(l) => Some(l),
            Profile::Nonuniform => None,
        }
    }
}

/// Points are `1..=v`; blocks are sorted and may repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    v: usize,
    blocks: Vec<Vec<u32>>,
    declared: Option<DesignParams>,
    zero_based: bool,
}

impl Design {
    pub fn new(v: usize, blocks: Vec<Vec<u32>>) -> Result<Self> {
        let mut out = Vec::with_capacity(blocks.len());
        for (i, mut b) in blocks.into_iter().enumerate() {
            b.sort_unstable();
            if b.is_empty() {
                return Err(Error::invalid(format!("block {} is empty", i + 1)));
            }
            if b.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("block {} repeats a point", i + 1)));
            }
            if b[0] == 0 || b[b.len() - 1] as usize > v {
                return Err(Error::invalid(format!("block {} has a point outside 1..={v}", i + 1)));
            }
            out.push(b);
        }
        Ok(Design { v, blocks: out, declared: None, zero_based: false })
    }

    /// Attaches `t-(v,k,λ)` after checking it exhaustively.
    pub fn with_params(mut self, t: usize, lambda: u64) -> Result<Self> {
        let k = self
            .block_size()
            .ok_or_else(|| Error::invalid("declared parameters need equal block sizes"))?;
        match design_profile(&self, t)? {
            Profile::Uniform(l) if l == lambda => {
                self.declared = Some(DesignParams { t, v: self.v, k, lambda });
                Ok(self)
            }
            p => Err(Error::PreconditionFailed(format!(
                "design is not a {t}-({},{k},{lambda}) design ({p:?})",
                self.v
            ))),
        }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn points(&self) -> Vec<u32> {
        (1..=self.v as u32).collect()
    }

    pub fn declared(&self) -> Option<DesignParams> {
        self.declared
    }

    /// True when the design was read from 0-based text.
    pub fn zero_based(&self) -> bool {
        self.zero_based
    }

    pub fn set_zero_based(&mut self, on: bool) {
        self.zero_based = on;
    }

    /// Common block size, if all blocks agree.
    pub fn block_size(&self) -> Option<usize> {
        let k = self.blocks.first()?.len();
        self.blocks.iter().all(|b| b.len() == k).then_some(k)
    }

    pub fn min_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Index pairs of repeated blocks; nothing is removed.
    pub fn duplicate_blocks(&self) -> Vec<(usize, usize)> {
        let mut seen: HashMap<&[u32], usize> = HashMap::new();
        let mut out = Vec::new();
        for (i, b) in self.blocks.iter().enumerate() {
            if let Some(&j) = seen.get(b.as_slice()) {
                out.push((j, i));
            } else {
                seen.insert(b, i);
            }
        }
        out
    }

    /// `incidence[x-1][i]` is true when point `x` lies in block `i`.
    pub fn incidence(&self) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; self.blocks.len()]; self.v];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                m[x as usize - 1][i] = true;
            }
        }
        m
    }

    /// Largest `t` for which the design is a uniform `t`-design, with its λ.
    pub fn strength(&self) -> Option<(usize, u64)> {
        let k = self.min_block_size();
        (1..=k).rev().find_map(|t| match design_profile(self, t) {
            Ok(Profile::Uniform(l)) if l > 0 => Some((t, l)),
            _ => None,
        })
    }
}

/// All `k`-subsets of `[n]` in lexicographic order.
pub fn complete_design(n: usize, k: usize) -> Result<Design> {
    if k == 0 || k > n {
        return Err(Error::invalid(format!("complete design needs 1 <= k <= n, got n={n} k={k}")));
    }
    let points: Vec<u32> = (1..=n as u32).collect();
    Design::new(n, subsets_of(&points, k).collect())
}

/// Exhaustive `t`-subset count; every `t`-set of points must lie in the same number of blocks.
pub fn design_profile(design: &Design, t: usize) -> Result<Profile> {
    if t > design.min_block_size() {
        return Err(Error::invalid(format!("t={t} exceeds the block size")));
    }
    let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
    for b in design.blocks() {
        for s in subsets_of(b, t) {
            *counts.entry(s).or_insert(0) += 1;
        }
    }
    let expected = binom(design.v() as u64, t as u64);
    if counts.len() as u128 != expected {
        return Ok(if counts.is_empty() { Profile::Uniform(0) } else { Profile::Nonuniform });
    }
    let mut it = counts.values();
    let first = *it.next().unwrap_or(&0);
    Ok(if it.all(|&c| c == first) { Profile::Uniform(first) } else { Profile::Nonuniform })
}

/// Number of blocks containing all of `contain` and none of `avoid`.
pub fn block_count(design: &Design, contain: &[u32], avoid: &[u32]) -> Result<u64> {
    let v = design.v() as u32;
    if contain.iter().chain(avoid).any(|&x| x == 0 || x > v) {
        return Err(Error::invalid("point outside the design"));
    }
    if contain.iter().any(|x| avoid.contains(x)) {
        return Err(Error::invalid("contain and avoid sets overlap"));
    }
    let mut c = contain.to_vec();
    c.sort_unstable();
    Ok(design
        .blocks()
        .iter()
        .filter(|b| is_sorted_subset(&c, b) && avoid.iter().all(|x| b.binary_search(x).is_err()))
        .count() as u64)
}

/// Blocks of a `t-(v,k,λ)` design through `i` given points and missing `j` others.
pub fn lambda_closed_form(v: usize, k: usize, lambda: u64, t: usize, i: usize, j: usize) -> Result<Ratio> {
    if i + j > t {
        return Err(Error::OutOfRange(format!("i+j={} exceeds t={t}", i + j)));
    }
    if t > k || k > v {
        return Err(Error::invalid(format!("need t <= k <= v, got t={t} k={k} v={v}")));
    }
    let num = u128::from(lambda) * binom((v - i - j) as u64, (k - i) as u64);
    Ok(ratio(num, binom((v - t) as u64, (k - t) as u64)))
}

/// Swap points and blocks: point `i` of the dual is block `i`, block `x` of the dual is the set of
/// blocks through point `x`.
pub fn dual_design(design: &Design) -> Result<Design> {
    let blocks: Vec<Vec<u32>> = design
        .incidence()
        .iter()
        .map(|row| row.iter().enumerate().filter(|(_, &on)| on).map(|(i, _)| i as u32 + 1).collect())
        .collect();
    if let Some(x) = blocks.iter().position(Vec::is_empty) {
        return Err(Error::invalid(format!("point {} lies in no block", x + 1)));
    }
    Design::new(design.b(), blocks)
}
