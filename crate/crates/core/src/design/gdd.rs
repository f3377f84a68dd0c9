use std::collections::HashMap;

use super::{CrdProfile, Profile, Resolution};
use crate::math::{binom, combinations, pow, ratio, subsets_of, tuples, Ratio};
use crate::{Error, Result};

/// `(u, v)`: the `v`-th point of group `u`, both 1-based.
pub type GddPoint = (u32, u32);

/// `m` groups of `q` points; each block meets each group at most once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDivisibleDesign {
    m: u32,
    q: u32,
    blocks: Vec<Vec<GddPoint>>,
    declared: Option<(usize, u64)>,
}

impl GroupDivisibleDesign {
    pub fn new(m: u32, q: u32, blocks: Vec<Vec<GddPoint>>) -> Result<Self> {
        let mut out = Vec::with_capacity(blocks.len());
        for (i, mut b) in blocks.into_iter().enumerate() {
            b.sort_unstable();
            if b.is_empty() {
                return Err(Error::invalid(format!("block {} is empty", i + 1)));
            }
            if b.iter().any(|&(u, v)| u == 0 || u > m || v == 0 || v > q) {
                return Err(Error::invalid(format!("block {} has a point outside the groups", i + 1)));
            }
            if b.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::invalid(format!("block {} meets a group twice", i + 1)));
            }
            out.push(b);
        }
        Ok(GroupDivisibleDesign { m, q, blocks: out, declared: None })
    }

    /// Attaches `(t, λ)` after checking it exhaustively.
    pub fn with_params(mut self, t: usize, lambda: u64) -> Result<Self> {
        match gdd_profile(&self, t)? {
            Profile::Uniform(l) if l == lambda => {
                self.declared = Some((t, lambda));
                Ok(self)
            }
            p => Err(Error::PreconditionFailed(format!("not a {t}-GDD of index {lambda} ({p:?})"))),
        }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn blocks(&self) -> &[Vec<GddPoint>] {
        &self.blocks
    }

    pub fn declared(&self) -> Option<(usize, u64)> {
        self.declared
    }

    pub fn block_size(&self) -> Option<usize> {
        let k = self.blocks.first()?.len();
        self.blocks.iter().all(|b| b.len() == k).then_some(k)
    }

    pub fn min_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Largest `t` with a uniform positive index.
    pub fn strength(&self) -> Option<(usize, u64)> {
        (1..=self.min_block_size()).rev().find_map(|t| match gdd_profile(self, t) {
            Ok(Profile::Uniform(l)) if l > 0 => Some((t, l)),
            _ => None,
        })
    }
}

/// Every `t`-set of points from `t` distinct groups, ordered lexicographically as point sequences.
pub fn trivial_gdd(m: usize, q: usize, t: usize) -> Result<GroupDivisibleDesign> {
    if !(1 < t && t < m) || q < 2 {
        return Err(Error::invalid(format!("trivial GDD needs 1 < t < m and q >= 2, got m={m} q={q} t={t}")));
    }
    let mut blocks: Vec<Vec<GddPoint>> = Vec::new();
    for groups in combinations(m, t) {
        for values in tuples(q, t) {
            blocks.push(groups.iter().zip(&values).map(|(&u, &v)| (u as u32 + 1, v as u32 + 1)).collect());
        }
    }
    blocks.sort();
    let mut g = GroupDivisibleDesign::new(m as u32, q as u32, blocks)?;
    g.declared = Some((t, 1));
    Ok(g)
}

/// Exhaustive count over every `i`-set of points drawn from `i` distinct groups.
pub fn gdd_profile(gdd: &GroupDivisibleDesign, i: usize) -> Result<Profile> {
    if i == 0 || i > gdd.min_block_size() {
        return Err(Error::invalid(format!("i={i} must lie in 1..=block size")));
    }
    let mut counts: HashMap<Vec<GddPoint>, u64> = HashMap::new();
    for b in gdd.blocks() {
        for s in subsets_of(b, i) {
            *counts.entry(s).or_insert(0) += 1;
        }
    }
    let expected = binom(u64::from(gdd.m()), i as u64) * pow(u64::from(gdd.q()), i as u64);
    if counts.len() as u128 != expected {
        return Ok(Profile::Nonuniform);
    }
    let mut it = counts.values();
    let first = *it.next().unwrap_or(&0);
    Ok(if it.all(|&c| c == first) { Profile::Uniform(first) } else { Profile::Nonuniform })
}

/// `λ q^{t-i} C(m-i, t-i) / C(k-i, t-i)`.
pub fn gdd_lambda_closed(m: usize, q: usize, k: usize, lambda: u64, t: usize, i: usize) -> Result<Ratio> {
    if i > t {
        return Err(Error::OutOfRange(format!("i={i} exceeds t={t}")));
    }
    if t > k || k > m {
        return Err(Error::invalid(format!("need t <= k <= m, got t={t} k={k} m={m}")));
    }
    let num = u128::from(lambda) * pow(q as u64, (t - i) as u64) * binom((m - i) as u64, (t - i) as u64);
    Ok(ratio(num, binom((k - i) as u64, (t - i) as u64)))
}

/// Dual of a cross resolvable design: group `u` is class `u`, point `(u, v)` is the `v`-th block of
/// class `u`, and each original point becomes the block of the blocks through it.
pub fn gdd_from_crd(res: &Resolution, profile: &CrdProfile) -> Result<GroupDivisibleDesign> {
    let (t, lambda) = profile
        .first()
        .ok_or_else(|| Error::PreconditionFailed("resolution is not cross resolvable".into()))?;
    if res.r() < 2 {
        return Err(Error::PreconditionFailed("a single class has no cross intersections".into()));
    }
    let v = res.design().v();
    let mut blocks = vec![Vec::with_capacity(res.r()); v];
    for (u, class) in res.classes().iter().enumerate() {
        for (pos, &bi) in class.iter().enumerate() {
            for &x in &res.design().blocks()[bi] {
                blocks[x as usize - 1].push((u as u32 + 1, pos as u32 + 1));
            }
        }
    }
    let q = res.classes()[0].len() as u32;
    let mut g = GroupDivisibleDesign::new(res.r() as u32, q, blocks)?;
    g.declared = Some((t, lambda));
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn trivial_gdd_order_and_count() {
        let g = trivial_gdd(3, 2, 2).unwrap();
        assert_eq!(g.blocks().len(), 12);
        assert_eq!(g.blocks()[0], vec![(1, 1), (2, 1)]);
        assert_eq!(g.blocks()[1], vec![(1, 1), (2, 2)]);
        assert_eq!(g.blocks()[2], vec![(1, 1), (3, 1)]);
        assert_eq!(g.blocks()[4], vec![(1, 2), (2, 1)]);
        assert_eq!(trivial_gdd(4, 2, 3).unwrap().blocks().len(), 32);
        assert!(trivial_gdd(3, 2, 3).is_err());
        assert!(trivial_gdd(3, 1, 2).is_err());
    }

    #[test]
    fn profiles() {
        let g = fixtures::gdd_from_pairs();
        assert_eq!(gdd_profile(&g, 1), Ok(Profile::Uniform(2)));
        assert_eq!(gdd_profile(&g, 2), Ok(Profile::Uniform(1)));
        assert_eq!(gdd_lambda_closed(3, 2, 3, 1, 2, 1), Ok(Ratio::from_integer(2)));
        assert_eq!(gdd_profile(&trivial_gdd(3, 3, 2).unwrap(), 2), Ok(Profile::Uniform(1)));
        assert!(matches!(gdd_lambda_closed(3, 2, 3, 1, 2, 3), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn rejects_blocks_meeting_a_group_twice() {
        assert!(GroupDivisibleDesign::new(2, 2, vec![vec![(1, 1), (1, 2)]]).is_err());
    }

    #[test]
    fn non_crd_is_rejected() {
        let res = fixtures::six_point_resolution();
        let p = crate::design::crd_profile(&res);
        assert!(matches!(gdd_from_crd(&res, &p), Err(Error::PreconditionFailed(_))));
    }
}
