//! Schemes whose users are the blocks of a t-design and whose caches are its points.

use std::collections::HashMap;

use super::{exact_div, AccessTopology, PlacementArray, SchemeBundle, SchemeMetrics};
use crate::array::{CodedArray, SchemeLabel, SenderMap};
use crate::design::{design_profile, Design, Profile};
use crate::math::{binom, combinations, is_sorted_subset, ratio, sorted_intersection_len, subsets_of, Ratio};
use crate::{Error, Result};

/// How far each subpacket is split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TdesignVariant {
    /// Split width `t - i`, for `1 <= i <= t - 1`.
    Standard,
    /// Split width `t - 1`, for `1 <= i <= min(t, k - t + 1)`.
    Wide,
}

impl TdesignVariant {
    fn width(self, t: usize, i: usize) -> usize {
        match self {
            TdesignVariant::Standard => t - i,
            TdesignVariant::Wide => t - 1,
        }
    }

    fn check(self, k: usize, t: usize, i: usize) -> Result<()> {
        let max = match self {
            TdesignVariant::Standard => t.saturating_sub(1),
            TdesignVariant::Wide => t.min((k + 1).saturating_sub(t)),
        };
        if i == 0 || i > max || t > k {
            return Err(Error::invalid(format!("i={i} outside 1..={max} for t={t}, k={k} ({self:?})")));
        }
        Ok(())
    }
}

struct Setup {
    points: Vec<u32>,
    splits: Vec<Vec<usize>>,
}

fn setup(design: &Design, t: usize, i: usize, variant: TdesignVariant) -> Result<Setup> {
    let k = design.block_size().ok_or_else(|| Error::invalid("blocks must share one size"))?;
    variant.check(k, t, i)?;
    match design_profile(design, t)? {
        Profile::Uniform(l) if l > 0 => {}
        p => return Err(Error::PreconditionFailed(format!("design is not a {t}-design ({p:?})"))),
    }
    Ok(Setup { points: design.points(), splits: combinations(k, variant.width(t, i)).collect() })
}

/// Rows `(D, T)`: `D` an `i`-subset of the points, `T` a `width`-subset of block positions. Cache
/// `x` stores row `(D, T)` iff `x ∈ D`.
pub fn tdesign_placement(design: &Design, t: usize, i: usize, variant: TdesignVariant) -> Result<PlacementArray> {
    let st = setup(design, t, i, variant)?;
    let v = design.v();
    let mut stars = Vec::new();
    for d in subsets_of(&st.points, i) {
        for _ in &st.splits {
            stars.extend((1..=v as u32).map(|x| d.contains(&x)));
        }
    }
    PlacementArray::new(stars.len() / v, v, stars)
}

fn sender(design: &Design, t: usize, variant: TdesignVariant, set: &[u32]) -> Option<usize> {
    design.blocks().iter().position(|b| match variant {
        TdesignVariant::Standard => is_sorted_subset(set, b),
        TdesignVariant::Wide => sorted_intersection_len(set, b) >= t,
    })
}

/// Cell `((D, T), A)` is a star iff `A` meets `D`; otherwise it carries `D ∪ A(T)` with its
/// occurrence number counted row-major over the rows sharing `D`.
pub fn tdesign_delivery(
    design: &Design,
    t: usize,
    i: usize,
    variant: TdesignVariant,
) -> Result<(CodedArray, SenderMap)> {
    let st = setup(design, t, i, variant)?;
    let blocks = design.blocks();
    let mut labels = Vec::new();
    let mut rows = 0;
    for d in subsets_of(&st.points, i) {
        let mut seen: HashMap<Vec<u32>, u32> = HashMap::new();
        for split in &st.splits {
            rows += 1;
            for b in blocks {
                if d.iter().any(|x| b.binary_search(x).is_ok()) {
                    labels.push(None);
                    continue;
                }
                let mut set: Vec<u32> = d.iter().copied().chain(split.iter().map(|&p| b[p])).collect();
                set.sort_unstable();
                let n = seen.entry(set.clone()).or_insert(0);
                *n += 1;
                labels.push(Some(SchemeLabel::Subset { points: set, occurrence: *n }));
            }
        }
    }
    let arr = CodedArray::from_labels(rows, blocks.len(), labels)?;
    let mut phi = Vec::with_capacity(arr.registry().len());
    for id in 1..=arr.registry().len() as u32 {
        let Some(SchemeLabel::Subset { points, .. }) = arr.registry().get(id) else { unreachable!() };
        let c = sender(design, t, variant, points).ok_or_else(|| {
            Error::ConstructionUnsupported(format!("no block can send {}", arr.registry().get(id).unwrap()))
        })?;
        phi.push(c);
    }
    Ok((arr, SenderMap::new(phi)))
}

/// Placement, topology (`B_k` = block `k`), delivery and sender map, all checked.
pub fn tdesign_scheme(design: &Design, t: usize, i: usize, variant: TdesignVariant) -> Result<SchemeBundle> {
    let placement = tdesign_placement(design, t, i, variant)?;
    let (delivery, phi) = tdesign_delivery(design, t, i, variant)?;
    let topology =
        AccessTopology::new(design.blocks().iter().map(|b| b.iter().map(|&x| x as usize - 1).collect()).collect())?;
    SchemeBundle::multiaccess(placement, topology, delivery, phi)
}

/// Closed-form metrics for a `t-(v,k,λ)` design.
pub fn tdesign_metrics(
    v: usize,
    k: usize,
    lambda: u64,
    t: usize,
    i: usize,
    variant: TdesignVariant,
) -> Result<SchemeMetrics> {
    variant.check(k, t, i)?;
    if k > v {
        return Err(Error::invalid("k exceeds v"));
    }
    let (v64, k64, t64, i64_) = (v as u64, k as u64, t as u64, i as u64);
    let l = u128::from(lambda);
    let w = variant.width(t, i) as u64;
    let users = exact_div(l * binom(v64, t64), binom(k64, t64), "K")?;
    let f = binom(v64, i64_) * binom(k64, w);
    let z = (binom(v64, i64_) - binom(v64 - k64, i64_)) * binom(k64, w);
    let den = binom(v64 - t64, k64 - t64);
    let s = match variant {
        TdesignVariant::Standard => exact_div(l * binom(v64, t64) * binom(v64 - t64, k64 - t64 + i64_), den, "S")?,
        TdesignVariant::Wide => {
            let u = i64_ + t64 - 1;
            exact_div(l * binom(v64, u) * binom(v64 - u, k64 - t64 + 1), den, "S")?
        }
    };
    let placement_stars = binom(v64 - 1, i64_ - 1) * binom(k64, w);
    Ok(SchemeMetrics::multiaccess(
        users as u64,
        v64,
        k64,
        f as u64,
        z as u64,
        s as u64,
        ratio(placement_stars, f),
    ))
}

/// `R = λ C(v-i, k) / (C(v-t, k-t) C(u, i))` with `u = t` or `u = i + t - 1`.
pub fn tdesign_load(v: usize, k: usize, lambda: u64, t: usize, i: usize, variant: TdesignVariant) -> Ratio {
    let u = match variant {
        TdesignVariant::Standard => t,
        TdesignVariant::Wide => i + t - 1,
    };
    ratio(
        u128::from(lambda) * binom((v - i) as u64, k as u64),
        binom((v - t) as u64, (k - t) as u64) * binom(u as u64, i as u64),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fano_metrics() {
        let m = tdesign_metrics(7, 3, 1, 2, 1, TdesignVariant::Standard).unwrap();
        assert_eq!((m.k, m.f, m.z, m.s), (7, 21, 9, 42));
        assert_eq!(m.load, Ratio::from_integer(2));
        assert_eq!(m.memory_ratio, Ratio::new(1, 7));
        assert_eq!(m.load, tdesign_load(7, 3, 1, 2, 1, TdesignVariant::Standard));
    }

    #[test]
    fn wide_metrics() {
        let m = tdesign_metrics(6, 3, 2, 2, 2, TdesignVariant::Wide).unwrap();
        assert_eq!(m.s, 30);
        assert_eq!(m.load, Ratio::new(2, 3));
        assert_eq!(m.load, tdesign_load(6, 3, 2, 2, 2, TdesignVariant::Wide));
    }

    #[test]
    fn eight_point_metrics() {
        let a = tdesign_metrics(8, 4, 1, 3, 2, TdesignVariant::Standard).unwrap();
        assert_eq!((a.f, a.load), (112, Ratio::from_integer(1)));
        let b = tdesign_metrics(8, 4, 1, 3, 2, TdesignVariant::Wide).unwrap();
        assert_eq!((b.f, b.load), (168, Ratio::new(1, 2)));
        assert_eq!(a.memory_ratio, Ratio::new(1, 4));
    }

    #[test]
    fn range_checks() {
        assert!(tdesign_metrics(7, 3, 1, 2, 2, TdesignVariant::Standard).is_err());
        assert!(tdesign_metrics(7, 3, 1, 2, 0, TdesignVariant::Wide).is_err());
        assert!(tdesign_placement(&fixtures::fano(), 2, 2, TdesignVariant::Standard).is_err());
    }

    #[test]
    fn fano_placement() {
        let p = tdesign_placement(&fixtures::fano(), 2, 1, TdesignVariant::Standard).unwrap();
        assert_eq!((p.rows(), p.caches()), (21, 7));
        assert_eq!(p.z_prime(), Some(3));
        // cache 1 holds exactly the rows with D = {1}
        assert_eq!((0..21).filter(|&r| p.is_star(r, 0)).collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn fano_delivery_occurrences() {
        let (arr, _) = tdesign_delivery(&fixtures::fano(), 2, 1, TdesignVariant::Standard).unwrap();
        let mut occ: Vec<u32> = (0..3)
            .flat_map(|r| arr.row(r).to_vec())
            .filter_map(|c| c.label())
            .map(|id| match arr.registry().get(id).unwrap() {
                SchemeLabel::Subset { occurrence, .. } => *occurrence,
                _ => unreachable!(),
            })
            .collect();
        occ.sort_unstable();
        occ.dedup();
        assert_eq!(occ, vec![1, 2]);
    }
}
