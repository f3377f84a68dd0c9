//! Schemes whose users are the blocks of a t-GDD and whose packets are indexed by the rows of an
//! orthogonal array.

use std::collections::HashMap;

use super::{exact_div, AccessTopology, PlacementArray, SchemeBundle, SchemeMetrics};
use crate::array::{CodedArray, SchemeLabel, SenderMap};
use crate::design::{GroupDivisibleDesign, OrthogonalArray};
use crate::math::{binom, combinations, pow, ratio};
use crate::{Error, Result};

/// Whether a reported `S` is exact or an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SCount {
    Exact,
    UpperBound,
}

struct Shape {
    m: usize,
    q: usize,
    t: usize,
    splits: Vec<Vec<usize>>,
}

fn check_ranges(m: usize, q: usize, k: usize, t: usize, s: usize, l: usize) -> Result<()> {
    if q < 2 || !(1 <= t && t <= k && k <= s && s < m) {
        return Err(Error::invalid(format!("need q >= 2 and 1 <= t <= k <= s < m, got m={m} q={q} k={k} t={t} s={s}")));
    }
    let max_l = (m - s).min(t - 1);
    if l == 0 || l > max_l {
        return Err(Error::invalid(format!("l={l} outside 1..={max_l}")));
    }
    Ok(())
}

fn shape(gdd: &GroupDivisibleDesign, oa: &OrthogonalArray, l: usize) -> Result<Shape> {
    let k = gdd.block_size().ok_or_else(|| Error::invalid("GDD blocks must share one size"))?;
    let (t, lambda) = match gdd.declared() {
        Some(p) => p,
        None => gdd.strength().ok_or_else(|| Error::PreconditionFailed("GDD has no uniform index".into()))?,
    };
    if lambda != 1 {
        return Err(Error::PreconditionFailed(format!("GDD index is {lambda}, expected 1")));
    }
    if oa.index() != 1 {
        return Err(Error::PreconditionFailed(format!("OA index is {}, expected 1", oa.index())));
    }
    let (m, q) = (gdd.m() as usize, gdd.q() as usize);
    if oa.columns() != m || oa.q() as usize != q {
        return Err(Error::invalid("OA shape does not match the GDD groups"));
    }
    check_ranges(m, q, k, t, oa.strength(), l)?;
    Ok(Shape { m, q, t, splits: combinations(k, l).collect() })
}

/// Rows `(D_j, T)`; cache `(u, v)` (column `(u-1)q + v-1`) stores the row iff `D_j(u) = v`.
pub fn tgdd_placement(gdd: &GroupDivisibleDesign, oa: &OrthogonalArray, l: usize) -> Result<PlacementArray> {
    let sh = shape(gdd, oa, l)?;
    let caches = sh.m * sh.q;
    let mut stars = Vec::with_capacity(oa.rows().len() * sh.splits.len() * caches);
    for d in oa.rows() {
        for _ in &sh.splits {
            for u in 0..sh.m {
                for v in 1..=sh.q as u32 {
                    stars.push(d[u] == v);
                }
            }
        }
    }
    PlacementArray::new(stars.len() / caches, caches, stars)
}

/// Cell `((D_j, T), A)` is a star iff `D_j` agrees with `A` on some accessed group; otherwise it
/// carries `D_j` with the positions of `A` selected by `T` overwritten by `A`'s values, numbered by
/// occurrence within the rows of `D_j`.
pub fn tgdd_delivery(
    gdd: &GroupDivisibleDesign,
    oa: &OrthogonalArray,
    l: usize,
) -> Result<(CodedArray, SenderMap)> {
    let sh = shape(gdd, oa, l)?;
    let blocks = gdd.blocks();
    let mut labels = Vec::new();
    let mut rows = 0;
    for d in oa.rows() {
        let mut seen: HashMap<Vec<u32>, u32> = HashMap::new();
        for split in &sh.splits {
            rows += 1;
            for b in blocks {
                if b.iter().any(|&(u, v)| d[u as usize - 1] == v) {
                    labels.push(None);
                    continue;
                }
                let mut e = d.clone();
                for &h in split {
                    let (u, v) = b[h];
                    e[u as usize - 1] = v;
                }
                let n = seen.entry(e.clone()).or_insert(0);
                *n += 1;
                labels.push(Some(SchemeLabel::Vector { entries: e, occurrence: *n }));
            }
        }
    }
    let arr = CodedArray::from_labels(rows, blocks.len(), labels)?;
    let mut phi = Vec::with_capacity(arr.registry().len());
    for id in 1..=arr.registry().len() as u32 {
        let Some(SchemeLabel::Vector { entries, .. }) = arr.registry().get(id) else { unreachable!() };
        let c = blocks
            .iter()
            .position(|b| b.iter().filter(|&&(u, v)| entries[u as usize - 1] == v).count() >= sh.t)
            .ok_or_else(|| Error::ConstructionUnsupported(format!("no user can send {}", arr.registry().get(id).unwrap())))?;
        phi.push(c);
    }
    Ok((arr, SenderMap::new(phi)))
}

pub fn tgdd_scheme(gdd: &GroupDivisibleDesign, oa: &OrthogonalArray, l: usize) -> Result<SchemeBundle> {
    let placement = tgdd_placement(gdd, oa, l)?;
    let (delivery, phi) = tgdd_delivery(gdd, oa, l)?;
    let q = gdd.q() as usize;
    let topology = AccessTopology::new(
        gdd.blocks()
            .iter()
            .map(|b| b.iter().map(|&(u, v)| (u as usize - 1) * q + v as usize - 1).collect())
            .collect(),
    )?;
    SchemeBundle::multiaccess(placement, topology, delivery, phi)
}

/// Closed-form metrics; `S` is exact in the two settled cases and an upper bound otherwise.
pub fn tgdd_metrics(m: usize, q: usize, k: usize, t: usize, s: usize, l: usize) -> Result<(SchemeMetrics, SCount)> {
    check_ranges(m, q, k, t, s, l)?;
    let (m6, q6, k6, t6, s6, l6) = (m as u64, q as u64, k as u64, t as u64, s as u64, l as u64);
    let users = exact_div(binom(m6, t6) * pow(q6, t6), binom(k6, t6), "K")?;
    let f = pow(q6, s6) * binom(k6, l6);
    let z = (pow(q6, s6) - pow(q6 - 1, k6) * pow(q6, s6 - k6)) * binom(k6, l6);
    let (s_count, kind) = if k == t && s == m - 1 && l == 1 {
        (pow(q6, m6 - 1) * pow(q6 - 1, t6) * binom(m6 - 1, t6 - 1), SCount::Exact)
    } else if k == t && s == m + 1 - t && s > t && l == m - s {
        ((pow(q6, m6) - pow(q6, m6 + 1 - t6)) * (q6 as u128 - 1) * u128::from(m6 + 1 - t6), SCount::Exact)
    } else {
        let num = (pow(q6, m6) - pow(q6, s6)) * pow(q6, t6 - l6) * binom(m6 - l6, t6 - l6);
        (num / binom(k6 - l6, t6 - l6), SCount::UpperBound)
    };
    let metrics = SchemeMetrics::multiaccess(
        users as u64,
        m6 * q6,
        k6,
        f as u64,
        z as u64,
        s_count as u64,
        ratio(pow(q6, s6 - 1) * binom(k6, l6), f),
    );
    Ok((metrics, kind))
}
