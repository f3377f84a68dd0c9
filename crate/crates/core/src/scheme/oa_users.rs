//! Dedicated-cache DPDA whose users are the rows of a proper orthogonal array and whose packets
//! are the blocks of the trivial GDD.

use std::collections::HashMap;

use super::SchemeBundle;
use crate::array::{CodedArray, SchemeLabel, SenderMap};
use crate::design::{proper_oa, trivial_gdd};
use crate::math::hamming;
use crate::{Error, Result};

/// Row `A` (a GDD block), column `D` (an OA row): a star iff `D` agrees with `A` somewhere, else
/// the vector `D` with `A`'s groups overwritten by `A`'s values, numbered left to right within the
/// row. The sender is the first OA row within distance 1 of that vector.
pub fn oa_user_dpda(m: usize, q: usize, t: usize) -> Result<(CodedArray, SenderMap)> {
    let gdd = trivial_gdd(m, q, t)?;
    let oa = proper_oa(q as u32, m)?;
    let users = oa.rows();
    let mut labels = Vec::with_capacity(gdd.blocks().len() * users.len());
    for a in gdd.blocks() {
        let mut seen: HashMap<Vec<u32>, u32> = HashMap::new();
        for d in users {
            let wrong = a.iter().filter(|&&(u, v)| d[u as usize - 1] != v).count();
            if wrong < t {
                labels.push(None);
                continue;
            }
            let mut e = d.clone();
            for &(u, v) in a {
                e[u as usize - 1] = v;
            }
            let n = seen.entry(e.clone()).or_insert(0);
            *n += 1;
            labels.push(Some(SchemeLabel::Vector { entries: e, occurrence: *n }));
        }
    }
    let arr = CodedArray::from_labels(gdd.blocks().len(), users.len(), labels)?;
    let mut phi = Vec::with_capacity(arr.registry().len());
    for id in 1..=arr.registry().len() as u32 {
        let Some(SchemeLabel::Vector { entries, .. }) = arr.registry().get(id) else { unreachable!() };
        let c = users
            .iter()
            .position(|d| hamming(d, entries) <= 1)
            .ok_or_else(|| Error::ConstructionUnsupported(format!("no user can send {}", arr.registry().get(id).unwrap())))?;
        phi.push(c);
    }
    Ok((arr, SenderMap::new(phi)))
}

pub fn oa_user_scheme(m: usize, q: usize, t: usize) -> Result<SchemeBundle> {
    let (arr, phi) = oa_user_dpda(m, q, t)?;
    SchemeBundle::dedicated(arr, phi)
}
