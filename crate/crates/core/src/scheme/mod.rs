//! Placement arrays, access topologies and the multiaccess scheme constructions.

mod derived;
mod oa_users;
mod tdesign;
mod tgdd;

pub use derived::{complete_family_design, complete_family_scheme, trivial_gdd_scheme, Family};
pub use oa_users::{oa_user_dpda, oa_user_scheme};
pub use tdesign::{tdesign_delivery, tdesign_load, tdesign_metrics, tdesign_placement, tdesign_scheme, TdesignVariant};
pub use tgdd::{tgdd_delivery, tgdd_metrics, tgdd_placement, tgdd_scheme, SCount};

use std::fmt;

use crate::array::{verify_dpda, CodedArray, SenderMap};
use crate::math::{fmt_ratio, Ratio};
use crate::{Error, Result};

/// Parameters of a coded caching scheme; ratios are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeMetrics {
    /// Users.
    pub k: u64,
    /// Cache nodes (equal to `k` for dedicated caches).
    pub gamma: u64,
    /// Caches each user reaches.
    pub l: u64,
    pub f: u64,
    /// Stars per delivery-array column.
    pub z: u64,
    pub s: u64,
    pub memory_ratio: Ratio,
    pub load: Ratio,
    pub per_user_load: Ratio,
}

impl SchemeMetrics {
    /// Every user owns its cache: `M/N = Z/F`.
    pub fn dedicated(k: u64, f: u64, z: u64, s: u64) -> Self {
        Self::multiaccess(k, k, 1, f, z, s, Ratio::new(z as i128, f as i128))
    }

    pub fn multiaccess(k: u64, gamma: u64, l: u64, f: u64, z: u64, s: u64, memory_ratio: Ratio) -> Self {
        let load = Ratio::new(s as i128, f as i128);
        SchemeMetrics { k, gamma, l, f, z, s, memory_ratio, load, per_user_load: load / Ratio::from_integer(k as i128) }
    }

    /// `key=value` lines with ratios as `p/q`.
    pub fn to_lines(&self) -> Vec<String> {
        vec![
            format!("K={}", self.k),
            format!("Gamma={}", self.gamma),
            format!("L={}", self.l),
            format!("F={}", self.f),
            format!("Z={}", self.z),
            format!("S={}", self.s),
            format!("M/N={}", fmt_ratio(&self.memory_ratio)),
            format!("R={}", fmt_ratio(&self.load)),
            format!("R/K={}", fmt_ratio(&self.per_user_load)),
        ]
    }
}

impl fmt::Display for SchemeMetrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K={} F={} Z={} S={} R={}", self.k, self.f, self.z, self.s, fmt_ratio(&self.load))
    }
}

/// Which (sub)packet rows each cache node stores; `None` cells are empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacementArray {
    rows: usize,
    caches: usize,
    stars: Vec<bool>,
}

impl PlacementArray {
    pub fn new(rows: usize, caches: usize, stars: Vec<bool>) -> Result<Self> {
        if rows == 0 || caches == 0 || stars.len() != rows * caches {
            return Err(Error::invalid("placement array shape mismatch"));
        }
        Ok(PlacementArray { rows, caches, stars })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn caches(&self) -> usize {
        self.caches
    }

    pub fn is_star(&self, row: usize, cache: usize) -> bool {
        self.stars[row * self.caches + cache]
    }

    pub fn star_count(&self, cache: usize) -> usize {
        (0..self.rows).filter(|&r| self.is_star(r, cache)).count()
    }

    /// Common star count per column, if constant.
    pub fn z_prime(&self) -> Option<usize> {
        let z = self.star_count(0);
        (1..self.caches).all(|c| self.star_count(c) == z).then_some(z)
    }
}

/// Caches reachable by each user, 0-based and sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessTopology {
    users: Vec<Vec<usize>>,
}

impl AccessTopology {
    pub fn new(users: Vec<Vec<usize>>) -> Result<Self> {
        let l = users.first().map(Vec::len).ok_or_else(|| Error::invalid("topology has no users"))?;
        let mut out = Vec::with_capacity(users.len());
        for (k, mut b) in users.into_iter().enumerate() {
            b.sort_unstable();
            b.dedup();
            if b.len() != l {
                return Err(Error::invalid(format!("user {} reaches {} caches, expected {l}", k + 1, b.len())));
            }
            out.push(b);
        }
        Ok(AccessTopology { users: out })
    }

    pub fn users(&self) -> &[Vec<usize>] {
        &self.users
    }

    pub fn k(&self) -> usize {
        self.users.len()
    }

    pub fn l(&self) -> usize {
        self.users[0].len()
    }
}

/// `(f, k)` is true when user `k` can read row `f` from one of its caches.
pub fn retrieval_stars(topology: &AccessTopology, placement: &PlacementArray) -> Result<Vec<Vec<bool>>> {
    if let Some(k) = topology.users().iter().position(|b| b.iter().any(|&c| c >= placement.caches())) {
        return Err(Error::invalid(format!("user {} reaches a cache outside the placement", k + 1)));
    }
    Ok((0..placement.rows())
        .map(|f| topology.users().iter().map(|b| b.iter().any(|&c| placement.is_star(f, c))).collect())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiaccessLayout {
    pub placement: PlacementArray,
    pub topology: AccessTopology,
}

/// Everything needed to run a scheme. Without a layout, users cache the delivery array's stars
/// themselves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeBundle {
    pub layout: Option<MultiaccessLayout>,
    pub delivery: CodedArray,
    pub phi: SenderMap,
    pub metrics: SchemeMetrics,
}

pub(crate) fn exact_div(num: u128, den: u128, what: &str) -> Result<u128> {
    if den == 0 || num % den != 0 {
        return Err(Error::invalid(format!("{what} = {num}/{den} is not an integer")));
    }
    Ok(num / den)
}

fn checked(delivery: &CodedArray, phi: &SenderMap) -> Result<(u64, u64, u64, u64)> {
    let report = verify_dpda(delivery, phi);
    if let Some(v) = report.violations.first() {
        return Err(Error::ConstructionUnsupported(format!(
            "delivery array fails the checker ({} violations, first: {v})",
            report.violations.len()
        )));
    }
    let p = report.params;
    Ok((p.k as u64, p.f as u64, p.z as u64, p.s as u64))
}

impl SchemeBundle {
    /// Checks the array and measures its metrics.
    pub fn dedicated(delivery: CodedArray, phi: SenderMap) -> Result<Self> {
        let (k, f, z, s) = checked(&delivery, &phi)?;
        Ok(SchemeBundle { layout: None, delivery, phi, metrics: SchemeMetrics::dedicated(k, f, z, s) })
    }

    /// Checks the array and its agreement with the placement, then measures the metrics.
    pub fn multiaccess(
        placement: PlacementArray,
        topology: AccessTopology,
        delivery: CodedArray,
        phi: SenderMap,
    ) -> Result<Self> {
        let (k, f, z, s) = checked(&delivery, &phi)?;
        if placement.rows() != delivery.rows() || topology.k() != delivery.cols() {
            return Err(Error::invalid("placement, topology and delivery shapes disagree"));
        }
        let z_prime = placement
            .z_prime()
            .ok_or_else(|| Error::ConstructionUnsupported("placement star counts differ between caches".into()))?;
        let metrics = SchemeMetrics::multiaccess(
            k,
            placement.caches() as u64,
            topology.l() as u64,
            f,
            z,
            s,
            Ratio::new(z_prime as i128, f as i128),
        );
        let bundle = SchemeBundle { layout: Some(MultiaccessLayout { placement, topology }), delivery, phi, metrics };
        bundle.check_consistency()?;
        Ok(bundle)
    }

    /// Delivery stars must coincide with what each user can retrieve.
    pub fn check_consistency(&self) -> Result<()> {
        let Some(layout) = &self.layout else { return Ok(()) };
        let stars = retrieval_stars(&layout.topology, &layout.placement)?;
        for (row, line) in stars.iter().enumerate() {
            for (user, &s) in line.iter().enumerate() {
                if s != self.delivery.get(row, user).is_star() {
                    return Err(Error::ConsistencyViolation { row: row + 1, user: user + 1 });
                }
            }
        }
        Ok(())
    }

    /// Drops the cache nodes: each user caches its own delivery-array stars.
    pub fn into_dedicated(self) -> Result<Self> {
        Self::dedicated(self.delivery, self.phi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topology_requires_equal_access() {
        assert!(AccessTopology::new(vec![vec![0, 1], vec![2]]).is_err());
        assert!(AccessTopology::new(vec![]).is_err());
    }

    #[test]
    fn single_cache_user_sees_its_column() {
        let p = PlacementArray::new(3, 2, vec![true, false, false, true, true, true]).unwrap();
        let t = AccessTopology::new(vec![vec![1]]).unwrap();
        let s = retrieval_stars(&t, &p).unwrap();
        assert_eq!(s, vec![vec![false], vec![true], vec![true]]);
    }

    #[test]
    fn metrics_text() {
        let m = SchemeMetrics::dedicated(7, 21, 9, 42);
        assert_eq!(m.to_string(), "K=7 F=21 Z=9 S=42 R=2/1");
        assert_eq!(m.to_lines()[6], "M/N=3/7");
    }
}
