//! Dedicated-cache schemes obtained by dropping the cache nodes of the multiaccess constructions.

use super::{tdesign_scheme, tgdd_scheme, SchemeBundle, TdesignVariant};
use crate::design::{complete_design, proper_oa, trivial_gdd, Design};
use crate::{Error, Result};

/// Which complete design a [`complete_family_scheme`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// All `k`-subsets of `[n]` read as a `(k-1)`-design.
    I,
    /// All `(n-k)`-subsets of `[n]` read as a `(k+1)`-design.
    J,
}

/// `(design, strength)` used by a family member.
pub fn complete_family_design(n: usize, k: usize, family: Family, idx: usize, as_printed: bool) -> Result<(Design, usize)> {
    if k < 2 || 2 * k > n {
        return Err(Error::invalid(format!("need 2 <= k <= n/2, got n={n} k={k}")));
    }
    match family {
        Family::I => {
            if idx == 0 || idx + 2 > k {
                return Err(Error::invalid(format!("family i needs 1 <= idx <= k-2, got {idx}")));
            }
            Ok((complete_design(n, k)?, k - 1))
        }
        Family::J => {
            let max = (n - k).saturating_sub(2).min(k);
            if idx == 0 || idx > max {
                return Err(Error::invalid(format!("family j needs 1 <= idx <= {max}, got {idx}")));
            }
            let t = if as_printed { k - 1 } else { k + 1 };
            if t > n - k || idx >= t {
                return Err(Error::invalid(format!("strength {t} does not fit blocks of size {} with i={idx}", n - k)));
            }
            Ok((complete_design(n, n - k)?, t))
        }
    }
}

/// The standard t-design construction on a complete design, returned in dedicated form with
/// metrics measured from the array.
pub fn complete_family_scheme(n: usize, k: usize, family: Family, idx: usize, as_printed: bool) -> Result<SchemeBundle> {
    let (design, t) = complete_family_design(n, k, family, idx, as_printed)?;
    tdesign_scheme(&design, t, idx, TdesignVariant::Standard)?.into_dedicated()
}

/// The t-GDD construction on the trivial GDD and the proper OA with `l = 1`, in dedicated form.
pub fn trivial_gdd_scheme(m: usize, q: usize, t: usize) -> Result<SchemeBundle> {
    let gdd = trivial_gdd(m, q, t)?;
    let oa = proper_oa(q as u32, m)?;
    tgdd_scheme(&gdd, &oa, 1)?.into_dedicated()
}
