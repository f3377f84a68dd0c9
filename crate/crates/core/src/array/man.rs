use super::{CodedArray, SchemeLabel};
use crate::math::combinations;
use crate::{Error, Result};

/// Rows are the `t0`-subsets `T` of `[K0]`; `(T, k)` is a star iff `k ∈ T`, else labelled by `T ∪ {k}`.
pub fn man_pda(k0: usize, t0: usize) -> Result<CodedArray> {
    if t0 == 0 || t0 >= k0 {
        return Err(Error::invalid(format!("MAN array needs 1 <= t0 < K0 (S = 0 at t0 = K0), got K0={k0} t0={t0}")));
    }
    let mut labels = Vec::new();
    let mut rows = 0;
    for t in combinations(k0, t0) {
        rows += 1;
        for k in 0..k0 {
            if t.contains(&k) {
                labels.push(None);
            } else {
                let mut pts: Vec<u32> = t.iter().map(|&x| x as u32 + 1).collect();
                pts.push(k as u32 + 1);
                pts.sort_unstable();
                labels.push(Some(SchemeLabel::Subset { points: pts, occurrence: 1 }));
            }
        }
    }
    CodedArray::from_labels(rows, k0, labels)
}
