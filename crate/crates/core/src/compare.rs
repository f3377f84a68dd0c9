//! Baseline calculators, comparison tables and memory-sharing envelopes.

use std::fmt::Write as _;

use crate::design::Design;
use crate::math::{binom, fmt_decimal, fmt_ratio, int, pow, ratio, Ratio};
use crate::scheme::{
    complete_family_design, complete_family_scheme, oa_user_scheme, tdesign_metrics, tdesign_scheme, tgdd_metrics,
    trivial_gdd_scheme, Family, SCount, SchemeMetrics, TdesignVariant,
};
use crate::{Error, Result};

/// One table row; every number is exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonRow {
    pub scheme: String,
    pub gamma: u64,
    pub memory_ratio: Ratio,
    pub k: u64,
    pub l: u64,
    pub load: Ratio,
    pub per_user_load: Ratio,
    pub f: u128,
}

impl ComparisonRow {
    pub fn new(scheme: impl Into<String>, gamma: u64, memory_ratio: Ratio, k: u64, l: u64, load: Ratio, f: u128) -> Self {
        ComparisonRow {
            scheme: scheme.into(),
            gamma,
            memory_ratio,
            k,
            l,
            load,
            per_user_load: load / Ratio::from_integer(k as i128),
            f,
        }
    }

    /// Uses the metrics as they are (multiaccess when `gamma != k`).
    pub fn from_metrics(scheme: impl Into<String>, m: &SchemeMetrics) -> Self {
        Self::new(scheme, m.gamma, m.memory_ratio, m.k, m.l, m.load, u128::from(m.f))
    }

    /// Each user caches its own delivery-array stars: `Gamma = K`, `L = 1`, `M/N = Z/F`.
    pub fn dedicated(scheme: impl Into<String>, m: &SchemeMetrics) -> Self {
        Self::new(scheme, m.k, ratio(u128::from(m.z), u128::from(m.f)), m.k, 1, m.load, u128::from(m.f))
    }

    /// Agreement on `K`, `F`, `M/N` and `R`.
    pub fn same_scheme_parameters(&self, other: &ComparisonRow) -> bool {
        self.k == other.k && self.f == other.f && self.memory_ratio == other.memory_ratio && self.load == other.load
    }
}

/// A closed-form row next to the row measured on the constructed arrays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowCheck {
    pub expected: ComparisonRow,
    pub measured: ComparisonRow,
}

impl RowCheck {
    pub fn passed(&self) -> bool {
        self.expected.same_scheme_parameters(&self.measured)
    }
}

/// Multiaccess D2D scheme with cyclic wrap-around topology.
pub fn wccwc_metrics(k0: u64, t0: u64, r: u64) -> Result<ComparisonRow> {
    if r <= 1 {
        return Err(Error::invalid(format!("r must exceed 1, got {r}")));
    }
    if t0 == 0 || t0 > k0 {
        return Err(Error::invalid(format!("t0 must lie in 1..={k0}, got {t0}")));
    }
    let k = (r - 1) * k0 + t0;
    Ok(ComparisonRow::new(
        "WCCWC",
        k,
        ratio(t0.into(), k.into()),
        k,
        r,
        ratio(u128::from((k0 - t0) * (r - 1)), t0.into()),
        binom(k0, t0) * u128::from(t0) * u128::from(k),
    ))
}

/// D2D scheme derived from the multiaccess PDA of a `t-(v,k,1)` design.
pub fn cweg_tdesign_metrics(v: u64, k: u64, t: u64) -> Result<ComparisonRow> {
    if !(1 <= t && t <= k && k <= v) {
        return Err(Error::invalid(format!("need 1 <= t <= k <= v, got v={v} k={k} t={t}")));
    }
    let kt = binom(k, t);
    if binom(v, t) % kt != 0 {
        return Err(Error::invalid(format!("C({v},{t}) is not divisible by C({k},{t})")));
    }
    let users = binom(v, t) / kt;
    let load = ratio(binom(v - 1, k), binom(v - t, k - t) * u128::from(t));
    Ok(ComparisonRow::new("derived t-design", v, ratio(1, v.into()), users as u64, k, load, u128::from(v * t) * kt))
}

/// D2D scheme derived from the multiaccess PDA of the trivial t-GDD.
pub fn cweg_tgdd_metrics(m: u64, q: u64, t: u64) -> Result<ComparisonRow> {
    if !(1 <= t && t < m) || q < 2 {
        return Err(Error::invalid(format!("need m > t >= 1 and q >= 2, got m={m} q={q} t={t}")));
    }
    let c = binom(m, t);
    if c == 1 {
        return Err(Error::invalid("C(m,t) = 1 gives a degenerate scheme"));
    }
    let users = c * pow(q, t);
    let load = ratio(c * pow(q - 1, t), c - 1);
    Ok(ComparisonRow::new("derived t-GDD", m * q, ratio(1, q.into()), users as u64, t, load, (c - 1) * pow(q, m - 1)))
}

/// The dedicated-cache D2D baseline at `K M/N` users' worth of memory.
pub fn jcm_metrics(k: u64, memory_ratio: Ratio) -> Result<ComparisonRow> {
    let t0 = memory_ratio * Ratio::from_integer(k as i128);
    if !t0.is_integer() {
        return Err(Error::NotApplicable(format!("K M/N = {} is not an integer", fmt_ratio(&t0))));
    }
    let t0 = t0.to_integer();
    if t0 <= 0 || t0 > k as i128 {
        return Err(Error::invalid(format!("K M/N = {t0} outside 1..={k}")));
    }
    let one = Ratio::from_integer(1);
    let load = (one - memory_ratio) / memory_ratio;
    Ok(ComparisonRow::new("JCM", k, memory_ratio, k, 1, load, t0 as u128 * binom(k, t0 as u64)))
}

/// Proposed t-design scheme against its derived and cyclic counterparts (`i = 1`).
///
/// The cyclic row uses `t0 = 1` and `K0 = (v-1)/(r-1)` so that both have `K = v` users.
pub fn tdesign_table(v: u64, k: u64, t: u64, r: u64) -> Result<Vec<ComparisonRow>> {
    let proposed = tdesign_metrics(v as usize, k as usize, 1, t as usize, 1, TdesignVariant::Standard)?;
    let derived = cweg_tdesign_metrics(v, k, t)?;
    if r <= 1 || (v - 1) % (r - 1) != 0 {
        return Err(Error::invalid(format!("r - 1 must divide v - 1, got v={v} r={r}")));
    }
    let cyclic = wccwc_metrics((v - 1) / (r - 1), 1, r)?;
    Ok(vec![ComparisonRow::from_metrics("proposed t-design", &proposed), derived, cyclic])
}

/// Proposed t-GDD scheme (`k = t`, `s = m-1`, `l = 1`) against its derived and cyclic
/// counterparts; the cyclic row uses `t0 = m` and `K0 = m(q-1)/(r-1)`.
pub fn tgdd_table(m: u64, q: u64, t: u64, r: u64) -> Result<Vec<ComparisonRow>> {
    let (proposed, _) = tgdd_metrics(m as usize, q as usize, t as usize, t as usize, m as usize - 1, 1)?;
    let derived = cweg_tgdd_metrics(m, q, t)?;
    let span = m * (q - 1);
    if r <= 1 || span % (r - 1) != 0 {
        return Err(Error::invalid(format!("r - 1 must divide m(q-1) = {span}")));
    }
    let cyclic = wccwc_metrics(span / (r - 1), m, r)?;
    Ok(vec![ComparisonRow::from_metrics("proposed t-GDD", &proposed), derived, cyclic])
}

/// Complete-design family members available for `(n, k)`, in table order.
pub fn complete_members(n: usize, k: usize, as_printed: bool) -> Vec<(Family, usize)> {
    let mut out = Vec::new();
    for family in [Family::I, Family::J] {
        for idx in 1..=n {
            if complete_family_design(n, k, family, idx, as_printed).is_ok() {
                out.push((family, idx));
            }
        }
    }
    out
}

fn member_name(family: Family, idx: usize) -> String {
    match family {
        Family::I => format!("i={idx}"),
        Family::J => format!("j={idx}"),
    }
}

fn complete_closed(n: usize, k: usize, family: Family, idx: usize, as_printed: bool) -> Result<SchemeMetrics> {
    let (design, t) = complete_family_design(n, k, family, idx, as_printed)?;
    let b = design.blocks()[0].len();
    let lambda = binom((n - t) as u64, (b - t) as u64) as u64;
    tdesign_metrics(n, b, lambda, t, idx, TdesignVariant::Standard)
}

/// One complete-design row: closed form against the constructed array.
pub fn complete_row(n: usize, k: usize, family: Family, idx: usize, as_printed: bool) -> Result<RowCheck> {
    let name = member_name(family, idx);
    let expected = ComparisonRow::dedicated(name.clone(), &complete_closed(n, k, family, idx, as_printed)?);
    let bundle = complete_family_scheme(n, k, family, idx, as_printed)?;
    Ok(RowCheck { expected, measured: ComparisonRow::dedicated(name, &bundle.metrics) })
}

/// Parameter sets for the summary table; each present group contributes its rows.
#[derive(Debug, Clone, Default)]
pub struct SummaryParams {
    /// A design and the subset size `i` for both t-design constructions.
    pub design: Option<(Design, usize)>,
    /// `(m, q, t)` for the rows built on the trivial GDD.
    pub grouped: Option<(usize, usize, usize)>,
    /// `(n, k, idx)` for both complete-design families.
    pub complete: Option<(usize, usize, usize)>,
}

struct SummaryEntry {
    row: ComparisonRow,
    build: Box<dyn Fn() -> Result<ComparisonRow>>,
}

fn design_strength(design: &Design) -> Result<(usize, usize, u64)> {
    let k = design.block_size().ok_or_else(|| Error::invalid("design blocks must share one size"))?;
    let (t, lambda) = match design.declared() {
        Some(p) => (p.t, p.lambda),
        None => design.strength().ok_or_else(|| Error::PreconditionFailed("design has no uniform strength".into()))?,
    };
    Ok((k, t, lambda))
}

fn summary_entries(p: &SummaryParams) -> Result<Vec<SummaryEntry>> {
    let mut out = Vec::new();
    if let Some((design, i)) = &p.design {
        let (k, t, lambda) = design_strength(design)?;
        let v = design.v();
        for (variant, name) in [(TdesignVariant::Standard, "t-design"), (TdesignVariant::Wide, "t-design wide")] {
            match tdesign_metrics(v, k, lambda, t, *i, variant) {
                Ok(m) => {
                    let (d, i) = (design.clone(), *i);
                    out.push(SummaryEntry {
                        row: ComparisonRow::dedicated(name, &m),
                        build: Box::new(move || {
                            let b = tdesign_scheme(&d, t, i, variant)?.into_dedicated()?;
                            Ok(ComparisonRow::dedicated(name, &b.metrics))
                        }),
                    });
                }
                Err(e) => log::warn!("skipping {name} row: {e}"),
            }
        }
    }
    if let Some((n, k, idx)) = p.complete {
        for family in [Family::I, Family::J] {
            let name = format!("complete {}", member_name(family, idx));
            match complete_closed(n, k, family, idx, false) {
                Ok(m) => {
                    let label = name.clone();
                    out.push(SummaryEntry {
                        row: ComparisonRow::dedicated(name, &m),
                        build: Box::new(move || {
                            let b = complete_family_scheme(n, k, family, idx, false)?;
                            Ok(ComparisonRow::dedicated(label.clone(), &b.metrics))
                        }),
                    });
                }
                Err(e) => log::warn!("skipping {name} row: {e}"),
            }
        }
    }
    if let Some((m, q, t)) = p.grouped {
        let (tg, kind) = tgdd_metrics(m, q, t, t, m - 1, 1)?;
        debug_assert_eq!(kind, SCount::Exact);
        out.push(SummaryEntry {
            row: ComparisonRow::dedicated("trivial GDD", &tg),
            build: Box::new(move || Ok(ComparisonRow::dedicated("trivial GDD", &trivial_gdd_scheme(m, q, t)?.metrics))),
        });
        out.push(SummaryEntry {
            row: ComparisonRow::dedicated("OA users", &oa_user_metrics(m as u64, q as u64, t as u64)?),
            build: Box::new(move || Ok(ComparisonRow::dedicated("OA users", &oa_user_scheme(m, q, t)?.metrics))),
        });
    }
    Ok(out)
}

/// Closed-form `(K, F, Z, S)` of the scheme whose users are the rows of the proper OA.
pub fn oa_user_metrics(m: u64, q: u64, t: u64) -> Result<SchemeMetrics> {
    if q < 2 || !(1 <= t && t < m) {
        return Err(Error::invalid(format!("need q >= 2 and 1 <= t < m, got m={m} q={q} t={t}")));
    }
    let c = binom(m, t);
    let f = c * pow(q, t);
    let z = c * (pow(q, t) - pow(q - 1, t));
    let s = pow(q - 1, t) * pow(q, m - 1);
    Ok(SchemeMetrics::dedicated(pow(q, m - 1) as u64, f as u64, z as u64, s as u64))
}

/// Closed-form rows of the dedicated-cache D2D schemes.
pub fn summary_table(p: &SummaryParams) -> Result<Vec<ComparisonRow>> {
    Ok(summary_entries(p)?.into_iter().map(|e| e.row).collect())
}

/// Summary rows paired with the rows measured on the constructions.
pub fn summary_checks(p: &SummaryParams) -> Result<Vec<RowCheck>> {
    summary_entries(p)?
        .into_iter()
        .map(|e| Ok(RowCheck { measured: (e.build)()?, expected: e.row }))
        .collect()
}

/// An achievable `(M, R)` pair in files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MemoryLoadPoint {
    pub m: Ratio,
    pub r: Ratio,
}

impl MemoryLoadPoint {
    pub fn new(m: Ratio, r: Ratio) -> Self {
        MemoryLoadPoint { m, r }
    }
}

/// Lower convex envelope of achievable points under memory sharing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    n: Ratio,
    vertices: Vec<MemoryLoadPoint>,
}

fn cross(o: &MemoryLoadPoint, a: &MemoryLoadPoint, b: &MemoryLoadPoint) -> Ratio {
    (a.m - o.m) * (b.r - o.r) - (a.r - o.r) * (b.m - o.m)
}

/// Adds `(0, min(K, N))` and `(N, 0)` and keeps the lower hull.
pub fn memory_share(points: &[MemoryLoadPoint], n_files: u64, k: u64) -> Result<Envelope> {
    let n = Ratio::from_integer(n_files as i128);
    if n_files == 0 {
        return Err(Error::invalid("N must be positive"));
    }
    let mut all = vec![
        MemoryLoadPoint::new(Ratio::from_integer(0), Ratio::from_integer(k.min(n_files) as i128)),
        MemoryLoadPoint::new(n, Ratio::from_integer(0)),
    ];
    for p in points {
        if p.m < Ratio::from_integer(0) || p.m > n {
            return Err(Error::OutOfRange(format!("M = {} outside [0, {n_files}]", fmt_ratio(&p.m))));
        }
        if p.r < Ratio::from_integer(0) {
            return Err(Error::invalid(format!("negative load {}", fmt_ratio(&p.r))));
        }
        all.push(*p);
    }
    all.sort_by(|a, b| a.m.cmp(&b.m).then(a.r.cmp(&b.r)));
    all.dedup_by(|b, a| a.m == b.m);
    let mut hull: Vec<MemoryLoadPoint> = Vec::new();
    for p in all {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) <= Ratio::from_integer(0) {
            hull.pop();
        }
        hull.push(p);
    }
    Ok(Envelope { n, vertices: hull })
}

impl Envelope {
    pub fn vertices(&self) -> &[MemoryLoadPoint] {
        &self.vertices
    }

    /// `R(M)` by linear interpolation between adjacent vertices.
    pub fn query(&self, m: Ratio) -> Result<Ratio> {
        if m < Ratio::from_integer(0) || m > self.n {
            return Err(Error::OutOfRange(format!("M = {} outside [0, {}]", fmt_ratio(&m), self.n)));
        }
        let w = self.vertices.windows(2).find(|w| w[0].m <= m && m <= w[1].m).expect("envelope spans [0, N]");
        let (a, b) = (w[0], w[1]);
        Ok(a.r + (b.r - a.r) * (m - a.m) / (b.m - a.m))
    }

    /// `R` at every integer `M` in `0..=N`.
    pub fn sample(&self) -> Vec<MemoryLoadPoint> {
        let n = self.n.to_integer();
        (0..=n)
            .map(|m| {
                let m = Ratio::from_integer(m);
                MemoryLoadPoint::new(m, self.query(m).expect("integer points lie in range"))
            })
            .collect()
    }
}

/// A scheme point with its subpacketization, for tradeoff tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemePoint {
    pub scheme: String,
    pub point: MemoryLoadPoint,
    pub f: u128,
}

/// Dedicated-cache points of both t-design constructions for every valid `i`, with `N` files.
pub fn design_points(design: &Design, n_files: u64) -> Result<Vec<SchemePoint>> {
    let (k, t, lambda) = design_strength(design)?;
    let n = int(n_files.into());
    let mut out = Vec::new();
    for (variant, name) in [(TdesignVariant::Standard, "t-design"), (TdesignVariant::Wide, "t-design wide")] {
        for i in 1..=t {
            if let Ok(m) = tdesign_metrics(design.v(), k, lambda, t, i, variant) {
                let mr = ratio(m.z.into(), m.f.into());
                out.push(SchemePoint {
                    scheme: format!("{name} i={i}"),
                    point: MemoryLoadPoint::new(mr * n, m.load),
                    f: m.f.into(),
                });
            }
        }
    }
    Ok(out)
}

/// The JCM baseline at each integer `M` in `1..=N` where `K M / N` is an integer.
pub fn jcm_points(n_files: u64, k: u64) -> Vec<SchemePoint> {
    (1..=n_files)
        .filter_map(|m| {
            let mr = ratio(m.into(), n_files.into());
            jcm_metrics(k, mr).ok().map(|row| SchemePoint {
                scheme: "JCM".into(),
                point: MemoryLoadPoint::new(int(m.into()), row.load),
                f: row.f,
            })
        })
        .collect()
}

fn cell(r: &Ratio) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{} ({})", fmt_ratio(r), fmt_decimal(r))
    }
}

const HEADER: [&str; 8] = ["scheme", "Gamma", "M/N", "K", "L", "R", "R/K", "F"];

/// Aligned plain-text table.
pub fn render_text(rows: &[ComparisonRow]) -> String {
    let body: Vec<[String; 8]> = rows
        .iter()
        .map(|r| {
            [
                r.scheme.clone(),
                r.gamma.to_string(),
                cell(&r.memory_ratio),
                r.k.to_string(),
                r.l.to_string(),
                cell(&r.load),
                cell(&r.per_user_load),
                r.f.to_string(),
            ]
        })
        .collect();
    let mut widths = HEADER.map(str::len);
    for line in &body {
        for (w, c) in widths.iter_mut().zip(line) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let header = HEADER.map(String::from);
    for line in std::iter::once(&header).chain(&body) {
        let cells: Vec<String> = line.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    out
}

/// Comma-separated rows with a header; ratios as `p/q`.
pub fn render_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("scheme,gamma,memory_ratio,k,l,load,per_user_load,f\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.scheme,
            r.gamma,
            fmt_ratio(&r.memory_ratio),
            r.k,
            r.l,
            fmt_ratio(&r.load),
            fmt_ratio(&r.per_user_load),
            r.f
        );
    }
    out
}

/// Two-column `M,R` listing.
pub fn render_load_csv(points: &[MemoryLoadPoint]) -> String {
    let mut out = String::from("M,R\n");
    for p in points {
        let _ = writeln!(out, "{},{}", fmt_ratio(&p.m), fmt_ratio(&p.r));
    }
    out
}

/// Two-column `M,F` listing.
pub fn render_subpacketization_csv(points: &[SchemePoint]) -> String {
    let mut out = String::from("M,F\n");
    for p in points {
        let _ = writeln!(out, "{},{}", fmt_ratio(&p.point.m), p.f);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn cyclic_rows() {
        let r = wccwc_metrics(6, 1, 2).unwrap();
        assert_eq!((r.k, r.f, r.load, r.memory_ratio), (7, 42, int(5), Ratio::new(1, 7)));
        let r = wccwc_metrics(3, 1, 3).unwrap();
        assert_eq!((r.k, r.f, r.load), (7, 21, int(4)));
        let r = wccwc_metrics(6, 3, 2).unwrap();
        assert_eq!((r.k, r.f, r.load, r.memory_ratio), (9, 540, int(1), Ratio::new(1, 3)));
        assert!(wccwc_metrics(6, 1, 1).is_err());
    }

    #[test]
    fn derived_rows() {
        let r = cweg_tdesign_metrics(7, 3, 2).unwrap();
        assert_eq!((r.f, r.load), (42, int(2)));
        let r = cweg_tgdd_metrics(3, 3, 2).unwrap();
        assert_eq!((r.f, r.load), (18, int(6)));
        assert_eq!(r.per_user_load, Ratio::new(4, 9) / int(2));
        assert!(cweg_tgdd_metrics(2, 3, 2).is_err());
    }

    #[test]
    fn jcm() {
        let r = jcm_metrics(30, Ratio::new(2, 5)).unwrap();
        assert_eq!(r.f, 12 * binom(30, 12));
        assert_eq!(jcm_metrics(30, int(1)).unwrap().load, int(0));
        assert!(matches!(jcm_metrics(7, Ratio::new(1, 3)), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn per_user_loads() {
        let t1: Vec<Ratio> = tdesign_table(7, 3, 2, 3).unwrap().iter().map(|r| r.per_user_load).collect();
        assert_eq!(t1, vec![Ratio::new(2, 7), Ratio::new(2, 7), Ratio::new(4, 7)]);
        let t2: Vec<String> =
            tgdd_table(3, 3, 2, 2).unwrap().iter().map(|r| fmt_decimal(&r.per_user_load)).collect();
        assert_eq!(t2, vec!["0.148", "0.222", "0.111"]);
    }

    #[test]
    fn envelope_basics() {
        let pts = [MemoryLoadPoint::new(int(12), int(6)), MemoryLoadPoint::new(int(20), Ratio::new(5, 3))];
        let env = memory_share(&pts, 30, 30).unwrap();
        assert_eq!(env.vertices()[0], MemoryLoadPoint::new(int(0), int(30)));
        assert_eq!(*env.vertices().last().unwrap(), MemoryLoadPoint::new(int(30), int(0)));
        assert_eq!(env.query(int(12)).unwrap(), int(6));
        assert!(matches!(env.query(int(31)), Err(Error::OutOfRange(_))));
        assert_eq!(env.sample().len(), 31);
    }

    #[test]
    fn summary_matches_constructions() {
        let p = SummaryParams {
            design: Some((fixtures::fano(), 1)),
            grouped: Some((3, 2, 2)),
            complete: Some((6, 2, 1)),
        };
        let checks = summary_checks(&p).unwrap();
        assert!(!checks.is_empty());
        for c in &checks {
            assert!(c.passed(), "{:?}", c);
        }
    }

    #[test]
    fn text_layout() {
        let rows = tdesign_table(7, 3, 2, 3).unwrap();
        let text = render_text(&rows);
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().next().unwrap().starts_with("scheme"));
        assert_eq!(render_csv(&rows).lines().count(), 4);
    }
}
