//! Line-oriented text formats for designs, arrays and scheme bundles.
//!
//! Blank lines and lines starting with `#` are ignored everywhere. Points and symbols may be
//! written 0-based; a file containing a `0` is read as 0-based and written back the same way.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::array::{Cell, CodedArray, SenderMap};
use crate::design::{Design, GddPoint, GroupDivisibleDesign, OrthogonalArray, Resolution};
use crate::math::{fmt_ratio, parse_ratio};
use crate::scheme::{AccessTopology, MultiaccessLayout, PlacementArray, SchemeBundle, SchemeMetrics};
use crate::{Error, Result};

/// Non-empty, non-comment lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses `word key=value …`, requiring each key in `required` and allowing those in `optional`.
fn header<'a>(
    line: Option<(usize, &'a str)>,
    word: &str,
    required: &[&str],
    optional: &[&str],
) -> Result<(usize, Vec<(&'a str, usize)>)> {
    let (n, l) = line.ok_or_else(|| Error::malformed(1, format!("missing `{word}` header")))?;
    let mut toks = l.split_whitespace();
    if toks.next() != Some(word) {
        return Err(Error::malformed(n, format!("expected `{word}` header")));
    }
    let mut out = Vec::new();
    for tok in toks {
        let (key, val) = tok.split_once('=').ok_or_else(|| Error::malformed(n, format!("bad field `{tok}`")))?;
        if !required.contains(&key) && !optional.contains(&key) {
            return Err(Error::malformed(n, format!("unknown field `{key}`")));
        }
        if out.iter().any(|(k, _)| *k == key) {
            return Err(Error::malformed(n, format!("repeated field `{key}`")));
        }
        let val = val.parse().map_err(|_| Error::malformed(n, format!("bad value in `{tok}`")))?;
        out.push((key, val));
    }
    for key in required {
        if !out.iter().any(|(k, _)| k == key) {
            return Err(Error::malformed(n, format!("missing field `{key}=`")));
        }
    }
    Ok((n, out))
}

fn field(fields: &[(&str, usize)], key: &str) -> Option<usize> {
    fields.iter().find(|(k, _)| *k == key).map(|&(_, v)| v)
}

fn numbers(n: usize, body: &str) -> Result<Vec<u32>> {
    body.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::malformed(n, format!("bad number `{t}`"))))
        .collect()
}

/// A design file: the design and any parallel classes (0-based block indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignFile {
    pub design: Design,
    pub classes: Vec<Vec<usize>>,
}

impl DesignFile {
    pub fn into_resolution(self) -> Result<Resolution> {
        if self.classes.is_empty() {
            return Err(Error::invalid("design file lists no classes"));
        }
        Resolution::new(self.design, self.classes)
    }
}

pub fn parse_design(text: &str) -> Result<DesignFile> {
    let mut it = lines(text);
    let (hn, fields) = header(it.next(), "design", &["v"], &["k"])?;
    let v = field(&fields, "v").unwrap_or(0);
    let mut blocks: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut classes: Vec<(usize, Vec<u32>)> = Vec::new();
    for (n, l) in it {
        if let Some(body) = l.strip_prefix("block:") {
            blocks.push((n, numbers(n, body)?));
        } else if let Some(body) = l.strip_prefix("class:") {
            classes.push((n, numbers(n, body)?));
        } else {
            return Err(Error::malformed(n, format!("unexpected line `{l}`")));
        }
    }
    let zero_based = blocks.iter().any(|(_, b)| b.contains(&0));
    let shift = u32::from(zero_based);
    for (n, b) in &mut blocks {
        if b.is_empty() {
            return Err(Error::malformed(*n, "empty block"));
        }
        if let Some(k) = field(&fields, "k") {
            if b.len() != k {
                return Err(Error::malformed(*n, format!("block has {} points, header says k={k}", b.len())));
            }
        }
        for x in b.iter_mut() {
            *x += shift;
            if *x as usize > v {
                return Err(Error::malformed(*n, format!("point outside the {v} points")));
            }
        }
    }
    let first_line = blocks.first().map_or(hn, |(n, _)| *n);
    let mut design = Design::new(v, blocks.into_iter().map(|(_, b)| b).collect())
        .map_err(|e| Error::malformed(first_line, e.to_string()))?;
    design.set_zero_based(zero_based);
    let b = design.b();
    let classes = classes
        .into_iter()
        .map(|(n, c)| {
            c.into_iter()
                .map(|i| {
                    if i == 0 || i as usize > b {
                        Err(Error::malformed(n, format!("class names block {i} of {b}")))
                    } else {
                        Ok(i as usize - 1)
                    }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(DesignFile { design, classes })
}

pub fn write_design(design: &Design, classes: &[Vec<usize>]) -> String {
    let mut out = format!("design v={}", design.v());
    if let Some(k) = design.block_size() {
        let _ = write!(out, " k={k}");
    }
    out.push('\n');
    let shift = u32::from(design.zero_based());
    for b in design.blocks() {
        let pts: Vec<String> = b.iter().map(|x| (x - shift).to_string()).collect();
        let _ = writeln!(out, "block: {}", pts.join(" "));
    }
    for c in classes {
        let idx: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
        let _ = writeln!(out, "class: {}", idx.join(" "));
    }
    out
}

pub fn write_resolution(res: &Resolution) -> String {
    write_design(res.design(), res.classes())
}

/// OA rows as read: symbols are stored `1..=q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OaFile {
    pub q: u32,
    pub rows: Vec<Vec<u32>>,
    pub zero_based: bool,
}

impl OaFile {
    /// Builds the OA at the largest strength the rows support.
    pub fn into_oa(self) -> Result<OrthogonalArray> {
        let mut oa = OrthogonalArray::with_max_strength(self.q, self.rows)?;
        oa.set_zero_based(self.zero_based);
        Ok(oa)
    }
}

pub fn parse_oa(text: &str) -> Result<OaFile> {
    let mut it = lines(text);
    let (_, fields) = header(it.next(), "oa", &["q", "r"], &[])?;
    let (q, r) = (field(&fields, "q").unwrap_or(0) as u32, field(&fields, "r").unwrap_or(0));
    let mut rows = Vec::new();
    for (n, l) in it {
        let row = numbers(n, l)?;
        if row.len() != r {
            return Err(Error::malformed(n, format!("row has {} symbols, header says r={r}", row.len())));
        }
        rows.push((n, row));
    }
    let zero_based = rows.iter().any(|(_, row)| row.contains(&0));
    let shift = u32::from(zero_based);
    let mut out = Vec::with_capacity(rows.len());
    for (n, mut row) in rows {
        for x in &mut row {
            *x += shift;
            if *x > q {
                return Err(Error::malformed(n, format!("symbol outside an alphabet of size {q}")));
            }
        }
        out.push(row);
    }
    Ok(OaFile { q, rows: out, zero_based })
}

pub fn write_oa(oa: &OrthogonalArray) -> String {
    let mut out = format!("oa q={} r={}\n", oa.q(), oa.columns());
    let shift = u32::from(oa.zero_based());
    for row in oa.rows() {
        let s: Vec<String> = row.iter().map(|x| (x - shift).to_string()).collect();
        let _ = writeln!(out, "{}", s.join(" "));
    }
    out
}

fn gdd_point(n: usize, tok: &str) -> Result<GddPoint> {
    let bad = || Error::malformed(n, format!("bad point `{tok}`"));
    let inner = tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')).ok_or_else(bad)?;
    let (u, v) = inner.split_once(',').ok_or_else(bad)?;
    Ok((u.trim().parse().map_err(|_| bad())?, v.trim().parse().map_err(|_| bad())?))
}

pub fn parse_gdd(text: &str) -> Result<GroupDivisibleDesign> {
    let mut it = lines(text);
    let (hn, fields) = header(it.next(), "gdd", &["m", "q"], &[])?;
    let (m, q) = (field(&fields, "m").unwrap_or(0) as u32, field(&fields, "q").unwrap_or(0) as u32);
    let mut blocks = Vec::new();
    for (n, l) in it {
        let body = l.strip_prefix("block:").ok_or_else(|| Error::malformed(n, format!("unexpected line `{l}`")))?;
        let b = body.split_whitespace().map(|t| gdd_point(n, t)).collect::<Result<Vec<_>>>()?;
        GroupDivisibleDesign::new(m, q, vec![b.clone()]).map_err(|e| Error::malformed(n, e.to_string()))?;
        blocks.push(b);
    }
    GroupDivisibleDesign::new(m, q, blocks).map_err(|e| Error::malformed(hn, e.to_string()))
}

pub fn write_gdd(gdd: &GroupDivisibleDesign) -> String {
    let mut out = format!("gdd m={} q={}\n", gdd.m(), gdd.q());
    for b in gdd.blocks() {
        let pts: Vec<String> = b.iter().map(|(u, v)| format!("({u},{v})")).collect();
        let _ = writeln!(out, "block: {}", pts.join(" "));
    }
    out
}

/// A parsed array file: stars and labels, plus the sender map if `phi:` lines are present.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayFile {
    pub array: CodedArray,
    pub phi: Option<SenderMap>,
}

pub fn parse_pda(text: &str) -> Result<ArrayFile> {
    let mut it = lines(text).peekable();
    let (hn, fields) = header(it.next(), "pda", &["F", "K"], &[])?;
    let (f, k) = (field(&fields, "F").unwrap_or(0), field(&fields, "K").unwrap_or(0));
    let mut cells = Vec::with_capacity(f * k);
    for _ in 0..f {
        let (n, l) = it.next().ok_or_else(|| Error::malformed(hn, format!("expected {f} rows")))?;
        let row: Vec<Cell> = l
            .split_whitespace()
            .map(|t| match t {
                "*" => Ok(Cell::Star),
                _ => t
                    .strip_prefix('s')
                    .and_then(|id| id.parse().ok())
                    .filter(|&id| id > 0)
                    .map(Cell::Label)
                    .ok_or_else(|| Error::malformed(n, format!("bad cell `{t}`"))),
            })
            .collect::<Result<_>>()?;
        if row.len() != k {
            return Err(Error::malformed(n, format!("row has {} cells, header says K={k}", row.len())));
        }
        cells.extend(row);
    }
    let array = CodedArray::new(f, k, cells).map_err(|e| Error::malformed(hn, e.to_string()))?;
    let mut phi: Vec<Option<usize>> = vec![None; array.max_label() as usize];
    let mut any = false;
    for (n, l) in it {
        let body = l.strip_prefix("phi:").ok_or_else(|| Error::malformed(n, format!("unexpected line `{l}`")))?;
        let bad = || Error::malformed(n, format!("bad sender line `{l}`"));
        let (lab, col) = body.trim().split_once("->").ok_or_else(bad)?;
        let lab: usize = lab.trim().strip_prefix('s').and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let col: usize = col.trim().parse().map_err(|_| bad())?;
        if lab == 0 || lab > phi.len() || col == 0 || col > k {
            return Err(Error::malformed(n, format!("sender line out of range `{l}`")));
        }
        if phi[lab - 1].replace(col - 1).is_some() {
            return Err(Error::malformed(n, format!("second sender for s{lab}")));
        }
        any = true;
    }
    let phi = if any {
        let missing = phi.iter().position(Option::is_none);
        if let Some(s) = missing {
            return Err(Error::malformed(hn, format!("no sender given for s{}", s + 1)));
        }
        Some(SenderMap::new(phi.into_iter().flatten().collect()))
    } else {
        None
    };
    Ok(ArrayFile { array, phi })
}

pub fn write_pda(array: &CodedArray, phi: Option<&SenderMap>) -> String {
    let mut out = format!("pda F={} K={}\n", array.rows(), array.cols());
    for r in 0..array.rows() {
        let toks: Vec<String> = array
            .row(r)
            .iter()
            .map(|c| match c {
                Cell::Star => "*".to_string(),
                Cell::Label(s) => format!("s{s}"),
            })
            .collect();
        let _ = writeln!(out, "{}", toks.join(" "));
    }
    if let Some(phi) = phi {
        for (i, c) in phi.as_slice().iter().enumerate() {
            let _ = writeln!(out, "phi: s{}->{}", i + 1, c + 1);
        }
    }
    out
}

/// Placement arrays use `*` for stored rows and `.` for empty cells.
pub fn parse_placement(text: &str) -> Result<PlacementArray> {
    let mut it = lines(text);
    let (hn, fields) = header(it.next(), "pda", &["F", "K"], &[])?;
    let (f, k) = (field(&fields, "F").unwrap_or(0), field(&fields, "K").unwrap_or(0));
    let mut stars = Vec::with_capacity(f * k);
    for _ in 0..f {
        let (n, l) = it.next().ok_or_else(|| Error::malformed(hn, format!("expected {f} rows")))?;
        let row: Vec<bool> = l
            .split_whitespace()
            .map(|t| match t {
                "*" => Ok(true),
                "." => Ok(false),
                _ => Err(Error::malformed(n, format!("bad placement cell `{t}`"))),
            })
            .collect::<Result<_>>()?;
        if row.len() != k {
            return Err(Error::malformed(n, format!("row has {} cells, header says K={k}", row.len())));
        }
        stars.extend(row);
    }
    if let Some((n, l)) = it.next() {
        return Err(Error::malformed(n, format!("trailing line `{l}`")));
    }
    PlacementArray::new(f, k, stars).map_err(|e| Error::malformed(hn, e.to_string()))
}

pub fn write_placement(p: &PlacementArray) -> String {
    let mut out = format!("pda F={} K={}\n", p.rows(), p.caches());
    for r in 0..p.rows() {
        let toks: Vec<&str> = (0..p.caches()).map(|c| if p.is_star(r, c) { "*" } else { "." }).collect();
        let _ = writeln!(out, "{}", toks.join(" "));
    }
    out
}

pub fn parse_topology(text: &str) -> Result<AccessTopology> {
    let mut users = Vec::new();
    let mut first = 1;
    for (n, l) in lines(text) {
        if users.is_empty() {
            first = n;
        }
        let body = l.strip_prefix("user:").ok_or_else(|| Error::malformed(n, format!("unexpected line `{l}`")))?;
        let caches = numbers(n, body)?;
        if caches.is_empty() || caches.contains(&0) {
            return Err(Error::malformed(n, "caches are numbered from 1"));
        }
        users.push(caches.into_iter().map(|c| c as usize - 1).collect());
    }
    AccessTopology::new(users).map_err(|e| Error::malformed(first, e.to_string()))
}

pub fn write_topology(t: &AccessTopology) -> String {
    let mut out = String::new();
    for b in t.users() {
        let s: Vec<String> = b.iter().map(|c| (c + 1).to_string()).collect();
        let _ = writeln!(out, "user: {}", s.join(" "));
    }
    out
}

pub fn write_metrics(m: &SchemeMetrics) -> String {
    m.to_lines().into_iter().map(|l| l + "\n").collect()
}

pub fn parse_metrics(text: &str) -> Result<SchemeMetrics> {
    let mut ints = [None; 6];
    let keys = ["K", "Gamma", "L", "F", "Z", "S"];
    let (mut mr, mut load, mut per_user) = (None, None, None);
    for (n, l) in lines(text) {
        let (key, val) = l.split_once('=').ok_or_else(|| Error::malformed(n, format!("expected key=value, got `{l}`")))?;
        let bad = || Error::malformed(n, format!("bad value for {key}"));
        if let Some(i) = keys.iter().position(|k| *k == key) {
            ints[i] = Some(val.parse::<u64>().map_err(|_| bad())?);
        } else {
            let r = parse_ratio(val).ok_or_else(bad)?;
            match key {
                "M/N" => mr = Some(r),
                "R" => load = Some(r),
                "R/K" => per_user = Some(r),
                _ => return Err(Error::malformed(n, format!("unknown key `{key}`"))),
            }
        }
    }
    let get = |i: usize| ints[i].ok_or_else(|| Error::malformed(1, format!("missing {}=", keys[i])));
    let mr = mr.ok_or_else(|| Error::malformed(1, "missing M/N="))?;
    let m = SchemeMetrics::multiaccess(get(0)?, get(1)?, get(2)?, get(3)?, get(4)?, get(5)?, mr);
    if load.is_some_and(|r| r != m.load) || per_user.is_some_and(|r| r != m.per_user_load) {
        return Err(Error::malformed(1, format!("R disagrees with S/F = {}", fmt_ratio(&m.load))));
    }
    Ok(m)
}

fn read(dir: &Path, name: &str) -> Result<String> {
    fs::read_to_string(dir.join(name))
        .map_err(|e| Error::malformed(0, format!("cannot read {}: {e}", dir.join(name).display())))
}

fn in_file<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Malformed { line, msg } => Error::Malformed { line, msg: format!("{name}: {msg}") },
        other => other,
    })
}

/// Writes `delivery.pda` and `metrics.txt`, plus `placement.pda` and `topology.txt` for
/// multiaccess bundles.
pub fn write_bundle(dir: &Path, bundle: &SchemeBundle) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("delivery.pda"), write_pda(&bundle.delivery, Some(&bundle.phi)))?;
    fs::write(dir.join("metrics.txt"), write_metrics(&bundle.metrics))?;
    if let Some(layout) = &bundle.layout {
        fs::write(dir.join("placement.pda"), write_placement(&layout.placement))?;
        fs::write(dir.join("topology.txt"), write_topology(&layout.topology))?;
    }
    Ok(())
}

/// Reads a bundle as written, without re-running the checker, so that damaged bundles can still
/// be simulated.
pub fn read_bundle(dir: &Path) -> Result<SchemeBundle> {
    let ArrayFile { array, phi } = in_file("delivery.pda", parse_pda(&read(dir, "delivery.pda")?))?;
    let phi = phi.ok_or_else(|| Error::malformed(0, "delivery.pda: no phi lines"))?;
    let metrics = in_file("metrics.txt", parse_metrics(&read(dir, "metrics.txt")?))?;
    let layout = if dir.join("placement.pda").exists() {
        let placement = in_file("placement.pda", parse_placement(&read(dir, "placement.pda")?))?;
        let topology = in_file("topology.txt", parse_topology(&read(dir, "topology.txt")?))?;
        Some(MultiaccessLayout { placement, topology })
    } else {
        None
    };
    Ok(SchemeBundle { layout, delivery: array, phi, metrics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn design_round_trip() {
        let res = fixtures::k4_pairs_resolution();
        let text = write_resolution(&res);
        let back = parse_design(&text).unwrap().into_resolution().unwrap();
        assert_eq!(back, res);
        assert_eq!(write_resolution(&back), text);
    }

    #[test]
    fn zero_based_points() {
        let f = parse_design("design v=3\nblock: 0 1\nblock: 1 2\n").unwrap();
        assert!(f.design.zero_based());
        assert_eq!(f.design.blocks(), &[vec![1, 2], vec![2, 3]]);
        assert_eq!(write_design(&f.design, &[]), "design v=3 k=2\nblock: 0 1\nblock: 1 2\n");
    }

    #[test]
    fn design_errors_carry_lines() {
        let e = parse_design("design v=4\nblock: 1 2\nblock: 1 x\n").unwrap_err();
        assert!(matches!(e, Error::Malformed { line: 3, .. }), "{e}");
        let e = parse_design("design v=4 k=2\n\nblock: 1 2 3\n").unwrap_err();
        assert!(matches!(e, Error::Malformed { line: 3, .. }), "{e}");
        assert!(parse_design("design v=4 w=1\n").is_err());
        assert!(parse_design("block: 1 2\n").is_err());
        assert!(parse_design("design v=4\nblock: 1 2\nextra\n").is_err());
    }

    #[test]
    fn pda_round_trip() {
        let (arr, phi) = fixtures::four_user_dpda();
        let text = write_pda(&arr, Some(&phi));
        assert!(text.starts_with("pda F=4 K=4\n* s3 * s1\n"));
        let back = parse_pda(&text).unwrap();
        assert_eq!(back.array.cells(), arr.cells());
        assert_eq!(back.phi, Some(phi.clone()));
        assert_eq!(write_pda(&back.array, back.phi.as_ref()), text);
    }

    #[test]
    fn pda_rejects_garbage() {
        assert!(parse_pda("pda F=1 K=2\n* s1 s2\n").is_err());
        assert!(parse_pda("pda F=1 K=2\n* t1\n").is_err());
        assert!(parse_pda("pda F=1 K=2\n* s1\nphi: s1->3\n").is_err());
        assert!(parse_pda("pda F=1 K=2\n* s1\nphi: s1->2\nphi: s1->1\n").is_err());
        assert!(parse_pda("pda F=2 K=2\n* s1\n").is_err());
    }

    #[test]
    fn oa_and_gdd_round_trip() {
        let oa = fixtures::oa_binary_7col();
        let text = write_oa(&oa);
        assert!(text.starts_with("oa q=2 r=7\n1 1 1 1 1 1 1\n"));
        assert_eq!(parse_oa(&text).unwrap().into_oa().unwrap(), oa);
        let g = fixtures::gdd_from_pairs();
        let text = write_gdd(&g);
        assert_eq!(write_gdd(&parse_gdd(&text).unwrap()), text);
        assert!(parse_gdd("gdd m=2 q=2\nblock: (1,1) (1,2)\n").is_err());
        assert!(parse_oa("oa q=2 r=2\n1 2 2\n").is_err());
    }

    #[test]
    fn metrics_round_trip() {
        let m = SchemeMetrics::multiaccess(27, 9, 2, 18, 10, 72, crate::math::ratio(1, 3));
        assert_eq!(parse_metrics(&write_metrics(&m)).unwrap(), m);
        assert!(parse_metrics("K=1\nGamma=1\nL=1\nF=2\nZ=1\nS=1\nM/N=1/2\nR=1/1\n").is_err());
    }

    #[test]
    fn placement_and_topology() {
        let p = PlacementArray::new(2, 2, vec![true, false, false, true]).unwrap();
        let text = write_placement(&p);
        assert_eq!(text, "pda F=2 K=2\n* .\n. *\n");
        assert_eq!(parse_placement(&text).unwrap(), p);
        let t = AccessTopology::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(parse_topology(&write_topology(&t)).unwrap(), t);
        assert!(parse_topology("user: 0 1\n").is_err());
    }
}
