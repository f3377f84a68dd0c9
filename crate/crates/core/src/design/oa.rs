use std::collections::HashMap;

use super::{Design, Resolution};
use crate::field::Field;
use crate::math::{combinations, hamming, pow, tuples};
use crate::{Error, Result};

/// Rows over the alphabet `1..=q`, verified to have strength `t` and index λ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalArray {
    q: u32,
    rows: Vec<Vec<u32>>,
    strength: usize,
    index: u64,
    zero_based: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OaProfile {
    Index(u64),
    NotAnOa,
}

impl OrthogonalArray {
    pub fn new(q: u32, rows: Vec<Vec<u32>>, strength: usize) -> Result<Self> {
        match oa_profile(&rows, q, strength)? {
            OaProfile::Index(index) => Ok(OrthogonalArray { q, rows, strength, index, zero_based: false }),
            OaProfile::NotAnOa => Err(Error::PreconditionFailed(format!("rows do not form a strength-{strength} OA"))),
        }
    }

    /// Uses the largest strength the rows support.
    pub fn with_max_strength(q: u32, rows: Vec<Vec<u32>>) -> Result<Self> {
        let r = rows.first().map(Vec::len).unwrap_or(0);
        for t in (1..=r).rev() {
            if let OaProfile::Index(_) = oa_profile(&rows, q, t)? {
                return Self::new(q, rows, t);
            }
        }
        Err(Error::PreconditionFailed("rows do not form an OA of any strength".into()))
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn columns(&self) -> usize {
        self.rows.first().map(Vec::len).unwrap_or(0)
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn zero_based(&self) -> bool {
        self.zero_based
    }

    pub fn set_zero_based(&mut self, on: bool) {
        self.zero_based = on;
    }
}

/// Exhaustive count of `t`-tuples over every choice of `t` columns.
pub fn oa_profile(rows: &[Vec<u32>], q: u32, t: usize) -> Result<OaProfile> {
    let r = rows.first().map(Vec::len).unwrap_or(0);
    if let Some(i) = rows.iter().position(|row| row.len() != r) {
        return Err(Error::malformed(i + 1, format!("row has {} entries, expected {r}", rows[i].len())));
    }
    if t > r {
        return Err(Error::invalid(format!("strength {t} exceeds {r} columns")));
    }
    if rows.iter().flatten().any(|&x| x == 0 || x > q) {
        return Err(Error::invalid(format!("entries must lie in 1..={q}")));
    }
    let expected_tuples = pow(u64::from(q), t as u64);
    let mut lambda = None;
    for cols in combinations(r, t) {
        let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
        for row in rows {
            *counts.entry(cols.iter().map(|&c| row[c]).collect()).or_insert(0) += 1;
        }
        if counts.len() as u128 != expected_tuples {
            return Ok(OaProfile::NotAnOa);
        }
        for &c in counts.values() {
            if *lambda.get_or_insert(c) != c {
                return Ok(OaProfile::NotAnOa);
            }
        }
    }
    Ok(lambda.map_or(OaProfile::NotAnOa, OaProfile::Index))
}

/// Rows `(d_1..d_m)` over `[q]` with `Σ d_i ≡ m (mod q)`, lexicographic.
pub fn proper_oa(q: u32, m: usize) -> Result<OrthogonalArray> {
    if q < 2 || m < 2 {
        return Err(Error::invalid(format!("proper OA needs q >= 2 and m >= 2, got q={q} m={m}")));
    }
    let rows = tuples(q as usize, m - 1)
        .map(|prefix| {
            let mut row: Vec<u32> = prefix.iter().map(|&d| d as u32 + 1).collect();
            let sum: u64 = row.iter().map(|&d| u64::from(d)).sum();
            let last = (m as u64 + u64::from(q) * sum - sum) % u64::from(q);
            row.push(if last == 0 { q } else { last as u32 });
            row
        })
        .collect();
    Ok(OrthogonalArray { q, rows, strength: m - 1, index: 1, zero_based: false })
}

/// Minimum pairwise Hamming distance of an index-1 array.
pub fn oa_min_distance(oa: &OrthogonalArray) -> Result<usize> {
    if oa.index() != 1 {
        return Err(Error::NotApplicable(format!("index {} is not 1", oa.index())));
    }
    let rows = oa.rows();
    let mut best = None;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let d = hamming(&rows[i], &rows[j]);
            best = Some(best.map_or(d, |b: usize| b.min(d)));
        }
    }
    best.ok_or_else(|| Error::NotApplicable("fewer than two rows".into()))
}

/// True when every vector of `[q]^r` is within `radius` of some row.
pub fn covering_check(oa: &OrthogonalArray, radius: usize) -> bool {
    tuples(oa.q() as usize, oa.columns()).all(|v| {
        let v: Vec<u32> = v.iter().map(|&x| x as u32 + 1).collect();
        oa.rows().iter().any(|row| hamming(row, &v) <= radius)
    })
}

/// Codewords `msg · G` of a linear code over GF(q) as an OA; `columns` are the columns of `G`.
/// The strength is the code dimension, so the code must be MDS.
pub fn linear_code_oa(q: u32, columns: &[Vec<u32>]) -> Result<OrthogonalArray> {
    let field = Field::new(q)?;
    let s = columns.first().map(Vec::len).ok_or_else(|| Error::invalid("no code columns"))?;
    if columns.iter().any(|c| c.len() != s) || columns.iter().flatten().any(|&x| x >= q) {
        return Err(Error::invalid("code columns must share a length and lie in GF(q)"));
    }
    let rows = tuples(q as usize, s)
        .map(|msg| {
            let msg: Vec<u32> = msg.iter().map(|&x| x as u32).collect();
            columns.iter().map(|c| field.dot(&msg, c) + 1).collect()
        })
        .collect();
    OrthogonalArray::new(q, rows, s)
}

/// Doubly extended Reed–Solomon code of length `n <= q + 1` and dimension `s <= q`:
/// evaluations at `0, 1, g, g^2, …` followed by the point at infinity.
pub fn reed_solomon_oa(q: u32, n: usize, s: usize) -> Result<OrthogonalArray> {
    let field = Field::new(q)?;
    if s == 0 || s > n || n > q as usize + 1 || s > q as usize {
        return Err(Error::invalid(format!("no Reed-Solomon code with q={q} n={n} s={s}")));
    }
    let g = field.primitive();
    let mut points = vec![0u32];
    let mut x = 1;
    for _ in 1..q {
        points.push(x);
        x = field.mul(x, g);
    }
    let mut columns: Vec<Vec<u32>> = points
        .iter()
        .map(|&a| {
            let mut col = vec![1u32; s];
            for i in 1..s {
                col[i] = field.mul(col[i - 1], a);
            }
            col
        })
        .collect();
    let mut inf = vec![0u32; s];
    inf[s - 1] = 1;
    columns.push(inf);
    columns.truncate(n);
    linear_code_oa(q, &columns)
}

/// One parallel class per column; class `c` holds, for each symbol, the rows carrying it in
/// column `c`. Blocks inside a class are sorted lexicographically.
pub fn crd_from_oa(oa: &OrthogonalArray) -> Result<Resolution> {
    let rows = oa.rows();
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| rows[a].cmp(&rows[b]).then(a.cmp(&b)));
    if let Some(w) = order.windows(2).find(|w| rows[w[0]] == rows[w[1]]) {
        return Err(Error::DuplicateRows(w[0] + 1, w[1] + 1));
    }
    let mut blocks = Vec::new();
    let mut classes = Vec::new();
    for c in 0..oa.columns() {
        let mut class_blocks: Vec<Vec<u32>> = (1..=oa.q())
            .map(|s| (0..rows.len()).filter(|&i| rows[i][c] == s).map(|i| i as u32 + 1).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        class_blocks.sort();
        let mut class = Vec::new();
        for b in class_blocks {
            class.push(blocks.len());
            blocks.push(b);
        }
        classes.push(class);
    }
    Resolution::new(Design::new(rows.len(), blocks)?, classes)
}
