use std::collections::BTreeMap;

use super::Design;
use crate::field::Field;
use crate::math::combinations;
use crate::{Error, Result};

/// A design together with a partition of its blocks into parallel classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    design: Design,
    classes: Vec<Vec<usize>>,
}

impl Resolution {
    /// `classes` hold 0-based block indices.
    pub fn new(design: Design, classes: Vec<Vec<usize>>) -> Result<Self> {
        let b = design.b();
        let mut owner = vec![None; b];
        for (c, class) in classes.iter().enumerate() {
            for &i in class {
                if i >= b {
                    return Err(Error::invalid(format!("class {} names block {} of {b}", c + 1, i + 1)));
                }
                if owner[i].replace(c).is_some() {
                    return Err(Error::invalid(format!("block {} is in two classes", i + 1)));
                }
            }
        }
        if let Some(i) = owner.iter().position(Option::is_none) {
            return Err(Error::invalid(format!("block {} is in no class", i + 1)));
        }
        let k = design.block_size().ok_or_else(|| Error::invalid("resolvable designs need equal block sizes"))?;
        if design.v() % k != 0 {
            return Err(Error::invalid("block size does not divide v"));
        }
        for (c, class) in classes.iter().enumerate() {
            let mut hit = vec![false; design.v()];
            for &i in class {
                for &x in &design.blocks()[i] {
                    if std::mem::replace(&mut hit[x as usize - 1], true) {
                        return Err(Error::invalid(format!("class {} covers point {x} twice", c + 1)));
                    }
                }
            }
            if hit.iter().any(|h| !h) || class.len() != design.v() / k {
                return Err(Error::invalid(format!("class {} does not partition the points", c + 1)));
            }
        }
        Ok(Resolution { design, classes })
    }

    pub fn design(&self) -> &Design {
        &self.design
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn r(&self) -> usize {
        self.classes.len()
    }

    pub fn into_design(self) -> Design {
        self.design
    }
}

/// Cross-class intersection sizes: `mu[i]` is `Some(μ)` when any `i` blocks from `i` distinct
/// classes always meet in exactly `μ > 0` points.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CrdProfile {
    pub mu: BTreeMap<usize, Option<u64>>,
}

impl CrdProfile {
    pub fn is_crd(&self) -> bool {
        self.mu.values().any(Option::is_some)
    }

    pub fn mu(&self, i: usize) -> Option<u64> {
        self.mu.get(&i).copied().flatten()
    }

    /// Smallest `i` with a constant intersection.
    pub fn first(&self) -> Option<(usize, u64)> {
        self.mu.iter().find_map(|(&i, m)| m.map(|m| (i, m)))
    }
}

type Mask = Vec<u64>;

fn mask_of(block: &[u32], words: usize) -> Mask {
    let mut m = vec![0u64; words];
    for &x in block {
        let i = x as usize - 1;
        m[i / 64] |= 1 << (i % 64);
    }
    m
}

fn constant_intersection(classes: &[&[Mask]], acc: &Mask, want: &mut Option<u64>) -> bool {
    let Some((head, rest)) = classes.split_first() else {
        let n: u64 = acc.iter().map(|w| u64::from(w.count_ones())).sum();
        return match want {
            Some(w) => *w == n,
            None => {
                *want = Some(n);
                true
            }
        };
    };
    head.iter().all(|m| {
        let next: Mask = acc.iter().zip(m).map(|(a, b)| a & b).collect();
        constant_intersection(rest, &next, want)
    })
}

pub fn crd_profile(res: &Resolution) -> CrdProfile {
    let words = res.design().v().div_ceil(64).max(1);
    let masks: Vec<Vec<Mask>> = res
        .classes()
        .iter()
        .map(|c| c.iter().map(|&i| mask_of(&res.design().blocks()[i], words)).collect())
        .collect();
    let full: Mask = {
        let mut m = vec![u64::MAX; words];
        let v = res.design().v();
        if v % 64 != 0 {
            m[words - 1] = (1u64 << (v % 64)) - 1;
        }
        m
    };
    let mut mu = BTreeMap::new();
    for i in 2..=res.r() {
        let mut value = None;
        let ok = combinations(res.r(), i).all(|choice| {
            let chosen: Vec<&[Mask]> = choice.iter().map(|&c| masks[c].as_slice()).collect();
            constant_intersection(&chosen, &full, &mut value)
        });
        mu.insert(i, if ok { value.filter(|&n| n > 0) } else { None });
    }
    CrdProfile { mu }
}

/// Points are the `q^s` messages (integer `x` read as base-`q` digits, most significant first);
/// column `c` contributes the class `{ {x : <x, c> = val} : val in GF(q) }`.
pub fn resolvable_from_code(q: u32, columns: &[Vec<u32>]) -> Result<Resolution> {
    let field = Field::new(q)?;
    let s = columns.first().map(Vec::len).ok_or_else(|| Error::invalid("no code columns"))?;
    if s == 0 || columns.iter().any(|c| c.len() != s) {
        return Err(Error::invalid("code columns must share a positive length"));
    }
    if columns.iter().flatten().any(|&x| x >= q) {
        return Err(Error::invalid(format!("column entries must lie in 0..{q}")));
    }
    if let Some(i) = columns.iter().position(|c| c.iter().all(|&x| x == 0)) {
        return Err(Error::invalid(format!("column {} is zero", i + 1)));
    }
    let n_msgs = (q as usize).pow(s as u32);
    let messages: Vec<Vec<u32>> = (0..n_msgs)
        .map(|mut x| {
            let mut m = vec![0; s];
            for slot in m.iter_mut().rev() {
                *slot = (x % q as usize) as u32;
                x /= q as usize;
            }
            m
        })
        .collect();
    let mut blocks = Vec::new();
    let mut classes = Vec::new();
    for c in columns {
        let mut class = Vec::new();
        for val in 0..q {
            let block: Vec<u32> = messages
                .iter()
                .enumerate()
                .filter(|(_, m)| field.dot(m, c) == val)
                .map(|(x, _)| x as u32 + 1)
                .collect();
            class.push(blocks.len());
            blocks.push(block);
        }
        classes.push(class);
    }
    let mut design = Design::new(n_msgs, blocks)?;
    design.set_zero_based(true);
    Resolution::new(design, classes)
}
