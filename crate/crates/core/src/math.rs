//! Exact integer helpers: binomials, subset enumeration and rational display.

use num_traits::Zero;

/// Exact rational used for every memory ratio and load.
pub type Ratio = num_rational::Ratio<i128>;

/// `C(n, k)`, zero when `k > n`.
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication.
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// `C(n, k)` with signed arguments, zero whenever either is negative or `k > n`.
pub fn binom_i(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 {
        0
    } else {
        binom(n as u64, k as u64)
    }
}

pub fn pow(base: u64, exp: u64) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc *= u128::from(base);
    }
    acc
}

pub fn ratio(num: u128, den: u128) -> Ratio {
    Ratio::new(num as i128, den as i128)
}

pub fn int(n: u128) -> Ratio {
    Ratio::from_integer(n as i128)
}

/// Renders a rational as `p/q`, integers included (`2/1`).
pub fn fmt_ratio(r: &Ratio) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer.
pub fn parse_ratio(s: &str) -> Option<Ratio> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().ok()?;
            let q: i128 = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Ratio::new(p, q))
            }
        }
        None => s.parse::<i128>().ok().map(Ratio::from_integer),
    }
}

/// Decimal rendering rounded to three significant digits (display only).
pub fn fmt_decimal(r: &Ratio) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = *r < Ratio::zero();
    let a = if neg { -*r } else { *r };
    let mut exp = 0i32;
    let mut scaled = a;
    let ten = Ratio::from_integer(10);
    while scaled >= Ratio::from_integer(1000) {
        scaled /= ten;
        exp += 1;
    }
    while scaled < Ratio::from_integer(100) {
        scaled *= ten;
        exp -= 1;
    }
    let mut digits = (scaled + Ratio::new(1, 2)).floor().to_integer();
    if digits == 1000 {
        digits = 100;
        exp += 1;
    }
    let mut text = if exp >= 0 {
        format!("{digits}{}", "0".repeat(exp as usize))
    } else {
        let shift = (-exp) as usize;
        let mut s = format!("{:0>width$}", digits, width = shift + 1);
        s.insert(s.len() - shift, '.');
        s
    };
    if text.contains('.') {
        while text.ends_with('0') {
            text.pop();
        }
        if text.ends_with('.') {
            text.pop();
        }
    }
    if neg {
        format!("-{text}")
    } else {
        text
    }
}

/// Iterator over the `k`-subsets of `0..n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let k = self.cur.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cur[i] < self.n - k + i {
                self.cur[i] += 1;
                for j in i + 1..k {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

pub fn combinations(n: usize, k: usize) -> Combinations {
    Combinations { n, cur: (0..k).collect(), done: k > n }
}

/// All `k`-subsets of `items` in lexicographic order of positions.
pub fn subsets_of<T: Clone>(items: &[T], k: usize) -> impl Iterator<Item = Vec<T>> + '_ {
    combinations(items.len(), k).map(move |idx| idx.iter().map(|&i| items[i].clone()).collect())
}

/// Mixed-radix counter over `[0, q)^len`, last coordinate fastest.
pub fn tuples(q: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if len == 0 { 1 } else { q.checked_pow(len as u32).unwrap_or(0) };
    (0..total).map(move |mut x| {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = x % q;
            x /= q;
        }
        v
    })
}

pub fn hamming(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Size of the intersection of two sorted slices.
pub fn sorted_intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

pub fn is_sorted_subset(small: &[u32], big: &[u32]) -> bool {
    sorted_intersection_len(small, big) == small.len()
}
