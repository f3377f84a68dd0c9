//! Small published structures used by tests and the command line.

use crate::array::{Cell, CodedArray, SenderMap};
use crate::design::{resolvable_from_code, Design, GroupDivisibleDesign, OrthogonalArray, Resolution};

fn design(v: usize, blocks: &[&[u32]]) -> Design {
    Design::new(v, blocks.iter().map(|b| b.to_vec()).collect()).expect("fixture design")
}

/// The Fano plane, 2-(7,3,1).
pub fn fano() -> Design {
    design(7, &[&[1, 2, 4], &[2, 3, 5], &[3, 4, 6], &[4, 5, 7], &[1, 5, 6], &[2, 6, 7], &[1, 3, 7]])
}

/// 3-(8,4,1).
pub fn steiner_3_8_4() -> Design {
    design(
        8,
        &[
            &[1, 2, 5, 6],
            &[1, 2, 7, 8],
            &[1, 3, 5, 7],
            &[1, 3, 6, 8],
            &[1, 4, 5, 8],
            &[1, 4, 6, 7],
            &[1, 2, 3, 4],
            &[3, 4, 5, 6],
            &[3, 4, 7, 8],
            &[2, 4, 5, 7],
            &[2, 4, 6, 8],
            &[2, 3, 5, 8],
            &[2, 3, 6, 7],
            &[5, 6, 7, 8],
        ],
    )
}

/// 3-(10,4,1).
pub fn steiner_3_10_4() -> Design {
    design(
        10,
        &[
            &[1, 2, 3, 10],
            &[1, 2, 4, 5],
            &[1, 2, 6, 9],
            &[1, 2, 7, 8],
            &[1, 3, 4, 6],
            &[1, 3, 5, 8],
            &[1, 3, 7, 9],
            &[1, 4, 7, 10],
            &[1, 4, 8, 9],
            &[1, 5, 6, 7],
            &[1, 5, 9, 10],
            &[1, 6, 8, 10],
            &[2, 3, 4, 7],
            &[2, 3, 5, 6],
            &[2, 3, 8, 9],
            &[2, 4, 6, 8],
            &[2, 4, 9, 10],
            &[2, 5, 7, 9],
            &[2, 5, 8, 10],
            &[2, 6, 7, 10],
            &[3, 4, 5, 9],
            &[3, 4, 8, 10],
            &[3, 5, 7, 10],
            &[3, 6, 7, 8],
            &[3, 6, 9, 10],
            &[4, 5, 6, 10],
            &[4, 5, 7, 8],
            &[4, 6, 7, 9],
            &[5, 6, 8, 9],
            &[7, 8, 9, 10],
        ],
    )
}

/// 2-(6,3,2).
pub fn design_2_6_3_2() -> Design {
    design(
        6,
        &[
            &[1, 2, 4],
            &[1, 2, 6],
            &[1, 3, 4],
            &[1, 3, 5],
            &[1, 5, 6],
            &[2, 3, 5],
            &[2, 3, 6],
            &[2, 4, 5],
            &[3, 4, 6],
            &[4, 5, 6],
        ],
    )
}

/// Code columns over GF(3) giving the affine plane of order 3.
pub fn ag9_columns() -> Vec<Vec<u32>> {
    vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]
}

/// The affine plane of order 3 with its four parallel classes.
pub fn ag9_resolution() -> Resolution {
    resolvable_from_code(3, &ag9_columns()).expect("fixture code")
}

/// All pairs of `[4]` split into three perfect matchings.
pub fn k4_pairs_resolution() -> Resolution {
    let d = design(4, &[&[1, 2], &[1, 3], &[1, 4], &[2, 3], &[2, 4], &[3, 4]]);
    Resolution::new(d, vec![vec![0, 5], vec![1, 4], vec![2, 3]]).expect("fixture resolution")
}

/// Nine pairs of `[6]` in three classes; not cross resolvable.
pub fn six_point_resolution() -> Resolution {
    let d = design(6, &[&[1, 2], &[1, 3], &[1, 4], &[2, 5], &[2, 6], &[3, 4], &[3, 5], &[4, 6], &[5, 6]]);
    Resolution::new(d, vec![vec![0, 5, 8], vec![1, 3, 7], vec![2, 4, 6]]).expect("fixture resolution")
}

fn zero_based_oa(q: u32, rows: &[&str], strength: usize) -> OrthogonalArray {
    let rows = rows.iter().map(|r| r.bytes().map(|c| u32::from(c - b'0') + 1).collect()).collect();
    let mut oa = OrthogonalArray::new(q, rows, strength).expect("fixture OA");
    oa.set_zero_based(true);
    oa
}

/// Binary OA with 3 columns, strength 2, index 1.
pub fn oa_binary_3col() -> OrthogonalArray {
    zero_based_oa(2, &["110", "000", "101", "011"], 2)
}

/// Binary OA with 7 columns, strength 2, index 2.
pub fn oa_binary_7col() -> OrthogonalArray {
    zero_based_oa(
        2,
        &["1111111", "1110000", "1001100", "1000011", "0101010", "0100101", "0011001", "0010110"],
        2,
    )
}

/// Eight of the nine rows of the ternary length-3 zero-sum code; `321` is absent, so they do
/// not form an OA.
pub fn oa_ternary_eight_rows() -> Vec<Vec<u32>> {
    ["111", "123", "132", "213", "222", "231", "312", "333"]
        .iter()
        .map(|r| r.bytes().map(|c| u32::from(c - b'0')).collect())
        .collect()
}

/// The 2-GDD with three groups of two points obtained from the matchings of `K4`.
pub fn gdd_from_pairs() -> GroupDivisibleDesign {
    GroupDivisibleDesign::new(
        3,
        2,
        vec![
            vec![(1, 1), (2, 1), (3, 1)],
            vec![(1, 2), (2, 1), (3, 2)],
            vec![(1, 1), (2, 2), (3, 2)],
            vec![(1, 2), (2, 2), (3, 1)],
        ],
    )
    .expect("fixture GDD")
}

/// A `(4, 4, 2, 4)` DPDA whose label `s` is sent by user `s`.
pub fn four_user_dpda() -> (CodedArray, SenderMap) {
    let s = Cell::Star;
    let l = Cell::Label;
    let cells = vec![s, l(3), s, l(1), l(3), s, s, l(2), s, l(4), l(1), s, l(4), s, l(2), s];
    (CodedArray::new(4, 4, cells).expect("fixture array"), SenderMap::new(vec![0, 1, 2, 3]))
}

/// Built-in designs by name.
pub fn design_by_name(name: &str) -> Option<Design> {
    Some(match name {
        "fano" => fano(),
        "steiner-3-8-4" => steiner_3_8_4(),
        "steiner-3-10-4" => steiner_3_10_4(),
        "design-2-6-3-2" => design_2_6_3_2(),
        "ag9" => ag9_resolution().into_design(),
        "k4-pairs" => k4_pairs_resolution().into_design(),
        "six-point" => six_point_resolution().into_design(),
        _ => return None,
    })
}

/// Built-in resolutions by name.
pub fn resolution_by_name(name: &str) -> Option<Resolution> {
    Some(match name {
        "ag9" => ag9_resolution(),
        "k4-pairs" => k4_pairs_resolution(),
        "six-point" => six_point_resolution(),
        _ => return None,
    })
}

pub fn oa_by_name(name: &str) -> Option<OrthogonalArray> {
    Some(match name {
        "oa-binary-3" => oa_binary_3col(),
        "oa-binary-7" => oa_binary_7col(),
        _ => return None,
    })
}

pub fn gdd_by_name(name: &str) -> Option<GroupDivisibleDesign> {
    (name == "gdd-pairs").then(gdd_from_pairs)
}

pub const DESIGN_NAMES: &[&str] =
    &["fano", "steiner-3-8-4", "steiner-3-10-4", "design-2-6-3-2", "ag9", "k4-pairs", "six-point"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        for name in DESIGN_NAMES {
            assert!(design_by_name(name).is_some(), "{name}");
        }
        assert!(design_by_name("nope").is_none());
        assert!(oa_by_name("oa-binary-7").is_some());
        assert!(gdd_by_name("gdd-pairs").is_some());
    }
}
