//! Named example spaces.

use super::CombinatorialCss;
use crate::category::AcyclicCategory;
use crate::error::{Error, Result};
use crate::poset::Poset;

/// Names accepted by [`by_name`]; `N` stands for a dimension.
pub const NAMES: &[&str] = &[
    "point",
    "simplex-N",
    "boundary-simplex-N",
    "interval",
    "circle-minimal",
    "circle-2",
    "torus",
    "punctured-torus",
    "y-space",
    "s2-minimal",
];

pub fn by_name(name: &str) -> Result<CombinatorialCss> {
    let dim = |prefix: &str| name.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok());
    if let Some(n) = dim("simplex-") {
        return simplex(n);
    }
    if let Some(n) = dim("boundary-simplex-") {
        return boundary_simplex(n);
    }
    match name {
        "point" => simplex(0),
        "interval" => simplex(1),
        "circle-minimal" => Ok(circle_minimal()),
        "circle-2" => Ok(circle_two()),
        "torus" => torus(),
        "punctured-torus" => punctured_torus(),
        "y-space" => Ok(y_space()),
        "s2-minimal" => Ok(s2_minimal()),
        _ => Err(Error::InvalidCss(format!("unknown fixture {name:?}"))),
    }
}

/// Face poset of the vertex subsets `S ⊆ {0..n}` with `keep(S)`, graded by
/// `|S| - 1`.
fn subset_poset(n: usize, keep: impl Fn(u32) -> bool) -> Poset {
    let mut subsets: Vec<u32> = (1u32..1 << (n + 1)).filter(|&s| keep(s)).collect();
    subsets.sort_by_key(|&s| (s.count_ones(), std::cmp::Reverse(s.reverse_bits())));
    let index: std::collections::HashMap<u32, usize> = subsets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut covers = Vec::new();
    for (i, &s) in subsets.iter().enumerate() {
        for b in 0..=n {
            let t = s & !(1 << b);
            if t != s && t != 0 {
                covers.push((index[&t], i));
            }
        }
    }
    let grades = subsets.iter().map(|s| Some(s.count_ones() as i64 - 1)).collect();
    let labels = subsets
        .iter()
        .map(|&s| {
            let v: Vec<String> = (0..=n).filter(|b| s & (1 << b) != 0).map(|b| b.to_string()).collect();
            Some(format!("[{}]", v.join(",")))
        })
        .collect();
    Poset::with_labels(grades, labels, covers)
}

/// The simplex `Δⁿ` with its simplicial cells.
pub fn simplex(n: usize) -> Result<CombinatorialCss> {
    CombinatorialCss::from_poset(&subset_poset(n, |_| true))
}

/// The boundary sphere `∂Δⁿ`.
pub fn boundary_simplex(n: usize) -> Result<CombinatorialCss> {
    if n == 0 {
        return Err(Error::InvalidCss("the boundary of a point is empty".into()));
    }
    let full = (1u32 << (n + 1)) - 1;
    CombinatorialCss::from_poset(&subset_poset(n, |s| s != full))
}

fn labelled(
    names: &[&str],
    dims: &[i64],
    morphisms: &[(usize, usize, &str)],
    compose: Vec<(usize, usize, usize)>,
) -> AcyclicCategory {
    AcyclicCategory::with_labels(
        dims.iter().map(|&d| Some(d)).collect(),
        names.iter().map(|s| Some(s.to_string())).collect(),
        morphisms.iter().map(|&(s, t, _)| (s, t)).collect(),
        morphisms.iter().map(|&(_, _, l)| Some(l.to_string())).collect(),
        compose,
    )
}

/// `S¹ = e⁰ ∪ e¹`, the edge attached to the vertex by both ends.
pub fn circle_minimal() -> CombinatorialCss {
    let cat = labelled(&["e0", "e1"], &[0, 1], &[(0, 1, "b-1"), (0, 1, "b1")], vec![]);
    CombinatorialCss::with_closed(cat, vec![true, true])
}

/// The circle with two vertices and two edges.
pub fn circle_two() -> CombinatorialCss {
    let cat = labelled(
        &["v0", "v1", "a", "b"],
        &[0, 0, 1, 1],
        &[(0, 2, "a0"), (1, 2, "a1"), (0, 3, "b0"), (1, 3, "b1")],
        vec![],
    );
    CombinatorialCss::with_closed(cat, vec![true; 4])
}

/// `S¹ × S¹` with the product of minimal cell structures.
pub fn torus() -> Result<CombinatorialCss> {
    circle_minimal().product(&circle_minimal())
}

/// The torus minus its vertex; the 2-cell is not closed.
pub fn punctured_torus() -> Result<CombinatorialCss> {
    torus()?.remove_cells(&[0])
}

/// A vertex and a stellar 1-cell (three prongs with one free end), attached
/// by the two remaining ends. Only the lifts are recorded, so the face
/// category coincides with the minimal circle.
pub fn y_space() -> CombinatorialCss {
    let cat = labelled(&["v", "y"], &[0, 1], &[(0, 1, "p0"), (0, 1, "p1")], vec![]);
    CombinatorialCss::with_closed(cat, vec![true, true])
}

/// `S² = e⁰ ∪ e²` flagged closed. Its boundary poset is a single point, so
/// it is rejected by validation.
pub fn s2_minimal() -> CombinatorialCss {
    let cat = labelled(&["e0", "e2"], &[0, 2], &[(0, 1, "b")], vec![]);
    CombinatorialCss::with_closed(cat, vec![true, true])
}
