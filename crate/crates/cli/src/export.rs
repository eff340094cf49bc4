//! DOT, OFF and JSON renderings.

use std::fmt::Write;

use stratakit::json::CssJson;
use stratakit::{CombinatorialCss, DeltaComplex, Poset};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The face category with one edge per lift, so parallel lifts become
/// multi-edges.
pub fn dot_category(x: &CombinatorialCss) -> String {
    let c = x.category();
    let mut out = String::from("digraph face_category {\n  rankdir=BT;\n");
    for v in 0..c.num_objects() {
        let closed = if x.is_closed(v) { "" } else { ", style=dashed" };
        let label = format!("{} (dim {})", c.object_name(v), x.dim(v));
        writeln!(out, "  n{v} [label={}{closed}];", quote(&label)).unwrap();
    }
    for (f, &(s, t)) in c.morphisms().iter().enumerate() {
        let label = c.morphism_label(f).map(String::from).unwrap_or_else(|| f.to_string());
        writeln!(out, "  n{s} -> n{t} [label={}];", quote(&label)).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn dot_hasse(p: &Poset) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  edge [arrowhead=none];\n");
    for v in 0..p.len() {
        let name = p.label(v).map(String::from).unwrap_or_else(|| v.to_string());
        let label = match p.grade(v) {
            Some(g) => format!("{name} ({g})"),
            None => name,
        };
        writeln!(out, "  n{v} [label={}];", quote(&label)).unwrap();
    }
    for &(lo, hi) in p.covers() {
        writeln!(out, "  n{lo} -> n{hi};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// Triangles of a complex of dimension at most 2. There is no geometry to
/// draw from, so vertices sit on the moment curve `(t, t², t³)`, where no
/// four are coplanar and no two triangles overlap.
pub fn off(k: &DeltaComplex) -> Result<String, String> {
    if k.dim().is_some_and(|d| d > 2) {
        return Err(format!("OFF export needs a complex of dimension at most 2, found {}", k.dim().unwrap()));
    }
    let nv = k.count(0);
    let nt = if k.num_dims() > 2 { k.count(2) } else { 0 };
    let ne = if k.num_dims() > 1 { k.count(1) } else { 0 };
    let mut out = format!("OFF\n# {nv} vertices, {ne} edges, {nt} triangles\n{nv} {nt} {ne}\n");
    for i in 0..nv {
        let t = if nv > 1 { 2.0 * i as f64 / (nv - 1) as f64 - 1.0 } else { 0.0 };
        writeln!(out, "{t:.6} {:.6} {:.6}", t * t, t * t * t).unwrap();
    }
    for c in 0..nt {
        let v = k.vertices(2, c);
        writeln!(out, "3 {} {} {}", v[0], v[1], v[2]).unwrap();
    }
    Ok(out)
}

pub fn json(x: &CombinatorialCss) -> String {
    serde_json::to_string_pretty(&CssJson::from_css(x)).expect("space serializes") + "\n"
}
