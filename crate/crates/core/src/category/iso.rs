//! Isomorphism tests for graded posets and small categories by colour
//! refinement with individualization and backtracking.

use std::collections::{BTreeMap, HashMap};

use super::AcyclicCategory;
use crate::poset::Poset;

/// A directed multigraph with initial vertex colours.
struct Digraph {
    colors: Vec<Vec<i64>>,
    out: Vec<Vec<usize>>,
    into: Vec<Vec<usize>>,
}

impl Digraph {
    fn new(n: usize, colors: Vec<Vec<i64>>, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut out = vec![Vec::new(); n];
        let mut into = vec![Vec::new(); n];
        for (a, b) in edges {
            out[a].push(b);
            into[b].push(a);
        }
        Digraph { colors, out, into }
    }
}

/// Refines the colouring of the disjoint union of `g` and `h` to a stable
/// partition. Returns `None` when some colour class is unbalanced between
/// the two sides.
fn refine(g: &Digraph, h: &Digraph, start: Vec<usize>) -> Option<Vec<usize>> {
    let n = g.out.len();
    let neighbours = |v: usize| if v < n { (&g.out[v], &g.into[v], 0) } else { (&h.out[v - n], &h.into[v - n], n) };
    let mut color = start;
    let mut classes = count_classes(&color);
    loop {
        let sigs: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..color.len())
            .map(|v| {
                let (out, into, shift) = neighbours(v);
                let mut o: Vec<usize> = out.iter().map(|&w| color[w + shift]).collect();
                let mut i: Vec<usize> = into.iter().map(|&w| color[w + shift]).collect();
                o.sort_unstable();
                i.sort_unstable();
                (color[v], o, i)
            })
            .collect();
        let ranks: BTreeMap<&(usize, Vec<usize>, Vec<usize>), usize> =
            sigs.iter().map(|s| (s, 0)).collect::<BTreeMap<_, _>>();
        let ranks: HashMap<_, usize> = ranks.into_keys().enumerate().map(|(i, s)| (s, i)).collect();
        color = sigs.iter().map(|s| ranks[s]).collect();
        if !balanced(&color, n) {
            return None;
        }
        let c = count_classes(&color);
        if c == classes {
            return Some(color);
        }
        classes = c;
    }
}

fn count_classes(color: &[usize]) -> usize {
    let mut c: Vec<usize> = color.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn balanced(color: &[usize], n: usize) -> bool {
    let mut count: HashMap<usize, i64> = HashMap::new();
    for (v, &c) in color.iter().enumerate() {
        *count.entry(c).or_default() += if v < n { 1 } else { -1 };
    }
    count.values().all(|&x| x == 0)
}

/// Searches bijections `g → h` preserving colours and edge multiplicities;
/// each complete candidate is offered to `accept`, and the first accepted one
/// is returned.
fn search<F>(g: &Digraph, h: &Digraph, accept: &mut F) -> Option<Vec<usize>>
where
    F: FnMut(&[usize]) -> bool,
{
    let n = g.out.len();
    if h.out.len() != n {
        return None;
    }
    let mut palette: BTreeMap<&Vec<i64>, usize> = BTreeMap::new();
    for c in g.colors.iter().chain(&h.colors) {
        palette.insert(c, 0);
    }
    let palette: HashMap<&Vec<i64>, usize> = palette.into_keys().enumerate().map(|(i, c)| (c, i)).collect();
    let start: Vec<usize> = g.colors.iter().chain(&h.colors).map(|c| palette[c]).collect();
    let color = refine(g, h, start)?;
    descend(g, h, color, accept)
}

fn descend<F>(g: &Digraph, h: &Digraph, color: Vec<usize>, accept: &mut F) -> Option<Vec<usize>>
where
    F: FnMut(&[usize]) -> bool,
{
    let n = g.out.len();
    let mut members: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (v, &c) in color.iter().enumerate() {
        let e = members.entry(c).or_default();
        if v < n {
            e.0.push(v);
        } else {
            e.1.push(v - n);
        }
    }
    let target = members.values().filter(|(a, _)| a.len() > 1).min_by_key(|(a, _)| a.len());
    match target {
        None => {
            let mut map = vec![0; n];
            for (a, b) in members.values() {
                map[a[0]] = b[0];
            }
            (preserves_edges(g, h, &map) && accept(&map)).then_some(map)
        }
        Some((a, b)) => {
            let fresh = color.len() + 1;
            let v = a[0];
            for &w in b {
                let mut c = color.clone();
                c[v] = fresh;
                c[w + n] = fresh;
                if let Some(c) = refine(g, h, c) {
                    if let Some(map) = descend(g, h, c, accept) {
                        return Some(map);
                    }
                }
            }
            None
        }
    }
}

fn preserves_edges(g: &Digraph, h: &Digraph, map: &[usize]) -> bool {
    (0..map.len()).all(|v| {
        let mut a: Vec<usize> = g.out[v].iter().map(|&w| map[w]).collect();
        let mut b = h.out[map[v]].clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    })
}

fn poset_digraph(p: &Poset) -> Digraph {
    let colors = (0..p.len()).map(|x| vec![p.grade(x).map_or(i64::MIN, |g| g)]).collect();
    Digraph::new(p.len(), colors, p.covers().iter().copied())
}

/// An isomorphism of graded posets `p → q` preserving grades, as a map on
/// elements.
pub fn poset_isomorphism(p: &Poset, q: &Poset) -> Option<Vec<usize>> {
    if p.len() != q.len() || p.covers().len() != q.covers().len() {
        return None;
    }
    search(&poset_digraph(p), &poset_digraph(q), &mut |_| true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryIso {
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

fn category_digraph(c: &AcyclicCategory) -> Digraph {
    let colors = (0..c.num_objects())
        .map(|x| vec![c.grade(x).map_or(i64::MIN, |g| g), c.out_morphisms(x).len() as i64, c.in_morphisms(x).len() as i64])
        .collect();
    Digraph::new(c.num_objects(), colors, c.morphisms().iter().copied())
}

/// An isomorphism of categories `c → d` preserving grades: bijections on
/// objects and non-identity morphisms compatible with ends and composition.
pub fn category_isomorphism(c: &AcyclicCategory, d: &AcyclicCategory) -> Option<CategoryIso> {
    if c.num_objects() != d.num_objects() || c.num_morphisms() != d.num_morphisms() {
        return None;
    }
    if c.check().is_err() || d.check().is_err() {
        return None;
    }
    let mut found = None;
    search(&category_digraph(c), &category_digraph(d), &mut |objects| {
        match extend_to_morphisms(c, d, objects) {
            Some(morphisms) => {
                found = Some(CategoryIso { objects: objects.to_vec(), morphisms });
                true
            }
            None => false,
        }
    })?;
    found
}

/// Backtracking over morphism images within the hom-sets fixed by the object
/// bijection; composites are checked as soon as all three are assigned.
fn extend_to_morphisms(c: &AcyclicCategory, d: &AcyclicCategory, objects: &[usize]) -> Option<Vec<usize>> {
    let m = c.num_morphisms();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&f| (c.src(f), c.dst(f)));
    let mut image = vec![usize::MAX; m];
    let mut used = vec![false; d.num_morphisms()];
    fn consistent(c: &AcyclicCategory, d: &AcyclicCategory, image: &[usize], f: usize) -> bool {
        let ok = |g: usize, f: usize| {
            let gf = c.compose(g, f).expect("composition table is total");
            let (ig, i_f, igf) = (image[g], image[f], image[gf]);
            ig == usize::MAX || i_f == usize::MAX || igf == usize::MAX || d.compose(ig, i_f) == Some(igf)
        };
        c.out_morphisms(c.dst(f)).iter().all(|&g| ok(g, f))
            && c.in_morphisms(c.src(f)).iter().all(|&e| ok(f, e))
            && c.in_morphisms(c.src(f)).iter().all(|&e| {
                // f as a composite g ∘ e for some g
                c.out_morphisms(c.dst(e)).iter().all(|&g| c.compose(g, e) != Some(f) || ok(g, e))
            })
    }
    fn go(
        c: &AcyclicCategory,
        d: &AcyclicCategory,
        objects: &[usize],
        order: &[usize],
        k: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let f = order[k];
        for &t in d.hom(objects[c.src(f)], objects[c.dst(f)]) {
            if used[t] {
                continue;
            }
            image[f] = t;
            used[t] = true;
            if consistent(c, d, image, f) && go(c, d, objects, order, k + 1, image, used) {
                return true;
            }
            image[f] = usize::MAX;
            used[t] = false;
        }
        false
    }
    for x in 0..c.num_objects() {
        for y in 0..c.num_objects() {
            if c.hom(x, y).len() != d.hom(objects[x], objects[y]).len() {
                return None;
            }
        }
    }
    go(c, d, objects, &order, 0, &mut image, &mut used).then_some(image)
}
