//! Finite posets stored by their covering relation.
//!
//! Elements are dense indices `0..len`. The full order is materialized lazily
//! by transitive closure and cached.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::delta::DeltaComplex;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Poset {
    grades: Vec<Option<i64>>,
    labels: Vec<Option<String>>,
    covers: Vec<(usize, usize)>,
    order: OnceLock<Option<Order>>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.grades == other.grades && self.labels == other.labels && self.covers == other.covers
    }
}

impl Eq for Poset {}

/// Transitive closure of the cover relation.
#[derive(Clone, Debug)]
struct Order {
    /// `up[x]` contains every `y` with `x <= y`.
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    /// A linear extension.
    topo: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PosetDiagnostic {
    ElementOutOfRange { cover: (usize, usize) },
    Reflexive { element: usize },
    /// The covers contain a cycle, so the generated relation is not antisymmetric.
    Antisymmetry { cycle: Vec<usize> },
    TransitiveShortcut { cover: (usize, usize) },
    Grading { cover: (usize, usize), lower: i64, upper: i64 },
}

impl std::fmt::Display for PosetDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::ElementOutOfRange { cover } => write!(f, "cover {cover:?} names a missing element"),
            Self::Reflexive { element } => write!(f, "element {element} covers itself"),
            Self::Antisymmetry { cycle } => write!(f, "antisymmetry violated along cycle {cycle:?}"),
            Self::TransitiveShortcut { cover } => write!(f, "cover {cover:?} is a transitive shortcut"),
            Self::Grading { cover, lower, upper } => {
                write!(f, "grades do not increase along cover {cover:?} ({lower} -> {upper})")
            }
        }
    }
}

impl Poset {
    /// Creates a poset from grades and covering pairs `(lo, hi)`. The input
    /// is not checked; see [`Poset::validate`].
    pub fn new(grades: Vec<Option<i64>>, covers: Vec<(usize, usize)>) -> Self {
        let labels = vec![None; grades.len()];
        Self::with_labels(grades, labels, covers)
    }

    pub fn with_labels(
        grades: Vec<Option<i64>>,
        labels: Vec<Option<String>>,
        mut covers: Vec<(usize, usize)>,
    ) -> Self {
        assert_eq!(grades.len(), labels.len());
        covers.sort_unstable();
        covers.dedup();
        Poset { grades, labels, covers, order: OnceLock::new() }
    }

    pub fn antichain(n: usize) -> Self {
        Self::new(vec![Some(0); n], Vec::new())
    }

    /// The chain `0 < 1 < … < n` (`n + 1` elements).
    pub fn chain(n: usize) -> Self {
        Self::new((0..=n as i64).map(Some).collect(), (0..n).map(|i| (i, i + 1)).collect())
    }

    /// Builds the poset whose strict down-sets are given; covers are the
    /// maximal elements of each strict down-set. The relation must already be
    /// transitive and acyclic.
    pub fn from_strict_down_sets(
        grades: Vec<Option<i64>>,
        labels: Vec<Option<String>>,
        strict_down: &[FixedBitSet],
    ) -> Self {
        let n = grades.len();
        let mut covers = Vec::new();
        for (y, below) in strict_down.iter().enumerate() {
            let mut shadow = FixedBitSet::with_capacity(n);
            for x in below.ones() {
                shadow.union_with(&strict_down[x]);
            }
            for x in below.ones() {
                if !shadow.contains(x) {
                    covers.push((x, y));
                }
            }
        }
        Self::with_labels(grades, labels, covers)
    }

    /// Builds a poset from a strict order predicate by transitive reduction.
    pub fn from_relation<F>(grades: Vec<Option<i64>>, less: F) -> Self
    where
        F: Fn(usize, usize) -> bool,
    {
        let n = grades.len();
        let down: Vec<FixedBitSet> = (0..n)
            .map(|y| {
                let mut b = FixedBitSet::with_capacity(n);
                for x in 0..n {
                    if x != y && less(x, y) {
                        b.insert(x);
                    }
                }
                b
            })
            .collect();
        Self::from_strict_down_sets(grades, vec![None; n], &down)
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn grade(&self, x: usize) -> Option<i64> {
        self.grades[x]
    }

    pub fn grades(&self) -> &[Option<i64>] {
        &self.grades
    }

    pub fn label(&self, x: usize) -> Option<&str> {
        self.labels[x].as_deref()
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn require_grade(&self, x: usize) -> Result<i64> {
        self.grades[x].ok_or(Error::MissingGrade(x))
    }

    pub fn validate(&self) -> Vec<PosetDiagnostic> {
        let n = self.len();
        let mut diags = Vec::new();
        for &(a, b) in &self.covers {
            if a >= n || b >= n {
                diags.push(PosetDiagnostic::ElementOutOfRange { cover: (a, b) });
            } else if a == b {
                diags.push(PosetDiagnostic::Reflexive { element: a });
            }
        }
        if !diags.is_empty() {
            return diags;
        }
        match compute_order(n, &self.covers) {
            Err(cycle) => diags.push(PosetDiagnostic::Antisymmetry { cycle }),
            Ok(order) => {
                let succ = self.successors();
                for &(a, b) in &self.covers {
                    if succ[a].iter().any(|&c| c != b && order.up[c].contains(b)) {
                        diags.push(PosetDiagnostic::TransitiveShortcut { cover: (a, b) });
                    }
                }
            }
        }
        for &(a, b) in &self.covers {
            if let (Some(ga), Some(gb)) = (self.grades[a], self.grades[b]) {
                if ga >= gb {
                    diags.push(PosetDiagnostic::Grading { cover: (a, b), lower: ga, upper: gb });
                }
            }
        }
        diags
    }

    pub fn check(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(d) => Err(Error::InvalidPoset(d.to_string())),
        }
    }

    fn order(&self) -> Result<&Order> {
        self.order
            .get_or_init(|| {
                if self.covers.iter().any(|&(a, b)| a >= self.len() || b >= self.len() || a == b) {
                    return None;
                }
                compute_order(self.len(), &self.covers).ok()
            })
            .as_ref()
            .ok_or_else(|| Error::InvalidPoset("cover relation is not acyclic".into()))
    }

    /// Upper covers of each element.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut s = vec![Vec::new(); self.len()];
        for &(a, b) in &self.covers {
            s[a].push(b);
        }
        s
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut s = vec![Vec::new(); self.len()];
        for &(a, b) in &self.covers {
            s[b].push(a);
        }
        s
    }

    /// `x <= y`. Panics if the poset is invalid.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.order().expect("valid poset").up[x].contains(y)
    }

    pub fn less(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    /// Elements `>= x`, as a bit set.
    pub fn up_set(&self, x: usize) -> Result<&FixedBitSet> {
        Ok(&self.order()?.up[x])
    }

    pub fn down_set(&self, x: usize) -> Result<&FixedBitSet> {
        Ok(&self.order()?.down[x])
    }

    pub fn linear_extension(&self) -> Result<&[usize]> {
        Ok(&self.order()?.topo)
    }

    pub fn comparable_pairs(&self) -> Result<usize> {
        let o = self.order()?;
        Ok(o.up.iter().map(|b| b.count_ones(..) - 1).sum())
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        let p = self.predecessors();
        (0..self.len()).filter(|&x| p[x].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        let s = self.successors();
        (0..self.len()).filter(|&x| s[x].is_empty()).collect()
    }

    /// The opposite poset: same elements, covers reversed. Grades are
    /// reflected through the grade range, `g ↦ min + max - g`, so grading
    /// survives and taking the opposite twice is the identity.
    pub fn opposite(&self) -> Result<Poset> {
        self.check()?;
        let present = self.grades.iter().flatten();
        let span = present.clone().min().zip(present.max()).map(|(lo, hi)| lo + hi);
        Ok(Poset::with_labels(
            self.grades.iter().map(|g| g.map(|g| span.unwrap() - g)).collect(),
            self.labels.clone(),
            self.covers.iter().map(|&(a, b)| (b, a)).collect(),
        ))
    }

    /// Componentwise product. Element `(x, y)` has index `x * q.len() + y`;
    /// grades add when both are present.
    pub fn product(&self, q: &Poset) -> Result<Poset> {
        self.check()?;
        q.check()?;
        let m = q.len();
        let mut grades = Vec::with_capacity(self.len() * m);
        let mut labels = Vec::with_capacity(self.len() * m);
        for x in 0..self.len() {
            for y in 0..m {
                grades.push(match (self.grades[x], q.grades[y]) {
                    (Some(a), Some(b)) => Some(a + b),
                    _ => None,
                });
                labels.push(match (&self.labels[x], &q.labels[y]) {
                    (None, None) => None,
                    (a, b) => Some(format!(
                        "({},{})",
                        a.clone().unwrap_or_else(|| x.to_string()),
                        b.clone().unwrap_or_else(|| y.to_string())
                    )),
                });
            }
        }
        let mut covers = Vec::new();
        for &(a, b) in &self.covers {
            for y in 0..m {
                covers.push((a * m + y, b * m + y));
            }
        }
        for &(a, b) in &q.covers {
            for x in 0..self.len() {
                covers.push((x * m + a, x * m + b));
            }
        }
        Ok(Poset::with_labels(grades, labels, covers))
    }

    /// Induced subposet on the elements with `keep[x]`. Returns the poset and
    /// the map from new to old indices.
    pub fn induced(&self, keep: &[bool]) -> Result<(Poset, Vec<usize>)> {
        let order = self.order()?;
        let old: Vec<usize> = (0..self.len()).filter(|&x| keep[x]).collect();
        let new_of: HashMap<usize, usize> = old.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let n = old.len();
        let down: Vec<FixedBitSet> = old
            .iter()
            .map(|&y| {
                let mut b = FixedBitSet::with_capacity(n);
                for x in order.down[y].ones() {
                    if x != y {
                        if let Some(&i) = new_of.get(&x) {
                            b.insert(i);
                        }
                    }
                }
                b
            })
            .collect();
        let grades = old.iter().map(|&x| self.grades[x]).collect();
        let labels = old.iter().map(|&x| self.labels[x].clone()).collect();
        Ok((Poset::from_strict_down_sets(grades, labels, &down), old))
    }

    /// All chains `x_0 < x_1 < … < x_k`, grouped by `k`, in a deterministic
    /// order.
    pub fn chains(&self) -> Result<Vec<Vec<Vec<usize>>>> {
        let order = self.order()?;
        let n = self.len();
        let mut pos = vec![0usize; n];
        for (i, &x) in order.topo.iter().enumerate() {
            pos[x] = i;
        }
        let above: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                let mut v: Vec<usize> = order.up[x].ones().filter(|&y| y != x).collect();
                v.sort_by_key(|&y| pos[y]);
                v
            })
            .collect();
        let mut levels: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut stack: Vec<Vec<usize>> = order.topo.iter().rev().map(|&x| vec![x]).collect();
        // depth-first, then bucket by length; sort buckets for determinism
        while let Some(c) = stack.pop() {
            let k = c.len() - 1;
            if levels.len() <= k {
                levels.resize(k + 1, Vec::new());
            }
            let last = *c.last().unwrap();
            for &y in above[last].iter().rev() {
                let mut d = c.clone();
                d.push(y);
                stack.push(d);
            }
            levels[k].push(c);
        }
        Ok(levels)
    }

    /// The order complex: `k`-cells are chains of `k + 1` elements and `d_i`
    /// deletes the `i`-th entry.
    pub fn order_complex(&self) -> Result<DeltaComplex> {
        let levels = self.chains()?;
        Ok(DeltaComplex::from_keyed(&levels, |c, i| {
            let mut d = c.clone();
            d.remove(i);
            d
        }))
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: (0..self.len())
                .map(|i| ElementJson {
                    id: i as i64,
                    grade: self.grades[i],
                    label: self.labels[i].clone(),
                })
                .collect(),
            covers: self.covers.iter().map(|&(a, b)| [a as i64, b as i64]).collect(),
        }
    }

    pub fn from_json(json: &PosetJson) -> Result<Poset> {
        let mut index = BTreeMap::new();
        for (i, e) in json.elements.iter().enumerate() {
            if index.insert(e.id, i).is_some() {
                return Err(Error::Schema {
                    path: format!("/elements/{i}/id"),
                    message: format!("duplicate element id {}", e.id),
                });
            }
        }
        let covers = json
            .covers
            .iter()
            .enumerate()
            .map(|(c, pair)| {
                let look = |k: usize| {
                    index.get(&pair[k]).copied().ok_or_else(|| Error::Schema {
                        path: format!("/covers/{c}/{k}"),
                        message: format!("unknown element id {}", pair[k]),
                    })
                };
                Ok((look(0)?, look(1)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Poset::with_labels(
            json.elements.iter().map(|e| e.grade).collect(),
            json.elements.iter().map(|e| e.label.clone()).collect(),
            covers,
        ))
    }
}

fn compute_order(n: usize, covers: &[(usize, usize)]) -> std::result::Result<Order, Vec<usize>> {
    let mut succ = vec![Vec::new(); n];
    let mut indeg = vec![0usize; n];
    for &(a, b) in covers {
        succ[a].push(b);
        indeg[b] += 1;
    }
    let mut queue: std::collections::VecDeque<usize> =
        (0..n).filter(|&x| indeg[x] == 0).collect();
    let mut topo = Vec::with_capacity(n);
    while let Some(x) = queue.pop_front() {
        topo.push(x);
        for &y in &succ[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                queue.push_back(y);
            }
        }
    }
    if topo.len() < n {
        return Err(find_cycle(n, &succ, &indeg));
    }
    let mut up: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(n); n];
    for &x in topo.iter().rev() {
        let mut b = FixedBitSet::with_capacity(n);
        b.insert(x);
        for &y in &succ[x] {
            b.union_with(&up[y]);
        }
        up[x] = b;
    }
    let mut down: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(n); n];
    for (x, u) in up.iter().enumerate() {
        for y in u.ones() {
            down[y].insert(x);
        }
    }
    Ok(Order { up, down, topo })
}

fn find_cycle(n: usize, succ: &[Vec<usize>], indeg: &[usize]) -> Vec<usize> {
    // every remaining vertex has a remaining predecessor; walk forward inside
    // the remainder until a vertex repeats
    let alive: Vec<bool> = (0..n).map(|x| indeg[x] > 0).collect();
    let start = (0..n).find(|&x| alive[x]).unwrap();
    let mut seen = HashMap::new();
    let mut path = Vec::new();
    let mut x = start;
    loop {
        if let Some(&i) = seen.get(&x) {
            return path[i..].to_vec();
        }
        seen.insert(x, path.len());
        path.push(x);
        x = *succ[x].iter().find(|&&y| alive[y]).expect("remaining vertex has a successor");
    }
}

/// Exchange format `{"elements":[{"id","grade"?,"label"?}],"covers":[[lo,hi],…]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    pub elements: Vec<ElementJson>,
    #[serde(default)]
    pub covers: Vec<[i64; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ElementJson {
    pub id: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grade: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Nonempty subsets of `{0, …, n}` graded by size minus one.
    fn boolean_minus_bottom(n: usize) -> Poset {
        let sets: Vec<u32> = (1u32..(1 << (n + 1))).collect();
        let grades = sets.iter().map(|s| Some(s.count_ones() as i64 - 1)).collect();
        let idx: HashMap<u32, usize> = sets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut covers = Vec::new();
        for &s in &sets {
            for b in 0..=n {
                if s & (1 << b) == 0 {
                    covers.push((idx[&s], idx[&(s | (1 << b))]));
                }
            }
        }
        Poset::new(grades, covers)
    }

    fn count_maximal_chains(p: &Poset) -> usize {
        let chains = p.chains().unwrap();
        let top = chains.len() - 1;
        chains[top].len()
    }

    #[test]
    fn chain_is_valid() {
        assert!(Poset::chain(2).validate().is_empty());
    }

    #[test]
    fn two_cycle_reports_antisymmetry() {
        let p = Poset::new(vec![None, None], vec![(0, 1), (1, 0)]);
        let d = p.validate();
        assert!(matches!(d[0], PosetDiagnostic::Antisymmetry { .. }), "{d:?}");
    }

    #[test]
    fn shortcut_and_grading_reported() {
        let p = Poset::new(vec![Some(0), Some(1), Some(1)], vec![(0, 1), (1, 2), (0, 2)]);
        let d = p.validate();
        assert!(d.contains(&PosetDiagnostic::TransitiveShortcut { cover: (0, 2) }));
        assert!(d.contains(&PosetDiagnostic::Grading { cover: (1, 2), lower: 1, upper: 1 }));
    }

    #[test]
    fn boolean_lattice_minus_bottom_is_graded() {
        let p = boolean_minus_bottom(2);
        assert_eq!(p.len(), 7);
        assert!(p.validate().is_empty());
    }

    #[test]
    fn opposite_of_chain() {
        let op = Poset::chain(2).opposite().unwrap();
        assert!(op.leq(2, 1) && op.leq(1, 0) && !op.leq(0, 1));
        let a = Poset::antichain(3);
        assert_eq!(a.opposite().unwrap(), a);
    }

    #[test]
    fn opposite_of_edge_face_poset() {
        // two vertices below one edge
        let p = Poset::new(vec![Some(0), Some(0), Some(1)], vec![(0, 2), (1, 2)]);
        let op = p.opposite().unwrap();
        assert_eq!(op.minimal_elements(), vec![2]);
        assert_eq!(op.maximal_elements(), vec![0, 1]);
        assert_eq!(op.grades(), &[Some(1), Some(1), Some(0)]);
        assert!(op.validate().is_empty());
        assert_eq!(op.opposite().unwrap(), p);
    }

    #[test]
    fn product_examples() {
        let i = Poset::chain(1);
        let sq = i.product(&i).unwrap();
        assert_eq!(sq.len(), 4);
        // brute force: pairs x < y
        let strict: usize = (0..4).flat_map(|x| (0..4).map(move |y| (x, y)))
            .filter(|&(x, y)| sq.less(x, y)).count();
        assert_eq!(strict, 5);
        assert_eq!(count_maximal_chains(&sq), 2);
        assert_eq!(sq.chains().unwrap().len() - 1, 2);

        let point = Poset::new(vec![Some(0)], vec![]);
        assert_eq!(i.product(&point).unwrap().covers(), i.covers());

        let c2 = Poset::chain(2);
        let grid = c2.product(&c2).unwrap();
        assert_eq!(grid.len(), 9);
        assert_eq!(grid.chains().unwrap().len() - 1, 4);
    }

    #[test]
    fn order_complex_examples() {
        assert_eq!(Poset::chain(2).order_complex().unwrap().f_vector(), vec![3, 3, 1]);
        assert_eq!(Poset::antichain(2).order_complex().unwrap().f_vector(), vec![2]);
        let bowtie = Poset::new(vec![Some(1); 4], vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(bowtie.order_complex().unwrap().f_vector(), vec![4, 4]);
    }

    #[test]
    fn json_roundtrip() {
        let p = boolean_minus_bottom(1);
        assert_eq!(Poset::from_json(&p.to_json()).unwrap(), p);
    }
}
