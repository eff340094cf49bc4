//! Finite acyclic categories with explicit hom-sets and composition tables.
//!
//! Identities are synthetic: only non-identity morphisms are stored, and the
//! composition table covers composable pairs of non-identity morphisms. In an
//! acyclic category such a composite is never an identity.

mod construct;
mod iso;

use std::collections::HashMap;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::delta::DeltaComplex;
use crate::error::{Error, Result};
use crate::poset::Poset;

pub use construct::{GroupAction, PosetFunctor};
pub use iso::{category_isomorphism, poset_isomorphism, CategoryIso};

/// A morphism including the synthetic identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    Id(usize),
    Mor(usize),
}

#[derive(Clone, Debug)]
pub struct AcyclicCategory {
    grades: Vec<Option<i64>>,
    labels: Vec<Option<String>>,
    morphisms: Vec<(usize, usize)>,
    morphism_labels: Vec<Option<String>>,
    compose: HashMap<(usize, usize), usize>,
    /// Problems found while reading the composition list (duplicates, bad indices).
    table_issues: Vec<CategoryDiagnostic>,
    out: Vec<Vec<usize>>,
    into: Vec<Vec<usize>>,
    hom: HashMap<(usize, usize), Vec<usize>>,
    diagnostics: OnceLock<Vec<CategoryDiagnostic>>,
}

impl PartialEq for AcyclicCategory {
    fn eq(&self, other: &Self) -> bool {
        self.grades == other.grades
            && self.labels == other.labels
            && self.morphisms == other.morphisms
            && self.compose == other.compose
    }
}

impl Eq for AcyclicCategory {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CategoryDiagnostic {
    UnknownObject { morphism: usize },
    UnknownMorphism { entry: usize },
    /// A non-identity morphism from an object to itself.
    Endomorphism { morphism: usize },
    /// Objects joined by morphisms in both directions.
    Cycle { objects: Vec<usize> },
    NotComposable { g: usize, f: usize },
    WrongComposite { g: usize, f: usize, gf: usize },
    DuplicateComposite { g: usize, f: usize },
    MissingComposite { g: usize, f: usize },
    NonAssociative { h: usize, g: usize, f: usize },
}

impl std::fmt::Display for CategoryDiagnostic {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::UnknownObject { morphism } => write!(fm, "morphism {morphism} names a missing object"),
            Self::UnknownMorphism { entry } => write!(fm, "composition entry {entry} names a missing morphism"),
            Self::Endomorphism { morphism } => {
                write!(fm, "acyclicity violated: morphism {morphism} is a non-identity endomorphism")
            }
            Self::Cycle { objects } => {
                write!(fm, "acyclicity violated: morphisms run around the objects {objects:?}")
            }
            Self::NotComposable { g, f } => write!(fm, "composition of {g} after {f} given for a non-composable pair"),
            Self::WrongComposite { g, f, gf } => {
                write!(fm, "composite {gf} of {g} after {f} has the wrong source or target")
            }
            Self::DuplicateComposite { g, f } => write!(fm, "composite of {g} after {f} given twice"),
            Self::MissingComposite { g, f } => write!(fm, "composite of {g} after {f} is missing"),
            Self::NonAssociative { h, g, f } => write!(fm, "composition is not associative on ({h}, {g}, {f})"),
        }
    }
}

impl AcyclicCategory {
    /// Builds a category from object grades, morphisms `(src, dst)` and
    /// composition entries `(g, f, g∘f)`. Nothing is checked beyond what is
    /// needed to index the data; see [`AcyclicCategory::validate`].
    pub fn new(
        grades: Vec<Option<i64>>,
        morphisms: Vec<(usize, usize)>,
        compose: Vec<(usize, usize, usize)>,
    ) -> Self {
        let n = grades.len();
        let m = morphisms.len();
        Self::with_labels(grades, vec![None; n], morphisms, vec![None; m], compose)
    }

    pub fn with_labels(
        grades: Vec<Option<i64>>,
        labels: Vec<Option<String>>,
        morphisms: Vec<(usize, usize)>,
        morphism_labels: Vec<Option<String>>,
        compose: Vec<(usize, usize, usize)>,
    ) -> Self {
        assert_eq!(grades.len(), labels.len());
        assert_eq!(morphisms.len(), morphism_labels.len());
        let n = grades.len();
        let m = morphisms.len();
        let mut table_issues = Vec::new();
        let mut map = HashMap::with_capacity(compose.len());
        for (i, &(g, f, gf)) in compose.iter().enumerate() {
            if g >= m || f >= m || gf >= m {
                table_issues.push(CategoryDiagnostic::UnknownMorphism { entry: i });
            } else if map.insert((g, f), gf).is_some() {
                table_issues.push(CategoryDiagnostic::DuplicateComposite { g, f });
            }
        }
        let mut out = vec![Vec::new(); n];
        let mut into = vec![Vec::new(); n];
        let mut hom: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, &(s, t)) in morphisms.iter().enumerate() {
            if s < n && t < n {
                out[s].push(i);
                into[t].push(i);
                hom.entry((s, t)).or_default().push(i);
            }
        }
        AcyclicCategory {
            grades,
            labels,
            morphisms,
            morphism_labels,
            compose: map,
            table_issues,
            out,
            into,
            hom,
            diagnostics: OnceLock::new(),
        }
    }

    /// The poset as a category: one morphism per strict pair `x < y`.
    pub fn from_poset(p: &Poset) -> Result<Self> {
        p.check()?;
        let n = p.len();
        let mut index = HashMap::new();
        let mut morphisms = Vec::new();
        for x in 0..n {
            for y in p.up_set(x)?.ones() {
                if y != x {
                    index.insert((x, y), morphisms.len());
                    morphisms.push((x, y));
                }
            }
        }
        let mut compose = Vec::new();
        for (&(x, y), &f) in &index {
            for z in p.up_set(y)?.ones() {
                if z != y {
                    compose.push((index[&(y, z)], f, index[&(x, z)]));
                }
            }
        }
        compose.sort_unstable();
        Ok(Self::with_labels(
            p.grades().to_vec(),
            p.labels().to_vec(),
            morphisms,
            vec![None; index.len()],
            compose,
        ))
    }

    pub fn num_objects(&self) -> usize {
        self.grades.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn grade(&self, x: usize) -> Option<i64> {
        self.grades[x]
    }

    pub fn grades(&self) -> &[Option<i64>] {
        &self.grades
    }

    pub fn require_grade(&self, x: usize) -> Result<i64> {
        self.grades[x].ok_or(Error::MissingGrade(x))
    }

    pub fn label(&self, x: usize) -> Option<&str> {
        self.labels[x].as_deref()
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn morphism_label(&self, f: usize) -> Option<&str> {
        self.morphism_labels[f].as_deref()
    }

    pub fn morphism_labels(&self) -> &[Option<String>] {
        &self.morphism_labels
    }

    /// Name of an object for messages: its label, else its index.
    pub fn object_name(&self, x: usize) -> String {
        self.labels[x].clone().unwrap_or_else(|| x.to_string())
    }

    pub fn morphisms(&self) -> &[(usize, usize)] {
        &self.morphisms
    }

    pub fn src(&self, f: usize) -> usize {
        self.morphisms[f].0
    }

    pub fn dst(&self, f: usize) -> usize {
        self.morphisms[f].1
    }

    pub fn arrow_src(&self, a: Arrow) -> usize {
        match a {
            Arrow::Id(x) => x,
            Arrow::Mor(f) => self.src(f),
        }
    }

    pub fn arrow_dst(&self, a: Arrow) -> usize {
        match a {
            Arrow::Id(x) => x,
            Arrow::Mor(f) => self.dst(f),
        }
    }

    /// Non-identity morphisms out of `x`, in index order.
    pub fn out_morphisms(&self, x: usize) -> &[usize] {
        &self.out[x]
    }

    /// Non-identity morphisms into `x`, in index order.
    pub fn in_morphisms(&self, x: usize) -> &[usize] {
        &self.into[x]
    }

    /// Non-identity morphisms `x → y`.
    pub fn hom(&self, x: usize, y: usize) -> &[usize] {
        self.hom.get(&(x, y)).map_or(&[], Vec::as_slice)
    }

    /// All morphisms `x → y`, including `1_x` when `x == y`.
    pub fn hom_arrows(&self, x: usize, y: usize) -> Vec<Arrow> {
        if x == y {
            vec![Arrow::Id(x)]
        } else {
            self.hom(x, y).iter().map(|&f| Arrow::Mor(f)).collect()
        }
    }

    /// `g ∘ f` for non-identity morphisms; `None` when the pair is not
    /// composable or the table lacks the entry.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose.get(&(g, f)).copied()
    }

    /// `g ∘ f` on arrows. Panics when the pair is not composable.
    pub fn compose_arrows(&self, g: Arrow, f: Arrow) -> Arrow {
        assert_eq!(self.arrow_src(g), self.arrow_dst(f), "arrows are not composable");
        match (g, f) {
            (Arrow::Id(_), a) | (a, Arrow::Id(_)) => a,
            (Arrow::Mor(g), Arrow::Mor(f)) => {
                Arrow::Mor(self.compose(g, f).expect("composition table is total"))
            }
        }
    }

    /// Entries `(g, f, g∘f)` of the composition table in sorted order.
    pub fn composition_table(&self) -> Vec<(usize, usize, usize)> {
        let mut t: Vec<_> = self.compose.iter().map(|(&(g, f), &gf)| (g, f, gf)).collect();
        t.sort_unstable();
        t
    }

    pub fn validate(&self) -> Vec<CategoryDiagnostic> {
        self.diagnostics.get_or_init(|| self.compute_diagnostics()).clone()
    }

    pub fn check(&self) -> Result<()> {
        let diags = self.diagnostics.get_or_init(|| self.compute_diagnostics());
        match diags.first() {
            None => Ok(()),
            Some(d) => Err(Error::InvalidCategory(d.to_string())),
        }
    }

    fn compute_diagnostics(&self) -> Vec<CategoryDiagnostic> {
        use CategoryDiagnostic as D;
        let n = self.num_objects();
        let mut diags = self.table_issues.clone();
        for (i, &(s, t)) in self.morphisms.iter().enumerate() {
            if s >= n || t >= n {
                diags.push(D::UnknownObject { morphism: i });
            } else if s == t {
                diags.push(D::Endomorphism { morphism: i });
            }
        }
        if !diags.is_empty() {
            return diags;
        }
        if let Some(objects) = self.object_cycle() {
            diags.push(D::Cycle { objects });
        }
        let mut table: Vec<_> = self.compose.iter().map(|(&k, &v)| (k, v)).collect();
        table.sort_unstable();
        for ((g, f), gf) in table {
            if self.dst(f) != self.src(g) {
                diags.push(D::NotComposable { g, f });
            } else if self.src(gf) != self.src(f) || self.dst(gf) != self.dst(g) {
                diags.push(D::WrongComposite { g, f, gf });
            }
        }
        for y in 0..n {
            for &f in &self.into[y] {
                for &g in &self.out[y] {
                    if !self.compose.contains_key(&(g, f)) {
                        diags.push(D::MissingComposite { g, f });
                    }
                }
            }
        }
        if !diags.is_empty() {
            return diags;
        }
        for f in 0..self.num_morphisms() {
            for &g in &self.out[self.dst(f)] {
                let gf = self.compose[&(g, f)];
                for &h in &self.out[self.dst(g)] {
                    if self.compose[&(h, gf)] != self.compose[&(self.compose[&(h, g)], f)] {
                        diags.push(D::NonAssociative { h, g, f });
                    }
                }
            }
        }
        diags
    }

    /// A cycle in the graph of non-identity morphisms, if any.
    fn object_cycle(&self) -> Option<Vec<usize>> {
        let n = self.num_objects();
        let succ: Vec<Vec<usize>> =
            (0..n).map(|x| self.out[x].iter().map(|&f| self.dst(f)).collect()).collect();
        let covers: Vec<(usize, usize)> =
            succ.iter().enumerate().flat_map(|(x, s)| s.iter().map(move |&y| (x, y))).collect();
        let p = Poset::new(vec![None; n], covers);
        p.validate().into_iter().find_map(|d| match d {
            crate::poset::PosetDiagnostic::Antisymmetry { cycle } => Some(cycle),
            _ => None,
        })
    }

    /// A topological order of the objects (sources before targets).
    pub fn linear_extension(&self) -> Result<Vec<usize>> {
        self.check()?;
        let n = self.num_objects();
        let mut indeg: Vec<usize> = (0..n).map(|x| self.into[x].len()).collect();
        let mut queue: std::collections::VecDeque<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(x) = queue.pop_front() {
            topo.push(x);
            for &f in &self.out[x] {
                let y = self.dst(f);
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    queue.push_back(y);
                }
            }
        }
        Ok(topo)
    }

    /// `x ≤ y` iff `Hom(x, y)` is nonempty; grades and labels are copied.
    pub fn underlying_poset(&self) -> Result<Poset> {
        self.check()?;
        let n = self.num_objects();
        let down: Vec<FixedBitSet> = (0..n)
            .map(|y| {
                let mut b = FixedBitSet::with_capacity(n);
                for &f in &self.into[y] {
                    b.insert(self.src(f));
                }
                b
            })
            .collect();
        Ok(Poset::from_strict_down_sets(self.grades.clone(), self.labels.clone(), &down))
    }

    /// Composable chains of non-identity morphisms, grouped by length. A chain
    /// of length `k` is stored as `[x_0, f_1, …, f_k]` with `f_1 : x_0 → x_1`.
    pub fn chains(&self) -> Result<Vec<Vec<Vec<usize>>>> {
        self.check()?;
        let mut levels: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        let mut stack: Vec<(Vec<usize>, usize)> =
            (0..self.num_objects()).rev().map(|x| (vec![x], x)).collect();
        while let Some((c, end)) = stack.pop() {
            let k = c.len() - 1;
            if levels.len() <= k {
                levels.push(Vec::new());
            }
            for &f in self.out[end].iter().rev() {
                let mut d = c.clone();
                d.push(f);
                stack.push((d, self.dst(f)));
            }
            levels[k].push(c);
        }
        if self.num_objects() == 0 {
            levels.clear();
        }
        Ok(levels)
    }

    /// Objects `x_0, …, x_k` visited by a chain.
    pub fn chain_objects(&self, chain: &[usize]) -> Vec<usize> {
        let mut v = vec![chain[0]];
        v.extend(chain[1..].iter().map(|&f| self.dst(f)));
        v
    }

    /// The `i`-th face of a chain: drop the first or last morphism, or
    /// compose the two morphisms meeting at the `i`-th object.
    pub fn chain_face(&self, chain: &[usize], i: usize) -> Vec<usize> {
        let k = chain.len() - 1;
        debug_assert!(k >= 1 && i <= k);
        if i == 0 {
            let mut d = vec![self.dst(chain[1])];
            d.extend_from_slice(&chain[2..]);
            d
        } else if i == k {
            chain[..k].to_vec()
        } else {
            let mut d = chain[..i].to_vec();
            d.push(self.compose(chain[i + 1], chain[i]).expect("composition table is total"));
            d.extend_from_slice(&chain[i + 2..]);
            d
        }
    }

    /// The nondegenerate nerve as a Δ-complex.
    pub fn nerve(&self) -> Result<DeltaComplex> {
        let levels = self.chains()?;
        Ok(DeltaComplex::from_keyed(&levels, |c, i| self.chain_face(c, i)))
    }

    /// Composite of the morphisms of `chain` between positions `a < b`.
    fn chain_segment(&self, chain: &[usize], a: usize, b: usize) -> usize {
        let mut m = chain[a + 1];
        for &f in &chain[a + 2..=b] {
            m = self.compose(f, m).expect("composition table is total");
        }
        m
    }

    /// The barycentric subdivision `Sd(C)`: nondegenerate chains ordered by
    /// `f ≤ g` iff `f = g ∘ φ` for an injective monotone `φ`, graded by chain
    /// length. Each `φ` is a nonempty subset of the positions of `g`.
    pub fn sd_category(&self) -> Result<Poset> {
        let levels = self.chains()?;
        let mut index: HashMap<&[usize], usize> = HashMap::new();
        let mut grades = Vec::new();
        let mut all: Vec<&Vec<usize>> = Vec::new();
        for (k, level) in levels.iter().enumerate() {
            for c in level {
                index.insert(c.as_slice(), all.len());
                all.push(c);
                grades.push(Some(k as i64));
            }
        }
        let total = all.len();
        let mut down = vec![FixedBitSet::with_capacity(total); total];
        for (gi, g) in all.iter().enumerate() {
            let k = g.len() - 1;
            let objs = self.chain_objects(g);
            for mask in 1u64..(1u64 << (k + 1)) - 1 {
                let pos: Vec<usize> = (0..=k).filter(|&p| mask & (1 << p) != 0).collect();
                let mut f = vec![objs[pos[0]]];
                for w in pos.windows(2) {
                    f.push(self.chain_segment(g, w[0], w[1]));
                }
                down[gi].insert(index[f.as_slice()]);
            }
        }
        let labels = vec![None; total];
        let p = Poset::from_strict_down_sets(grades, labels, &down);
        p.check()?;
        Ok(p)
    }

    /// The opposite category. Morphism indices are kept; grades are reflected
    /// through their range like [`Poset::opposite`].
    pub fn opposite(&self) -> AcyclicCategory {
        let present = self.grades.iter().flatten();
        let span = present.clone().min().zip(present.max()).map(|(lo, hi)| lo + hi);
        let grades = self.grades.iter().map(|g| g.map(|g| span.unwrap() - g)).collect();
        self.opposite_with_grades(grades)
    }

    pub fn opposite_with_grades(&self, grades: Vec<Option<i64>>) -> AcyclicCategory {
        AcyclicCategory::with_labels(
            grades,
            self.labels.clone(),
            self.morphisms.iter().map(|&(s, t)| (t, s)).collect(),
            self.morphism_labels.clone(),
            self.composition_table().into_iter().map(|(g, f, gf)| (f, g, gf)).collect(),
        )
    }

    /// Full subcategory on the objects with `keep[x]`; returns it with the map
    /// from new to old object indices.
    pub fn full_subcategory(&self, keep: &[bool]) -> (AcyclicCategory, Vec<usize>) {
        let old: Vec<usize> = (0..self.num_objects()).filter(|&x| keep[x]).collect();
        let mut new_obj = vec![usize::MAX; self.num_objects()];
        for (i, &x) in old.iter().enumerate() {
            new_obj[x] = i;
        }
        let mut new_mor = vec![usize::MAX; self.num_morphisms()];
        let mut morphisms = Vec::new();
        let mut mlabels = Vec::new();
        for (f, &(s, t)) in self.morphisms.iter().enumerate() {
            if keep[s] && keep[t] {
                new_mor[f] = morphisms.len();
                morphisms.push((new_obj[s], new_obj[t]));
                mlabels.push(self.morphism_labels[f].clone());
            }
        }
        let compose = self
            .composition_table()
            .into_iter()
            .filter(|&(g, f, _)| new_mor[g] != usize::MAX && new_mor[f] != usize::MAX)
            .map(|(g, f, gf)| (new_mor[g], new_mor[f], new_mor[gf]))
            .collect();
        let cat = AcyclicCategory::with_labels(
            old.iter().map(|&x| self.grades[x]).collect(),
            old.iter().map(|&x| self.labels[x].clone()).collect(),
            morphisms,
            mlabels,
            compose,
        );
        (cat, old)
    }

    pub fn with_grades(&self, grades: Vec<Option<i64>>) -> AcyclicCategory {
        assert_eq!(grades.len(), self.num_objects());
        AcyclicCategory::with_labels(
            grades,
            self.labels.clone(),
            self.morphisms.clone(),
            self.morphism_labels.clone(),
            self.composition_table(),
        )
    }

    /// Length of the longest chain of non-identity morphisms starting at each
    /// object.
    pub fn heights_above(&self) -> Result<Vec<usize>> {
        let topo = self.linear_extension()?;
        let mut h = vec![0; self.num_objects()];
        for &x in topo.iter().rev() {
            h[x] = self.out[x].iter().map(|&f| h[self.dst(f)] + 1).max().unwrap_or(0);
        }
        Ok(h)
    }

    /// Length of the longest chain of non-identity morphisms ending at each
    /// object.
    pub fn heights_below(&self) -> Result<Vec<usize>> {
        let topo = self.linear_extension()?;
        let mut h = vec![0; self.num_objects()];
        for &x in &topo {
            h[x] = self.into[x].iter().map(|&f| h[self.src(f)] + 1).max().unwrap_or(0);
        }
        Ok(h)
    }

    fn require_object(&self, x: usize) -> Result<()> {
        if x < self.num_objects() {
            Ok(())
        } else {
            Err(Error::UnknownObject(x))
        }
    }
}

#[cfg(test)]
mod tests;
