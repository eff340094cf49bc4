//! Totally normal cellular stratified spaces encoded by their face
//! categories: objects are cells, morphisms are lifts of characteristic maps,
//! object grades are cell dimensions, and a flag per cell records whether the
//! cell is closed.

pub mod fixtures;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::category::{AcyclicCategory, PosetFunctor};
use crate::chain::homology;
use crate::delta::DeltaComplex;
use crate::error::{Error, Result};
use crate::poset::Poset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinatorialCss {
    cat: AcyclicCategory,
    closed: Vec<bool>,
    certificate: Option<Box<ClosureCertificate>>,
}

/// The closed ambient space a non-closed space was cut out of, with the map
/// from cells to ambient cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureCertificate {
    pub ambient: CombinatorialCss,
    pub object_map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CssDiagnostic {
    Category { message: String },
    MissingDimension { cell: usize },
    GradeNotRaised { cell: usize, morphism: usize },
    InvalidBoundary { cell: usize, message: String },
    /// A cell flagged closed whose boundary poset is not a homology sphere of
    /// the right dimension.
    NotSphere { cell: usize },
    Diamond { cell: usize, lower: usize, upper: usize, between: usize },
    LowerInterval { cell: usize, morphism: usize },
    /// A cell flagged not closed whose boundary passes every sphere test.
    ClosedFlagMismatch { cell: usize },
}

impl std::fmt::Display for CssDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Category { message } => write!(f, "{message}"),
            Self::MissingDimension { cell } => write!(f, "cell {cell} has no dimension"),
            Self::GradeNotRaised { cell, morphism } => {
                write!(f, "morphism {morphism} into cell {cell} does not raise the dimension")
            }
            Self::InvalidBoundary { cell, message } => write!(f, "boundary poset of cell {cell}: {message}"),
            Self::NotSphere { cell } => {
                write!(f, "cell {cell} is flagged closed but its boundary is not a homology sphere")
            }
            Self::Diamond { cell, lower, upper, between } => write!(
                f,
                "boundary of cell {cell}: interval between lifts {lower} and {upper} has {between} middle elements, expected 2"
            ),
            Self::LowerInterval { cell, morphism } => write!(
                f,
                "boundary of cell {cell}: the part below lift {morphism} is not a homology sphere"
            ),
            Self::ClosedFlagMismatch { cell } => {
                write!(f, "cell {cell} is flagged not closed but its boundary is a sphere")
            }
        }
    }
}

/// The chains of `Sd(X)` with their first and last cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SalvettiPartition {
    pub complex: DeltaComplex,
    /// `source[n][c]`: first cell of the `n`-chain `c` (dual stratum).
    pub source: Vec<Vec<usize>>,
    /// `target[n][c]`: last cell of the `n`-chain `c` (Salvetti stratum).
    pub target: Vec<Vec<usize>>,
}

impl SalvettiPartition {
    fn block_sizes(labels: &[Vec<usize>], cells: usize) -> Vec<usize> {
        let mut s = vec![0; cells];
        for level in labels {
            for &x in level {
                s[x] += 1;
            }
        }
        s
    }

    /// Number of chains starting at each cell.
    pub fn source_block_sizes(&self, cells: usize) -> Vec<usize> {
        Self::block_sizes(&self.source, cells)
    }

    /// Number of chains ending at each cell.
    pub fn target_block_sizes(&self, cells: usize) -> Vec<usize> {
        Self::block_sizes(&self.target, cells)
    }
}

/// Result of the sphere tests on the boundary of one cell.
struct BoundaryReport {
    diagnostics: Vec<CssDiagnostic>,
    sphere: bool,
}

impl CombinatorialCss {
    /// A space with the given closed flags. Flags are not checked here; see
    /// [`CombinatorialCss::validate`].
    pub fn with_closed(cat: AcyclicCategory, closed: Vec<bool>) -> Self {
        assert_eq!(cat.num_objects(), closed.len());
        CombinatorialCss { cat, closed, certificate: None }
    }

    /// A space whose closed flags are computed by the boundary sphere tests.
    pub fn from_category(cat: AcyclicCategory) -> Result<Self> {
        cat.check()?;
        for x in 0..cat.num_objects() {
            cat.require_grade(x)?;
        }
        let closed = (0..cat.num_objects())
            .into_par_iter()
            .map(|x| boundary_report(&cat, x).sphere)
            .collect();
        Ok(CombinatorialCss { cat, closed, certificate: None })
    }

    /// A poset viewed as a regular cell complex; dimensions are the grades.
    pub fn from_poset(p: &Poset) -> Result<Self> {
        Self::from_category(AcyclicCategory::from_poset(p)?)
    }

    pub fn category(&self) -> &AcyclicCategory {
        &self.cat
    }

    pub fn num_cells(&self) -> usize {
        self.cat.num_objects()
    }

    pub fn dim(&self, x: usize) -> usize {
        self.cat.grade(x).expect("cells have dimensions") as usize
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..self.num_cells()).map(|x| self.dim(x)).collect()
    }

    pub fn is_closed(&self, x: usize) -> bool {
        self.closed[x]
    }

    pub fn closed_flags(&self) -> &[bool] {
        &self.closed
    }

    pub fn all_closed(&self) -> bool {
        self.closed.iter().all(|&c| c)
    }

    pub fn certificate(&self) -> Option<&ClosureCertificate> {
        self.certificate.as_deref()
    }

    pub fn with_certificate(mut self, certificate: ClosureCertificate) -> Self {
        self.certificate = Some(Box::new(certificate));
        self
    }

    /// Number of cells in each dimension.
    pub fn cell_counts(&self) -> Vec<usize> {
        let mut c = Vec::new();
        for x in 0..self.num_cells() {
            let d = self.dim(x);
            if c.len() <= d {
                c.resize(d + 1, 0);
            }
            c[d] += 1;
        }
        c
    }

    /// `Σ (-1)^dim` over cells.
    pub fn cell_euler_characteristic(&self) -> i64 {
        (0..self.num_cells()).map(|x| if self.dim(x) % 2 == 0 { 1 } else { -1 }).sum()
    }

    /// The boundary poset of a cell: lifts into it, `b' ≤ b` iff `b' = b ∘ c`,
    /// graded by the dimension of the source. Returns the poset and the
    /// morphism behind each element.
    pub fn boundary_poset(&self, x: usize) -> Result<(Poset, Vec<usize>)> {
        if x >= self.num_cells() {
            return Err(Error::UnknownObject(x));
        }
        Ok(boundary_poset(&self.cat, x))
    }

    pub fn validate(&self) -> Vec<CssDiagnostic> {
        let cat_diags = self.cat.validate();
        if !cat_diags.is_empty() {
            return cat_diags.iter().map(|d| CssDiagnostic::Category { message: d.to_string() }).collect();
        }
        let missing: Vec<CssDiagnostic> = (0..self.num_cells())
            .filter(|&x| self.cat.grade(x).is_none())
            .map(|cell| CssDiagnostic::MissingDimension { cell })
            .collect();
        if !missing.is_empty() {
            return missing;
        }
        let reports: Vec<BoundaryReport> =
            (0..self.num_cells()).into_par_iter().map(|x| boundary_report(&self.cat, x)).collect();
        let mut diags = Vec::new();
        for (x, r) in reports.into_iter().enumerate() {
            let structural = r.diagnostics.iter().any(|d| {
                matches!(d, CssDiagnostic::GradeNotRaised { .. } | CssDiagnostic::InvalidBoundary { .. })
            });
            if structural {
                diags.extend(r.diagnostics);
                continue;
            }
            if self.closed[x] {
                diags.extend(r.diagnostics);
            } else if r.sphere {
                diags.push(CssDiagnostic::ClosedFlagMismatch { cell: x });
            }
        }
        diags
    }

    pub fn check(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(d) => Err(Error::InvalidCss(d.to_string())),
        }
    }

    /// `Sd(X)`: the nondegenerate nerve of the face category.
    pub fn sd(&self) -> Result<DeltaComplex> {
        self.cat.nerve()
    }

    pub fn salvetti_partition(&self) -> Result<SalvettiPartition> {
        let levels = self.cat.chains()?;
        let complex = DeltaComplex::from_keyed(&levels, |c, i| self.cat.chain_face(c, i));
        let source = levels.iter().map(|l| l.iter().map(|c| c[0]).collect()).collect();
        let target = levels
            .iter()
            .map(|l| l.iter().map(|c| if c.len() == 1 { c[0] } else { self.cat.dst(*c.last().unwrap()) }).collect())
            .collect();
        Ok(SalvettiPartition { complex, source, target })
    }

    /// The stellar dual: the opposite category, with the dimension of a cell
    /// the length of the longest chain of lifts out of it in `X`. Closed flags
    /// are computed by the boundary sphere tests.
    pub fn dual(&self) -> Result<CombinatorialCss> {
        self.cat.check()?;
        let heights = self.cat.heights_above()?;
        let op = self.cat.opposite_with_grades(heights.iter().map(|&h| Some(h as i64)).collect());
        CombinatorialCss::from_category(op)
    }

    /// `Sal(X) = D(D(X))`.
    pub fn salvetti_complex(&self) -> Result<CombinatorialCss> {
        self.dual()?.dual()
    }

    pub fn product(&self, other: &CombinatorialCss) -> Result<CombinatorialCss> {
        let cat = self.cat.product(&other.cat)?;
        let m = other.num_cells();
        let closed = (0..self.num_cells() * m).map(|i| self.closed[i / m] && other.closed[i % m]).collect();
        Ok(CombinatorialCss { cat, closed, certificate: None })
    }

    /// Removes a set of cells that is closed downwards (a closed subcomplex)
    /// or upwards (leaving a closed subcomplex). A remaining cell stays closed
    /// iff it was closed and no removed cell lies below it. The result keeps
    /// a closure certificate pointing at the closed ambient space.
    pub fn remove_cells(&self, cells: &[usize]) -> Result<CombinatorialCss> {
        let n = self.num_cells();
        let mut removed = vec![false; n];
        for &c in cells {
            if c >= n {
                return Err(Error::UnknownObject(c));
            }
            removed[c] = true;
        }
        let down_violation = self.first_violation(&removed, true);
        let up_violation = self.first_violation(&removed, false);
        if let (Some((below, above)), Some(_)) = (down_violation, up_violation) {
            return Err(Error::NotDownClosed { below, above });
        }
        let keep: Vec<bool> = removed.iter().map(|&r| !r).collect();
        let (cat, old) = self.cat.full_subcategory(&keep);
        let closed = old
            .iter()
            .map(|&x| self.closed[x] && self.cat.in_morphisms(x).iter().all(|&f| !removed[self.cat.src(f)]))
            .collect();
        let certificate = match &self.certificate {
            Some(c) => ClosureCertificate {
                ambient: c.ambient.clone(),
                object_map: old.iter().map(|&x| c.object_map[x]).collect(),
            },
            None => ClosureCertificate { ambient: self.clone(), object_map: old },
        };
        Ok(CombinatorialCss { cat, closed, certificate: Some(Box::new(certificate)) })
    }

    /// First pair `(below, above)` with `above` removed and `below` kept
    /// (`down`), or the reverse.
    fn first_violation(&self, removed: &[bool], down: bool) -> Option<(usize, usize)> {
        self.cat.morphisms().iter().find_map(|&(s, t)| {
            let bad = if down { removed[t] && !removed[s] } else { removed[s] && !removed[t] };
            bad.then_some((s, t))
        })
    }

    /// The cellular closure: the smallest closed-cell space containing this
    /// one as a full subcategory, taken inside the stored ambient space.
    pub fn cellular_closure(&self) -> Result<CombinatorialCss> {
        if self.all_closed() {
            return Ok(CombinatorialCss { certificate: None, ..self.clone() });
        }
        let cert = match &self.certificate {
            Some(c) => c,
            None => return Err(Error::NoClosureCertificate((0..self.num_cells()).find(|&x| !self.closed[x]).unwrap())),
        };
        let amb = &cert.ambient;
        let mut keep = vec![false; amb.num_cells()];
        for &y in &cert.object_map {
            keep[y] = true;
            for &f in amb.cat.in_morphisms(y) {
                keep[amb.cat.src(f)] = true;
            }
        }
        let (cat, old) = amb.cat.full_subcategory(&keep);
        let closed: Vec<bool> = old.iter().map(|&y| amb.closed[y]).collect();
        if let Some(i) = closed.iter().position(|&c| !c) {
            return Err(Error::NoClosureCertificate(old[i]));
        }
        Ok(CombinatorialCss { cat, closed, certificate: None })
    }

    /// Cellular subdivision. `functor` assigns to each cell the face poset of
    /// its subdivided domain, graded by dimension, with the interior pieces
    /// marked, and to each lift the induced map of face posets. The
    /// subdivided cells are the interior pieces.
    pub fn subdivide(&self, functor: &PosetFunctor) -> Result<CombinatorialCss> {
        let interior = functor
            .interior
            .as_ref()
            .ok_or_else(|| Error::InvalidSubdivision("interior pieces must be marked".into()))?;
        for (x, marks) in interior.iter().enumerate() {
            if !marks.iter().any(|&m| m) {
                return Err(Error::InvalidSubdivision(format!("cell {x} has no interior pieces")));
            }
        }
        let (cat, _) = self.cat.grothendieck(functor)?;
        for x in 0..cat.num_objects() {
            if cat.grade(x).is_none() {
                return Err(Error::InvalidSubdivision(format!("piece {x} has no dimension")));
            }
        }
        let out = CombinatorialCss::from_category(cat)?;
        match out.validate().first() {
            None => Ok(out),
            Some(d) => Err(Error::InvalidSubdivision(d.to_string())),
        }
    }
}

fn boundary_poset(cat: &AcyclicCategory, x: usize) -> (Poset, Vec<usize>) {
    let lifts = cat.in_morphisms(x).to_vec();
    let mut index = std::collections::HashMap::new();
    for (i, &b) in lifts.iter().enumerate() {
        index.insert(b, i);
    }
    let n = lifts.len();
    let down: Vec<FixedBitSet> = lifts
        .iter()
        .map(|&b| {
            let mut s = FixedBitSet::with_capacity(n);
            for &c in cat.in_morphisms(cat.src(b)) {
                let bc = cat.compose(b, c).expect("composition table is total");
                s.insert(index[&bc]);
            }
            s
        })
        .collect();
    let grades = lifts.iter().map(|&b| cat.grade(cat.src(b))).collect();
    (Poset::from_strict_down_sets(grades, vec![None; n], &down), lifts)
}

fn sphere_of_dim(p: &Poset, d: i64) -> bool {
    match p.order_complex() {
        Ok(k) => homology(&k).map(|h| h.is_sphere(d)).unwrap_or(false),
        Err(_) => false,
    }
}

/// Runs the grading check and the sphere tests on the boundary of `x`.
/// `sphere` is true when every sphere test passes.
fn boundary_report(cat: &AcyclicCategory, x: usize) -> BoundaryReport {
    let mut diagnostics = Vec::new();
    let d = cat.grade(x).expect("cells have dimensions");
    for &f in cat.in_morphisms(x) {
        if cat.grade(cat.src(f)).expect("cells have dimensions") >= d {
            diagnostics.push(CssDiagnostic::GradeNotRaised { cell: x, morphism: f });
        }
    }
    if !diagnostics.is_empty() {
        return BoundaryReport { diagnostics, sphere: false };
    }
    let (lk, lifts) = boundary_poset(cat, x);
    if let Some(e) = lk.validate().first() {
        diagnostics.push(CssDiagnostic::InvalidBoundary { cell: x, message: e.to_string() });
        return BoundaryReport { diagnostics, sphere: false };
    }
    let mut sphere = true;
    if !sphere_of_dim(&lk, d - 1) {
        sphere = false;
        diagnostics.push(CssDiagnostic::NotSphere { cell: x });
    }
    for a in 0..lk.len() {
        let ga = lk.grade(a).unwrap();
        let up = lk.up_set(a).expect("valid poset");
        for b in up.ones() {
            if lk.grade(b).unwrap() - ga != 2 {
                continue;
            }
            let between = up.ones().filter(|&c| c != a && c != b && lk.leq(c, b)).count();
            if between != 2 {
                sphere = false;
                diagnostics.push(CssDiagnostic::Diamond { cell: x, lower: lifts[a], upper: lifts[b], between });
            }
        }
        let mut keep = lk.down_set(a).expect("valid poset").clone();
        keep.set(a, false);
        let mask: Vec<bool> = (0..lk.len()).map(|i| keep.contains(i)).collect();
        let (below, _) = lk.induced(&mask).expect("valid poset");
        if !sphere_of_dim(&below, ga - 1) {
            sphere = false;
            diagnostics.push(CssDiagnostic::LowerInterval { cell: x, morphism: lifts[a] });
        }
    }
    BoundaryReport { diagnostics, sphere }
}
