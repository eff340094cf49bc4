//! Rational affine hyperplane arrangements and their sign-vector
//! stratifications.
//!
//! A level-`ℓ` point is `x = (x_1, …, x_ℓ)` with `x_j ∈ ℝⁿ`. The form
//! `ℓ_i(x) = a_i·x + b_i` extends to `(a_i·x_1 + b_i, a_i·x_2, …, a_i·x_ℓ)`,
//! and its level-`ℓ` sign is `ε·e_m` where `m` is the last level with a
//! nonzero value and `ε` is the sign there. Sign vectors are stored as `i8`
//! entries `ε·m`, with `0` for points on the hyperplane.

pub mod lp;
mod realize;

#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::category::AcyclicCategory;
use crate::delta::DeltaComplex;
use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::strata::CombinatorialCss;

pub use lp::Q;
pub use realize::{Certificate, Realization};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub a: Vec<Q>,
    pub b: Q,
}

impl Hyperplane {
    pub fn new(a: Vec<Q>, b: Q) -> Self {
        Hyperplane { a, b }
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        self.a.iter().zip(x).fold(self.b.clone(), |acc, (a, x)| acc + a * x)
    }

    /// The linear form through the origin with the same normal.
    pub fn linear_part(&self) -> Hyperplane {
        Hyperplane { a: self.a.clone(), b: Q::zero() }
    }

    /// Representative of the form up to positive scaling.
    fn normalized(&self) -> Option<(Vec<Q>, Q)> {
        let lead = self.a.iter().find(|v| !v.is_zero())?.abs();
        Some((self.a.iter().map(|v| v / &lead).collect(), &self.b / &lead))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    n: usize,
    hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    /// Rejects zero normals, wrong lengths and forms that coincide up to
    /// positive scaling.
    pub fn new(n: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.a.len() != n {
                return Err(Error::InvalidArrangement(format!(
                    "hyperplane {i} has {} coefficients, expected {n}",
                    h.a.len()
                )));
            }
            let key = h
                .normalized()
                .ok_or_else(|| Error::InvalidArrangement(format!("hyperplane {i} has a zero normal")))?;
            if let Some(j) = seen.insert(key, i) {
                return Err(Error::InvalidArrangement(format!(
                    "hyperplanes {j} and {i} are positive multiples of each other"
                )));
            }
        }
        Ok(Arrangement { n, hyperplanes })
    }

    pub fn empty(n: usize) -> Self {
        Arrangement { n, hyperplanes: Vec::new() }
    }

    /// The single hyperplane `{0} ⊂ ℝ`.
    pub fn point_line() -> Self {
        Arrangement { n: 1, hyperplanes: vec![Hyperplane::new(vec![Q::one()], Q::zero())] }
    }

    /// The braid arrangement `x_i = x_j` (`i < j`) in `ℝⁿ`.
    pub fn braid(n: usize) -> Self {
        let mut hyperplanes = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut a = vec![Q::zero(); n];
                a[i] = -Q::one();
                a[j] = Q::one();
                hyperplanes.push(Hyperplane::new(a, Q::zero()));
            }
        }
        Arrangement { n, hyperplanes }
    }

    /// Three lines in general position in the plane: `x = 0`, `y = 0`,
    /// `x + y = 1`.
    pub fn generic_lines() -> Self {
        let q = |v: i64| Q::from_integer(v.into());
        Arrangement {
            n: 2,
            hyperplanes: vec![
                Hyperplane::new(vec![q(1), q(0)], q(0)),
                Hyperplane::new(vec![q(0), q(1)], q(0)),
                Hyperplane::new(vec![q(1), q(1)], q(-1)),
            ],
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        if let Some(n) = name.strip_prefix("braid-").and_then(|n| n.parse().ok()) {
            return Ok(Self::braid(n));
        }
        if let Some(n) = name.strip_prefix("empty-").and_then(|n| n.parse().ok()) {
            return Ok(Self::empty(n));
        }
        match name {
            "point-line" => Ok(Self::point_line()),
            "generic-lines" => Ok(Self::generic_lines()),
            _ => Err(Error::InvalidArrangement(format!("unknown fixture {name:?}"))),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    /// Decides whether the level-1 sign vector is realized, returning either
    /// a point or an infeasibility certificate.
    pub fn realize(&self, signs: &[i8]) -> Result<Realization> {
        if signs.len() != self.len() || signs.iter().any(|s| !(-1..=1).contains(s)) {
            return Err(Error::InvalidArrangement(format!("{signs:?} is not a level-1 sign vector")));
        }
        Ok(realize::realize(self.n, &self.hyperplanes, signs))
    }

    /// All realizable level-1 sign vectors (faces) with their dimensions.
    pub fn faces_level1(&self) -> Faces {
        Faces::enumerate(self.n, &self.hyperplanes)
    }

    /// Faces of the central arrangement of linear parts, used at levels ≥ 2.
    pub fn central_faces(&self) -> Faces {
        let linear: Vec<Hyperplane> = self.hyperplanes.iter().map(Hyperplane::linear_part).collect();
        Faces::enumerate(self.n, &linear)
    }

    /// The level-`order` stratification of `ℝⁿ ⊗ ℝ^order`.
    pub fn faces_higher(&self, order: usize) -> Result<Stratification> {
        if order < 1 {
            return Err(Error::InvalidOrder);
        }
        let affine = self.faces_level1();
        let central = if order > 1 { self.central_faces() } else { Faces::default() };
        // last-nonzero rule, keeping the largest total dimension per sign vector
        let mut states: BTreeMap<Vec<i8>, (usize, Vec<usize>)> = BTreeMap::new();
        for (f, s) in affine.signs.iter().enumerate() {
            states.insert(s.clone(), (affine.dims[f], vec![f]));
        }
        for level in 2..=order {
            let mut next: BTreeMap<Vec<i8>, (usize, Vec<usize>)> = BTreeMap::new();
            for (sigma, (dim, tuple)) in &states {
                for (c, cs) in central.signs.iter().enumerate() {
                    let s: Vec<i8> = sigma
                        .iter()
                        .zip(cs)
                        .map(|(&old, &new)| if new != 0 { new * level as i8 } else { old })
                        .collect();
                    let d = dim + central.dims[c];
                    let entry = next.entry(s).or_insert_with(|| (0, Vec::new()));
                    if entry.1.is_empty() || d > entry.0 {
                        let mut t = tuple.clone();
                        t.push(c);
                        *entry = (d, t);
                    }
                }
            }
            states = next;
        }
        let mut signs = Vec::with_capacity(states.len());
        let mut dims = Vec::with_capacity(states.len());
        let mut witnesses = Vec::with_capacity(states.len());
        for (s, (d, t)) in states {
            signs.push(SignVector(s));
            dims.push(d);
            witnesses.push(t);
        }
        Ok(Stratification::build(order, self.n, signs, dims, witnesses, affine, central))
    }

    /// Strata off every hyperplane, with the induced order.
    pub fn complement_poset(&self, order: usize) -> Result<Stratification> {
        Ok(self.faces_higher(order)?.complement())
    }

    /// The order complex of the complement strata.
    pub fn higher_salvetti(&self, order: usize) -> Result<DeltaComplex> {
        self.complement_poset(order)?.poset.order_complex()
    }

    /// The complement poset as a regular cell complex (dimensions are chain
    /// heights), restratified by its Salvetti complex.
    pub fn salvetti_cellular(&self, order: usize) -> Result<CombinatorialCss> {
        let p = self.complement_poset(order)?.poset;
        let cat = AcyclicCategory::from_poset(&p)?;
        let heights = cat.heights_below()?;
        let cat = cat.with_grades(heights.iter().map(|&h| Some(h as i64)).collect());
        CombinatorialCss::from_category(cat)?.salvetti_complex()
    }

    /// Strata indexed by independent level-1 patterns per coordinate: an
    /// affine face at level 1 and central faces at levels ≥ 2.
    pub fn symmetric_subdivision(&self, order: usize) -> Result<SymmetricSubdivision> {
        SymmetricSubdivision::new(self, order)
    }

    pub fn to_json(&self) -> ArrangementJson {
        ArrangementJson {
            n: self.n,
            hyperplanes: self
                .hyperplanes
                .iter()
                .map(|h| HyperplaneJson {
                    a: h.a.iter().map(|v| RationalJson::Str(format_rational(v))).collect(),
                    b: RationalJson::Str(format_rational(&h.b)),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &ArrangementJson) -> Result<Self> {
        let mut hyperplanes = Vec::with_capacity(json.hyperplanes.len());
        for (i, h) in json.hyperplanes.iter().enumerate() {
            let a = h
                .a
                .iter()
                .enumerate()
                .map(|(j, v)| v.value(&format!("/hyperplanes/{i}/a/{j}")))
                .collect::<Result<Vec<_>>>()?;
            if a.len() != json.n {
                return Err(Error::Schema {
                    path: format!("/hyperplanes/{i}/a"),
                    message: format!("expected {} coefficients, found {}", json.n, a.len()),
                });
            }
            hyperplanes.push(Hyperplane::new(a, h.b.value(&format!("/hyperplanes/{i}/b"))?));
        }
        Arrangement::new(json.n, hyperplanes)
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::InvalidArrangement(format!("{s:?} is not a rational number"));
    let (p, q) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(p, q))
}

pub fn format_rational(v: &Q) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalJson {
    Int(i64),
    Str(String),
}

impl RationalJson {
    fn value(&self, path: &str) -> Result<Q> {
        match self {
            RationalJson::Int(v) => Ok(Q::from_integer((*v).into())),
            RationalJson::Str(s) => parse_rational(s)
                .map_err(|e| Error::Schema { path: path.to_string(), message: e.to_string() }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperplaneJson {
    pub a: Vec<RationalJson>,
    pub b: RationalJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementJson {
    pub n: usize,
    pub hyperplanes: Vec<HyperplaneJson>,
}

/// Realizable level-1 sign vectors in lexicographic order, with dimensions
/// and a rational point in each face.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Faces {
    pub signs: Vec<Vec<i8>>,
    pub dims: Vec<usize>,
    pub witnesses: Vec<Vec<Q>>,
}

impl Faces {
    /// Extends realizable prefixes one hyperplane at a time.
    fn enumerate(n: usize, forms: &[Hyperplane]) -> Faces {
        let mut level: Vec<(Vec<i8>, Vec<Q>)> = vec![(Vec::new(), vec![Q::zero(); n])];
        for i in 0..forms.len() {
            level = level
                .par_iter()
                .flat_map_iter(|(prefix, point)| {
                    let known = sign_of(&forms[i].eval(point));
                    [-1i8, 0, 1]
                        .into_iter()
                        .filter_map(|s| {
                            let mut signs = prefix.clone();
                            signs.push(s);
                            if s == known {
                                return Some((signs, point.clone()));
                            }
                            realize::witness(n, &forms[..=i], &signs).map(|p| (signs, p))
                        })
                        .collect::<Vec<_>>()
                })
                .collect();
        }
        level.sort_by(|a, b| a.0.cmp(&b.0));
        let dims = level
            .par_iter()
            .map(|(signs, _)| {
                let zero: Vec<Vec<Q>> =
                    forms.iter().zip(signs).filter(|(_, &s)| s == 0).map(|(h, _)| h.a.clone()).collect();
                n - lp::rank(&zero)
            })
            .collect();
        let (signs, witnesses) = level.into_iter().unzip();
        Faces { signs, dims, witnesses }
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dims.iter().max().map_or(0, |d| d + 1)];
        for &d in &self.dims {
            f[d] += 1;
        }
        f
    }

    /// `face_leq(x, y)`: face `x` lies in the closure of face `y`.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.signs[x].iter().zip(&self.signs[y]).all(|(&a, &b)| a == 0 || a == b)
    }

    pub fn poset(&self) -> Poset {
        let signs: Vec<SignVector> = self.signs.iter().map(|s| SignVector(s.clone())).collect();
        order_poset(&signs, &self.dims)
    }
}

fn sign_of(v: &Q) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// A level-`ℓ` sign vector; entry `ε·m` stands for `ε·e_m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    /// The order `0 < ±e_1 < … < ±e_ℓ`, with `±e_m` incomparable to `∓e_m`,
    /// applied pointwise.
    pub fn leq(&self, other: &SignVector) -> bool {
        self.0.iter().zip(&other.0).all(|(&x, &y)| x == y || x.unsigned_abs() < y.unsigned_abs())
    }

    pub fn is_complement(&self) -> bool {
        self.0.iter().all(|&v| v != 0)
    }

    /// Collapses a tuple of level-1 signs by the last-nonzero rule.
    pub fn collapse(levels: &[&[i8]]) -> SignVector {
        let k = levels.first().map_or(0, |l| l.len());
        SignVector(
            (0..k)
                .map(|i| {
                    levels
                        .iter()
                        .enumerate()
                        .rev()
                        .find(|(_, l)| l[i] != 0)
                        .map_or(0, |(m, l)| l[i] * (m as i8 + 1))
                })
                .collect(),
        )
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, &v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            match v {
                0 => write!(f, "0")?,
                v if v > 0 => write!(f, "+e{v}")?,
                v => write!(f, "-e{}", -v)?,
            }
        }
        write!(f, ")")
    }
}

/// Poset of sign vectors under the pointwise order, graded by dimension.
fn order_poset(signs: &[SignVector], dims: &[usize]) -> Poset {
    let n = signs.len();
    let down: Vec<FixedBitSet> = (0..n)
        .into_par_iter()
        .map(|y| {
            let mut b = FixedBitSet::with_capacity(n);
            for x in 0..n {
                if x != y && signs[x].leq(&signs[y]) {
                    b.insert(x);
                }
            }
            b
        })
        .collect();
    Poset::from_strict_down_sets(
        dims.iter().map(|&d| Some(d as i64)).collect(),
        signs.iter().map(|s| Some(s.to_string())).collect(),
        &down,
    )
}

/// The strata of `ℝⁿ ⊗ ℝ^order` in lexicographic order of sign vectors.
#[derive(Clone, Debug)]
pub struct Stratification {
    pub order: usize,
    pub n: usize,
    pub signs: Vec<SignVector>,
    pub dims: Vec<usize>,
    /// A top-dimensional tuple of faces per stratum: an affine face index
    /// followed by `order - 1` central face indices.
    pub witnesses: Vec<Vec<usize>>,
    pub poset: Poset,
    pub affine: Faces,
    pub central: Faces,
}

impl Stratification {
    fn build(
        order: usize,
        n: usize,
        signs: Vec<SignVector>,
        dims: Vec<usize>,
        witnesses: Vec<Vec<usize>>,
        affine: Faces,
        central: Faces,
    ) -> Self {
        let poset = order_poset(&signs, &dims);
        Stratification { order, n, signs, dims, witnesses, poset, affine, central }
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn index_of(&self, s: &SignVector) -> Option<usize> {
        self.signs.binary_search(s).ok()
    }

    pub fn dim_counts(&self) -> Vec<usize> {
        let mut f = vec![0; self.dims.iter().max().map_or(0, |d| d + 1)];
        for &d in &self.dims {
            f[d] += 1;
        }
        f
    }

    /// `Σ (−1)^dim` over the strata.
    pub fn euler_sum(&self) -> i64 {
        self.dims.iter().map(|&d| if d % 2 == 0 { 1 } else { -1 }).sum()
    }

    pub fn complement(&self) -> Stratification {
        let keep: Vec<usize> = (0..self.len()).filter(|&i| self.signs[i].is_complement()).collect();
        Stratification::build(
            self.order,
            self.n,
            keep.iter().map(|&i| self.signs[i].clone()).collect(),
            keep.iter().map(|&i| self.dims[i]).collect(),
            keep.iter().map(|&i| self.witnesses[i].clone()).collect(),
            self.affine.clone(),
            self.central.clone(),
        )
    }

    fn level_faces(&self, level: usize) -> &Faces {
        if level == 0 {
            &self.affine
        } else {
            &self.central
        }
    }

    /// A rational point of `ℝⁿ ⊗ ℝ^order` in stratum `s`, one `ℝⁿ` block per
    /// level.
    pub fn witness_point(&self, s: usize) -> Vec<Vec<Q>> {
        self.witnesses[s].iter().enumerate().map(|(l, &f)| self.level_faces(l).witnesses[f].clone()).collect()
    }

    /// Pairs `(x, y)` of strata where the pointwise order disagrees with the
    /// closure order.
    ///
    /// Every stratum is a union of products of level-1 faces. The closure of
    /// a product piece is a union of pieces, so stratum `x` lies in the
    /// closure of stratum `y` iff every piece of `x` lies below some piece of
    /// `y`. Face inclusion in a closure is decided geometrically: moving from
    /// the witness of the lower face an infinitesimal step towards the
    /// witness of the upper face must land in the upper face. Only intended
    /// for small inputs, since all pieces are enumerated.
    pub fn closure_order_violations(&self, arrangement: &Arrangement) -> Vec<(usize, usize)> {
        let affine_forms = arrangement.hyperplanes.clone();
        let central_forms: Vec<Hyperplane> = affine_forms.iter().map(Hyperplane::linear_part).collect();
        let face_closure = |faces: &Faces, forms: &[Hyperplane]| -> Vec<Vec<usize>> {
            (0..faces.len())
                .map(|x| {
                    let px = &faces.witnesses[x];
                    (0..faces.len())
                        .filter(|&y| {
                            let py = &faces.witnesses[y];
                            forms.iter().zip(&faces.signs[y]).all(|(h, &sy)| {
                                let at_x = sign_of(&h.eval(px));
                                let step = if at_x != 0 { at_x } else { sign_of(&h.eval(py)) };
                                step == sy
                            })
                        })
                        .collect()
                })
                .collect()
        };
        let up_affine = face_closure(&self.affine, &affine_forms);
        let up_central = face_closure(&self.central, &central_forms);
        let up = |level: usize| if level == 0 { &up_affine } else { &up_central };

        let pieces = self.pieces();
        let n = self.len();
        // above[x]: strata y whose closure contains stratum x
        let above: Vec<FixedBitSet> = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut acc: Option<FixedBitSet> = None;
                for piece in &pieces[x] {
                    let mut reach = FixedBitSet::with_capacity(n);
                    let mut tuple = vec![0; self.order];
                    self.visit_up(piece, 0, &up, &mut tuple, &mut reach);
                    match &mut acc {
                        None => acc = Some(reach),
                        Some(a) => a.intersect_with(&reach),
                    }
                }
                acc.unwrap_or_else(|| FixedBitSet::with_capacity(n))
            })
            .collect();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if above[x].contains(y) != self.signs[x].leq(&self.signs[y]) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn visit_up<'a>(
        &self,
        piece: &[usize],
        level: usize,
        up: &impl Fn(usize) -> &'a Vec<Vec<usize>>,
        tuple: &mut Vec<usize>,
        reach: &mut FixedBitSet,
    ) {
        if level == self.order {
            if let Some(s) = self.index_of(&self.collapse(tuple)) {
                reach.insert(s);
            }
            return;
        }
        for &f in &up(level)[piece[level]] {
            tuple[level] = f;
            self.visit_up(piece, level + 1, up, tuple, reach);
        }
    }

    fn collapse(&self, tuple: &[usize]) -> SignVector {
        let levels: Vec<&[i8]> = tuple.iter().enumerate().map(|(l, &f)| &self.level_faces(l).signs[f][..]).collect();
        SignVector::collapse(&levels)
    }

    /// Every face tuple, grouped by the stratum it lies in.
    fn pieces(&self) -> Vec<Vec<Vec<usize>>> {
        let mut out = vec![Vec::new(); self.len()];
        let mut tuple = vec![0; self.order];
        self.visit_all(0, &mut tuple, &mut out);
        out
    }

    fn visit_all(&self, level: usize, tuple: &mut Vec<usize>, out: &mut [Vec<Vec<usize>>]) {
        if level == self.order {
            if let Some(s) = self.index_of(&self.collapse(tuple)) {
                out[s].push(tuple.clone());
            }
            return;
        }
        for f in 0..self.level_faces(level).len() {
            tuple[level] = f;
            self.visit_all(level + 1, tuple, out);
        }
    }
}

/// The stratification by tuples of level-1 faces, one per level.
#[derive(Clone, Debug)]
pub struct SymmetricSubdivision {
    pub order: usize,
    /// Face indices per stratum: affine at level 1, central afterwards.
    pub tuples: Vec<Vec<usize>>,
    pub dims: Vec<usize>,
    pub poset: Poset,
    /// Image of each stratum in the level-`order` stratification.
    pub collapse: Vec<usize>,
    pub target: Stratification,
}

impl SymmetricSubdivision {
    fn new(a: &Arrangement, order: usize) -> Result<Self> {
        let target = a.faces_higher(order)?;
        let sizes: Vec<usize> =
            (0..order).map(|l| if l == 0 { target.affine.len() } else { target.central.len() }).collect();
        let total: usize = sizes.iter().product();
        let tuples: Vec<Vec<usize>> = (0..total)
            .map(|mut idx| {
                let mut t = vec![0; order];
                for l in (0..order).rev() {
                    t[l] = idx % sizes[l];
                    idx /= sizes[l];
                }
                t
            })
            .collect();
        let dims: Vec<usize> =
            tuples.iter().map(|t| t.iter().enumerate().map(|(l, &f)| target.level_faces(l).dims[f]).sum()).collect();
        let collapse = tuples
            .iter()
            .map(|t| target.index_of(&target.collapse(t)).expect("every face tuple lies in a stratum"))
            .collect();
        let n = tuples.len();
        let leq = |x: &[usize], y: &[usize]| {
            x.iter().zip(y).enumerate().all(|(l, (&fx, &fy))| target.level_faces(l).leq(fx, fy))
        };
        let down: Vec<FixedBitSet> = (0..n)
            .into_par_iter()
            .map(|y| {
                let mut b = FixedBitSet::with_capacity(n);
                for x in 0..n {
                    if x != y && leq(&tuples[x], &tuples[y]) {
                        b.insert(x);
                    }
                }
                b
            })
            .collect();
        let labels = tuples
            .iter()
            .map(|t| {
                let parts: Vec<String> = t
                    .iter()
                    .enumerate()
                    .map(|(l, &f)| SignVector(target.level_faces(l).signs[f].clone()).to_string())
                    .collect();
                Some(parts.join("x"))
            })
            .collect();
        let poset = Poset::from_strict_down_sets(dims.iter().map(|&d| Some(d as i64)).collect(), labels, &down);
        Ok(SymmetricSubdivision { order, tuples, dims, poset, collapse, target })
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn euler_sum(&self) -> i64 {
        self.dims.iter().map(|&d| if d % 2 == 0 { 1 } else { -1 }).sum()
    }

    /// Index of the stratum with the given face tuple.
    pub fn index_of(&self, tuple: &[usize]) -> Option<usize> {
        self.tuples.binary_search_by(|t| t.as_slice().cmp(tuple)).ok()
    }

    /// Permutes the central levels `2..=order`: `perm[i]` is the new
    /// position of central level `i`. Returns the induced map on strata.
    pub fn permute_levels(&self, perm: &[usize]) -> Result<Vec<usize>> {
        let k = self.order - 1;
        let mut seen = vec![false; k];
        if perm.len() != k || perm.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidAction(format!("{perm:?} is not a permutation of {k} levels")));
        }
        Ok(self
            .tuples
            .iter()
            .map(|t| {
                let mut u = t.clone();
                for (i, &p) in perm.iter().enumerate() {
                    u[1 + p] = t[1 + i];
                }
                self.index_of(&u).expect("permuted tuples are strata")
            })
            .collect())
    }
}
