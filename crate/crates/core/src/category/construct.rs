//! Constructions producing new categories: comma categories, stars and
//! links, products, the Grothendieck construction and free quotients.

use std::collections::{HashMap, HashSet, VecDeque};

use super::{AcyclicCategory, Arrow};
use crate::delta::DeltaComplex;
use crate::error::{Error, Result};
use crate::poset::Poset;

impl AcyclicCategory {
    /// The comma category `x ↓ C`: objects are the arrows out of `x` (the
    /// identity first when `with_identity`, then `out_morphisms(x)`), and a
    /// morphism `u → v` is a non-identity `w` with `w ∘ u = v`. Grades are
    /// those of the targets.
    pub fn under_category(&self, x: usize, with_identity: bool) -> Result<AcyclicCategory> {
        self.check()?;
        self.require_object(x)?;
        let mut objects: Vec<Arrow> = Vec::new();
        if with_identity {
            objects.push(Arrow::Id(x));
        }
        objects.extend(self.out_morphisms(x).iter().map(|&f| Arrow::Mor(f)));
        self.comma(objects, true)
    }

    /// The comma category `C ↓ x`: objects are the arrows into `x`, and a
    /// morphism `u → v` is a non-identity `w` with `v ∘ w = u`.
    pub fn over_category(&self, x: usize, with_identity: bool) -> Result<AcyclicCategory> {
        self.check()?;
        self.require_object(x)?;
        let mut objects: Vec<Arrow> = Vec::new();
        if with_identity {
            objects.push(Arrow::Id(x));
        }
        objects.extend(self.in_morphisms(x).iter().map(|&f| Arrow::Mor(f)));
        self.comma(objects, false)
    }

    fn comma(&self, objects: Vec<Arrow>, under: bool) -> Result<AcyclicCategory> {
        let index: HashMap<Arrow, usize> = objects.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let free_end = |a: Arrow| if under { self.arrow_dst(a) } else { self.arrow_src(a) };
        // a comma morphism is (object it starts from, w)
        let mut morphisms = Vec::new();
        let mut keys = Vec::new();
        for (i, &u) in objects.iter().enumerate() {
            let ws = if under { self.out_morphisms(free_end(u)) } else { self.in_morphisms(free_end(u)) };
            for &w in ws {
                let v = if under {
                    self.compose_arrows(Arrow::Mor(w), u)
                } else {
                    self.compose_arrows(u, Arrow::Mor(w))
                };
                if let Some(&j) = index.get(&v) {
                    // under: u → v; over: v → u
                    morphisms.push(if under { (i, j) } else { (j, i) });
                    keys.push((if under { i } else { j }, w));
                }
            }
        }
        let key_index: HashMap<(usize, usize), usize> =
            keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut starting: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
        for (i, &(s, _)) in keys.iter().enumerate() {
            starting[s].push(i);
        }
        let mut compose = Vec::new();
        for (fi, &(s, w1)) in keys.iter().enumerate() {
            for &gi in &starting[morphisms[fi].1] {
                let w = self.compose(keys[gi].1, w1).expect("composition table is total");
                compose.push((gi, fi, key_index[&(s, w)]));
            }
        }
        let grades = objects.iter().map(|&a| self.grades[free_end(a)]).collect();
        let labels = objects.iter().map(|&a| self.labels[free_end(a)].clone()).collect();
        let m = morphisms.len();
        Ok(AcyclicCategory::with_labels(grades, labels, morphisms, vec![None; m], compose))
    }

    /// Nerve of `x ↓ C`; a cone on the upper link.
    pub fn upper_star(&self, x: usize) -> Result<DeltaComplex> {
        self.under_category(x, true)?.nerve()
    }

    /// Nerve of `C_{>x}`, the comma category `x ↓ C` without `1_x`.
    pub fn upper_link(&self, x: usize) -> Result<DeltaComplex> {
        self.under_category(x, false)?.nerve()
    }

    pub fn lower_star(&self, x: usize) -> Result<DeltaComplex> {
        self.over_category(x, true)?.nerve()
    }

    pub fn lower_link(&self, x: usize) -> Result<DeltaComplex> {
        self.over_category(x, false)?.nerve()
    }

    /// The product category. Object `(x, y)` has index `x * d.num_objects() + y`;
    /// grades add.
    pub fn product(&self, d: &AcyclicCategory) -> Result<AcyclicCategory> {
        self.check()?;
        d.check()?;
        let m = d.num_objects();
        let arrows_out = |c: &AcyclicCategory, x: usize| {
            let mut v = vec![Arrow::Id(x)];
            v.extend(c.out_morphisms(x).iter().map(|&f| Arrow::Mor(f)));
            v
        };
        let mut morphisms = Vec::new();
        let mut pairs = Vec::new();
        for x in 0..self.num_objects() {
            for y in 0..m {
                for &a in &arrows_out(self, x) {
                    for &b in &arrows_out(d, y) {
                        if matches!((a, b), (Arrow::Id(_), Arrow::Id(_))) {
                            continue;
                        }
                        morphisms.push((x * m + y, self.arrow_dst(a) * m + d.arrow_dst(b)));
                        pairs.push((a, b));
                    }
                }
            }
        }
        let index: HashMap<(Arrow, Arrow), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.num_objects() * m];
        for (i, &(s, _)) in morphisms.iter().enumerate() {
            out[s].push(i);
        }
        let mut compose = Vec::new();
        for (fi, &(fa, fb)) in pairs.iter().enumerate() {
            for &gi in &out[morphisms[fi].1] {
                let (ga, gb) = pairs[gi];
                let c = (self.compose_arrows(ga, fa), d.compose_arrows(gb, fb));
                compose.push((gi, fi, index[&c]));
            }
        }
        let mut grades = Vec::with_capacity(self.num_objects() * m);
        let mut labels = Vec::with_capacity(self.num_objects() * m);
        let labelled = self.labels.iter().chain(&d.labels).any(Option::is_some);
        for x in 0..self.num_objects() {
            for y in 0..m {
                grades.push(self.grades[x].zip(d.grades[y]).map(|(a, b)| a + b));
                labels.push(labelled.then(|| format!("({},{})", self.object_name(x), d.object_name(y))));
            }
        }
        let n = morphisms.len();
        Ok(AcyclicCategory::with_labels(grades, labels, morphisms, vec![None; n], compose))
    }
}

/// A diagram of posets over a category: a poset per object and an
/// order-preserving map per non-identity morphism. With `interior`, only the
/// marked elements of each poset become objects of the Grothendieck
/// construction.
#[derive(Clone, Debug)]
pub struct PosetFunctor {
    pub posets: Vec<Poset>,
    pub maps: Vec<Vec<usize>>,
    pub interior: Option<Vec<Vec<bool>>>,
}

impl PosetFunctor {
    /// Constant functor at the one-point poset.
    pub fn constant_point(c: &AcyclicCategory) -> Self {
        PosetFunctor {
            posets: vec![Poset::new(vec![Some(0)], vec![]); c.num_objects()],
            maps: vec![vec![0]; c.num_morphisms()],
            interior: None,
        }
    }

    /// Checks shapes, monotonicity on covers and `F(g∘f) = F(g)∘F(f)`.
    pub fn check(&self, c: &AcyclicCategory) -> Result<()> {
        let bad = |m: String| Err(Error::NonFunctorial(m));
        if self.posets.len() != c.num_objects() || self.maps.len() != c.num_morphisms() {
            return bad("functor data does not match the category's size".into());
        }
        for p in &self.posets {
            p.check()?;
        }
        if let Some(int) = &self.interior {
            if int.len() != c.num_objects() || int.iter().zip(&self.posets).any(|(i, p)| i.len() != p.len()) {
                return bad("interior marks do not match the posets".into());
            }
        }
        for (f, map) in self.maps.iter().enumerate() {
            let (s, t) = c.morphisms()[f];
            let (ps, pt) = (&self.posets[s], &self.posets[t]);
            if map.len() != ps.len() || map.iter().any(|&b| b >= pt.len()) {
                return bad(format!("map of morphism {f} has the wrong shape"));
            }
            for &(a, b) in ps.covers() {
                if !pt.leq(map[a], map[b]) {
                    return bad(format!("map of morphism {f} does not preserve the cover ({a}, {b})"));
                }
            }
        }
        for (g, f, gf) in c.composition_table() {
            for a in 0..self.posets[c.src(f)].len() {
                if self.maps[gf][a] != self.maps[g][self.maps[f][a]] {
                    return bad(format!("F({gf}) differs from F({g})∘F({f}) at element {a}"));
                }
            }
        }
        Ok(())
    }

    fn apply(&self, u: Arrow, a: usize) -> usize {
        match u {
            Arrow::Id(_) => a,
            Arrow::Mor(f) => self.maps[f][a],
        }
    }

    fn is_interior(&self, x: usize, a: usize) -> bool {
        self.interior.as_ref().is_none_or(|i| i[x][a])
    }
}

/// Objects of a Grothendieck construction as `(object, element)` pairs.
pub type GrothendieckObjects = Vec<(usize, usize)>;

impl AcyclicCategory {
    /// The Grothendieck construction: objects `(x, a)` with `a ∈ F(x)`, and a
    /// morphism `(x, a) → (y, b)` for each `u : x → y` with `F(u)(a) ≤ b`
    /// (identity `u` only when `a < b`). Object grades are the grades of the
    /// poset elements.
    pub fn grothendieck(&self, functor: &PosetFunctor) -> Result<(AcyclicCategory, GrothendieckObjects)> {
        self.check()?;
        functor.check(self)?;
        let mut objects = Vec::new();
        let mut object_index = HashMap::new();
        for x in 0..self.num_objects() {
            for a in 0..functor.posets[x].len() {
                if functor.is_interior(x, a) {
                    object_index.insert((x, a), objects.len());
                    objects.push((x, a));
                }
            }
        }
        let mut morphisms = Vec::new();
        let mut keys: Vec<(Arrow, usize, usize)> = Vec::new();
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
        for (i, &(x, a)) in objects.iter().enumerate() {
            let mut arrows = vec![Arrow::Id(x)];
            arrows.extend(self.out_morphisms(x).iter().map(|&f| Arrow::Mor(f)));
            for u in arrows {
                let y = self.arrow_dst(u);
                let fa = functor.apply(u, a);
                for b in functor.posets[y].up_set(fa)?.ones() {
                    if u == Arrow::Id(x) && b == a {
                        continue;
                    }
                    if let Some(&j) = object_index.get(&(y, b)) {
                        out[i].push(morphisms.len());
                        morphisms.push((i, j));
                        keys.push((u, i, j));
                    }
                }
            }
        }
        let key_index: HashMap<(Arrow, usize, usize), usize> =
            keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut compose = Vec::new();
        for (fi, &(u, s, mid)) in keys.iter().enumerate() {
            for &gi in &out[mid] {
                let (v, _, t) = keys[gi];
                compose.push((gi, fi, key_index[&(self.compose_arrows(v, u), s, t)]));
            }
        }
        let grades = objects.iter().map(|&(x, a)| functor.posets[x].grade(a)).collect();
        let labels = objects
            .iter()
            .map(|&(x, a)| {
                let p = &functor.posets[x];
                (self.labels[x].is_some() || p.label(a).is_some()).then(|| {
                    format!("({},{})", self.object_name(x), p.label(a).map_or_else(|| a.to_string(), str::to_string))
                })
            })
            .collect();
        let n = morphisms.len();
        let cat = AcyclicCategory::with_labels(grades, labels, morphisms, vec![None; n], compose);
        cat.check()?;
        Ok((cat, objects))
    }
}

/// A finite group acting on a category, given by generators. Each generator
/// is a pair of permutations: of the objects and of the non-identity
/// morphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    pub generators: Vec<(Vec<usize>, Vec<usize>)>,
}

impl GroupAction {
    pub fn trivial() -> Self {
        GroupAction { generators: Vec::new() }
    }

    /// Checks that each generator is an automorphism of `c` preserving grades.
    pub fn check(&self, c: &AcyclicCategory) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidAction(m));
        for (gi, (obj, mor)) in self.generators.iter().enumerate() {
            if !is_permutation(obj, c.num_objects()) || !is_permutation(mor, c.num_morphisms()) {
                return bad(format!("generator {gi} is not a pair of permutations of the right sizes"));
            }
            for x in 0..c.num_objects() {
                if c.grade(x) != c.grade(obj[x]) {
                    return bad(format!("generator {gi} changes the grade of object {x}"));
                }
            }
            for (f, &(s, t)) in c.morphisms().iter().enumerate() {
                if c.morphisms()[mor[f]] != (obj[s], obj[t]) {
                    return bad(format!("generator {gi} does not respect the ends of morphism {f}"));
                }
            }
            for (g, f, gf) in c.composition_table() {
                if c.compose(mor[g], mor[f]) != Some(mor[gf]) {
                    return bad(format!("generator {gi} does not respect the composite of {g} after {f}"));
                }
            }
        }
        Ok(())
    }

    /// All group elements as concatenated permutations (objects, then
    /// morphisms), identity first.
    pub fn elements(&self, c: &AcyclicCategory) -> Result<Vec<Vec<usize>>> {
        self.check(c)?;
        let n = c.num_objects();
        let gens: Vec<Vec<usize>> = self
            .generators
            .iter()
            .map(|(o, m)| o.iter().copied().chain(m.iter().map(|&f| f + n)).collect())
            .collect();
        let id: Vec<usize> = (0..n + c.num_morphisms()).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(e) = queue.pop_front() {
            for g in &gens {
                let h: Vec<usize> = e.iter().map(|&i| g[i]).collect();
                if seen.insert(h.clone()) {
                    elements.push(h.clone());
                    queue.push_back(h);
                }
            }
        }
        Ok(elements)
    }

    /// Fails with the first object fixed by a non-identity element.
    pub fn check_free(&self, c: &AcyclicCategory) -> Result<()> {
        for e in self.elements(c)?.iter().skip(1) {
            if let Some(x) = (0..c.num_objects()).find(|&x| e[x] == x) {
                return Err(Error::NonFreeAction { object: x });
            }
        }
        Ok(())
    }

    /// Orbit index of every object and every morphism; orbits are numbered
    /// by their smallest member.
    pub fn orbits(&self, c: &AcyclicCategory) -> Result<(Vec<usize>, Vec<usize>)> {
        let n = c.num_objects();
        let elements = self.elements(c)?;
        let number = |range: std::ops::Range<usize>| {
            let mut orbit = vec![usize::MAX; range.len()];
            let mut next = 0;
            for i in range.clone() {
                if orbit[i - range.start] == usize::MAX {
                    for e in &elements {
                        orbit[e[i] - range.start] = next;
                    }
                    next += 1;
                }
            }
            orbit
        };
        Ok((number(0..n), number(n..n + c.num_morphisms())))
    }
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

impl AcyclicCategory {
    /// The orbit category of a free action whose non-identity morphisms
    /// strictly raise grades.
    pub fn quotient_by_free_action(&self, action: &GroupAction) -> Result<AcyclicCategory> {
        self.check()?;
        action.check_free(self)?;
        for (f, &(s, t)) in self.morphisms().iter().enumerate() {
            if let (Some(a), Some(b)) = (self.grade(s), self.grade(t)) {
                if a >= b {
                    return Err(Error::GradeNotRaised(f));
                }
            }
        }
        let (obj_orbit, mor_orbit) = action.orbits(self)?;
        let n_obj = obj_orbit.iter().max().map_or(0, |&m| m + 1);
        let n_mor = mor_orbit.iter().max().map_or(0, |&m| m + 1);
        let mut obj_rep = vec![usize::MAX; n_obj];
        for (x, &o) in obj_orbit.iter().enumerate().rev() {
            obj_rep[o] = x;
        }
        let mut mor_rep = vec![usize::MAX; n_mor];
        for (f, &o) in mor_orbit.iter().enumerate().rev() {
            mor_rep[o] = f;
        }
        let morphisms = mor_rep.iter().map(|&f| (obj_orbit[self.src(f)], obj_orbit[self.dst(f)])).collect();
        // freeness: for a fixed representative f, each orbit of morphisms
        // composable after it has exactly one member starting at dst(f)
        let mut compose = Vec::new();
        for (fo, &f) in mor_rep.iter().enumerate() {
            for &g in self.out_morphisms(self.dst(f)) {
                let gf = self.compose(g, f).expect("composition table is total");
                compose.push((mor_orbit[g], fo, mor_orbit[gf]));
            }
        }
        let grades = obj_rep.iter().map(|&x| self.grade(x)).collect();
        let labels = obj_rep.iter().map(|&x| self.labels()[x].clone()).collect();
        let mlabels = mor_rep.iter().map(|&f| self.morphism_labels()[f].clone()).collect();
        let q = AcyclicCategory::with_labels(grades, labels, morphisms, mlabels, compose);
        q.check()?;
        Ok(q)
    }
}
