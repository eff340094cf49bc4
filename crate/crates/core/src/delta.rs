//! Δ-complexes (semi-simplicial sets) with explicit face maps.
//!
//! Cells are dense indices per dimension. The `i`-th face of an `n`-cell is
//! stored at position `i` of its face list, so the boundary convention
//! `∂ = Σ (-1)^i d_i` is reproducible from the stored data alone.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Poset;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeltaComplex {
    /// `faces[n][c]` lists `d_0 c, …, d_n c` for the `n`-cell `c`; empty for vertices.
    faces: Vec<Vec<Vec<usize>>>,
}

/// A violated simplicial identity `d_i d_j = d_{j-1} d_i` (i < j).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceIdentityViolation {
    pub dim: usize,
    pub cell: usize,
    pub i: usize,
    pub j: usize,
}

impl DeltaComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a complex from per-dimension cell counts and face lists.
    /// `faces[0]` may be given as a list of empty vectors or omitted entirely
    /// by passing `vertex_count`.
    pub fn new(vertex_count: usize, higher: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let mut faces = Vec::with_capacity(higher.len() + 1);
        if vertex_count > 0 || !higher.is_empty() {
            faces.push(vec![Vec::new(); vertex_count]);
        }
        faces.extend(higher);
        let k = DeltaComplex { faces };
        k.check_shape()?;
        Ok(k.trimmed())
    }

    /// Builds a complex from keyed cells. `levels[n]` holds the keys of the
    /// `n`-cells and `face(key, i)` returns the key of `d_i`.
    pub fn from_keyed<K, F>(levels: &[Vec<K>], face: F) -> Self
    where
        K: Hash + Eq,
        F: Fn(&K, usize) -> K,
    {
        let mut faces: Vec<Vec<Vec<usize>>> = Vec::with_capacity(levels.len());
        let mut prev: HashMap<&K, usize> = HashMap::new();
        for (n, cells) in levels.iter().enumerate() {
            let mut this = Vec::with_capacity(cells.len());
            for key in cells {
                if n == 0 {
                    this.push(Vec::new());
                } else {
                    let fs = (0..=n)
                        .map(|i| {
                            let f = face(key, i);
                            *prev.get(&f).expect("face of a cell must be a cell")
                        })
                        .collect();
                    this.push(fs);
                }
            }
            faces.push(this);
            prev = cells.iter().enumerate().map(|(i, k)| (k, i)).collect();
        }
        DeltaComplex { faces }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.faces.last().is_some_and(|l| l.is_empty()) {
            self.faces.pop();
        }
        self
    }

    fn check_shape(&self) -> Result<()> {
        for (n, level) in self.faces.iter().enumerate() {
            for (c, fs) in level.iter().enumerate() {
                let expect = if n == 0 { 0 } else { n + 1 };
                if fs.len() != expect {
                    return Err(Error::InvalidComplex(format!(
                        "{n}-cell {c} has {} faces, expected {expect}",
                        fs.len()
                    )));
                }
                if n > 0 {
                    if let Some(&bad) = fs.iter().find(|&&f| f >= self.faces[n - 1].len()) {
                        return Err(Error::InvalidComplex(format!(
                            "{n}-cell {c} references missing {}-cell {bad}",
                            n - 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Top dimension plus one; zero for the empty complex.
    pub fn num_dims(&self) -> usize {
        self.faces.len()
    }

    pub fn dim(&self) -> Option<usize> {
        self.faces.len().checked_sub(1)
    }

    pub fn count(&self, n: usize) -> usize {
        self.faces.get(n).map_or(0, Vec::len)
    }

    pub fn faces(&self, n: usize, cell: usize) -> &[usize] {
        &self.faces[n][cell]
    }

    pub fn face(&self, n: usize, cell: usize, i: usize) -> usize {
        self.faces[n][cell][i]
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn total_cells(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(n, l)| if n % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// Number of connected components (of the 1-skeleton).
    pub fn components(&self) -> usize {
        let n = self.count(0);
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut comps = n;
        if self.num_dims() > 1 {
            for fs in &self.faces[1] {
                let (a, b) = (find(&mut parent, fs[0]), find(&mut parent, fs[1]));
                if a != b {
                    parent[a] = b;
                    comps -= 1;
                }
            }
        }
        comps
    }

    /// Checks `d_i d_j = d_{j-1} d_i` for all `i < j` on every cell.
    pub fn face_identity_violations(&self) -> Vec<FaceIdentityViolation> {
        let mut out = Vec::new();
        for n in 2..self.num_dims() {
            for (c, fs) in self.faces[n].iter().enumerate() {
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = self.faces[n - 1][fs[j]][i];
                        let rhs = self.faces[n - 1][fs[i]][j - 1];
                        if lhs != rhs {
                            out.push(FaceIdentityViolation { dim: n, cell: c, i, j });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        self.check_shape()?;
        match self.face_identity_violations().first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidComplex(format!(
                "d_{} d_{} != d_{} d_{} on {}-cell {}",
                v.i,
                v.j,
                v.j - 1,
                v.i,
                v.dim,
                v.cell
            ))),
        }
    }

    /// Vertices of a cell in order (`v_k` is obtained by deleting all other
    /// vertices).
    pub fn vertices(&self, n: usize, cell: usize) -> Vec<usize> {
        (0..=n)
            .map(|k| {
                let mut c = cell;
                let mut d = n;
                // drop the vertices after k from the top, then those before k
                for _ in k..n {
                    c = self.faces[d][c][d];
                    d -= 1;
                }
                for _ in 0..k {
                    c = self.faces[d][c][0];
                    d -= 1;
                }
                c
            })
            .collect()
    }

    /// Face poset of a regular Δ-complex: cells ordered by iterated faces,
    /// graded by dimension, with covers `d_i σ ⋖ σ`.
    pub fn face_poset(&self) -> Poset {
        let offsets: Vec<usize> = self
            .faces
            .iter()
            .scan(0, |acc, l| {
                let o = *acc;
                *acc += l.len();
                Some(o)
            })
            .collect();
        let mut grades = Vec::new();
        let mut covers = Vec::new();
        for (n, level) in self.faces.iter().enumerate() {
            for (c, fs) in level.iter().enumerate() {
                grades.push(Some(n as i64));
                for &f in fs {
                    covers.push((offsets[n - 1] + f, offsets[n] + c));
                }
            }
        }
        Poset::new(grades, covers)
    }

    /// Disjoint union.
    pub fn disjoint_union(&self, other: &DeltaComplex) -> DeltaComplex {
        let dims = self.num_dims().max(other.num_dims());
        let mut faces = Vec::with_capacity(dims);
        for n in 0..dims {
            let mut level: Vec<Vec<usize>> = self.faces.get(n).cloned().unwrap_or_default();
            let shift = if n == 0 { 0 } else { self.count(n - 1) };
            if let Some(o) = other.faces.get(n) {
                level.extend(o.iter().map(|fs| fs.iter().map(|f| f + shift).collect()));
            }
            faces.push(level);
        }
        DeltaComplex { faces }
    }

    pub fn to_json(&self) -> DeltaJson {
        DeltaJson {
            cells: self.faces.iter().map(|l| (0..l.len() as u64).collect()).collect(),
            faces: self
                .faces
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, l)| (n.to_string(), l.clone()))
                .collect(),
        }
    }

    pub fn from_json(json: &DeltaJson) -> Result<Self> {
        let mut faces = Vec::with_capacity(json.cells.len());
        let mut index: Vec<HashMap<u64, usize>> = Vec::with_capacity(json.cells.len());
        for (n, ids) in json.cells.iter().enumerate() {
            let map: HashMap<u64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
            if map.len() != ids.len() {
                return Err(Error::Schema {
                    path: format!("/cells/{n}"),
                    message: "duplicate cell id".into(),
                });
            }
            let level = if n == 0 {
                vec![Vec::new(); ids.len()]
            } else {
                let raw = json.faces.get(&n.to_string()).ok_or_else(|| Error::Schema {
                    path: format!("/faces/{n}"),
                    message: "missing face lists".into(),
                })?;
                if raw.len() != ids.len() {
                    return Err(Error::Schema {
                        path: format!("/faces/{n}"),
                        message: format!("expected {} face lists, found {}", ids.len(), raw.len()),
                    });
                }
                raw.iter()
                    .enumerate()
                    .map(|(c, fs)| {
                        fs.iter()
                            .enumerate()
                            .map(|(i, id)| {
                                index[n - 1].get(&(*id as u64)).copied().ok_or_else(|| {
                                    Error::Schema {
                                        path: format!("/faces/{n}/{c}/{i}"),
                                        message: format!("unknown {}-cell id {id}", n - 1),
                                    }
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            faces.push(level);
            index.push(map);
        }
        let k = DeltaComplex { faces };
        k.check_shape()?;
        Ok(k.trimmed())
    }
}

/// Exchange format: `{"cells":[[ids per dim]], "faces":{"n":[[d0,…,dn] per cell]}}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DeltaJson {
    pub cells: Vec<Vec<u64>>,
    #[serde(default)]
    pub faces: std::collections::BTreeMap<String, Vec<Vec<usize>>>,
}
