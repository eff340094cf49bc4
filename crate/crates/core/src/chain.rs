//! Integer chain complexes of Δ-complexes and their homology.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::delta::DeltaComplex;
use crate::error::{Error, Result};
use crate::snf::{rank_over_rationals, smith_diagonal, SmithDiagonal, SparseMatrix};

/// `boundaries[n]` is `∂_n : C_n → C_{n-1}` for `n >= 1`; index 0 holds the
/// zero map out of `C_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    boundaries: Vec<SparseMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HomologyResult {
    pub betti: Vec<usize>,
    /// Torsion invariant factors of `H_n`, each `> 1` and dividing the next.
    pub torsion: Vec<Vec<BigInt>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HomologyMode {
    /// Betti numbers and torsion via Smith normal form.
    #[default]
    Integral,
    /// Betti numbers only, from ranks over ℚ.
    RankOnly,
}

impl ChainComplex {
    /// Boundary matrices with `∂ = Σ (-1)^i d_i`. Fails if the input violates
    /// the simplicial identities.
    pub fn from_delta(k: &DeltaComplex) -> Result<Self> {
        k.validate()?;
        let ranks = k.f_vector();
        let mut boundaries = vec![SparseMatrix::zeros(0, ranks.first().copied().unwrap_or(0))];
        for n in 1..k.num_dims() {
            let cols = (0..k.count(n))
                .map(|c| {
                    k.faces(n, c)
                        .iter()
                        .enumerate()
                        .map(|(i, &f)| (f, if i % 2 == 0 { 1 } else { -1 }))
                        .collect()
                })
                .collect();
            boundaries.push(SparseMatrix::from_columns(k.count(n - 1), cols));
        }
        let cc = ChainComplex { ranks, boundaries };
        cc.check_square_zero()?;
        Ok(cc)
    }

    /// Assembles a complex from explicit boundary matrices `∂_1, ∂_2, …`.
    pub fn from_boundaries(c0: usize, higher: Vec<SparseMatrix>) -> Result<Self> {
        let mut ranks = vec![c0];
        for (n, m) in higher.iter().enumerate() {
            if m.nrows() != ranks[n] {
                return Err(Error::InvalidComplex(format!(
                    "boundary in degree {} has {} rows, expected {}",
                    n + 1,
                    m.nrows(),
                    ranks[n]
                )));
            }
            ranks.push(m.ncols());
        }
        let mut boundaries = vec![SparseMatrix::zeros(0, c0)];
        boundaries.extend(higher);
        let cc = ChainComplex { ranks, boundaries };
        cc.check_square_zero()?;
        Ok(cc)
    }

    fn check_square_zero(&self) -> Result<()> {
        for n in 2..self.boundaries.len() {
            let prod = self.boundaries[n - 1]
                .checked_mul(&self.boundaries[n])
                .ok_or(Error::BoundarySquare(n))?;
            if !prod.is_zero() {
                return Err(Error::BoundarySquare(n));
            }
        }
        Ok(())
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn boundary(&self, n: usize) -> &SparseMatrix {
        &self.boundaries[n]
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    pub fn homology(&self) -> HomologyResult {
        self.homology_with(HomologyMode::Integral)
    }

    pub fn homology_with(&self, mode: HomologyMode) -> HomologyResult {
        let top = self.ranks.len();
        let diags: Vec<SmithDiagonal> = (1..top)
            .into_par_iter()
            .map(|n| match mode {
                HomologyMode::Integral => smith_diagonal(&self.boundaries[n]),
                HomologyMode::RankOnly => {
                    SmithDiagonal { ones: rank_over_rationals(&self.boundaries[n]), torsion: vec![] }
                }
            })
            .collect();
        // diags[n - 1] belongs to ∂_n
        let rank = |n: usize| if n == 0 || n >= top { 0 } else { diags[n - 1].rank() };
        let betti = (0..top).map(|n| self.ranks[n] - rank(n) - rank(n + 1)).collect();
        let torsion = (0..top)
            .map(|n| if n + 1 < top { diags[n].torsion.clone() } else { Vec::new() })
            .collect();
        HomologyResult { betti, torsion }
    }
}

impl HomologyResult {
    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(n, &b)| if n % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// Betti numbers with trailing zeros removed.
    pub fn betti_trimmed(&self) -> Vec<usize> {
        let mut b = self.betti.clone();
        while b.last() == Some(&0) {
            b.pop();
        }
        b
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(Vec::is_empty)
    }

    /// Same homology as the sphere `S^d` (`d = -1` is the empty space).
    pub fn is_sphere(&self, d: i64) -> bool {
        if !self.is_torsion_free() {
            return false;
        }
        let b = self.betti_trimmed();
        match d {
            -1 => b.is_empty(),
            0 => b == [2],
            d if d > 0 => {
                let mut want = vec![0; d as usize + 1];
                want[0] = 1;
                want[d as usize] = 1;
                b == want
            }
            _ => false,
        }
    }

    pub fn to_json(&self) -> HomologyJson {
        HomologyJson {
            betti: self.betti.clone(),
            torsion: self
                .torsion
                .iter()
                .map(|t| {
                    t.iter()
                        .map(|v| match v.to_u64() {
                            Some(x) => serde_json::Value::from(x),
                            None => serde_json::Value::from(v.to_string()),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

impl std::fmt::Display for HomologyResult {
    /// `(Z, Z^2, Z/2)`-style summary.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .betti
            .iter()
            .zip(&self.torsion)
            .map(|(&b, t)| {
                let mut terms = Vec::new();
                match b {
                    0 => {}
                    1 => terms.push("Z".to_string()),
                    b => terms.push(format!("Z^{b}")),
                }
                terms.extend(t.iter().map(|q| format!("Z/{q}")));
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join("+")
                }
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `{"betti":[…],"torsion":[[…],…]}`; torsion coefficients that exceed `u64`
/// are written as decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct HomologyJson {
    pub betti: Vec<usize>,
    pub torsion: Vec<Vec<serde_json::Value>>,
}

/// Homology of a Δ-complex.
pub fn homology(k: &DeltaComplex) -> Result<HomologyResult> {
    Ok(ChainComplex::from_delta(k)?.homology())
}
