//! Smith normal form of integer matrices.
//!
//! Boundary matrices of nerves are sparse with unit entries, so most of the
//! work is done by eliminating `±1` pivots on a sparse column representation
//! with checked `i64` arithmetic. Whatever survives (or overflows) is handed
//! to a dense arbitrary-precision SNF.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Column-major sparse integer matrix. Each column is sorted by row index
/// and holds no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, cols: vec![Vec::new(); ncols] }
    }

    /// Builds a matrix from unsorted `(row, value)` lists per column;
    /// duplicate rows are summed.
    pub fn from_columns(nrows: usize, cols: Vec<Vec<(usize, i64)>>) -> Self {
        let cols = cols
            .into_iter()
            .map(|mut c| {
                c.sort_unstable_by_key(|e| e.0);
                let mut out: Vec<(usize, i64)> = Vec::with_capacity(c.len());
                for (r, v) in c {
                    assert!(r < nrows, "row index out of range");
                    match out.last_mut() {
                        Some(last) if last.0 == r => last.1 += v,
                        _ => out.push((r, v)),
                    }
                }
                out.retain(|e| e.1 != 0);
                out
            })
            .collect();
        SparseMatrix { nrows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.cols[j]
            .binary_search_by_key(&i, |e| e.0)
            .map(|k| self.cols[j][k].1)
            .unwrap_or(0)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.ncols()]; self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for &(i, v) in c {
                d[i][j] = v;
            }
        }
        d
    }

    /// `self * rhs`, or `None` on overflow.
    pub fn checked_mul(&self, rhs: &SparseMatrix) -> Option<SparseMatrix> {
        assert_eq!(self.ncols(), rhs.nrows);
        let mut cols = Vec::with_capacity(rhs.ncols());
        for c in &rhs.cols {
            let mut acc: std::collections::BTreeMap<usize, i64> = Default::default();
            for &(k, v) in c {
                for &(i, w) in &self.cols[k] {
                    let e = acc.entry(i).or_insert(0);
                    *e = e.checked_add(w.checked_mul(v)?)?;
                }
            }
            cols.push(acc.into_iter().filter(|e| e.1 != 0).collect());
        }
        Some(SparseMatrix { nrows: self.nrows, cols })
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// Conjugates by permutations: row `i` moves to `row_perm[i]`, column
    /// `j` to `col_perm[j]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseMatrix {
        let mut cols = vec![Vec::new(); self.ncols()];
        for (j, c) in self.cols.iter().enumerate() {
            cols[col_perm[j]] = c.iter().map(|&(i, v)| (row_perm[i], v)).collect();
        }
        SparseMatrix::from_columns(self.nrows, cols)
    }
}

/// Diagonal of the Smith normal form: `ones` unit invariant factors followed
/// by `torsion` (each `> 1`, each dividing the next).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SmithDiagonal {
    pub ones: usize,
    pub torsion: Vec<BigInt>,
}

impl SmithDiagonal {
    pub fn rank(&self) -> usize {
        self.ones + self.torsion.len()
    }
}

/// Smith normal form diagonal of `m`.
pub fn smith_diagonal(m: &SparseMatrix) -> SmithDiagonal {
    let (ones, residue) = eliminate_unit_pivots(m);
    let mut diag = dense_smith(residue);
    let mut extra_ones = 0;
    diag.retain(|d| {
        if d.is_one() {
            extra_ones += 1;
            false
        } else {
            true
        }
    });
    SmithDiagonal { ones: ones + extra_ones, torsion: diag }
}

/// Rank over ℚ.
pub fn rank_over_rationals(m: &SparseMatrix) -> usize {
    let (ones, residue) = eliminate_unit_pivots(m);
    ones + bareiss_rank(residue)
}

/// Sparse elimination of unit pivots. Returns the number of pivots removed
/// and the remaining dense residue (rows/columns that were never pivoted).
fn eliminate_unit_pivots(m: &SparseMatrix) -> (usize, Vec<Vec<BigInt>>) {
    let nrows = m.nrows;
    let ncols = m.ncols();
    let mut cols = m.cols.clone();
    let mut col_alive = vec![true; ncols];
    let mut row_alive = vec![true; nrows];
    // row -> columns that may contain it (stale entries tolerated)
    let mut row_index: Vec<Vec<usize>> = vec![Vec::new(); nrows];
    for (j, c) in cols.iter().enumerate() {
        for &(i, _) in c {
            row_index[i].push(j);
        }
    }
    let mut pivots = 0;
    let mut overflowed = false;
    let mut order: Vec<usize> = (0..ncols).collect();
    order.sort_by_key(|&j| cols[j].len());

    let mut progress = true;
    while progress && !overflowed {
        progress = false;
        for &c in &order {
            if !col_alive[c] || cols[c].is_empty() {
                continue;
            }
            let Some(&(r, pv)) = cols[c]
                .iter()
                .filter(|e| e.1 == 1 || e.1 == -1)
                .min_by_key(|e| row_index[e.0].len())
            else {
                continue;
            };
            // clear row r from every other column
            let mut others: Vec<usize> = row_index[r].clone();
            others.sort_unstable();
            others.dedup();
            let pivot_col = std::mem::take(&mut cols[c]);
            let mut updates = Vec::new();
            for &j in &others {
                if j == c || !col_alive[j] {
                    continue;
                }
                let Ok(k) = cols[j].binary_search_by_key(&r, |e| e.0) else {
                    continue;
                };
                let factor = cols[j][k].1 * pv;
                match axpy(&cols[j], &pivot_col, factor) {
                    Some(newcol) => updates.push((j, newcol)),
                    None => {
                        overflowed = true;
                        break;
                    }
                }
            }
            if overflowed {
                cols[c] = pivot_col;
                break;
            }
            for (j, newcol) in updates {
                for &(i, _) in &newcol {
                    if cols[j].binary_search_by_key(&i, |e| e.0).is_err() {
                        row_index[i].push(j);
                    }
                }
                cols[j] = newcol;
            }
            row_index[r].clear();
            col_alive[c] = false;
            row_alive[r] = false;
            pivots += 1;
            progress = true;
        }
    }

    let live_rows: Vec<usize> = (0..nrows).filter(|&i| row_alive[i]).collect();
    let mut row_pos = vec![usize::MAX; nrows];
    for (p, &i) in live_rows.iter().enumerate() {
        row_pos[i] = p;
    }
    let mut residue = Vec::new();
    for j in 0..ncols {
        if !col_alive[j] || cols[j].is_empty() {
            continue;
        }
        let mut col = vec![BigInt::zero(); live_rows.len()];
        for &(i, v) in &cols[j] {
            debug_assert!(row_alive[i]);
            col[row_pos[i]] = BigInt::from(v);
        }
        residue.push(col);
    }
    (pivots, transpose(residue, live_rows.len()))
}

/// `a - factor * b` on sorted sparse columns.
fn axpy(a: &[(usize, i64)], b: &[(usize, i64)], factor: i64) -> Option<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, b[j].1.checked_mul(factor)?.checked_neg()?));
            j += 1;
        } else {
            let v = a[i].1.checked_sub(b[j].1.checked_mul(factor)?)?;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Columns to rows.
fn transpose(cols: Vec<Vec<BigInt>>, nrows: usize) -> Vec<Vec<BigInt>> {
    let ncols = cols.len();
    let mut rows = vec![Vec::with_capacity(ncols); nrows];
    for c in cols {
        for (i, v) in c.into_iter().enumerate() {
            rows[i].push(v);
        }
    }
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    rows
}

/// Dense SNF diagonal (absolute values, divisibility chain) of a row-major
/// matrix.
pub fn dense_smith(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // pivot of least absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            // column t
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for j in t..ncols {
                        let s = &q * &a[t][j];
                        a[i][j] -= s;
                    }
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    dirty = true;
                }
            }
            // row t
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for row in a.iter_mut().skip(t) {
                        let s = &q * &row[t];
                        row[j] -= s;
                    }
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the trailing block
            let p = a[t][t].clone();
            let offender = (t + 1..nrows)
                .find(|&i| (t + 1..ncols).any(|j| !a[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    for j in t..ncols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Rank of a dense integer matrix by fraction-free elimination.
fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..nrows {
            for j in c + 1..ncols {
                let v = (&a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn sparse(d: &[&[i64]]) -> SparseMatrix {
        let nrows = d.len();
        let ncols = d.first().map_or(0, |r| r.len());
        let cols = (0..ncols)
            .map(|j| (0..nrows).filter(|&i| d[i][j] != 0).map(|i| (i, d[i][j])).collect())
            .collect();
        SparseMatrix::from_columns(nrows, cols)
    }

    #[test]
    fn known_snf() {
        let m = sparse(&[
            &[-6, 111, -36, 6],
            &[5, -672, 210, 74],
            &[0, -255, 81, 24],
            &[-7, 255, -81, -10],
        ]);
        let d = smith_diagonal(&m);
        assert_eq!(d.ones, 1);
        assert_eq!(d.torsion, big(&[3, 21]));
        assert_eq!(rank_over_rationals(&m), 3);
    }

    #[test]
    fn two_by_two_circle_boundary() {
        let m = sparse(&[&[-1, -1], &[1, 1]]);
        assert_eq!(smith_diagonal(&m), SmithDiagonal { ones: 1, torsion: vec![] });
    }

    #[test]
    fn pure_torsion() {
        let m = sparse(&[&[2, 0], &[0, 4]]);
        assert_eq!(smith_diagonal(&m).torsion, big(&[2, 4]));
        let m = sparse(&[&[2, 0], &[0, 3]]);
        let d = smith_diagonal(&m);
        assert_eq!((d.ones, d.torsion), (1, big(&[6])));
    }

    #[test]
    fn dense_matches_sparse_on_units() {
        let rows: &[&[i64]] = &[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]];
        let dense: Vec<Vec<BigInt>> = rows.iter().map(|r| big(r)).collect();
        let d = dense_smith(dense);
        assert_eq!(d, big(&[1, 1, 2]));
        let s = smith_diagonal(&sparse(rows));
        assert_eq!((s.ones, s.torsion), (2, big(&[2])));
    }

    #[test]
    fn empty_and_zero() {
        assert_eq!(smith_diagonal(&SparseMatrix::zeros(0, 0)).rank(), 0);
        assert_eq!(smith_diagonal(&SparseMatrix::zeros(3, 2)).rank(), 0);
    }
}
