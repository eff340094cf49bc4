//! Exact linear programming over ℚ: a two-phase tableau simplex method with
//! Bland's rule. All variables are nonnegative.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Q>,
    pub relation: Relation,
    pub rhs: Q,
}

impl Constraint {
    pub fn new(coeffs: Vec<Q>, relation: Relation, rhs: Q) -> Self {
        Constraint { coeffs, relation, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { point: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    /// Columns that may enter the basis.
    allowed: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Q {
        self.rows[i].last().unwrap()
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · z`; returns false if unbounded.
    fn optimize(&mut self, cost: &[Q]) -> bool {
        loop {
            let reduced = |j: usize| {
                let mut r = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() && !cost[b].is_zero() {
                        r -= &cost[b] * &self.rows[i][j];
                    }
                }
                r
            };
            let entering = (0..self.allowed).find(|&j| !self.basis.contains(&j) && reduced(j).is_positive());
            let Some(c) = entering else { return true };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn value(&self, j: usize) -> Q {
        self.basis.iter().position(|&b| b == j).map_or_else(Q::zero, |i| self.rhs(i).clone())
    }
}

/// Maximizes `objective · z` over `z ≥ 0` subject to the constraints.
pub fn maximize(num_vars: usize, objective: &[Q], constraints: &[Constraint]) -> LpOutcome {
    assert_eq!(objective.len(), num_vars);
    let m = constraints.len();
    // normalize to nonnegative right-hand sides
    let rows: Vec<(Vec<Q>, Relation, Q)> = constraints
        .iter()
        .map(|c| {
            assert_eq!(c.coeffs.len(), num_vars);
            if c.rhs.is_negative() {
                let flip = match c.relation {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|v| -v).collect(), flip, -&c.rhs)
            } else {
                (c.coeffs.clone(), c.relation, c.rhs.clone())
            }
        })
        .collect();
    let slacks = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let artificials = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let width = num_vars + slacks + artificials;
    let mut tab = Tableau { rows: Vec::with_capacity(m), basis: Vec::with_capacity(m), allowed: width };
    let (mut s, mut a) = (num_vars, num_vars + slacks);
    for (coeffs, rel, rhs) in rows {
        let mut row = vec![Q::zero(); width + 1];
        row[..num_vars].clone_from_slice(&coeffs);
        row[width] = rhs;
        match rel {
            Relation::Le => {
                row[s] = Q::one();
                tab.basis.push(s);
                s += 1;
            }
            Relation::Ge => {
                row[s] = -Q::one();
                row[a] = Q::one();
                tab.basis.push(a);
                s += 1;
                a += 1;
            }
            Relation::Eq => {
                row[a] = Q::one();
                tab.basis.push(a);
                a += 1;
            }
        }
        tab.rows.push(row);
    }
    let first_art = num_vars + slacks;
    if artificials > 0 {
        let mut cost = vec![Q::zero(); width];
        for c in cost.iter_mut().skip(first_art) {
            *c = -Q::one();
        }
        tab.optimize(&cost);
        let infeasibility: Q = (first_art..width).map(|j| tab.value(j)).sum();
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }
        // drive zero-valued artificials out of the basis; drop redundant rows
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= first_art {
                match (0..first_art).find(|&j| !tab.rows[i][j].is_zero()) {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        tab.allowed = first_art;
    }
    let mut cost = vec![Q::zero(); width];
    cost[..num_vars].clone_from_slice(objective);
    if !tab.optimize(&cost) {
        return LpOutcome::Unbounded;
    }
    let point: Vec<Q> = (0..num_vars).map(|j| tab.value(j)).collect();
    let value = point.iter().zip(objective).map(|(z, c)| z * c).sum();
    LpOutcome::Optimal { point, value }
}

/// Rank of a list of rational vectors.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot[c];
            for (v, pv) in row.iter_mut().zip(&pivot) {
                *v -= &f * pv;
            }
        }
        r += 1;
    }
    r
}
