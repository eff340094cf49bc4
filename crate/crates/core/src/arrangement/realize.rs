//! Exact realizability of level-1 sign vectors.
//!
//! The system `ℓ_i(x) = 0` (`σ_i = 0`), `σ_i·ℓ_i(x) > 0` (`σ_i ≠ 0`) is
//! decided by maximizing a common slack `t ∈ [0, 1]` in
//! `σ_i·ℓ_i(x) ≥ t`. When it is infeasible, a Motzkin alternative is
//! produced: multipliers `λ` with `Σ λ_i a_i = 0`, `σ_i λ_i ≥ 0` on the
//! strict rows, and either `Σ λ_i b_i < 0`, or `Σ λ_i b_i = 0` with some
//! strict multiplier nonzero.

use num_traits::{One, Signed, Zero};

use super::lp::{maximize, Constraint, LpOutcome, Relation, Q};
use super::Hyperplane;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realization {
    Point(Vec<Q>),
    Empty(Certificate),
}

/// Multipliers proving a sign vector is not realized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub multipliers: Vec<Q>,
}

impl Certificate {
    pub fn verify(&self, n: usize, forms: &[Hyperplane], signs: &[i8]) -> bool {
        if self.multipliers.len() != forms.len() || signs.len() != forms.len() {
            return false;
        }
        let mut normal = vec![Q::zero(); n];
        let mut constant = Q::zero();
        let mut strict_used = false;
        for ((h, &s), w) in forms.iter().zip(signs).zip(&self.multipliers) {
            if s != 0 {
                if (w * Q::from_integer(s.into())).is_negative() {
                    return false;
                }
                strict_used |= !w.is_zero();
            }
            for (acc, a) in normal.iter_mut().zip(&h.a) {
                *acc += w * a;
            }
            constant += w * &h.b;
        }
        normal.iter().all(Zero::is_zero) && (constant.is_negative() || (constant.is_zero() && strict_used))
    }
}

fn q(s: i8) -> Q {
    Q::from_integer(s.into())
}

/// A point with the given signs on `forms`, if one exists.
pub(crate) fn witness(n: usize, forms: &[Hyperplane], signs: &[i8]) -> Option<Vec<Q>> {
    // variables: x⁺ (n), x⁻ (n), t
    let vars = 2 * n + 1;
    let mut rows = Vec::with_capacity(forms.len() + 1);
    for (h, &s) in forms.iter().zip(signs) {
        let mut c = vec![Q::zero(); vars];
        let sign = if s == 0 { Q::one() } else { q(s) };
        for j in 0..n {
            c[j] = &sign * &h.a[j];
            c[n + j] = -&c[j];
        }
        let rhs = -(&sign * &h.b);
        if s == 0 {
            rows.push(Constraint::new(c, Relation::Eq, rhs));
        } else {
            c[2 * n] = -Q::one();
            rows.push(Constraint::new(c, Relation::Ge, rhs));
        }
    }
    let mut bound = vec![Q::zero(); vars];
    bound[2 * n] = Q::one();
    rows.push(Constraint::new(bound.clone(), Relation::Le, Q::one()));
    match maximize(vars, &bound, &rows) {
        LpOutcome::Optimal { point, value } if value.is_positive() => {
            Some((0..n).map(|j| &point[j] - &point[n + j]).collect())
        }
        _ => None,
    }
}

/// Searches for a certificate with the strict multipliers normalized to sum
/// to one, and otherwise for one proving the equalities inconsistent.
fn certificate(n: usize, forms: &[Hyperplane], signs: &[i8]) -> Option<Certificate> {
    let k = forms.len();
    // variables: w⁺ (k), w⁻ (k); λ = w⁺ − w⁻, with w⁻ pinned to 0 on strict
    // rows of sign + and w⁺ pinned to 0 on strict rows of sign −
    let vars = 2 * k;
    let lambda_row = |coef: &dyn Fn(&Hyperplane) -> Q| {
        let mut c = vec![Q::zero(); vars];
        for (i, h) in forms.iter().enumerate() {
            c[i] = coef(h);
            c[k + i] = -coef(h);
        }
        c
    };
    let pins = || {
        let mut rows = Vec::new();
        for (i, &s) in signs.iter().enumerate() {
            let pinned = match s {
                1 => Some(k + i),
                -1 => Some(i),
                _ => None,
            };
            if let Some(p) = pinned {
                let mut c = vec![Q::zero(); vars];
                c[p] = Q::one();
                rows.push(Constraint::new(c, Relation::Eq, Q::zero()));
            }
        }
        rows
    };
    let normal_rows = |rows: &mut Vec<Constraint>| {
        for j in 0..n {
            rows.push(Constraint::new(lambda_row(&|h| h.a[j].clone()), Relation::Eq, Q::zero()));
        }
    };
    let zero = vec![Q::zero(); vars];
    let extract = |point: Vec<Q>| Certificate { multipliers: (0..k).map(|i| &point[i] - &point[k + i]).collect() };

    if signs.iter().any(|&s| s != 0) {
        let mut rows = pins();
        normal_rows(&mut rows);
        rows.push(Constraint::new(lambda_row(&|h| h.b.clone()), Relation::Le, Q::zero()));
        let mut total = vec![Q::zero(); vars];
        for (i, &s) in signs.iter().enumerate() {
            if s != 0 {
                total[i] = Q::one();
                total[k + i] = Q::one();
            }
        }
        rows.push(Constraint::new(total, Relation::Eq, Q::one()));
        if let LpOutcome::Optimal { point, .. } = maximize(vars, &zero, &rows) {
            return Some(extract(point));
        }
    }
    let mut rows = pins();
    for (i, &s) in signs.iter().enumerate() {
        if s != 0 {
            let mut c = vec![Q::zero(); vars];
            c[i] = Q::one();
            c[k + i] = Q::one();
            rows.push(Constraint::new(c, Relation::Eq, Q::zero()));
        }
    }
    normal_rows(&mut rows);
    rows.push(Constraint::new(lambda_row(&|h| h.b.clone()), Relation::Eq, -Q::one()));
    match maximize(vars, &zero, &rows) {
        LpOutcome::Optimal { point, .. } => Some(extract(point)),
        _ => None,
    }
}

pub(crate) fn realize(n: usize, forms: &[Hyperplane], signs: &[i8]) -> Realization {
    match witness(n, forms, signs) {
        Some(p) => Realization::Point(p),
        None => Realization::Empty(
            certificate(n, forms, signs).expect("an infeasible system has a Motzkin certificate"),
        ),
    }
}
