//! Dense phase-one simplex over a generic ordered field.
//!
//! Rows are normalized to a non-negative right-hand side. `≤` rows get a
//! slack column, `=` rows an artificial column, and `≥` rows with a positive
//! right-hand side a surplus plus an artificial column; the slack/artificial
//! columns form the starting identity basis. Minimizing the artificial sum
//! decides feasibility, and the final reduced costs of the identity columns
//! give the dual vector used as an infeasibility certificate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, Zero};

use super::problem::{LpProblem, RowSense};

pub(crate) trait Scalar: Clone + Num + Signed + PartialOrd + std::fmt::Debug {
    /// Exact arithmetic: no scaling, no tolerances, Bland tie-breaking.
    const EXACT: bool;
    fn from_int(v: i64) -> Self;
    /// Treat as zero (exact types: only zero itself).
    fn negligible(&self) -> bool;
    fn negative(&self) -> bool {
        !self.negligible() && self.is_negative()
    }
    /// A reduced cost worth pivoting on.
    fn improving(&self) -> bool {
        self.negative()
    }
}

const FLOAT_TOL: f64 = 1e-9;
/// Float pivots between rebuilds of the tableau from the original rows.
const REFACTOR_INTERVAL: usize = 400;

impl Scalar for f64 {
    const EXACT: bool = false;
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn negligible(&self) -> bool {
        self.abs() <= FLOAT_TOL
    }
    fn improving(&self) -> bool {
        *self < -1e-7
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn negligible(&self) -> bool {
        self.is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum PivotRule {
    /// Smallest-index entering and leaving choices; never cycles.
    Bland,
    /// Most negative reduced cost, falling back to Bland after a run of
    /// degenerate pivots.
    Dantzig,
}

/// Column bookkeeping shared by the solver and the certificate code.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub structural: usize,
    pub columns: usize,
    /// +1 or −1: the normalized row is `sign ×` the original row.
    pub row_sign: Vec<i64>,
    /// Column forming the identity for each row (slack or artificial).
    pub identity: Vec<usize>,
    /// Whether the identity column of a row is artificial.
    pub artificial: Vec<bool>,
    /// Surplus column for `≥` rows that needed an artificial.
    pub surplus: Vec<Option<usize>>,
}

impl Layout {
    pub fn new(p: &LpProblem) -> Layout {
        let m = p.rows.len();
        let mut next = p.variables.len();
        let mut layout = Layout {
            structural: next,
            columns: 0,
            row_sign: Vec::with_capacity(m),
            identity: Vec::with_capacity(m),
            artificial: Vec::with_capacity(m),
            surplus: Vec::with_capacity(m),
        };
        for row in &p.rows {
            let (sign, sense) = match (row.sense, row.rhs < 0) {
                (RowSense::Eq, neg) => (if neg { -1 } else { 1 }, RowSense::Eq),
                (RowSense::Le, false) => (1, RowSense::Le),
                (RowSense::Le, true) => (-1, RowSense::Ge),
                (RowSense::Ge, false) if row.rhs > 0 => (1, RowSense::Ge),
                (RowSense::Ge, _) => (-1, RowSense::Le),
            };
            layout.row_sign.push(sign);
            let surplus = if sense == RowSense::Ge {
                next += 1;
                Some(next - 1)
            } else {
                None
            };
            layout.surplus.push(surplus);
            layout.identity.push(next);
            layout.artificial.push(sense != RowSense::Le);
            next += 1;
        }
        layout.columns = next;
        layout
    }
}

pub(crate) struct PhaseOne<T> {
    /// Optimal artificial sum; zero exactly when the system is feasible.
    pub infeasibility: T,
    pub basis: Vec<usize>,
    /// Values of the structural variables at the final basis.
    pub x: Vec<T>,
    /// Dual multipliers for the original rows.
    pub y: Vec<T>,
    pub pivots: usize,
}

#[derive(Clone)]
struct Tableau<T> {
    rows: Vec<Vec<T>>,
    obj: Vec<T>,
    basis: Vec<usize>,
    width: usize,
}

impl<T: Scalar> Tableau<T> {
    fn rhs(&self, r: usize) -> &T {
        &self.rows[r][self.width]
    }

    /// Rebuild from the starting tableau for `basis`, pivoting each basic
    /// column on its largest remaining entry. `None` if the basis is singular
    /// or clearly infeasible in the rebuilt tableau.
    fn refactor(initial: &Tableau<T>, basis: &[usize]) -> Option<Tableau<T>> {
        let mut t = initial.clone();
        let mut assigned = vec![false; t.rows.len()];
        for &c in basis {
            let mut best: Option<usize> = None;
            for r in (0..t.rows.len()).filter(|&r| !assigned[r]) {
                if best.is_none_or(|b| t.rows[r][c].abs() > t.rows[b][c].abs()) {
                    best = Some(r);
                }
            }
            let r = best?;
            if t.rows[r][c].negligible() {
                return None;
            }
            t.pivot(r, c);
            assigned[r] = true;
        }
        for r in 0..t.rows.len() {
            if t.rhs(r).is_negative() {
                if !t.rhs(r).negligible() {
                    return None;
                }
                t.rows[r][t.width] = T::zero();
            }
        }
        Some(t)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() / p.clone();
            }
        }
        let pivot_row: Vec<(usize, T)> = self.rows[r]
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.clone()))
            .collect();
        let eliminate = |target: &mut Vec<T>| {
            let f = target[c].clone();
            if f.is_zero() {
                return;
            }
            for (j, v) in &pivot_row {
                let updated = target[*j].clone() - f.clone() * v.clone();
                target[*j] = if updated.negligible() { T::zero() } else { updated };
            }
            target[c] = T::zero();
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }
}

/// Minimum ratio, ties to the smallest basic column index (Bland).
fn exact_ratio_test<T: Scalar>(t: &Tableau<T>, c: usize, m: usize) -> Option<(usize, T)> {
    let mut leave: Option<(usize, T)> = None;
    for r in 0..m {
        let a = &t.rows[r][c];
        if !a.is_positive() {
            continue;
        }
        let ratio = t.rhs(r).clone() / a.clone();
        let better = match &leave {
            None => true,
            Some((lr, best)) => ratio < *best || (ratio == *best && t.basis[r] < t.basis[*lr]),
        };
        if better {
            leave = Some((r, ratio));
        }
    }
    leave
}

/// Two-pass ratio test: relax every bound by a small tolerance to find the
/// admissible step, then take the largest pivot among rows within it.
fn harris_ratio_test<T: Scalar>(t: &Tableau<T>, c: usize, m: usize, bland: bool) -> Option<(usize, T)> {
    let piv_tol = T::from_int(1) / T::from_int(1_000_000_000);
    let slack = piv_tol.clone();
    let mut theta: Option<T> = None;
    for r in 0..m {
        let a = &t.rows[r][c];
        if *a <= piv_tol {
            continue;
        }
        let rhs = if t.rhs(r).is_negative() { T::zero() } else { t.rhs(r).clone() };
        let bound = (rhs + slack.clone()) / a.clone();
        if theta.as_ref().is_none_or(|th| bound < *th) {
            theta = Some(bound);
        }
    }
    let theta = theta?;
    let mut leave: Option<(usize, T)> = None;
    for r in 0..m {
        let a = &t.rows[r][c];
        if *a <= piv_tol {
            continue;
        }
        let rhs = if t.rhs(r).is_negative() { T::zero() } else { t.rhs(r).clone() };
        let ratio = rhs / a.clone();
        if ratio > theta {
            continue;
        }
        let better = match &leave {
            None => true,
            Some((lr, _)) if bland => t.basis[r] < t.basis[*lr],
            Some((lr, _)) => *a > t.rows[*lr][c],
        };
        if better {
            leave = Some((r, ratio));
        }
    }
    leave
}

pub(crate) fn phase_one<T: Scalar>(
    p: &LpProblem,
    layout: &Layout,
    rule: PivotRule,
    max_pivots: usize,
) -> Option<PhaseOne<T>> {
    let m = p.rows.len();
    let width = layout.columns;
    let mut rows = Vec::with_capacity(m);
    // Inexact solves divide each row by its largest coefficient; the slack
    // or artificial of the row absorbs the scale, and the dual is mapped back
    // through `multiplier`.
    let mut multiplier = Vec::with_capacity(m);
    for (r, row) in p.rows.iter().enumerate() {
        let s = layout.row_sign[r];
        let scale = if T::EXACT {
            1
        } else {
            row.coeffs.iter().map(|&(_, c)| c.abs()).max().unwrap_or(1).max(1)
        };
        let scale = T::from_int(scale);
        let mut dense = vec![T::zero(); width + 1];
        for &(j, c) in &row.coeffs {
            dense[j] = dense[j].clone() + T::from_int(s * c) / scale.clone();
        }
        if let Some(sc) = layout.surplus[r] {
            dense[sc] = -T::one();
        }
        dense[layout.identity[r]] = T::one();
        dense[width] = T::from_int(s * row.rhs) / scale.clone();
        multiplier.push(T::from_int(s) / scale);
        rows.push(dense);
    }
    // Reduced costs of the phase-one objective Σ artificials.
    let mut obj = vec![T::zero(); width + 1];
    for r in 0..m {
        if layout.artificial[r] {
            obj[layout.identity[r]] = T::one();
        }
    }
    for r in 0..m {
        if layout.artificial[r] {
            for (j, v) in rows[r].iter().enumerate() {
                if !v.is_zero() {
                    obj[j] = obj[j].clone() - v.clone();
                }
            }
        }
    }
    let mut t = Tableau {
        rows,
        obj,
        basis: layout.identity.clone(),
        width,
    };

    let initial = (!T::EXACT).then(|| t.clone());
    let mut refreshed_at = 0usize;

    let mut pivots = 0usize;
    let mut degenerate_run = 0usize;
    let mut blocked = vec![false; width];
    loop {
        if let Some(initial) = &initial {
            if pivots >= refreshed_at + REFACTOR_INTERVAL {
                if let Some(fresh) = Tableau::refactor(initial, &t.basis) {
                    t = fresh;
                }
                refreshed_at = pivots;
            }
        }
        let use_bland = rule == PivotRule::Bland || degenerate_run > 50;
        let entering = if use_bland {
            (0..width).find(|&j| !blocked[j] && t.obj[j].improving())
        } else {
            let mut best: Option<(usize, T)> = None;
            for j in 0..width {
                if !blocked[j] && t.obj[j].improving() && best.as_ref().is_none_or(|(_, b)| t.obj[j] < *b) {
                    best = Some((j, t.obj[j].clone()));
                }
            }
            best.map(|(j, _)| j)
        };
        let Some(c) = entering else {
            // Accumulated rounding can stall a float run short of optimality;
            // rebuild once from the original rows before accepting it.
            if let Some(initial) = &initial {
                if refreshed_at != pivots && !(-t.obj[width].clone()).negligible() {
                    refreshed_at = pivots;
                    if let Some(fresh) = Tableau::refactor(initial, &t.basis) {
                        t = fresh;
                        blocked.iter_mut().for_each(|b| *b = false);
                        continue;
                    }
                }
            }
            break;
        };

        let leave = if T::EXACT {
            exact_ratio_test(&t, c, m)
        } else {
            harris_ratio_test(&t, c, m, use_bland)
        };
        // The phase-one objective is bounded below by zero, so a negative
        // reduced cost always has a blocking row; in floating point its
        // absence means the reduced cost is noise.
        let Some((r, ratio)) = leave else {
            blocked[c] = true;
            continue;
        };
        blocked.iter_mut().for_each(|b| *b = false);
        if ratio.negligible() {
            degenerate_run += 1;
        } else {
            degenerate_run = 0;
        }
        t.pivot(r, c);
        pivots += 1;
        if pivots > max_pivots {
            return None;
        }
    }

    let infeasibility = -t.obj[width].clone();
    let mut x = vec![T::zero(); layout.structural];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < layout.structural {
            x[b] = t.rhs(r).clone();
        }
    }
    let y = (0..m)
        .map(|r| {
            let cost = if layout.artificial[r] { T::one() } else { T::zero() };
            (cost - t.obj[layout.identity[r]].clone()) * multiplier[r].clone()
        })
        .collect();
    Some(PhaseOne {
        infeasibility,
        basis: t.basis,
        x,
        y,
        pivots,
    })
}
