//! Exact feasibility verdicts.
//!
//! Every verdict is backed by an object checked in rational arithmetic: a
//! non-negative witness satisfying every row, or a Farkas dual vector y with
//! the sign pattern of the row senses, yᵀA ≤ 0 componentwise and yᵀb > 0.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;

use super::problem::{LpProblem, RowSense};
use super::simplex::{phase_one, Layout, PivotRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Verdict {
    Feasible,
    Infeasible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpMethod {
    /// Floating-point phase one picks a basis; the verdict is then certified
    /// exactly, falling back to [`LpMethod::Exact`] if certification fails.
    Guided,
    /// Rational phase-one simplex with Bland's rule throughout.
    Exact,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpCertificate {
    pub verdict: Verdict,
    /// Non-negative variable values satisfying every row (feasible case).
    pub witness: Option<Vec<BigRational>>,
    /// One multiplier per row proving emptiness (infeasible case).
    pub farkas: Option<Vec<BigRational>>,
    /// Simplex pivots spent, over all attempts.
    pub pivots: usize,
    /// True when the rational simplex had to run.
    pub exact_simplex: bool,
}

impl LpCertificate {
    pub fn is_feasible(&self) -> bool {
        self.verdict == Verdict::Feasible
    }

    /// Re-checks the attached witness or dual against `p` in exact arithmetic.
    pub fn verify(&self, p: &LpProblem) -> bool {
        match self.verdict {
            Verdict::Feasible => self.witness.as_ref().is_some_and(|x| verify_witness(p, x)),
            Verdict::Infeasible => self.farkas.as_ref().is_some_and(|y| verify_farkas(p, y)),
        }
    }
}

impl serde::Serialize for LpCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let text = |v: &Option<Vec<BigRational>>| {
            v.as_ref().map(|xs| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>())
        };
        let mut st = s.serialize_struct("LpCertificate", 4)?;
        st.serialize_field("verdict", &self.verdict)?;
        st.serialize_field("witness", &text(&self.witness))?;
        st.serialize_field("farkas", &text(&self.farkas))?;
        st.serialize_field("pivots", &self.pivots)?;
        st.end()
    }
}

pub fn lp_feasible(p: &LpProblem) -> LpCertificate {
    lp_feasible_with(p, LpMethod::Guided)
}

pub fn lp_feasible_with(p: &LpProblem, method: LpMethod) -> LpCertificate {
    let layout = Layout::new(p);
    let mut spent = 0;
    if method == LpMethod::Guided {
        if let Some(cert) = guided(p, &layout, &mut spent) {
            return cert;
        }
    }
    let mut cert = exact_simplex(p, &layout);
    cert.pivots += spent;
    cert
}

/// Cheap screen used inside the search: a Farkas vector only when
/// infeasibility is certified exactly. `None` means the float solver found
/// the system feasible (or could not certify otherwise), so the node is kept.
pub(crate) fn certified_infeasible(p: &LpProblem, pivots: &mut usize) -> Option<Vec<BigRational>> {
    let layout = Layout::new(p);
    let Some(run) = phase_one::<f64>(p, &layout, PivotRule::Dantzig, pivot_cap(p)) else {
        return lp_feasible(p).farkas;
    };
    *pivots += run.pivots;
    if run.infeasibility <= INFEASIBLE_GAP {
        return None;
    }
    repair_farkas(p, &run.y).or_else(|| lp_feasible(p).farkas)
}

/// Float phase-one objective above which the system is treated as empty.
const INFEASIBLE_GAP: f64 = 1e-7;

fn pivot_cap(p: &LpProblem) -> usize {
    200 * (p.rows.len() + p.variables.len()) + 1000
}

fn guided(p: &LpProblem, layout: &Layout, spent: &mut usize) -> Option<LpCertificate> {
    let run = phase_one::<f64>(p, layout, PivotRule::Dantzig, pivot_cap(p))?;
    *spent += run.pivots;
    let done = |verdict, witness, farkas| LpCertificate {
        verdict,
        witness,
        farkas,
        pivots: run.pivots,
        exact_simplex: false,
    };
    if run.infeasibility > INFEASIBLE_GAP {
        return repair_farkas(p, &run.y).map(|y| done(Verdict::Infeasible, None, Some(y)));
    }
    if let Some(x) = witness_from_basis(p, layout, &run.basis) {
        return Some(done(Verdict::Feasible, Some(x), None));
    }
    None
}

fn exact_simplex(p: &LpProblem, layout: &Layout) -> LpCertificate {
    let run = phase_one::<BigRational>(p, layout, PivotRule::Bland, usize::MAX)
        .expect("Bland's rule terminates and phase one is bounded");
    let (verdict, witness, farkas) = if run.infeasibility.is_zero() {
        (Verdict::Feasible, Some(run.x), None)
    } else {
        (Verdict::Infeasible, None, Some(run.y))
    };
    let cert = LpCertificate {
        verdict,
        witness,
        farkas,
        pivots: run.pivots,
        exact_simplex: true,
    };
    debug_assert!(cert.verify(p), "rational simplex produced an invalid certificate");
    cert
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub(crate) fn verify_witness(p: &LpProblem, x: &[BigRational]) -> bool {
    if x.len() != p.variables.len() || x.iter().any(|v| v.is_negative()) {
        return false;
    }
    p.rows.iter().all(|row| {
        let lhs: BigRational = row.coeffs.iter().map(|&(j, c)| &x[j] * int(c)).sum();
        let rhs = int(row.rhs);
        match row.sense {
            RowSense::Eq => lhs == rhs,
            RowSense::Ge => lhs >= rhs,
            RowSense::Le => lhs <= rhs,
        }
    })
}

fn farkas_parts(p: &LpProblem, y: &[BigRational]) -> (Vec<BigRational>, BigRational) {
    let mut reduced = vec![BigRational::zero(); p.variables.len()];
    let mut value = BigRational::zero();
    for (row, yr) in p.rows.iter().zip(y) {
        if yr.is_zero() {
            continue;
        }
        for &(j, c) in &row.coeffs {
            reduced[j] += yr * int(c);
        }
        value += yr * int(row.rhs);
    }
    (reduced, value)
}

fn signs_ok(p: &LpProblem, y: &[BigRational]) -> bool {
    p.rows.iter().zip(y).all(|(row, yr)| match row.sense {
        RowSense::Eq => true,
        RowSense::Ge => !yr.is_negative(),
        RowSense::Le => !yr.is_positive(),
    })
}

pub(crate) fn verify_farkas(p: &LpProblem, y: &[BigRational]) -> bool {
    if y.len() != p.rows.len() || !signs_ok(p, y) {
        return false;
    }
    let (reduced, value) = farkas_parts(p, y);
    reduced.iter().all(|r| !r.is_positive()) && value.is_positive()
}

/// Rounds a floating-point dual to rationals and pushes the free
/// multipliers of all-non-negative equality rows down until yᵀA ≤ 0 holds.
fn repair_farkas(p: &LpProblem, y_float: &[f64]) -> Option<Vec<BigRational>> {
    let scale = y_float.iter().fold(0f64, |a, v| a.max(v.abs()));
    if !(scale.is_finite() && scale > 0.0) {
        return None;
    }
    const DENOM: i64 = 1 << 32;
    let mut y: Vec<BigRational> = p
        .rows
        .iter()
        .zip(y_float)
        .map(|(row, &v)| {
            let q = (v / scale * DENOM as f64).round() as i64;
            let q = match row.sense {
                RowSense::Ge => q.max(0),
                RowSense::Le => q.min(0),
                RowSense::Eq => q,
            };
            BigRational::new(BigInt::from(q), BigInt::from(DENOM))
        })
        .collect();
    let (reduced, _) = farkas_parts(p, &y);
    let mut shift: Vec<BigRational> = vec![BigRational::zero(); p.rows.len()];
    for (j, r) in reduced.iter().enumerate() {
        if !r.is_positive() {
            continue;
        }
        // An equality row with non-negative coefficients containing x_j.
        let (e, c) = p.rows.iter().enumerate().find_map(|(e, row)| {
            if row.sense != RowSense::Eq || row.coeffs.iter().any(|&(_, c)| c < 0) {
                return None;
            }
            row.coeffs.iter().find(|&&(k, c)| k == j && c > 0).map(|&(_, c)| (e, c))
        })?;
        let need = r / int(c);
        if need > shift[e] {
            shift[e] = need;
        }
    }
    for (yr, s) in y.iter_mut().zip(shift) {
        *yr -= s;
    }
    verify_farkas(p, &y).then_some(y)
}

/// Solves the square system given by the structural and surplus columns of
/// a basis over the rows whose own slack or artificial is non-basic, then
/// checks the resulting point against the original rows.
fn witness_from_basis(p: &LpProblem, layout: &Layout, basis: &[usize]) -> Option<Vec<BigRational>> {
    let n = layout.structural;
    let identity_basic: Vec<bool> = {
        let mut flags = vec![false; p.rows.len()];
        for &b in basis {
            if let Some(r) = layout.identity.iter().position(|&c| c == b) {
                flags[r] = true;
            }
        }
        flags
    };
    let unknowns: Vec<usize> = basis
        .iter()
        .copied()
        .filter(|&b| !layout.identity.contains(&b))
        .collect();
    let eq_rows: Vec<usize> = (0..p.rows.len()).filter(|&r| !identity_basic[r]).collect();
    if unknowns.len() != eq_rows.len() {
        return None;
    }
    let s = unknowns.len();
    let col_of = |c: usize| unknowns.iter().position(|&u| u == c);
    let mut mat: Vec<Vec<BigRational>> = Vec::with_capacity(s);
    for &r in &eq_rows {
        let mut dense = vec![BigRational::zero(); s + 1];
        let sign = layout.row_sign[r];
        for &(j, c) in &p.rows[r].coeffs {
            if let Some(k) = col_of(j) {
                dense[k] += int(sign * c);
            }
        }
        if let Some(sc) = layout.surplus[r] {
            if let Some(k) = col_of(sc) {
                dense[k] = -BigRational::one();
            }
        }
        dense[s] = int(sign * p.rows[r].rhs);
        mat.push(dense);
    }
    let values = solve_square(mat)?;
    let mut x = vec![BigRational::zero(); n];
    for (k, &c) in unknowns.iter().enumerate() {
        if c < n {
            x[c] = values[k].clone();
        }
    }
    verify_witness(p, &x).then_some(x)
}

/// Gaussian elimination on an augmented square system; `None` if singular.
/// Pivots on the sparsest available row to limit fill-in.
fn solve_square(mut m: Vec<Vec<BigRational>>) -> Option<Vec<BigRational>> {
    let s = m.len();
    let mut order = Vec::with_capacity(s);
    let mut used = vec![false; s];
    for col in 0..s {
        let pr = (0..s)
            .filter(|&r| !used[r] && !m[r][col].is_zero())
            .min_by_key(|&r| m[r].iter().filter(|v| !v.is_zero()).count())?;
        used[pr] = true;
        order.push(pr);
        let inv = m[pr][col].recip();
        for v in m[pr].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_nz: Vec<(usize, BigRational)> = m[pr]
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.clone()))
            .collect();
        for r in 0..s {
            if r == pr || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for (j, v) in &pivot_nz {
                let t = &f * v;
                m[r][*j] -= t;
            }
        }
    }
    let mut out = vec![BigRational::zero(); s];
    for (col, &r) in order.iter().enumerate() {
        out[col] = m[r][s].clone();
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpbound::problem::{build_basic_constraints, build_refined_constraints, LpRow, RowKind};

    #[test]
    fn length_three_example_is_infeasible() {
        let p = build_basic_constraints(3, &[1, 2, 3], 2).unwrap();
        for method in [LpMethod::Guided, LpMethod::Exact] {
            let c = lp_feasible_with(&p, method);
            assert_eq!(c.verdict, Verdict::Infeasible);
            assert!(c.verify(&p));
        }
    }

    #[test]
    fn length_four_example_is_infeasible() {
        let p = build_basic_constraints(4, &[1, 2, 3, 3], 3).unwrap();
        for method in [LpMethod::Guided, LpMethod::Exact] {
            let c = lp_feasible_with(&p, method);
            assert_eq!(c.verdict, Verdict::Infeasible);
            assert!(c.verify(&p));
        }
    }

    #[test]
    fn empty_problem_is_feasible() {
        let p = LpProblem::empty(3);
        let c = lp_feasible(&p);
        assert!(c.is_feasible());
        assert_eq!(c.witness.as_deref(), Some(&[][..]));
        let c = lp_feasible_with(&p, LpMethod::Exact);
        assert!(c.is_feasible() && c.verify(&p));
    }

    #[test]
    fn all_ones_sequence_is_feasible() {
        for l in 1..=8 {
            let d = vec![1u32; l];
            let p = build_refined_constraints(l, &d).unwrap();
            let c = lp_feasible(&p);
            assert!(c.is_feasible() && c.verify(&p), "ℓ={l}");
            for k in 1..=l {
                let b = build_basic_constraints(l, &d, k).unwrap();
                assert!(lp_feasible(&b).is_feasible());
            }
        }
    }

    #[test]
    fn contradictory_rows() {
        let mut p = LpProblem::empty(1);
        p.variables.push(crate::lpbound::Variable { level: 1, distance: 1 });
        p.rows.push(LpRow {
            kind: RowKind::PairCount { level: 1 },
            coeffs: vec![(0, 1)],
            sense: RowSense::Le,
            rhs: -1,
        });
        for method in [LpMethod::Guided, LpMethod::Exact] {
            let c = lp_feasible_with(&p, method);
            assert_eq!(c.verdict, Verdict::Infeasible);
            assert!(c.verify(&p));
        }
    }

    #[test]
    fn tampered_certificates_fail_verification() {
        let p = build_basic_constraints(3, &[1, 2, 3], 2).unwrap();
        let mut c = lp_feasible(&p);
        let y = c.farkas.as_mut().unwrap();
        for v in y.iter_mut() {
            *v = -v.clone();
        }
        assert!(!c.verify(&p));
        let q = build_refined_constraints(3, &[1, 2, 2]).unwrap();
        let mut f = lp_feasible(&q);
        assert!(f.verify(&q));
        f.witness.as_mut().unwrap()[0] += BigRational::one();
        assert!(!f.verify(&q));
    }
}
