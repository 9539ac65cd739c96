use std::fmt;

use super::{binomial, KrawtchoukTable};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum RowSense {
    Eq,
    Ge,
    Le,
}

/// Which constraint family a row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum RowKind {
    /// Σ_{i ≥ D_k} B_i^{(k)} = 2^{ℓ−k+1} − 1 (or Σ B_i = M − 1 in the basic system).
    PairCount { level: usize },
    /// Σ_{i ≥ D_{ℓ−r}} B_i ≥ 2^{r+1} − 1 in the basic system.
    Nested { r: usize },
    /// B_i^{(k)} − B_i^{(k+1)} ≥ 0.
    Monotone { level: usize, distance: usize },
    /// Σ_j B_j^{(k)} P_t(j) ≥ −C(ℓ, t).
    Delsarte { level: usize, degree: usize },
}

/// One linear row `Σ coeff·x  sense  rhs` with integer data.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LpRow {
    pub kind: RowKind,
    pub coeffs: Vec<(usize, i64)>,
    pub sense: RowSense,
    pub rhs: i64,
}

/// A variable B_i^{(k)}: averaged number of pairs at distance `distance`
/// inside the level-`level` sub-codes. All variables are non-negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Variable {
    pub level: usize,
    pub distance: usize,
}

/// A feasibility problem over non-negative variables.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct LpProblem {
    pub length: usize,
    pub sequence: Vec<u32>,
    pub variables: Vec<Variable>,
    pub rows: Vec<LpRow>,
}

impl LpProblem {
    /// A problem with no variables and no rows.
    pub fn empty(length: usize) -> LpProblem {
        LpProblem {
            length,
            sequence: Vec::new(),
            variables: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }
}

impl fmt::Display for LpProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# length {} sequence {:?}: {} variables, {} rows",
            self.length,
            self.sequence,
            self.variables.len(),
            self.rows.len()
        )?;
        for row in &self.rows {
            let terms: Vec<String> = row
                .coeffs
                .iter()
                .map(|&(j, c)| {
                    let v = self.variables[j];
                    format!("{c:+}*B{}_{}", v.level, v.distance)
                })
                .collect();
            let op = match row.sense {
                RowSense::Eq => "=",
                RowSense::Ge => ">=",
                RowSense::Le => "<=",
            };
            writeln!(f, "{} {op} {}", terms.join(" "), row.rhs)?;
        }
        Ok(())
    }
}

fn check_sequence(length: usize, d: &[u32]) -> Result<()> {
    if length == 0 || length > 16 {
        return Err(Error::LengthOutOfRange(length));
    }
    if d.len() != length {
        return Err(Error::InputLength {
            got: d.len(),
            expected: length,
        });
    }
    if let Some(&bad) = d.iter().find(|&&x| x == 0 || x as usize > length) {
        return Err(Error::OutOfRange(format!(
            "partial distance {bad} outside 1..={length}"
        )));
    }
    if d.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::OutOfRange(format!(
            "sequence {d:?} is not non-decreasing"
        )));
    }
    Ok(())
}

fn delsarte_rows(
    table: &KrawtchoukTable,
    level: usize,
    vars: &[(usize, usize)],
    rows: &mut Vec<LpRow>,
) {
    let l = table.length();
    // Degree 0 reads Σ B ≥ −1 and is implied by non-negativity.
    for t in 1..=l {
        let coeffs: Vec<(usize, i64)> = vars
            .iter()
            .map(|&(col, dist)| (col, table.get(t, dist)))
            .filter(|&(_, c)| c != 0)
            .collect();
        rows.push(LpRow {
            kind: RowKind::Delsarte { level, degree: t },
            coeffs,
            sense: RowSense::Ge,
            rhs: -binomial(l, t),
        });
    }
}

/// The single-distribution system for the level-k sub-codes: variables
/// B_1..B_ℓ of a code of size M = 2^{ℓ−k+1}, with the pair-count equality,
/// the nested pair-count inequalities for r = 0..=ℓ−k, and the Delsarte rows.
///
/// `d` lists D_1..D_ℓ; only D_k..D_ℓ are used.
pub fn build_basic_constraints(length: usize, d: &[u32], k: usize) -> Result<LpProblem> {
    check_sequence(length, d)?;
    if k == 0 || k > length {
        return Err(Error::OutOfRange(format!("level {k} outside 1..={length}")));
    }
    let l = length;
    let variables: Vec<Variable> = (1..=l)
        .map(|i| Variable {
            level: k,
            distance: i,
        })
        .collect();
    let mut rows = vec![LpRow {
        kind: RowKind::PairCount { level: k },
        coeffs: (0..l).map(|j| (j, 1)).collect(),
        sense: RowSense::Eq,
        rhs: (1i64 << (l - k + 1)) - 1,
    }];
    for r in 0..=(l - k) {
        let from = d[l - r - 1] as usize;
        rows.push(LpRow {
            kind: RowKind::Nested { r },
            coeffs: (from..=l).map(|i| (i - 1, 1)).collect(),
            sense: RowSense::Ge,
            rhs: (1i64 << (r + 1)) - 1,
        });
    }
    let table = KrawtchoukTable::new(l);
    let vars: Vec<(usize, usize)> = (1..=l).map(|i| (i - 1, i)).collect();
    delsarte_rows(&table, k, &vars, &mut rows);
    Ok(LpProblem {
        length: l,
        sequence: d.to_vec(),
        variables,
        rows,
    })
}

/// The averaged-distribution system over B̄_i^{(k)}, k = 1..ℓ, D_k ≤ i ≤ ℓ.
pub fn build_refined_constraints(length: usize, d: &[u32]) -> Result<LpProblem> {
    build_refined_suffix(length, d, 1)
}

/// The refined system restricted to levels `from..=ℓ`. Its rows are a subset
/// of the full system's rows, so infeasibility here rules out every
/// completion of D_from..D_ℓ.
pub fn build_refined_suffix(length: usize, d: &[u32], from: usize) -> Result<LpProblem> {
    check_sequence(length, d)?;
    if from == 0 || from > length {
        return Err(Error::OutOfRange(format!("level {from} outside 1..={length}")));
    }
    Ok(refined_suffix_unchecked(&KrawtchoukTable::new(length), d, from))
}

/// Builds the suffix system for levels `from..=ℓ` using `d[from-1..]`.
/// Entries of `d` before `from` are ignored.
pub(crate) fn refined_suffix_unchecked(table: &KrawtchoukTable, d: &[u32], from: usize) -> LpProblem {
    let l = table.length();
    let mut variables = Vec::new();
    // first column of each level, indexed by level
    let mut start = vec![0usize; l + 2];
    for k in from..=l {
        start[k] = variables.len();
        for i in d[k - 1] as usize..=l {
            variables.push(Variable {
                level: k,
                distance: i,
            });
        }
    }
    start[l + 1] = variables.len();
    let col = |k: usize, i: usize| start[k] + (i - d[k - 1] as usize);

    let mut rows = Vec::new();
    for k in from..=l {
        let lo = d[k - 1] as usize;
        rows.push(LpRow {
            kind: RowKind::PairCount { level: k },
            coeffs: (lo..=l).map(|i| (col(k, i), 1)).collect(),
            sense: RowSense::Eq,
            rhs: (1i64 << (l - k + 1)) - 1,
        });
    }
    for k in from..l {
        for i in d[k] as usize..=l {
            rows.push(LpRow {
                kind: RowKind::Monotone { level: k, distance: i },
                coeffs: vec![(col(k, i), 1), (col(k + 1, i), -1)],
                sense: RowSense::Ge,
                rhs: 0,
            });
        }
    }
    for k in from..=l {
        let vars: Vec<(usize, usize)> = (d[k - 1] as usize..=l).map(|i| (col(k, i), i)).collect();
        delsarte_rows(table, k, &vars, &mut rows);
    }
    LpProblem {
        length: l,
        sequence: d.to_vec(),
        variables,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_system_of_the_length_three_example() {
        let p = build_basic_constraints(3, &[1, 2, 3], 2).unwrap();
        assert_eq!(p.num_variables(), 3);
        assert_eq!(p.rows[0].rhs, 3);
        // nested rows: r=0 → B_3 ≥ 1, r=1 → B_2+B_3 ≥ 3
        assert_eq!(p.rows[1].coeffs, vec![(2, 1)]);
        assert_eq!(p.rows[1].rhs, 1);
        assert_eq!(p.rows[2].coeffs, vec![(1, 1), (2, 1)]);
        assert_eq!(p.rows[2].rhs, 3);
        // Delsarte degree 1: −B_2 − 3B_3 + B_1 ≥ −3
        let del1 = &p.rows[3];
        assert_eq!(del1.kind, RowKind::Delsarte { level: 2, degree: 1 });
        assert_eq!(del1.coeffs, vec![(0, 1), (1, -1), (2, -3)]);
        assert_eq!(del1.rhs, -3);
    }

    #[test]
    fn refined_system_shape() {
        let d = [1, 2, 2, 4];
        let p = build_refined_constraints(4, &d).unwrap();
        assert_eq!(p.num_variables(), 4 + 3 + 3 + 1);
        let eq: Vec<i64> = p.rows.iter().filter(|r| r.sense == RowSense::Eq).map(|r| r.rhs).collect();
        assert_eq!(eq, vec![15, 7, 3, 1]);
        let mono = p.rows.iter().filter(|r| matches!(r.kind, RowKind::Monotone { .. })).count();
        assert_eq!(mono, 3 + 3 + 1);
        let del = p.rows.iter().filter(|r| matches!(r.kind, RowKind::Delsarte { .. })).count();
        assert_eq!(del, 4 * 4);
        for row in &p.rows {
            if let RowKind::Monotone { level, distance } = row.kind {
                let (a, b) = (row.coeffs[0].0, row.coeffs[1].0);
                assert_eq!(p.variables[a], Variable { level, distance });
                assert_eq!(p.variables[b], Variable { level: level + 1, distance });
            }
        }
    }

    #[test]
    fn suffix_rows_are_a_subset() {
        let d = [1, 2, 2, 2, 3, 4];
        let full = build_refined_constraints(6, &d).unwrap();
        let suffix = build_refined_suffix(6, &d, 3).unwrap();
        let rename = |p: &LpProblem, r: &LpRow| {
            let mut c: Vec<(Variable, i64)> = r.coeffs.iter().map(|&(j, x)| (p.variables[j], x)).collect();
            c.sort_by_key(|(v, _)| (v.level, v.distance));
            (r.kind, c, r.sense, r.rhs)
        };
        let all: Vec<_> = full.rows.iter().map(|r| rename(&full, r)).collect();
        for r in &suffix.rows {
            assert!(all.contains(&rename(&suffix, r)));
        }
    }

    #[test]
    fn rejects_bad_sequences() {
        assert!(build_refined_constraints(3, &[2, 1, 3]).is_err());
        assert!(build_refined_constraints(3, &[1, 2]).is_err());
        assert!(build_refined_constraints(3, &[0, 2, 3]).is_err());
        assert!(build_basic_constraints(3, &[1, 2, 3], 4).is_err());
    }
}
