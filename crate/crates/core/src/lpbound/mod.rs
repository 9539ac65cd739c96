//! Upper bounds on the best exponent at a fixed kernel dimension: Krawtchouk
//! polynomials, the Delsarte-type constraint systems on distance
//! distributions, an exactly certified feasibility solver, and a
//! branch-and-bound search for the best sequence that survives it.

mod certify;
mod problem;
mod search;
mod simplex;

pub use certify::{lp_feasible, lp_feasible_with, LpCertificate, LpMethod, Verdict};
pub use problem::{
    build_basic_constraints, build_refined_constraints, build_refined_suffix, LpProblem, LpRow,
    RowKind, RowSense, Variable,
};
pub use search::{
    optimal_lp_sequence, optimal_lp_sequence_with, simple_upper_bound, LpSearchResult,
    PrunedBranch, SearchOptions, SearchStats,
};

/// Binomial coefficient C(n, k) as an integer; zero when k > n.
pub fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i64 / (i + 1) as i64;
    }
    acc
}

/// P_k(x) = Σ_m (−1)^m C(x, m) C(ℓ−x, k−m), the binary Krawtchouk polynomial
/// of degree k for length ℓ.
pub fn krawtchouk(length: usize, k: usize, x: usize) -> i64 {
    assert!(k <= length && x <= length, "krawtchouk arguments out of range");
    (0..=k)
        .map(|m| {
            let term = binomial(x, m) * binomial(length - x, k - m);
            if m % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

/// All values P_k(j) for 0 ≤ k, j ≤ ℓ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrawtchoukTable {
    length: usize,
    values: Vec<i64>,
}

impl KrawtchoukTable {
    pub fn new(length: usize) -> KrawtchoukTable {
        let n = length + 1;
        let mut values = Vec::with_capacity(n * n);
        for k in 0..n {
            for j in 0..n {
                values.push(krawtchouk(length, k, j));
            }
        }
        KrawtchoukTable { length, values }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// P_k(j).
    pub fn get(&self, k: usize, j: usize) -> i64 {
        self.values[k * (self.length + 1) + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values_from_the_worked_examples() {
        assert_eq!(krawtchouk(3, 1, 2), -1);
        assert_eq!(krawtchouk(3, 1, 3), -3);
        assert_eq!(krawtchouk(3, 3, 2), 1);
        assert_eq!(krawtchouk(3, 3, 3), -1);
        assert_eq!(krawtchouk(4, 1, 3), -2);
        assert_eq!(krawtchouk(4, 1, 4), -4);
        for x in 0..=7 {
            assert_eq!(krawtchouk(7, 0, x), 1);
        }
    }

    #[test]
    fn table_edges() {
        for l in 1..=16 {
            let t = KrawtchoukTable::new(l);
            for k in 0..=l {
                assert_eq!(t.get(k, 0), binomial(l, k));
                assert_eq!(t.get(0, k), 1);
                // P_k(ℓ) = (−1)^k C(ℓ,k)
                let sign = if k % 2 == 0 { 1 } else { -1 };
                assert_eq!(t.get(k, l), sign * binomial(l, k));
            }
        }
    }

    #[test]
    fn orthogonality() {
        for l in 1..=8 {
            let t = KrawtchoukTable::new(l);
            for k in 0..=l {
                for m in 0..=l {
                    let s: i64 = (0..=l).map(|j| binomial(l, j) * t.get(k, j) * t.get(m, j)).sum();
                    let want = if k == m { (1i64 << l) * binomial(l, k) } else { 0 };
                    assert_eq!(s, want, "ℓ={l} k={k} m={m}");
                }
            }
        }
    }

    #[test]
    fn generating_function_oracle() {
        // (1+z)^(ℓ−x) (1−z)^x = Σ_k P_k(x) z^k, expanded by polynomial multiplication.
        for l in 1..=16usize {
            for x in 0..=l {
                let mut poly = vec![1i64];
                for step in 0..l {
                    let s = if step < l - x { 1 } else { -1 };
                    let mut next = vec![0i64; poly.len() + 1];
                    for (i, &c) in poly.iter().enumerate() {
                        next[i] += c;
                        next[i + 1] += s * c;
                    }
                    poly = next;
                }
                for k in 0..=l {
                    assert_eq!(krawtchouk(l, k, x), poly[k]);
                }
            }
        }
    }
}
