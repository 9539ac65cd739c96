//! Chain and binary code decompositions, partial distances and exponents.

mod binary;
mod chain;
mod format;

use std::fmt;

use crate::error::{Error, Result};

pub use binary::{partial_distance_direct, BinaryDecomposition};
pub use chain::{ChainDecomposition, ChainLevel};

/// D_1..D_ℓ of a binary decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct PartialDistanceSequence {
    values: Vec<u32>,
}

impl PartialDistanceSequence {
    pub fn new(values: Vec<u32>) -> Result<PartialDistanceSequence> {
        if values.is_empty() || values.len() > 16 {
            return Err(Error::LengthOutOfRange(values.len()));
        }
        if values.iter().any(|&d| d == 0 || d as usize > values.len()) {
            return Err(Error::OutOfRange(format!(
                "partial distances {values:?} must lie in 1..={}",
                values.len()
            )));
        }
        Ok(PartialDistanceSequence { values })
    }

    pub fn length(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// D_i, 1-based.
    pub fn get(&self, i: usize) -> u32 {
        self.values[i - 1]
    }

    pub fn exponent(&self) -> f64 {
        exponent_of(&self.values)
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1])
    }
}

impl fmt::Display for PartialDistanceSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// (1/ℓ) Σ log_ℓ D_i with ℓ = `d.len()`. Zero for ℓ = 1.
pub fn exponent_of(d: &[u32]) -> f64 {
    let l = d.len();
    if l < 2 {
        return 0.0;
    }
    let sum: f64 = d.iter().map(|&x| (x as f64).ln()).sum();
    sum / (l as f64 * (l as f64).ln())
}

/// Chain parameters (k_j, d_j), j = 1..m, with k strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ChainParameters {
    pub length: usize,
    pub levels: Vec<(usize, u32)>,
}

impl ChainParameters {
    pub fn new(length: usize, levels: Vec<(usize, u32)>) -> Result<ChainParameters> {
        if length == 0 || length > 16 {
            return Err(Error::LengthOutOfRange(length));
        }
        if levels.is_empty() || levels[0].0 > length {
            return Err(Error::InvalidDecomposition(format!(
                "chain must start at dimension ≤ {length}"
            )));
        }
        if levels.windows(2).any(|w| w[0].0 <= w[1].0) || levels.last().unwrap().0 == 0 {
            return Err(Error::InvalidDecomposition(
                "dimensions must be strictly decreasing and positive".into(),
            ));
        }
        if levels.iter().any(|&(_, d)| d == 0) {
            return Err(Error::InvalidDecomposition("distances must be positive".into()));
        }
        Ok(ChainParameters { length, levels })
    }

    /// D_i ≥ d_j whenever k_{j+1} < ℓ−i+1 ≤ k_j (with k_{m+1} = 0); positions
    /// above k_1 get 1.
    pub fn lower_bound_sequence(&self) -> Vec<u32> {
        let l = self.length;
        (1..=l)
            .map(|i| {
                let rank = l - i + 1;
                self.levels
                    .iter()
                    .enumerate()
                    .filter(|&(j, &(k, _))| {
                        let next = self.levels.get(j + 1).map_or(0, |x| x.0);
                        next < rank && rank <= k
                    })
                    .map(|(_, &(_, d))| d)
                    .next()
                    .unwrap_or(1)
            })
            .collect()
    }

    /// (1/ℓ) Σ_j (k_j − k_{j+1}) log_ℓ d_j.
    pub fn exponent_lower_bound(&self) -> f64 {
        let l = self.length;
        if l < 2 {
            return 0.0;
        }
        let sum: f64 = self
            .levels
            .iter()
            .enumerate()
            .map(|(j, &(k, d))| {
                let next = self.levels.get(j + 1).map_or(0, |x| x.0);
                (k - next) as f64 * (d as f64).ln()
            })
            .sum();
        sum / (l as f64 * (l as f64).ln())
    }
}

impl fmt::Display for ChainParameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.levels.iter().map(|(k, d)| format!("({k},{d})")).collect();
        f.write_str(&parts.join("-"))
    }
}

/// Parameters of the four length-14..16 chains built in [`crate::kernel`].
pub fn known_chains() -> Vec<ChainParameters> {
    let table: [(usize, &[(usize, u32)]); 4] = [
        (16, &[(16, 1), (15, 2), (11, 4), (8, 6), (5, 8), (1, 16)]),
        (16, &[(16, 1), (15, 2), (11, 4), (7, 6), (5, 8), (1, 16)]),
        (15, &[(15, 1), (14, 2), (10, 4), (7, 6), (4, 8)]),
        (14, &[(14, 1), (13, 2), (9, 4), (6, 6), (3, 8)]),
    ];
    table
        .iter()
        .map(|(l, lv)| ChainParameters::new(*l, lv.to_vec()).expect("static chain"))
        .collect()
}

/// Lower-bound sequences of the known chains of this length.
pub fn known_chain_sequences(length: usize) -> Vec<Vec<u32>> {
    known_chains()
        .into_iter()
        .filter(|c| c.length == length)
        .map(|c| c.lower_bound_sequence())
        .collect()
}
