use std::time::Instant;

use num_rational::BigRational;

use super::certify::{certified_infeasible, lp_feasible, LpCertificate};
use super::problem::{build_refined_constraints, refined_suffix_unchecked};
use super::KrawtchoukTable;
use crate::codes::BestDistanceTable;
use crate::decomposition::{self, PartialDistanceSequence};
use crate::error::{Error, Result};

/// (1/ℓ) Σ_i log_ℓ d(ℓ, ℓ−i+1): the bound that only uses the best minimum
/// distance of each sub-code size.
pub fn simple_upper_bound(length: usize) -> Result<f64> {
    if length < 2 {
        return Err(Error::OutOfRange(format!("dimension {length} must be at least 2")));
    }
    let caps = BestDistanceTable::standard().position_caps(length)?;
    Ok(decomposition::exponent_of(&caps))
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Starting incumbent. It is verified exactly before use and ignored if
    /// it is not LP-valid.
    pub incumbent: Option<Vec<u32>>,
    /// Seed the incumbent from the chain decompositions shipped with the
    /// crate when one exists for this dimension.
    pub seed_from_known_chains: bool,
    /// Keep the Farkas certificate of every pruned partial assignment.
    pub record_pruned: bool,
}

impl SearchOptions {
    pub fn standard() -> SearchOptions {
        SearchOptions {
            incumbent: None,
            seed_from_known_chains: true,
            record_pruned: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct SearchStats {
    /// Partial assignments examined.
    pub nodes: u64,
    /// Relaxations solved.
    pub lp_calls: u64,
    /// Partial assignments discarded with an exact infeasibility certificate.
    pub pruned_infeasible: u64,
    /// Complete sequences given an exact feasibility certificate.
    pub exact_checks: u64,
    pub pivots: u64,
    pub millis: u64,
}

#[derive(Clone, Debug)]
pub struct LpSearchResult {
    pub sequence: PartialDistanceSequence,
    pub exponent: f64,
    /// Feasibility certificate of the optimal sequence's full system.
    pub certificate: LpCertificate,
    pub stats: SearchStats,
    /// Empty unless [`SearchOptions::record_pruned`] was set.
    pub pruned: Vec<PrunedBranch>,
}

/// A partial assignment D_first..D_ℓ whose restricted system is empty, with
/// the dual vector proving it.
#[derive(Clone, Debug, PartialEq)]
pub struct PrunedBranch {
    pub first: usize,
    pub assigned: Vec<u32>,
    pub farkas: Vec<BigRational>,
}

impl serde::Serialize for PrunedBranch {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PrunedBranch", 3)?;
        st.serialize_field("first", &self.first)?;
        st.serialize_field("assigned", &self.assigned)?;
        let farkas: Vec<String> = self.farkas.iter().map(|y| y.to_string()).collect();
        st.serialize_field("farkas", &farkas)?;
        st.end()
    }
}

pub fn optimal_lp_sequence(length: usize) -> Result<LpSearchResult> {
    optimal_lp_sequence_with(length, &SearchOptions::standard())
}

/// Maximizes Π D_i over non-decreasing integer sequences with
/// D_i ≤ d(ℓ, ℓ−i+1) whose refined system is feasible. Ties go to the
/// lexicographically largest sequence.
///
/// Positions are fixed from i = ℓ downward with values tried from the cap
/// down. After each assignment the system restricted to the assigned levels
/// is screened; it relaxes every completion, so an exact infeasibility
/// certificate prunes the subtree. Products are compared as integers.
pub fn optimal_lp_sequence_with(length: usize, opts: &SearchOptions) -> Result<LpSearchResult> {
    if !(2..=16).contains(&length) {
        return Err(Error::OutOfRange(format!("dimension {length} outside 2..=16")));
    }
    let started = Instant::now();
    let caps = BestDistanceTable::standard().position_caps(length)?;
    let mut search = Search {
        length,
        caps,
        table: KrawtchoukTable::new(length),
        best: None,
        stats: SearchStats::default(),
        record: opts.record_pruned,
        pruned: Vec::new(),
    };

    let mut seeds = Vec::new();
    if let Some(s) = &opts.incumbent {
        seeds.push(s.clone());
    }
    if opts.seed_from_known_chains {
        seeds.extend(decomposition::known_chain_sequences(length));
    }
    for s in seeds {
        search.offer(&s);
    }

    let mut d = vec![0u32; length];
    search.descend(length, &mut d, 1);
    let (sequence, _, certificate) = search
        .best
        .take()
        .expect("the all-ones sequence is always LP-valid");
    let mut stats = search.stats;
    stats.millis = started.elapsed().as_millis() as u64;
    let sequence = PartialDistanceSequence::new(sequence)?;
    Ok(LpSearchResult {
        exponent: sequence.exponent(),
        sequence,
        certificate,
        stats,
        pruned: search.pruned,
    })
}

struct Search {
    length: usize,
    caps: Vec<u32>,
    table: KrawtchoukTable,
    best: Option<(Vec<u32>, u128, LpCertificate)>,
    stats: SearchStats,
    record: bool,
    pruned: Vec<PrunedBranch>,
}

fn product(d: &[u32]) -> u128 {
    d.iter().map(|&x| x as u128).product()
}

impl Search {
    fn beats_best(&self, d: &[u32], prod: u128) -> bool {
        match &self.best {
            None => true,
            Some((bd, bp, _)) => prod > *bp || (prod == *bp && d > bd.as_slice()),
        }
    }

    /// Accepts a complete sequence if it improves on the incumbent and its
    /// full system has an exact feasibility certificate.
    fn offer(&mut self, d: &[u32]) {
        if d.len() != self.length
            || d.iter().zip(&self.caps).any(|(x, c)| x > c || *x == 0)
            || d.windows(2).any(|w| w[0] > w[1])
        {
            return;
        }
        let prod = product(d);
        if !self.beats_best(d, prod) {
            return;
        }
        let Ok(p) = build_refined_constraints(self.length, d) else { return };
        self.stats.exact_checks += 1;
        let cert = lp_feasible(&p);
        self.stats.pivots += cert.pivots as u64;
        if cert.is_feasible() {
            self.best = Some((d.to_vec(), prod, cert));
        }
    }

    /// `d[pos..]` (0-based) holds D_{pos+1}..D_ℓ; `suffix` is their product.
    fn descend(&mut self, pos: usize, d: &mut Vec<u32>, suffix: u128) {
        if pos == 0 {
            let full = d.clone();
            self.offer(&full);
            return;
        }
        let l = self.length;
        let hi = if pos == l {
            self.caps[l - 1]
        } else {
            self.caps[pos - 1].min(d[pos])
        };
        for v in (1..=hi).rev() {
            let bound = (1..pos).fold(suffix * v as u128, |acc, i| {
                acc * self.caps[i - 1].min(v) as u128
            });
            if let Some((_, bp, _)) = &self.best {
                if bound < *bp {
                    break;
                }
            }
            self.stats.nodes += 1;
            d[pos - 1] = v;
            let p = refined_suffix_unchecked(&self.table, d, pos);
            self.stats.lp_calls += 1;
            let mut pivots = 0;
            let farkas = certified_infeasible(&p, &mut pivots);
            self.stats.pivots += pivots as u64;
            if let Some(farkas) = farkas {
                self.stats.pruned_infeasible += 1;
                if self.record {
                    self.pruned.push(PrunedBranch {
                        first: pos,
                        assigned: d[pos - 1..].to_vec(),
                        farkas,
                    });
                }
                continue;
            }
            self.descend(pos - 1, d, suffix * v as u128);
        }
        d[pos - 1] = 0;
    }
}
