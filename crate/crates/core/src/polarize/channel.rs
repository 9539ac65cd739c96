use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Row-sum tolerance for channel validation.
const SUM_TOL: f64 = 1e-9;
/// Posteriors closer than this are treated as one output when merging.
const POSTERIOR_GRID: f64 = 1e12;

/// A binary-input memoryless channel given by its likelihood pairs
/// (W(y|0), W(y|1)), one per output symbol.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct DiscreteChannel {
    label: String,
    pairs: Vec<[f64; 2]>,
}

impl DiscreteChannel {
    pub fn new(label: impl Into<String>, pairs: Vec<[f64; 2]>) -> Result<DiscreteChannel> {
        if pairs.is_empty() {
            return Err(Error::InvalidChannel("no output symbols".into()));
        }
        if pairs.iter().flatten().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidChannel("probabilities must be finite and non-negative".into()));
        }
        for x in 0..2 {
            let s: f64 = pairs.iter().map(|p| p[x]).sum();
            if (s - 1.0).abs() > SUM_TOL {
                return Err(Error::InvalidChannel(format!("W(.|{x}) sums to {s}")));
            }
        }
        Ok(DiscreteChannel {
            label: label.into(),
            pairs,
        })
    }

    /// Binary erasure channel; outputs 0, erasure, 1.
    pub fn bec(epsilon: f64) -> Result<DiscreteChannel> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::InvalidChannel(format!("erasure probability {epsilon} outside [0, 1]")));
        }
        DiscreteChannel::new(
            format!("bec:{epsilon}"),
            vec![[1.0 - epsilon, 0.0], [epsilon, epsilon], [0.0, 1.0 - epsilon]],
        )
    }

    /// Binary symmetric channel with crossover probability p.
    pub fn bsc(p: f64) -> Result<DiscreteChannel> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidChannel(format!("crossover probability {p} outside [0, 1]")));
        }
        DiscreteChannel::new(format!("bsc:{p}"), vec![[1.0 - p, p], [p, 1.0 - p]])
    }

    pub fn noiseless() -> DiscreteChannel {
        DiscreteChannel::new("noiseless", vec![[1.0, 0.0], [0.0, 1.0]]).expect("noiseless channel")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn output_size(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[[f64; 2]] {
        &self.pairs
    }

    /// (W(y|0), W(y|1)).
    pub fn likelihoods(&self, y: usize) -> [f64; 2] {
        self.pairs[y]
    }

    /// Symmetric capacity in bits: mutual information under uniform input.
    pub fn capacity(&self) -> f64 {
        self.pairs
            .iter()
            .map(|&[a, b]| {
                let q = a + b;
                let term = |w: f64| if w > 0.0 { 0.5 * w * (2.0 * w / q).log2() } else { 0.0 };
                term(a) + term(b)
            })
            .sum()
    }

    /// Z(W) = Σ_y sqrt(W(y|0) W(y|1)), clipped to 1 against round-off.
    pub fn bhattacharyya(&self) -> f64 {
        self.pairs.iter().map(|&[a, b]| (a * b).sqrt()).sum::<f64>().min(1.0)
    }

    /// Draws an output symbol for input x.
    pub fn sample<R: Rng + ?Sized>(&self, x: bool, rng: &mut R) -> usize {
        let column = x as usize;
        let mut r: f64 = rng.gen();
        for (y, p) in self.pairs.iter().enumerate() {
            r -= p[column];
            if r < 0.0 {
                return y;
            }
        }
        // Rounding left a sliver of mass; give it to the last possible output.
        self.pairs
            .iter()
            .rposition(|p| p[column] > 0.0)
            .expect("a validated channel has an output for every input")
    }

    /// Outputs with the same posterior P(0|y) are one sufficient statistic;
    /// merging them leaves capacity and Bhattacharyya parameter unchanged.
    /// Null outputs are dropped. Output order follows the posterior.
    pub fn merged(&self) -> DiscreteChannel {
        DiscreteChannel {
            label: self.label.clone(),
            pairs: merge_pairs(self.pairs.iter().copied()),
        }
    }
}

pub(crate) fn merge_pairs(pairs: impl IntoIterator<Item = [f64; 2]>) -> Vec<[f64; 2]> {
    let mut classes = PosteriorClasses::default();
    for [a, b] in pairs {
        classes.add(a, b);
    }
    classes.into_pairs()
}

/// Accumulates likelihood pairs by posterior P(0|y), in posterior order.
#[derive(Default)]
pub(crate) struct PosteriorClasses {
    classes: BTreeMap<i64, [f64; 2]>,
}

impl PosteriorClasses {
    pub fn add(&mut self, a: f64, b: f64) {
        let total = a + b;
        if total <= 0.0 {
            return;
        }
        let key = (a / total * POSTERIOR_GRID).round() as i64;
        let slot = self.classes.entry(key).or_insert([0.0, 0.0]);
        slot[0] += a;
        slot[1] += b;
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn into_pairs(self) -> Vec<[f64; 2]> {
        self.classes.into_values().collect()
    }
}

impl fmt::Display for DiscreteChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl FromStr for DiscreteChannel {
    type Err = Error;

    /// `bec:ε`, `bsc:p` or `noiseless`.
    fn from_str(s: &str) -> Result<DiscreteChannel> {
        let parse = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| Error::InvalidChannel(format!("bad parameter in {s:?}")))
        };
        match s.split_once(':') {
            Some(("bec", v)) => DiscreteChannel::bec(parse(v)?),
            Some(("bsc", v)) => DiscreteChannel::bsc(parse(v)?),
            None if s == "noiseless" => Ok(DiscreteChannel::noiseless()),
            _ => Err(Error::InvalidChannel(format!(
                "unknown channel {s:?}; expected bec:ε, bsc:p or noiseless"
            ))),
        }
    }
}
