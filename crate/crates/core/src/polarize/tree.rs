use std::collections::HashMap;

use rand::Rng;

use super::channel::DiscreteChannel;
use super::exact::synthesize;
use super::monte_carlo::trial_rng;
use crate::error::{Error, Result};
use crate::kernel::Kernel;

/// Default cap on the merged output alphabet of a synthesized channel.
pub const DEFAULT_ALPHABET_CAP: usize = 1 << 16;
/// Largest number of leaves enumerated by [`exact_tree`].
const EXACT_TREE_LIMIT: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct TreeSample {
    pub trial: usize,
    /// B_1..B_n, 1-based kernel indices.
    pub branches: Vec<usize>,
    pub z: f64,
}

/// Seeded samples of Z_n for W_{k+1} = W_k^{(B_{k+1})}, B uniform on 1..=ℓ.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct TreeProcess {
    pub length: usize,
    pub depth: usize,
    pub seed: u64,
    pub samples: Vec<TreeSample>,
}

impl TreeProcess {
    pub fn z_values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.z).collect()
    }

    /// 2^{−N^β} with N = ℓ^n.
    pub fn threshold(&self, beta: f64) -> f64 {
        rate_threshold(self.length, self.depth, beta)
    }

    /// Fractions of samples with Z ≤ 2^{−N^β} and with Z ≥ 1 − 2^{−N^β}.
    pub fn summary(&self, beta: f64) -> (f64, f64) {
        let t = self.threshold(beta);
        let z = self.z_values();
        (fraction(&z, |v| v <= t), fraction(&z, |v| v >= 1.0 - t))
    }
}

pub fn rate_threshold(length: usize, depth: usize, beta: f64) -> f64 {
    let n = (length as f64).powi(depth as i32);
    (-n.powf(beta)).exp2()
}

pub fn fraction(values: &[f64], pred: impl Fn(f64) -> bool) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().filter(|&&v| pred(v)).count() as f64 / values.len() as f64
}

/// Share of values within `margin` of 0 or 1.
pub fn polarized_fraction(values: &[f64], margin: f64) -> f64 {
    fraction(values, |v| v < margin || v > 1.0 - margin)
}

/// Runs `trials` independent paths of depth n. Each trial draws its
/// branches from its own stream; channels along shared path prefixes are
/// synthesized once.
pub fn tree_process(
    kernel: &Kernel,
    channel: &DiscreteChannel,
    depth: usize,
    trials: usize,
    seed: u64,
    cap: usize,
) -> Result<TreeProcess> {
    let l = kernel.length();
    let root = channel.merged();
    let mut cache: HashMap<Vec<usize>, DiscreteChannel> = HashMap::new();
    let mut samples = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let branches: Vec<usize> = (0..depth).map(|_| rng.gen_range(1..=l)).collect();
        let mut w = root.clone();
        for k in 1..=depth {
            let key = &branches[..k];
            w = match cache.get(key) {
                Some(c) => c.clone(),
                None => {
                    let c = synthesize(kernel, &w, branches[k - 1], cap)?;
                    cache.insert(key.to_vec(), c.clone());
                    c
                }
            };
        }
        samples.push(TreeSample {
            trial,
            branches,
            z: w.bhattacharyya(),
        });
    }
    Ok(TreeProcess {
        length: l,
        depth,
        seed,
        samples,
    })
}

/// Z at every one of the ℓ^n leaves, branch sequences in lexicographic
/// order. Each leaf has probability ℓ^{−n}.
pub fn exact_tree(kernel: &Kernel, channel: &DiscreteChannel, depth: usize, cap: usize) -> Result<Vec<f64>> {
    let l = kernel.length();
    let leaves = (0..depth).try_fold(1usize, |acc, _| acc.checked_mul(l));
    if leaves.is_none_or(|n| n > EXACT_TREE_LIMIT) {
        return Err(Error::OutOfRange(format!(
            "{l}^{depth} leaves exceed the enumeration limit {EXACT_TREE_LIMIT}"
        )));
    }
    let mut level = vec![channel.merged()];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * l);
        for w in &level {
            for i in 1..=l {
                next.push(synthesize(kernel, w, i, cap)?);
            }
        }
        level = next;
    }
    Ok(level.iter().map(|w| w.bhattacharyya()).collect())
}

/// Z_n over all 2^n leaves for G_2 on BEC(ε): Z ↦ (2Z − Z², Z²).
pub fn bec_arikan_tree(epsilon: f64, depth: usize) -> Vec<f64> {
    let mut z = vec![epsilon];
    for _ in 0..depth {
        z = z.iter().flat_map(|&v| [2.0 * v - v * v, v * v]).collect();
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_zero_is_the_channel() {
        let w = DiscreteChannel::bsc(0.1).unwrap();
        let t = tree_process(&Kernel::arikan(), &w, 0, 5, 1, DEFAULT_ALPHABET_CAP).unwrap();
        assert_eq!(t.samples.len(), 5);
        assert!(t.samples.iter().all(|s| (s.z - w.bhattacharyya()).abs() < 1e-15 && s.branches.is_empty()));
    }

    #[test]
    fn perfect_channel_stays_perfect() {
        let t = tree_process(&Kernel::parity_repetition_4(), &DiscreteChannel::noiseless(), 3, 20, 2, 64).unwrap();
        assert!(t.samples.iter().all(|s| s.z == 0.0));
    }

    #[test]
    fn exact_tree_matches_arikan_recursion() {
        let w = DiscreteChannel::bec(0.5).unwrap();
        let exact = exact_tree(&Kernel::arikan(), &w, 6, 16).unwrap();
        let closed = bec_arikan_tree(0.5, 6);
        assert_eq!(exact.len(), 64);
        for (a, b) in exact.iter().zip(&closed) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn samples_follow_their_branches() {
        let w = DiscreteChannel::bec(0.3).unwrap();
        let t = tree_process(&Kernel::arikan(), &w, 5, 50, 3, 16).unwrap();
        let closed = bec_arikan_tree(0.3, 5);
        for s in &t.samples {
            let idx = s.branches.iter().fold(0, |acc, &b| acc * 2 + (b - 1));
            assert!((s.z - closed[idx]).abs() < 1e-12);
        }
        assert_eq!(t, tree_process(&Kernel::arikan(), &w, 5, 50, 3, 16).unwrap());
    }

    #[test]
    fn thresholds() {
        let t = rate_threshold(2, 10, 0.4);
        assert!((t / 2f64.powi(-16) - 1.0).abs() < 1e-9);
        assert_eq!(fraction(&[0.0, 0.5, 1.0, 0.2], |v| v < 0.3), 0.5);
        assert_eq!(polarized_fraction(&[0.001, 0.5, 0.999, 0.2], 0.01), 0.5);
    }

    #[test]
    fn alphabet_cap_enforced() {
        let w = DiscreteChannel::bsc(0.1).unwrap();
        assert!(matches!(
            tree_process(&Kernel::arikan(), &w, 8, 10, 0, 8),
            Err(Error::AlphabetExplosion { cap: 8, .. })
        ));
        assert!(exact_tree(&Kernel::arikan(), &w, 30, 8).is_err());
    }
}
