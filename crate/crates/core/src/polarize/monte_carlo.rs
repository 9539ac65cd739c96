use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::channel::DiscreteChannel;
use crate::error::{Error, Result};
use crate::kernel::Kernel;

pub const MIN_SAMPLES: usize = 1000;

/// Sample means with standard errors for one synthesized channel.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct McEstimate {
    pub capacity: f64,
    pub capacity_stderr: f64,
    pub bhattacharyya: f64,
    pub bhattacharyya_stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// Three standard errors on (I, Z).
    pub fn radius(&self) -> (f64, f64) {
        (3.0 * self.capacity_stderr, 3.0 * self.bhattacharyya_stderr)
    }
}

/// The generator for trial `index` of a run seeded with `seed`; each trial
/// owns a separate ChaCha stream, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Estimates (I, Z) of W^{(i)}.
pub fn subchannel_monte_carlo(
    kernel: &Kernel,
    channel: &DiscreteChannel,
    i: usize,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if i == 0 || i > kernel.length() {
        return Err(Error::OutOfRange(format!("index {i} outside 1..={}", kernel.length())));
    }
    Ok(subchannel_monte_carlo_all(kernel, channel, samples, seed)?.swap_remove(i - 1))
}

/// Estimates (I, Z) of every W^{(i)} from shared samples.
///
/// Each sample draws u uniformly, sends g(u) and computes the two
/// likelihoods L_b = Σ_{u_{i+1}^ℓ} W^ℓ(y | g(u_1^{i−1}, b, u_{i+1}^ℓ)).
/// With b = u_i the per-sample terms log2(2L_b/(L_0+L_1)) and
/// sqrt(L_{1−b}/L_b) are unbiased for I and Z.
pub fn subchannel_monte_carlo_all(
    kernel: &Kernel,
    channel: &DiscreteChannel,
    samples: usize,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    if samples < MIN_SAMPLES {
        return Err(Error::OutOfRange(format!(
            "Monte-Carlo needs at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    let l = kernel.length();
    let leaves = kernel.decomposition().leaves().to_vec();
    let per_sample: Vec<Vec<(f64, f64)>> = (0..samples)
        .into_par_iter()
        .map_init(
            || Workspace::new(l),
            |ws, s| {
                let mut rng = trial_rng(seed, s);
                let u: u32 = rng.gen::<u32>() & ((1u32 << l) - 1);
                let x = kernel.apply(u);
                let y: Vec<usize> = (0..l).map(|k| channel.sample((x >> k) & 1 == 1, &mut rng)).collect();
                ws.fill(channel, &y, &leaves);
                (1..=l)
                    .map(|i| {
                        let prefix = u & ((1u32 << (i - 1)) - 1);
                        let p = big_endian(prefix, i - 1) as usize;
                        let b = ((u >> (i - 1)) & 1) as usize;
                        let level = &ws.sums[i];
                        let own = level[2 * p + b];
                        let other = level[2 * p + 1 - b];
                        ((2.0 * own / (own + other)).log2(), (other / own).sqrt())
                    })
                    .collect()
            },
        )
        .collect();
    Ok((0..l)
        .map(|i| {
            let (ci, ci_se) = mean_and_stderr(per_sample.iter().map(|v| v[i].0));
            let (zi, zi_se) = mean_and_stderr(per_sample.iter().map(|v| v[i].1));
            McEstimate {
                capacity: ci,
                capacity_stderr: ci_se,
                bhattacharyya: zi,
                bhattacharyya_stderr: zi_se,
                samples,
                seed,
            }
        })
        .collect())
}

fn big_endian(prefix: u32, bits: usize) -> u32 {
    if bits == 0 {
        0
    } else {
        prefix.reverse_bits() >> (32 - bits)
    }
}

pub(crate) fn mean_and_stderr(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    if n < 2.0 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Likelihoods of every leaf and their subtree sums: `sums[t][j]` adds the
/// leaves below the depth-t node j, so `sums[ℓ]` holds the leaves themselves.
struct Workspace {
    length: usize,
    low: Vec<f64>,
    high: Vec<f64>,
    sums: Vec<Vec<f64>>,
}

impl Workspace {
    fn new(length: usize) -> Workspace {
        let split = length / 2;
        Workspace {
            length,
            low: vec![0.0; 1 << split],
            high: vec![0.0; 1 << (length - split)],
            sums: (0..=length).map(|t| vec![0.0; 1 << t]).collect(),
        }
    }

    fn fill(&mut self, channel: &DiscreteChannel, y: &[usize], leaves: &[u32]) {
        let l = self.length;
        let split = l / 2;
        // W^ℓ(y|x) factors over the low and high coordinate halves of x.
        let half_table = |table: &mut [f64], coords: &[usize]| {
            for (v, slot) in table.iter_mut().enumerate() {
                *slot = coords
                    .iter()
                    .enumerate()
                    .map(|(k, &yk)| channel.likelihoods(yk)[(v >> k) & 1])
                    .product();
            }
        };
        half_table(&mut self.low, &y[..split]);
        half_table(&mut self.high, &y[split..]);
        let mask = (1u32 << split) - 1;
        for (slot, &x) in self.sums[l].iter_mut().zip(leaves) {
            *slot = self.low[(x & mask) as usize] * self.high[(x >> split) as usize];
        }
        for t in (0..l).rev() {
            let (upper, lower) = self.sums.split_at_mut(t + 1);
            for (j, s) in upper[t].iter_mut().enumerate() {
                *s = lower[0][2 * j] + lower[0][2 * j + 1];
            }
        }
    }
}
