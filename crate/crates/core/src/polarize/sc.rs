use rand::Rng;
use rayon::prelude::*;

use super::channel::DiscreteChannel;
use super::exact::subchannel_exact;
use super::monte_carlo::trial_rng;
use crate::error::{Error, Result};
use crate::kernel::{Kernel, RecursiveEncoder};

/// Decoder state for one copy of g^{(d)}. A leaf (d = 0) is a single channel
/// output. An inner node runs its ℓ children in lock step: block i of its
/// inputs is decoded against the i-th input likelihoods of every child, and
/// once the block is decided its image g(block) becomes the children's i-th
/// inputs.
enum Node {
    Leaf([f64; 2]),
    Inner(Box<Inner>),
}

struct Inner {
    children: Vec<Node>,
    /// Likelihood of each kernel input, by leaf position, for the current block.
    weights: Vec<f64>,
    low: Vec<f64>,
    high: Vec<f64>,
    /// Positions [start, start + len) still consistent with the block's decided bits.
    start: usize,
    len: usize,
    bits: u32,
    decided: usize,
}

struct Context<'a> {
    kernel: &'a Kernel,
    leaves: &'a [u32],
}

impl Node {
    fn build(l: usize, depth: usize, outputs: &[[f64; 2]]) -> Node {
        if depth == 0 {
            return Node::Leaf(outputs[0]);
        }
        let part = outputs.len() / l;
        Node::Inner(Box::new(Inner {
            children: outputs.chunks(part).map(|c| Node::build(l, depth - 1, c)).collect(),
            weights: vec![0.0; 1 << l],
            low: Vec::new(),
            high: Vec::new(),
            start: 0,
            len: 0,
            bits: 0,
            decided: 0,
        }))
    }

    /// (P(y, decided | next input = 0), P(… = 1)) up to a common factor.
    fn next(&mut self, ctx: &Context) -> [f64; 2] {
        match self {
            Node::Leaf(q) => *q,
            Node::Inner(n) => {
                if n.decided == 0 {
                    n.start_block(ctx);
                }
                let half = n.len / 2;
                let w = &n.weights[n.start..n.start + n.len];
                [w[..half].iter().sum(), w[half..].iter().sum()]
            }
        }
    }

    fn commit(&mut self, ctx: &Context, bit: bool) {
        let Node::Inner(n) = self else { return };
        let l = ctx.kernel.length();
        let half = n.len / 2;
        if bit {
            n.start += half;
        }
        n.len = half;
        n.bits |= (bit as u32) << n.decided;
        n.decided += 1;
        if n.decided == l {
            let x = ctx.kernel.apply(n.bits);
            for (j, child) in n.children.iter_mut().enumerate() {
                child.commit(ctx, (x >> j) & 1 == 1);
            }
            n.decided = 0;
            n.bits = 0;
        }
    }
}

impl Inner {
    fn start_block(&mut self, ctx: &Context) {
        let q: Vec<[f64; 2]> = self
            .children
            .iter_mut()
            .map(|c| {
                let [a, b] = c.next(ctx);
                // Scale so the likelier value has weight 1; the products below
                // then cannot all underflow.
                let m = a.max(b);
                if m > 0.0 {
                    [a / m, b / m]
                } else {
                    [1.0, 1.0]
                }
            })
            .collect();
        // The product over children factors into the low and high halves of x.
        let split = q.len() / 2;
        let half_table = |table: &mut Vec<f64>, qs: &[[f64; 2]]| {
            table.clear();
            table.extend((0..1usize << qs.len()).map(|v| {
                qs.iter().enumerate().map(|(j, p)| p[(v >> j) & 1]).product::<f64>()
            }));
        };
        half_table(&mut self.low, &q[..split]);
        half_table(&mut self.high, &q[split..]);
        let mask = (1u32 << split) - 1;
        for (w, &x) in self.weights.iter_mut().zip(ctx.leaves) {
            *w = self.low[(x & mask) as usize] * self.high[(x >> split) as usize];
        }
        self.start = 0;
        self.len = self.weights.len();
    }
}

/// Successive-cancellation decoding of g^{(m)}: inputs are decided in order,
/// each by comparing the likelihoods of its two values given the channel
/// outputs and the earlier decisions, summing over all later inputs of the
/// same kernel block. `frozen[k] = Some(v)` forces input k to v. Ties
/// decide 0.
pub fn sc_decode(
    re: &RecursiveEncoder,
    outputs: &[usize],
    frozen: &[Option<bool>],
    channel: &DiscreteChannel,
) -> Result<Vec<bool>> {
    sc_run(re, outputs, channel, frozen, |_, _| {})
}

fn sc_run(
    re: &RecursiveEncoder,
    outputs: &[usize],
    channel: &DiscreteChannel,
    frozen: &[Option<bool>],
    mut observe: impl FnMut(usize, [f64; 2]),
) -> Result<Vec<bool>> {
    let n = re.block_length();
    if let Some(got) = [outputs.len(), frozen.len()].into_iter().find(|&g| g != n) {
        return Err(Error::InputLength { got, expected: n });
    }
    if let Some(&y) = outputs.iter().find(|&&y| y >= channel.output_size()) {
        return Err(Error::OutOfRange(format!("output symbol {y} not in the channel alphabet")));
    }
    let kernel = re.kernel();
    let bd = kernel.decomposition();
    let ctx = Context {
        kernel,
        leaves: bd.leaves(),
    };
    let likelihoods: Vec<[f64; 2]> = outputs.iter().map(|&y| channel.likelihoods(y)).collect();
    let mut root = Node::build(kernel.length(), re.depth(), &likelihoods);
    let mut u = Vec::with_capacity(n);
    for (k, f) in frozen.iter().enumerate() {
        let l = root.next(&ctx);
        observe(k, l);
        let bit = f.unwrap_or(l[1] > l[0]);
        root.commit(&ctx, bit);
        u.push(bit);
    }
    Ok(u)
}

/// Block and bit error counts of a seeded SC simulation.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ScSummary {
    pub trials: usize,
    pub block_errors: usize,
    pub bit_errors: usize,
    pub info_bits: usize,
    pub seed: u64,
}

impl ScSummary {
    pub fn block_error_rate(&self) -> f64 {
        self.block_errors as f64 / self.trials as f64
    }
}

/// Sends uniformly random information bits (frozen inputs are 0) through
/// g^{(m)} and the channel, decodes with SC and counts errors.
pub fn simulate_sc(
    re: &RecursiveEncoder,
    channel: &DiscreteChannel,
    frozen: &[bool],
    trials: usize,
    seed: u64,
) -> Result<ScSummary> {
    let n = re.block_length();
    if frozen.len() != n {
        return Err(Error::InputLength {
            got: frozen.len(),
            expected: n,
        });
    }
    let known: Vec<Option<bool>> = frozen.iter().map(|&f| f.then_some(false)).collect();
    let results: Vec<usize> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<usize> {
            let mut rng = trial_rng(seed, t);
            let u: Vec<bool> = frozen.iter().map(|&f| !f && rng.gen::<bool>()).collect();
            let x = re.encode(&u)?;
            let y: Vec<usize> = x.iter().map(|&b| channel.sample(b, &mut rng)).collect();
            let decoded = sc_decode(re, &y, &known, channel)?;
            Ok(u.iter().zip(&decoded).filter(|(a, b)| a != b).count())
        })
        .collect::<Result<_>>()?;
    Ok(ScSummary {
        trials,
        block_errors: results.iter().filter(|&&e| e > 0).count(),
        bit_errors: results.iter().sum(),
        info_bits: frozen.iter().filter(|&&f| !f).count(),
        seed,
    })
}

/// Per-input error rate of genie-aided SC (every earlier input known):
/// a decision against the truth counts 1, a tie counts 1/2.
pub fn genie_error_rates(re: &RecursiveEncoder, channel: &DiscreteChannel, trials: usize, seed: u64) -> Result<Vec<f64>> {
    let n = re.block_length();
    let counts: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Vec<f64>> {
            let mut rng = trial_rng(seed, t);
            let u: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
            let x = re.encode(&u)?;
            let y: Vec<usize> = x.iter().map(|&b| channel.sample(b, &mut rng)).collect();
            let truth: Vec<Option<bool>> = u.iter().map(|&b| Some(b)).collect();
            let mut errs = vec![0.0; n];
            sc_run(re, &y, channel, &truth, |k, [l0, l1]| {
                let (own, other) = if u[k] { (l1, l0) } else { (l0, l1) };
                errs[k] = if other > own {
                    1.0
                } else if other == own {
                    0.5
                } else {
                    0.0
                };
            })?;
            Ok(errs)
        })
        .collect::<Result<_>>()?;
    Ok((0..n)
        .map(|k| counts.iter().map(|c| c[k]).sum::<f64>() / trials as f64)
        .collect())
}

/// Bhattacharyya parameters of the N = ℓ^m synthesized channels of g^{(m)}
/// over BEC(ε), by Z_m[iℓ + t] = Z^{(t+1)}(BEC(Z_{m−1}[i])). Exact when the
/// kernel is linear (its synthesized channels over a BEC are BECs);
/// ℓ ≤ 8.
pub fn bec_design(re: &RecursiveEncoder, epsilon: f64) -> Result<Vec<f64>> {
    let kernel = re.kernel();
    let mut z = vec![epsilon];
    for _ in 0..re.depth() {
        let mut next = Vec::with_capacity(z.len() * kernel.length());
        for &zi in &z {
            let w = DiscreteChannel::bec(zi.clamp(0.0, 1.0))?;
            for t in 1..=kernel.length() {
                next.push(subchannel_exact(kernel, &w, t)?.1);
            }
        }
        z = next;
    }
    Ok(z)
}

/// Freezes the `n − info` inputs with the largest scores (ties freeze the
/// earlier input).
pub fn frozen_worst(scores: &[f64], info: usize) -> Vec<bool> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut frozen = vec![false; scores.len()];
    for &k in order.iter().take(scores.len().saturating_sub(info)) {
        frozen[k] = true;
    }
    frozen
}
