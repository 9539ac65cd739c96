use super::channel::{DiscreteChannel, PosteriorClasses};
use crate::error::{Error, Result};
use crate::kernel::Kernel;

/// Largest kernel dimension handled by enumeration.
pub const EXACT_MAX_LENGTH: usize = 8;
/// Largest number of channel output tuples y_1^ℓ enumerated per synthesis.
const ENUMERATION_LIMIT: usize = 1 << 24;

/// W^{(i)}: input u_i, output (y_1^ℓ, u_1^{i−1}), with u_{i+1}^ℓ uniform.
/// Outputs with equal posteriors are merged; more than `cap` distinct
/// posteriors is an error.
pub fn synthesize(kernel: &Kernel, channel: &DiscreteChannel, i: usize, cap: usize) -> Result<DiscreteChannel> {
    let l = kernel.length();
    if l > EXACT_MAX_LENGTH {
        return Err(Error::ExactTooLarge {
            got: l,
            max: EXACT_MAX_LENGTH,
        });
    }
    if i == 0 || i > l {
        return Err(Error::OutOfRange(format!("index {i} outside 1..={l}")));
    }
    let q = channel.output_size();
    let tuples = (0..l)
        .try_fold(1usize, |acc, _| acc.checked_mul(q))
        .filter(|&n| n <= ENUMERATION_LIMIT)
        .ok_or(Error::AlphabetExplosion {
            size: q.saturating_pow(l as u32),
            cap: ENUMERATION_LIMIT,
        })?;
    let leaves = kernel.decomposition().leaves().to_vec();
    let pairs = channel.pairs();
    let half = 1usize << (l - i);
    let scale = 1.0 / (1u64 << (l - 1)) as f64;

    let mut classes = PosteriorClasses::default();
    let mut y = vec![0usize; l];
    let mut prob = vec![0.0f64; leaves.len()];
    for _ in 0..tuples {
        for (p, &x) in prob.iter_mut().zip(&leaves) {
            *p = (0..l).map(|k| pairs[y[k]][((x >> k) & 1) as usize]).product();
        }
        for block in prob.chunks(2 * half) {
            let s0: f64 = block[..half].iter().sum();
            let s1: f64 = block[half..].iter().sum();
            classes.add(s0 * scale, s1 * scale);
            if classes.len() > cap {
                return Err(Error::AlphabetExplosion {
                    size: classes.len(),
                    cap,
                });
            }
        }
        for k in 0..l {
            y[k] += 1;
            if y[k] < q {
                break;
            }
            y[k] = 0;
        }
    }
    DiscreteChannel::new(format!("{}^({i})", channel.label()), classes.into_pairs())
}

/// (I(W^{(i)}), Z(W^{(i)})) by exhaustive enumeration; ℓ ≤ 8.
pub fn subchannel_exact(kernel: &Kernel, channel: &DiscreteChannel, i: usize) -> Result<(f64, f64)> {
    let w = synthesize(kernel, channel, i, usize::MAX)?;
    Ok((w.capacity(), w.bhattacharyya()))
}
