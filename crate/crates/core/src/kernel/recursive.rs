use rayon::prelude::*;

use super::Kernel;
use crate::error::{Error, Result};

/// Largest block length the encoder accepts.
const MAX_BLOCK: usize = 1 << 24;

/// g^{(m)}: the length-ℓ^m map built from a kernel by the recursive block
/// construction. Only the base table is stored.
#[derive(Clone, Debug)]
pub struct RecursiveEncoder {
    kernel: Kernel,
    depth: usize,
    block: usize,
}

impl RecursiveEncoder {
    pub fn new(kernel: Kernel, depth: usize) -> Result<RecursiveEncoder> {
        if depth == 0 {
            return Err(Error::OutOfRange("recursion depth must be at least 1".into()));
        }
        let block = (0..depth)
            .try_fold(1usize, |acc, _| acc.checked_mul(kernel.length()))
            .filter(|&n| n <= MAX_BLOCK)
            .ok_or_else(|| {
                Error::OutOfRange(format!(
                    "block length {}^{depth} exceeds {MAX_BLOCK}",
                    kernel.length()
                ))
            })?;
        Ok(RecursiveEncoder { kernel, depth, block })
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// N = ℓ^m.
    pub fn block_length(&self) -> usize {
        self.block
    }

    pub fn encode(&self, u: &[bool]) -> Result<Vec<bool>> {
        if u.len() != self.block {
            return Err(Error::InputLength {
                got: u.len(),
                expected: self.block,
            });
        }
        Ok(encode_level(&self.kernel, self.depth, u))
    }
}

/// Evaluates g^{(m)}(u).
pub fn encode_recursive(re: &RecursiveEncoder, u: &[bool]) -> Result<Vec<bool>> {
    re.encode(u)
}

/// Packs bits into a word, bit k of the result holding `bits[k]`.
pub fn pack(bits: &[bool]) -> u32 {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (k, &b)| acc | ((b as u32) << k))
}

pub fn unpack(word: u32, len: usize) -> Vec<bool> {
    (0..len).map(|k| (word >> k) & 1 == 1).collect()
}

/// Applies g to each consecutive ℓ-block, then feeds output j of every block
/// (in block order) to the j-th copy of g^{(m−1)} and concatenates.
fn encode_level(kernel: &Kernel, depth: usize, u: &[bool]) -> Vec<bool> {
    let l = kernel.length();
    if depth == 1 {
        return unpack(kernel.apply(pack(u)), l);
    }
    let sub = u.len() / l;
    let mut gamma = vec![vec![false; sub]; l];
    for (i, chunk) in u.chunks(l).enumerate() {
        let x = kernel.apply(pack(chunk));
        for (j, g) in gamma.iter_mut().enumerate() {
            g[i] = (x >> j) & 1 == 1;
        }
    }
    let parts: Vec<Vec<bool>> = if sub >= 1 << 12 {
        gamma.par_iter().map(|g| encode_level(kernel, depth - 1, g)).collect()
    } else {
        gamma.iter().map(|g| encode_level(kernel, depth - 1, g)).collect()
    };
    parts.concat()
}
