use std::sync::atomic::{AtomicU32, Ordering};

use rayon::prelude::*;

use super::PartialDistanceSequence;
use crate::codes::BinaryWord;
use crate::error::{Error, Result};

/// A binary decomposition stored as its leaf order: `leaves[p]` is the single
/// codeword of T_{ℓ+1}^{(u)} where p reads u_1..u_ℓ as a big-endian integer.
/// The node T_i^{(u_1..u_{i−1})} is the contiguous block of 2^{ℓ−i+1} leaves
/// starting at (u_1..u_{i−1} big-endian)·2^{ℓ−i+1}, and its two children are
/// the halves of that block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryDecomposition {
    length: usize,
    leaves: Vec<u32>,
    position: Vec<u32>,
}

/// Big-endian position of u (u_1 at bit 0) among ℓ-bit inputs.
pub(crate) fn input_position(u: u32, length: usize) -> u32 {
    if length == 0 {
        return 0;
    }
    u.reverse_bits() >> (32 - length)
}

impl BinaryDecomposition {
    pub fn from_leaves(length: usize, leaves: Vec<u32>) -> Result<BinaryDecomposition> {
        if length == 0 || length > 16 {
            return Err(Error::LengthOutOfRange(length));
        }
        let n = 1usize << length;
        if leaves.len() != n {
            return Err(Error::InputLength {
                got: leaves.len(),
                expected: n,
            });
        }
        let mut position = vec![u32::MAX; n];
        for (p, &x) in leaves.iter().enumerate() {
            if x as usize >= n || position[x as usize] != u32::MAX {
                return Err(Error::NotBijective(format!(
                    "leaf word {x:#x} repeated or out of range"
                )));
            }
            position[x as usize] = p as u32;
        }
        Ok(BinaryDecomposition {
            length,
            leaves,
            position,
        })
    }

    /// The decomposition induced by a bijection given as a table `g[u]`.
    pub fn from_map(length: usize, table: &[u32]) -> Result<BinaryDecomposition> {
        if length == 0 || length > 16 {
            return Err(Error::LengthOutOfRange(length));
        }
        if table.len() != 1usize << length {
            return Err(Error::InputLength {
                got: table.len(),
                expected: 1 << length,
            });
        }
        let mut leaves = vec![0u32; table.len()];
        for (u, &x) in table.iter().enumerate() {
            leaves[input_position(u as u32, length) as usize] = x;
        }
        BinaryDecomposition::from_leaves(length, leaves)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn leaves(&self) -> &[u32] {
        &self.leaves
    }

    /// g(u) with u_1 at bit 0.
    pub fn image(&self, u: u32) -> u32 {
        self.leaves[input_position(u, self.length) as usize]
    }

    /// The induced map as a table indexed by u.
    pub fn to_map(&self) -> Vec<u32> {
        (0..self.leaves.len() as u32).map(|u| self.image(u)).collect()
    }

    /// Members of T_i^{(prefix)} for 1 ≤ i ≤ ℓ+1; `prefix` has i−1 bits.
    pub fn node(&self, i: usize, prefix: u32) -> &[u32] {
        let size = 1usize << (self.length + 1 - i);
        let start = prefix as usize * size;
        &self.leaves[start..start + size]
    }

    /// D^{(i)}(u_1^{i−1}): least distance between the two children of
    /// T_i^{(prefix)}. The prefix word lists u_1..u_{i−1}, coordinate 1 first.
    pub fn partial_distance(&self, i: usize, prefix: &BinaryWord) -> Result<u32> {
        if i == 0 || i > self.length {
            return Err(Error::OutOfRange(format!("index {i} outside 1..={}", self.length)));
        }
        if prefix.len() != i - 1 {
            return Err(Error::InputLength {
                got: prefix.len(),
                expected: i - 1,
            });
        }
        let p = input_position(prefix.bits(), i - 1);
        Ok(self.split_distance(i, p, u32::MAX))
    }

    /// Distance between the halves of node (i, p), or `cap` if every pair is
    /// at least `cap` apart.
    fn split_distance(&self, i: usize, p: u32, cap: u32) -> u32 {
        let half = 1usize << (self.length - i);
        let start = p as usize * 2 * half;
        let (a, b) = self.leaves[start..start + 2 * half].split_at(half);
        let cap = cap.min(self.length as u32 + 1);
        let ball: usize = (1..cap as usize).map(|r| balls::choose(self.length, r)).sum();
        if half.saturating_mul(half) <= half.saturating_mul(ball) {
            let mut best = cap;
            for &x in a {
                for &y in b {
                    let d = (x ^ y).count_ones();
                    if d < best {
                        best = d;
                        if best <= 1 {
                            return best;
                        }
                    }
                }
            }
            best
        } else {
            let lo = (start + half) as u32;
            let hi = (start + 2 * half) as u32;
            for r in 1..cap {
                for &mask in balls::masks(self.length, r as usize) {
                    if a.iter().any(|&x| {
                        let q = self.position[(x ^ mask) as usize];
                        q >= lo && q < hi
                    }) {
                        return r;
                    }
                }
            }
            cap
        }
    }

    /// D^{(i)} = min over prefixes, evaluated in parallel.
    pub fn level_distance(&self, i: usize) -> u32 {
        let best = AtomicU32::new(self.length as u32 + 1);
        (0..1u32 << (i - 1)).into_par_iter().for_each(|p| {
            let cap = best.load(Ordering::Relaxed);
            if cap <= 1 {
                return;
            }
            let d = self.split_distance(i, p, cap);
            best.fetch_min(d, Ordering::Relaxed);
        });
        best.into_inner()
    }

    pub fn partial_distances(&self) -> PartialDistanceSequence {
        let values = (1..=self.length).map(|i| self.level_distance(i)).collect();
        PartialDistanceSequence::new(values).expect("distances lie in 1..=ℓ")
    }

    /// The decomposition of g̃(v) = g(v with coordinates k and k+1 exchanged).
    pub fn swap_coordinates(&self, k: usize) -> Result<BinaryDecomposition> {
        if k == 0 || k >= self.length {
            return Err(Error::OutOfRange(format!(
                "swap index {k} outside 1..{}",
                self.length
            )));
        }
        let (bk, bk1) = (self.length - k, self.length - k - 1);
        let leaves = (0..self.leaves.len())
            .map(|p| {
                let x = ((p >> bk) ^ (p >> bk1)) & 1;
                let q = p ^ (x << bk) ^ (x << bk1);
                self.leaves[q]
            })
            .collect();
        BinaryDecomposition::from_leaves(self.length, leaves)
    }

    /// True when some last-level split separates words at distance ≥ 2.
    pub fn is_polarizing(&self) -> bool {
        self.leaves
            .chunks(2)
            .any(|pair| pair.len() == 2 && (pair[0] ^ pair[1]).count_ones() >= 2)
    }
}

/// D^{(i)} straight from the map: min d(g(w,0,u), g(w,1,v)) over all w, u, v.
/// Inputs carry u_1 at bit 0. Exhaustive; meant for small ℓ.
pub fn partial_distance_direct(length: usize, table: &[u32], i: usize) -> u32 {
    assert!(i >= 1 && i <= length && table.len() == 1 << length);
    let tail = length - i;
    let mut best = u32::MAX;
    for w in 0..(1u32 << (i - 1)) {
        for u in 0..(1u32 << tail) {
            let a = table[(w | (u << i)) as usize];
            for v in 0..(1u32 << tail) {
                let b = table[(w | (1 << (i - 1)) | (v << i)) as usize];
                best = best.min((a ^ b).count_ones());
            }
        }
    }
    best
}

mod balls {
    use std::sync::OnceLock;

    pub fn choose(n: usize, k: usize) -> usize {
        crate::lpbound::binomial(n, k) as usize
    }

    /// Every ℓ-bit mask of weight r.
    pub fn masks(length: usize, r: usize) -> &'static [u32] {
        static TABLE: OnceLock<Vec<Vec<Vec<u32>>>> = OnceLock::new();
        let table = TABLE.get_or_init(|| {
            (0..=16usize)
                .map(|l| {
                    let mut by_weight = vec![Vec::new(); l + 1];
                    for m in 0..(1u32 << l) {
                        by_weight[m.count_ones() as usize].push(m);
                    }
                    by_weight
                })
                .collect()
        });
        &table[length][r]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_decomposition(length: usize, seed: u64) -> BinaryDecomposition {
        let mut leaves: Vec<u32> = (0..(1u32 << length)).collect();
        leaves.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        BinaryDecomposition::from_leaves(length, leaves).unwrap()
    }

    fn brute_node_distance(bd: &BinaryDecomposition, i: usize, p: u32) -> u32 {
        let node = bd.node(i, p);
        let (a, b) = node.split_at(node.len() / 2);
        a.iter()
            .flat_map(|x| b.iter().map(move |y| (x ^ y).count_ones()))
            .min()
            .unwrap()
    }

    /// Example kernel of length 4: rows 1000, 1100, 1010, 1111.
    fn example_map() -> Vec<u32> {
        let rows = [0b0001u32, 0b0011, 0b0101, 0b1111];
        (0..16u32)
            .map(|u| (0..4).filter(|t| (u >> t) & 1 == 1).fold(0, |acc, t| acc ^ rows[t]))
            .collect()
    }

    #[test]
    fn example_kernel_partial_distances() {
        let bd = BinaryDecomposition::from_map(4, &example_map()).unwrap();
        assert_eq!(bd.image(0), 0);
        let prefix: BinaryWord = "000".parse().unwrap();
        assert_eq!(bd.partial_distance(4, &prefix).unwrap(), 4);
        assert_eq!(bd.partial_distance(1, &BinaryWord::zero(0).unwrap()).unwrap(), 1);
        assert_eq!(bd.node(4, 0), &[0b0000, 0b1111]);
        assert_eq!(bd.partial_distances().values(), &[1, 2, 2, 4]);
        assert!(bd.is_polarizing());
    }

    #[test]
    fn arikan_and_identity() {
        let arikan = BinaryDecomposition::from_map(2, &[0b00, 0b01, 0b11, 0b10]).unwrap();
        assert_eq!(arikan.partial_distances().values(), &[1, 2]);
        assert!(arikan.is_polarizing());
        let identity: Vec<u32> = (0..32).collect();
        let id = BinaryDecomposition::from_map(5, &identity).unwrap();
        assert_eq!(id.partial_distances().values(), &[1; 5]);
        assert!(!id.is_polarizing());
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(BinaryDecomposition::from_leaves(2, vec![0, 1, 1, 2]).is_err());
        assert!(BinaryDecomposition::from_leaves(2, vec![0, 1, 2]).is_err());
        let bd = random_decomposition(3, 1);
        assert!(bd.swap_coordinates(0).is_err());
        assert!(bd.swap_coordinates(3).is_err());
    }

    #[test]
    fn ball_search_matches_pair_scan() {
        // Large halves force the ball search at small caps.
        let bd = random_decomposition(12, 5);
        for i in 1..=12 {
            for p in [0u32, (1 << (i - 1)) - 1] {
                let want = brute_node_distance(&bd, i, p);
                for cap in [2, 3, 13] {
                    assert_eq!(bd.split_distance(i, p, cap), want.min(cap), "i={i} p={p} cap={cap}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn tree_distances_match_direct_definition(length in 1usize..=5, seed in any::<u64>()) {
            let bd = random_decomposition(length, seed);
            let map = bd.to_map();
            let d = bd.partial_distances();
            for i in 1..=length {
                prop_assert_eq!(d.get(i), partial_distance_direct(length, &map, i));
                let min_over_nodes = (0..1u32 << (i - 1)).map(|p| brute_node_distance(&bd, i, p)).min().unwrap();
                prop_assert_eq!(d.get(i), min_over_nodes);
            }
        }

        #[test]
        fn swapping_twice_is_the_identity(length in 2usize..=6, seed in any::<u64>(), k in 1usize..6) {
            let bd = random_decomposition(length, seed);
            let k = 1 + (k - 1) % (length - 1);
            let back = bd.swap_coordinates(k).unwrap().swap_coordinates(k).unwrap();
            prop_assert_eq!(back, bd.clone());
            // g̃(v) = g(v with v_k, v_{k+1} exchanged)
            let swapped = bd.swap_coordinates(k).unwrap();
            for v in 0..(1u32 << length) {
                let x = ((v >> (k - 1)) ^ (v >> k)) & 1;
                let w = v ^ (x << (k - 1)) ^ (x << k);
                prop_assert_eq!(swapped.image(v), bd.image(w));
            }
        }

        #[test]
        fn swap_lemma(length in 3usize..=6, seed in any::<u64>()) {
            let bd = random_decomposition(length, seed);
            let d = bd.partial_distances();
            for k in 1..length {
                if d.get(k) <= d.get(k + 1) {
                    continue;
                }
                let s = bd.swap_coordinates(k).unwrap().partial_distances();
                prop_assert!(s.exponent() >= d.exponent() - 1e-12);
                prop_assert_eq!(s.get(k), d.get(k + 1));
                prop_assert!(s.get(k) < s.get(k + 1));
                for i in (1..=length).filter(|&i| i != k && i != k + 1) {
                    prop_assert_eq!(s.get(i), d.get(i));
                }
            }
        }
    }
}
