//! Binary codes of length at most 16 stored as explicit word sets.

pub mod coset_vectors;
mod distance_table;
mod io;
mod word;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::lpbound::krawtchouk;

pub use distance_table::{best_distance, BestDistanceTable};
pub use word::{format_bits, hamming_distance, parse_bits, BinaryWord, MAX_LENGTH};

pub(crate) use word::low_mask;

/// A set of distinct binary words of a common length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    length: usize,
    words: Vec<u32>,
    min_distance: Option<u32>,
}

impl Code {
    /// Builds a code from raw words. Words must be distinct and fit in `length` bits.
    pub fn from_words(length: usize, words: impl IntoIterator<Item = u32>) -> Result<Code> {
        check_length(length)?;
        let mask = low_mask(length);
        let mut words: Vec<u32> = words.into_iter().collect();
        if let Some(&bad) = words.iter().find(|&&w| w & !mask != 0) {
            return Err(Error::WordOverflow {
                bits: bad,
                len: length,
            });
        }
        words.sort_unstable();
        if let Some(pair) = words.windows(2).find(|p| p[0] == p[1]) {
            return Err(Error::DuplicateWord(format_bits(pair[0], length)));
        }
        if words.is_empty() {
            return Err(Error::OutOfRange("a code needs at least one word".into()));
        }
        let min_distance = if words.len() >= 2 {
            Some(min_distance_of(length, &words))
        } else {
            None
        };
        Ok(Code {
            length,
            words,
            min_distance,
        })
    }

    /// The linear span of `generators`.
    pub fn from_generators(length: usize, generators: &[u32]) -> Result<Code> {
        check_length(length)?;
        Code::from_words(length, span(generators))
    }

    pub fn from_binary_words(words: &[BinaryWord]) -> Result<Code> {
        let length = words
            .first()
            .map(|w| w.len())
            .ok_or_else(|| Error::OutOfRange("a code needs at least one word".into()))?;
        if let Some(w) = words.iter().find(|w| w.len() != length) {
            return Err(Error::LengthMismatch(length, w.len()));
        }
        Code::from_words(length, words.iter().map(|w| w.bits()))
    }

    /// The whole space {0,1}^length.
    pub fn universe(length: usize) -> Result<Code> {
        check_length(length)?;
        Code::from_words(length, 0..(1u32 << length))
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Number of codewords M.
    pub fn size(&self) -> usize {
        self.words.len()
    }

    /// log2 of the size, when the size is a power of two.
    pub fn dimension(&self) -> Option<u32> {
        self.size()
            .is_power_of_two()
            .then(|| self.size().trailing_zeros())
    }

    /// Codewords as raw bit patterns, sorted ascending.
    pub fn words(&self) -> &[u32] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = BinaryWord> + '_ {
        let len = self.length;
        self.words.iter().map(move |&b| BinaryWord::new(b, len).unwrap())
    }

    pub fn contains(&self, word: u32) -> bool {
        self.words.binary_search(&word).is_ok()
    }

    pub fn contains_word(&self, word: &BinaryWord) -> bool {
        word.len() == self.length && self.contains(word.bits())
    }

    pub fn is_subset_of(&self, other: &Code) -> bool {
        self.length == other.length && self.words.iter().all(|&w| other.contains(w))
    }

    /// Closed under XOR (and therefore contains zero).
    pub fn is_linear(&self) -> bool {
        self.contains(0) && span(&self.words).len() == self.size()
    }

    pub fn membership(&self) -> WordSet {
        WordSet::from_words(self.length, &self.words)
    }

    /// Minimum pairwise Hamming distance.
    pub fn min_distance(&self) -> Result<u32> {
        self.min_distance.ok_or(Error::SingletonCode)
    }

    /// B_i = |{(c1,c2) : d(c1,c2) = i}| / M for i = 0..=length.
    pub fn distance_distribution(&self) -> DistanceDistribution {
        let counts = difference_counts(self.length, &self.words);
        let mut by_weight = vec![0i64; self.length + 1];
        for (w, &c) in counts.iter().enumerate() {
            by_weight[w.count_ones() as usize] += c as i64;
        }
        let m = self.size() as i64;
        DistanceDistribution {
            length: self.length,
            values: by_weight
                .into_iter()
                .map(|c| Rational64::new(c, m))
                .collect(),
        }
    }

    /// Keeps the words that are zero in the last coordinate and deletes that
    /// coordinate, `count` times.
    pub fn shorten(&self, count: usize) -> Result<Code> {
        if count >= self.length {
            return Err(Error::OutOfRange(format!(
                "cannot shorten a length-{} code {} times",
                self.length, count
            )));
        }
        let new_len = self.length - count;
        let keep_mask = !low_mask(new_len) & low_mask(self.length);
        let words: Vec<u32> = self
            .words
            .iter()
            .copied()
            .filter(|w| w & keep_mask == 0)
            .collect();
        if words.is_empty() {
            return Err(Error::DegenerateShortening);
        }
        Code::from_words(new_len, words)
    }

    /// Union of the translates `v + self` for every `v` in `translations`.
    pub fn union_of_translates(&self, translations: &[u32]) -> Result<Code> {
        let mut words = Vec::with_capacity(self.size() * translations.len());
        for &t in translations {
            words.extend(self.words.iter().map(|&w| w ^ t));
        }
        Code::from_words(self.length, words)
    }
}

/// Bitset over {0,1}^length.
#[derive(Clone, Debug)]
pub struct WordSet {
    blocks: Vec<u64>,
}

impl WordSet {
    pub fn empty(length: usize) -> WordSet {
        let n = 1usize << length;
        WordSet {
            blocks: vec![0; n.div_ceil(64)],
        }
    }

    pub fn from_words(length: usize, words: &[u32]) -> WordSet {
        let mut set = WordSet::empty(length);
        for &w in words {
            set.insert(w);
        }
        set
    }

    #[inline]
    pub fn contains(&self, w: u32) -> bool {
        let w = w as usize;
        (self.blocks[w >> 6] >> (w & 63)) & 1 == 1
    }

    #[inline]
    pub fn remove(&mut self, w: u32) {
        let w = w as usize;
        self.blocks[w >> 6] &= !(1u64 << (w & 63));
    }

    /// Returns false when the word was already present.
    #[inline]
    pub fn insert(&mut self, w: u32) -> bool {
        let w = w as usize;
        let bit = 1u64 << (w & 63);
        let fresh = self.blocks[w >> 6] & bit == 0;
        self.blocks[w >> 6] |= bit;
        fresh
    }
}

/// Distance distribution of a code, indexed by distance 0..=length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceDistribution {
    length: usize,
    values: Vec<Rational64>,
}

impl DistanceDistribution {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn values(&self) -> &[Rational64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> Rational64 {
        self.values[i]
    }

    /// Σ_{j=0..ℓ} B_j P_i(j) for every i. All entries are non-negative for a
    /// genuine code.
    pub fn delsarte_sums(&self) -> Vec<Rational64> {
        let l = self.length;
        (0..=l)
            .map(|i| {
                self.values
                    .iter()
                    .enumerate()
                    .map(|(j, b)| *b * Rational64::from_integer(krawtchouk(l, i, j)))
                    .sum()
            })
            .collect()
    }

    pub fn satisfies_delsarte(&self) -> bool {
        self.delsarte_sums().iter().all(|s| *s >= Rational64::from_integer(0))
    }
}

pub fn single_parity_check(n: usize) -> Result<Code> {
    if !(2..=MAX_LENGTH).contains(&n) {
        return Err(Error::LengthOutOfRange(n));
    }
    Code::from_words(n, (0..(1u32 << n)).filter(|w| w.count_ones() % 2 == 0))
}

pub fn repetition(n: usize) -> Result<Code> {
    check_length(n)?;
    Code::from_words(n, [0, low_mask(n)])
}

/// First-order Reed-Muller code RM(1,4), a (16, 32, 8) code.
pub fn reed_muller_1_4() -> Code {
    let mut gens = coset_vectors::decode(&coset_vectors::RM_GENERATORS);
    gens.extend(coset_vectors::decode(&coset_vectors::ALL_ONES));
    Code::from_generators(16, &gens).expect("RM(1,4)")
}

/// The (16, 2048, 4) extended Hamming code, taken as RM(2,4) so that it
/// contains RM(1,4) and the Nordstrom-Robinson code under the same
/// coordinate order.
pub fn extended_hamming_16() -> Code {
    let linear = coset_vectors::decode(&coset_vectors::RM_GENERATORS);
    let mut gens = linear.clone();
    gens.extend(coset_vectors::decode(&coset_vectors::ALL_ONES));
    for a in 0..linear.len() {
        for b in a + 1..linear.len() {
            gens.push(linear[a] & linear[b]);
        }
    }
    Code::from_generators(16, &gens).expect("extended Hamming code")
}

/// The nonlinear (16, 256, 6) Nordstrom-Robinson code as eight cosets of RM(1,4).
pub fn nordstrom_robinson() -> Code {
    reed_muller_1_4()
        .union_of_translates(&coset_vectors::decode(&coset_vectors::RM_IN_NR))
        .expect("Nordstrom-Robinson code")
}

/// The (16, 128, 6) extended 2-error-correcting BCH code, loaded from its
/// stored codeword list.
pub fn extended_bch_16_7() -> Code {
    Code::from_text(include_str!("../../data/ext_bch_16_7_6.code")).expect("stored BCH code")
}

/// Looks up a built-in code by name: `universe:n`, `parity:n`,
/// `repetition:n`, `hamming`, `reed-muller`, `nordstrom-robinson`, `bch`,
/// optionally followed by `/s` to shorten s times.
pub fn named_code(spec: &str) -> Result<Code> {
    let (base, shorten) = match spec.split_once('/') {
        Some((b, s)) => (
            b,
            s.parse::<usize>()
                .map_err(|_| Error::OutOfRange(format!("bad shortening count in {spec:?}")))?,
        ),
        None => (spec, 0),
    };
    let sized = |arg: Option<&str>| -> Result<usize> {
        arg.and_then(|a| a.parse().ok())
            .ok_or_else(|| Error::OutOfRange(format!("{spec:?} needs a length, e.g. parity:16")))
    };
    let (name, arg) = match base.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (base, None),
    };
    let code = match name {
        "universe" => Code::universe(sized(arg)?)?,
        "parity" => single_parity_check(sized(arg)?)?,
        "repetition" => repetition(sized(arg)?)?,
        "hamming" => extended_hamming_16(),
        "reed-muller" => reed_muller_1_4(),
        "nordstrom-robinson" => nordstrom_robinson(),
        "bch" => extended_bch_16_7(),
        _ => return Err(Error::OutOfRange(format!("unknown code {spec:?}"))),
    };
    if shorten == 0 {
        Ok(code)
    } else {
        code.shorten(shorten)
    }
}

fn check_length(length: usize) -> Result<()> {
    if length == 0 || length > MAX_LENGTH {
        return Err(Error::LengthOutOfRange(length));
    }
    Ok(())
}

pub(crate) fn span(generators: &[u32]) -> Vec<u32> {
    let mut words = vec![0u32];
    let mut seen: std::collections::HashSet<u32> = [0].into_iter().collect();
    for &g in generators {
        if seen.contains(&g) {
            continue;
        }
        let shifted: Vec<u32> = words.iter().map(|w| w ^ g).collect();
        seen.extend(shifted.iter().copied());
        words.extend(shifted);
    }
    words
}

/// A(w) = |{(c1, c2) : c1 ⊕ c2 = w}| for every w, via the Walsh-Hadamard
/// transform of the indicator function.
pub(crate) fn difference_counts(length: usize, words: &[u32]) -> Vec<u64> {
    let n = 1usize << length;
    if words.len() * words.len() <= 4 * n {
        let mut counts = vec![0u64; n];
        for &a in words {
            for &b in words {
                counts[(a ^ b) as usize] += 1;
            }
        }
        return counts;
    }
    let mut f = vec![0i64; n];
    for &w in words {
        f[w as usize] = 1;
    }
    walsh_hadamard(&mut f);
    for x in f.iter_mut() {
        *x *= *x;
    }
    walsh_hadamard(&mut f);
    f.into_iter().map(|x| (x >> length) as u64).collect()
}

fn walsh_hadamard(f: &mut [i64]) {
    let n = f.len();
    let mut h = 1;
    while h < n {
        for block in f.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

fn min_distance_of(length: usize, words: &[u32]) -> u32 {
    difference_counts(length, words)
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &c)| c > 0)
        .map(|(w, _)| w.count_ones())
        .min()
        .expect("at least two words")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_min_distance(c: &Code) -> u32 {
        let w = c.words();
        let mut best = u32::MAX;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                best = best.min((w[i] ^ w[j]).count_ones());
            }
        }
        best
    }

    fn brute_distribution(c: &Code) -> Vec<Rational64> {
        let mut counts = vec![0i64; c.length() + 1];
        for &a in c.words() {
            for &b in c.words() {
                counts[(a ^ b).count_ones() as usize] += 1;
            }
        }
        counts
            .into_iter()
            .map(|x| Rational64::new(x, c.size() as i64))
            .collect()
    }

    #[test]
    fn parity_check_codes() {
        let c = single_parity_check(4).unwrap();
        assert_eq!(c.size(), 8);
        assert_eq!(c.min_distance().unwrap(), 2);
        for s in ["0000", "1111", "1010"] {
            assert!(c.contains_word(&s.parse().unwrap()));
        }
        let c2 = single_parity_check(2).unwrap();
        assert_eq!(c2.words(), &[0, 3]);
        assert_eq!(c2.min_distance().unwrap(), 2);
        assert!(single_parity_check(1).is_err());
        assert!(single_parity_check(17).is_err());
    }

    #[test]
    fn parity_check_16_matches_brute_force() {
        let c = single_parity_check(16).unwrap();
        assert_eq!(c.size(), 32768);
        // Every word has a neighbour at distance 2 and none at distance 1.
        let set = c.membership();
        assert!(c.words().iter().all(|&w| (0..16).all(|i| !set.contains(w ^ (1 << i)))));
        assert_eq!(c.min_distance().unwrap(), 2);
    }

    #[test]
    fn hamming_code() {
        let h = extended_hamming_16();
        assert_eq!(h.size(), 2048);
        assert_eq!(h.min_distance().unwrap(), 4);
        assert!(h.contains(0));
        assert!(h.contains(0xffff));
        assert!(h.is_linear());
        assert!(h.is_subset_of(&single_parity_check(16).unwrap()));
    }

    #[test]
    fn reed_muller_code() {
        let rm = reed_muller_1_4();
        assert_eq!(rm.size(), 32);
        assert_eq!(rm.min_distance().unwrap(), 8);
        assert_eq!(brute_min_distance(&rm), 8);
        let mut weights = [0usize; 17];
        for w in rm.words() {
            weights[w.count_ones() as usize] += 1;
        }
        assert_eq!(weights[0], 1);
        assert_eq!(weights[8], 30);
        assert_eq!(weights[16], 1);
        assert!(rm.words().iter().all(|&w| rm.contains(w ^ 0xffff)));
    }

    #[test]
    fn nordstrom_robinson_code() {
        let nr = nordstrom_robinson();
        assert_eq!(nr.size(), 256);
        assert_eq!(nr.min_distance().unwrap(), 6);
        assert_eq!(brute_min_distance(&nr), 6);
        assert!(nr.contains(0));
        assert!(!nr.is_linear());
        let dist = brute_distribution(&nr);
        assert_eq!(nr.distance_distribution().values(), dist.as_slice());
        let expect = [(0, 1), (6, 112), (8, 30), (10, 112), (16, 1)];
        for i in 0..=16 {
            let want = expect.iter().find(|e| e.0 == i).map_or(0, |e| e.1);
            assert_eq!(dist[i], Rational64::from_integer(want), "B_{i}");
        }
    }

    #[test]
    fn nesting_of_the_length_16_codes() {
        let h = extended_hamming_16();
        let rm = reed_muller_1_4();
        let nr = nordstrom_robinson();
        let rep = repetition(16).unwrap();
        assert!(rm.is_subset_of(&h));
        assert!(rep.is_subset_of(&rm));
        assert!(rm.is_subset_of(&nr));
        assert!(nr.is_subset_of(&h));
        assert!(nr.is_subset_of(&single_parity_check(16).unwrap()));
        let bch = extended_bch_16_7();
        assert_eq!((bch.size(), bch.min_distance().unwrap()), (128, 6));
        assert!(bch.is_linear());
        assert!(rm.is_subset_of(&bch) && bch.is_subset_of(&h));
    }

    #[test]
    fn repetition_codes() {
        let r = repetition(16).unwrap();
        assert_eq!((r.size(), r.min_distance().unwrap()), (2, 16));
        let r1 = repetition(1).unwrap();
        assert_eq!(r1.words(), &[0, 1]);
        assert_eq!(r1.min_distance().unwrap(), 1);
        assert_eq!(repetition(14).unwrap().min_distance().unwrap(), 14);
    }

    #[test]
    fn shortening() {
        let nr1 = nordstrom_robinson().shorten(1).unwrap();
        assert_eq!((nr1.length(), nr1.size()), (15, 128));
        assert!(nr1.min_distance().unwrap() >= 6);

        let rep = repetition(16).unwrap().shorten(1).unwrap();
        assert_eq!(rep.words(), &[0]);
        assert!(matches!(rep.min_distance(), Err(Error::SingletonCode)));

        let h2 = extended_hamming_16().shorten(2).unwrap();
        assert_eq!((h2.length(), h2.size(), h2.min_distance().unwrap()), (14, 512, 4));

        let odd = Code::from_words(3, [0b100]).unwrap();
        assert!(matches!(odd.shorten(1), Err(Error::DegenerateShortening)));
        assert!(nordstrom_robinson().shorten(16).is_err());
    }

    #[test]
    fn distributions() {
        let r = repetition(16).unwrap().distance_distribution();
        for i in 0..=16 {
            let want = if i == 0 || i == 16 { 1 } else { 0 };
            assert_eq!(r.get(i), Rational64::from_integer(want));
        }
        let spc = single_parity_check(4).unwrap();
        let d = spc.distance_distribution();
        assert_eq!(d.values(), brute_distribution(&spc).as_slice());
        assert_eq!(d.get(2), Rational64::from_integer(6));
        assert_eq!(d.get(4), Rational64::from_integer(1));
        let total: Rational64 = d.values()[1..].iter().sum();
        assert_eq!(total, Rational64::from_integer(7));
    }

    #[test]
    fn constructed_codes_satisfy_delsarte() {
        let codes = [
            single_parity_check(16).unwrap(),
            extended_hamming_16(),
            reed_muller_1_4(),
            nordstrom_robinson(),
            extended_bch_16_7(),
            repetition(16).unwrap(),
            nordstrom_robinson().shorten(1).unwrap(),
            nordstrom_robinson().shorten(2).unwrap(),
            extended_hamming_16().shorten(2).unwrap(),
        ];
        for c in &codes {
            let d = c.distance_distribution();
            assert_eq!(d.get(0), Rational64::from_integer(1));
            let total: Rational64 = d.values()[1..].iter().sum();
            assert_eq!(total, Rational64::from_integer(c.size() as i64 - 1));
            assert!(d.satisfies_delsarte(), "length {} size {}", c.length(), c.size());
        }
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            Code::from_words(4, [1, 1]),
            Err(Error::DuplicateWord(_))
        ));
        assert!(Code::from_words(4, [16]).is_err());
        assert!(Code::from_words(0, [0]).is_err());
    }
}
