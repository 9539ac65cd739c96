//! Coset-sum form of a kernel: the inputs are split into groups, each group's
//! bits pick one coset vector, and g(u) is the XOR of the picks.
//!
//! Text layout, one block per group:
//!
//! ```text
//! kernel length=16
//! group inputs=1 linear=yes
//! 0000000000000001
//! group inputs=2-5 linear=yes
//! 0000000100000001
//! ...
//! ```

use std::fmt::Write as _;

use crate::codes::coset_vectors as tv;
use crate::codes::{format_bits, parse_bits, BinaryWord};
use crate::decomposition::ChainDecomposition;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetGroup {
    /// 1-based input indices, in the order their bits are read.
    pub inputs: Vec<usize>,
    /// Generator rows when `linear`, otherwise all 2^|inputs| coset vectors.
    pub vectors: Vec<u32>,
    pub linear: bool,
}

impl CosetGroup {
    pub fn new(inputs: Vec<usize>, vectors: Vec<u32>, linear: bool) -> Result<CosetGroup> {
        let expected = if linear {
            inputs.len()
        } else {
            1usize.checked_shl(inputs.len() as u32).unwrap_or(usize::MAX)
        };
        if inputs.is_empty() || vectors.len() != expected {
            return Err(Error::GroupSize {
                inputs,
                got: vectors.len(),
                expected,
            });
        }
        Ok(CosetGroup {
            inputs,
            vectors,
            linear,
        })
    }

    /// The sub-vector of u read big-endian: the first listed input is the
    /// most significant bit.
    pub fn index(&self, u: u32) -> usize {
        self.inputs
            .iter()
            .fold(0usize, |acc, &i| (acc << 1) | ((u >> (i - 1)) & 1) as usize)
    }

    /// The coset vector selected by a sub-vector value.
    pub fn select(&self, index: usize) -> u32 {
        if self.linear {
            let n = self.vectors.len();
            self.vectors
                .iter()
                .enumerate()
                .filter(|(k, _)| (index >> (n - 1 - k)) & 1 == 1)
                .fold(0, |acc, (_, &v)| acc ^ v)
        } else {
            self.vectors[index]
        }
    }

    /// All 2^|inputs| coset vectors, by index.
    pub fn coset_vectors(&self) -> Vec<u32> {
        (0..1usize << self.inputs.len()).map(|i| self.select(i)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetStructure {
    length: usize,
    groups: Vec<CosetGroup>,
}

impl CosetStructure {
    /// The groups' inputs must partition 1..=ℓ and every vector must fit in ℓ bits.
    pub fn new(length: usize, groups: Vec<CosetGroup>) -> Result<CosetStructure> {
        if length == 0 || length > 16 {
            return Err(Error::LengthOutOfRange(length));
        }
        let mut seen = vec![false; length + 1];
        for g in &groups {
            for &i in &g.inputs {
                if i == 0 || i > length || seen[i] {
                    return Err(Error::OutOfRange(format!(
                        "input index {i} repeated or outside 1..={length}"
                    )));
                }
                seen[i] = true;
            }
            if let Some(&v) = g.vectors.iter().find(|&&v| v >> length != 0) {
                return Err(Error::WordOverflow { bits: v, len: length });
            }
        }
        if let Some(i) = (1..=length).find(|&i| !seen[i]) {
            return Err(Error::OutOfRange(format!("input index {i} belongs to no group")));
        }
        Ok(CosetStructure { length, groups })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn groups(&self) -> &[CosetGroup] {
        &self.groups
    }

    /// g(u), u_1 at bit 0.
    pub fn encode(&self, u: u32) -> u32 {
        self.groups
            .iter()
            .fold(0, |acc, g| acc ^ g.select(g.index(u)))
    }

    /// The chain whose level j is group j. Groups must cover consecutive
    /// inputs in order.
    pub fn chain(&self, declared: Vec<u32>) -> Result<ChainDecomposition> {
        let mut next = 1;
        for g in &self.groups {
            if g.inputs.iter().enumerate().any(|(k, &i)| i != next + k) {
                return Err(Error::InvalidDecomposition(format!(
                    "group {:?} is not the consecutive run starting at input {next}",
                    g.inputs
                )));
            }
            next += g.inputs.len();
        }
        if declared.len() != self.groups.len() {
            return Err(Error::InvalidDecomposition(
                "need one declared distance per group".into(),
            ));
        }
        let levels = self
            .groups
            .iter()
            .zip(declared)
            .map(|(g, d)| (g.coset_vectors(), d))
            .collect();
        ChainDecomposition::from_leaders(self.length, levels)
    }

    /// The coset-sum description of the length-16 kernel built on
    /// F^16 ⊃ SPC ⊃ extended Hamming ⊃ Nordstrom-Robinson ⊃ RM(1,4) ⊃ repetition.
    /// Input 12 joins inputs 13–15, giving the four RM(1,4) generator rows
    /// their four input bits.
    pub fn sixteen() -> CosetStructure {
        let group = |inputs: std::ops::RangeInclusive<usize>, vectors: Vec<u32>, linear| {
            CosetGroup::new(inputs.collect(), vectors, linear).expect("static group")
        };
        CosetStructure::new(
            16,
            vec![
                group(1..=1, tv::decode(&tv::PARITY), true),
                group(2..=5, tv::decode(&tv::HAMMING_IN_PARITY), true),
                group(6..=8, tv::decode(&tv::NR_IN_HAMMING), true),
                group(9..=11, tv::decode(&tv::RM_IN_NR), false),
                group(12..=15, tv::decode(&tv::RM_GENERATORS), true),
                group(16..=16, tv::decode(&tv::ALL_ONES), true),
            ],
        )
        .expect("static structure")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("kernel length={}\n", self.length);
        for g in &self.groups {
            let linear = if g.linear { "yes" } else { "no" };
            let _ = writeln!(out, "group inputs={} linear={linear}", format_ranges(&g.inputs));
            for &v in &g.vectors {
                out.push_str(&format_bits(v, self.length));
                out.push('\n');
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<CosetStructure> {
        let mut length = None;
        let mut groups: Vec<(usize, Vec<usize>, Vec<u32>, bool)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            match fields.next() {
                Some("kernel") => {
                    for f in fields {
                        match f.split_once('=') {
                            Some(("length", v)) => {
                                length = Some(v.parse::<usize>().map_err(|_| Error::parse(no, "bad length"))?)
                            }
                            _ => return Err(Error::parse(no, format!("unknown field {f:?}"))),
                        }
                    }
                }
                Some("group") => {
                    let mut inputs = None;
                    let mut linear = None;
                    for f in fields {
                        match f.split_once('=') {
                            Some(("inputs", v)) => inputs = Some(parse_ranges(v).ok_or_else(|| Error::parse(no, "bad inputs"))?),
                            Some(("linear", "yes")) => linear = Some(true),
                            Some(("linear", "no")) => linear = Some(false),
                            _ => return Err(Error::parse(no, format!("unknown field {f:?}"))),
                        }
                    }
                    let inputs = inputs.ok_or_else(|| Error::parse(no, "group needs inputs="))?;
                    let linear = linear.ok_or_else(|| Error::parse(no, "group needs linear=yes|no"))?;
                    groups.push((no, inputs, Vec::new(), linear));
                }
                Some(_) => {
                    let l = length.ok_or_else(|| Error::parse(no, "vector before header"))?;
                    let current = groups
                        .last_mut()
                        .ok_or_else(|| Error::parse(no, "vector before the first group line"))?;
                    let (bits, len) =
                        parse_bits(line).ok_or_else(|| Error::parse(no, format!("bad vector {line:?}")))?;
                    if len != l {
                        return Err(Error::parse(no, format!("vector has {len} bits, expected {l}")));
                    }
                    current.2.push(bits);
                }
                None => {}
            }
        }
        let length = length.ok_or_else(|| Error::parse(1, "missing kernel header"))?;
        let groups = groups
            .into_iter()
            .map(|(no, inputs, vectors, linear)| {
                CosetGroup::new(inputs, vectors, linear).map_err(|e| Error::parse(no, e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        CosetStructure::new(length, groups)
    }
}

/// Evaluates the coset-sum map on a word.
pub fn coset_sum_encode(structure: &CosetStructure, u: &BinaryWord) -> Result<BinaryWord> {
    if u.len() != structure.length() {
        return Err(Error::LengthMismatch(u.len(), structure.length()));
    }
    BinaryWord::new(structure.encode(u.bits()), structure.length())
}

fn format_ranges(inputs: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut k = 0;
    while k < inputs.len() {
        let mut end = k;
        while end + 1 < inputs.len() && inputs[end + 1] == inputs[end] + 1 {
            end += 1;
        }
        parts.push(if end == k {
            inputs[k].to_string()
        } else {
            format!("{}-{}", inputs[k], inputs[end])
        });
        k = end + 1;
    }
    parts.join(",")
}

fn parse_ranges(s: &str) -> Option<Vec<usize>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (a.parse::<usize>().ok()?, b.parse::<usize>().ok()?);
                if a > b {
                    return None;
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().ok()?),
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{nordstrom_robinson, reed_muller_1_4};

    fn word(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn table_rows_for_single_inputs() {
        let s = CosetStructure::sixteen();
        let zero = BinaryWord::zero(16).unwrap();
        assert_eq!(coset_sum_encode(&s, &zero).unwrap(), zero);
        let mut only16 = vec![false; 16];
        only16[15] = true;
        let u = BinaryWord::from_bits(&only16).unwrap();
        assert_eq!(coset_sum_encode(&s, &u).unwrap(), BinaryWord::ones(16).unwrap());
        let mut only1 = vec![false; 16];
        only1[0] = true;
        let u = BinaryWord::from_bits(&only1).unwrap();
        assert_eq!(coset_sum_encode(&s, &u).unwrap(), word("0000000000000001"));
    }

    #[test]
    fn linear_group_reads_big_endian() {
        let g = CosetGroup::new(vec![2, 3], vec![0b01, 0b10], true).unwrap();
        assert_eq!(g.coset_vectors(), vec![0, 0b10, 0b01, 0b11]);
        // u_2 = 1, u_3 = 0 selects index 2.
        assert_eq!(g.index(0b010), 2);
        let n = CosetGroup::new(vec![1, 2], vec![5, 6, 7, 8], false).unwrap();
        assert_eq!(n.index(0b01), 2);
        assert_eq!(n.select(2), 7);
    }

    #[test]
    fn nonlinear_group_spans_nordstrom_robinson() {
        let s = CosetStructure::sixteen();
        let nr = nordstrom_robinson();
        let rm = reed_muller_1_4();
        // Groups 4..6 (inputs 9..16) sweep exactly the NR code.
        let mut words: Vec<u32> = (0u32..256).map(|hi| s.encode(hi << 8)).collect();
        words.sort_unstable();
        words.dedup();
        assert_eq!(words.len(), 256);
        assert!(words.iter().all(|&w| nr.contains(w)));
        let mut rm_words: Vec<u32> = (0u32..32).map(|hi| s.encode(hi << 11)).collect();
        rm_words.sort_unstable();
        rm_words.dedup();
        assert_eq!(rm_words.len(), 32);
        assert!(rm_words.iter().all(|&w| rm.contains(w)));
    }

    #[test]
    fn bad_groups_rejected() {
        assert!(matches!(
            CosetGroup::new(vec![1, 2], vec![1, 2, 3], false),
            Err(Error::GroupSize { expected: 4, got: 3, .. })
        ));
        assert!(CosetGroup::new(vec![1, 2], vec![1], true).is_err());
        let g = CosetGroup::new(vec![1], vec![1], true).unwrap();
        assert!(CosetStructure::new(2, vec![g.clone()]).is_err());
        assert!(CosetStructure::new(1, vec![g.clone(), g]).is_err());
        let wide = CosetGroup::new(vec![1], vec![0b100], true).unwrap();
        assert!(CosetStructure::new(1, vec![wide]).is_err());
    }

    #[test]
    fn chain_requires_consecutive_groups() {
        let a = CosetGroup::new(vec![2], vec![0b11], true).unwrap();
        let b = CosetGroup::new(vec![1], vec![0b01], true).unwrap();
        let s = CosetStructure::new(2, vec![a, b]).unwrap();
        assert!(s.chain(vec![1, 2]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let s = CosetStructure::sixteen();
        let text = s.to_text();
        assert!(text.contains("group inputs=12-15 linear=yes"));
        assert!(text.contains("group inputs=9-11 linear=no"));
        assert_eq!(CosetStructure::from_text(&text).unwrap(), s);
        assert_eq!(parse_ranges("1,3-5,7"), Some(vec![1, 3, 4, 5, 7]));
        assert_eq!(format_ranges(&[1, 3, 4, 5, 7]), "1,3-5,7");
    }

    #[test]
    fn malformed_text_rejected() {
        assert!(CosetStructure::from_text("group inputs=1 linear=yes\n1\n").is_err());
        assert!(CosetStructure::from_text("kernel length=2\n01\n").is_err());
        assert!(CosetStructure::from_text("kernel length=2\ngroup inputs=1-2 linear=maybe\n").is_err());
        assert!(matches!(
            CosetStructure::from_text("kernel length=2\ngroup inputs=1-2 linear=no\n01\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
