//! Kernels as explicit bijections on ℓ-bit words, their coset-sum form, the
//! four length-14..16 kernels and the recursive block construction.

mod known;
mod recursive;
mod structure;

use std::fmt::Write as _;

use crate::codes::BinaryWord;
use crate::decomposition::{BinaryDecomposition, PartialDistanceSequence};
use crate::error::{Error, Result};

pub use known::{known_chain, known_kernel, kernel_1, kernel_2, kernel_3, kernel_4};
pub use recursive::{encode_recursive, pack, unpack, RecursiveEncoder};
pub use structure::{coset_sum_encode, CosetGroup, CosetStructure};

/// A bijection g on {0,1}^ℓ stored as its table, u_1 and x_1 at bit 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    length: usize,
    table: Vec<u32>,
    structure: Option<CosetStructure>,
}

impl Kernel {
    pub fn from_table(length: usize, table: Vec<u32>) -> Result<Kernel> {
        if length == 0 || length > 16 {
            return Err(Error::LengthOutOfRange(length));
        }
        let n = 1usize << length;
        if table.len() != n {
            return Err(Error::InputLength {
                got: table.len(),
                expected: n,
            });
        }
        let mut hit = vec![false; n];
        for (u, &x) in table.iter().enumerate() {
            if x as usize >= n || hit[x as usize] {
                return Err(Error::NotBijective(format!("g({u:#x}) = {x:#x} repeats or overflows")));
            }
            hit[x as usize] = true;
        }
        Ok(Kernel {
            length,
            table,
            structure: None,
        })
    }

    /// g(u) is the codeword of the leaf T_{ℓ+1}^{(u)}.
    pub fn from_decomposition(bd: &BinaryDecomposition) -> Kernel {
        Kernel {
            length: bd.length(),
            table: bd.to_map(),
            structure: None,
        }
    }

    pub fn from_structure(structure: CosetStructure) -> Result<Kernel> {
        let l = structure.length();
        let table = (0..1u32 << l).map(|u| structure.encode(u)).collect();
        let mut k = Kernel::from_table(l, table)?;
        k.structure = Some(structure);
        Ok(k)
    }

    /// Attaches a coset-sum form after checking it agrees with the table on
    /// every input.
    pub fn with_structure(mut self, structure: CosetStructure) -> Result<Kernel> {
        if structure.length() != self.length {
            return Err(Error::LengthMismatch(structure.length(), self.length));
        }
        if let Some(u) = (0..self.table.len() as u32).find(|&u| structure.encode(u) != self.table[u as usize]) {
            return Err(Error::InvalidDecomposition(format!(
                "coset-sum form differs from the table at input {u:#x}"
            )));
        }
        self.structure = Some(structure);
        Ok(self)
    }

    /// g(u) = Σ u_i·row_i; the rows must be linearly independent.
    pub fn from_generator_matrix(length: usize, rows: &[u32]) -> Result<Kernel> {
        if rows.len() != length {
            return Err(Error::InputLength {
                got: rows.len(),
                expected: length,
            });
        }
        if length == 0 || length > 16 {
            return Err(Error::LengthOutOfRange(length));
        }
        let table = (0..1u32 << length)
            .map(|u| {
                rows.iter()
                    .enumerate()
                    .filter(|(i, _)| (u >> i) & 1 == 1)
                    .fold(0, |acc, (_, &r)| acc ^ r)
            })
            .collect();
        Kernel::from_table(length, table)
    }

    /// G_2: (u_1, u_2) ↦ (u_1 ⊕ u_2, u_2).
    pub fn arikan() -> Kernel {
        Kernel::from_generator_matrix(2, &[0b01, 0b11]).expect("G_2")
    }

    pub fn identity(length: usize) -> Result<Kernel> {
        if length == 0 || length > 16 {
            return Err(Error::LengthOutOfRange(length));
        }
        Kernel::from_table(length, (0..1u32 << length).collect())
    }

    /// The ℓ = 4 kernel with rows 1000, 1100, 1010, 1111, inducing the chain
    /// (4,4,1)-(4,3,2)-(4,1,4).
    pub fn parity_repetition_4() -> Kernel {
        Kernel::from_generator_matrix(4, &[0b0001, 0b0011, 0b0101, 0b1111]).expect("4x4 kernel")
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn structure(&self) -> Option<&CosetStructure> {
        self.structure.as_ref()
    }

    pub fn apply(&self, u: u32) -> u32 {
        self.table[u as usize]
    }

    pub fn apply_word(&self, u: &BinaryWord) -> Result<BinaryWord> {
        if u.len() != self.length {
            return Err(Error::LengthMismatch(u.len(), self.length));
        }
        BinaryWord::new(self.apply(u.bits()), self.length)
    }

    /// The binary decomposition whose leaves are g's images.
    pub fn decomposition(&self) -> BinaryDecomposition {
        BinaryDecomposition::from_map(self.length, &self.table).expect("kernel tables are bijective")
    }

    pub fn partial_distances(&self) -> PartialDistanceSequence {
        self.decomposition().partial_distances()
    }

    pub fn exponent(&self) -> f64 {
        self.partial_distances().exponent()
    }

    /// True when g(a ⊕ b) = g(a) ⊕ g(b) for all inputs.
    pub fn is_linear(&self) -> bool {
        self.table.iter().enumerate().all(|(u, &x)| {
            let rows = (0..self.length).filter(|&k| (u >> k) & 1 == 1);
            x == rows.fold(0, |acc, k| acc ^ self.table[1 << k])
        })
    }

    /// g^{(v_1^i)}: the map on the remaining ℓ−i inputs with u_1^i fixed to
    /// the prefix, as a table over the suffix (u_{i+1} at bit 0).
    pub fn restriction(&self, prefix: &BinaryWord) -> Result<Vec<u32>> {
        let i = prefix.len();
        if i > self.length {
            return Err(Error::InputLength {
                got: i,
                expected: self.length,
            });
        }
        Ok((0..1u32 << (self.length - i))
            .map(|s| self.table[(prefix.bits() | (s << i)) as usize])
            .collect())
    }

    /// The full table as `u x` hexadecimal pairs, coordinate 1 in the least
    /// significant bit of both.
    pub fn to_hex_table(&self) -> String {
        let mut out = format!("kernel-table length={}\n", self.length);
        for (u, x) in self.table.iter().enumerate() {
            let _ = writeln!(out, "{u:x} {x:x}");
        }
        out
    }

    pub fn from_hex_table(text: &str) -> Result<Kernel> {
        let mut length = None;
        let mut table: Vec<Option<u32>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("kernel-table") {
                let l = rest
                    .trim()
                    .strip_prefix("length=")
                    .and_then(|v| v.parse::<usize>().ok())
                    .filter(|&l| (1..=16).contains(&l))
                    .ok_or_else(|| Error::parse(no, "bad kernel-table header"))?;
                length = Some(l);
                table = vec![None; 1 << l];
                continue;
            }
            if length.is_none() {
                return Err(Error::parse(no, "entry before header"));
            }
            let mut parts = line.split_whitespace();
            let (Some(u), Some(x), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::parse(no, "expected two hexadecimal fields"));
            };
            let u = usize::from_str_radix(u, 16).map_err(|_| Error::parse(no, "bad input"))?;
            let x = u32::from_str_radix(x, 16).map_err(|_| Error::parse(no, "bad output"))?;
            let slot = table.get_mut(u).ok_or_else(|| Error::parse(no, "input out of range"))?;
            if slot.replace(x).is_some() {
                return Err(Error::parse(no, format!("input {u:x} listed twice")));
            }
        }
        let length = length.ok_or_else(|| Error::parse(1, "missing kernel-table header"))?;
        let listed = table.iter().flatten().count();
        if listed != table.len() {
            return Err(Error::InputLength {
                got: listed,
                expected: table.len(),
            });
        }
        Kernel::from_table(length, table.into_iter().flatten().collect())
    }

    /// Coset-sum text when the kernel has one, otherwise the hex table.
    pub fn to_text(&self) -> String {
        match &self.structure {
            Some(s) => s.to_text(),
            None => self.to_hex_table(),
        }
    }

    /// Reads either text form, telling them apart by the header.
    pub fn from_text(text: &str) -> Result<Kernel> {
        let header = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .find(|l| !l.is_empty())
            .unwrap_or("");
        if header.starts_with("kernel-table") {
            Kernel::from_hex_table(text)
        } else {
            Kernel::from_structure(CosetStructure::from_text(text)?)
        }
    }
}
