//! Coset vectors of the length-16 chain
//! F^16 ⊃ SPC ⊃ extended Hamming ⊃ Nordstrom-Robinson ⊃ RM(1,4) ⊃ repetition.
//!
//! Each string lists coordinates 1..16 left to right.

use super::word::parse_bits;

/// Odd-weight representative splitting F^16 into the two parity classes.
pub const PARITY: [&str; 1] = ["0000000000000001"];

/// Basis of coset representatives of the extended Hamming code inside the
/// even-weight code.
pub const HAMMING_IN_PARITY: [&str; 4] = [
    "0000000100000001",
    "0000000000010001",
    "0000000000000101",
    "0000000000000011",
];

/// Basis of translates of the Nordstrom-Robinson code inside the extended
/// Hamming code.
pub const NR_IN_HAMMING: [&str; 3] = [
    "0001000100010001",
    "0000010100000101",
    "0000000001010101",
];

/// The eight RM(1,4) coset representatives whose union is the
/// Nordstrom-Robinson code. Not a linear space.
pub const RM_IN_NR: [&str; 8] = [
    "0000000000000000",
    "0000001101010110",
    "0001000101001011",
    "0001001000101110",
    "0001011100011000",
    "0000011000110101",
    "0001010001110010",
    "0000010101101100",
];

/// Non-constant generators of RM(1,4); with the all-ones word they span it.
pub const RM_GENERATORS: [&str; 4] = [
    "0101010101010101",
    "0011001100110011",
    "0000111100001111",
    "0000000011111111",
];

pub const ALL_ONES: [&str; 1] = ["1111111111111111"];

pub(crate) fn decode<const N: usize>(rows: &[&str; N]) -> Vec<u32> {
    rows.iter()
        .map(|s| {
            let (bits, len) = parse_bits(s).expect("static coset vector");
            debug_assert_eq!(len, 16);
            bits
        })
        .collect()
}
