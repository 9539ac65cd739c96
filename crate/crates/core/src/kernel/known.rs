use std::sync::OnceLock;

use super::{CosetStructure, Kernel};
use crate::codes::named_code;
use crate::decomposition::ChainDecomposition;
use crate::error::{Error, Result};

/// Code names and declared distances of chains #2..#4, top level first.
const CHAINS: [&[(&str, u32)]; 3] = [
    &[
        ("universe:16", 1),
        ("parity:16", 2),
        ("hamming", 4),
        ("bch", 6),
        ("reed-muller", 8),
        ("repetition:16", 16),
    ],
    &[
        ("universe:15", 1),
        ("parity:16/1", 2),
        ("hamming/1", 4),
        ("nordstrom-robinson/1", 6),
        ("reed-muller/1", 8),
    ],
    &[
        ("universe:14", 1),
        ("parity:16/2", 2),
        ("hamming/2", 4),
        ("nordstrom-robinson/2", 6),
        ("reed-muller/2", 8),
    ],
];

/// Chain #index (1..=4). Chain #1 comes from its coset-sum form; the others
/// from their representative codes with greedily chosen leaders.
pub fn known_chain(index: usize) -> Result<ChainDecomposition> {
    match index {
        1 => CosetStructure::sixteen().chain(vec![1, 2, 4, 6, 8, 16]),
        2..=4 => {
            let (codes, declared): (Vec<_>, Vec<_>) = CHAINS[index - 2]
                .iter()
                .map(|&(name, d)| named_code(name).map(|c| (c, d)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .unzip();
            ChainDecomposition::from_codes(codes, declared)
        }
        _ => Err(Error::OutOfRange(format!("no known kernel #{index}; expected 1..=4"))),
    }
}

/// Kernel #index, built by refining its chain to single-bit steps. Kernel #1
/// also carries its coset-sum form, checked against the refined table.
pub fn known_kernel(index: usize) -> Result<Kernel> {
    static CACHE: [OnceLock<Kernel>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if !(1..=4).contains(&index) {
        return Err(Error::OutOfRange(format!("no known kernel #{index}; expected 1..=4")));
    }
    if let Some(k) = CACHE[index - 1].get() {
        return Ok(k.clone());
    }
    let bd = known_chain(index)?.binary_refinement()?;
    let mut kernel = Kernel::from_decomposition(&bd);
    if index == 1 {
        kernel = kernel.with_structure(CosetStructure::sixteen())?;
    }
    Ok(CACHE[index - 1].get_or_init(|| kernel).clone())
}

pub fn kernel_1() -> Kernel {
    known_kernel(1).expect("kernel #1")
}

pub fn kernel_2() -> Kernel {
    known_kernel(2).expect("kernel #2")
}

pub fn kernel_3() -> Kernel {
    known_kernel(3).expect("kernel #3")
}

pub fn kernel_4() -> Kernel {
    known_kernel(4).expect("kernel #4")
}
