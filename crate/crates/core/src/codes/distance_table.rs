use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// d(n, k): the largest minimum distance of any binary code of length n with
/// 2^k words, for 1 ≤ k ≤ n ≤ 16.
///
/// The shipped table is derived from the known values of A(n, d) (upper
/// bounds where the exact value is open; none of the open cases straddle a
/// power of two for n ≤ 16).
#[derive(Clone, Debug)]
pub struct BestDistanceTable {
    entries: BTreeMap<(usize, usize), u32>,
}

const STANDARD_CSV: &str = include_str!("../../data/best_distance.csv");

impl BestDistanceTable {
    pub fn standard() -> &'static BestDistanceTable {
        static TABLE: OnceLock<BestDistanceTable> = OnceLock::new();
        TABLE.get_or_init(|| BestDistanceTable::from_csv(STANDARD_CSV).expect("shipped d(n,k) table"))
    }

    /// Parses `n,k,d` rows; a header line is optional.
    pub fn from_csv(text: &str) -> Result<BestDistanceTable> {
        let mut entries = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with('n') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 3 {
                return Err(Error::parse(idx + 1, "expected n,k,d"));
            }
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| Error::parse(idx + 1, format!("bad integer {s:?}")))
            };
            let (n, k, d) = (num(fields[0])?, num(fields[1])?, num(fields[2])?);
            entries.insert((n, k), d as u32);
        }
        Ok(BestDistanceTable { entries })
    }

    pub fn get(&self, n: usize, k: usize) -> Result<u32> {
        self.entries
            .get(&(n, k))
            .copied()
            .ok_or(Error::MissingTableEntry { n, k })
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.entries.iter().map(|(&(n, k), &d)| (n, k, d))
    }

    /// Caps d(ℓ, ℓ−i+1) for i = 1..=ℓ, in position order.
    pub fn position_caps(&self, length: usize) -> Result<Vec<u32>> {
        (1..=length).map(|i| self.get(length, length - i + 1)).collect()
    }
}

pub fn best_distance(n: usize, k: usize) -> Result<u32> {
    BestDistanceTable::standard().get(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes;

    #[test]
    fn spot_values() {
        assert_eq!(best_distance(16, 8).unwrap(), 6);
        assert_eq!(best_distance(16, 5).unwrap(), 8);
        assert_eq!(best_distance(16, 1).unwrap(), 16);
        assert_eq!(best_distance(16, 2).unwrap(), 10);
        assert_eq!(best_distance(2, 1).unwrap(), 2);
        assert_eq!(best_distance(3, 2).unwrap(), 2);
        assert!(matches!(
            best_distance(17, 3),
            Err(Error::MissingTableEntry { n: 17, k: 3 })
        ));
    }

    #[test]
    fn table_shape_invariants() {
        let t = BestDistanceTable::standard();
        for n in 1..=16 {
            assert_eq!(t.get(n, n).unwrap(), 1);
            assert_eq!(t.get(n, 1).unwrap() as usize, n);
            for k in 2..=n {
                assert!(t.get(n, k).unwrap() <= t.get(n, k - 1).unwrap());
            }
            // Singleton bound and the trivial lower bound from puncturing.
            for k in 1..=n {
                let d = t.get(n, k).unwrap() as usize;
                assert!(d <= n - k + 1);
                if n > 1 && k < n {
                    assert!(t.get(n, k).unwrap() >= t.get(n - 1, k).unwrap());
                }
            }
        }
    }

    #[test]
    fn plotkin_bound_respected() {
        // For even d with 2d > n: A(n,d) ≤ 2⌊d/(2d−n)⌋; for odd d use A(n,d) = A(n+1,d+1).
        let t = BestDistanceTable::standard();
        for (n, k, d) in t.entries() {
            let (n2, d2) = if d % 2 == 1 { (n + 1, d as usize + 1) } else { (n, d as usize) };
            if 2 * d2 > n2 {
                let cap = 2 * (d2 / (2 * d2 - n2));
                assert!(1usize << k <= cap, "d({n},{k})={d} violates Plotkin");
            }
        }
    }

    #[test]
    fn constructed_codes_meet_the_table() {
        let cases = [
            codes::nordstrom_robinson(),
            codes::reed_muller_1_4(),
            codes::extended_hamming_16(),
            codes::extended_bch_16_7(),
            codes::single_parity_check(16).unwrap(),
            codes::repetition(16).unwrap(),
            codes::nordstrom_robinson().shorten(1).unwrap(),
            codes::reed_muller_1_4().shorten(2).unwrap(),
        ];
        for c in &cases {
            let k = c.dimension().unwrap() as usize;
            let d = best_distance(c.length(), k).unwrap();
            assert!(c.min_distance().unwrap() <= d);
        }
        // The tabulated values used downstream are attained.
        assert_eq!(codes::nordstrom_robinson().min_distance().unwrap(), best_distance(16, 8).unwrap());
        assert_eq!(codes::reed_muller_1_4().min_distance().unwrap(), best_distance(16, 5).unwrap());
        assert_eq!(codes::extended_hamming_16().min_distance().unwrap(), best_distance(16, 11).unwrap());
    }
}
