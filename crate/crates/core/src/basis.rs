//! Fixed-S^z configuration basis.
//!
//! Bit `i` of a configuration word is site `i`; a set bit is a down spin.
//! Within a sector the words are listed in ascending numeric order, which
//! for a fixed popcount is colexicographic order of the down-spin sets, so
//! a word's position is its combinatorial-number-system rank.

use crate::cluster::MAX_SITES;
use crate::error::{Error, Result};

/// Binomial coefficients up to `MAX_SITES`.
#[derive(Debug, Clone)]
struct BinomialTable {
    rows: Vec<Vec<u64>>,
}

impl BinomialTable {
    fn new(n: usize) -> Self {
        let mut rows = vec![vec![0u64; n + 1]; n + 1];
        for a in 0..=n {
            rows[a][0] = 1;
            for b in 1..=a {
                rows[a][b] = rows[a - 1][b - 1] + rows[a - 1][b];
            }
        }
        BinomialTable { rows }
    }

    #[inline]
    fn get(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.rows[n][k]
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, t| acc * (n - t) as u64 / (t as u64 + 1))
}

/// All N-bit configurations with exactly `m` down spins.
#[derive(Debug, Clone)]
pub struct SectorBasis {
    num_sites: usize,
    num_down: usize,
    configs: Vec<u32>,
    binom: BinomialTable,
}

impl SectorBasis {
    pub fn new(num_sites: usize, num_down: usize) -> Result<Self> {
        if num_down > num_sites || num_sites > MAX_SITES {
            return Err(Error::SectorOutOfRange {
                num_sites,
                num_down,
                max: MAX_SITES,
            });
        }
        let dim = binomial(num_sites, num_down) as usize;
        let mut configs = Vec::with_capacity(dim);
        if num_down == 0 {
            configs.push(0);
        } else {
            // Gosper's hack: next larger word with the same popcount
            let limit = 1u64 << num_sites;
            let mut w: u64 = (1u64 << num_down) - 1;
            while w < limit {
                configs.push(w as u32);
                let c = w & w.wrapping_neg();
                let r = w + c;
                w = (((r ^ w) >> 2) / c) | r;
            }
        }
        debug_assert_eq!(configs.len(), dim);
        Ok(SectorBasis {
            num_sites,
            num_down,
            configs,
            binom: BinomialTable::new(num_sites),
        })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn num_down(&self) -> usize {
        self.num_down
    }

    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    pub fn configs(&self) -> &[u32] {
        &self.configs
    }

    /// Total S^z of every configuration in the sector.
    pub fn sz_total(&self) -> f64 {
        self.num_sites as f64 / 2.0 - self.num_down as f64
    }

    /// Rank of a word known to lie in this sector. O(m).
    #[inline]
    pub fn index_unchecked(&self, word: u32) -> usize {
        let mut rank = 0u64;
        let mut bits = word;
        let mut t = 1;
        while bits != 0 {
            let p = bits.trailing_zeros() as usize;
            rank += self.binom.get(p, t);
            bits &= bits - 1;
            t += 1;
        }
        rank as usize
    }

    pub fn index_of(&self, word: u32) -> Result<usize> {
        let in_range = self.num_sites == 32 || (word as u64) < (1u64 << self.num_sites);
        if word.count_ones() as usize != self.num_down || !in_range {
            return Err(Error::ForeignConfiguration {
                word,
                num_sites: self.num_sites,
                num_down: self.num_down,
            });
        }
        Ok(self.index_unchecked(word))
    }

    pub fn config_of(&self, index: usize) -> Result<u32> {
        self.configs
            .get(index)
            .copied()
            .ok_or(Error::IndexOutOfRange {
                index,
                dim: self.dim(),
            })
    }

    /// S^z of site `i` in configuration `word`: +1/2 up, -1/2 down.
    #[inline]
    pub fn site_sz(word: u32, i: usize) -> f64 {
        if word >> i & 1 == 1 {
            -0.5
        } else {
            0.5
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dimensions() {
        assert_eq!(SectorBasis::new(12, 6).unwrap().dim(), 924);
        assert_eq!(SectorBasis::new(16, 8).unwrap().dim(), 12870);
        let b = SectorBasis::new(4, 0).unwrap();
        assert_eq!(b.configs(), &[0]);
        assert_eq!(SectorBasis::new(4, 4).unwrap().configs(), &[0b1111]);
        for n in 0..=12 {
            let total: usize = (0..=n).map(|m| SectorBasis::new(n, m).unwrap().dim()).sum();
            assert_eq!(total, 1 << n);
        }
    }

    #[test]
    fn out_of_range() {
        assert!(SectorBasis::new(4, 5).is_err());
        assert!(SectorBasis::new(31, 1).is_err());
    }

    #[test]
    fn small_sector_ordering() {
        let b = SectorBasis::new(4, 2).unwrap();
        assert_eq!(
            b.configs(),
            &[0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]
        );
        assert_eq!(b.index_of(0b0011).unwrap(), 0);
        assert_eq!(b.config_of(0).unwrap(), 0b0011);
        assert_eq!(b.index_of(0b1100).unwrap(), 5);
        assert!(b.index_of(0b0111).is_err());
        assert!(b.index_of(0b1_0001).is_err());
        assert!(b.config_of(6).is_err());
    }

    #[test]
    fn exhaustive_round_trip() {
        for n in 0..=16 {
            for m in 0..=n {
                let b = SectorBasis::new(n, m).unwrap();
                for (k, &w) in b.configs().iter().enumerate() {
                    assert_eq!(w.count_ones() as usize, m);
                    assert_eq!(b.index_of(w).unwrap(), k);
                }
                assert!(b.configs().windows(2).all(|p| p[0] < p[1]));
            }
        }
    }

    proptest! {
        #[test]
        fn rank_matches_position(n in 1usize..=20, seed in any::<u64>()) {
            let m = (seed as usize) % (n + 1);
            let b = SectorBasis::new(n, m).unwrap();
            let k = (seed >> 8) as usize % b.dim();
            let w = b.config_of(k).unwrap();
            prop_assert_eq!(b.index_of(w).unwrap(), k);
        }
    }
}
