//! Fixed-magnetization bases. Bit `i` of a state word is set when qubit `i`
//! is up; the vacuum is all-down, so a sector is labelled by its number of
//! up ("flipped") spins.

use crate::error::{Error, Result};

pub const DEFAULT_MAX_QUBITS: usize = 24;
const HARD_MAX_QUBITS: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorBasis {
    n_qubits: usize,
    n_flipped: usize,
    states: Vec<u64>,
    // binom[n][k] for n <= n_qubits, k <= n_flipped + 1
    binom: Vec<Vec<u64>>,
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, j| acc * (n - j) as u64 / (j + 1) as u64)
}

impl SectorBasis {
    pub fn new(n_qubits: usize, n_flipped: usize) -> Result<Self> {
        Self::with_max_qubits(n_qubits, n_flipped, DEFAULT_MAX_QUBITS)
    }

    pub fn with_max_qubits(n_qubits: usize, n_flipped: usize, max: usize) -> Result<Self> {
        let max = max.min(HARD_MAX_QUBITS);
        if n_qubits > max {
            return Err(Error::TooManyQubits { n_qubits, max });
        }
        if n_qubits == 0 || n_flipped > n_qubits {
            return Err(Error::InvalidSector {
                n_qubits,
                n_flipped,
            });
        }
        let dim = binomial(n_qubits, n_flipped) as usize;
        let mut states = Vec::with_capacity(dim);
        if n_flipped == 0 {
            states.push(0);
        } else {
            // Gosper's hack walks same-popcount words in increasing order.
            let limit = 1u64 << n_qubits;
            let mut v = (1u64 << n_flipped) - 1;
            while v < limit {
                states.push(v);
                let t = v | (v - 1);
                v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
            }
        }
        debug_assert_eq!(states.len(), dim);
        let binom = (0..=n_qubits)
            .map(|n| (0..=n_flipped + 1).map(|k| binomial(n, k)).collect())
            .collect();
        Ok(SectorBasis {
            n_qubits,
            n_flipped,
            states,
            binom,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_flipped(&self) -> usize {
        self.n_flipped
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn state(&self, index: usize) -> u64 {
        self.states[index]
    }

    /// Position of `state` in the basis. Increasing numeric order coincides
    /// with colexicographic order for a fixed popcount, so the index is the
    /// combinatorial-number-system rank.
    pub fn index_of(&self, state: u64) -> Option<usize> {
        if state.count_ones() as usize != self.n_flipped || state >> self.n_qubits != 0 {
            return None;
        }
        let mut rank = 0u64;
        let mut bits = state;
        let mut j = 1;
        while bits != 0 {
            let pos = bits.trailing_zeros() as usize;
            rank += self.binom[pos][j];
            bits &= bits - 1;
            j += 1;
        }
        Some(rank as usize)
    }

    /// Sectors whose spectra are independent up to spin-flip symmetry.
    pub fn half_filling_sectors(n_qubits: usize) -> std::ops::RangeInclusive<usize> {
        0..=n_qubits / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(SectorBasis::new(4, 2).unwrap().dim(), 6);
        assert_eq!(SectorBasis::new(2, 1).unwrap().dim(), 2);
        let vac = SectorBasis::new(3, 0).unwrap();
        assert_eq!(vac.dim(), 1);
        assert_eq!(vac.state(0), 0);
        assert_eq!(SectorBasis::new(5, 5).unwrap().states(), &[0b11111]);
    }

    #[test]
    fn index_inverts_states() {
        for n in 1..=10 {
            for m in 0..=n {
                let b = SectorBasis::new(n, m).unwrap();
                assert_eq!(b.dim() as u64, binomial(n, m));
                assert!(b.states().windows(2).all(|w| w[0] < w[1]));
                for (i, &s) in b.states().iter().enumerate() {
                    assert_eq!(b.index_of(s), Some(i));
                }
            }
        }
    }

    #[test]
    fn index_rejects_foreign_states() {
        let b = SectorBasis::new(4, 2).unwrap();
        assert_eq!(b.index_of(0b0001), None);
        assert_eq!(b.index_of(0b10001), None);
    }

    #[test]
    fn out_of_range() {
        assert!(SectorBasis::new(3, 4).is_err());
        assert!(SectorBasis::new(0, 0).is_err());
        assert!(matches!(
            SectorBasis::new(25, 1),
            Err(Error::TooManyQubits { .. })
        ));
        assert!(SectorBasis::with_max_qubits(30, 1, 30).is_ok());
    }
}
