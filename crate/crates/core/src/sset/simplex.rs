use std::fmt;

use serde::Serialize;

/// `η^* x` for a nondegenerate cell `x` and a monotone surjection
/// `η: [n] ->> [cell_dim]`, stored as the set of positions `i` with
/// `η(i) = η(i+1)`. As a degeneracy word these are the indices of
/// `s_{i_1} ... s_{i_r} x` with `i_1 > ... > i_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormalSimplex {
    pub cell_dim: usize,
    pub cell: usize,
    pub degens: u64,
}

impl FormalSimplex {
    pub fn nondegenerate(cell_dim: usize, cell: usize) -> Self {
        Self { cell_dim, cell, degens: 0 }
    }

    /// From a strictly decreasing degeneracy list.
    pub fn from_degens(cell_dim: usize, cell: usize, degens: &[usize]) -> Option<Self> {
        if degens.windows(2).any(|w| w[0] <= w[1]) {
            return None;
        }
        let n = cell_dim + degens.len();
        if degens.iter().any(|&i| i >= n || i >= 63) {
            return None;
        }
        Some(Self { cell_dim, cell, degens: degens.iter().fold(0, |m, &i| m | (1 << i)) })
    }

    pub fn dim(&self) -> usize {
        self.cell_dim + self.degens.count_ones() as usize
    }

    pub fn is_degenerate(&self) -> bool {
        self.degens != 0
    }

    /// Degeneracy indices, strictly decreasing.
    pub fn degen_list(&self) -> Vec<usize> {
        (0..64).rev().filter(|i| self.degens >> i & 1 == 1).collect()
    }

    /// `s_j` of this simplex.
    pub fn degeneracy(&self, j: usize) -> Self {
        let low = self.degens & ((1u64 << j) - 1);
        let high = (self.degens >> j) << (j + 1);
        Self { degens: low | (1 << j) | high, ..*self }
    }

    /// `(ψ ∘ η)^* x` where `self = ψ^* x` and `η` is given by `mask`.
    pub fn pulled_back(&self, mask: u64, n: usize) -> Self {
        let eta = values(mask, n);
        let mut out = mask;
        for i in 0..n {
            if mask >> i & 1 == 0 && self.degens >> eta[i] & 1 == 1 {
                out |= 1 << i;
            }
        }
        Self { degens: out, ..*self }
    }
}

impl fmt::Display for FormalSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.degen_list() {
            write!(f, "s{i} ")?;
        }
        write!(f, "#{}:{}", self.cell_dim, self.cell)
    }
}

/// Values `η(0..=n)` of the surjection with repeat set `mask`.
pub(crate) fn values(mask: u64, n: usize) -> Vec<usize> {
    let mut v = Vec::with_capacity(n + 1);
    let mut cur = 0;
    v.push(0);
    for i in 0..n {
        if mask >> i & 1 == 0 {
            cur += 1;
        }
        v.push(cur);
    }
    v
}

/// Repeat set of a monotone map given by its values.
pub(crate) fn mask_of(vals: &[usize]) -> u64 {
    let mut m = 0;
    for i in 0..vals.len().saturating_sub(1) {
        if vals[i] == vals[i + 1] {
            m |= 1 << i;
        }
    }
    m
}

/// Removes the positions in `common` from `mask`, renumbering the rest.
pub(crate) fn compress(mask: u64, common: u64) -> u64 {
    let mut out = 0;
    let mut k = 0;
    for i in 0..64 {
        if common >> i & 1 == 1 {
            continue;
        }
        if mask >> i & 1 == 1 {
            out |= 1 << k;
        }
        k += 1;
    }
    out
}

/// Serializable `{cell, degens}` with a cell name.
#[derive(Clone, Debug, Serialize)]
pub struct NamedSimplex {
    pub cell: String,
    pub degens: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degeneracy_words() {
        let x = FormalSimplex::nondegenerate(1, 0);
        let y = x.degeneracy(0).degeneracy(2);
        assert_eq!(y.degen_list(), vec![2, 0]);
        // s_0 s_0 x = s_1 s_0 x
        assert_eq!(x.degeneracy(0).degeneracy(0).degen_list(), vec![1, 0]);
        assert_eq!(y.dim(), 3);
        assert!(FormalSimplex::from_degens(1, 0, &[0, 2]).is_none());
        assert_eq!(FormalSimplex::from_degens(1, 0, &[2, 0]).unwrap(), y);
    }

    #[test]
    fn surjection_values() {
        assert_eq!(values(0b101, 3), vec![0, 0, 1, 1]);
        assert_eq!(mask_of(&[0, 0, 1, 1]), 0b101);
        assert_eq!(compress(0b1011, 0b0010), 0b101);
    }
}
