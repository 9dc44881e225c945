//! Generic QUBO matrices and the Ising form.
//!
//! A QUBO is stored as a dense upper-triangular matrix: `q[i][i]` holds the
//! linear coefficient of `x_i` and `q[i][j]` (`i < j`) the coefficient of
//! `x_i x_j`, so `E(x) = Σ_i q_ii x_i + Σ_{i<j} q_ij x_i x_j`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Qubo {
    dim: usize,
    entries: Vec<f64>,
}

impl Qubo {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficient of `x_a x_b` (or of `x_a` when `a == b`), in either order.
    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        let (r, c) = if a <= b { (a, b) } else { (b, a) };
        self.entries[r * self.dim + c]
    }

    /// Adds to the coefficient of `x_a x_b`; the pair is stored at
    /// `(min, max)`, keeping the matrix upper triangular.
    #[inline]
    pub fn add(&mut self, a: usize, b: usize, value: f64) {
        let (r, c) = if a <= b { (a, b) } else { (b, a) };
        self.entries[r * self.dim + c] += value;
    }

    pub fn set(&mut self, a: usize, b: usize, value: f64) {
        let (r, c) = if a <= b { (a, b) } else { (b, a) };
        self.entries[r * self.dim + c] = value;
    }

    /// Raw row-major access; entries below the diagonal are always zero.
    pub fn raw(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    /// Nonzero entries `(row, col, value)` with `row ≤ col`, row-major.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |r| {
            (r..self.dim).filter_map(move |c| {
                let v = self.entries[r * self.dim + c];
                (v != 0.0).then_some((r, c, v))
            })
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min_nonzero_abs(&self) -> Option<f64> {
        self.entries
            .iter()
            .filter(|v| **v != 0.0)
            .map(|v| v.abs())
            .min_by(|a, b| a.total_cmp(b))
    }

    pub fn energy(&self, x: &[u8]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::LengthMismatch {
                expected: self.dim,
                actual: x.len(),
            });
        }
        Ok(self.energy_unchecked(x))
    }

    /// Energy summed over the set bits only.
    pub fn energy_unchecked(&self, x: &[u8]) -> f64 {
        let ones: Vec<usize> = (0..self.dim).filter(|&i| x[i] != 0).collect();
        let mut e = 0.0;
        for (a, &i) in ones.iter().enumerate() {
            let row = &self.entries[i * self.dim..(i + 1) * self.dim];
            for &j in &ones[a..] {
                e += row[j];
            }
        }
        e
    }

    pub fn to_ising(&self) -> IsingModel {
        let n = self.dim;
        let mut h = vec![0.0; n];
        let mut couplings = Vec::new();
        let mut offset = 0.0;
        for (r, c, v) in self.nonzeros() {
            if r == c {
                // q x = q/2 + (q/2) z
                h[r] += v / 2.0;
                offset += v / 2.0;
            } else {
                // q x_r x_c = (q/4)(1 + z_r + z_c + z_r z_c)
                h[r] += v / 4.0;
                h[c] += v / 4.0;
                offset += v / 4.0;
                couplings.push((r, c, v / 4.0));
            }
        }
        IsingModel { h, couplings, offset }
    }
}

/// `E(z) = Σ_i h_i z_i + Σ J_ij z_i z_j + offset` over spins `z ∈ {−1, +1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    pub h: Vec<f64>,
    /// `(i, j, J_ij)` with `i < j`.
    pub couplings: Vec<(usize, usize, f64)>,
    pub offset: f64,
}

impl IsingModel {
    /// Energy without the constant offset.
    pub fn energy(&self, z: &[i8]) -> f64 {
        let linear: f64 = self.h.iter().zip(z).map(|(h, &s)| h * s as f64).sum();
        let quadratic: f64 = self
            .couplings
            .iter()
            .map(|&(i, j, jij)| jij * (z[i] * z[j]) as f64)
            .sum();
        linear + quadratic
    }
}

/// Spin for a bit under `x = (1 + z) / 2`.
pub fn spin(bit: u8) -> i8 {
    if bit != 0 {
        1
    } else {
        -1
    }
}

/// Renders an assignment as a string of `0`/`1` characters.
pub fn to_bitstring(x: &[u8]) -> String {
    x.iter().map(|&b| if b != 0 { '1' } else { '0' }).collect()
}

pub fn from_bitstring(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::Parse(format!("invalid bit {other:?} in assignment"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_assignment_has_zero_energy() {
        let mut q = Qubo::zeros(4);
        q.add(0, 0, 3.0);
        q.add(2, 1, -1.5);
        assert_eq!(q.energy(&[0, 0, 0, 0]).unwrap(), 0.0);
        assert_eq!(q.energy(&[1, 0, 0, 0]).unwrap(), 3.0);
        assert_eq!(q.energy(&[0, 1, 1, 0]).unwrap(), -1.5);
        assert!(q.energy(&[0, 1]).is_err());
    }

    #[test]
    fn add_canonicalizes_to_upper_triangle() {
        let mut q = Qubo::zeros(3);
        q.add(2, 0, 1.0);
        q.add(0, 2, 2.0);
        assert_eq!(q.raw(0, 2), 3.0);
        assert_eq!(q.raw(2, 0), 0.0);
        assert_eq!(q.nonzeros().collect::<Vec<_>>(), vec![(0, 2, 3.0)]);
    }

    #[test]
    fn ising_of_zero_and_single_entry() {
        let ising = Qubo::zeros(3).to_ising();
        assert_eq!(ising.h, vec![0.0; 3]);
        assert!(ising.couplings.is_empty());
        assert_eq!(ising.offset, 0.0);

        let mut q = Qubo::zeros(2);
        q.add(0, 0, 4.0);
        let ising = q.to_ising();
        assert_eq!(ising.h, vec![2.0, 0.0]);
        assert_eq!(ising.offset, 2.0);
    }

    #[test]
    fn bitstrings() {
        assert_eq!(to_bitstring(&[0, 1, 1]), "011");
        assert_eq!(from_bitstring("101").unwrap(), vec![1, 0, 1]);
        assert!(from_bitstring("12").is_err());
    }
}
