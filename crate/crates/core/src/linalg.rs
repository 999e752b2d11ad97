//! Banded linear solver used by the fiber time stepper.
//!
//! The Newton systems of the string model couple each node only to its
//! chain neighbors, so the Jacobian is banded with a small, state-dependent
//! bandwidth. This module stores such matrices in LAPACK-style band storage
//! and solves them by LU factorization with partial pivoting.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is singular at elimination column {col} (pivot {pivot:.3e})")]
    Singular { col: usize, pivot: f64 },
    #[error("dimension mismatch: matrix is {n}x{n}, rhs has length {rhs}")]
    DimensionMismatch { n: usize, rhs: usize },
}

/// Square banded matrix with `kl` sub- and `ku` super-diagonals.
///
/// Storage follows the LAPACK `gbtrf` convention: entry `(i, j)` lives at
/// row `ku + kl + i - j` of a `(2*kl + ku + 1) x n` array, leaving `kl`
/// extra super-diagonals as fill-in space for pivoting.
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    /// Row-major band storage, `(2*kl + ku + 1)` rows of length `n`.
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let rows = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            data: vec![0.0; rows * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn storage_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n && j < self.n);
        debug_assert!(i + self.ku >= j && j + self.kl >= i, "({i},{j}) outside band");
        let row = self.ku + self.kl + i - j;
        row * self.n + j
    }

    /// Whether `(i, j)` falls inside the declared band.
    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i + self.ku >= j && j + self.kl >= i
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.storage_index(i, j)]
        } else {
            0.0
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let idx = self.storage_index(i, j);
        self.data[idx] = value;
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        let idx = self.storage_index(i, j);
        self.data[idx] += value;
    }

    /// Reset all entries to zero, keeping the allocation.
    pub fn clear(&mut self) {
        self.data.fill(0.0);
    }

    /// Solve `A x = b` in place (`b` becomes `x`), destroying the factors.
    ///
    /// Gaussian elimination with partial pivoting; row interchanges stay
    /// inside the widened band, which is why storage reserves `kl` extra
    /// super-diagonals.
    pub fn solve_in_place(&mut self, b: &mut [f64]) -> Result<(), LinalgError> {
        let n = self.n;
        if b.len() != n {
            return Err(LinalgError::DimensionMismatch { n, rhs: b.len() });
        }
        let kl = self.kl;
        let ku = self.ku;
        let width = kl + ku; // widest reach of a row above the diagonal after pivoting
        let stride = self.n;
        let band_rows = 2 * kl + ku + 1;

        // Pointer into storage for (i, j): data[(ku + kl + i - j) * stride + j].
        // Elimination over columns; rows i in (j, j + kl] are candidates.
        for j in 0..n {
            // Partial pivot search in column j.
            let i_max = (j + kl).min(n - 1);
            let mut pivot_row = j;
            let mut pivot_val = self.data[(ku + kl) * stride + j].abs();
            for i in (j + 1)..=i_max {
                let v = self.data[(ku + kl + i - j) * stride + j].abs();
                if v > pivot_val {
                    pivot_val = v;
                    pivot_row = i;
                }
            }
            if pivot_val == 0.0 || !pivot_val.is_finite() {
                return Err(LinalgError::Singular {
                    col: j,
                    pivot: pivot_val,
                });
            }
            if pivot_row != j {
                // Swap rows j and pivot_row over columns [j, min(j + width, n - 1)];
                // c <= j + width keeps both storage rows inside the widened band.
                let c_max = (j + width).min(n - 1);
                for c in j..=c_max {
                    let a = (ku + kl + j - c) * stride + c;
                    let b_idx = (ku + kl + pivot_row - c) * stride + c;
                    debug_assert!(a < band_rows * stride && b_idx < band_rows * stride);
                    self.data.swap(a, b_idx);
                }
                b.swap(j, pivot_row);
            }
            let diag = self.data[(ku + kl) * stride + j];
            let c_max = (j + width).min(n - 1);
            for i in (j + 1)..=i_max {
                let l = self.data[(ku + kl + i - j) * stride + j] / diag;
                self.data[(ku + kl + i - j) * stride + j] = l;
                if l != 0.0 {
                    for c in (j + 1)..=c_max {
                        let upper = self.data[(ku + kl + j - c) * stride + c];
                        let idx = (ku + kl + i - c) * stride + c;
                        self.data[idx] -= l * upper;
                    }
                    b[i] -= l * b[j];
                }
            }
        }

        // Back substitution.
        for j in (0..n).rev() {
            let c_max = (j + width).min(n - 1);
            let mut s = b[j];
            for c in (j + 1)..=c_max {
                s -= self.data[(ku + kl + j - c) * stride + c] * b[c];
            }
            b[j] = s / self.data[(ku + kl) * stride + j];
        }
        Ok(())
    }

    /// Dense multiply, used by tests and residual checks.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let j_lo = i.saturating_sub(self.kl);
            let j_hi = (i + self.ku).min(self.n - 1);
            let mut s = 0.0;
            for j in j_lo..=j_hi {
                s += self.get(i, j) * x[j];
            }
            y[i] = s;
        }
        y
    }
}
