//! Thomas algorithm for tridiagonal systems without pivoting.

use crate::error::{Error, Result};

/// A tridiagonal matrix stored by diagonals. `lower[0]` and `upper[n-1]` are unused.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(lower: Vec<f64>, diag: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if lower.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: lower.len(),
            });
        }
        if upper.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: upper.len(),
            });
        }
        Ok(Self { lower, diag, upper })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `A x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Factor once for repeated solves with the same matrix.
    pub fn factor(&self) -> Result<ThomasFactor> {
        let n = self.len();
        let mut pivot = vec![0.0; n];
        let mut ratio = vec![0.0; n];
        for i in 0..n {
            let p = if i == 0 {
                self.diag[0]
            } else {
                self.diag[i] - self.lower[i] * ratio[i - 1]
            };
            if p == 0.0 || !p.is_finite() {
                return Err(Error::SingularSystem { row: i });
            }
            pivot[i] = p;
            ratio[i] = if i + 1 < n { self.upper[i] / p } else { 0.0 };
        }
        Ok(ThomasFactor {
            lower: self.lower.clone(),
            pivot,
            ratio,
        })
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut x = rhs.to_vec();
        self.factor()?.solve_in_place(&mut x)?;
        Ok(x)
    }
}

/// LU factors of a tridiagonal matrix from forward elimination.
#[derive(Debug, Clone)]
pub struct ThomasFactor {
    lower: Vec<f64>,
    pivot: Vec<f64>,
    ratio: Vec<f64>,
}

impl ThomasFactor {
    pub fn len(&self) -> usize {
        self.pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivot.is_empty()
    }

    /// Overwrites `x` (holding the right-hand side) with the solution.
    pub fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        let n = self.len();
        if x.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: x.len(),
            });
        }
        if n == 0 {
            return Ok(());
        }
        x[0] /= self.pivot[0];
        for i in 1..n {
            x[i] = (x[i] - self.lower[i] * x[i - 1]) / self.pivot[i];
        }
        for i in (0..n - 1).rev() {
            x[i] -= self.ratio[i] * x[i + 1];
        }
        Ok(())
    }
}
