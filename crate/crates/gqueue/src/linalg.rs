//! Small dense complex linear solves with partial pivoting.
//!
//! Systems here are at most `MAX_BATCH` square, so a textbook LU with row
//! equilibration, one step of iterative refinement, and an explicit-inverse
//! condition estimate is adequate.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub struct Solution {
    pub x: Vec<Complex64>,
    /// 1-norm condition estimate of the row-equilibrated matrix.
    pub condition_estimate: f64,
}

struct Lu {
    n: usize,
    /// Packed LU factors of the equilibrated matrix.
    lu: Vec<Complex64>,
    pivots: Vec<usize>,
    /// Per-row scale applied before factorization.
    row_scale: Vec<f64>,
}

impl Lu {
    fn factor(matrix: &[Vec<Complex64>]) -> Result<Self> {
        let n = matrix.len();
        let mut row_scale = vec![1.0f64; n];
        let mut lu = vec![Complex64::new(0.0, 0.0); n * n];
        for (i, row) in matrix.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            let max = row.iter().fold(0.0f64, |m, v| m.max(v.norm()));
            if max == 0.0 || !max.is_finite() {
                return Err(Error::IllConditioned {
                    cond: f64::INFINITY,
                });
            }
            row_scale[i] = max;
            for (j, v) in row.iter().enumerate() {
                lu[i * n + j] = v / max;
            }
        }
        let mut pivots = vec![0usize; n];
        for col in 0..n {
            let mut pivot = col;
            let mut best = lu[col * n + col].norm();
            for row in col + 1..n {
                let mag = lu[row * n + col].norm();
                if mag > best {
                    best = mag;
                    pivot = row;
                }
            }
            if best < 1e-300 {
                return Err(Error::IllConditioned {
                    cond: f64::INFINITY,
                });
            }
            pivots[col] = pivot;
            if pivot != col {
                for j in 0..n {
                    lu.swap(col * n + j, pivot * n + j);
                }
            }
            let diag = lu[col * n + col];
            for row in col + 1..n {
                let factor = lu[row * n + col] / diag;
                lu[row * n + col] = factor;
                for j in col + 1..n {
                    let sub = factor * lu[col * n + j];
                    lu[row * n + j] -= sub;
                }
            }
        }
        Ok(Self {
            n,
            lu,
            pivots,
            row_scale,
        })
    }

    /// Solve against an already-equilibrated right-hand side.
    ///
    /// Rows were swapped in full during factorization, so the permutation is
    /// applied to the vector up front and both triangular solves run clean.
    fn solve_scaled(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x = rhs.to_vec();
        for col in 0..n {
            x.swap(col, self.pivots[col]);
        }
        for col in 0..n {
            let xc = x[col];
            for row in col + 1..n {
                let sub = self.lu[row * n + col] * xc;
                x[row] -= sub;
            }
        }
        for col in (0..n).rev() {
            x[col] /= self.lu[col * n + col];
            let xc = x[col];
            for row in 0..col {
                let sub = self.lu[row * n + col] * xc;
                x[row] -= sub;
            }
        }
        x
    }

    fn scale_rhs(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        rhs.iter()
            .zip(&self.row_scale)
            .map(|(v, s)| v / s)
            .collect()
    }
}

/// Solve `matrix * x = rhs`, returning the solution and a condition estimate.
pub fn solve(matrix: &[Vec<Complex64>], rhs: &[Complex64]) -> Result<Solution> {
    let n = matrix.len();
    assert_eq!(rhs.len(), n);
    let lu = Lu::factor(matrix)?;
    let scaled_rhs = lu.scale_rhs(rhs);
    let mut x = lu.solve_scaled(&scaled_rhs);

    // One refinement pass against the equilibrated system.
    let mut residual = scaled_rhs.clone();
    for (i, row) in matrix.iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in row.iter().enumerate() {
            acc += (v / lu.row_scale[i]) * x[j];
        }
        residual[i] -= acc;
    }
    let correction = lu.solve_scaled(&residual);
    for (xi, ci) in x.iter_mut().zip(&correction) {
        *xi += ci;
    }

    // Exact 1-norm condition of the equilibrated matrix via its inverse
    // columns; n is small enough that this is cheap.
    let mut norm_a = 0.0f64;
    for j in 0..n {
        let col_sum: f64 = (0..n)
            .map(|i| (matrix[i][j] / lu.row_scale[i]).norm())
            .sum();
        norm_a = norm_a.max(col_sum);
    }
    let mut norm_inv = 0.0f64;
    let mut unit = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        unit[j] = Complex64::new(1.0, 0.0);
        let col = lu.solve_scaled(&unit);
        unit[j] = Complex64::new(0.0, 0.0);
        let col_sum: f64 = col.iter().map(|v| v.norm()).sum();
        norm_inv = norm_inv.max(col_sum);
    }
    let condition_estimate = norm_a * norm_inv;
    if !condition_estimate.is_finite() {
        return Err(Error::IllConditioned {
            cond: f64::INFINITY,
        });
    }
    Ok(Solution {
        x,
        condition_estimate,
    })
}

/// Solve a real system by promoting to complex; used by the rational
/// approximation construction.
pub fn solve_real(matrix: &[Vec<f64>], rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
    let cm: Vec<Vec<Complex64>> = matrix
        .iter()
        .map(|row| row.iter().map(|&v| Complex64::new(v, 0.0)).collect())
        .collect();
    let cr: Vec<Complex64> = rhs.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let sol = solve(&cm, &cr)?;
    Ok((sol.x.iter().map(|v| v.re).collect(), sol.condition_estimate))
}
