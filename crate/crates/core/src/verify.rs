//! Independent brute-force routes used to cross-check the fast paths:
//! a dense circulant solve of the stationarity system, direct double-loop
//! objective sums, finite-difference gradients, and the matrix-side
//! spectrum. Nothing here touches the FFT machinery, that is the point.
//! The CLI exposes the dense solve behind --verify.

use crate::error::{Result, SmoothError};
use crate::signal::Signal;
use crate::spectral::ARKernel;
use crate::window::Theta;

/// Largest signal the dense O(N^3) solver will accept.
pub const MAX_ORACLE_LEN: usize = 512;

/// The stationarity system in dense form: row j carries the kernel
/// coefficients placed cyclically around column j, with the local mean as
/// the right-hand side.
#[derive(Debug, Clone)]
pub struct CirculantSystem {
    matrix: Vec<f64>,
    rhs: Vec<f64>,
}

impl CirculantSystem {
    pub fn new(y_bar: &Signal, kernel: &ARKernel) -> Result<Self> {
        let n = y_bar.len();
        if n > MAX_ORACLE_LEN {
            return Err(SmoothError::TooLargeForOracle {
                n,
                max: MAX_ORACLE_LEN,
            });
        }
        let taps = 2 * kernel.half_width() + 1;
        if taps > n {
            return Err(SmoothError::WindowTooWide { len: taps, n });
        }
        let k_max = kernel.half_width() as i64;
        let mut matrix = vec![0.0; n * n];
        for j in 0..n as i64 {
            for k in -k_max..=k_max {
                let col = (j + k).rem_euclid(n as i64) as usize;
                matrix[j as usize * n + col] += kernel.coefficient(k);
            }
        }
        Ok(Self {
            matrix,
            rhs: y_bar.values().to_vec(),
        })
    }

    /// Gaussian elimination with partial pivoting.
    pub fn solve(mut self) -> Result<Vec<f64>> {
        let n = self.rhs.len();
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&a, &b| {
                    self.matrix[a * n + col]
                        .abs()
                        .total_cmp(&self.matrix[b * n + col].abs())
                })
                .unwrap();
            if self.matrix[pivot_row * n + col].abs() < 1e-300 {
                return Err(SmoothError::SingularSystem { column: col });
            }
            if pivot_row != col {
                for j in 0..n {
                    self.matrix.swap(col * n + j, pivot_row * n + j);
                }
                self.rhs.swap(col, pivot_row);
            }
            let pivot = self.matrix[col * n + col];
            for row in col + 1..n {
                let factor = self.matrix[row * n + col] / pivot;
                if factor == 0.0 {
                    continue;
                }
                for j in col..n {
                    self.matrix[row * n + j] -= factor * self.matrix[col * n + j];
                }
                self.rhs[row] -= factor * self.rhs[col];
            }
        }
        let mut x = vec![0.0; n];
        for row in (0..n).rev() {
            let mut acc = self.rhs[row];
            for j in row + 1..n {
                acc -= self.matrix[row * n + j] * x[j];
            }
            x[row] = acc / self.matrix[row * n + row];
        }
        Ok(x)
    }
}

/// Dense reference solution of the stationarity system; the fast
/// deconvolution must match this to 1e-10 relative.
pub fn solve_dense(y_bar: &Signal, kernel: &ARKernel) -> Result<Signal> {
    Signal::new(CirculantSystem::new(y_bar, kernel)?.solve()?)
}

/// Central-difference gradient of `objective` at `x`, with per-coordinate
/// step `h * (1 + |x_j|)`.
pub fn finite_diff_gradient<F>(objective: F, x: &Signal, h: f64) -> Signal
where
    F: Fn(&Signal) -> f64,
{
    let mut probe = x.values().to_vec();
    let mut grad = Vec::with_capacity(probe.len());
    for j in 0..probe.len() {
        let orig = probe[j];
        let step = h * (1.0 + orig.abs());
        probe[j] = orig + step;
        let plus = objective(&Signal::new(probe.clone()).expect("finite probe"));
        probe[j] = orig - step;
        let minus = objective(&Signal::new(probe.clone()).expect("finite probe"));
        probe[j] = orig;
        grad.push((plus - minus) / (2.0 * step));
    }
    Signal::new(grad).expect("finite gradient")
}

/// Direct double-loop evaluation of the generalized objective and its
/// orthogonal split: returns (G, H0, H).
pub fn naive_objectives(x: &Signal, y: &Signal, theta: &Theta) -> Result<(f64, f64, f64)> {
    if x.len() != y.len() {
        return Err(SmoothError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let n = x.len() as i64;
    let alpha = theta.alpha_full();
    let beta = theta.beta_full();
    let ka = (alpha.len() / 2) as i64;
    let kb = (beta.len() / 2) as i64;
    let a = theta.a_mass();

    let mut g = 0.0;
    for j in 0..n {
        for k in -ka..=ka {
            let d = y.get(j + k) - x.get(j);
            g += alpha[(k + ka) as usize] * d * d;
        }
        for k in -kb..=kb {
            let d = x.get(j + k) - x.get(j);
            g += beta[(k + kb) as usize] * d * d;
        }
    }

    // Local mean under alpha / A, then the split terms.
    let mut h0 = 0.0;
    let mut h = 0.0;
    if a > 0.0 {
        let mut y_bar = vec![0.0; n as usize];
        for j in 0..n {
            let mut acc = 0.0;
            for k in -ka..=ka {
                acc += alpha[(k + ka) as usize] * y.get(j + k);
            }
            y_bar[j as usize] = acc / a;
        }
        for j in 0..n {
            for k in -ka..=ka {
                let d = y.get(j + k) - y_bar[j as usize];
                h0 += alpha[(k + ka) as usize] * d * d;
            }
            let d = y_bar[j as usize] - x.get(j);
            h += a * d * d;
            for k in -kb..=kb {
                let d = x.get(j + k) - x.get(j);
                h += beta[(k + kb) as usize] * d * d;
            }
        }
    }
    Ok((g, h0, h))
}

/// Eigenvalues of the dense circulant operator, computed as the direct
/// complex DFT of its first row. Independent of both the FFT library and
/// the closed cosine form.
pub fn circulant_eigenvalues(kernel: &ARKernel, n: usize) -> Result<Vec<f64>> {
    let taps = 2 * kernel.half_width() + 1;
    if taps > n {
        return Err(SmoothError::WindowTooWide { len: taps, n });
    }
    let k_max = kernel.half_width() as i64;
    let mut row = vec![0.0; n];
    for k in -k_max..=k_max {
        row[k.rem_euclid(n as i64) as usize] += kernel.coefficient(k);
    }
    let mut eigen = Vec::with_capacity(n);
    for m in 0..n {
        let mut re = 0.0;
        let mut im = 0.0;
        for (j, &r) in row.iter().enumerate() {
            let angle = -2.0 * std::f64::consts::PI * (m as f64) * (j as f64) / n as f64;
            re += r * angle.cos();
            im += r * angle.sin();
        }
        // Symmetric kernels have a real spectrum; the sine parts cancel.
        debug_assert!(im.abs() <= 1e-9 * (1.0 + re.abs()));
        eigen.push(re);
    }
    Ok(eigen)
}
