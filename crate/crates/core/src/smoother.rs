//! Objective functions and the closed-form smoother.
//!
//! Three related objectives measure the fit of a smoothed signal x against
//! data y under a tapered window or a weight pair:
//!
//! - the cross error couples each output sample to its raw neighbors and
//!   is globally minimized by the plain moving mean;
//! - F replaces the off-center data terms with output self-terms, which is
//!   what makes the minimizer auto-regressive;
//! - G generalizes F to independent data weights alpha and smoothness
//!   weights beta and splits orthogonally into a data scatter H0 that does
//!   not depend on x plus a residual objective H around the local mean.
//!
//! All sums are raw (no 1/N normalization), so values scale with both the
//! signal length and the weight masses.

use crate::error::{Result, SmoothError};
use crate::signal::Signal;
use crate::spectral::{circular_convolve, deconvolve, ARKernel};
use crate::window::{TaperedWindow, Theta};

fn check_lengths(x: &Signal, y: &Signal) -> Result<()> {
    if x.len() != y.len() {
        return Err(SmoothError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(())
}

fn check_fits(taps: usize, n: usize) -> Result<()> {
    if taps > n {
        return Err(SmoothError::WindowTooWide { len: taps, n });
    }
    Ok(())
}

/// Cross error: sum over n, k of w_k (y_{n+k} - x_n)^2.
pub fn objective_cross(x: &Signal, y: &Signal, w: &TaperedWindow) -> Result<f64> {
    check_lengths(x, y)?;
    check_fits(2 * w.half_width() + 1, y.len())?;
    let k_max = w.half_width() as i64;
    let mut acc = 0.0;
    for j in 0..x.len() as i64 {
        let xj = x.get(j);
        for k in -k_max..=k_max {
            let d = y.get(j + k) - xj;
            acc += w.weight(k) * d * d;
        }
    }
    Ok(acc)
}

/// Revised objective: sum over n of w_0 (y_n - x_n)^2 plus the off-center
/// self-terms w_k (x_{n+k} - x_n)^2. Convex in x.
pub fn objective_f(x: &Signal, y: &Signal, w: &TaperedWindow) -> Result<f64> {
    check_lengths(x, y)?;
    check_fits(2 * w.half_width() + 1, y.len())?;
    let k_max = w.half_width() as i64;
    let mut acc = 0.0;
    for j in 0..x.len() as i64 {
        let xj = x.get(j);
        let d = y.get(j) - xj;
        acc += w.center() * d * d;
        for k in 1..=k_max {
            let dp = x.get(j + k) - xj;
            let dm = x.get(j - k) - xj;
            acc += w.weight(k) * (dp * dp + dm * dm);
        }
    }
    Ok(acc)
}

/// Generalized objective: alpha-weighted data terms plus beta-weighted
/// smoothness terms. Linear in the weight pair.
pub fn objective_g(x: &Signal, y: &Signal, theta: &Theta) -> Result<f64> {
    check_lengths(x, y)?;
    check_fits(2 * theta.half_width() + 1, y.len())?;
    let alpha = theta.alpha_half();
    let beta = theta.beta_half();
    let mut acc = 0.0;
    for j in 0..x.len() as i64 {
        let xj = x.get(j);
        let d = y.get(j) - xj;
        acc += alpha[0] * d * d;
        for (k, &ak) in alpha.iter().enumerate().skip(1) {
            let k = k as i64;
            let dp = y.get(j + k) - xj;
            let dm = y.get(j - k) - xj;
            acc += ak * (dp * dp + dm * dm);
        }
        for (k, &bk) in beta.iter().enumerate().skip(1) {
            let k = k as i64;
            let dp = x.get(j + k) - xj;
            let dm = x.get(j - k) - xj;
            acc += bk * (dp * dp + dm * dm);
        }
    }
    Ok(acc)
}

/// Residual objective around a precomputed local mean:
/// sum of A (y_bar_n - x_n)^2 plus the beta smoothness terms.
pub fn objective_h(x: &Signal, y_bar: &Signal, theta: &Theta) -> Result<f64> {
    check_lengths(x, y_bar)?;
    check_fits(2 * theta.half_width() + 1, x.len())?;
    let a = theta.a_mass();
    let beta = theta.beta_half();
    let mut acc = 0.0;
    for j in 0..x.len() as i64 {
        let xj = x.get(j);
        let d = y_bar.get(j) - xj;
        acc += a * d * d;
        for (k, &bk) in beta.iter().enumerate().skip(1) {
            let k = k as i64;
            let dp = x.get(j + k) - xj;
            let dm = x.get(j - k) - xj;
            acc += bk * (dp * dp + dm * dm);
        }
    }
    Ok(acc)
}

/// The orthogonal split of the generalized objective: the local mean, the
/// x-independent data scatter, and the data mass it was computed under.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub y_bar: Signal,
    pub h0: f64,
    pub a_mass: f64,
}

/// Splits G at the local mean: G(x) = h0 + H(x) for every x.
pub fn decompose(y: &Signal, theta: &Theta) -> Result<Decomposition> {
    let p = theta.normalized_p()?;
    check_fits(2 * theta.half_width() + 1, y.len())?;
    let y_bar = circular_convolve(y, &p.full())?;
    let alpha = theta.alpha_half();
    let mut h0 = 0.0;
    for j in 0..y.len() as i64 {
        let mean = y_bar.get(j);
        let d = y.get(j) - mean;
        h0 += alpha[0] * d * d;
        for (k, &ak) in alpha.iter().enumerate().skip(1) {
            let k = k as i64;
            let dp = y.get(j + k) - mean;
            let dm = y.get(j - k) - mean;
            h0 += ak * (dp * dp + dm * dm);
        }
    }
    Ok(Decomposition {
        y_bar,
        h0,
        a_mass: theta.a_mass(),
    })
}

/// Weighted moving mean, the minimizer of the cross error.
pub fn moving_mean(y: &Signal, w: &TaperedWindow) -> Result<Signal> {
    circular_convolve(y, &w.full())
}

/// Minimizer of the generalized objective: take the local mean under
/// alpha/A, then deconvolve with the kernel of the weight pair.
pub fn ar_smooth(y: &Signal, theta: &Theta) -> Result<Signal> {
    let p = theta.normalized_p()?;
    check_fits(2 * theta.half_width() + 1, y.len())?;
    let y_bar = circular_convolve(y, &p.full())?;
    let kernel = ARKernel::from_theta(theta)?;
    deconvolve(&y_bar, &kernel)
}

/// How far x is from satisfying the stationarity equation
/// (2 - w_0) x_n = w_0 ybar_n + sum_{k!=0} w_k (x_{n+k} + x_{n-k}),
/// as the worst absolute defect over n. Zero (to rounding) exactly at the
/// minimizer.
pub fn stationarity_residual(x: &Signal, y_bar: &Signal, w: &TaperedWindow) -> Result<f64> {
    check_lengths(x, y_bar)?;
    check_fits(2 * w.half_width() + 1, x.len())?;
    let k_max = w.half_width() as i64;
    let mut worst = 0.0_f64;
    for j in 0..x.len() as i64 {
        let mut rhs = w.center() * y_bar.get(j);
        for k in 1..=k_max {
            // Both signed offsets contribute, hence the factor 2 on the
            // symmetric pair sum.
            rhs += 2.0 * w.weight(k) * (x.get(j + k) + x.get(j - k));
        }
        let lhs = (2.0 - w.center()) * x.get(j);
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}
