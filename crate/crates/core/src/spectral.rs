//! The auto-regressive kernel, its spectrum, and the deconvolution that
//! turns a local mean back into the smoothed minimizer.
//!
//! A tapered window w with positive center collapses into a symmetric
//! kernel v (positive center, nonpositive elsewhere, total mass 1). The
//! smoothed output is the unique x with v applied circularly to x equal to
//! the local mean: uniqueness holds because every spectrum bin of v is at
//! least 1, so dividing by the spectrum is always safe.

use rustfft::num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, SmoothError};
use crate::fft;
use crate::signal::Signal;
use crate::window::{TaperedWindow, Theta};

/// Tap count above which circular convolution switches to the FFT path.
const DIRECT_CONV_MAX_TAPS: usize = 64;

/// Largest tolerated imaginary residue of an inverse transform, relative
/// to the output magnitude.
const IMAG_RESIDUE_TOL: f64 = 1e-9;

/// Deconvolution coefficients `v_{-K}..v_K`, stored as the half
/// `[v_0, .., v_K]`.
///
/// Invariants: v_0 > 0, v_k <= 0 off center, symmetric, and the total mass
/// sums to 1 (the center coefficient is completed from the off-center ones,
/// which makes the mass identity hold to rounding).
#[derive(Debug, Clone, PartialEq)]
pub struct ARKernel {
    half: Vec<f64>,
}

impl ARKernel {
    /// Kernel of the window's stationarity system: v_0 = 2/w_0 - 1 and
    /// v_k = -2 w_k / w_0 off center.
    pub fn from_window(w: &TaperedWindow) -> Result<Self> {
        if w.center() <= 0.0 {
            return Err(SmoothError::DegenerateCenterWeight);
        }
        let scale = -2.0 / w.center();
        Self::from_off_center(w.half()[1..].iter().map(|&wk| scale * wk))
    }

    /// Kernel straight from the weight pair: v_0 = (A+2B)/A and
    /// v_k = -2 beta_k / A off center.
    pub fn from_theta(theta: &Theta) -> Result<Self> {
        let a = theta.a_mass();
        if a <= 0.0 {
            return Err(SmoothError::ZeroDataMass);
        }
        let scale = -2.0 / a;
        Self::from_off_center(theta.beta_half()[1..].iter().map(|&bk| scale * bk))
    }

    // Completes v_0 = 1 - 2 sum(v_k) so the mass identity is algebraic,
    // not a rounding accident.
    fn from_off_center(off: impl Iterator<Item = f64>) -> Result<Self> {
        let mut half = vec![0.0];
        half.extend(off);
        half[0] = 1.0 - 2.0 * half[1..].iter().sum::<f64>();
        Ok(Self { half })
    }

    pub fn half_width(&self) -> usize {
        self.half.len() - 1
    }

    /// Coefficient at signed offset `k`; zero beyond the half-width.
    pub fn coefficient(&self, k: i64) -> f64 {
        self.half.get(k.unsigned_abs() as usize).copied().unwrap_or(0.0)
    }

    pub fn half(&self) -> &[f64] {
        &self.half
    }

    /// Full centered tap vector of length 2K+1.
    pub fn full(&self) -> Vec<f64> {
        let k_max = self.half_width();
        let mut full = Vec::with_capacity(2 * k_max + 1);
        for k in (1..=k_max).rev() {
            full.push(self.half[k]);
        }
        full.extend_from_slice(&self.half);
        full
    }

    fn has_smoothing(&self) -> bool {
        self.half[1..].iter().any(|&v| v != 0.0)
    }

    /// Spectrum of the kernel at signal length `n`, by the closed cosine
    /// form V_j = 1 + sum_k (-2 v_k)(1 - cos(2 pi k j / n)).
    ///
    /// Every off-center term is nonnegative, so V_j >= 1 holds even in
    /// floating point, with V_0 = 1 exactly.
    pub fn spectrum(&self, n: usize) -> Result<Vec<f64>> {
        let len = 2 * self.half_width() + 1;
        if len > n {
            return Err(SmoothError::WindowTooWide { len, n });
        }
        // 1 - cos(2 pi m / n) evaluated as 2 sin^2(pi m / n): exact zero at
        // m = 0 and no cancellation near it.
        let table: Vec<f64> = (0..n)
            .map(|m| {
                let s = (std::f64::consts::PI * m as f64 / n as f64).sin();
                2.0 * s * s
            })
            .collect();
        let mut v = vec![1.0; n];
        for (k, &vk) in self.half.iter().enumerate().skip(1) {
            let c = -2.0 * vk;
            if c == 0.0 {
                continue;
            }
            for (j, bin) in v.iter_mut().enumerate() {
                *bin += c * table[(k * j) % n];
            }
        }
        Ok(v)
    }

    /// Spectrum-and-window analysis at signal length `n`: the spectrum V,
    /// the effective moving-mean window u (inverse transform of 1/V), and
    /// the characteristic root that governs u's tail decay.
    pub fn effective_window(&self, n: usize) -> Result<SpectrumReport> {
        let v = self.spectrum(n)?;
        if !self.has_smoothing() {
            let mut u = vec![0.0; n];
            u[0] = 1.0;
            return Ok(SpectrumReport::checked(v, u, None));
        }
        let r_star = self.characteristic_root()?;
        let u = if self.half_width() == 1 {
            // Two-tap recurrence: the inverse transform of 1/V is exactly a
            // periodized two-sided geometric in the characteristic root.
            // Evaluating it directly keeps the far tail accurate (the FFT
            // path drowns amplitudes below ~1e-16 in rounding noise).
            geometric_window(r_star, n)
        } else {
            let spectrum_inv: Vec<Complex64> =
                v.iter().map(|&bin| Complex64::new(1.0 / bin, 0.0)).collect();
            let (u, max_imag) = fft::inverse_real(spectrum_inv);
            let scale = u.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
            assert!(
                max_imag <= IMAG_RESIDUE_TOL * scale,
                "imaginary residue {max_imag:e} exceeds tolerance at scale {scale:e}"
            );
            u
        };
        Ok(SpectrumReport::checked(v, u, Some(r_star)))
    }

    /// Unique root in (0,1) of the characteristic polynomial
    /// Lambda(r) = v_0 + sum_{k>=1} v_k (r^k + r^-k), by bisection.
    ///
    /// Lambda diverges to minus infinity at 0+, equals the kernel mass 1 at
    /// r = 1, and is strictly increasing in between, so the bracket
    /// [1e-12, 1 - 1e-12] always straddles the root.
    pub fn characteristic_root(&self) -> Result<f64> {
        if !self.has_smoothing() {
            return Err(SmoothError::NoSmoothingTerm);
        }
        let (mut lo, mut hi) = (1e-12, 1.0 - 1e-12);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.lambda(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Characteristic polynomial value; used by the root solver and tests.
    pub fn lambda(&self, r: f64) -> f64 {
        let mut acc = self.half[0];
        for (k, &vk) in self.half.iter().enumerate().skip(1) {
            if vk == 0.0 {
                // Skipped so a saturated r^-k cannot turn into 0 * inf.
                continue;
            }
            let k = k as i32;
            acc += vk * (r.powi(k) + r.powi(-k));
        }
        acc
    }
}

/// Exact effective window of a half-width-1 kernel: the periodization of
/// c * r^|j| over the circle, normalized to unit mass.
fn geometric_window(r: f64, n: usize) -> Vec<f64> {
    let mut powers = Vec::with_capacity(n + 1);
    let mut p = 1.0;
    for _ in 0..=n {
        powers.push(p);
        p *= r;
    }
    let norm = (1.0 - r) / ((1.0 + r) * (1.0 - powers[n]));
    (0..n).map(|j| norm * (powers[j] + powers[n - j])).collect()
}

/// Spectrum analysis of one kernel at one signal length.
///
/// `v` holds the per-bin spectrum values (all at least 1), `u` the
/// effective moving-mean window (nonnegative, unimodal about 0, unit mass),
/// and `r_star` the tail decay ratio, absent for kernels without a
/// smoothing term.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    #[serde(rename = "V")]
    pub v: Vec<f64>,
    pub u: Vec<f64>,
    pub r_star: Option<f64>,
}

impl SpectrumReport {
    /// Slack for the nonnegativity and unimodality checks on u.
    const SHAPE_SLACK: f64 = 1e-12;

    fn checked(v: Vec<f64>, u: Vec<f64>, r_star: Option<f64>) -> Self {
        assert!(
            v.iter().all(|&bin| bin >= 1.0),
            "spectrum bin below 1, kernel construction is broken"
        );
        let mass: f64 = u.iter().sum();
        assert!(
            (mass - 1.0).abs() <= 1e-9,
            "effective window mass {mass} strays from 1"
        );
        let n = u.len();
        for j in 0..n.saturating_sub(1) {
            assert!(
                u[j] >= -Self::SHAPE_SLACK,
                "effective window negative at {j}: {:e}",
                u[j]
            );
            if j < n / 2 {
                assert!(
                    u[j + 1] <= u[j] + Self::SHAPE_SLACK,
                    "effective window not unimodal near {j}"
                );
            } else {
                assert!(
                    u[j + 1] >= u[j] - Self::SHAPE_SLACK,
                    "effective window not unimodal near {j}"
                );
            }
        }
        Self { v, u, r_star }
    }
}

/// Circular convolution `out_n = sum_k taps_k signal_{n+k}` for a centered
/// odd-length tap vector.
///
/// Small tap counts use exact direct summation; larger ones go through the
/// FFT (the two agree to 1e-10 relative).
///
/// Panics if `taps` has even length, since there is no center to anchor.
pub fn circular_convolve(signal: &Signal, taps: &[f64]) -> Result<Signal> {
    assert!(taps.len() % 2 == 1, "centered taps must have odd length");
    let n = signal.len();
    if taps.len() > n {
        return Err(SmoothError::WindowTooWide { len: taps.len(), n });
    }
    let k_max = (taps.len() / 2) as i64;
    let out = if taps.len() <= DIRECT_CONV_MAX_TAPS {
        let values = signal.values();
        (0..n as i64)
            .map(|j| {
                let mut acc = 0.0;
                for k in -k_max..=k_max {
                    acc += taps[(k + k_max) as usize]
                        * values[(j + k).rem_euclid(n as i64) as usize];
                }
                acc
            })
            .collect()
    } else {
        // Correlation theorem: out = IDFT(conj(TAPS) * SIGNAL) once the taps
        // are laid out circularly around index 0.
        let mut padded = vec![0.0; n];
        for k in -k_max..=k_max {
            padded[k.rem_euclid(n as i64) as usize] += taps[(k + k_max) as usize];
        }
        let taps_hat = fft::forward(&padded);
        let mut spectrum = fft::forward(signal.values());
        for (bin, t) in spectrum.iter_mut().zip(&taps_hat) {
            *bin *= t.conj();
        }
        let (out, max_imag) = fft::inverse_real(spectrum);
        let scale = out.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        assert!(
            max_imag <= IMAG_RESIDUE_TOL * scale,
            "imaginary residue {max_imag:e} exceeds tolerance at scale {scale:e}"
        );
        out
    };
    Signal::new(out)
}

/// Solves the stationarity system: the unique x whose circular convolution
/// with the kernel reproduces `y_bar`, computed as the inverse transform of
/// the signal spectrum divided bin-wise by the kernel spectrum.
pub fn deconvolve(y_bar: &Signal, kernel: &ARKernel) -> Result<Signal> {
    let v = kernel.spectrum(y_bar.len())?;
    let mut spectrum = fft::forward(y_bar.values());
    for (bin, &vj) in spectrum.iter_mut().zip(&v) {
        *bin /= vj;
    }
    let (x, max_imag) = fft::inverse_real(spectrum);
    let scale = x.iter().fold(0.0_f64, |acc, xv| acc.max(xv.abs()));
    assert!(
        max_imag <= IMAG_RESIDUE_TOL * scale,
        "imaginary residue {max_imag:e} exceeds tolerance at scale {scale:e}"
    );
    Signal::new(x)
}
