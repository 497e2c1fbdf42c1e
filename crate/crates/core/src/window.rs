use crate::error::{Result, SmoothError};

/// Raw weight sums farther than this from 1 are rejected instead of
/// renormalized.
pub const NORMALIZATION_HARD_TOLERANCE: f64 = 1e-6;

/// Mirrored weight pairs may differ by up to this much (scaled by the
/// larger magnitude and 1) before ingestion refuses them.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Validates one stored half: finite, nonnegative, non-increasing away from
/// the center. `first_tapered` is the index where the tapering chain starts
/// (1 for off-center vectors whose slot 0 is structurally zero).
fn check_half(half: &[f64], first_tapered: usize) -> Result<()> {
    for (k, &w) in half.iter().enumerate() {
        if !w.is_finite() {
            return Err(SmoothError::NonFinite { index: k });
        }
        if w < 0.0 {
            return Err(SmoothError::NegativeWeight { offset: k as i64 });
        }
    }
    for k in first_tapered..half.len().saturating_sub(1) {
        if half[k] < half[k + 1] {
            return Err(SmoothError::NotTapered {
                offset: (k + 1) as i64,
            });
        }
    }
    Ok(())
}

/// Folds a full centered vector of odd length 2K+1 into its half
/// representation `[w_0, w_1, .., w_K]`, averaging mirrored pairs and
/// rejecting asymmetry beyond [`SYMMETRY_TOLERANCE`].
fn fold_symmetric(full: &[f64]) -> Result<Vec<f64>> {
    if full.len() % 2 == 0 {
        return Err(SmoothError::MalformedWeights(format!(
            "centered weight arrays must have odd length, got {}",
            full.len()
        )));
    }
    let center = full.len() / 2;
    let mut half = Vec::with_capacity(center + 1);
    half.push(full[center]);
    for k in 1..=center {
        let right = full[center + k];
        let left = full[center - k];
        let scale = 1.0_f64.max(right.abs()).max(left.abs());
        if (right - left).abs() > SYMMETRY_TOLERANCE * scale {
            return Err(SmoothError::Asymmetric { offset: k as i64 });
        }
        half.push(0.5 * (right + left));
    }
    Ok(half)
}

fn expand_full(half: &[f64]) -> Vec<f64> {
    let k_max = half.len() - 1;
    let mut full = Vec::with_capacity(2 * k_max + 1);
    for k in (1..=k_max).rev() {
        full.push(half[k]);
    }
    full.extend_from_slice(half);
    full
}

/// Symmetric probability weights, non-increasing away from the center.
///
/// Stored as one half `[w_0, .., w_K]` so symmetry holds exactly. The full
/// window always sums to 1: raw sums within [`NORMALIZATION_HARD_TOLERANCE`]
/// of 1 are renormalized on construction, anything worse is an error.
#[derive(Debug, Clone, PartialEq)]
pub struct TaperedWindow {
    half: Vec<f64>,
}

impl TaperedWindow {
    /// Builds a window from its half `[w_0, w_1, .., w_K]`.
    pub fn new(half: Vec<f64>) -> Result<Self> {
        if half.is_empty() {
            return Err(SmoothError::NotNormalized { sum: 0.0 });
        }
        check_half(&half, 0)?;
        let sum = full_sum(&half, false);
        let half = renormalize(half, sum)?;
        Ok(Self { half })
    }

    /// Builds a window from a full centered array of odd length.
    pub fn from_full(full: &[f64]) -> Result<Self> {
        Self::new(fold_symmetric(full)?)
    }

    /// Uniform weights 1/(2m+1) on offsets -m..m. The window must fit the
    /// signal: 2m+1 <= n.
    pub fn uniform(m: usize, n: usize) -> Result<Self> {
        let len = 2 * m + 1;
        if len > n {
            return Err(SmoothError::WindowTooWide { len, n });
        }
        Ok(Self {
            half: vec![1.0 / len as f64; m + 1],
        })
    }

    pub fn half_width(&self) -> usize {
        self.half.len() - 1
    }

    /// Center weight w_0.
    pub fn center(&self) -> f64 {
        self.half[0]
    }

    /// Weight at signed offset `k`; zero beyond the half-width.
    pub fn weight(&self, k: i64) -> f64 {
        self.half.get(k.unsigned_abs() as usize).copied().unwrap_or(0.0)
    }

    pub fn half(&self) -> &[f64] {
        &self.half
    }

    /// Full centered tap vector of length 2K+1.
    pub fn full(&self) -> Vec<f64> {
        expand_full(&self.half)
    }
}

fn full_sum(half: &[f64], off_center: bool) -> f64 {
    let tail: f64 = half[1..].iter().sum();
    if off_center {
        2.0 * tail
    } else {
        half[0] + 2.0 * tail
    }
}

fn renormalize(mut half: Vec<f64>, sum: f64) -> Result<Vec<f64>> {
    if (sum - 1.0).abs() > NORMALIZATION_HARD_TOLERANCE {
        return Err(SmoothError::NotNormalized { sum });
    }
    for w in &mut half {
        *w /= sum;
    }
    Ok(half)
}

/// Symmetric probability weights over the offsets k != 0, zero at the
/// center, non-increasing in |k|. This is the shape of the smoothness
/// vertex q: uniform mass on a punctured band.
#[derive(Debug, Clone, PartialEq)]
pub struct OffCenterWindow {
    half: Vec<f64>,
}

impl OffCenterWindow {
    /// Builds from a half `[q_0, q_1, .., q_K]`; slot 0 must be zero (a
    /// value at or below the symmetry tolerance is forced to zero).
    pub fn new(mut half: Vec<f64>) -> Result<Self> {
        if half.len() < 2 {
            return Err(SmoothError::ZeroWidth);
        }
        check_half(&half, 1)?;
        if half[0] > SYMMETRY_TOLERANCE {
            return Err(SmoothError::CenterSmoothnessWeight { value: half[0] });
        }
        half[0] = 0.0;
        let sum = full_sum(&half, true);
        let mut half = renormalize(half, sum)?;
        half[0] = 0.0;
        Ok(Self { half })
    }

    pub fn from_full(full: &[f64]) -> Result<Self> {
        Self::new(fold_symmetric(full)?)
    }

    /// Uniform weights 1/(2m) on offsets {-m..-1, 1..m}, zero at 0.
    pub fn uniform(m: usize, n: usize) -> Result<Self> {
        if m == 0 {
            return Err(SmoothError::ZeroWidth);
        }
        let len = 2 * m + 1;
        if len > n {
            return Err(SmoothError::WindowTooWide { len, n });
        }
        let mut half = vec![1.0 / (2 * m) as f64; m + 1];
        half[0] = 0.0;
        Ok(Self { half })
    }

    pub fn half_width(&self) -> usize {
        self.half.len() - 1
    }

    pub fn half(&self) -> &[f64] {
        &self.half
    }

    pub fn full(&self) -> Vec<f64> {
        expand_full(&self.half)
    }
}

/// The weight pair of the generalized objective: data-fidelity weights
/// alpha and smoothness weights beta, both symmetric, nonnegative, and
/// tapered, with beta_0 structurally zero.
///
/// The masses A = sum(alpha) and B = sum(beta) are free; design routines
/// work on the simplex A + B = 1, but nothing here requires it (the
/// objective is linear in the pair, so scaling is meaningful).
#[derive(Debug, Clone, PartialEq)]
pub struct Theta {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl Theta {
    /// Builds from half representations `[a_0, .., a_Ka]` and
    /// `[b_0, .., b_Kb]` (b_0 must be zero, tolerance as in
    /// [`OffCenterWindow::new`]).
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(SmoothError::AllZeroTheta);
        }
        check_half(&alpha, 0)?;
        let mut beta = if beta.is_empty() { vec![0.0] } else { beta };
        check_half(&beta, 1)?;
        if beta[0] > SYMMETRY_TOLERANCE {
            return Err(SmoothError::CenterSmoothnessWeight { value: beta[0] });
        }
        beta[0] = 0.0;
        Ok(Self { alpha, beta })
    }

    /// Builds from full centered arrays, the shape of the weights JSON.
    pub fn from_full(alpha: &[f64], beta: &[f64]) -> Result<Self> {
        Self::new(fold_symmetric(alpha)?, fold_symmetric(beta)?)
    }

    /// Spreads mass `a` over the shape of `p` and mass `b` over the shape
    /// of `q`.
    pub fn from_masses(a: f64, p: &TaperedWindow, b: f64, q: &OffCenterWindow) -> Result<Self> {
        for (mass, offset) in [(a, 0), (b, 1)] {
            if !mass.is_finite() {
                return Err(SmoothError::NonFinite { index: 0 });
            }
            if mass < 0.0 {
                return Err(SmoothError::NegativeWeight { offset });
            }
        }
        let alpha = p.half().iter().map(|w| a * w).collect();
        let beta = q.half().iter().map(|w| b * w).collect();
        Self::new(alpha, beta)
    }

    /// Data-fidelity mass A.
    pub fn a_mass(&self) -> f64 {
        full_sum(&self.alpha, false)
    }

    /// Smoothness mass B.
    pub fn b_mass(&self) -> f64 {
        full_sum(&self.beta, true)
    }

    pub fn alpha_half(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta_half(&self) -> &[f64] {
        &self.beta
    }

    pub fn alpha_full(&self) -> Vec<f64> {
        expand_full(&self.alpha)
    }

    pub fn beta_full(&self) -> Vec<f64> {
        expand_full(&self.beta)
    }

    /// Widest half-width across both weight vectors.
    pub fn half_width(&self) -> usize {
        (self.alpha.len() - 1).max(self.beta.len() - 1)
    }

    /// The normalized data window p = alpha / A.
    pub fn normalized_p(&self) -> Result<TaperedWindow> {
        let a = self.a_mass();
        if a <= 0.0 {
            return Err(SmoothError::ZeroDataMass);
        }
        TaperedWindow::new(self.alpha.iter().map(|w| w / a).collect())
    }

    /// Collapses the pair to the equivalent single window:
    /// w_0 = A/(A+B), w_k = beta_k/(A+B) for k != 0.
    ///
    /// Fails with [`SmoothError::AllZeroTheta`] when both masses vanish,
    /// and propagates tapering violations when beta_1 exceeds A (the
    /// resulting vector would no longer be a tapered window).
    pub fn window(&self) -> Result<TaperedWindow> {
        let (a, b) = (self.a_mass(), self.b_mass());
        let total = a + b;
        if total <= 0.0 {
            return Err(SmoothError::AllZeroTheta);
        }
        let mut half = vec![a / total];
        half.extend(self.beta[1..].iter().map(|w| w / total));
        TaperedWindow::new(half)
    }

    /// Scales both weight vectors by a positive factor.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(SmoothError::NegativeWeight { offset: 0 });
        }
        Self::new(
            self.alpha.iter().map(|w| factor * w).collect(),
            self.beta.iter().map(|w| factor * w).collect(),
        )
    }
}

/// Serializes as the full centered arrays, so a report's weights can be fed
/// straight back in as a weights file.
impl serde::Serialize for Theta {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Theta", 2)?;
        s.serialize_field("alpha", &self.alpha_full())?;
        s.serialize_field("beta", &self.beta_full())?;
        s.end()
    }
}
