//! Weight design: searching the tapered polytope for good weight pairs.
//!
//! The search space is the set of valid (alpha, beta) pairs with fixed
//! masses A and B = 1 - A. The minimum-J pair over that polytope sits at a
//! vertex because J is concave in the weights, and the vertices are the
//! uniform windows: a uniform tapered window of half-width m_p for alpha
//! crossed with a uniform off-center window of half-width m_q for beta.
//! The joint search tries all L^2 pairs, the tied search the L diagonal
//! pairs, and the cascade heuristic replaces the joint problem with two
//! linear stages: pick the alpha window by data scatter alone, then apply
//! the narrowest smoothing kernel.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, SmoothError};
use crate::signal::Signal;
use crate::smoother::{decompose, objective_h};
use crate::spectral::{circular_convolve, deconvolve, ARKernel};
use crate::window::{OffCenterWindow, TaperedWindow, Theta};

/// Relative slack when deciding that two candidate objectives tie. Exact
/// float ties are unreachable for generic inputs, so the width tie-break
/// applies within this band of the minimum.
const TIE_TOLERANCE: f64 = 1e-12;

/// Which vertex family a search walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignMode {
    /// All L^2 pairs of half-widths.
    Joint,
    /// The L diagonal pairs with m_p = m_q.
    Tied,
    /// Two-stage heuristic: scatter-optimal alpha window, fixed length-3
    /// smoothing kernel.
    Cascade,
}

/// Search parameters: the half-width budget, the data mass, and the mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignConfig {
    pub max_half_width: usize,
    pub a_mass: f64,
    pub mode: DesignMode,
}

impl DesignConfig {
    /// Validates 1 <= max_half_width and 0 < a_mass <= 1.
    pub fn new(max_half_width: usize, a_mass: f64, mode: DesignMode) -> Result<Self> {
        if max_half_width == 0 {
            return Err(SmoothError::ZeroWidth);
        }
        if !a_mass.is_finite() {
            return Err(SmoothError::NonFinite { index: 0 });
        }
        if a_mass <= 0.0 {
            return Err(SmoothError::ZeroDataMass);
        }
        if a_mass > 1.0 {
            // The complementary smoothness mass B = 1 - A would be negative.
            return Err(SmoothError::NegativeWeight { offset: 1 });
        }
        Ok(Self {
            max_half_width,
            a_mass,
            mode,
        })
    }
}

/// Half-width budget heuristic when the caller gives none:
/// max(1, floor(log2 n)). Keeps the joint search quasilinear in n.
pub fn default_half_width(n: usize) -> usize {
    debug_assert!(n >= 1);
    let log = (usize::BITS - 1 - n.leading_zeros()) as usize;
    log.max(1)
}

/// One evaluated vertex: the two half-widths and the objective there.
/// For joint and tied searches the objective is J; for the cascade stage-1
/// scan it is the data scatter H0 under the unit-mass alpha window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Candidate {
    pub p_half_width: usize,
    pub q_half_width: usize,
    #[serde(rename = "J")]
    pub j: f64,
}

/// Outcome of a design search: the winning weights, every candidate that
/// was evaluated, and timing. `elapsed` stays out of the serialized form so
/// reports from identical searches are byte-identical.
#[derive(Debug, Clone, Serialize)]
pub struct DesignReport {
    pub mode: DesignMode,
    pub a_mass: f64,
    pub best_theta: Theta,
    #[serde(rename = "best_J")]
    pub best_j: f64,
    pub candidates: Vec<Candidate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage2_kernel: Option<Vec<f64>>,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// The objective a search minimizes: the value of the generalized objective
/// at its own minimizer, computed through the orthogonal split as
/// H0 + H(x*). Concave and positively homogeneous in the weight pair.
pub fn evaluate_j(y: &Signal, theta: &Theta) -> Result<f64> {
    let d = decompose(y, theta)?;
    let kernel = ARKernel::from_theta(theta)?;
    let x = deconvolve(&d.y_bar, &kernel)?;
    Ok(d.h0 + objective_h(&x, &d.y_bar, theta)?)
}

/// Lists the vertex half-width pairs a mode would visit, in evaluation
/// order: joint is the row-major L x L grid, tied the diagonal, cascade the
/// stage-1 column (m, 1) since its second stage is pinned to half-width 1.
pub fn enumerate_vertices(l: usize, n: usize, mode: DesignMode) -> Result<Vec<(usize, usize)>> {
    if l == 0 {
        return Err(SmoothError::ZeroWidth);
    }
    if 2 * l + 1 > n {
        return Err(SmoothError::WindowTooWide { len: 2 * l + 1, n });
    }
    let pairs = match mode {
        DesignMode::Joint => (1..=l)
            .flat_map(|mp| (1..=l).map(move |mq| (mp, mq)))
            .collect(),
        DesignMode::Tied => (1..=l).map(|m| (m, m)).collect(),
        DesignMode::Cascade => (1..=l).map(|m| (m, 1)).collect(),
    };
    Ok(pairs)
}

fn vertex_theta(a: f64, b: f64, m_p: usize, m_q: usize, n: usize) -> Result<Theta> {
    let p = TaperedWindow::uniform(m_p, n)?;
    let q = OffCenterWindow::uniform(m_q, n)?;
    Theta::from_masses(a, &p, b, &q)
}

/// Picks the winner from a fully collected candidate list: smallest J, with
/// ties (within [`TIE_TOLERANCE`], relative) going to the smallest total
/// width and then the smallest alpha width. Order-independent.
fn select_best(candidates: &[Candidate]) -> Candidate {
    let mut min_j = f64::INFINITY;
    for c in candidates {
        min_j = min_j.min(c.j);
    }
    let cut = min_j + TIE_TOLERANCE * (1.0 + min_j.abs());
    *candidates
        .iter()
        .filter(|c| c.j <= cut)
        .min_by_key(|c| (c.p_half_width + c.q_half_width, c.p_half_width))
        .expect("vertex list is never empty")
}

/// Evaluates J at every vertex of the configured mode and returns the
/// argmin. Joint and tied searches evaluate candidates in parallel; the
/// result does not depend on thread count because the candidate list is
/// collected in enumeration order before the single-threaded reduction.
pub fn design_search(y: &Signal, cfg: &DesignConfig) -> Result<DesignReport> {
    if cfg.mode == DesignMode::Cascade {
        let (_, _, report) = cascade_design(y, cfg.max_half_width)?;
        return Ok(report);
    }
    let start = Instant::now();
    let n = y.len();
    let vertices = enumerate_vertices(cfg.max_half_width, n, cfg.mode)?;
    let (a, b) = (cfg.a_mass, 1.0 - cfg.a_mass);
    let candidates = vertices
        .par_iter()
        .map(|&(m_p, m_q)| {
            let theta = vertex_theta(a, b, m_p, m_q, n)?;
            Ok(Candidate {
                p_half_width: m_p,
                q_half_width: m_q,
                j: evaluate_j(y, &theta)?,
            })
        })
        .collect::<Result<Vec<Candidate>>>()?;
    let best = select_best(&candidates);
    let best_theta = vertex_theta(a, b, best.p_half_width, best.q_half_width, n)?;
    Ok(DesignReport {
        mode: cfg.mode,
        a_mass: cfg.a_mass,
        best_theta,
        best_j: best.j,
        candidates,
        stage2_kernel: None,
        elapsed: start.elapsed(),
    })
}

/// Data scatter under each uniform unit-mass window of half-width 1..=l,
/// in O(l*n) total via prefix sums of the mean-centered signal. Centering
/// keeps the squared sums from cancelling when the signal rides on a large
/// constant level.
fn uniform_scatter_scan(y: &Signal, l: usize) -> Vec<f64> {
    let n = y.len();
    let mu = y.mean();
    // Tripled prefix arrays so every window [j+n-m, j+n+m] indexes directly.
    let mut p1 = vec![0.0; 3 * n + 1];
    let mut p2 = vec![0.0; 3 * n + 1];
    for t in 0..3 * n {
        let z = y.values()[t % n] - mu;
        p1[t + 1] = p1[t] + z;
        p2[t + 1] = p2[t] + z * z;
    }
    (1..=l)
        .map(|m| {
            let width = (2 * m + 1) as f64;
            let mut h0 = 0.0;
            for j in 0..n {
                let lo = j + n - m;
                let hi = j + n + m + 1;
                let s1 = p1[hi] - p1[lo];
                let s2 = p2[hi] - p2[lo];
                // Scatter of one window around its own mean.
                h0 += s2 / width - (s1 / width) * (s1 / width);
            }
            h0
        })
        .collect()
}

/// Two-stage heuristic: stage 1 picks the uniform alpha window whose data
/// scatter H0 is smallest (ties to the narrower window), stage 2 smooths
/// the resulting local mean with the fixed narrowest kernel v = (-2, 5, -2),
/// the kernel of the window w = (1/3, 1/3, 1/3). Runs in O(l*n + n log n).
///
/// The report's candidates carry the stage-1 scatter values as their
/// objective column, and `best_j` is the smallest of them; the recorded
/// weights pair the winning window (mass 1/3) with the stage-2 smoothing
/// weights (mass 2/3), so `ar_smooth` under `best_theta` reproduces x.
pub fn cascade_design(y: &Signal, l: usize) -> Result<(TaperedWindow, Signal, DesignReport)> {
    let start = Instant::now();
    let n = y.len();
    if l == 0 {
        return Err(SmoothError::ZeroWidth);
    }
    if 2 * l + 1 > n {
        return Err(SmoothError::WindowTooWide { len: 2 * l + 1, n });
    }
    let scatters = uniform_scatter_scan(y, l);
    let candidates: Vec<Candidate> = scatters
        .iter()
        .enumerate()
        .map(|(i, &h0)| Candidate {
            p_half_width: i + 1,
            q_half_width: 1,
            j: h0,
        })
        .collect();
    let best = select_best(&candidates);

    let p = TaperedWindow::uniform(best.p_half_width, n)?;
    let y_bar = circular_convolve(y, &p.full())?;
    let q = OffCenterWindow::uniform(1, n)?;
    let theta = Theta::from_masses(1.0 / 3.0, &p, 2.0 / 3.0, &q)?;
    let kernel = ARKernel::from_theta(&theta)?;
    let x = deconvolve(&y_bar, &kernel)?;

    let report = DesignReport {
        mode: DesignMode::Cascade,
        a_mass: theta.a_mass(),
        best_theta: theta,
        best_j: best.j,
        candidates,
        stage2_kernel: Some(kernel.full()),
        elapsed: start.elapsed(),
    };
    Ok((p, x, report))
}
