//! Auto-regressive moving-mean smoothing for circular signals.
//!
//! The classic moving mean minimizes a per-sample fit against raw
//! neighbors. Replacing the off-center data terms with terms that couple
//! neighboring *outputs* turns the window into an auto-regressive filter
//! whose minimizer still has a closed form: convolve the input with the
//! normalized data window, then deconvolve by a short symmetric kernel in
//! the frequency domain. The kernel's spectrum never drops below one, so
//! the deconvolution is unconditionally stable, and the equivalent
//! input-to-output window has exponentially decaying tails whose rate is
//! the kernel's characteristic root.
//!
//! The crate provides:
//!
//! - [`Signal`], [`TaperedWindow`], [`OffCenterWindow`], and [`Theta`]:
//!   validated circular series and weight vectors;
//! - [`ar_smooth`] and friends in [`smoother`]: the objectives and the
//!   closed-form minimizer, O(N log N);
//! - [`ARKernel`] in [`spectral`]: kernels, spectra, effective windows,
//!   and characteristic roots;
//! - [`design`]: vertex searches for good weights under a width budget,
//!   including the two-stage cascade heuristic;
//! - [`verify`]: slow, independent reference implementations (dense
//!   circulant solve, naive sums, finite differences) for cross-checking;
//! - [`io`]: signal CSV and weights JSON ingestion and emission.
//!
//! Objective values are raw sums over all samples, with no 1/N factor;
//! comparing them across different signal lengths requires scaling by
//! hand.
//!
//! ```
//! use arsmooth::{ar_smooth, Signal, Theta};
//!
//! let y = Signal::new(vec![3.0, 0.0, 0.0]).unwrap();
//! // Data mass 1/3 at the center, smoothness mass 1/3 per neighbor.
//! let theta = Theta::new(vec![1.0 / 3.0], vec![0.0, 1.0 / 3.0]).unwrap();
//! let x = ar_smooth(&y, &theta).unwrap();
//! assert!((x.values()[0] - 9.0 / 7.0).abs() < 1e-12);
//! ```

pub mod design;
pub mod error;
mod fft;
pub mod io;
pub mod signal;
pub mod smoother;
pub mod spectral;
pub mod verify;
pub mod window;

pub use design::{
    cascade_design, default_half_width, design_search, enumerate_vertices, evaluate_j, Candidate,
    DesignConfig, DesignMode, DesignReport,
};
pub use error::{Result, SmoothError};
pub use signal::Signal;
pub use smoother::{
    ar_smooth, decompose, moving_mean, objective_cross, objective_f, objective_g, objective_h,
    stationarity_residual, Decomposition,
};
pub use spectral::{circular_convolve, deconvolve, ARKernel, SpectrumReport};
pub use verify::{solve_dense, MAX_ORACLE_LEN};
pub use window::{OffCenterWindow, TaperedWindow, Theta};
