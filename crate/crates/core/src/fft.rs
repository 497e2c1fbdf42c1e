//! Thin wrapper around rustfft: plan caching plus real-in/real-out
//! conventions for the transforms used by the solver.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

type PlanKey = (usize, bool);
type PlanMap = HashMap<PlanKey, Arc<dyn Fft<f64>>>;

// Plans are Send + Sync and reusable; the lock guards only map access, the
// transforms themselves run outside it.
fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<PlanMap>> = OnceLock::new();
    let plans = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = plans.lock().unwrap();
    map.entry((len, inverse))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(len)
            } else {
                planner.plan_fft_forward(len)
            }
        })
        .clone()
}

/// Unnormalized forward DFT of a real sequence.
pub(crate) fn forward(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    plan(buf.len(), false).process(&mut buf);
    buf
}

/// Inverse DFT scaled by 1/N, split into real parts and the largest
/// absolute imaginary residue (which callers assert is negligible).
pub(crate) fn inverse_real(mut spectrum: Vec<Complex64>) -> (Vec<f64>, f64) {
    let n = spectrum.len() as f64;
    plan(spectrum.len(), true).process(&mut spectrum);
    let mut max_imag = 0.0_f64;
    let real = spectrum
        .iter()
        .map(|c| {
            max_imag = max_imag.max((c.im / n).abs());
            c.re / n
        })
        .collect();
    (real, max_imag)
}
