use crate::error::{Result, SmoothError};

/// A periodic real-valued signal.
///
/// Indexing is circular: `get(n)` reads sample `n mod N` for any integer
/// `n`, so windows hanging off either end wrap around. Every stored sample
/// is finite and there are at least [`Signal::MIN_LEN`] of them, which keeps
/// the three-tap smoothing kernels well defined.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    values: Vec<f64>,
}

impl Signal {
    /// Shortest admissible signal.
    pub const MIN_LEN: usize = 3;

    /// Validates and wraps a sample vector.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < Self::MIN_LEN {
            return Err(SmoothError::TooShort {
                len: values.len(),
                min: Self::MIN_LEN,
            });
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(SmoothError::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Never true, construction requires at least three samples.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sample at circular position `n`, valid for any integer.
    pub fn get(&self, n: i64) -> f64 {
        let len = self.values.len() as i64;
        self.values[n.rem_euclid(len) as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Largest absolute sample.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}
