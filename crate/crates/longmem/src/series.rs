//! The core sample container.

use crate::error::{Error, Result};

/// An ordered run of real-valued samples plus a free-form provenance label.
///
/// Invariant: every sample is finite. The validated constructor enforces it;
/// generators that are finite by construction use the internal unchecked path.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    label: String,
}

impl TimeSeries {
    /// Builds a series, rejecting non-finite samples with their index.
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteSample { index, value });
            }
        }
        Ok(Self {
            values,
            label: label.into(),
        })
    }

    /// Internal constructor for values known to be finite by construction.
    pub(crate) fn from_finite(label: impl Into<String>, values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self {
            values,
            label: label.into(),
        }
    }

    /// Number of samples.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// The samples in order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Provenance tag (generator name and parameters, input path, ...).
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Arithmetic mean of the samples (0 for an empty series).
    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Copy of the series with its sample mean subtracted.
    pub fn demeaned(&self) -> TimeSeries {
        let mean = self.mean();
        TimeSeries {
            values: self.values.iter().map(|v| v - mean).collect(),
            label: format!("{} (demeaned)", self.label),
        }
    }

    /// Consumes the series, returning the raw samples.
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}
