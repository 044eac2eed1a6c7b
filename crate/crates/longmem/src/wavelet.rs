//! Finest-scale Haar discrete wavelet transform.
//!
//! For a dyadic series of length `n = 2^J` the detail coefficients at the
//! finest scale `J` with the Haar wavelet are scaled circular first
//! differences:
//!
//! ```text
//! w_{Jq} = 2^{J/2} (y_q − y_{q+1}),   q = 0..n−1,   y_n := y_0.
//! ```
//!
//! The periodic boundary keeps the index set at exactly `2^J` coefficients
//! and preserves the MA(1) covariance structure of differenced white noise.
//! Only this finest scale is implemented — the estimators in this crate never
//! touch coarser scales.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Wavelet family. Only Haar is implemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveletKind {
    Haar,
}

/// Boundary extension rule applied at the right edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryRule {
    Periodic,
}

/// Identity of the transform: wavelet family, its vanishing moments, and the
/// boundary rule. Haar has exactly one vanishing moment; the constructor
/// keeps that pairing an invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveletSpec {
    pub wavelet: WaveletKind,
    pub vanishing_moments: u32,
    pub boundary: BoundaryRule,
}

impl WaveletSpec {
    pub fn haar() -> Self {
        WaveletSpec {
            wavelet: WaveletKind::Haar,
            vanishing_moments: 1,
            boundary: BoundaryRule::Periodic,
        }
    }
}

impl Default for WaveletSpec {
    fn default() -> Self {
        WaveletSpec::haar()
    }
}

/// Detail coefficients at a single scale.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletCoefficients {
    scale_j: u32,
    coeffs: Vec<f64>,
    source_n: usize,
    spec: WaveletSpec,
}

impl WaveletCoefficients {
    /// Wraps raw coefficients, enforcing `len == 2^scale_j`. Useful for tests
    /// and tools that read coefficients back from disk.
    pub fn from_parts(
        scale_j: u32,
        coeffs: Vec<f64>,
        source_n: usize,
        spec: WaveletSpec,
    ) -> Result<Self> {
        let expected = 1usize
            .checked_shl(scale_j)
            .ok_or_else(|| Error::invalid("scale_j", format!("scale {scale_j} overflows usize")))?;
        if coeffs.len() != expected {
            return Err(Error::invalid(
                "coeffs",
                format!(
                    "scale {scale_j} requires {expected} coefficients, got {}",
                    coeffs.len()
                ),
            ));
        }
        Ok(WaveletCoefficients {
            scale_j,
            coeffs,
            source_n,
            spec,
        })
    }

    pub fn scale_j(&self) -> u32 {
        self.scale_j
    }

    /// The coefficients `w_{Jq}`, `q = 0..2^J−1`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Length of the series the coefficients came from.
    pub fn source_n(&self) -> usize {
        self.source_n
    }

    pub fn spec(&self) -> &WaveletSpec {
        &self.spec
    }
}

/// The finest admissible scale `J = log2(n)` for a dyadic length.
///
/// Non-dyadic lengths are rejected with the two nearest valid lengths named,
/// since trimming or padding is the caller's decision.
pub fn max_scale(n: usize) -> Result<u32> {
    if n >= 2 && n.is_power_of_two() {
        Ok(n.trailing_zeros())
    } else {
        let above = n.checked_next_power_of_two().unwrap_or(usize::MAX);
        let below = if n < 2 { 2 } else { above / 2 };
        Err(Error::NotPowerOfTwo { n, below, above })
    }
}

/// Finest-scale Haar detail coefficients of `y`.
///
/// Requires a dyadic length; returns all `2^J` coefficients under the
/// periodic boundary rule.
pub fn haar_dwt_finest(y: &TimeSeries) -> Result<WaveletCoefficients> {
    let n = y.n();
    let j = max_scale(n)?;
    let norm = 2f64.powf(j as f64 / 2.0);
    let v = y.values();
    let mut coeffs = Vec::with_capacity(n);
    for q in 0..n {
        let next = v[if q + 1 == n { 0 } else { q + 1 }];
        coeffs.push(norm * (v[q] - next));
    }
    WaveletCoefficients::from_parts(j, coeffs, n, WaveletSpec::haar())
}

/// Magnitude of the Haar wavelet's Fourier transform,
/// `|ψ̂(λ)| = (|λ|/4)·sin²(λ/4)/(λ/4)² = 4·sin²(λ/4)/|λ|`.
///
/// Continuous everywhere, with the single vanishing moment showing up as a
/// first-order zero at the origin: the value behaves like `|λ|/4` as `λ → 0`.
pub fn haar_ft_magnitude(lambda: f64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let s = (lambda / 4.0).sin();
    4.0 * s * s / lambda.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn max_scale_on_dyadic_lengths() {
        assert_eq!(max_scale(1024).unwrap(), 10);
        assert_eq!(max_scale(2048).unwrap(), 11);
        assert_eq!(max_scale(2).unwrap(), 1);
    }

    #[test]
    fn max_scale_rejects_non_dyadic_lengths() {
        match max_scale(1000).unwrap_err() {
            Error::NotPowerOfTwo { n, below, above } => {
                assert_eq!((n, below, above), (1000, 512, 1024));
            }
            other => panic!("unexpected error {other}"),
        }
        assert!(max_scale(0).is_err());
        assert!(max_scale(1).is_err());
    }

    #[test]
    fn constants_are_annihilated() {
        let y = TimeSeries::new("c", vec![3.25; 16]).unwrap();
        let w = haar_dwt_finest(&y).unwrap();
        assert!(w.coeffs().iter().all(|&c| c == 0.0));
    }

    #[test]
    fn four_point_example_with_periodic_wrap() {
        let y = TimeSeries::new("y", vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let w = haar_dwt_finest(&y).unwrap();
        assert_eq!(w.scale_j(), 2);
        // 2^{J/2} = 2; last coefficient wraps to the first sample: 2·(4−1)=6.
        assert_eq!(w.coeffs(), &[-2.0, -2.0, -2.0, 6.0]);
    }

    #[test]
    fn transform_is_linear() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let n = 64;
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let (a, b) = (2.5, -1.25);
        let combo: Vec<f64> = x.iter().zip(&y).map(|(xi, yi)| a * xi + b * yi).collect();

        let wx = haar_dwt_finest(&TimeSeries::new("x", x).unwrap()).unwrap();
        let wy = haar_dwt_finest(&TimeSeries::new("y", y).unwrap()).unwrap();
        let wc = haar_dwt_finest(&TimeSeries::new("c", combo).unwrap()).unwrap();
        for q in 0..n {
            let lin = a * wx.coeffs()[q] + b * wy.coeffs()[q];
            assert!((wc.coeffs()[q] - lin).abs() < 1e-12);
        }
    }

    #[test]
    fn circular_differences_telescope_to_zero() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let y: Vec<f64> = (0..256).map(|_| rng.random_range(-10.0..10.0)).collect();
        let scale: f64 = y.iter().map(|v| v.abs()).sum();
        let w = haar_dwt_finest(&TimeSeries::new("y", y).unwrap()).unwrap();
        let total: f64 = w.coeffs().iter().sum();
        assert!(total.abs() <= 1e-10 * scale.max(1.0), "sum {total}");
    }

    #[test]
    fn ft_magnitude_closed_forms() {
        assert_eq!(haar_ft_magnitude(0.0), 0.0);
        let at_2pi = haar_ft_magnitude(2.0 * std::f64::consts::PI);
        assert!((at_2pi - 2.0 / std::f64::consts::PI).abs() < 1e-14);
        // Symmetry in the sign of the frequency.
        assert_eq!(haar_ft_magnitude(-1.3), haar_ft_magnitude(1.3));
        // One vanishing moment: value/|λ| → 1/4 at the origin.
        for lambda in [1e-3, 1e-5, 1e-7] {
            let ratio = haar_ft_magnitude(lambda) / lambda;
            assert!((ratio - 0.25).abs() < 1e-5, "ratio {ratio} at {lambda}");
        }
    }

    #[test]
    fn from_parts_checks_the_count() {
        assert!(WaveletCoefficients::from_parts(3, vec![0.0; 8], 8, WaveletSpec::haar()).is_ok());
        assert!(WaveletCoefficients::from_parts(3, vec![0.0; 7], 8, WaveletSpec::haar()).is_err());
    }
}
