//! The three periodograms behind the estimators.
//!
//! * [`ordinary_periodogram`] — the classical FFT periodogram
//!   `I(λ_k) = |Σ_t x_t e^{itλ_k}|² / (2πn)` at Fourier frequencies
//!   `λ_k = 2πk/n`, `k = 1..m`.
//! * [`wavelet_ols_periodogram`] — per-frequency ordinary least squares of
//!   wavelet coefficients on the harmonic pair `(cos λ_k q, sin λ_k q)`,
//!   reported as `(n/8π)·‖β‖²`. At Fourier frequencies this equals the FFT
//!   periodogram of the coefficient sequence exactly (the regressors are
//!   orthogonal there), which the test suite pins down numerically.
//! * [`nkk_periodogram`] — the same amplitude functional with the OLS fit
//!   replaced by the least-absolute-deviations fit, making the ordinate
//!   robust to heavy-tailed coefficient noise. Per-frequency convergence
//!   flags are recorded; the estimator layer decides what to do with
//!   non-converged ordinates.
//!
//! No mean removal happens here: at exact Fourier frequencies a constant
//! level is orthogonal to every `k ≥ 1` harmonic, and the wavelet transform
//! has already annihilated the level. Callers who want demeaning anyway can
//! subtract the mean first.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::lad::{l1_fit, LadAlgorithm, LadOptions};
use crate::series::TimeSeries;
use crate::wavelet::WaveletCoefficients;

/// Which estimator family produced a periodogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodogramKind {
    /// FFT periodogram of the raw series.
    Ordinary,
    /// OLS harmonic amplitude of wavelet coefficients.
    WaveletOls,
    /// LAD harmonic amplitude of wavelet coefficients.
    NkkLad,
}

impl PeriodogramKind {
    /// Stable lower-case name used in CSV artifacts.
    pub fn name(self) -> &'static str {
        match self {
            PeriodogramKind::Ordinary => "ordinary",
            PeriodogramKind::WaveletOls => "wavelet-ols",
            PeriodogramKind::NkkLad => "nkk",
        }
    }
}

/// Nonnegative spectral ordinates at the first `m` Fourier frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct Periodogram {
    kind: PeriodogramKind,
    n: usize,
    freqs: Vec<f64>,
    ordinates: Vec<f64>,
    converged: Vec<bool>,
}

impl Periodogram {
    fn new_internal(
        kind: PeriodogramKind,
        n: usize,
        ordinates: Vec<f64>,
        converged: Vec<bool>,
    ) -> Self {
        let freqs = (1..=ordinates.len())
            .map(|k| 2.0 * std::f64::consts::PI * k as f64 / n as f64)
            .collect();
        Periodogram {
            kind,
            n,
            freqs,
            ordinates,
            converged,
        }
    }

    /// Wraps externally supplied ordinates (tests, file round-trips,
    /// manufactured regression inputs). Ordinates must be finite and
    /// nonnegative, and there must be at most `⌊(n-1)/2⌋` of them.
    pub fn from_parts(kind: PeriodogramKind, n: usize, ordinates: Vec<f64>) -> Result<Self> {
        check_bandwidth(n, ordinates.len().max(1))?;
        for (i, &o) in ordinates.iter().enumerate() {
            if !o.is_finite() || o < 0.0 {
                return Err(Error::invalid(
                    "ordinates",
                    format!("ordinate {} at k={} must be finite and >= 0", o, i + 1),
                ));
            }
        }
        let m = ordinates.len();
        Ok(Self::new_internal(kind, n, ordinates, vec![true; m]))
    }

    pub fn kind(&self) -> PeriodogramKind {
        self.kind
    }

    /// Length of the underlying series.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of frequencies (the bandwidth).
    pub fn m(&self) -> usize {
        self.ordinates.len()
    }

    /// Fourier frequencies `λ_k`, strictly increasing in `(0, π)`.
    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    /// Per-frequency solver convergence (all true for non-LAD kinds).
    pub fn converged(&self) -> &[bool] {
        &self.converged
    }

    /// The first `m` frequencies as a new periodogram. Since each ordinate
    /// depends only on its own frequency, this equals recomputing at the
    /// smaller bandwidth — which is what makes bandwidth sweeps cheap.
    pub fn prefix(&self, m: usize) -> Result<Periodogram> {
        if m == 0 || m > self.m() {
            return Err(Error::BandwidthOutOfRange {
                m,
                n: self.n,
                max: self.m(),
            });
        }
        Ok(Periodogram {
            kind: self.kind,
            n: self.n,
            freqs: self.freqs[..m].to_vec(),
            ordinates: self.ordinates[..m].to_vec(),
            converged: self.converged[..m].to_vec(),
        })
    }
}

/// A fitted harmonic pair at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicFit {
    /// Coefficients `(a, b)` on `(cos λ_k q, sin λ_k q)`.
    pub beta: (f64, f64),
    /// Achieved loss — squared-error for OLS fits, absolute-error for LAD.
    pub objective: f64,
    /// Solver iterations (0 for the closed-form OLS path).
    pub iterations: usize,
    /// Whether the solver met its tolerance contract.
    pub converged: bool,
}

/// `1 ≤ m ≤ ⌊(n-1)/2⌋`.
pub(crate) fn check_bandwidth(n: usize, m: usize) -> Result<()> {
    let max = n.saturating_sub(1) / 2;
    if m < 1 || m > max {
        return Err(Error::BandwidthOutOfRange { m, n, max });
    }
    Ok(())
}

/// `1 ≤ k < n/2` — the sine regressor vanishes identically at `k = 0` and
/// `k = n/2`, so those indices are rejected.
fn check_frequency(n: usize, k: usize) -> Result<()> {
    if k < 1 || 2 * k >= n {
        return Err(Error::FrequencyOutOfRange { k, n });
    }
    Ok(())
}

/// The harmonic regressor columns `(cos λ_k q, sin λ_k q)` for `q = 0..n-1`.
///
/// The angle is reduced modulo the period in integer arithmetic before the
/// trig call, so precision does not decay for large `k·q`.
pub(crate) fn harmonic_columns(n: usize, k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut cos_col = Vec::with_capacity(n);
    let mut sin_col = Vec::with_capacity(n);
    let two_pi = 2.0 * std::f64::consts::PI;
    for q in 0..n {
        let reduced = ((k as u64) * (q as u64) % (n as u64)) as f64;
        let theta = two_pi * reduced / n as f64;
        cos_col.push(theta.cos());
        sin_col.push(theta.sin());
    }
    (cos_col, sin_col)
}

/// Amplitude-to-ordinate scaling `(n/8π)·‖β‖²`.
fn amplitude_ordinate(n: usize, beta: (f64, f64)) -> f64 {
    (n as f64 / (8.0 * std::f64::consts::PI)) * (beta.0 * beta.0 + beta.1 * beta.1)
}

/// FFT periodogram of `x` at the first `m` Fourier frequencies.
pub fn ordinary_periodogram(x: &TimeSeries, m: usize) -> Result<Periodogram> {
    let n = x.n();
    check_bandwidth(n, m)?;
    let mut buf: Vec<Complex<f64>> = x
        .values()
        .iter()
        .map(|&v| Complex { re: v, im: 0.0 })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / (2.0 * std::f64::consts::PI * n as f64);
    let ordinates: Vec<f64> = (1..=m).map(|k| buf[k].norm_sqr() * scale).collect();
    Ok(Periodogram::new_internal(
        PeriodogramKind::Ordinary,
        n,
        ordinates,
        vec![true; m],
    ))
}

/// Closed-form OLS fit of the coefficients on the harmonic pair at frequency
/// index `k`: at Fourier frequencies the regressors are exactly orthogonal
/// with squared norm `n/2`, so `a = (2/n)Σ w_q cos(λ_k q)` and likewise for
/// `b`.
pub fn ols_harmonic_fit(w: &WaveletCoefficients, k: usize) -> Result<HarmonicFit> {
    let coeffs = w.coeffs();
    let n = coeffs.len();
    check_frequency(n, k)?;
    let (cos_col, sin_col) = harmonic_columns(n, k);
    ols_fit_on_columns(coeffs, &cos_col, &sin_col)
}

fn ols_fit_on_columns(values: &[f64], cos_col: &[f64], sin_col: &[f64]) -> Result<HarmonicFit> {
    let n = values.len();
    let (mut ca, mut cb) = (0.0, 0.0);
    for q in 0..n {
        ca += values[q] * cos_col[q];
        cb += values[q] * sin_col[q];
    }
    let a = 2.0 * ca / n as f64;
    let b = 2.0 * cb / n as f64;
    let mut objective = 0.0;
    for q in 0..n {
        let r = values[q] - a * cos_col[q] - b * sin_col[q];
        objective += r * r;
    }
    Ok(HarmonicFit {
        beta: (a, b),
        objective,
        iterations: 0,
        converged: true,
    })
}

/// LAD fit of the coefficients on the harmonic pair at frequency index `k`.
///
/// `tol` is the solver's relative objective tolerance. Non-convergence is not
/// an error: the fit comes back flagged with the best iterate found.
pub fn lad_harmonic_fit(w: &WaveletCoefficients, k: usize, tol: f64) -> Result<HarmonicFit> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::invalid(
            "tol",
            format!("need a positive tolerance, got {tol}"),
        ));
    }
    let coeffs = w.coeffs();
    let n = coeffs.len();
    check_frequency(n, k)?;
    let (cos_col, sin_col) = harmonic_columns(n, k);
    let fit = l1_fit(
        &cos_col,
        &sin_col,
        coeffs,
        &LadOptions {
            tol,
            max_iterations: 200,
            algorithm: LadAlgorithm::Auto,
        },
    );
    Ok(HarmonicFit {
        beta: fit.beta,
        objective: fit.objective,
        iterations: fit.iterations,
        converged: fit.converged,
    })
}

/// OLS wavelet periodogram: `(n/8π)·‖β̃_k‖²` for `k = 1..m`.
pub fn wavelet_ols_periodogram(w: &WaveletCoefficients, m: usize) -> Result<Periodogram> {
    let n = w.coeffs().len();
    check_bandwidth(n, m)?;
    let mut ordinates = Vec::with_capacity(m);
    for k in 1..=m {
        let fit = ols_harmonic_fit(w, k)?;
        ordinates.push(amplitude_ordinate(n, fit.beta));
    }
    Ok(Periodogram::new_internal(
        PeriodogramKind::WaveletOls,
        n,
        ordinates,
        vec![true; m],
    ))
}

/// Robust LAD wavelet periodogram: `(n/8π)·‖β̂_LAD,k‖²` for `k = 1..m`, with
/// per-frequency convergence flags.
pub fn nkk_periodogram(w: &WaveletCoefficients, m: usize, tol: f64) -> Result<Periodogram> {
    let n = w.coeffs().len();
    check_bandwidth(n, m)?;
    let mut ordinates = Vec::with_capacity(m);
    let mut converged = Vec::with_capacity(m);
    for k in 1..=m {
        let fit = lad_harmonic_fit(w, k, tol)?;
        ordinates.push(amplitude_ordinate(n, fit.beta));
        converged.push(fit.converged);
    }
    Ok(Periodogram::new_internal(
        PeriodogramKind::NkkLad,
        n,
        ordinates,
        converged,
    ))
}
