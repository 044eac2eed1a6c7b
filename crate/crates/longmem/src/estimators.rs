//! Log-periodogram regression estimators of the memory parameter `d`.
//!
//! All three estimators are ordinary least squares regressions of
//! log-periodogram ordinates on a deterministic frequency regressor over the
//! first `m` Fourier frequencies:
//!
//! * **GPH** — log of the ordinary periodogram on
//!   `R_k = −log[4 sin²(λ_k/2)]`; the slope *is* `d̂`.
//! * **WBLP** — log of the OLS wavelet periodogram on `X_k = −2 log λ_k`;
//!   `d̂` is the slope plus one (the finest-scale wavelet spectrum behaves
//!   like `λ^{−2(d−1)}` near the origin).
//! * **NKK** — the same regression fed the robust LAD wavelet periodogram.
//!
//! Each estimator exists in two layers: `estimate_*` runs the full pipeline
//! from a series, while `*_from_ordinates` accepts a ready-made
//! [`Periodogram`]. The second layer is what bandwidth sweeps use (ordinates
//! don't depend on `m`, so a prefix of a wide periodogram re-estimates at a
//! smaller bandwidth for free) and what tests use to inject manufactured
//! ordinates.
//!
//! Frequencies whose ordinate is non-positive, non-finite, or flagged
//! non-converged are excluded from the regression and counted in
//! `skipped_k` — excluded rather than clamped, since clamping would bias the
//! log regression invisibly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::spectra::{
    check_bandwidth, nkk_periodogram, ordinary_periodogram, wavelet_ols_periodogram, Periodogram,
};
use crate::wavelet::haar_dwt_finest;

use std::f64::consts::PI;

/// The estimator families, in their stable reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Gph,
    Wblp,
    Nkk,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Gph, Method::Wblp, Method::Nkk];

    pub fn name(self) -> &'static str {
        match self {
            Method::Gph => "gph",
            Method::Wblp => "wblp",
            Method::Nkk => "nkk",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gph" => Ok(Method::Gph),
            "wblp" => Ok(Method::Wblp),
            "nkk" => Ok(Method::Nkk),
            other => Err(Error::invalid(
                "method",
                format!("unknown method `{other}`; valid values are gph, wblp, nkk"),
            )),
        }
    }
}

/// Which deterministic regressor a [`RegressorSet`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegressorKind {
    /// `R_k = −log[4 sin²(λ_k/2)]` (ordinary-periodogram regression).
    GphR,
    /// `X_k = −2 log λ_k` (wavelet-periodogram regression).
    WaveletX,
}

/// The regressor values at the first `m` Fourier frequencies plus their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct RegressorSet {
    kind: RegressorKind,
    values: Vec<f64>,
    mean: f64,
}

impl RegressorSet {
    pub fn kind(&self) -> RegressorKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Arithmetic mean of all `m` values.
    pub fn mean(&self) -> f64 {
        self.mean
    }
}

/// A fitted memory parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MemoryEstimate {
    /// Estimated memory parameter.
    pub d_hat: f64,
    /// Estimator family.
    pub method: Method,
    /// Bandwidth (number of Fourier frequencies requested).
    pub m: usize,
    /// Regression intercept (absorbs constants such as the Euler-gamma
    /// shift of the log-periodogram mean; never folded into `d_hat`).
    pub intercept: f64,
    /// Asymptotic standard error. For GPH this is
    /// `sqrt(π²/6 · [Σ(R_k−R̄)²]^{-1})`; for WBLP it is `sqrt(π²/(24m))`; for
    /// NKK no dedicated constant is established, so the WBLP constant is
    /// borrowed (treat it as indicative, not exact).
    pub se_asymptotic: f64,
    /// Frequencies excluded from the regression (non-positive ordinate or
    /// non-converged solver).
    pub skipped_k: usize,
}

/// Scalar curvature summary of a spectral density at the origin: the level
/// `s(0)` and second derivative `s''(0)` of the smooth (short-memory) factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralCurvature {
    pub s0: f64,
    pub s2: f64,
}

fn r_value(lambda: f64) -> f64 {
    let s = (lambda / 2.0).sin();
    -(4.0 * s * s).ln()
}

fn x_value(lambda: f64) -> f64 {
    -2.0 * lambda.ln()
}

fn build_regressors(n: usize, m: usize, kind: RegressorKind) -> Result<RegressorSet> {
    check_bandwidth(n, m)?;
    let values: Vec<f64> = (1..=m)
        .map(|k| {
            let lambda = 2.0 * PI * k as f64 / n as f64;
            match kind {
                RegressorKind::GphR => r_value(lambda),
                RegressorKind::WaveletX => x_value(lambda),
            }
        })
        .collect();
    let mean = values.iter().sum::<f64>() / m as f64;
    Ok(RegressorSet { kind, values, mean })
}

/// GPH regressors `R_k` for `k = 1..m`.
pub fn gph_regressors(n: usize, m: usize) -> Result<RegressorSet> {
    build_regressors(n, m, RegressorKind::GphR)
}

/// Wavelet-regression regressors `X_k = −2 log λ_k` for `k = 1..m`.
pub fn wavelet_regressors(n: usize, m: usize) -> Result<RegressorSet> {
    build_regressors(n, m, RegressorKind::WaveletX)
}

/// Result of the log-ordinate regression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Frequencies that entered the regression.
    pub used: usize,
    /// Frequencies excluded (non-positive/non-finite ordinate or
    /// non-converged solver).
    pub skipped: usize,
    /// `Σ(x_k − x̄)²` over the used frequencies — the regressor's centered
    /// sum of squares, needed for the GPH variance formula.
    pub ssx: f64,
}

/// OLS of log-ordinates on the regressor values.
///
/// Skipped frequencies are dropped, not clamped; the regressor mean is
/// recomputed over the surviving points so the fit is a genuine OLS on that
/// subset. Fails if fewer than two points survive.
pub fn log_periodogram_slope(
    ordinates: &Periodogram,
    regressors: &RegressorSet,
) -> Result<SlopeFit> {
    let m = ordinates.m();
    if regressors.values().len() != m {
        return Err(Error::invalid(
            "regressors",
            format!(
                "regressor count {} does not match bandwidth {m}",
                regressors.values().len()
            ),
        ));
    }

    let mut xs = Vec::with_capacity(m);
    let mut ys = Vec::with_capacity(m);
    for k in 0..m {
        let o = ordinates.ordinates()[k];
        if ordinates.converged()[k] && o.is_finite() && o > 0.0 {
            xs.push(regressors.values()[k]);
            ys.push(o.ln());
        }
    }
    let used = xs.len();
    let skipped = m - used;
    if used < 2 {
        return Err(Error::TooFewUsable { usable: used, m });
    }

    let x_mean = xs.iter().sum::<f64>() / used as f64;
    let y_mean = ys.iter().sum::<f64>() / used as f64;
    let mut sxy = 0.0;
    let mut ssx = 0.0;
    for i in 0..used {
        let dx = xs[i] - x_mean;
        sxy += dx * ys[i]; // Σ y(x−x̄) — equals Σ(x−x̄)(y−ȳ) since Σ(x−x̄)=0
        ssx += dx * dx;
    }
    if ssx <= 0.0 {
        return Err(Error::TooFewUsable { usable: 1, m });
    }
    let slope = sxy / ssx;
    Ok(SlopeFit {
        slope,
        intercept: y_mean - slope * x_mean,
        used,
        skipped,
        ssx,
    })
}

/// GPH estimate from ready-made ordinates: `d̂` is the slope of the
/// log-ordinates on `R_k`.
pub fn gph_from_ordinates(p: &Periodogram) -> Result<MemoryEstimate> {
    let reg = gph_regressors(p.n(), p.m())?;
    let fit = log_periodogram_slope(p, &reg)?;
    Ok(MemoryEstimate {
        d_hat: fit.slope,
        method: Method::Gph,
        m: p.m(),
        intercept: fit.intercept,
        se_asymptotic: (PI * PI / 6.0 / fit.ssx).sqrt(),
        skipped_k: fit.skipped,
    })
}

/// WBLP estimate from ready-made wavelet ordinates: slope on `X_k`, plus one.
pub fn wblp_from_ordinates(p: &Periodogram) -> Result<MemoryEstimate> {
    let reg = wavelet_regressors(p.n(), p.m())?;
    let fit = log_periodogram_slope(p, &reg)?;
    Ok(MemoryEstimate {
        d_hat: fit.slope + 1.0,
        method: Method::Wblp,
        m: p.m(),
        intercept: fit.intercept,
        se_asymptotic: (PI * PI / (24.0 * p.m() as f64)).sqrt(),
        skipped_k: fit.skipped,
    })
}

/// Share of frequencies that may be skipped before an estimate is rejected.
const MAX_SKIP_PERCENT: u32 = 20;

/// NKK estimate from ready-made LAD ordinates. Identical regression to
/// [`wblp_from_ordinates`]; additionally fails when more than 20% of the
/// frequencies were skipped, since an estimate built on that little of the
/// requested band is not trustworthy.
pub fn nkk_from_ordinates(p: &Periodogram) -> Result<MemoryEstimate> {
    let reg = wavelet_regressors(p.n(), p.m())?;
    let fit = log_periodogram_slope(p, &reg)?;
    if fit.skipped * 100 > p.m() * MAX_SKIP_PERCENT as usize {
        return Err(Error::UnreliableEstimate {
            skipped: fit.skipped,
            m: p.m(),
            limit_percent: MAX_SKIP_PERCENT,
        });
    }
    Ok(MemoryEstimate {
        d_hat: fit.slope + 1.0,
        method: Method::Nkk,
        m: p.m(),
        intercept: fit.intercept,
        // Borrowed WBLP constant — no NKK-specific variance constant is
        // established.
        se_asymptotic: (PI * PI / (24.0 * p.m() as f64)).sqrt(),
        skipped_k: fit.skipped,
    })
}

/// GPH pipeline: ordinary periodogram of `x`, then the `R_k` regression.
pub fn estimate_gph(x: &TimeSeries, m: usize) -> Result<MemoryEstimate> {
    gph_from_ordinates(&ordinary_periodogram(x, m)?)
}

/// WBLP pipeline: finest-scale Haar transform, OLS wavelet periodogram, then
/// the `X_k` regression plus one.
pub fn estimate_wblp(y: &TimeSeries, m: usize) -> Result<MemoryEstimate> {
    let w = haar_dwt_finest(y)?;
    wblp_from_ordinates(&wavelet_ols_periodogram(&w, m)?)
}

/// NKK pipeline: finest-scale Haar transform, LAD wavelet periodogram, then
/// the `X_k` regression plus one.
pub fn estimate_nkk(y: &TimeSeries, m: usize, tol: f64) -> Result<MemoryEstimate> {
    let w = haar_dwt_finest(y)?;
    nkk_from_ordinates(&nkk_periodogram(&w, m, tol)?)
}

/// MSE-optimal bandwidth `m* = ⌊0.4634 · |s(0)/s''(0)|^{2/5} · n^{4/5}⌋`.
///
/// The curvature ratio enters through its magnitude: a fractional power of a
/// negative ratio is undefined in real arithmetic, and the bandwidth trade-off
/// depends only on how curved the smooth spectral factor is, not on the sign
/// of the curvature. `s''(0) = 0` makes the formula singular and is rejected.
pub fn optimal_bandwidth(curv: &SpectralCurvature, n: usize) -> Result<usize> {
    if curv.s2 == 0.0 {
        return Err(Error::invalid(
            "s2",
            "s''(0) = 0 makes the optimal-bandwidth formula singular",
        ));
    }
    if !(curv.s0 > 0.0) || !curv.s0.is_finite() || !curv.s2.is_finite() {
        return Err(Error::invalid(
            "s0",
            format!(
                "need finite s0 > 0 and finite s2, got s0={}, s2={}",
                curv.s0, curv.s2
            ),
        ));
    }
    let value = 0.4634 * (curv.s0 / curv.s2).abs().powf(0.4) * (n as f64).powf(0.8);
    Ok(integer_part(value))
}

/// `⌊x⌋` with a snap-to-integer guard: `powf` can land a hair below an exact
/// integer (e.g. 1024^0.8 is exactly 256 mathematically), which would
/// otherwise push the floor off by one.
fn integer_part(x: f64) -> usize {
    let rounded = x.round();
    if (x - rounded).abs() < 1e-9 {
        rounded as usize
    } else {
        x.floor() as usize
    }
}

/// Bandwidth from an exponent: `⌊n^exp⌋`, clipped to the range usable by the
/// regressions (`2..=⌊(n-1)/2⌋`).
pub fn bandwidth_from_exponent(n: usize, exp: f64) -> Result<usize> {
    if !(exp > 0.0 && exp < 1.0) {
        return Err(Error::invalid(
            "m_exp",
            format!("need an exponent in (0, 1), got {exp}"),
        ));
    }
    if n < 5 {
        return Err(Error::invalid(
            "n",
            format!("need n >= 5 for an exponent-derived bandwidth, got {n}"),
        ));
    }
    Ok(integer_part((n as f64).powf(exp)).clamp(2, (n - 1) / 2))
}

/// Every admissible bandwidth from `⌊n^lo_exp⌋` through `⌊n^hi_exp⌋`, clipped
/// to the range usable by the regressions (`2..=⌊(n-1)/2⌋`).
pub fn bandwidth_grid(n: usize, lo_exp: f64, hi_exp: f64) -> Result<Vec<usize>> {
    if !(lo_exp > 0.0 && hi_exp < 1.0 && lo_exp < hi_exp) {
        return Err(Error::invalid(
            "lo_exp/hi_exp",
            format!("need 0 < lo_exp < hi_exp < 1, got ({lo_exp}, {hi_exp})"),
        ));
    }
    if n < 2 {
        return Err(Error::invalid("n", format!("need n >= 2, got {n}")));
    }
    let lo = integer_part((n as f64).powf(lo_exp)).max(2);
    let hi = integer_part((n as f64).powf(hi_exp)).min(n.saturating_sub(1) / 2);
    if lo > hi {
        return Err(Error::EmptyGrid { n, lo_exp, hi_exp });
    }
    Ok((lo..=hi).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::PeriodogramKind;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn power_law_wavelet_ordinates(n: usize, m: usize, d: f64, level: f64) -> Periodogram {
        let ords: Vec<f64> = (1..=m)
            .map(|k| {
                let lambda = 2.0 * PI * k as f64 / n as f64;
                level * lambda.powf(-2.0 * (d - 1.0))
            })
            .collect();
        Periodogram::from_parts(PeriodogramKind::WaveletOls, n, ords).unwrap()
    }

    #[test]
    fn r_regressor_closed_forms() {
        // λ = π: 4 sin²(π/2) = 4.
        assert!((r_value(PI) + 4.0_f64.ln()).abs() < 1e-14);
        // n = 8, k = 1: λ = π/4.
        let reg = gph_regressors(8, 1).unwrap();
        assert!((reg.values()[0] - 0.534800).abs() < 1e-6);
        // Single-value set: mean equals the value.
        assert_eq!(reg.mean(), reg.values()[0]);
    }

    #[test]
    fn regressors_reject_bad_bandwidth() {
        assert!(gph_regressors(64, 0).is_err());
        assert!(gph_regressors(64, 32).is_err());
        assert!(wavelet_regressors(64, 31).is_ok());
    }

    #[test]
    fn constant_log_ordinates_give_zero_slope() {
        let n = 128;
        let m = 20;
        let c = 2.0_f64;
        let ords = vec![c.exp(); m];
        let p = Periodogram::from_parts(PeriodogramKind::Ordinary, n, ords).unwrap();
        let fit = log_periodogram_slope(&p, &gph_regressors(n, m).unwrap()).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        assert!((fit.intercept - c).abs() < 1e-12);
        assert_eq!(fit.used, m);
        assert_eq!(fit.skipped, 0);
    }

    #[test]
    fn exact_linear_log_ordinates_recover_the_slope() {
        let n = 512;
        let m = 100;
        let reg = gph_regressors(n, m).unwrap();
        let ords: Vec<f64> = reg.values().iter().map(|r| (2.0 + 0.3 * r).exp()).collect();
        let p = Periodogram::from_parts(PeriodogramKind::Ordinary, n, ords).unwrap();
        let fit = log_periodogram_slope(&p, &reg).unwrap();
        assert!((fit.slope - 0.3).abs() < 1e-12, "slope {}", fit.slope);
        assert!((fit.intercept - 2.0).abs() < 1e-12);
    }

    #[test]
    fn slope_matches_two_pass_covariance_oracle() {
        let n = 256;
        let m = 60;
        let mut rng = ChaCha12Rng::seed_from_u64(6);
        let ords: Vec<f64> = (0..m).map(|_| rng.random_range(0.01..5.0)).collect();
        let reg = gph_regressors(n, m).unwrap();
        let p = Periodogram::from_parts(PeriodogramKind::Ordinary, n, ords.clone()).unwrap();
        let fit = log_periodogram_slope(&p, &reg).unwrap();

        // Independent two-pass computation: slope = cov(x, y)/var(x).
        let ys: Vec<f64> = ords.iter().map(|o| o.ln()).collect();
        let xm = reg.values().iter().sum::<f64>() / m as f64;
        let ym = ys.iter().sum::<f64>() / m as f64;
        let cov: f64 = reg
            .values()
            .iter()
            .zip(&ys)
            .map(|(x, y)| (x - xm) * (y - ym))
            .sum();
        let var: f64 = reg.values().iter().map(|x| (x - xm) * (x - xm)).sum();
        let oracle = cov / var;
        assert!((fit.slope - oracle).abs() < 1e-10);

        // Both numerator forms of the regression algebra coincide:
        // Σ(x−x̄)(y−ȳ) = Σ y(x−x̄) because deviations from the mean sum to 0.
        let raw: f64 = reg
            .values()
            .iter()
            .zip(&ys)
            .map(|(x, y)| y * (x - xm))
            .sum();
        assert!((cov - raw).abs() <= 1e-12 * cov.abs().max(1.0));
    }

    #[test]
    fn multiplying_ordinates_shifts_only_the_intercept() {
        let n = 256;
        let m = 40;
        let mut rng = ChaCha12Rng::seed_from_u64(16);
        let ords: Vec<f64> = (0..m).map(|_| rng.random_range(0.01..5.0)).collect();
        let scaled: Vec<f64> = ords.iter().map(|o| 7.5 * o).collect();
        let reg = wavelet_regressors(n, m).unwrap();
        let base = log_periodogram_slope(
            &Periodogram::from_parts(PeriodogramKind::WaveletOls, n, ords).unwrap(),
            &reg,
        )
        .unwrap();
        let shifted = log_periodogram_slope(
            &Periodogram::from_parts(PeriodogramKind::WaveletOls, n, scaled).unwrap(),
            &reg,
        )
        .unwrap();
        assert!((base.slope - shifted.slope).abs() < 1e-12);
        assert!((shifted.intercept - base.intercept - 7.5_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn gph_recovers_d_from_exact_model_ordinates() {
        let n = 2048;
        let m = 200;
        let d = 0.35;
        let ords: Vec<f64> = (1..=m)
            .map(|k| {
                let lambda = 2.0 * PI * k as f64 / n as f64;
                let s = (lambda / 2.0).sin();
                (4.0 * s * s).powf(-d)
            })
            .collect();
        let p = Periodogram::from_parts(PeriodogramKind::Ordinary, n, ords).unwrap();
        let est = gph_from_ordinates(&p).unwrap();
        assert!((est.d_hat - d).abs() < 1e-10, "d_hat {}", est.d_hat);
        assert_eq!(est.skipped_k, 0);
    }

    #[test]
    fn wavelet_estimators_recover_d_from_power_law_ordinates() {
        let p = power_law_wavelet_ordinates(1024, 64, 0.27, 0.7);
        let wblp = wblp_from_ordinates(&p).unwrap();
        let nkk = nkk_from_ordinates(&p).unwrap();
        assert!((wblp.d_hat - 0.27).abs() < 1e-10);
        assert!((nkk.d_hat - 0.27).abs() < 1e-10);
        // Identical regression layer: the two estimates agree bit-for-bit.
        assert_eq!(wblp.d_hat, nkk.d_hat);
        assert_eq!(wblp.intercept, nkk.intercept);
    }

    #[test]
    fn gph_is_near_zero_on_white_noise() {
        // 500 seeds of pure white noise: the mean estimate must sit within
        // three standard errors of d = 0.
        let n = 2048;
        let m = (n as f64).powf(0.5) as usize;
        let mut estimates = Vec::with_capacity(500);
        for seed in 0..500 {
            let x = crate::datagen::fractional_noise(0.0, n, seed);
            estimates.push(estimate_gph(&x, m).unwrap().d_hat);
        }
        let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
        let sd = (estimates.iter().map(|d| (d - mean).powi(2)).sum::<f64>()
            / (estimates.len() - 1) as f64)
            .sqrt();
        let se = sd / (estimates.len() as f64).sqrt();
        assert!(mean.abs() < 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn constant_series_cannot_be_estimated() {
        let y = TimeSeries::new("flat", vec![2.0; 256]).unwrap();
        match estimate_wblp(&y, 32).unwrap_err() {
            Error::TooFewUsable { usable, .. } => assert_eq!(usable, 0),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn nkk_rejects_when_too_many_frequencies_are_skipped() {
        // 30% of the ordinates are zero → skipped; the 20% policy must trip.
        let n = 256;
        let m = 20;
        let mut ords: Vec<f64> = (1..=m).map(|k| k as f64).collect();
        for slot in 0..6 {
            ords[slot * 3] = 0.0;
        }
        let p = Periodogram::from_parts(PeriodogramKind::NkkLad, n, ords).unwrap();
        match nkk_from_ordinates(&p).unwrap_err() {
            Error::UnreliableEstimate { skipped, m, .. } => {
                assert_eq!((skipped, m), (6, 20));
            }
            other => panic!("unexpected error {other}"),
        }
        // WBLP reports the skips but does not reject.
        let p = Periodogram::from_parts(PeriodogramKind::WaveletOls, n, {
            let mut o: Vec<f64> = (1..=m).map(|k| k as f64).collect();
            for slot in 0..6 {
                o[slot * 3] = 0.0;
            }
            o
        })
        .unwrap();
        assert_eq!(wblp_from_ordinates(&p).unwrap().skipped_k, 6);
    }

    #[test]
    fn gph_standard_error_decreases_with_bandwidth() {
        let x = crate::datagen::fractional_noise(0.2, 1024, 3);
        let se_small = estimate_gph(&x, 8).unwrap().se_asymptotic;
        let se_large = estimate_gph(&x, 64).unwrap().se_asymptotic;
        assert!(se_small > se_large, "{se_small} vs {se_large}");
        let w_small = estimate_wblp(&x, 8).unwrap().se_asymptotic;
        let w_large = estimate_wblp(&x, 64).unwrap().se_asymptotic;
        assert!(w_small > w_large);
    }

    #[test]
    fn optimal_bandwidth_examples() {
        let unit = SpectralCurvature { s0: 1.0, s2: 1.0 };
        assert_eq!(optimal_bandwidth(&unit, 1024).unwrap(), 118);
        assert_eq!(optimal_bandwidth(&unit, 32768).unwrap(), 1898);
        // The ratio enters through its magnitude.
        let negative = SpectralCurvature { s0: 1.0, s2: -1.0 };
        assert_eq!(optimal_bandwidth(&negative, 1024).unwrap(), 118);
        assert!(optimal_bandwidth(&SpectralCurvature { s0: 1.0, s2: 0.0 }, 1024).is_err());
    }

    #[test]
    fn bandwidth_from_exponent_examples() {
        assert_eq!(bandwidth_from_exponent(1024, 0.3).unwrap(), 8);
        assert_eq!(bandwidth_from_exponent(1024, 0.8).unwrap(), 256);
        assert_eq!(bandwidth_from_exponent(2048, 0.5).unwrap(), 45);
        assert_eq!(bandwidth_from_exponent(16, 0.9).unwrap(), 7); // clipped
        assert!(bandwidth_from_exponent(1024, 0.0).is_err());
        assert!(bandwidth_from_exponent(1024, 1.0).is_err());
    }

    #[test]
    fn bandwidth_grid_examples() {
        let grid = bandwidth_grid(1024, 0.3, 0.8).unwrap();
        assert_eq!(*grid.first().unwrap(), 8);
        assert_eq!(*grid.last().unwrap(), 256);
        assert_eq!(grid.len(), 249); // all integers, sorted, deduplicated

        let small = bandwidth_grid(16, 0.3, 0.8).unwrap();
        assert_eq!(small, (2..=7).collect::<Vec<_>>().as_slice()); // clipped to (n-1)/2 = 7

        assert!(bandwidth_grid(1024, 0.8, 0.3).is_err());
        assert!(bandwidth_grid(1024, 0.5, 0.5).is_err());
        assert!(matches!(
            bandwidth_grid(4, 0.3, 0.45).unwrap_err(),
            Error::EmptyGrid { .. }
        ));
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        let err = "bogus".parse::<Method>().unwrap_err().to_string();
        assert!(err.contains("gph") && err.contains("wblp") && err.contains("nkk"));
    }
}
