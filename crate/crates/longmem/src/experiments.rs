//! Monte Carlo bandwidth sweeps.
//!
//! A sweep repeatedly simulates a stochastic-volatility series with known
//! memory parameter `d`, estimates `d` at every bandwidth in a grid with every
//! requested method, and aggregates the error into MSE / bias / variance per
//! (method, bandwidth) cell.
//!
//! Two design choices keep results comparable and fast:
//!
//! * **Common random numbers** — each replication draws one series and feeds
//!   it to every method at every bandwidth, so cell-to-cell differences
//!   reflect the estimators, not sampling noise.
//! * **Prefix reuse** — log-periodogram ordinates don't depend on the
//!   bandwidth, so each replication computes them once at the largest grid
//!   bandwidth and re-runs only the (cheap) regression on each prefix. The
//!   results are bit-identical to estimating each bandwidth from scratch.
//!
//! Replications run in parallel; the RNG seed for replication `r` is a pure
//! function of the base seed and `r`, so the worker count never affects any
//! number in the output.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::{lmsv_series, log_squared, GenConfig, NoiseKind};
use crate::error::{Error, Result};
use crate::estimators::{
    bandwidth_grid, gph_from_ordinates, nkk_from_ordinates, wblp_from_ordinates, Method,
};
use crate::rng::replication_seed;
use crate::series::TimeSeries;
use crate::spectra::{nkk_periodogram, ordinary_periodogram, wavelet_ols_periodogram, Periodogram};
use crate::wavelet::haar_dwt_finest;

/// Everything that determines a sweep's numbers. Deliberately excludes the
/// worker count: two runs with the same `SweepConfig` produce identical
/// output regardless of parallelism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Series length (power of two when wavelet methods are requested).
    pub n: usize,
    /// True memory parameter of the latent volatility process.
    pub d: f64,
    /// AR(1) coefficient of the latent process.
    pub phi: f64,
    /// Innovation variance of the latent process.
    pub sigma_eps2: f64,
    /// Volatility scale.
    pub sigma: f64,
    /// Number of Monte Carlo replications.
    pub reps: usize,
    /// Grid lower edge as an exponent: smallest bandwidth ≈ n^lo_exp.
    pub lo_exp: f64,
    /// Grid upper edge as an exponent: largest bandwidth ≈ n^hi_exp.
    pub hi_exp: f64,
    /// Methods to run (deduplicated and put in reporting order on use).
    pub methods: Vec<Method>,
    /// Base RNG seed; replication r uses a seed derived from (base, r).
    pub base_seed: u64,
    /// Convergence tolerance for the LAD solver inside NKK.
    pub tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n: 1024,
            d: 0.2,
            phi: 0.0,
            sigma_eps2: 0.37,
            sigma: 1.0,
            reps: 200,
            lo_exp: 0.3,
            hi_exp: 0.8,
            methods: Method::ALL.to_vec(),
            base_seed: 0,
            tol: 1e-8,
        }
    }
}

impl SweepConfig {
    fn gen_config(&self, seed: u64) -> GenConfig {
        GenConfig {
            n: self.n,
            d: self.d,
            phi: self.phi,
            sigma_eps2: self.sigma_eps2,
            sigma: self.sigma,
            seed,
            noise: NoiseKind::Gaussian,
            burn_in: 0,
        }
    }

    /// Methods deduplicated and sorted into the stable reporting order.
    pub fn canonical_methods(&self) -> Vec<Method> {
        let mut out: Vec<Method> = Vec::new();
        for m in Method::ALL {
            if self.methods.contains(&m) {
                out.push(m);
            }
        }
        out
    }

    fn validate(&self) -> Result<()> {
        self.gen_config(0).validate_lmsv()?;
        if self.reps == 0 {
            return Err(Error::invalid("reps", "need at least one replication"));
        }
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Error::invalid(
                "tol",
                format!("need tol > 0, got {}", self.tol),
            ));
        }
        let wavelet = self
            .methods
            .iter()
            .any(|m| matches!(m, Method::Wblp | Method::Nkk));
        if wavelet && !self.n.is_power_of_two() {
            return Err(Error::invalid(
                "n",
                format!("wavelet methods need a power-of-two length, got {}", self.n),
            ));
        }
        Ok(())
    }
}

/// Aggregated accuracy of one method at one bandwidth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub method: Method,
    pub m: usize,
    /// Mean of (d̂ − d)² over the successful replications.
    pub mse: f64,
    /// Mean of d̂ minus the true d.
    pub bias: f64,
    /// Population variance of d̂ (so mse = bias² + variance exactly).
    pub variance: f64,
    pub mean_d_hat: f64,
    /// Replications that produced an estimate in this cell.
    pub reps_used: usize,
    /// More than 20% of replications failed here; treat the numbers as
    /// indicative only.
    pub unreliable: bool,
}

/// Full sweep output: the config that produced it, the bandwidth grid, the
/// aggregate cells, and every raw estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub grid: Vec<usize>,
    /// Methods actually run, in reporting order (grid-major within method).
    pub methods: Vec<Method>,
    /// `cells[mi * grid.len() + gi]` is method `methods[mi]` at `grid[gi]`.
    pub cells: Vec<SweepCell>,
    /// `raw[mi][gi][r]` is replication `r`'s estimate (NaN when it failed).
    pub raw: Vec<Vec<Vec<f64>>>,
    /// Per-replication derived seeds, for audit.
    pub seeds: Vec<u64>,
}

impl SweepResult {
    /// The cell for (method, bandwidth), if that pair was run.
    pub fn cell(&self, method: Method, m: usize) -> Option<&SweepCell> {
        let mi = self.methods.iter().position(|&x| x == method)?;
        let gi = self.grid.iter().position(|&x| x == m)?;
        self.cells.get(mi * self.grid.len() + gi)
    }

    /// Raw estimates for (method, bandwidth); NaN marks failed replications.
    pub fn raw_estimates(&self, method: Method, m: usize) -> Option<&[f64]> {
        let mi = self.methods.iter().position(|&x| x == method)?;
        let gi = self.grid.iter().position(|&x| x == m)?;
        Some(&self.raw[mi][gi])
    }
}

/// The simulated observable for replication `r`: log of the squared
/// stochastic-volatility series.
pub fn replication_series(cfg: &SweepConfig, r: usize) -> Result<TimeSeries> {
    let seed = replication_seed(cfg.base_seed, r as u64);
    let x = lmsv_series(&cfg.gen_config(seed))?;
    log_squared(&x)
}

/// One (replication, bandwidth, method) estimate, computed from scratch.
/// The sweep itself reuses ordinates across bandwidths; this entry point is
/// the reference the sweep must agree with.
pub fn run_replication(cfg: &SweepConfig, r: usize, m: usize, method: Method) -> Result<f64> {
    let y = replication_series(cfg, r)?;
    let est = match method {
        Method::Gph => gph_from_ordinates(&ordinary_periodogram(&y, m)?)?,
        Method::Wblp => {
            let w = haar_dwt_finest(&y)?;
            wblp_from_ordinates(&wavelet_ols_periodogram(&w, m)?)?
        }
        Method::Nkk => {
            let w = haar_dwt_finest(&y)?;
            nkk_from_ordinates(&nkk_periodogram(&w, m, cfg.tol)?)?
        }
    };
    Ok(est.d_hat)
}

/// Estimates for one replication: `out[mi][gi]`, NaN where estimation failed.
fn replicate(
    cfg: &SweepConfig,
    methods: &[Method],
    grid: &[usize],
    r: usize,
) -> Result<Vec<Vec<f64>>> {
    let y = replication_series(cfg, r)?;
    let m_max = *grid.last().expect("grid is non-empty");

    // Wide periodograms once per replication; each bandwidth is a prefix.
    let needs_wavelet = methods
        .iter()
        .any(|m| matches!(m, Method::Wblp | Method::Nkk));
    let w = if needs_wavelet {
        Some(haar_dwt_finest(&y)?)
    } else {
        None
    };

    let mut wide: Vec<Periodogram> = Vec::with_capacity(methods.len());
    for &method in methods {
        wide.push(match method {
            Method::Gph => ordinary_periodogram(&y, m_max)?,
            Method::Wblp => wavelet_ols_periodogram(w.as_ref().unwrap(), m_max)?,
            Method::Nkk => nkk_periodogram(w.as_ref().unwrap(), m_max, cfg.tol)?,
        });
    }

    let mut out = vec![vec![f64::NAN; grid.len()]; methods.len()];
    for (mi, &method) in methods.iter().enumerate() {
        for (gi, &m) in grid.iter().enumerate() {
            let prefix = wide[mi].prefix(m)?;
            let est = match method {
                Method::Gph => gph_from_ordinates(&prefix),
                Method::Wblp => wblp_from_ordinates(&prefix),
                Method::Nkk => nkk_from_ordinates(&prefix),
            };
            if let Ok(e) = est {
                out[mi][gi] = e.d_hat;
            }
        }
    }
    Ok(out)
}

/// Share of failed replications beyond which a cell is flagged unreliable.
const UNRELIABLE_PERCENT: usize = 20;

/// Aggregate raw estimates (NaN = failed replication) into a cell.
pub fn aggregate_cell(method: Method, m: usize, d_true: f64, estimates: &[f64]) -> SweepCell {
    let good: Vec<f64> = estimates
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .collect();
    let reps_used = good.len();
    let missing = estimates.len() - reps_used;
    let unreliable = missing * 100 > estimates.len() * UNRELIABLE_PERCENT;
    if reps_used == 0 {
        return SweepCell {
            method,
            m,
            mse: f64::NAN,
            bias: f64::NAN,
            variance: f64::NAN,
            mean_d_hat: f64::NAN,
            reps_used,
            unreliable,
        };
    }
    let mean = good.iter().sum::<f64>() / reps_used as f64;
    let bias = mean - d_true;
    // Population variance so that mse = bias² + variance holds exactly.
    let variance = good.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / reps_used as f64;
    let mse = good
        .iter()
        .map(|v| (v - d_true) * (v - d_true))
        .sum::<f64>()
        / reps_used as f64;
    SweepCell {
        method,
        m,
        mse,
        bias,
        variance,
        mean_d_hat: mean,
        reps_used,
        unreliable,
    }
}

/// Run a full Monte Carlo sweep.
///
/// `workers` is the rayon thread count; `0` means one thread per core. It
/// affects wall-clock time only — every number in the result is identical for
/// every worker count, because replication seeds are derived statelessly and
/// results are collected in replication order.
pub fn run_sweep(cfg: &SweepConfig, workers: usize) -> Result<SweepResult> {
    cfg.validate()?;
    let methods = cfg.canonical_methods();
    let grid = bandwidth_grid(cfg.n, cfg.lo_exp, cfg.hi_exp)?;

    let per_rep: Vec<Vec<Vec<f64>>> = if methods.is_empty() {
        Vec::new()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::invalid("workers", e.to_string()))?;
        pool.install(|| {
            (0..cfg.reps)
                .into_par_iter()
                .map(|r| replicate(cfg, &methods, &grid, r))
                .collect::<Result<Vec<_>>>()
        })?
    };

    // Transpose to raw[mi][gi][r].
    let mut raw = vec![vec![vec![f64::NAN; cfg.reps]; grid.len()]; methods.len()];
    for (r, rep) in per_rep.iter().enumerate() {
        for mi in 0..methods.len() {
            for gi in 0..grid.len() {
                raw[mi][gi][r] = rep[mi][gi];
            }
        }
    }

    let mut cells = Vec::with_capacity(methods.len() * grid.len());
    for (mi, &method) in methods.iter().enumerate() {
        for (gi, &m) in grid.iter().enumerate() {
            cells.push(aggregate_cell(method, m, cfg.d, &raw[mi][gi]));
        }
    }

    let seeds = (0..cfg.reps)
        .map(|r| replication_seed(cfg.base_seed, r as u64))
        .collect();

    Ok(SweepResult {
        config: cfg.clone(),
        grid,
        methods,
        cells,
        raw,
        seeds,
    })
}

/// Sample statistics of the finest-scale Haar transform of pure white noise:
/// `(lag0, lag1, lag2plus)` where `lag2plus = max |γ̂(h)|` over `h = 2..=8`.
///
/// The transform of independent noise is a first-difference process, i.e. an
/// MA(1) with autocovariances `γ(0) = 2σ²`, `γ(1) = −σ²`, `γ(h) = 0` beyond —
/// which is what makes a *least-squares* fit to its harmonics fragile under
/// heavy tails and motivates the LAD fit.
pub fn haar_noise_autocov_diagnostic(
    sigma_u2: f64,
    n: usize,
    seed: u64,
) -> Result<(f64, f64, f64)> {
    if !(sigma_u2 > 0.0) || !sigma_u2.is_finite() {
        return Err(Error::invalid(
            "sigma_u2",
            format!("need sigma_u2 > 0, got {sigma_u2}"),
        ));
    }
    let u = crate::datagen::fractional_noise(0.0, n, seed);
    let scale = sigma_u2.sqrt();
    let scaled: Vec<f64> = u.values().iter().map(|v| v * scale).collect();
    haar_noise_autocov_from(&scaled)
}

/// Same diagnostic from caller-supplied noise values.
pub fn haar_noise_autocov_from(u: &[f64]) -> Result<(f64, f64, f64)> {
    let n = u.len();
    if n < 16 {
        return Err(Error::invalid(
            "u",
            format!("need at least 16 samples, got {n}"),
        ));
    }
    // Unnormalized first difference with periodic wrap — the finest-scale
    // coefficients up to the constant 2^{J/2} factor, which would rescale
    // all autocovariances equally and is irrelevant to the shape.
    let beta: Vec<f64> = (0..n).map(|q| u[q] - u[(q + 1) % n]).collect();
    let mean = beta.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = beta.iter().map(|b| b - mean).collect();
    let gamma = |h: usize| -> f64 {
        (0..n - h)
            .map(|t| centered[t] * centered[t + h])
            .sum::<f64>()
            / n as f64
    };
    let lag0 = gamma(0);
    let lag1 = gamma(1);
    let lag2plus = (2..=8).map(|h| gamma(h).abs()).fold(0.0_f64, f64::max);
    Ok((lag0, lag1, lag2plus))
}
