//! Long-memory time-series toolkit.
//!
//! The crate covers the full pipeline used in long-memory volatility studies:
//!
//! * [`datagen`] — fractional noise, ARFIMA(1,d,0), and long-memory stochastic
//!   volatility (LMSV) generators with a splittable, fully reproducible seed
//!   contract.
//! * [`wavelet`] — the finest-scale Haar discrete wavelet transform and the
//!   Haar transfer-function magnitude.
//! * [`lad`] — an exact least-absolute-deviations solver for two-column
//!   harmonic regression (IRLS fast path plus a vertex-walk polish with a dual
//!   optimality certificate).
//! * [`spectra`] — the ordinary FFT periodogram and the two wavelet-domain
//!   periodograms (OLS amplitude and robust LAD amplitude).
//! * [`estimators`] — the GPH, WBLP, and NKK log-periodogram regression
//!   estimators of the memory parameter `d`, plus bandwidth utilities.
//! * [`experiments`] — a Monte Carlo harness sweeping bandwidth grids over
//!   many replications with deterministic, order-independent aggregation.
//! * [`io`] — CSV/JSON artifact reading and writing for all of the above.
//!
//! All randomness flows through explicit 64-bit seeds; identical configs
//! produce bit-identical output regardless of thread count.

pub mod datagen;
pub mod error;
pub mod estimators;
pub mod experiments;
pub mod io;
pub mod lad;
pub mod rng;
pub mod series;
pub mod spectra;
pub mod wavelet;

pub use error::{Error, Result};
pub use series::TimeSeries;
