//! Rescaled generalised Cauchy measures μ_{β,σ}(dx) ∝ (σ + |x|²)^{-β} dx on ℝⁿ.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::special::{digamma, ln_gamma};

/// Smallest admissible distance of β from the integrability edge n/2.
pub const INTEGRABILITY_GUARD: f64 = 1e-6;

/// Draws per deterministic sampling chunk.
const SAMPLE_CHUNK: usize = 8192;

/// Dimension, shape and scale of μ_{β,σ}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureParams {
    pub n: usize,
    pub beta: f64,
    pub sigma: f64,
}

impl MeasureParams {
    pub fn new(n: usize, beta: f64, sigma: f64) -> Result<Self> {
        if n == 0 {
            return Err(domain("dimension must be positive"));
        }
        if !beta.is_finite() || !sigma.is_finite() {
            return Err(domain(format!("non-finite parameters beta={beta}, sigma={sigma}")));
        }
        if sigma < 1.0 {
            return Err(domain(format!("sigma = {sigma} < 1")));
        }
        let half = n as f64 / 2.0;
        if beta - half < INTEGRABILITY_GUARD {
            return Err(domain(format!(
                "beta = {beta} too close to or below n/2 = {half}"
            )));
        }
        Ok(Self { n, beta, sigma })
    }

    /// The classical measure μ_β (σ = 1).
    pub fn classical(n: usize, beta: f64) -> Result<Self> {
        Self::new(n, beta, 1.0)
    }

    pub fn with_beta(self, beta: f64) -> Result<Self> {
        Self::new(self.n, beta, self.sigma)
    }

    pub fn with_sigma(self, sigma: f64) -> Result<Self> {
        Self::new(self.n, self.beta, sigma)
    }

    /// ω(x) = σ + |x|² from the squared radius.
    #[inline]
    pub fn omega(&self, r2: f64) -> f64 {
        self.sigma + r2
    }

    /// Distance β − n/2 to the integrability edge.
    pub fn alpha(&self) -> f64 {
        self.beta - self.n as f64 / 2.0
    }
}

/// log Z for arbitrary β > n/2; no guard beyond integrability.
pub(crate) fn log_normalization_raw(n: usize, beta: f64, sigma: f64) -> f64 {
    let half = n as f64 / 2.0;
    half * PI.ln() + ln_gamma(beta - half) - ln_gamma(beta) + (half - beta) * sigma.ln()
}

/// ∫ log ω dμ_{β,σ} for arbitrary β > n/2.
pub(crate) fn log_omega_moment_raw(n: usize, beta: f64, sigma: f64) -> f64 {
    digamma(beta) - digamma(beta - n as f64 / 2.0) + sigma.ln()
}

/// log Z^{(n)}_{β,σ} = (n/2) log π + log Γ(β − n/2) − log Γ(β) + (n/2 − β) log σ.
pub fn log_normalization(p: &MeasureParams) -> f64 {
    log_normalization_raw(p.n, p.beta, p.sigma)
}

/// log of the density at a point, computed without leaving log-space.
pub fn log_density(x: &[f64], p: &MeasureParams) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    log_density_r2(r2, p)
}

#[inline]
pub(crate) fn log_density_r2(r2: f64, p: &MeasureParams) -> f64 {
    -p.beta * (p.sigma + r2).ln() - log_normalization(p)
}

/// Density (σ + |x|²)^{-β} / Z.
pub fn density(x: &[f64], p: &MeasureParams) -> Result<f64> {
    if x.len() != p.n {
        return Err(Error::Precondition(format!(
            "point has dimension {} but measure has n = {}",
            x.len(),
            p.n
        )));
    }
    Ok(log_density(x, p).exp())
}

/// ∫ log(σ + |x|²) dμ_{β,σ} = ψ(β) − ψ(β − n/2) + log σ.
pub fn log_omega_moment(p: &MeasureParams) -> f64 {
    log_omega_moment_raw(p.n, p.beta, p.sigma)
}

/// Sub-seed for chunk `index`; splitmix64 finaliser over (seed, index).
pub(crate) fn chunk_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// I.i.d. draws X = √σ · G / √W with G standard Gaussian in ℝⁿ and W
/// chi-squared with 2β − n degrees of freedom (drawn as Gamma(β − n/2, 2)).
///
/// Output is a function of `(p, count, seed)` only; chunks carry their own
/// sub-seeds so the thread count does not matter.
pub fn sample(p: &MeasureParams, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if count == 0 {
        return Err(Error::Precondition("sample count must be at least 1".into()));
    }
    let chi2 = Gamma::new(p.alpha(), 2.0).map_err(|e| domain(e.to_string()))?;
    let scale = p.sigma.sqrt();
    let n = p.n;
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    let out: Vec<Vec<Vec<f64>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let len = SAMPLE_CHUNK.min(count - c * SAMPLE_CHUNK);
            let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed, c as u64));
            (0..len)
                .map(|_| {
                    let w: f64 = chi2.sample(&mut rng);
                    let k = scale / w.sqrt();
                    (0..n)
                        .map(|_| {
                            let g: f64 = StandardNormal.sample(&mut rng);
                            k * g
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

/// Reference measure a functional is integrated against.
///
/// The Gaussian mode (standard normal on ℝⁿ) exists for calibration and for
/// large-β comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Measure {
    Cauchy(MeasureParams),
    Gaussian { n: usize },
}

impl From<MeasureParams> for Measure {
    fn from(p: MeasureParams) -> Self {
        Measure::Cauchy(p)
    }
}

impl Measure {
    pub fn dim(&self) -> usize {
        match self {
            Measure::Cauchy(p) => p.n,
            Measure::Gaussian { n } => *n,
        }
    }

    /// Log-density as a function of the squared radius.
    #[inline]
    pub fn log_density_r2(&self, r2: f64) -> f64 {
        match self {
            Measure::Cauchy(p) => log_density_r2(r2, p),
            Measure::Gaussian { n } => -0.5 * r2 - 0.5 * (*n as f64) * (2.0 * PI).ln(),
        }
    }

    /// Length scale used by compactifying substitutions.
    pub fn scale(&self) -> f64 {
        match self {
            Measure::Cauchy(p) => p.sigma.sqrt(),
            Measure::Gaussian { .. } => 1.0,
        }
    }

    pub fn sample(&self, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
        match self {
            Measure::Cauchy(p) => sample(p, count, seed),
            Measure::Gaussian { n } => {
                if count == 0 {
                    return Err(Error::Precondition("sample count must be at least 1".into()));
                }
                let n = *n;
                let chunks = count.div_ceil(SAMPLE_CHUNK);
                let out: Vec<Vec<Vec<f64>>> = (0..chunks)
                    .into_par_iter()
                    .map(|c| {
                        let len = SAMPLE_CHUNK.min(count - c * SAMPLE_CHUNK);
                        let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed, c as u64));
                        (0..len)
                            .map(|_| (0..n).map(|_| StandardNormal.sample(&mut rng)).collect())
                            .collect()
                    })
                    .collect();
                Ok(out.into_iter().flatten().collect())
            }
        }
    }
}
