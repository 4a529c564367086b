//! Weights Ω(x) entering ∫|∇f|²Ω dν, all functions of ω = σ_ref + |x|².

use serde::Serialize;

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum WeightKind {
    /// ω log ω
    OmegaLog,
    /// ω (κ₀ + log ω)
    OmegaAffineLog(f64),
    /// ω (κ₀ + log ω)²
    OmegaAffineLogSquared(f64),
    /// ω²
    OmegaSquared,
    /// constant c
    Constant(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Weight {
    pub kind: WeightKind,
    pub sigma_ref: f64,
}

impl Weight {
    pub fn new(kind: WeightKind, sigma_ref: f64) -> Result<Self> {
        if !(sigma_ref >= 1.0) || !sigma_ref.is_finite() {
            return Err(domain(format!("weight sigma_ref must be >= 1, got {sigma_ref}")));
        }
        match kind {
            WeightKind::OmegaLog if sigma_ref <= 1.0 => {
                return Err(domain("omega*log(omega) needs sigma_ref > 1 to be positive"));
            }
            WeightKind::OmegaAffineLog(k) | WeightKind::OmegaAffineLogSquared(k)
                if !(k > 0.0) || !k.is_finite() =>
            {
                return Err(domain(format!("kappa0 must be positive, got {k}")));
            }
            WeightKind::Constant(c) if !(c > 0.0) || !c.is_finite() => {
                return Err(domain(format!("constant weight must be positive, got {c}")));
            }
            _ => {}
        }
        Ok(Self { kind, sigma_ref })
    }

    pub fn omega_log(sigma: f64) -> Result<Self> {
        Self::new(WeightKind::OmegaLog, sigma)
    }

    /// ω(κ + log ω) with ω = 1 + |x|² and κ = 2β/(2β−1).
    pub fn corollary_1d(beta: f64) -> Result<Self> {
        Self::new(WeightKind::OmegaAffineLog(2.0 * beta / (2.0 * beta - 1.0)), 1.0)
    }

    /// Ω evaluated at squared radius r².
    #[inline]
    pub fn eval_r2(&self, r2: f64) -> f64 {
        let w = self.sigma_ref + r2;
        match self.kind {
            WeightKind::OmegaLog => w * w.ln(),
            WeightKind::OmegaAffineLog(k) => w * (k + w.ln()),
            WeightKind::OmegaAffineLogSquared(k) => {
                let l = k + w.ln();
                w * l * l
            }
            WeightKind::OmegaSquared => w * w,
            WeightKind::Constant(c) => c,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.eval_r2(x.iter().map(|v| v * v).sum())
    }

    /// Power of ω governing the tail growth (logarithmic factors ignored).
    pub fn growth_power(&self) -> f64 {
        match self.kind {
            WeightKind::OmegaLog
            | WeightKind::OmegaAffineLog(_)
            | WeightKind::OmegaAffineLogSquared(_) => 1.0,
            WeightKind::OmegaSquared => 2.0,
            WeightKind::Constant(_) => 0.0,
        }
    }

    pub fn id(&self) -> String {
        match self.kind {
            WeightKind::OmegaLog => format!("omega_log(s={})", self.sigma_ref),
            WeightKind::OmegaAffineLog(k) => format!("omega_affine_log(k={k},s={})", self.sigma_ref),
            WeightKind::OmegaAffineLogSquared(k) => {
                format!("omega_affine_log_sq(k={k},s={})", self.sigma_ref)
            }
            WeightKind::OmegaSquared => format!("omega_sq(s={})", self.sigma_ref),
            WeightKind::Constant(c) => format!("constant({c})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Weight::omega_log(1.0).is_err());
        assert!(Weight::omega_log(1.5).is_ok());
        assert!(Weight::new(WeightKind::OmegaAffineLog(0.0), 1.0).is_err());
        assert!(Weight::new(WeightKind::OmegaAffineLogSquared(-1.0), 1.0).is_err());
        assert!(Weight::new(WeightKind::Constant(0.0), 1.0).is_err());
        assert!(Weight::new(WeightKind::OmegaSquared, 0.5).is_err());
    }

    #[test]
    fn values() {
        let e2 = 1f64.exp().powi(2);
        assert!((Weight::omega_log(e2).unwrap().eval_r2(0.0) - 2.0 * e2).abs() < 1e-14);
        let c = Weight::corollary_1d(1.0).unwrap();
        assert_eq!(c.kind, WeightKind::OmegaAffineLog(2.0));
        assert!((c.eval(&[0.0]) - 2.0).abs() < 1e-15);
        let sq = Weight::new(WeightKind::OmegaAffineLogSquared(1.5), 1.0).unwrap();
        assert!((sq.eval(&[1.0, 0.0]) - 2.0 * (1.5 + 2f64.ln()).powi(2)).abs() < 1e-14);
        assert_eq!(Weight::new(WeightKind::OmegaSquared, 1.0).unwrap().eval(&[1.0]), 4.0);
    }
}
