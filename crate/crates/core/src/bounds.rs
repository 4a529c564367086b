//! Explicit log-Sobolev constants, the closed-form power-function family
//! f_ε = ω^ε, and battery checks of the weighted inequalities
//! Ent_μ(f²) ≤ C ∫|∇f|²Ω dμ.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::functionals::{lsi_ratio, EstimateMethod, IntegrationConfig, LsiEstimate, Method};
use crate::measure::{log_normalization_raw, log_omega_moment_raw, Measure, MeasureParams};
use crate::report::{CheckRecord, Status};
use crate::special::trigamma;
use crate::testfn::{Family, TestFunction};
use crate::weight::{Weight, WeightKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCatalog {
    pub n: usize,
    pub beta: f64,
    /// 2/(2β−n)
    pub lower_bound: f64,
    /// 2/(2β−1)
    pub corollary_1d_constant: f64,
    /// 2β/(2β−1)
    pub corollary_1d_kappa: f64,
    /// 4/(2β−n)
    pub theorem_nd_constant: f64,
    /// 2(n−2)/(2β−n)
    pub theorem_nd_log_sigma0: f64,
    /// (3n−2)/4
    pub beta_max_basic: f64,
    /// ((2+√13)n + 2 − 2√13)/6
    pub beta_max_extended: f64,
    /// 1/(2β−1)
    pub omega_sq_constant: f64,
}

pub fn bound_catalog(n: usize, beta: f64) -> Result<BoundCatalog> {
    let nf = n as f64;
    if n == 0 || !(beta > nf / 2.0) || !beta.is_finite() {
        return Err(domain(format!("catalog needs beta > n/2 (n = {n}, beta = {beta})")));
    }
    let d = 2.0 * beta - nf;
    let s13 = 13f64.sqrt();
    Ok(BoundCatalog {
        n,
        beta,
        lower_bound: 2.0 / d,
        corollary_1d_constant: 2.0 / (2.0 * beta - 1.0),
        corollary_1d_kappa: 2.0 * beta / (2.0 * beta - 1.0),
        theorem_nd_constant: 4.0 / d,
        theorem_nd_log_sigma0: 2.0 * (nf - 2.0) / d,
        beta_max_basic: (3.0 * nf - 2.0) / 4.0,
        beta_max_extended: ((2.0 + s13) * nf + 2.0 - 2.0 * s13) / 6.0,
        omega_sq_constant: 1.0 / (2.0 * beta - 1.0),
    })
}

/// E_{μ_{β,σ}}[ω^a log^j ω] for j ∈ {0, 1, 2}.
fn power_moment(p: &MeasureParams, a: f64, j: u32) -> Result<f64> {
    let (n, beta, sigma) = (p.n, p.beta, p.sigma);
    let shifted = beta - a;
    let alpha = shifted - n as f64 / 2.0;
    if !(alpha > 0.0) {
        return Err(Error::Integrability(format!(
            "E[omega^{a}] diverges for n = {n}, beta = {beta}"
        )));
    }
    let ratio = (log_normalization_raw(n, shifted, sigma) - log_normalization_raw(n, beta, sigma)).exp();
    let i1 = log_omega_moment_raw(n, shifted, sigma);
    Ok(ratio
        * match j {
            0 => 1.0,
            1 => i1,
            _ => trigamma(alpha) - trigamma(shifted) + i1 * i1,
        })
}

fn check_eps(eps: f64, p: &MeasureParams) -> Result<()> {
    let edge = (2.0 * p.beta - p.n as f64) / 4.0;
    if !(eps > 0.0) || !(eps < edge) {
        return Err(domain(format!("power family needs 0 < eps < (2beta-n)/4 = {edge}, got {eps}")));
    }
    Ok(())
}

/// Ent_{μ_{β,σ}}(f_ε²) for f_ε = ω^ε, from normalising constants and the
/// log-moment at β − 2ε.
pub fn power_entropy(eps: f64, p: &MeasureParams) -> Result<f64> {
    check_eps(eps, p)?;
    let s = 2.0 * eps;
    let m0 = power_moment(p, s, 0)?;
    let m1 = power_moment(p, s, 1)?;
    Ok(s * m1 - m0 * m0.ln())
}

/// ∫|∇f_ε|² ω log ω dμ_{β,σ}.
pub fn power_energy(eps: f64, p: &MeasureParams) -> Result<f64> {
    check_eps(eps, p)?;
    power_energy_weighted(eps, p, &Weight { kind: WeightKind::OmegaLog, sigma_ref: p.sigma })
}

/// ∫|∇f_ε|²Ω dμ_{β,σ} for any weight built on the same ω (σ_ref = σ).
pub fn power_energy_weighted(eps: f64, p: &MeasureParams, w: &Weight) -> Result<f64> {
    if w.sigma_ref != p.sigma {
        return Err(Error::Precondition(
            "closed-form energy needs the weight and the measure to share sigma".into(),
        ));
    }
    let s = 2.0 * eps;
    let sig = p.sigma;
    // |∇f_ε|² = 4ε² ω^{s−2}(ω − σ)
    let diff = |a: f64, j: u32| -> Result<f64> {
        Ok(power_moment(p, a + s - 1.0, j)? - sig * power_moment(p, a + s - 2.0, j)?)
    };
    let core = match w.kind {
        WeightKind::OmegaLog => diff(1.0, 1)?,
        WeightKind::OmegaAffineLog(k) => k * diff(1.0, 0)? + diff(1.0, 1)?,
        WeightKind::OmegaAffineLogSquared(k) => {
            k * k * diff(1.0, 0)? + 2.0 * k * diff(1.0, 1)? + diff(1.0, 2)?
        }
        WeightKind::OmegaSquared => diff(2.0, 0)?,
        WeightKind::Constant(c) => c * diff(0.0, 0)?,
    };
    Ok(4.0 * eps * eps * core)
}

/// Largest ε for which f_ε is square-integrable and has finite energy
/// under `w` on μ_{β,σ}.
pub fn power_eps_edge(p: &MeasureParams, w: &Weight) -> f64 {
    let budget = 2.0 * p.beta - p.n as f64;
    (budget / 4.0).min((budget + 2.0 - 2.0 * w.growth_power()) / 4.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerBoundLimit {
    pub eps: Vec<f64>,
    pub alpha: Vec<f64>,
    pub ratios: Vec<f64>,
    pub extrapolated: f64,
    pub target: f64,
    pub monotone: bool,
}

/// Entropy/energy ratios of f_ε (weight ω log ω) as ε approaches
/// (2β−n)/4, with an extrapolated limit.
///
/// The default sequence is ε_k = (2β−n)/4·(1 − 10^{−k}), k = 1..6. The
/// limit is extrapolated from the last two points assuming a correction
/// proportional to α log(1/α), α = β − 2ε − n/2.
pub fn lower_bound_ratio_limit(p: &MeasureParams, eps_sequence: Option<&[f64]>) -> Result<LowerBoundLimit> {
    if !(p.sigma > 1.0) {
        return Err(domain("the omega log omega weight needs sigma > 1"));
    }
    let edge = (2.0 * p.beta - p.n as f64) / 4.0;
    let default: Vec<f64> = (1..=6).map(|k| edge * (1.0 - 10f64.powi(-k))).collect();
    let seq = eps_sequence.map(|s| s.to_vec()).unwrap_or(default);
    if seq.len() < 2 {
        return Err(domain("need at least two eps values"));
    }
    let mut eps = Vec::new();
    let mut alpha = Vec::new();
    let mut ratios = Vec::new();
    for &e in &seq {
        let a = p.beta - 2.0 * e - p.n as f64 / 2.0;
        // stop once α is too small to resolve against β
        if a < 1e-7 * p.beta.max(1.0) {
            break;
        }
        let ent = power_entropy(e, p)?;
        let en = power_energy(e, p)?;
        eps.push(e);
        alpha.push(a);
        ratios.push(ent / en);
    }
    if ratios.len() < 2 {
        return Err(domain("eps sequence too close to the edge"));
    }
    let k = ratios.len();
    let u = |a: f64| a * (1.0 / a).ln();
    let (u1, u2) = (u(alpha[k - 2]), u(alpha[k - 1]));
    let (r1, r2) = (ratios[k - 2], ratios[k - 1]);
    let extrapolated = if (u1 - u2).abs() > 0.0 { (r2 * u1 - r1 * u2) / (u1 - u2) } else { r2 };
    let monotone = ratios.windows(2).all(|w| w[1] >= w[0]);
    Ok(LowerBoundLimit {
        eps,
        alpha,
        ratios,
        extrapolated,
        target: 2.0 / (2.0 * p.beta - p.n as f64),
        monotone,
    })
}

/// The fixed twelve-function battery for dimension n on μ_{β,σ} with
/// weight `w`: three power functions, six Gaussian bumps, two spline bumps
/// and one exponential.
pub fn standard_battery(p: &MeasureParams, w: &Weight) -> Vec<TestFunction> {
    let n = p.n;
    let s = p.sigma.sqrt();
    let axis = |c: f64| {
        let mut v = vec![0.0; n];
        v[0] = c * s;
        v
    };
    let mut out = Vec::with_capacity(12);
    let edge = power_eps_edge(p, w);
    for frac in [0.25, 0.5, 0.75] {
        // kept even when edge ≤ 0 so the battery always has twelve entries;
        // such members are skipped as non-integrable
        let eps = if edge > 0.0 { frac * edge } else { 0.25 * frac };
        out.push(TestFunction { dim: n, family: Family::PowerOmega { eps, sigma: p.sigma } });
    }
    for c in [0.0, 1.0, 2.5] {
        for width in [0.5, 1.5] {
            out.push(TestFunction {
                dim: n,
                family: Family::GaussianBump { center: axis(c), width: width * s },
            });
        }
    }
    out.push(TestFunction { dim: n, family: Family::SplineBump { center: axis(0.0), half_width: 2.0 * s } });
    out.push(TestFunction { dim: n, family: Family::SplineBump { center: axis(1.5), half_width: 1.0 * s } });
    out.push(TestFunction { dim: n, family: Family::ExponentialHalf { a: 1.0 } });
    out
}

/// Outcome of one inequality check on one function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LsiCheck {
    pub record: CheckRecord,
    pub estimate: Option<LsiEstimate>,
}

/// Closed-form estimate for f_ε when the weight shares the measure's ω.
fn closed_form_estimate(
    f: &TestFunction,
    w: &Weight,
    p: &MeasureParams,
    constant: f64,
) -> Option<Result<LsiEstimate>> {
    let Family::PowerOmega { eps, sigma } = f.family else {
        return None;
    };
    if sigma != p.sigma || w.sigma_ref != p.sigma {
        return None;
    }
    let run = || -> Result<LsiEstimate> {
        if !(eps < power_eps_edge(p, w)) {
            return Err(Error::Integrability(format!("{} outside the integrable range", f.id())));
        }
        let s = 2.0 * eps;
        let m0 = power_moment(p, s, 0)?;
        let ent = s * power_moment(p, s, 1)? - m0 * m0.ln();
        let en = power_energy_weighted(eps, p, w)?;
        Ok(LsiEstimate {
            function: f.id(),
            entropy: ent,
            energy: en,
            ratio: (en > 0.0).then(|| ent / en),
            entropy_err: 1e-12 * ent.abs().max(1e-300),
            energy_err: 1e-12 * en.abs().max(1e-300),
            method: EstimateMethod::ClosedForm,
            claimed_constant: Some(constant),
        })
    };
    Some(run())
}

/// Checks Ent(f²) ≤ C∫|∇f|²Ω dμ + slack, slack = 3(entropy_err + C·energy_err).
///
/// In n = 3 every numerically integrated function is cross-checked against
/// Monte Carlo: entropy and energy must agree within 4 standard errors plus
/// the quadrature error estimate.
pub fn check_inequality(
    check_id: &str,
    f: &TestFunction,
    w: &Weight,
    p: &MeasureParams,
    constant: f64,
    cfg: &IntegrationConfig,
) -> LsiCheck {
    let base = CheckRecord::new(format!("{check_id}/{}", f.id()), p.n, p.beta, p.sigma).weight(w.id());
    let est = match closed_form_estimate(f, w, p, constant) {
        Some(r) => r,
        None => lsi_ratio(f, w, *p, cfg, Some(constant)),
    };
    let est = match est {
        Ok(e) => e,
        Err(Error::Integrability(msg)) => {
            return LsiCheck { record: base.skip(format!("not integrable: {msg}")), estimate: None };
        }
        Err(e) => return LsiCheck { record: base.fail(e.to_string()), estimate: None },
    };
    let Some(ratio) = est.ratio else {
        return LsiCheck { record: base.skip("degenerate: zero energy"), estimate: Some(est) };
    };
    let slack = 3.0 * (est.entropy_err + constant * est.energy_err);
    let mut record = base.upper(ratio, constant, slack / est.energy);
    if p.n == 3 && est.method == EstimateMethod::Quadrature && cfg.method != Method::MonteCarlo {
        match lsi_ratio(f, w, *p, &cfg.monte_carlo(), None) {
            Ok(mc) => {
                let de = (mc.entropy - est.entropy).abs();
                let dn = (mc.energy - est.energy).abs();
                let ok = de <= 4.0 * mc.entropy_err + est.entropy_err
                    && dn <= 4.0 * mc.energy_err + est.energy_err;
                record.note = format!(
                    "mc cross-check: entropy {:.6e}±{:.1e}, energy {:.6e}±{:.1e}",
                    mc.entropy, mc.entropy_err, mc.energy, mc.energy_err
                );
                if !ok {
                    record.status = Status::Fail;
                    record.note.insert_str(0, "quadrature/MC disagreement; ");
                }
            }
            Err(e) => {
                record.status = Status::Fail;
                record.note = format!("mc cross-check failed: {e}");
            }
        }
    }
    LsiCheck { record, estimate: Some(est) }
}

fn run_battery(
    check_id: &str,
    functions: &[TestFunction],
    w: &Weight,
    p: &MeasureParams,
    constant: f64,
    cfg: &IntegrationConfig,
) -> Vec<LsiCheck> {
    functions.iter().map(|f| check_inequality(check_id, f, w, p, constant, cfg)).collect()
}

/// One-dimensional inequality with weight ω(2β/(2β−1) + log ω) on μ_β and
/// constant 2/(2β−1).
pub fn verify_corollary_1d(beta: f64, functions: &[TestFunction], cfg: &IntegrationConfig) -> Result<Vec<LsiCheck>> {
    let p = MeasureParams::classical(1, beta)?;
    let w = Weight::corollary_1d(beta)?;
    Ok(run_battery("corollary_1d", functions, &w, &p, 2.0 / (2.0 * beta - 1.0), cfg))
}

/// Weight (1+|x|²)(log σ₀ + log(1+|x|²)), log σ₀ = 2(n−2)/(2β−n).
pub fn theorem_nd_weight(n: usize, beta: f64) -> Result<Weight> {
    let cat = bound_catalog(n, beta)?;
    Weight::new(WeightKind::OmegaAffineLog(cat.theorem_nd_log_sigma0), 1.0)
}

/// n-dimensional inequality with constant 4/(2β−n), for n ≥ 3 and
/// n/2 < β ≤ ((2+√13)n + 2 − 2√13)/6.
pub fn verify_theorem_nd(
    n: usize,
    beta: f64,
    functions: &[TestFunction],
    cfg: &IntegrationConfig,
) -> Result<Vec<LsiCheck>> {
    if n < 3 {
        return Err(Error::Precondition("the n-dimensional theorem needs n >= 3".into()));
    }
    let cat = bound_catalog(n, beta)?;
    if beta > cat.beta_max_extended {
        return Err(Error::Precondition(format!(
            "beta = {beta} exceeds the admissible range (<= {})",
            cat.beta_max_extended
        )));
    }
    let p = MeasureParams::classical(n, beta)?;
    let w = theorem_nd_weight(n, beta)?;
    Ok(run_battery("theorem_nd", functions, &w, &p, cat.theorem_nd_constant, cfg))
}

/// Weight (1+|x|²)² with constant 1/(2β−1), for β > (n+1)/2.
pub fn verify_omega_sq(
    n: usize,
    beta: f64,
    functions: &[TestFunction],
    cfg: &IntegrationConfig,
) -> Result<Vec<LsiCheck>> {
    if !(beta > (n as f64 + 1.0) / 2.0) {
        return Err(Error::Precondition(format!("needs beta > (n+1)/2 = {}", (n as f64 + 1.0) / 2.0)));
    }
    let p = MeasureParams::classical(n, beta)?;
    let w = Weight::new(WeightKind::OmegaSquared, 1.0)?;
    Ok(run_battery("omega_sq", functions, &w, &p, 1.0 / (2.0 * beta - 1.0), cfg))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalBest {
    /// Largest ratio found.
    pub value: f64,
    /// Its numerical error in ratio units.
    pub err: f64,
    pub function: String,
    pub evaluated: usize,
}

/// Largest entropy/energy ratio over power functions approaching the
/// integrability edge, Gaussian bumps on a centre/width grid and centred
/// spline bumps. The measure is μ_{β,σ} with σ = the weight's σ_ref. The
/// result is a lower bound on the optimal constant for (μ, Ω).
pub fn empirical_best_constant(
    n: usize,
    beta: f64,
    w: &Weight,
    family_budget: usize,
    cfg: &IntegrationConfig,
) -> Result<EmpiricalBest> {
    let p = MeasureParams::new(n, beta, w.sigma_ref)?;
    let budget = family_budget.max(2);
    let s = p.sigma.sqrt();
    let mut fns = Vec::new();
    let edge = power_eps_edge(&p, w);
    if edge > 0.0 {
        for k in 1..=budget {
            // geometric approach to the edge, down to 10^{-6}
            let gap = 10f64.powf(-6.0 * k as f64 / budget as f64);
            fns.push(TestFunction { dim: n, family: Family::PowerOmega { eps: edge * (1.0 - gap), sigma: p.sigma } });
        }
    }
    let geo = |lo: f64, hi: f64, k: usize, m: usize| lo * (hi / lo).powf(k as f64 / (m.max(2) - 1) as f64);
    let centers = if n <= 2 { vec![0.0, 1.0] } else { vec![0.0] };
    let per_center = budget.div_ceil(centers.len());
    for &c in &centers {
        for k in 0..per_center {
            let mut center = vec![0.0; n];
            center[0] = c * s;
            fns.push(TestFunction {
                dim: n,
                family: Family::GaussianBump { center, width: geo(0.2, 5.0, k, per_center) * s },
            });
        }
    }
    for k in 0..budget {
        fns.push(TestFunction {
            dim: n,
            family: Family::SplineBump { center: vec![0.0; n], half_width: geo(0.5, 8.0, k, budget) * s },
        });
    }
    let mut best = EmpiricalBest { value: f64::NEG_INFINITY, err: 0.0, function: String::new(), evaluated: 0 };
    for f in &fns {
        let est = match closed_form_estimate(f, w, &p, f64::NAN) {
            Some(r) => r,
            None => lsi_ratio(f, w, p, cfg, None),
        };
        let Ok(est) = est else { continue };
        let Some(r) = est.ratio else { continue };
        best.evaluated += 1;
        if r > best.value {
            best.value = r;
            best.err = (est.entropy_err + r * est.energy_err) / est.energy;
            best.function = est.function.clone();
        }
    }
    if best.evaluated == 0 {
        return Err(Error::SearchExhausted("no test function could be evaluated".into()));
    }
    Ok(best)
}

/// Convenience: the measure a battery check runs on.
pub fn classical_measure(n: usize, beta: f64) -> Result<Measure> {
    Ok(MeasureParams::classical(n, beta)?.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{dirichlet_energy, entropy};
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    fn cfg() -> IntegrationConfig {
        IntegrationConfig::default()
    }

    #[test]
    fn catalog_examples() {
        let c = bound_catalog(1, 1.0).unwrap();
        assert_eq!((c.lower_bound, c.corollary_1d_constant, c.corollary_1d_kappa), (2.0, 2.0, 2.0));
        let c = bound_catalog(3, 1.75).unwrap();
        assert_relative_eq!(c.theorem_nd_constant, 8.0, max_relative = 1e-15);
        assert_relative_eq!(c.theorem_nd_log_sigma0, 4.0, max_relative = 1e-15);
        assert_eq!(c.beta_max_basic, 1.75);
        assert_relative_eq!(c.beta_max_extended, (8.0 + 13f64.sqrt()) / 6.0, max_relative = 1e-15);
        assert!((c.beta_max_extended - 1.934_259).abs() < 1e-6);
        assert_eq!(c.theorem_nd_constant / c.lower_bound, 2.0);
        assert!(bound_catalog(2, 1.0).is_err());
        for b in [0.6, 1.0, 3.0] {
            let c = bound_catalog(1, b).unwrap();
            assert_eq!(c.lower_bound, c.corollary_1d_constant);
        }
    }

    #[test]
    fn power_closed_forms_match_quadrature_1d() {
        let p = MeasureParams::new(1, 1.0, E * E).unwrap();
        let w = Weight::omega_log(E * E).unwrap();
        for eps in [0.05, 0.1, 0.15] {
            let f = TestFunction::power_omega(1, eps, E * E).unwrap();
            let e = entropy(&f, p, &cfg()).unwrap();
            let en = dirichlet_energy(&f, &w, p, &cfg()).unwrap();
            assert!((e.value - power_entropy(eps, &p).unwrap()).abs() < 1e-8, "{eps}");
            assert!((en.value - power_energy(eps, &p).unwrap()).abs() < 1e-8, "{eps}");
        }
    }

    #[test]
    fn power_closed_forms_match_quadrature_2d() {
        let p = MeasureParams::new(2, 1.5, 2.0).unwrap();
        let w = Weight::omega_log(2.0).unwrap();
        for eps in [0.05, 0.1, 0.15] {
            let f = TestFunction::power_omega(2, eps, 2.0).unwrap();
            // Cartesian route, bypassing the radial shortcut
            let m: Measure = p.into();
            let c = IntegrationConfig { rel_tol: 1e-8, ..cfg() };
            let e = crate::functionals::integrate(&m, |x| {
                let v = f.value(x);
                let g = f.gradient(x);
                [v * v, v * v * (v * v).ln(), (g[0] * g[0] + g[1] * g[1]) * w.eval(x)]
            }, &c)
            .unwrap();
            let ent = e.value[1] - e.value[0] * e.value[0].ln();
            assert!((ent - power_entropy(eps, &p).unwrap()).abs() < 1e-5, "{eps}");
            assert!((e.value[2] - power_energy(eps, &p).unwrap()).abs() < 1e-5, "{eps}");
        }
        assert!(power_energy(0.2, &p).unwrap().is_finite());
        assert!(power_energy(0.25, &p).is_err());
    }

    #[test]
    fn weighted_closed_forms_match_quadrature() {
        let p = MeasureParams::new(1, 2.0, 1.0).unwrap();
        for kind in [
            WeightKind::OmegaAffineLog(1.3),
            WeightKind::OmegaAffineLogSquared(0.7),
            WeightKind::OmegaSquared,
            WeightKind::Constant(2.0),
        ] {
            let w = Weight::new(kind, 1.0).unwrap();
            let eps = 0.5 * power_eps_edge(&p, &w);
            let f = TestFunction::power_omega(1, eps, 1.0).unwrap();
            let q = dirichlet_energy(&f, &w, p, &cfg()).unwrap();
            assert_relative_eq!(q.value, power_energy_weighted(eps, &p, &w).unwrap(), max_relative = 1e-8);
        }
    }

    #[test]
    fn power_small_eps_is_quadratic() {
        let p = MeasureParams::new(1, 1.0, E * E).unwrap();
        let a = power_entropy(1e-4, &p).unwrap();
        let b = power_entropy(2e-4, &p).unwrap();
        assert!((b / a - 4.0).abs() < 0.05);
        let a = power_energy(1e-4, &p).unwrap();
        let b = power_energy(2e-4, &p).unwrap();
        assert!((b / a - 4.0).abs() < 0.05);
        assert!(power_entropy(0.25, &p).is_err());
        assert!(power_entropy(0.0, &p).is_err());
    }

    #[test]
    fn lower_bound_limits() {
        let r = lower_bound_ratio_limit(&MeasureParams::new(1, 1.0, E * E).unwrap(), None).unwrap();
        assert!((r.extrapolated - 2.0).abs() < 1e-2, "{r:?}");
        assert!(r.monotone);
        let r = lower_bound_ratio_limit(&MeasureParams::new(1, 1.5, E.powf(1.5)).unwrap(), None).unwrap();
        assert!((r.extrapolated - 1.0).abs() < 1e-2, "{r:?}");
    }

    #[test]
    fn battery_has_twelve_members() {
        let p = MeasureParams::classical(2, 2.0).unwrap();
        let w = Weight::new(WeightKind::OmegaAffineLog(1.0), 1.0).unwrap();
        assert_eq!(standard_battery(&p, &w).len(), 12);
    }

    #[test]
    fn corollary_examples() {
        let fns = vec![
            TestFunction::gaussian_bump(vec![0.0], 1.0).unwrap(),
            TestFunction::power_omega(1, 0.1, 1.0).unwrap(),
            TestFunction::constant(1, 1.0).unwrap(),
        ];
        let out = verify_corollary_1d(1.0, &fns, &cfg()).unwrap();
        assert!(out[0].record.passed() && out[1].record.passed());
        assert_eq!(out[2].record.status, Status::Skip);
    }

    #[test]
    fn omega_sq_precondition() {
        let fns = vec![TestFunction::gaussian_bump(vec![0.0], 1.0).unwrap()];
        assert!(verify_omega_sq(1, 1.0, &fns, &cfg()).is_err());
        let out = verify_omega_sq(1, 1.5, &fns, &cfg()).unwrap();
        assert!(out[0].record.passed());
        assert!(out[0].record.value <= 0.5);
    }

    #[test]
    fn omega_sq_constant_too_small_for_large_beta() {
        // f = 1 + δx: ratio → 2Var(x)/E[ω²] = (β−5/2)/((β−1)(β−2)) as δ → 0,
        // above 1/(2β−1) once β > (3+√7)/2
        let beta = 3.0;
        let p = MeasureParams::classical(1, beta).unwrap();
        let w = Weight::new(WeightKind::OmegaSquared, 1.0).unwrap();
        let f = TestFunction::new(
            1,
            Family::Quadratic { c: 1.0, origin: vec![0.0], gradient: vec![1e-3], hessian: vec![vec![0.0]] },
        )
        .unwrap();
        let est = lsi_ratio(&f, &w, p, &cfg(), None).unwrap();
        let limit = (beta - 2.5) / ((beta - 1.0) * (beta - 2.0));
        assert!((est.ratio.unwrap() - limit).abs() < 1e-3, "{est:?}");
        let out = verify_omega_sq(1, beta, &[f], &cfg()).unwrap();
        assert!(out[0].record.failed());
        assert!(out[0].record.value > 1.0 / (2.0 * beta - 1.0));
    }

    #[test]
    fn empirical_sandwich_1d() {
        for beta in [0.75, 1.0, 2.0] {
            let w = Weight::corollary_1d(beta).unwrap();
            let best = empirical_best_constant(1, beta, &w, 6, &cfg()).unwrap();
            let c = 2.0 / (2.0 * beta - 1.0);
            assert!(best.value >= 0.95 * c && best.value <= c + best.err, "{beta}: {best:?}");
        }
        let w = Weight::omega_log(E * E).unwrap();
        let best = empirical_best_constant(1, 1.0, &w, 6, &cfg()).unwrap();
        assert!(best.value >= 0.95 * 2.0);
    }
}
