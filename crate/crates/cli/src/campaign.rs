//! Verbs as functions from resolved parameters to check records.

use std::f64::consts::E;

use wlsi_core::bounds::{
    bound_catalog, empirical_best_constant, lower_bound_ratio_limit, standard_battery, theorem_nd_weight,
    verify_omega_sq, verify_corollary_1d, verify_theorem_nd, LsiCheck,
};
use wlsi_core::cd::{cd_check_1d, cd_check_nd, counterexample_2d, gamma2_verify, sigma0_1d, GRID_POINTS};
use wlsi_core::concentration::{
    entropy_tensorization, factorization_gap, gaussian_limit_check, h_centering, h_gradient_weight_bound,
    herbst_battery, herbst_check, log_probe_grid, tensorization_constants, theorem_2d_weight, verify_theorem_2d,
};
use wlsi_core::functionals::lsi_ratio;
use wlsi_core::{
    CheckRecord, Error, IntegrationConfig, Measure, MeasureParams, Result, Status, TestFunction, Weight, WeightKind,
};

/// Herbst t-values.
pub const HERBST_TS: [f64; 5] = [-2.0, -1.0, 0.5, 1.0, 2.0];

fn records(checks: Vec<LsiCheck>) -> Vec<CheckRecord> {
    checks.into_iter().map(|c| c.record).collect()
}

/// Parses `kind[:param][@sigma_ref]` with kind one of omega-log,
/// affine-log, affine-log-sq, omega-sq, constant.
pub fn parse_weight(spec: &str, default_sigma: f64) -> Result<Weight> {
    let (body, sigma_ref) = match spec.split_once('@') {
        Some((b, s)) => (b, s.parse::<f64>().map_err(|_| Error::ParameterDomain(format!("bad sigma_ref in {spec:?}")))?),
        None => (spec, default_sigma),
    };
    let (kind, param) = match body.split_once(':') {
        Some((k, p)) => (k, Some(p.parse::<f64>().map_err(|_| Error::ParameterDomain(format!("bad parameter in {spec:?}")))?)),
        None => (body, None),
    };
    let need = |p: Option<f64>| p.ok_or_else(|| Error::ParameterDomain(format!("{kind} needs a parameter, e.g. {kind}:1.5")));
    let kind = match kind {
        "omega-log" => WeightKind::OmegaLog,
        "affine-log" => WeightKind::OmegaAffineLog(need(param)?),
        "affine-log-sq" => WeightKind::OmegaAffineLogSquared(need(param)?),
        "omega-sq" => WeightKind::OmegaSquared,
        "constant" => WeightKind::Constant(need(param)?),
        other => return Err(Error::ParameterDomain(format!("unknown weight {other:?}"))),
    };
    Weight::new(kind, sigma_ref)
}

pub fn cd_check(n: usize, beta: f64, sigma: f64, rho: f64) -> Result<Vec<CheckRecord>> {
    let r = if n == 1 { cd_check_1d(beta, sigma, GRID_POINTS)? } else { cd_check_nd(n, beta, sigma, rho, GRID_POINTS)? };
    let mut rec = CheckRecord::new(if n == 1 { "cd_check_1d" } else { "cd_check_nd" }, n, beta, sigma)
        .weight(format!("rho={}", r.rho));
    rec.value = r.remainder_min;
    rec.bound = 0.0;
    rec.slack = if n == 1 { 1e-6 * sigma } else { 1e-9 };
    rec.status = if r.holds { Status::Pass } else { Status::Fail };
    rec.note = match &r.witness {
        Some(w) => format!(
            "witness t={:.9e} x={:?} gamma2-rho*gamma={:.6e}",
            w.t, w.point, w.gamma2_minus_rho_gamma
        ),
        None => format!("sigma0={:.9e} argmin_t={:.6e} tail_certified={}", r.sigma0, r.argmin_t, r.tail_certified),
    };
    Ok(vec![rec])
}

/// The 1D threshold on both sides of σ₀: holds just above, fails just below.
pub fn cd_threshold_1d(beta: f64) -> Result<Vec<CheckRecord>> {
    let s0 = sigma0_1d(beta)?;
    let above = cd_check_1d(beta, s0 * (1.0 + 1e-6), GRID_POINTS)?;
    let below = cd_check_1d(beta, s0 * (1.0 - 1e-3), GRID_POINTS)?;
    let exact = (2.0 * beta / (2.0 * beta - 1.0)).exp();
    Ok(vec![
        CheckRecord::new("cd_threshold/sigma0", 1, beta, s0).close(s0, exact, 1e-12 * exact),
        CheckRecord::new("cd_threshold/above", 1, beta, above.sigma).flag(above.holds),
        CheckRecord::new("cd_threshold/below", 1, beta, below.sigma)
            .flag(!below.holds && below.witness.as_ref().is_some_and(|w| w.gamma2_minus_rho_gamma < 0.0))
            .note(format!("remainder_min={:.6e} at t={:.6e}", below.remainder_min, below.argmin_t)),
    ])
}

pub fn counterexample(beta: f64, sigma: f64, rho: f64) -> Result<Vec<CheckRecord>> {
    let c = counterexample_2d(beta, sigma, rho)?;
    let agree = (c.value - c.oracle_value).abs() <= 1e-6 * c.value.abs();
    let mut rec = CheckRecord::new(format!("counterexample_2d/rho={rho}"), 2, beta, sigma);
    rec.value = c.value;
    rec.bound = 0.0;
    rec.slack = 0.0;
    rec.status = if c.value < 0.0 && agree { Status::Pass } else { Status::Fail };
    rec.note = format!("x={:?} oracle={:.9e} gamma={:.6e}", c.point, c.oracle_value, c.gamma);
    Ok(vec![rec])
}

pub fn gamma2(cases: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    Ok(gamma2_verify(cases, seed, 1e-2)?
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            CheckRecord::new(format!("gamma2/{i:03}"), c.n, c.beta, c.sigma)
                .close(c.closed_form, c.oracle, 1e-6 * c.closed_form.abs())
                .note(format!("x={:?} rel_err={:.3e}", c.point, c.rel_err))
        })
        .collect())
}

pub fn lower_bound(n: usize, beta: f64, sigma: f64, eps: &[f64]) -> Result<Vec<CheckRecord>> {
    let p = MeasureParams::new(n, beta, sigma)?;
    let r = lower_bound_ratio_limit(&p, (!eps.is_empty()).then_some(eps))?;
    Ok(vec![CheckRecord::new("lower_bound", n, beta, sigma)
        .weight(format!("omega_log(s={sigma})"))
        .close(r.extrapolated, r.target, 1e-2 * r.target)
        .note(format!("ratios={:?} monotone={}", r.ratios, r.monotone))])
}

pub fn ratio(n: usize, beta: f64, sigma: f64, w: &Weight, eps: &[f64], cfg: &IntegrationConfig) -> Result<Vec<CheckRecord>> {
    let p = MeasureParams::new(n, beta, sigma)?;
    let fns = if eps.is_empty() {
        standard_battery(&p, w)
    } else {
        eps.iter().map(|&e| TestFunction::power_omega(n, e, sigma)).collect::<Result<_>>()?
    };
    Ok(fns
        .iter()
        .map(|f| {
            let base = CheckRecord::new(format!("lsi_ratio/{}", f.id()), n, beta, sigma).weight(w.id());
            match lsi_ratio(f, w, p, cfg, None) {
                Ok(e) => match e.ratio {
                    Some(r) => {
                        let mut rec = base.note(format!("entropy={:.9e} energy={:.9e}", e.entropy, e.energy));
                        rec.value = r;
                        rec.slack = (e.entropy_err + r * e.energy_err) / e.energy;
                        rec.status = Status::Pass;
                        rec
                    }
                    None => base.skip("degenerate: zero energy"),
                },
                Err(Error::Integrability(m)) => base.skip(format!("not integrable: {m}")),
                Err(e) => base.fail(e.to_string()),
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyKind {
    OneD,
    Nd,
    TwoD,
    OmegaSq,
}

pub fn verify(kind: VerifyKind, n: usize, beta: f64, cfg: &IntegrationConfig) -> Result<Vec<CheckRecord>> {
    match kind {
        VerifyKind::OneD => {
            let p = MeasureParams::classical(1, beta)?;
            let fns = standard_battery(&p, &Weight::corollary_1d(beta)?);
            Ok(records(verify_corollary_1d(beta, &fns, cfg)?))
        }
        VerifyKind::Nd => {
            let p = MeasureParams::classical(n, beta)?;
            let fns = standard_battery(&p, &theorem_nd_weight(n, beta)?);
            Ok(records(verify_theorem_nd(n, beta, &fns, cfg)?))
        }
        VerifyKind::TwoD => {
            let p = MeasureParams::classical(2, beta)?;
            let fns = standard_battery(&p, &theorem_2d_weight(beta)?);
            Ok(records(verify_theorem_2d(beta, &fns, cfg)?))
        }
        VerifyKind::OmegaSq => {
            let p = MeasureParams::classical(n, beta)?;
            let fns = standard_battery(&p, &Weight::new(WeightKind::OmegaSquared, 1.0)?);
            Ok(records(verify_omega_sq(n, beta, &fns, cfg)?))
        }
    }
}

/// Largest ratio found with the one-dimensional corollary weight must lie
/// within 5% below the constant and never above it.
pub fn sandwich_1d(beta: f64, cfg: &IntegrationConfig) -> Result<Vec<CheckRecord>> {
    let w = Weight::corollary_1d(beta)?;
    let best = empirical_best_constant(1, beta, &w, 8, cfg)?;
    let c = bound_catalog(1, beta)?.corollary_1d_constant;
    let ok = best.value >= 0.95 * c && best.value <= c + best.err;
    Ok(vec![CheckRecord::new("sandwich_1d", 1, beta, 1.0)
        .weight(w.id())
        .flag(ok)
        .note(format!("best={:.9e} via {} bound={c:.9e}", best.value, best.function))])
}

pub fn herbst(beta: f64, sigma: f64, curvature: f64, samples: usize, seed: u64, cfg: &IntegrationConfig) -> Result<Vec<CheckRecord>> {
    let p = MeasureParams::new(1, beta, sigma)?;
    let w = Weight::omega_log(sigma)?;
    herbst_check(&herbst_battery(sigma), &p, &w, curvature, &HERBST_TS, samples, seed, cfg)
}

pub fn tensorize_2d(beta: f64, cfg: &IntegrationConfig) -> Result<Vec<CheckRecord>> {
    let tc = tensorization_constants(beta)?;
    let mut out = vec![
        CheckRecord::new("tensorize_2d/branch_gap", 2, beta, 1.0).upper(tc.branch_gap, 1e-12, 0.0),
        CheckRecord::new("tensorize_2d/final_constant", 2, beta, 1.0).close(
            tc.m_at_lambda_star,
            tc.final_constant,
            1e-12 * tc.final_constant,
        ),
    ];
    let grid: Vec<f64> = (0..21).map(|i| -5.0 + 0.5 * i as f64).collect();
    out.push(CheckRecord::new("tensorize_2d/factorization", 2, beta, 1.0).upper(factorization_gap(beta, &grid)?, 1e-12, 0.0));
    for x in [0.5, 1.0, 3.0] {
        let s = 1.0 + x * x;
        out.push(
            CheckRecord::new(format!("tensorize_2d/h_centering/x={x}"), 1, beta, s)
                .upper(h_centering(x, beta, cfg)?.abs(), 1e-9, 0.0),
        );
    }
    let probes = log_probe_grid(50);
    for x in [0.0, 0.5, 1.0, 3.0] {
        let b = h_gradient_weight_bound(x, beta, &probes)?;
        out.push(
            CheckRecord::new(format!("tensorize_2d/h_gradient/x={x}"), 1, beta, 1.0 + x * x)
                .upper(b.sup_found, b.bound, 0.0)
                .note(format!("argmax y={:.6e}", b.argmax)),
        );
    }
    for f in tensorization_functions()? {
        let t = entropy_tensorization(&f, beta, cfg)?;
        out.push(
            CheckRecord::new(format!("tensorize_2d/entropy/{}", f.id()), 2, beta, 1.0)
                .close(t.planar_entropy, t.fiber_entropy + t.marginal_entropy, 1e-6)
                .note(format!("fiber={:.9e} marginal={:.9e}", t.fiber_entropy, t.marginal_entropy)),
        );
    }
    Ok(out)
}

/// Off-centre planar functions for the entropy decomposition.
pub fn tensorization_functions() -> Result<Vec<TestFunction>> {
    Ok(vec![
        TestFunction::gaussian_bump(vec![0.5, -0.3], 1.0)?,
        TestFunction::gaussian_bump(vec![1.0, 1.0], 0.7)?,
        TestFunction::spline_bump(vec![0.0, 0.5], 1.5)?,
    ])
}

pub fn gaussian_limit() -> Result<Vec<CheckRecord>> {
    let target = 1.0 + 5f64.sqrt();
    Ok(gaussian_limit_check(&[1e2, 1e4])?
        .into_iter()
        .zip([2e-2, 1e-3])
        .map(|((b, v), tol)| CheckRecord::new("gaussian_limit", 2, b, 1.0).close(v, target, tol))
        .collect())
}

/// Gaussian entropy/energy on exp(a·x/2), equal to 2 for every a.
pub fn calibration(cfg: &IntegrationConfig) -> Result<Vec<CheckRecord>> {
    let w = Weight::new(WeightKind::Constant(1.0), 1.0)?;
    [0.5, 1.0, 2.0]
        .iter()
        .map(|&a| {
            let f = TestFunction::exponential_half(1, a)?;
            let e = lsi_ratio(&f, &w, Measure::Gaussian { n: 1 }, cfg, Some(2.0))?;
            Ok(CheckRecord::new(format!("calibration/{}", f.id()), 1, f64::INFINITY, 1.0)
                .weight(w.id())
                .close(e.ratio.unwrap_or(f64::NAN), 2.0, 1e-8))
        })
        .collect()
}

/// The default desk-scale campaign.
pub fn report_all(cfg: &IntegrationConfig, samples: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for b in [0.75, 1.0, 1.5, 3.0] {
        out.extend(cd_threshold_1d(b)?);
    }
    for (b, s, r) in [(2.0, E, 0.1), (2.0, E, 1.0), (1.5, E * E, 0.5)] {
        out.extend(counterexample(b, s, r)?);
    }
    out.extend(gamma2(100, seed)?);
    for (n, b, s) in [(1, 1.0, E * E), (1, 1.5, E.powf(1.5)), (2, 2.0, E * E), (3, 1.75, E.powi(4))] {
        out.extend(lower_bound(n, b, s, &[])?);
    }
    for b in [0.75, 1.0, 1.5, 2.0, 3.0] {
        out.extend(verify(VerifyKind::OneD, 1, b, cfg)?);
        out.extend(sandwich_1d(b, cfg)?);
    }
    for b in [1.6, 1.75, 1.9] {
        out.extend(verify(VerifyKind::Nd, 3, b, cfg)?);
    }
    for (n, b) in [(1, 1.5), (1, 2.0), (2, 2.0)] {
        out.extend(verify(VerifyKind::OmegaSq, n, b, cfg)?);
    }
    for b in [1.25, 1.5, 2.0, 5.0] {
        out.extend(verify(VerifyKind::TwoD, 2, b, cfg)?);
    }
    out.extend(tensorize_2d(2.0, cfg)?);
    for b in [1.25, 5.0] {
        let grid: Vec<f64> = (0..21).map(|i| -5.0 + 0.5 * i as f64).collect();
        out.push(CheckRecord::new("tensorize_2d/factorization", 2, b, 1.0).upper(factorization_gap(b, &grid)?, 1e-12, 0.0));
    }
    out.extend(gaussian_limit()?);
    out.extend(calibration(cfg)?);
    out.extend(herbst(1.0, E * E, 1.0, samples, seed, cfg)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_specs() {
        assert_eq!(parse_weight("omega-log", 2.0).unwrap().kind, WeightKind::OmegaLog);
        let w = parse_weight("affine-log:1.5@1", 3.0).unwrap();
        assert_eq!((w.kind, w.sigma_ref), (WeightKind::OmegaAffineLog(1.5), 1.0));
        assert!(parse_weight("affine-log", 1.0).is_err());
        assert!(parse_weight("nope", 1.0).is_err());
        assert!(parse_weight("omega-log", 1.0).is_err());
    }

    #[test]
    fn cd_examples() {
        assert!(cd_check(1, 1.0, 7.389056, 1.0).unwrap()[0].passed());
        let r = cd_check(1, 1.0, 2.718282, 1.0).unwrap();
        assert!(r[0].failed() && r[0].note.contains("witness"));
    }

    #[test]
    fn threshold_records() {
        assert!(cd_threshold_1d(1.0).unwrap().iter().all(|r| r.passed()));
    }
}
