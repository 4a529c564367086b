//! Two-dimensional tensorization: the μ_{β−½} × μ_{β,σ_x} disintegration of
//! the planar measure, the centred h-function, Herbst-type exponential
//! bounds and the resulting 2D inequality constant.
//!
//! Convention for the Herbst bound: `curvature` is the ρ of a CD(ρ, ∞)
//! condition, so the matching inequality constant is 2/ρ and the exponent
//! is ‖Ω|∇f|²‖_∞ t²/(2ρ).

use std::sync::Arc;

use serde::Serialize;

use crate::bounds::{check_inequality, LsiCheck};
use crate::error::{domain, Error, Result};
use crate::functionals::{entropy, integrate, IntegrationConfig, ENTROPY_FLOOR};
use crate::measure::{density, Measure, MeasureParams};
use crate::report::CheckRecord;
use crate::testfn::{Family, TestFunction};
use crate::weight::{Weight, WeightKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TensorizationConstants {
    pub beta: f64,
    /// 2β/(2β−1)
    pub kappa: f64,
    /// 2β−1
    pub c_beta: f64,
    /// 2β−2
    pub c_beta_half: f64,
    pub lambda_star: f64,
    pub m_at_lambda_star: f64,
    pub final_constant: f64,
    /// Relative gap between the two branches of M_β at λ*.
    pub branch_gap: f64,
}

/// M_β(λ) = max{λ/C_{β−½}, (2/C_β)(1 + 8β²κ/(λ C_β C_{β−½}))}.
pub fn m_beta(beta: f64, lambda: f64) -> (f64, f64) {
    let kappa = 2.0 * beta / (2.0 * beta - 1.0);
    let (c, ch) = (2.0 * beta - 1.0, 2.0 * beta - 2.0);
    (lambda / ch, 2.0 / c * (1.0 + 8.0 * beta * beta * kappa / (lambda * c * ch)))
}

pub fn tensorization_constants(beta: f64) -> Result<TensorizationConstants> {
    if !(beta > 1.0) || !beta.is_finite() {
        return Err(domain(format!("tensorization needs beta > 1, got {beta}")));
    }
    let kappa = 2.0 * beta / (2.0 * beta - 1.0);
    let c_beta = 2.0 * beta - 1.0;
    let c_beta_half = 2.0 * beta - 2.0;
    let b2k = beta * beta * kappa;
    let lambda_star = (c_beta_half + (c_beta_half * c_beta_half + 16.0 * b2k).sqrt()) / c_beta;
    let (left, right) = m_beta(beta, lambda_star);
    let final_constant =
        (1.0 + (1.0 + 4.0 * b2k / ((beta - 1.0) * (beta - 1.0))).sqrt()) / c_beta;
    let branch_gap = (left - right).abs() / left.abs().max(right.abs());
    let out = TensorizationConstants {
        beta,
        kappa,
        c_beta,
        c_beta_half,
        lambda_star,
        m_at_lambda_star: left.max(right),
        final_constant,
        branch_gap,
    };
    let closed_gap = (out.m_at_lambda_star - final_constant).abs() / final_constant;
    if branch_gap > 1e-12 || closed_gap > 1e-12 {
        return Err(Error::Precondition(format!(
            "tensorization constants inconsistent at beta = {beta}: branch gap {branch_gap:.3e}, closed-form gap {closed_gap:.3e}"
        )));
    }
    Ok(out)
}

/// final_constant·2(β−1) for each β ≥ 100; tends to 1 + √5.
pub fn gaussian_limit_check(betas: &[f64]) -> Result<Vec<(f64, f64)>> {
    betas
        .iter()
        .map(|&b| {
            if !(b >= 100.0) {
                return Err(domain(format!("asymptotic check needs beta >= 100, got {b}")));
            }
            Ok((b, tensorization_constants(b)?.final_constant * 2.0 * (b - 1.0)))
        })
        .collect()
}

/// Planar density identity μ^{(2)}_β(dx dy) = μ_{β,1+x²}(dy) μ_{β−½}(dx):
/// largest relative discrepancy over `grid × grid`.
pub fn factorization_gap(beta: f64, grid: &[f64]) -> Result<f64> {
    let p2 = MeasureParams::classical(2, beta)?;
    let px = MeasureParams::classical(1, beta - 0.5)?;
    let mut worst: f64 = 0.0;
    for &x in grid {
        let py = MeasureParams::new(1, beta, 1.0 + x * x)?;
        let dx = density(&[x], &px)?;
        for &y in grid {
            let lhs = density(&[x, y], &p2)?;
            let rhs = density(&[y], &py)? * dx;
            worst = worst.max((lhs - rhs).abs() / lhs);
        }
    }
    Ok(worst)
}

/// h(x, y) = x((2β−1)y² − σ_x)/(σ_x(σ_x + y²)), σ_x = 1 + x²; the x-derivative
/// of log dμ_{β,σ_x}/dy.
pub fn h_function(x: f64, y: f64, beta: f64) -> f64 {
    let s = 1.0 + x * x;
    x * ((2.0 * beta - 1.0) * y * y - s) / (s * (s + y * y))
}

/// ∂_y h(x, y) = 4βxy/(σ_x + y²)².
pub fn h_derivative(x: f64, y: f64, beta: f64) -> f64 {
    let q = 1.0 + x * x + y * y;
    4.0 * beta * x * y / (q * q)
}

/// y ↦ h(x, y) as a one-dimensional test function.
pub fn h_test_function(x: f64, beta: f64) -> TestFunction {
    TestFunction {
        dim: 1,
        family: Family::Custom {
            name: format!("h(x={x},beta={beta})"),
            value: Arc::new(move |y| h_function(x, y[0], beta)),
            gradient: Arc::new(move |y| vec![h_derivative(x, y[0], beta)]),
            hessian: None,
        },
    }
}

/// ∫h(x, ·) dμ_{β,σ_x}, which vanishes identically.
pub fn h_centering(x: f64, beta: f64, cfg: &IntegrationConfig) -> Result<f64> {
    let m: Measure = MeasureParams::new(1, beta, 1.0 + x * x)?.into();
    Ok(integrate(&m, |y| [h_function(x, y[0], beta)], cfg)?.value[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HGradientBound {
    pub sup_found: f64,
    pub argmax: f64,
    /// 16β²κ/σ_x
    pub bound: f64,
}

/// sup over `probe_grid` of (∂_y h)² Ω_x with
/// Ω_x = (σ_x + y²)(κ + log(1 + y²/σ_x)).
pub fn h_gradient_weight_bound(x: f64, beta: f64, probe_grid: &[f64]) -> Result<HGradientBound> {
    if !(beta > 1.0) {
        return Err(domain(format!("needs beta > 1, got {beta}")));
    }
    let s = 1.0 + x * x;
    let kappa = 2.0 * beta / (2.0 * beta - 1.0);
    let mut out = HGradientBound { sup_found: 0.0, argmax: 0.0, bound: 16.0 * beta * beta * kappa / s };
    for &y in probe_grid {
        let d = h_derivative(x, y, beta);
        let v = d * d * (s + y * y) * (kappa + (y * y / s).ln_1p());
        if v > out.sup_found {
            out.sup_found = v;
            out.argmax = y;
        }
    }
    Ok(out)
}

/// Symmetric probe grid: 0 and ±10^k for k on a uniform grid in [−4, 6].
pub fn log_probe_grid(points_per_decade: usize) -> Vec<f64> {
    let m = 10 * points_per_decade.max(1);
    let mut g = vec![0.0];
    for i in 0..=m {
        let r = 10f64.powf(-4.0 + 10.0 * i as f64 / m as f64);
        g.push(r);
        g.push(-r);
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupEstimate {
    pub value: f64,
    pub argmax: f64,
    /// Largest value found beyond the grid, at |y| ∈ {10⁸, 10¹⁰, 10¹²}.
    pub tail: f64,
}

/// ‖Ω|∇f|²‖_∞ for a one-dimensional f, from a log-spaced grid up to 10⁶
/// plus far-tail probes. An error is returned when the tail probes exceed
/// the grid maximum, which signals an unbounded weighted gradient.
pub fn sup_weighted_gradient(f: &TestFunction, w: &Weight) -> Result<SupEstimate> {
    if f.dim != 1 {
        return Err(Error::Precondition("sup-norm estimation is one-dimensional".into()));
    }
    let eval = |y: f64| {
        let g = f.gradient(&[y])[0];
        g * g * w.eval_r2(y * y)
    };
    let mut out = SupEstimate { value: 0.0, argmax: 0.0, tail: 0.0 };
    for y in log_probe_grid(200) {
        let v = eval(y);
        if !v.is_finite() {
            return Err(Error::Integrability(format!("{}: weighted gradient not finite at {y}", f.id())));
        }
        if v > out.value {
            out.value = v;
            out.argmax = y;
        }
    }
    for r in [1e8, 1e10, 1e12] {
        out.tail = out.tail.max(eval(r)).max(eval(-r));
    }
    if !out.tail.is_finite() || out.tail > out.value * (1.0 + 1e-6) {
        return Err(Error::Integrability(format!(
            "{}: weighted gradient still growing in the tail ({:.3e} > {:.3e})",
            f.id(),
            out.tail,
            out.value
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct HerbstInput {
    pub f: TestFunction,
    pub weight: Weight,
    pub curvature: f64,
    pub sup_weighted_grad: f64,
}

impl HerbstInput {
    pub fn new(f: TestFunction, weight: Weight, curvature: f64) -> Result<Self> {
        if !(curvature > 0.0) {
            return Err(domain(format!("curvature must be positive, got {curvature}")));
        }
        let sup = sup_weighted_gradient(&f, &weight)?.value;
        Ok(Self { f, weight, curvature, sup_weighted_grad: sup })
    }
}

/// exp(t·mean_f + ‖Ω|∇f|²‖_∞ t²/(2ρ)).
pub fn herbst_bound(inp: &HerbstInput, t: f64, mean_f: f64) -> f64 {
    (t * mean_f + inp.sup_weighted_grad * t * t / (2.0 * inp.curvature)).exp()
}

fn custom_1d(
    name: &str,
    f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    df: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> TestFunction {
    TestFunction {
        dim: 1,
        family: Family::Custom {
            name: name.into(),
            value: Arc::new(move |x| f(x[0])),
            gradient: Arc::new(move |x| vec![df(x[0])]),
            hessian: None,
        },
    }
}

/// Ten one-dimensional functions with bounded ω log ω-weighted gradient
/// for σ ≥ e: bounded sigmoids, slowly growing logarithmic profiles and
/// compactly concentrated bumps.
pub fn herbst_battery(sigma: f64) -> Vec<TestFunction> {
    let s = sigma;
    vec![
        custom_1d("atan(x)", f64::atan, |x| 1.0 / (1.0 + x * x)),
        custom_1d("2atan(x/3)", |x| 2.0 * (x / 3.0).atan(), |x| 6.0 / (9.0 + x * x)),
        custom_1d("tanh(x)", f64::tanh, |x| 1.0 - x.tanh().powi(2)),
        custom_1d("x/sqrt(1+x^2)", |x| x / (1.0 + x * x).sqrt(), |x| (1.0 + x * x).powf(-1.5)),
        custom_1d(
            "sqrt(log(omega))",
            move |x| (s + x * x).ln().sqrt(),
            move |x| x / ((s + x * x) * (s + x * x).ln().sqrt()),
        ),
        custom_1d(
            "log(log(omega))",
            move |x| (s + x * x).ln().ln(),
            move |x| 2.0 * x / ((s + x * x) * (s + x * x).ln()),
        ),
        custom_1d(
            "atan(x)-tanh(2x)/2",
            |x| x.atan() - 0.5 * (2.0 * x).tanh(),
            |x| 1.0 / (1.0 + x * x) - (1.0 - (2.0 * x).tanh().powi(2)),
        ),
        TestFunction { dim: 1, family: Family::GaussianBump { center: vec![0.0], width: 1.0 } },
        TestFunction { dim: 1, family: Family::GaussianBump { center: vec![1.0], width: 0.5 } },
        TestFunction { dim: 1, family: Family::SplineBump { center: vec![0.0], half_width: 2.0 } },
    ]
}

/// Monte Carlo ν(e^{tf}) against the Herbst bound, one record per (f, t).
/// A record passes when the estimate is at most the bound plus four
/// standard errors. ν(f) is computed by quadrature.
#[allow(clippy::too_many_arguments)]
pub fn herbst_check(
    functions: &[TestFunction],
    p: &MeasureParams,
    w: &Weight,
    curvature: f64,
    ts: &[f64],
    samples: usize,
    seed: u64,
    cfg: &IntegrationConfig,
) -> Result<Vec<CheckRecord>> {
    if p.n != 1 {
        return Err(Error::Precondition("Herbst checks are one-dimensional".into()));
    }
    let m: Measure = (*p).into();
    let xs = m.sample(samples, seed)?;
    let mut out = Vec::new();
    for f in functions {
        let base = |t: f64| {
            CheckRecord::new(format!("herbst/{}/t={t}", f.id()), p.n, p.beta, p.sigma).weight(w.id())
        };
        let inp = match HerbstInput::new(f.clone(), *w, curvature) {
            Ok(i) => i,
            Err(e) => {
                out.extend(ts.iter().map(|&t| base(t).fail(e.to_string())));
                continue;
            }
        };
        let mean = integrate(&m, |x| [f.value(x)], cfg)?.value[0];
        let vals: Vec<f64> = xs.iter().map(|x| f.value(x)).collect();
        for &t in ts {
            let (mut s1, mut s2) = (0.0, 0.0);
            for v in &vals {
                let e = (t * v).exp();
                s1 += e;
                s2 += e * e;
            }
            let k = vals.len() as f64;
            let mc = s1 / k;
            let se = ((s2 / k - mc * mc).max(0.0) / k).sqrt();
            let bound = herbst_bound(&inp, t, mean);
            out.push(
                base(t)
                    .upper(mc, bound, 4.0 * se)
                    .note(format!("sup={:.6e}, mean={mean:.6e}, se={se:.3e}", inp.sup_weighted_grad)),
            );
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L1LlogL {
    /// |ν(f²h)|²
    pub lhs: f64,
    /// ν(f²)·(2‖Ω|∇h|²‖_∞/ρ)·Ent_ν(f²)
    pub rhs: f64,
    /// Numerical error budget of lhs and rhs combined.
    pub slack: f64,
    pub nu_h: f64,
    pub sup_weighted_grad: f64,
}

impl L1LlogL {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + self.slack
    }
}

/// Both sides of |ν(f²h)|² ≤ ν(f²)(2‖Ω|∇h|²‖_∞/ρ)Ent_ν(f²) in one dimension,
/// for centred h.
pub fn verify_l1_llogl(
    f: &TestFunction,
    h: &TestFunction,
    p: &MeasureParams,
    w: &Weight,
    curvature: f64,
    cfg: &IntegrationConfig,
) -> Result<L1LlogL> {
    if p.n != 1 || f.dim != 1 || h.dim != 1 {
        return Err(Error::Precondition("the L1-LlogL check is one-dimensional".into()));
    }
    if !(curvature > 0.0) {
        return Err(domain("curvature must be positive"));
    }
    let m: Measure = (*p).into();
    let c = integrate(&m, |x| { let v = h.value(x); [v, v.abs()] }, cfg)?;
    let nu_h = c.value[0];
    if nu_h.abs() > 1e-8 * c.value[1].max(1.0) + 10.0 * c.err[0] {
        return Err(Error::Precondition(format!("h is not centred: nu(h) = {nu_h:.3e}")));
    }
    let sup = sup_weighted_gradient(h, w)?.value;
    let mixed = integrate(&m, |x| { let v = f.value(x); [v * v * h.value(x), v * v] }, cfg)?;
    let ent = entropy(f, m, cfg)?;
    let (a, da) = (mixed.value[0], mixed.err[0]);
    let (mass, dmass) = (mixed.value[1], mixed.err[1]);
    let k = 2.0 * sup / curvature;
    Ok(L1LlogL {
        lhs: a * a,
        rhs: mass * k * ent.value,
        slack: 3.0 * (2.0 * a.abs() * da + da * da + k * (dmass * ent.value.abs() + mass * ent.err)),
        nu_h,
        sup_weighted_grad: sup,
    })
}

/// F(x)² = ∫f(x, y)² μ_{β,σ_x}(dy) and F′(x) from
/// 2FF′ = ∫(2f∂ₓf + f²h) dμ_{β,σ_x}.
pub fn marginal_and_derivative(f: &TestFunction, x: f64, beta: f64, cfg: &IntegrationConfig) -> Result<(f64, f64)> {
    if f.dim != 2 {
        return Err(Error::Precondition("marginal needs a planar function".into()));
    }
    let m: Measure = MeasureParams::new(1, beta, 1.0 + x * x)?.into();
    let e = integrate(
        &m,
        |y| {
            let pt = [x, y[0]];
            let v = f.value(&pt);
            let dx = f.gradient(&pt)[0];
            [v * v, 2.0 * v * dx + v * v * h_function(x, y[0], beta)]
        },
        cfg,
    )?;
    let big_f = e.value[0].sqrt();
    Ok((big_f, e.value[1] / (2.0 * big_f)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TensorizationIdentity {
    /// Ent_{μ^{(2)}}(f²), by planar quadrature.
    pub planar_entropy: f64,
    /// ∫Ent_{μ_{β,σ_x}}(f(x,·)²) μ_{β−½}(dx)
    pub fiber_entropy: f64,
    /// Ent_{μ_{β−½}}(F²)
    pub marginal_entropy: f64,
    pub gap: f64,
}

/// Planar entropy against its fibre/marginal decomposition, each side
/// computed independently (nested one-dimensional quadrature on the right).
pub fn entropy_tensorization(f: &TestFunction, beta: f64, cfg: &IntegrationConfig) -> Result<TensorizationIdentity> {
    if f.dim != 2 {
        return Err(Error::Precondition("tensorization identity needs a planar function".into()));
    }
    let planar = entropy(f, MeasureParams::classical(2, beta)?, cfg)?.value;
    let outer: Measure = MeasureParams::classical(1, beta - 0.5)?.into();
    let inner = |x: f64| -> [f64; 3] {
        let run = || -> Result<[f64; 3]> {
            let m: Measure = MeasureParams::new(1, beta, 1.0 + x * x)?.into();
            let e = integrate(
                &m,
                |y| {
                    let v = f.value(&[x, y[0]]);
                    let g = v * v;
                    [g, if g > 0.0 { g * g.ln() } else { 0.0 }]
                },
                cfg,
            )?;
            let f2 = e.value[0];
            if f2 <= ENTROPY_FLOOR {
                return Ok([0.0; 3]);
            }
            Ok([f2, f2 * f2.ln(), e.value[1] - f2 * f2.ln()])
        };
        run().unwrap_or([f64::NAN; 3])
    };
    let e = integrate(&outer, |x| inner(x[0]), cfg)?;
    let mass = e.value[0];
    let marginal = e.value[1] - mass * mass.ln();
    let fiber = e.value[2];
    Ok(TensorizationIdentity {
        planar_entropy: planar,
        fiber_entropy: fiber,
        marginal_entropy: marginal,
        gap: (planar - fiber - marginal).abs(),
    })
}

/// Weight (1+|x|²)(κ + log(1+|x|²))² on the plane, κ = 2β/(2β−1).
pub fn theorem_2d_weight(beta: f64) -> Result<Weight> {
    Weight::new(WeightKind::OmegaAffineLogSquared(2.0 * beta / (2.0 * beta - 1.0)), 1.0)
}

/// Planar inequality with the tensorization constant, β > 1.
pub fn verify_theorem_2d(beta: f64, functions: &[TestFunction], cfg: &IntegrationConfig) -> Result<Vec<LsiCheck>> {
    let tc = tensorization_constants(beta)?;
    let p = MeasureParams::classical(2, beta)?;
    let w = theorem_2d_weight(beta)?;
    Ok(functions
        .iter()
        .map(|f| check_inequality("theorem_2d", f, &w, &p, tc.final_constant, cfg))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn cfg() -> IntegrationConfig {
        IntegrationConfig::default()
    }

    #[test]
    fn constants_examples() {
        let t = tensorization_constants(1.5).unwrap();
        assert_eq!((t.kappa, t.c_beta, t.c_beta_half), (1.5, 2.0, 1.0));
        let v = (1.0 + 55f64.sqrt()) / 2.0;
        assert_relative_eq!(t.lambda_star, v, max_relative = 1e-14);
        assert_relative_eq!(t.final_constant, v, max_relative = 1e-14);
        let t = tensorization_constants(2.0).unwrap();
        assert_relative_eq!(t.final_constant, (1.0 + (67.0f64 / 3.0).sqrt()) / 3.0, max_relative = 1e-14);
        assert!((t.final_constant - 1.9086).abs() < 1e-4);
        assert!(tensorization_constants(1.0).is_err());
    }

    #[test]
    fn gaussian_limit() {
        let g = 1.0 + 5f64.sqrt();
        let v = gaussian_limit_check(&[1e2, 1e4]).unwrap();
        assert!((v[0].1 - g).abs() < 2e-2);
        assert!((v[1].1 - g).abs() < 1e-3);
        assert!(gaussian_limit_check(&[50.0]).is_err());
    }

    proptest! {
        #[test]
        fn branches_agree(beta in 1.0001f64..1000.0) {
            let t = tensorization_constants(beta).unwrap();
            prop_assert!(t.branch_gap <= 1e-12);
            prop_assert!((t.m_at_lambda_star - t.final_constant).abs() <= 1e-12 * t.final_constant);
        }
    }

    #[test]
    fn factorization() {
        let grid: Vec<f64> = (0..21).map(|i| -5.0 + 0.5 * i as f64).collect();
        for b in [1.25, 2.0, 5.0] {
            assert!(factorization_gap(b, &grid).unwrap() < 1e-12);
        }
    }

    #[test]
    fn h_values_and_centering() {
        assert_eq!(h_function(0.0, 3.0, 2.0), 0.0);
        assert_eq!(h_function(1.0, 1.0, 1.5), 0.0);
        for x in [0.5, 1.0, 3.0] {
            for b in [1.5, 2.0] {
                assert!(h_centering(x, b, &cfg()).unwrap().abs() < 1e-9);
                let d = (h_function(x, 0.7 + 1e-6, b) - h_function(x, 0.7 - 1e-6, b)) / 2e-6;
                assert_relative_eq!(d, h_derivative(x, 0.7, b), max_relative = 1e-7);
            }
        }
    }

    #[test]
    fn h_gradient_bound() {
        let g = log_probe_grid(50);
        let z = h_gradient_weight_bound(0.0, 1.5, &g).unwrap();
        assert_eq!(z.sup_found, 0.0);
        let b = h_gradient_weight_bound(1.0, 1.5, &g).unwrap();
        assert_relative_eq!(b.bound, 27.0, max_relative = 1e-14);
        assert!(b.sup_found > 0.0 && b.sup_found <= b.bound);
        assert!(h_gradient_weight_bound(3.0, 1.5, &g).unwrap().bound < b.bound);
    }

    #[test]
    fn herbst_basics() {
        let w = Weight::omega_log(E * E).unwrap();
        let inp = HerbstInput::new(herbst_battery(E * E)[0].clone(), w, 1.0).unwrap();
        assert_eq!(herbst_bound(&inp, 0.0, 0.3), 1.0);
        assert_eq!(herbst_bound(&inp, 0.7, 0.0), herbst_bound(&inp, -0.7, 0.0));
        // unbounded weighted gradient is detected
        let lin = TestFunction::new(
            1,
            Family::Quadratic { c: 0.0, origin: vec![0.0], gradient: vec![1.0], hessian: vec![vec![0.0]] },
        )
        .unwrap();
        assert!(HerbstInput::new(lin, w, 1.0).is_err());
        assert!(HerbstInput::new(herbst_battery(E * E)[0].clone(), w, 0.0).is_err());
    }

    #[test]
    fn herbst_battery_gradients() {
        let probes: Vec<Vec<f64>> = [-3.0, -0.4, 0.2, 1.1, 5.0].iter().map(|&x| vec![x]).collect();
        for f in herbst_battery(E * E) {
            f.check_gradient(&probes).unwrap();
        }
    }

    #[test]
    fn l1_llogl_examples() {
        let e2 = E * E;
        let p = MeasureParams::new(1, 1.0, e2).unwrap();
        let w = Weight::omega_log(e2).unwrap();
        // x with 1 + x² = e² so that μ_{β,σ_x} is the measure above
        let h = h_test_function((e2 - 1.0).sqrt(), 1.0);
        let f = TestFunction::gaussian_bump(vec![1.0], 1.0).unwrap();
        let r = verify_l1_llogl(&f, &h, &p, &w, 1.0, &cfg()).unwrap();
        assert!(r.holds() && r.lhs > 0.0, "{r:?}");
        let even = TestFunction::gaussian_bump(vec![0.0], 1.0).unwrap();
        let odd = custom_1d("x/sqrt(1+x^2)", |x| x / (1.0 + x * x).sqrt(), |x| (1.0 + x * x).powf(-1.5));
        let r = verify_l1_llogl(&even, &odd, &p, &w, 1.0, &cfg()).unwrap();
        assert!(r.lhs < 1e-20 && r.holds());
        let one = TestFunction::constant(1, 1.0).unwrap();
        let r = verify_l1_llogl(&one, &h, &p, &w, 1.0, &cfg()).unwrap();
        assert!(r.rhs.abs() < 1e-12 && r.holds(), "{r:?}");
        let off = custom_1d("1+atan", |x| 1.0 + x.atan(), |x| 1.0 / (1.0 + x * x));
        assert!(matches!(verify_l1_llogl(&even, &off, &p, &w, 1.0, &cfg()), Err(Error::Precondition(_))));
    }

    #[test]
    fn marginal_derivative_matches_differences() {
        let f = TestFunction::gaussian_bump(vec![0.5, -0.3], 1.0).unwrap();
        for x in [-1.0, 0.3, 2.0] {
            let (_, d) = marginal_and_derivative(&f, x, 2.0, &cfg()).unwrap();
            let big = |x: f64| marginal_and_derivative(&f, x, 2.0, &cfg()).unwrap().0;
            let h = 1e-3;
            let fd = (8.0 * (big(x + h) - big(x - h)) - (big(x + 2.0 * h) - big(x - 2.0 * h))) / (12.0 * h);
            assert!((d - fd).abs() < 1e-6, "{x}: {d} vs {fd}");
        }
    }

    #[test]
    fn tensorization_identity() {
        let f = TestFunction::gaussian_bump(vec![0.5, -0.3], 1.0).unwrap();
        let t = entropy_tensorization(&f, 2.0, &cfg()).unwrap();
        assert!(t.gap < 1e-6, "{t:?}");
        assert!(t.fiber_entropy > 0.0 && t.marginal_entropy > 0.0);
    }

    #[test]
    fn theorem_2d_examples() {
        let fns = vec![
            TestFunction::gaussian_bump(vec![0.0, 0.0], 1.0).unwrap(),
            TestFunction::constant(2, 1.0).unwrap(),
        ];
        let out = verify_theorem_2d(1.5, &fns, &cfg()).unwrap();
        assert!(out[0].record.passed());
        assert!(out[0].record.value <= (1.0 + 55f64.sqrt()) / 2.0);
        assert_eq!(out[1].record.status, Status::Skip);
        let off = vec![TestFunction::gaussian_bump(vec![1.0, 0.5], 0.8).unwrap()];
        assert!(verify_theorem_2d(2.0, &off, &cfg()).unwrap()[0].record.passed());
    }
}
