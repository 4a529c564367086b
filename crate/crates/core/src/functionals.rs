//! Entropy Ent(f²) and weighted Dirichlet energy ∫|∇f|²Ω dν against a
//! Cauchy-type or Gaussian reference measure.
//!
//! Routing: radial integrands use a 1D radial integral in any dimension;
//! otherwise n = 1 adaptive line, n = 2 nested adaptive, n = 3 adaptive radius
//! times a product sphere rule, n ≥ 4 Monte Carlo with samples from the
//! measure itself.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::quadrature::{half_line, plane, real_line, space3, QuadConfig, QuadOutput};
use crate::special::ln_gamma;
use crate::testfn::{Family, TestFunction};
use crate::weight::Weight;

/// f² below this is treated as zero inside the entropy integrand.
pub const ENTROPY_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Auto,
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EstimateMethod {
    Quadrature,
    MonteCarlo,
    /// Exact expression in normalising constants and log-moments.
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrationConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
    pub mc_samples: usize,
    pub seed: u64,
    pub method: Method,
    /// Gauss–Legendre order of the sphere rule used for n = 3.
    pub sphere_order: usize,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-11,
            rel_tol: 1e-10,
            max_depth: 400,
            mc_samples: 100_000,
            seed: 20_240_601,
            method: Method::Auto,
            sphere_order: 20,
        }
    }
}

impl IntegrationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::ParameterDomain("tolerances must be positive".into()));
        }
        if self.mc_samples < 1000 {
            return Err(Error::ParameterDomain("mc_samples must be at least 1000".into()));
        }
        if self.sphere_order < 2 {
            return Err(Error::ParameterDomain("sphere_order must be at least 2".into()));
        }
        Ok(())
    }

    pub fn monte_carlo(self) -> Self {
        Self { method: Method::MonteCarlo, ..self }
    }

    fn quad(&self) -> QuadConfig {
        QuadConfig {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_depth: self.max_depth,
            max_panels: 20_000,
            initial_panels: 8,
        }
    }
}

/// A scalar estimate with its error (quadrature estimate or one standard
/// error for Monte Carlo).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub err: f64,
    pub method: EstimateMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LsiEstimate {
    pub function: String,
    pub entropy: f64,
    pub energy: f64,
    /// entropy/energy; `None` when the energy vanishes (degenerate f).
    pub ratio: Option<f64>,
    pub entropy_err: f64,
    pub energy_err: f64,
    pub method: EstimateMethod,
    pub claimed_constant: Option<f64>,
}

impl LsiEstimate {
    pub fn is_degenerate(&self) -> bool {
        self.ratio.is_none()
    }
}

/// Vector expectation ∫g dν with per-component errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation<const K: usize> {
    pub value: [f64; K],
    pub err: [f64; K],
    pub method: EstimateMethod,
}

fn ln_sphere_area(n: usize) -> f64 {
    // |S^{n-1}| = 2π^{n/2}/Γ(n/2)
    2f64.ln() + 0.5 * n as f64 * PI.ln() - ln_gamma(0.5 * n as f64)
}

fn accept<const K: usize>(out: QuadOutput<K>, what: &str) -> Result<Expectation<K>> {
    if out.non_finite {
        return Err(Error::Integrability(format!("{what}: integrand not finite")));
    }
    if !out.converged {
        for k in 0..K {
            if out.err[k] > 1e-3 * out.value[k].abs().max(1e-12) {
                return Err(Error::Integrability(format!(
                    "{what}: refinement did not converge (component {k}: {:.3e} ± {:.3e})",
                    out.value[k], out.err[k]
                )));
            }
        }
    }
    Ok(Expectation { value: out.value, err: out.err, method: EstimateMethod::Quadrature })
}

/// Expectation of a radial integrand g(r) under a rotation-invariant measure.
pub fn integrate_radial<const K: usize, G>(
    m: &Measure,
    g: G,
    cfg: &IntegrationConfig,
) -> Result<Expectation<K>>
where
    G: Fn(f64) -> [f64; K],
{
    cfg.validate()?;
    let n = m.dim();
    let ls = ln_sphere_area(n);
    let out = half_line(
        |r| {
            let w = (ls + (n as f64 - 1.0) * r.ln() + m.log_density_r2(r * r)).exp();
            let mut v = g(r);
            for x in v.iter_mut() {
                *x = if w == 0.0 { 0.0 } else { *x * w };
            }
            v
        },
        m.scale(),
        &cfg.quad(),
    );
    accept(out, "radial integral")
}

/// Mean and covariance of a vector statistic over measure samples.
pub(crate) struct MonteCarloMoments<const K: usize> {
    pub mean: [f64; K],
    pub cov: [[f64; K]; K],
    pub count: usize,
}

pub(crate) fn monte_carlo_moments<const K: usize, G>(
    m: &Measure,
    g: G,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloMoments<K>>
where
    G: Fn(&[f64]) -> [f64; K],
{
    let xs = m.sample(samples, seed)?;
    let vals: Vec<[f64; K]> = xs.iter().map(|x| g(x)).collect();
    let nf = vals.len() as f64;
    let mut mean = [0.0; K];
    for v in &vals {
        for k in 0..K {
            mean[k] += v[k];
        }
    }
    for x in mean.iter_mut() {
        *x /= nf;
    }
    let mut cov = [[0.0; K]; K];
    for v in &vals {
        for a in 0..K {
            for b in 0..K {
                cov[a][b] += (v[a] - mean[a]) * (v[b] - mean[b]);
            }
        }
    }
    for row in cov.iter_mut() {
        for x in row.iter_mut() {
            *x /= nf - 1.0;
        }
    }
    if mean.iter().any(|v| !v.is_finite()) {
        return Err(Error::Integrability("Monte Carlo mean not finite".into()));
    }
    Ok(MonteCarloMoments { mean, cov, count: vals.len() })
}

/// Expectation ∫g dν of a pointwise integrand, routed by dimension.
pub fn integrate<const K: usize, G>(
    m: &Measure,
    g: G,
    cfg: &IntegrationConfig,
) -> Result<Expectation<K>>
where
    G: Fn(&[f64]) -> [f64; K] + Sync,
{
    cfg.validate()?;
    let n = m.dim();
    let use_mc = match cfg.method {
        Method::MonteCarlo => true,
        Method::Quadrature => {
            if n > 3 {
                return Err(Error::Precondition(
                    "quadrature is available for n <= 3 only".into(),
                ));
            }
            false
        }
        Method::Auto => n > 3,
    };
    if use_mc {
        let mc = monte_carlo_moments(m, &g, cfg.mc_samples, cfg.seed)?;
        let nf = mc.count as f64;
        return Ok(Expectation {
            value: mc.mean,
            err: std::array::from_fn(|k| (mc.cov[k][k] / nf).sqrt()),
            method: EstimateMethod::MonteCarlo,
        });
    }
    let weighted = |x: &[f64]| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let w = m.log_density_r2(r2).exp();
        let mut v = g(x);
        for y in v.iter_mut() {
            *y = if w == 0.0 { 0.0 } else { *y * w };
        }
        v
    };
    let scale = m.scale();
    let out = match n {
        1 => real_line(|x| weighted(&[x]), scale, &cfg.quad()),
        2 => plane(|x, y| weighted(&[x, y]), scale, &cfg.quad()),
        3 => space3(|x| weighted(x), scale, cfg.sphere_order, &cfg.quad()),
        _ => unreachable!(),
    };
    accept(out, "integral")
}

/// Growth exponent p with |f| ~ |x|^p at infinity; −∞ for decaying
/// families, +∞ for exponential growth, `None` when unknown.
fn tail_power(f: &TestFunction) -> Option<f64> {
    let nz = |v: &[f64]| v.iter().any(|x| *x != 0.0);
    match &f.family {
        Family::PowerOmega { eps, .. } => Some(2.0 * eps),
        Family::GaussianBump { .. } | Family::SplineBump { .. } => Some(f64::NEG_INFINITY),
        Family::ExponentialHalf { a } => Some(if *a == 0.0 { 0.0 } else { f64::INFINITY }),
        Family::Quadratic { c, gradient, hessian, .. } => Some(if hessian.iter().any(|r| nz(r)) {
            2.0
        } else if nz(gradient) {
            1.0
        } else if *c != 0.0 {
            0.0
        } else {
            f64::NEG_INFINITY
        }),
        Family::Polynomial { cubic, .. } if nz(cubic) => Some(3.0),
        Family::Polynomial { c, origin, gradient, hessian, .. } => tail_power(&TestFunction {
            dim: f.dim,
            family: Family::Quadratic {
                c: *c,
                origin: origin.clone(),
                gradient: gradient.clone(),
                hessian: hessian.clone(),
            },
        }),
        Family::Constant(c) => Some(if *c == 0.0 { f64::NEG_INFINITY } else { 0.0 }),
        Family::Custom { .. } => None,
    }
}

/// Rejects combinations whose entropy (when `need_l2`) or weighted energy
/// integral diverges.
pub fn check_integrable(
    f: &TestFunction,
    w: Option<&Weight>,
    m: &Measure,
    need_l2: bool,
) -> Result<()> {
    if f.dim != m.dim() {
        return Err(Error::ParameterDomain(format!(
            "function dimension {} does not match measure dimension {}",
            f.dim,
            m.dim()
        )));
    }
    let Measure::Cauchy(p) = m else {
        return Ok(());
    };
    let Some(pw) = tail_power(f) else {
        return Ok(());
    };
    let budget = 2.0 * p.beta - p.n as f64;
    if need_l2 && 2.0 * pw >= budget {
        return Err(Error::Integrability(format!(
            "{} is not square-integrable (growth {pw}, need < {})",
            f.id(),
            budget / 2.0
        )));
    }
    if let Some(w) = w {
        if 2.0 * (pw - 1.0) + 2.0 * w.growth_power() >= budget {
            return Err(Error::Integrability(format!(
                "weighted energy of {} diverges under {}",
                f.id(),
                w.id()
            )));
        }
    }
    Ok(())
}

#[inline]
fn entropy_density(f2: f64, mass: f64) -> f64 {
    // mass·φ(f²/mass) with φ(u) = u ln u − u + 1 ≥ 0
    if f2 < ENTROPY_FLOOR {
        mass
    } else {
        f2 * (f2 / mass).ln() - f2 + mass
    }
}

#[inline]
fn grad_sq(g: &[f64]) -> f64 {
    g.iter().map(|v| v * v).sum()
}

/// Core evaluation shared by the public functionals: returns entropy and/or
/// energy estimates.
fn evaluate(
    f: &TestFunction,
    w: Option<&Weight>,
    m: &Measure,
    cfg: &IntegrationConfig,
    want_entropy: bool,
) -> Result<(Option<Estimate>, Option<Estimate>)> {
    cfg.validate()?;
    check_integrable(f, w, m, want_entropy)?;
    let mc = cfg.method == Method::MonteCarlo || (cfg.method == Method::Auto && m.dim() > 3 && !f.is_radial());
    if mc {
        let mcm = monte_carlo_moments(
            m,
            |x| {
                let v = f.value(x);
                let f2 = v * v;
                let flogf = if f2 < ENTROPY_FLOOR { 0.0 } else { f2 * f2.ln() };
                let e = match w {
                    Some(w) => grad_sq(&f.gradient(x)) * w.eval(x),
                    None => 0.0,
                };
                [f2, flogf, e]
            },
            cfg.mc_samples,
            cfg.seed,
        )?;
        let nf = mcm.count as f64;
        let (a, b) = (mcm.mean[0], mcm.mean[1]);
        let ent = if a > 0.0 { b - a * a.ln() } else { 0.0 };
        let d = if a > 0.0 { a.ln() + 1.0 } else { 0.0 };
        let var_u = mcm.cov[1][1] - 2.0 * d * mcm.cov[0][1] + d * d * mcm.cov[0][0];
        let entropy = Estimate {
            value: ent,
            err: (var_u.max(0.0) / nf).sqrt(),
            method: EstimateMethod::MonteCarlo,
        };
        let energy = Estimate {
            value: mcm.mean[2],
            err: (mcm.cov[2][2] / nf).sqrt(),
            method: EstimateMethod::MonteCarlo,
        };
        return Ok((want_entropy.then_some(entropy), w.map(|_| energy)));
    }

    let radial = f.is_radial() && cfg.method != Method::MonteCarlo;
    let mass = if want_entropy {
        let e = if radial {
            integrate_radial(m, |r| [f.radial_profile(r).unwrap().0.powi(2)], cfg)?
        } else {
            integrate(m, |x| [f.value(x).powi(2)], cfg)?
        };
        Some((e.value[0], e.err[0]))
    } else {
        None
    };
    let m0 = mass.map(|(v, _)| v).unwrap_or(1.0);
    let zero_mass = mass.is_some_and(|(v, _)| v <= 0.0);
    let pass = if radial {
        integrate_radial(
            m,
            |r| {
                let (v, dv) = f.radial_profile(r).unwrap();
                let ent = if want_entropy && !zero_mass { entropy_density(v * v, m0) } else { 0.0 };
                let en = w.map_or(0.0, |w| dv * dv * w.eval_r2(r * r));
                [ent, en]
            },
            cfg,
        )?
    } else {
        integrate(
            m,
            |x| {
                let ent = if want_entropy && !zero_mass {
                    entropy_density(f.value(x).powi(2), m0)
                } else {
                    0.0
                };
                let en = match w {
                    Some(w) => grad_sq(&f.gradient(x)) * w.eval(x),
                    None => 0.0,
                };
                [ent, en]
            },
            cfg,
        )?
    };
    let entropy = mass.map(|(mv, me)| Estimate {
        value: pass.value[0],
        err: pass.err[0] + if mv > 0.0 { me * me / mv } else { 0.0 },
        method: pass.method,
    });
    let energy = w.map(|_| Estimate { value: pass.value[1], err: pass.err[1], method: pass.method });
    Ok((entropy, energy))
}

/// Ent_ν(f²) = ∫f² log f² dν − ν(f²) log ν(f²).
pub fn entropy(f: &TestFunction, m: impl Into<Measure>, cfg: &IntegrationConfig) -> Result<Estimate> {
    let (e, _) = evaluate(f, None, &m.into(), cfg, true)?;
    Ok(e.expect("entropy requested"))
}

/// ∫|∇f|²Ω dν. The weight's σ_ref is taken as given, so it may differ from
/// the measure's σ.
pub fn dirichlet_energy(
    f: &TestFunction,
    w: &Weight,
    m: impl Into<Measure>,
    cfg: &IntegrationConfig,
) -> Result<Estimate> {
    let (_, e) = evaluate(f, Some(w), &m.into(), cfg, false)?;
    Ok(e.expect("energy requested"))
}

/// Entropy, energy and their ratio, a lower bound on the best constant C in
/// Ent(f²) ≤ C∫|∇f|²Ω dν up to the reported errors.
pub fn lsi_ratio(
    f: &TestFunction,
    w: &Weight,
    m: impl Into<Measure>,
    cfg: &IntegrationConfig,
    claimed_constant: Option<f64>,
) -> Result<LsiEstimate> {
    let (ent, en) = evaluate(f, Some(w), &m.into(), cfg, true)?;
    let (ent, en) = (ent.expect("entropy"), en.expect("energy"));
    let ratio = (en.value > 1e-300).then(|| ent.value / en.value);
    Ok(LsiEstimate {
        function: f.id(),
        entropy: ent.value,
        energy: en.value,
        ratio,
        entropy_err: ent.err,
        energy_err: en.err,
        method: ent.method,
        claimed_constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{log_normalization, MeasureParams};
    use crate::weight::WeightKind;
    use approx::assert_relative_eq;

    fn cfg() -> IntegrationConfig {
        IntegrationConfig::default()
    }

    #[test]
    fn normalization_by_quadrature() {
        for (n, beta, sigma) in [(1, 1.0, 1.0), (1, 0.75, 3.0), (1, 2.5, 7.0), (2, 1.5, 1.0), (2, 2.0, 4.0)] {
            let m: Measure = MeasureParams::new(n, beta, sigma).unwrap().into();
            let e = integrate(&m, |_| [1.0], &cfg()).unwrap();
            assert!((e.value[0] - 1.0).abs() < 1e-8, "{n} {beta} {sigma}: {:?}", e);
            let r = integrate_radial(&m, |_| [1.0], &cfg()).unwrap();
            assert!((r.value[0] - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn normalization_three_dimensions() {
        let m: Measure = MeasureParams::new(3, 1.75, 1.0).unwrap().into();
        let e = integrate(&m, |_| [1.0], &cfg()).unwrap();
        assert!((e.value[0] - 1.0).abs() < 1e-8, "{:?}", e);
        let r = integrate_radial(&m, |_| [1.0], &cfg()).unwrap();
        assert!((r.value[0] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn log_z_oracles() {
        // ∫dx/(1+x²) = π and ∫(1+x²)^{-3/2}dx = 2
        let c = QuadConfig::default();
        let a = real_line(|x| [1.0 / (1.0 + x * x)], 1.0, &c);
        let p = MeasureParams::new(1, 1.0, 1.0).unwrap();
        assert_relative_eq!(a.value[0].ln(), log_normalization(&p), max_relative = 1e-12);
        let b = real_line(|x| [(1.0 + x * x).powf(-1.5)], 1.0, &c);
        let p = MeasureParams::new(1, 1.5, 1.0).unwrap();
        assert_relative_eq!(b.value[0].ln(), log_normalization(&p), max_relative = 1e-11);
        let z2 = plane(|x, y| [(1.0 + x * x + y * y).powi(-2)], 1.0, &c);
        let p = MeasureParams::new(2, 2.0, 1.0).unwrap();
        assert_relative_eq!(z2.value[0].ln(), log_normalization(&p), max_relative = 1e-9);
    }

    #[test]
    fn log_moment_by_quadrature() {
        for (n, beta, sigma) in [(1, 1.0, 1.0), (1, 1.0, std::f64::consts::E), (2, 2.0, 1.0), (2, 1.3, 2.0)] {
            let p = MeasureParams::new(n, beta, sigma).unwrap();
            let m: Measure = p.into();
            let e = integrate(&m, |x| [(sigma + x.iter().map(|v| v * v).sum::<f64>()).ln()], &cfg()).unwrap();
            assert!((e.value[0] - crate::measure::log_omega_moment(&p)).abs() < 1e-8, "{n} {beta} {sigma} {:?} {}", e, crate::measure::log_omega_moment(&p));
        }
    }

    #[test]
    fn constant_function_is_degenerate() {
        let p = MeasureParams::new(1, 1.0, 3.0).unwrap();
        let f = TestFunction::constant(1, 2.0).unwrap();
        let w = Weight::omega_log(3.0).unwrap();
        assert_eq!(entropy(&f, p, &cfg()).unwrap().value, 0.0);
        assert_eq!(dirichlet_energy(&f, &w, p, &cfg()).unwrap().value, 0.0);
        assert!(lsi_ratio(&f, &w, p, &cfg(), None).unwrap().is_degenerate());
    }

    #[test]
    fn energy_of_identity_with_constant_weight() {
        let p = MeasureParams::new(1, 1.5, 1.0).unwrap();
        let f = TestFunction::new(
            1,
            Family::Quadratic { c: 0.0, origin: vec![0.0], gradient: vec![1.0], hessian: vec![vec![0.0]] },
        )
        .unwrap();
        let w = Weight::new(WeightKind::Constant(1.0), 1.0).unwrap();
        let en = dirichlet_energy(&f, &w, p, &cfg()).unwrap();
        assert!((en.value - 1.0).abs() < 1e-10);
        // x itself is not square-integrable at β = 3/2
        assert!(matches!(entropy(&f, p, &cfg()), Err(Error::Integrability(_))));
    }

    #[test]
    fn gaussian_calibration() {
        let m = Measure::Gaussian { n: 1 };
        let w = Weight::new(WeightKind::Constant(1.0), 1.0).unwrap();
        for a in [0.5, 1.0, 1.7] {
            let f = TestFunction::exponential_half(1, a).unwrap();
            let est = lsi_ratio(&f, &w, m, &cfg(), Some(2.0)).unwrap();
            let g = (a * a / 2.0f64).exp();
            assert_relative_eq!(est.entropy, a * a / 2.0 * g, max_relative = 1e-9);
            assert_relative_eq!(est.energy, a * a / 4.0 * g, max_relative = 1e-9);
            assert!((est.ratio.unwrap() - 2.0).abs() < 1e-8);
        }
    }

    #[test]
    fn exponential_not_integrable_under_cauchy() {
        let p = MeasureParams::new(1, 2.0, 1.0).unwrap();
        let f = TestFunction::exponential_half(1, 1.0).unwrap();
        assert!(matches!(entropy(&f, p, &cfg()), Err(Error::Integrability(_))));
        let f = TestFunction::power_omega(1, 0.75, 1.0).unwrap();
        assert!(matches!(entropy(&f, p, &cfg()), Err(Error::Integrability(_))));
    }

    #[test]
    fn entropy_homogeneity_and_nonnegativity() {
        let p = MeasureParams::new(1, 1.0, 2.0).unwrap();
        let f = TestFunction::gaussian_bump(vec![0.7], 1.3).unwrap();
        let base = entropy(&f, p, &cfg()).unwrap();
        assert!(base.value > 0.0);
        for c in [0.3, 2.0, 11.0] {
            let g = TestFunction::new(
                1,
                Family::Custom {
                    name: "scaled".into(),
                    value: {
                        let f = f.clone();
                        std::sync::Arc::new(move |x: &[f64]| c * f.value(x))
                    },
                    gradient: {
                        let f = f.clone();
                        std::sync::Arc::new(move |x: &[f64]| f.gradient(x).iter().map(|v| c * v).collect())
                    },
                    hessian: None,
                },
            )
            .unwrap();
            let e = entropy(&g, p, &cfg()).unwrap();
            assert!((e.value - c * c * base.value).abs() < 1e-9 * (c * c * base.value).max(1.0));
        }
    }

    #[test]
    fn quadrature_and_monte_carlo_agree_in_two_dimensions() {
        let p = MeasureParams::new(2, 1.5, 2.0).unwrap();
        let w = Weight::omega_log(2.0).unwrap();
        let f = TestFunction::gaussian_bump(vec![0.5, -0.3], 1.2).unwrap();
        let q = lsi_ratio(&f, &w, p, &cfg(), None).unwrap();
        let mc = lsi_ratio(&f, &w, p, &cfg().monte_carlo(), None).unwrap();
        assert_eq!(mc.method, EstimateMethod::MonteCarlo);
        assert!((q.entropy - mc.entropy).abs() <= 4.0 * mc.entropy_err, "{q:?} {mc:?}");
        assert!((q.energy - mc.energy).abs() <= 4.0 * mc.energy_err, "{q:?} {mc:?}");
    }

    #[test]
    fn radial_and_cartesian_agree() {
        let p = MeasureParams::new(2, 1.5, 1.0).unwrap();
        let w = Weight::new(WeightKind::OmegaAffineLog(1.5), 1.0).unwrap();
        let f = TestFunction::spline_bump(vec![0.0, 0.0], 1.7).unwrap();
        let rad = lsi_ratio(&f, &w, p, &cfg(), None).unwrap();
        let m: Measure = p.into();
        let cart = integrate(
            &m,
            |x| [grad_sq(&f.gradient(x)) * w.eval(x)],
            &IntegrationConfig { rel_tol: 1e-9, ..cfg() },
        )
        .unwrap();
        assert!((rad.energy - cart.value[0]).abs() < 1e-7 * rad.energy);
    }

    #[test]
    fn rejects_bad_config() {
        let p = MeasureParams::new(1, 1.0, 2.0).unwrap();
        let f = TestFunction::gaussian_bump(vec![0.0], 1.0).unwrap();
        let bad = IntegrationConfig { mc_samples: 10, ..cfg() };
        assert!(entropy(&f, p, &bad).is_err());
        let bad = IntegrationConfig { rel_tol: 0.0, ..cfg() };
        assert!(entropy(&f, p, &bad).is_err());
    }
}
