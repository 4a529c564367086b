//! Bakry–Émery calculus for L = ω log ω Δ + 2(1 − (β−1) log ω)⟨x, ∇⟩ on
//! ℝⁿ with ω = σ + |x|²: carré du champ, the closed form of Γ₂, remainder
//! functions, curvature-dimension checks and a finite-difference oracle
//! built directly from 2Γ₂(f) = LΓ(f) − 2Γ(f, Lf).
//!
//! Closed form used throughout, with L = log ω, Ω = ωL, g = ∇f, H = ∇²f:
//!
//! Γ₂(f) = ‖M‖²_HS + A(L)(|g|²|x|² − ⟨g,x⟩²) + (2β−n)Ω|g|² + R(ω)|g|²
//!
//! M = ΩH + (∇Ω gᵀ + g ∇Ωᵀ)/2 − ⟨g,∇Ω⟩/2 · I,   ∇Ω = 2(1+L)x,
//! A(t) = (n−2)t² + (2n−4β)t + (n−2),
//! R(t) = (2−n)(t−σ) + σ(2β+n−2)log²t − 2σ(β−n+1)log t.
//!
//! [`a_poly`], [`a_discriminant`] and [`a_largest_root`] evaluate the
//! alternative coefficient (n−2)t² + (n+2−4β)t + (n−2) that appears in the
//! literature; the two agree at n = 2.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::measure::MeasureParams;
use crate::testfn::{Family, TestFunction};

/// Upper end of the t-grid used for positivity scans.
pub const GRID_TOP: f64 = 1e8;
/// Default number of log-spaced grid points.
pub const GRID_POINTS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratorParams {
    pub measure: MeasureParams,
}

impl GeneratorParams {
    pub fn new(n: usize, beta: f64, sigma: f64) -> Result<Self> {
        let measure = MeasureParams::new(n, beta, sigma)?;
        Self::from_measure(measure)
    }

    pub fn from_measure(measure: MeasureParams) -> Result<Self> {
        if !(measure.sigma > 1.0) {
            return Err(domain(format!(
                "the generator needs sigma > 1, got {}",
                measure.sigma
            )));
        }
        Ok(Self { measure })
    }

    fn n(&self) -> usize {
        self.measure.n
    }
    fn beta(&self) -> f64 {
        self.measure.beta
    }
    fn sigma(&self) -> f64 {
        self.measure.sigma
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_point(x: &[f64], gp: &GeneratorParams) -> Result<()> {
    if x.len() != gp.n() {
        return Err(domain(format!("point has dimension {} but n = {}", x.len(), gp.n())));
    }
    Ok(())
}

/// Γ(f)(x) = ω log ω |∇f(x)|².
pub fn gamma(f: &TestFunction, x: &[f64], gp: &GeneratorParams) -> Result<f64> {
    check_point(x, gp)?;
    let w = gp.sigma() + dot(x, x);
    let g = f.gradient(x);
    Ok(w * w.ln() * dot(&g, &g))
}

/// 1D remainder R_σ(t) = t − σ + (2β−1)σ log²t − 2βσ log t, for t ≥ σ > 1.
pub fn remainder_1d(t: f64, beta: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 1.0) || !(t >= sigma) {
        return Err(domain(format!("remainder needs t >= sigma > 1 (t = {t}, sigma = {sigma})")));
    }
    Ok(remainder_1d_raw(t, beta, sigma))
}

fn remainder_1d_raw(t: f64, beta: f64, sigma: f64) -> f64 {
    let l = t.ln();
    t - sigma + (2.0 * beta - 1.0) * sigma * l * l - 2.0 * beta * sigma * l
}

/// σ₀ = exp(2β/(2β−1)), the scale above which CD(2β−1, ∞) holds in 1D.
pub fn sigma0_1d(beta: f64) -> Result<f64> {
    if !(beta > 0.5) || !beta.is_finite() {
        return Err(domain(format!("sigma0 needs beta > 1/2, got {beta}")));
    }
    Ok((2.0 * beta / (2.0 * beta - 1.0)).exp())
}

/// σ₀ = exp(2(n−2)/(2β−n)) of the n-dimensional theorem.
pub fn sigma0_nd(n: usize, beta: f64) -> Result<f64> {
    let d = 2.0 * beta - n as f64;
    if !(d > 0.0) {
        return Err(domain(format!("sigma0 needs beta > n/2 (n = {n}, beta = {beta})")));
    }
    Ok((2.0 * (n as f64 - 2.0) / d).exp())
}

/// (n−2)t² + (n+2−4β)t + (n−2).
pub fn a_poly(t: f64, n: usize, beta: f64) -> f64 {
    let m = n as f64 - 2.0;
    m * t * t + (m - 4.0 * (beta - 1.0)) * t + m
}

/// Discriminant of [`a_poly`]: (4β−3n+2)(4β+n−6).
pub fn a_discriminant(n: usize, beta: f64) -> f64 {
    let n = n as f64;
    (4.0 * beta - 3.0 * n + 2.0) * (4.0 * beta + n - 6.0)
}

/// Largest root of [`a_poly`].
pub fn a_largest_root(n: usize, beta: f64) -> Result<f64> {
    largest_root(n, a_discriminant(n, beta), 4.0 * beta - n as f64 - 2.0)
}

/// Coefficient of |g|²|x|² − ⟨g,x⟩² in Γ₂: (n−2)t² + (2n−4β)t + (n−2).
pub fn gamma2_a_coefficient(t: f64, n: usize, beta: f64) -> f64 {
    let m = n as f64 - 2.0;
    m * t * t + (2.0 * n as f64 - 4.0 * beta) * t + m
}

/// Discriminant of [`gamma2_a_coefficient`]: 16(1−β)(n−1−β).
pub fn gamma2_a_discriminant(n: usize, beta: f64) -> f64 {
    16.0 * (1.0 - beta) * (n as f64 - 1.0 - beta)
}

pub fn gamma2_a_largest_root(n: usize, beta: f64) -> Result<f64> {
    largest_root(n, gamma2_a_discriminant(n, beta), 4.0 * beta - 2.0 * n as f64)
}

fn largest_root(n: usize, disc: f64, minus_b: f64) -> Result<f64> {
    if n < 3 {
        return Err(domain("the quadratic degenerates for n < 3"));
    }
    if disc < 0.0 {
        return Err(Error::NegativeDiscriminant(disc));
    }
    Ok((minus_b + disc.sqrt()) / (2.0 * (n as f64 - 2.0)))
}

/// R(t) = (2−n)(t−σ) + σ(2β+n−2)log²t − 2σ(β−n+1)log t, for t ≥ σ > 1.
/// Reduces to [`remainder_1d`] at n = 1.
pub fn remainder_nd(t: f64, n: usize, beta: f64, sigma: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    if !(sigma > 1.0) || !(t >= sigma) {
        return Err(domain(format!("remainder needs t >= sigma > 1 (t = {t}, sigma = {sigma})")));
    }
    Ok(remainder_nd_raw(t, n, beta, sigma))
}

fn remainder_nd_raw(t: f64, n: usize, beta: f64, sigma: f64) -> f64 {
    let nf = n as f64;
    let l = t.ln();
    (2.0 - nf) * (t - sigma) + sigma * (2.0 * beta + nf - 2.0) * l * l
        - 2.0 * sigma * (beta - nf + 1.0) * l
}

/// Quadratic test function used as a witness: f(y) = ⟨g, y−x⟩ + ½(y−x)ᵀH(y−x).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub point: Vec<f64>,
    pub t: f64,
    pub gradient: Vec<f64>,
    pub hessian: Vec<Vec<f64>>,
    pub gamma2_minus_rho_gamma: f64,
}

impl Witness {
    pub fn test_function(&self) -> TestFunction {
        TestFunction {
            dim: self.point.len(),
            family: Family::Quadratic {
                c: 0.0,
                origin: self.point.clone(),
                gradient: self.gradient.clone(),
                hessian: self.hessian.clone(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdReport {
    pub n: usize,
    pub beta: f64,
    pub sigma: f64,
    pub rho: f64,
    pub sigma0: f64,
    pub holds: bool,
    /// 1D: min R_σ(t); nD: min of the normalised remainder over t ≥ σ.
    pub remainder_min: f64,
    pub argmin_t: f64,
    /// Largest t scanned.
    pub grid_top: f64,
    /// Positivity beyond the grid established analytically.
    pub tail_certified: bool,
    /// nD only: the anisotropic coefficient is nonnegative for all t ≥ σ.
    pub a_nonnegative: bool,
    pub witness: Option<Witness>,
}

fn log_grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let m = points.max(2);
    (0..m).map(move |i| {
        if i == 0 {
            lo
        } else if i + 1 == m {
            hi
        } else {
            (a + (b - a) * i as f64 / (m - 1) as f64).exp()
        }
    })
}

/// Point on the first axis with ω(x) = t.
fn point_at(n: usize, t: f64, sigma: f64) -> Vec<f64> {
    let mut x = vec![0.0; n];
    x[0] = (t - sigma).max(0.0).sqrt();
    x
}

/// Quadratic with M(x) = 0 and gradient `g` at `x`.
fn flat_quadratic(x: &[f64], g: &[f64], sigma: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let w = sigma + dot(x, x);
    let l = w.ln();
    let omega = w * l;
    let dw: Vec<f64> = x.iter().map(|v| 2.0 * (1.0 + l) * v).collect();
    let p = dot(g, &dw);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let sym = 0.5 * (dw[i] * g[j] + g[i] * dw[j]);
                    (-sym + if i == j { 0.5 * p } else { 0.0 }) / omega
                })
                .collect()
        })
        .collect()
}

fn make_witness(gp: &GeneratorParams, t: f64, rho: f64, perpendicular: bool) -> Result<Witness> {
    let n = gp.n();
    let x = point_at(n, t, gp.sigma());
    let mut g = vec![0.0; n];
    if perpendicular && n >= 2 {
        g[1] = 1.0;
    } else {
        g[0] = 1.0;
    }
    let hessian = flat_quadratic(&x, &g, gp.sigma());
    let mut w = Witness { point: x, t, gradient: g, hessian, gamma2_minus_rho_gamma: 0.0 };
    let f = w.test_function();
    w.gamma2_minus_rho_gamma = gamma2_closed_form(&f, &w.point, gp)? - rho * gamma(&f, &w.point, gp)?;
    Ok(w)
}

/// CD(2β−1, ∞) check in one dimension over a log grid of t ∈ [σ, 10⁸].
///
/// Positivity is declared when the grid minimum of R_σ is at least
/// −1e−6·σ; beyond the grid, R′_σ(t) ≥ 1 whenever log t ≥ β/(2β−1), which
/// covers every σ ≥ σ₀.
pub fn cd_check_1d(beta: f64, sigma: f64, grid_points: usize) -> Result<CdReport> {
    let gp = GeneratorParams::new(1, beta, sigma)?;
    let sigma0 = sigma0_1d(beta)?;
    let rho = 2.0 * beta - 1.0;
    let top = GRID_TOP.max(sigma * 10.0);
    let (mut min, mut arg) = (f64::INFINITY, sigma);
    for t in log_grid(sigma, top, grid_points) {
        let r = remainder_1d_raw(t, beta, sigma);
        if r < min {
            min = r;
            arg = t;
        }
    }
    // R′(t) = 1 + (2σ/t)((2β−1) log t − β) ≥ 1 beyond exp(β/(2β−1))
    let tail_certified = top.ln() >= beta / (2.0 * beta - 1.0);
    let holds = min >= -1e-6 * sigma && tail_certified;
    let witness = if holds { None } else { Some(make_witness(&gp, arg, rho, false)?) };
    Ok(CdReport {
        n: 1,
        beta,
        sigma,
        rho,
        sigma0,
        holds,
        remainder_min: min,
        argmin_t: arg,
        grid_top: top,
        tail_certified,
        a_nonnegative: true,
        witness,
    })
}

/// CD(ρ, ∞) check in dimension n ≥ 2 with ε = 2β − n − ρ.
///
/// For t = ω ≥ σ the quantity Γ₂ − ρΓ can be driven to |g|²·Ω times either
/// ℛ(t) = ε + R(t)/(t log t) (gradient along x) or
/// ℛ(t) + A(log t)(t−σ)/(t log t) (gradient orthogonal to x), by choosing
/// the Hessian so that M = 0. The criterion holds iff both are nonnegative.
/// Beyond the grid, ℛ(t) ≥ ε − (n−2)/log T − 2σ|β−n+1|/T.
pub fn cd_check_nd(n: usize, beta: f64, sigma: f64, rho: f64, grid_points: usize) -> Result<CdReport> {
    if n < 2 {
        return Err(domain("cd_check_nd needs n >= 2; use cd_check_1d"));
    }
    let gp = GeneratorParams::new(n, beta, sigma)?;
    let nf = n as f64;
    let eps = 2.0 * beta - nf - rho;
    let sigma0 = sigma0_nd(n, beta)?;
    let mut top = GRID_TOP.max(sigma * 10.0);
    if eps > 0.0 && n > 2 {
        top = top.max((2.0 * (nf - 2.0) / eps).exp().min(1e300));
    }
    let (mut min, mut arg, mut perp) = (f64::INFINITY, sigma, false);
    let mut a_nonnegative = true;
    for t in log_grid(sigma, top, grid_points) {
        let l = t.ln();
        let along = eps + remainder_nd_raw(t, n, beta, sigma) / (t * l);
        let a = gamma2_a_coefficient(l, n, beta);
        if a < 0.0 {
            a_nonnegative = false;
        }
        let across = along + a * (t - sigma) / (t * l);
        if along < min {
            min = along;
            arg = t;
            perp = false;
        }
        if across < min {
            min = across;
            arg = t;
            perp = true;
        }
    }
    let tail_bound = eps - (nf - 2.0) / top.ln() - 2.0 * sigma * (beta - nf + 1.0).abs() / top;
    // across x the extra term A(log t)(t−σ)/(t log t) is eventually positive
    // for n ≥ 3; for n = 2 it tends to 4 − 4β
    let across_tail = match n {
        2 => beta <= 1.0,
        _ => gamma2_a_largest_root(n, beta).map_or(true, |root| top.ln() >= root),
    };
    let tail_certified = tail_bound >= 0.0 && across_tail;
    let holds = min >= -1e-9 && tail_certified;
    let witness = if holds { None } else { Some(make_witness(&gp, arg, rho, perp)?) };
    Ok(CdReport {
        n,
        beta,
        sigma,
        rho,
        sigma0,
        holds,
        remainder_min: min,
        argmin_t: arg,
        grid_top: top,
        tail_certified,
        a_nonnegative,
        witness,
    })
}

/// Hilbert–Schmidt matrix M at x for gradient g and Hessian h.
fn m_matrix(x: &[f64], g: &[f64], h: &[Vec<f64>], sigma: f64) -> Vec<Vec<f64>> {
    let n = x.len();
    let w = sigma + dot(x, x);
    let l = w.ln();
    let omega = w * l;
    let dw: Vec<f64> = x.iter().map(|v| 2.0 * (1.0 + l) * v).collect();
    let p = dot(g, &dw);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    omega * h[i][j] + 0.5 * (dw[i] * g[j] + g[i] * dw[j])
                        - if i == j { 0.5 * p } else { 0.0 }
                })
                .collect()
        })
        .collect()
}

fn hessian_of(f: &TestFunction, x: &[f64]) -> Result<Vec<Vec<f64>>> {
    f.hessian(x).ok_or_else(|| {
        Error::Precondition(format!("{} has no closed-form Hessian", f.id()))
    })
}

/// Γ₂(f)(x) from the closed form.
pub fn gamma2_closed_form(f: &TestFunction, x: &[f64], gp: &GeneratorParams) -> Result<f64> {
    check_point(x, gp)?;
    let (n, beta, sigma) = (gp.n(), gp.beta(), gp.sigma());
    let g = f.gradient(x);
    let h = hessian_of(f, x)?;
    let m = m_matrix(x, &g, &h, sigma);
    let hs: f64 = m.iter().flatten().map(|v| v * v).sum();
    let r2 = dot(x, x);
    let w = sigma + r2;
    let l = w.ln();
    let g2 = dot(&g, &g);
    let gx = dot(&g, x);
    let aniso = gamma2_a_coefficient(l, n, beta) * (g2 * r2 - gx * gx);
    Ok(hs + aniso + (2.0 * beta - n as f64) * w * l * g2 + remainder_nd_raw(w, n, beta, sigma) * g2)
}

/// One-dimensional form (Ω f″ + x(1+log ω) f′)² + (2β−1)Γ(f) + R_σ(ω) f′².
pub fn gamma2_closed_form_1d(f: &TestFunction, x: f64, gp: &GeneratorParams) -> Result<f64> {
    if gp.n() != 1 {
        return Err(domain("one-dimensional form needs n = 1"));
    }
    let (beta, sigma) = (gp.beta(), gp.sigma());
    let d1 = f.gradient(&[x])[0];
    let d2 = hessian_of(f, &[x])?[0][0];
    let w = sigma + x * x;
    let l = w.ln();
    let sq = w * l * d2 + x * (1.0 + l) * d1;
    Ok(sq * sq + (2.0 * beta - 1.0) * w * l * d1 * d1 + remainder_1d_raw(w, beta, sigma) * d1 * d1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Gamma2Oracle {
    /// Richardson-combined value.
    pub value: f64,
    /// |Γ₂(h) − Γ₂(h/2)| for the two underlying step sizes.
    pub richardson_gap: f64,
    /// Raised when the two step sizes disagree beyond 1e−6·(1 + |value|).
    pub degenerate: bool,
}

/// Finite-difference Γ₂ from the operator definition, using only values of
/// f: L and Γ are discretised with fourth-order central stencils (outer and
/// inner step both h·(1+|x|)), Γ(u, v) is obtained by polarisation, and two
/// step sizes are combined by Richardson extrapolation.
pub fn gamma2_fd_oracle(f: &TestFunction, x: &[f64], gp: &GeneratorParams, h: f64) -> Result<Gamma2Oracle> {
    check_point(x, gp)?;
    if !(h > 0.0) {
        return Err(domain("finite-difference step must be positive"));
    }
    let scale = 1.0 + dot(x, x).sqrt();
    let coarse = fd_gamma2(f, x, gp, h * scale);
    let fine = fd_gamma2(f, x, gp, 0.5 * h * scale);
    let value = (16.0 * fine - coarse) / 15.0;
    let gap = (fine - coarse).abs();
    Ok(Gamma2Oracle { value, richardson_gap: gap, degenerate: gap > 1e-6 * (1.0 + value.abs()) })
}

struct FdOps<'a> {
    gp: &'a GeneratorParams,
    h: f64,
}

impl FdOps<'_> {
    fn omega_terms(&self, y: &[f64]) -> (f64, f64) {
        let w = self.gp.sigma() + dot(y, y);
        let l = w.ln();
        (w * l, 2.0 * (1.0 - (self.gp.beta() - 1.0) * l))
    }

    fn shifted(y: &[f64], i: usize, d: f64) -> Vec<f64> {
        let mut z = y.to_vec();
        z[i] += d;
        z
    }

    fn grad(&self, u: &dyn Fn(&[f64]) -> f64, y: &[f64]) -> Vec<f64> {
        let h = self.h;
        (0..y.len())
            .map(|i| {
                let p1 = u(&Self::shifted(y, i, h));
                let m1 = u(&Self::shifted(y, i, -h));
                let p2 = u(&Self::shifted(y, i, 2.0 * h));
                let m2 = u(&Self::shifted(y, i, -2.0 * h));
                (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h)
            })
            .collect()
    }

    /// Lu(y) = Ω Δu + 2(1 − (β−1) log ω)⟨y, ∇u⟩.
    fn apply_l(&self, u: &dyn Fn(&[f64]) -> f64, y: &[f64]) -> f64 {
        let h = self.h;
        let u0 = u(y);
        let mut lap = 0.0;
        let mut drift = 0.0;
        for i in 0..y.len() {
            let p1 = u(&Self::shifted(y, i, h));
            let m1 = u(&Self::shifted(y, i, -h));
            let p2 = u(&Self::shifted(y, i, 2.0 * h));
            let m2 = u(&Self::shifted(y, i, -2.0 * h));
            lap += (-(p2 + m2) + 16.0 * (p1 + m1) - 30.0 * u0) / (12.0 * h * h);
            drift += y[i] * (8.0 * (p1 - m1) - (p2 - m2)) / (12.0 * h);
        }
        let (omega, b) = self.omega_terms(y);
        omega * lap + b * drift
    }

    /// Γ(u)(y) = Ω|∇u|².
    fn gamma(&self, u: &dyn Fn(&[f64]) -> f64, y: &[f64]) -> f64 {
        let g = self.grad(u, y);
        self.omega_terms(y).0 * dot(&g, &g)
    }
}

fn fd_gamma2(f: &TestFunction, x: &[f64], gp: &GeneratorParams, h: f64) -> f64 {
    let ops = FdOps { gp, h };
    let fv = |y: &[f64]| f.value(y);
    let gamma_f = |y: &[f64]| ops.gamma(&fv, y);
    let l_gamma = ops.apply_l(&gamma_f, x);
    let lf = |y: &[f64]| ops.apply_l(&fv, y);
    let sum = |y: &[f64]| fv(y) + lf(y);
    // Γ(f, Lf) by polarisation
    let cross = 0.5 * (ops.gamma(&sum, x) - ops.gamma(&fv, x) - ops.gamma(&lf, x));
    0.5 * (l_gamma - 2.0 * cross)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterExample {
    pub beta: f64,
    pub sigma: f64,
    pub rho: f64,
    pub point: Vec<f64>,
    pub gradient: Vec<f64>,
    pub hessian: Vec<Vec<f64>>,
    pub gamma: f64,
    /// Γ₂ − ρΓ from the closed form.
    pub value: f64,
    /// Γ₂ − ρΓ with Γ₂ from the finite-difference oracle.
    pub oracle_value: f64,
    pub oracle_gap: f64,
}

/// In n = 2, finds a point and a quadratic with M(x) = 0, ⟨∇f, x⟩ = 0 and
/// Γ₂ − ρΓ < 0, scanning |x| over a log grid.
pub fn counterexample_2d(beta: f64, sigma: f64, rho: f64) -> Result<CounterExample> {
    if !(beta > 1.0) {
        return Err(domain(format!("counterexample needs beta > 1, got {beta}")));
    }
    if !(rho > 0.0) {
        return Err(domain(format!("counterexample needs rho > 0, got {rho}")));
    }
    let gp = GeneratorParams::new(2, beta, sigma)?;
    for r in log_grid(1e-2, 1e12, 1400) {
        let x = vec![r, 0.0];
        let g = vec![0.0, 1.0];
        let hessian = flat_quadratic(&x, &g, sigma);
        let f = TestFunction {
            dim: 2,
            family: Family::Quadratic { c: 0.0, origin: x.clone(), gradient: g.clone(), hessian: hessian.clone() },
        };
        let gam = gamma(&f, &x, &gp)?;
        let value = gamma2_closed_form(&f, &x, &gp)? - rho * gam;
        if value < -1e-3 * gam {
            let oracle = gamma2_fd_oracle(&f, &x, &gp, 1e-2)?;
            return Ok(CounterExample {
                beta,
                sigma,
                rho,
                point: x,
                gradient: g,
                hessian,
                gamma: gam,
                value,
                oracle_value: oracle.value - rho * gam,
                oracle_gap: oracle.richardson_gap,
            });
        }
    }
    Err(Error::SearchExhausted(format!(
        "no negative Γ₂ − ρΓ found for beta = {beta}, sigma = {sigma}, rho = {rho}"
    )))
}

/// Cubic polynomial in n variables built from a flat coefficient list
/// (origin, gradient, upper Hessian, cubic terms, constant); needs at least
/// 3n + n(n+1)/2 + 1 entries.
pub fn random_cubic(n: usize, coeffs: &[f64]) -> Result<TestFunction> {
    let need = 3 * n + n * (n + 1) / 2 + 1;
    if coeffs.len() < need {
        return Err(domain(format!("need {need} coefficients, got {}", coeffs.len())));
    }
    let mut k = coeffs.iter().copied();
    let mut next = || k.next().unwrap_or(0.0);
    let origin: Vec<f64> = (0..n).map(|_| next()).collect();
    let gradient: Vec<f64> = (0..n).map(|_| next()).collect();
    let mut hessian = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            let v = next();
            hessian[i][j] = v;
            hessian[j][i] = v;
        }
    }
    let cubic: Vec<f64> = (0..n).map(|_| 0.3 * next()).collect();
    TestFunction::new(n, Family::Polynomial { c: next(), origin, gradient, hessian, cubic })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gamma2Case {
    pub n: usize,
    pub beta: f64,
    pub sigma: f64,
    pub point: Vec<f64>,
    pub closed_form: f64,
    pub oracle: f64,
    pub richardson_gap: f64,
    /// |closed − oracle| / |closed|
    pub rel_err: f64,
}

/// Seeded comparison of [`gamma2_closed_form`] with [`gamma2_fd_oracle`] on
/// random cubic polynomials, cycling n through 1, 2, 3. Parameters are drawn
/// as β − n/2 ∈ (0.05, 2), log σ ∈ (0.1, 3), coefficients in (−1, 1) and
/// points in (−2.5, 2.5)ⁿ.
pub fn gamma2_verify(cases: usize, seed: u64, h: f64) -> Result<Vec<Gamma2Case>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(cases);
    for i in 0..cases {
        let n = 1 + i % 3;
        let beta = n as f64 / 2.0 + rng.random_range(0.05..2.0);
        let sigma = rng.random_range(0.1f64..3.0).exp();
        let coeffs: Vec<f64> = (0..20).map(|_| rng.random_range(-1.0..1.0)).collect();
        let point: Vec<f64> = (0..n).map(|_| rng.random_range(-2.5..2.5)).collect();
        let gp = GeneratorParams::new(n, beta, sigma)?;
        let f = random_cubic(n, &coeffs)?;
        let closed_form = gamma2_closed_form(&f, &point, &gp)?;
        let o = gamma2_fd_oracle(&f, &point, &gp, h)?;
        out.push(Gamma2Case {
            n,
            beta,
            sigma,
            point,
            closed_form,
            oracle: o.value,
            richardson_gap: o.richardson_gap,
            rel_err: (closed_form - o.value).abs() / closed_form.abs().max(f64::MIN_POSITIVE),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::E;

    fn e2() -> f64 {
        E * E
    }

    fn identity_1d() -> TestFunction {
        TestFunction::new(
            1,
            Family::Quadratic { c: 0.0, origin: vec![0.0], gradient: vec![1.0], hessian: vec![vec![0.0]] },
        )
        .unwrap()
    }

    #[test]
    fn gamma_examples() {
        let gp = GeneratorParams::new(1, 1.0, E).unwrap();
        assert_relative_eq!(gamma(&identity_1d(), &[0.0], &gp).unwrap(), E, max_relative = 1e-15);
        let c = TestFunction::constant(1, 3.0).unwrap();
        assert_eq!(gamma(&c, &[0.4], &gp).unwrap(), 0.0);
        let gp2 = GeneratorParams::new(2, 2.0, e2()).unwrap();
        let y = TestFunction::new(
            2,
            Family::Quadratic {
                c: 0.0,
                origin: vec![0.0; 2],
                gradient: vec![0.0, 1.0],
                hessian: vec![vec![0.0; 2]; 2],
            },
        )
        .unwrap();
        let w = e2() + 1.0;
        assert_relative_eq!(gamma(&y, &[1.0, 0.0], &gp2).unwrap(), w * w.ln(), max_relative = 1e-15);
        assert!(GeneratorParams::new(1, 1.0, 1.0).is_err());
    }

    #[test]
    fn remainder_1d_examples() {
        assert!(remainder_1d(e2(), 1.0, e2()).unwrap().abs() < 1e-12);
        let t = E.powi(4);
        assert_relative_eq!(remainder_1d(t, 1.0, e2()).unwrap(), t + 7.0 * e2(), max_relative = 1e-13);
        assert_relative_eq!(remainder_1d(E, 1.0, E).unwrap(), -E, max_relative = 1e-13);
        assert!(remainder_1d(2.0, 1.0, 3.0).is_err());
        // R_σ(σ) = σ log σ ((2β−1) log σ − 2β)
        for (b, s) in [(0.8, 3.0), (2.0, 5.5), (1.3, 1.2)] {
            let l = f64::ln(s);
            assert_relative_eq!(
                remainder_1d(s, b, s).unwrap(),
                s * l * ((2.0 * b - 1.0) * l - 2.0 * b),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn sigma0_examples() {
        assert_relative_eq!(sigma0_1d(1.0).unwrap(), e2(), max_relative = 1e-15);
        assert_relative_eq!(sigma0_1d(1.5).unwrap(), E.powf(1.5), max_relative = 1e-15);
        assert!((sigma0_1d(1e9).unwrap() - E).abs() < 1e-8);
        assert!(sigma0_1d(0.5).is_err());
        let mut last = f64::INFINITY;
        for b in [0.6, 1.0, 2.0, 10.0, 100.0] {
            let s = sigma0_1d(b).unwrap();
            assert!(s < last);
            last = s;
        }
    }

    #[test]
    fn cd_1d_examples() {
        let r = cd_check_1d(1.0, e2(), GRID_POINTS).unwrap();
        assert!(r.holds && r.remainder_min.abs() < 1e-9 && r.argmin_t == e2());
        assert_eq!(r.rho, 1.0);
        let r = cd_check_1d(1.0, E, GRID_POINTS).unwrap();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!(w.t, E);
        assert_relative_eq!(r.remainder_min, -E, max_relative = 1e-12);
        assert_relative_eq!(w.gamma2_minus_rho_gamma, -E, max_relative = 1e-12);
        assert!(cd_check_1d(1.0, 10.0, GRID_POINTS).unwrap().holds);
    }

    #[test]
    fn cd_1d_threshold_sharp() {
        for b in [0.75, 1.0, 1.5, 3.0] {
            let s0 = sigma0_1d(b).unwrap();
            assert!(cd_check_1d(b, s0 * (1.0 + 1e-6), GRID_POINTS).unwrap().holds);
            let fail = cd_check_1d(b, s0 * (1.0 - 1e-3), GRID_POINTS).unwrap();
            assert!(!fail.holds);
            assert!(fail.witness.unwrap().gamma2_minus_rho_gamma < 0.0);
        }
    }

    #[test]
    fn a_poly_examples() {
        for t in [-1.0, 0.0, 1.0, 2.5] {
            assert_relative_eq!(a_poly(t, 3, 1.75), (t - 1.0) * (t - 1.0), epsilon = 1e-14);
        }
        assert_relative_eq!(a_poly(1.0, 2, 1.6), -4.0 * 0.6, max_relative = 1e-14);
        assert_eq!(a_poly(0.0, 3, 1.5), 1.0);
        assert_eq!(a_discriminant(3, 1.75), 0.0);
        assert_eq!(a_discriminant(3, 1.5), -3.0);
        assert_eq!(a_discriminant(3, 2.0), 5.0);
        assert_relative_eq!(a_largest_root(3, 2.0).unwrap(), (3.0 + 5f64.sqrt()) / 2.0, max_relative = 1e-15);
        assert_relative_eq!(a_largest_root(3, 1.75).unwrap(), 1.0, max_relative = 1e-15);
        assert!(matches!(a_largest_root(3, 1.5), Err(Error::NegativeDiscriminant(_))));
    }

    #[test]
    fn anisotropic_coefficient() {
        for (n, b) in [(3, 1.2), (4, 2.7), (5, 1.1)] {
            let d = gamma2_a_discriminant(n, b);
            let m = n as f64 - 2.0;
            let bb = 2.0 * n as f64 - 4.0 * b;
            assert_relative_eq!(d, bb * bb - 4.0 * m * m, max_relative = 1e-12);
        }
        // agrees with the alternative form at n = 2
        for t in [0.3, 1.0, 4.0] {
            assert_eq!(gamma2_a_coefficient(t, 2, 1.7), a_poly(t, 2, 1.7));
        }
        let root = gamma2_a_largest_root(3, 2.5).unwrap();
        assert!(gamma2_a_coefficient(root, 3, 2.5).abs() < 1e-12);
        assert!(gamma2_a_discriminant(3, 1.9) < 0.0);
    }

    #[test]
    fn remainder_nd_examples() {
        // β − n + 1 = 0 kills the last term; σ(2β+n−2)log²σ = 5·4·e²
        assert_relative_eq!(remainder_nd(e2(), 3, 2.0, e2()).unwrap(), 20.0 * e2(), max_relative = 1e-13);
        assert_relative_eq!(remainder_nd(E, 2, 2.0, E).unwrap(), 2.0 * E, max_relative = 1e-13);
        // no linear growth at n = 2
        let a = remainder_nd(1e6, 2, 2.0, E).unwrap();
        let b = remainder_nd(2e6, 2, 2.0, E).unwrap();
        assert!((b - a).abs() < 1e-3 * 1e6);
        for t in [3.0, 10.0, 1e4] {
            assert_relative_eq!(
                remainder_nd(t, 1, 1.3, 2.5).unwrap(),
                remainder_1d(t, 1.3, 2.5).unwrap(),
                max_relative = 1e-12
            );
        }
        assert!(remainder_nd(1.0, 3, 2.0, 2.0).is_err());
    }

    #[test]
    fn cd_nd_examples() {
        let s0 = sigma0_nd(3, 1.75).unwrap();
        assert_relative_eq!(s0, E.powi(4), max_relative = 1e-14);
        let ok = cd_check_nd(3, 1.75, s0, 0.25, GRID_POINTS).unwrap();
        assert!(ok.holds && ok.tail_certified && ok.a_nonnegative, "{ok:?}");
        let full = cd_check_nd(3, 1.75, s0, 0.5, GRID_POINTS).unwrap();
        assert!(!full.holds);
        assert!(full.remainder_min < 0.0 && full.argmin_t > 1e4 && !full.tail_certified);
        assert!(full.witness.unwrap().gamma2_minus_rho_gamma < 0.0);
    }

    #[test]
    fn cd_nd_small_sigma_still_positive() {
        // With ρ = β − n/2 the normalised remainder stays positive at σ = 2.
        let r = cd_check_nd(3, 1.75, 2.0, 0.25, GRID_POINTS).unwrap();
        assert!(r.holds, "{r:?}");
        assert!(r.remainder_min > 0.0);
    }

    #[test]
    fn cd_nd_two_dimensions_never_holds() {
        for rho in [0.05, 0.5] {
            let r = cd_check_nd(2, 2.0, E, rho, GRID_POINTS).unwrap();
            assert!(!r.holds);
            assert!(r.witness.unwrap().gamma2_minus_rho_gamma < 0.0);
        }
    }

    #[test]
    fn closed_form_examples() {
        let gp = GeneratorParams::new(1, 1.0, e2()).unwrap();
        let c = TestFunction::constant(1, 2.0).unwrap();
        assert_eq!(gamma2_closed_form(&c, &[0.3], &gp).unwrap(), 0.0);
        let v = gamma2_closed_form(&identity_1d(), &[0.0], &gp).unwrap();
        assert_relative_eq!(v, 2.0 * e2(), max_relative = 1e-12);
    }

    #[test]
    fn affine_at_origin() {
        for (b, s) in [(0.8, 1.5), (2.0, 3.0), (1.0, 9.0)] {
            let gp = GeneratorParams::new(1, b, s).unwrap();
            let f = TestFunction::new(
                1,
                Family::Quadratic { c: 1.0, origin: vec![0.0], gradient: vec![-1.7], hessian: vec![vec![0.0]] },
            )
            .unwrap();
            let expect = (2.0 * b - 1.0) * gamma(&f, &[0.0], &gp).unwrap()
                + remainder_1d(s, b, s).unwrap() * 1.7 * 1.7;
            assert_relative_eq!(gamma2_closed_form(&f, &[0.0], &gp).unwrap(), expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn fd_oracle_examples() {
        let gp = GeneratorParams::new(1, 1.0, e2()).unwrap();
        let c = TestFunction::constant(1, 2.0).unwrap();
        assert_eq!(gamma2_fd_oracle(&c, &[0.5], &gp, 1e-2).unwrap().value, 0.0);
        let sq = TestFunction::new(
            1,
            Family::Quadratic { c: 0.0, origin: vec![0.0], gradient: vec![0.0], hessian: vec![vec![2.0]] },
        )
        .unwrap();
        let o = gamma2_fd_oracle(&sq, &[1.0], &gp, 1e-2).unwrap();
        let cf = gamma2_closed_form(&sq, &[1.0], &gp).unwrap();
        assert!(!o.degenerate);
        assert!((o.value - cf).abs() <= 1e-6 * (1.0 + cf.abs()), "{o:?} {cf}");
    }

    #[test]
    fn counterexamples() {
        for (b, s, rho) in [(2.0, E, 0.1), (2.0, E, 1.0), (1.5, e2(), 0.5)] {
            let c = counterexample_2d(b, s, rho).unwrap();
            assert!(c.value < 0.0 && c.oracle_value < 0.0);
            assert!((c.value - c.oracle_value).abs() <= 1e-6 * (1.0 + c.value.abs()), "{c:?}");
            // ⟨∇f, x⟩ = 0 and M(x) = 0
            assert_eq!(dot(&c.gradient, &c.point), 0.0);
            let m = m_matrix(&c.point, &c.gradient, &c.hessian, s);
            assert!(m.iter().flatten().all(|v| v.abs() < 1e-12));
        }
        let small = counterexample_2d(2.0, E, 0.1).unwrap();
        let large = counterexample_2d(2.0, E, 1.0).unwrap();
        assert!(large.point[0] < small.point[0]);
        assert!(counterexample_2d(1.0, E, 0.1).is_err());
    }

    #[test]
    fn seeded_campaign_is_reproducible() {
        let a = gamma2_verify(6, 3, 1e-2).unwrap();
        assert_eq!(a, gamma2_verify(6, 3, 1e-2).unwrap());
        assert_eq!(a.iter().map(|c| c.n).collect::<Vec<_>>(), vec![1, 2, 3, 1, 2, 3]);
        assert!(a.iter().all(|c| c.rel_err <= 1e-6));
        assert!(random_cubic(2, &[0.0; 5]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn closed_form_matches_oracle(
            n in 1usize..4,
            beta_frac in 0.05f64..2.0,
            log_sigma in 0.1f64..3.0,
            coeffs in proptest::collection::vec(-1.0f64..1.0, 20),
            xs in proptest::collection::vec(-2.5f64..2.5, 3),
        ) {
            let beta = n as f64 / 2.0 + beta_frac;
            let gp = GeneratorParams::new(n, beta, log_sigma.exp()).unwrap();
            let f = random_cubic(n, &coeffs).unwrap();
            let x = &xs[..n];
            let cf = gamma2_closed_form(&f, x, &gp).unwrap();
            let o = gamma2_fd_oracle(&f, x, &gp, 1e-2).unwrap();
            prop_assert!((cf - o.value).abs() <= 1e-6 * (1.0 + cf.abs()), "{cf} vs {:?}", o);
        }

        #[test]
        fn one_dimensional_reduction(
            beta in 0.55f64..4.0,
            log_sigma in 0.05f64..3.0,
            coeffs in proptest::collection::vec(-1.0f64..1.0, 20),
            x in -4.0f64..4.0,
        ) {
            let gp = GeneratorParams::new(1, beta, log_sigma.exp()).unwrap();
            let f = random_cubic(1, &coeffs).unwrap();
            let a = gamma2_closed_form(&f, &[x], &gp).unwrap();
            let b = gamma2_closed_form_1d(&f, x, &gp).unwrap();
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a.abs()));
        }
    }
}
