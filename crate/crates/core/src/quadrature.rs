//! Adaptive Gauss–Kronrod quadrature for vector-valued integrands, plus the
//! compactifying substitutions used for heavy-tailed integrals on ℝ and ℝ₊.
//!
//! Unbounded ranges are mapped to φ ∈ (0, π/2) through r = s·cot φ, so the
//! far tail sits at φ → 0 where it is resolved by repeated bisection. Working
//! in φ rather than θ = π/2 − φ keeps full relative precision near the tail
//! endpoint.

use std::f64::consts::FRAC_PI_2;

// Kronrod abscissae, outermost first; odd indices are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Hard ceiling on bisection depth; keeps cot φ and 1/sin²φ finite.
const DEPTH_CEILING: u32 = 450;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of times a single panel may be bisected.
    pub max_depth: u32,
    pub max_panels: usize,
    pub initial_panels: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_depth: 400,
            max_panels: 6000,
            initial_panels: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOutput<const K: usize> {
    pub value: [f64; K],
    pub err: [f64; K],
    pub evals: usize,
    pub converged: bool,
    /// Set when the integrand produced NaN or ±∞ somewhere.
    pub non_finite: bool,
}

impl<const K: usize> QuadOutput<K> {
    fn zero() -> Self {
        Self {
            value: [0.0; K],
            err: [0.0; K],
            evals: 0,
            converged: true,
            non_finite: false,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel<const K: usize> {
    a: f64,
    b: f64,
    depth: u32,
    value: [f64; K],
    err: [f64; K],
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut e = err.abs();
    if resasc != 0.0 && e != 0.0 {
        e = resasc * (200.0 * e / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * resabs);
    }
    e
}

/// One 15-point Kronrod panel with its embedded 7-point Gauss estimate.
fn gk15<const K: usize, F>(f: &F, a: f64, b: f64) -> ([f64; K], [f64; K], bool)
where
    F: Fn(f64) -> [f64; K],
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut fv = [[0.0; K]; 15];
    fv[0] = f(c);
    for j in 0..7 {
        let dx = h * XGK[j];
        fv[1 + 2 * j] = f(c - dx);
        fv[2 + 2 * j] = f(c + dx);
    }
    let mut finite = true;
    let mut value = [0.0; K];
    let mut err = [0.0; K];
    for k in 0..K {
        let fc = fv[0][k];
        let mut resk = WGK[7] * fc;
        let mut resg = WG[3] * fc;
        let mut resabs = WGK[7] * fc.abs();
        for j in 0..7 {
            let (f1, f2) = (fv[1 + 2 * j][k], fv[2 + 2 * j][k]);
            resk += WGK[j] * (f1 + f2);
            resabs += WGK[j] * (f1.abs() + f2.abs());
            if j % 2 == 1 {
                resg += WG[j / 2] * (f1 + f2);
            }
        }
        let mean = 0.5 * resk;
        let mut resasc = WGK[7] * (fc - mean).abs();
        for j in 0..7 {
            resasc += WGK[j] * ((fv[1 + 2 * j][k] - mean).abs() + (fv[2 + 2 * j][k] - mean).abs());
        }
        let habs = h.abs();
        value[k] = resk * h;
        err[k] = rescale_error((resk - resg) * h, resabs * habs, resasc * habs);
        if !value[k].is_finite() || !err[k].is_finite() {
            finite = false;
        }
    }
    (value, err, finite)
}

/// Adaptive integration of a vector integrand over a finite interval.
///
/// The panel with the largest error relative to the current tolerance is
/// bisected until every component meets `max(abs_tol, rel_tol·|I_k|)` or the
/// panel/depth budget runs out.
pub fn adaptive<const K: usize, F>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> QuadOutput<K>
where
    F: Fn(f64) -> [f64; K],
{
    adaptive_driven(f, a, b, cfg, K)
}

/// As [`adaptive`], but only the first `driving` components steer refinement
/// and convergence; the rest are integrated passively on the same panels.
fn adaptive_driven<const K: usize, F>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
    driving: usize,
) -> QuadOutput<K>
where
    F: Fn(f64) -> [f64; K],
{
    if a == b {
        return QuadOutput::zero();
    }
    let max_depth = cfg.max_depth.min(DEPTH_CEILING);
    let n0 = cfg.initial_panels.max(1);
    let width = (b - a) / n0 as f64;
    let mut panels: Vec<Panel<K>> = Vec::with_capacity(4 * n0);
    let mut non_finite = false;
    let mut evals = 0usize;
    for i in 0..n0 {
        let lo = a + width * i as f64;
        let hi = if i + 1 == n0 { b } else { a + width * (i + 1) as f64 };
        let (value, err, ok) = gk15(&f, lo, hi);
        evals += 15;
        non_finite |= !ok;
        panels.push(Panel { a: lo, b: hi, depth: 0, value, err });
    }
    loop {
        let mut total = [0.0; K];
        let mut total_err = [0.0; K];
        for p in &panels {
            for k in 0..K {
                total[k] += p.value[k];
                total_err[k] += p.err[k];
            }
        }
        let mut tol = [0.0; K];
        let mut done = true;
        for k in 0..driving {
            tol[k] = cfg.abs_tol.max(cfg.rel_tol * total[k].abs());
            if total_err[k] > tol[k] || !total_err[k].is_finite() {
                done = false;
            }
        }
        let finish = |converged| QuadOutput { value: total, err: total_err, evals, converged, non_finite };
        if done && !non_finite {
            return finish(true);
        }
        if non_finite || panels.len() >= cfg.max_panels {
            return finish(false);
        }
        let mut worst = None;
        let mut worst_score = 0.0;
        for (i, p) in panels.iter().enumerate() {
            if p.depth >= max_depth {
                continue;
            }
            let mid = 0.5 * (p.a + p.b);
            if (p.b - p.a).abs() <= 4.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE) {
                continue;
            }
            let score = (0..driving).map(|k| p.err[k] / tol[k]).fold(0.0, f64::max);
            if score > worst_score {
                worst_score = score;
                worst = Some(i);
            }
        }
        let Some(i) = worst else {
            return finish(false);
        };
        let p = panels[i];
        let mid = 0.5 * (p.a + p.b);
        let (lv, le, lok) = gk15(&f, p.a, mid);
        let (rv, re, rok) = gk15(&f, mid, p.b);
        evals += 30;
        non_finite |= !(lok && rok);
        panels[i] = Panel { a: p.a, b: mid, depth: p.depth + 1, value: lv, err: le };
        panels.push(Panel { a: mid, b: p.b, depth: p.depth + 1, value: rv, err: re });
    }
}

/// Product of an integrand value and the cot-substitution Jacobian, with the
/// convention 0·∞ = 0 for vanishing integrands deep in the tail.
#[inline]
fn jac_scale<const K: usize>(mut v: [f64; K], scale: f64, sin_phi: f64) -> [f64; K] {
    for x in v.iter_mut() {
        if *x != 0.0 {
            *x = (*x / sin_phi) / sin_phi * scale;
        }
    }
    v
}

/// ∫₀^∞ g(r) dr through r = s·cot φ.
pub fn half_line<const K: usize, F>(g: F, scale: f64, cfg: &QuadConfig) -> QuadOutput<K>
where
    F: Fn(f64) -> [f64; K],
{
    half_line_driven(g, scale, cfg, K)
}

fn half_line_driven<const K: usize, F>(
    g: F,
    scale: f64,
    cfg: &QuadConfig,
    driving: usize,
) -> QuadOutput<K>
where
    F: Fn(f64) -> [f64; K],
{
    adaptive_driven(
        |phi: f64| {
            let (s, c) = phi.sin_cos();
            jac_scale(g(scale * c / s), scale, s)
        },
        0.0,
        FRAC_PI_2,
        cfg,
        driving,
    )
}

/// ∫_ℝ g(x) dx, folding both half-lines into one integrand.
pub fn real_line<const K: usize, F>(g: F, scale: f64, cfg: &QuadConfig) -> QuadOutput<K>
where
    F: Fn(f64) -> [f64; K],
{
    real_line_driven(g, scale, cfg, K)
}

fn real_line_driven<const K: usize, F>(
    g: F,
    scale: f64,
    cfg: &QuadConfig,
    driving: usize,
) -> QuadOutput<K>
where
    F: Fn(f64) -> [f64; K],
{
    half_line_driven(
        |r| {
            let mut a = g(r);
            let b = g(-r);
            for k in 0..K {
                a[k] += b[k];
            }
            a
        },
        scale,
        cfg,
        driving,
    )
}

/// Largest vector width supported by [`plane`].
pub const PLANE_MAX_K: usize = 4;

/// ∫_ℝ² g(x, y) dx dy by nested adaptive integration, outer variable x.
///
/// Inner integrals run at a tenth of the outer tolerance; their error
/// estimates are integrated alongside the values and added to the outer
/// error.
pub fn plane<const K: usize, F>(g: F, scale: f64, cfg: &QuadConfig) -> QuadOutput<K>
where
    F: Fn(f64, f64) -> [f64; K],
{
    assert!(K <= PLANE_MAX_K, "plane supports at most {PLANE_MAX_K} components");
    let inner_failed = std::cell::Cell::new(false);
    let inner_evals = std::cell::Cell::new(0usize);
    let outer = real_line_driven(
        |x: f64| {
            // An inner error e at x costs e·dx/dφ in the outer integral, so
            // the inner absolute tolerance shrinks with the Jacobian.
            let jac = scale + x * x / scale;
            let inner_cfg = QuadConfig {
                abs_tol: cfg.abs_tol * 0.1 / (FRAC_PI_2 * jac),
                rel_tol: cfg.rel_tol * 0.1,
                ..*cfg
            };
            let inner = real_line(|y| g(x, y), scale, &inner_cfg);
            if !inner.converged {
                inner_failed.set(true);
            }
            inner_evals.set(inner_evals.get() + inner.evals);
            let mut out = [0.0; 2 * PLANE_MAX_K];
            out[..K].copy_from_slice(&inner.value);
            out[PLANE_MAX_K..PLANE_MAX_K + K].copy_from_slice(&inner.err);
            out
        },
        scale,
        cfg,
        K,
    );
    let mut value = [0.0; K];
    let mut err = [0.0; K];
    for k in 0..K {
        value[k] = outer.value[k];
        err[k] = outer.err[k] + outer.value[PLANE_MAX_K + k].abs();
    }
    QuadOutput {
        value,
        err,
        evals: inner_evals.get(),
        converged: outer.converged && !inner_failed.get(),
        non_finite: outer.non_finite,
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Product rule on the unit sphere S²: Gauss–Legendre in cos θ times the
/// trapezoid rule in azimuth.
#[derive(Debug, Clone)]
pub struct SphereRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

impl SphereRule {
    pub fn new(order: usize) -> Self {
        let (z, wz) = gauss_legendre(order);
        let naz = 2 * order;
        let mut points = Vec::with_capacity(order * naz);
        let mut weights = Vec::with_capacity(order * naz);
        for (zi, wi) in z.iter().zip(&wz) {
            let s = (1.0 - zi * zi).max(0.0).sqrt();
            for j in 0..naz {
                let phi = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / naz as f64;
                points.push([s * phi.cos(), s * phi.sin(), *zi]);
                weights.push(wi * 2.0 * std::f64::consts::PI / naz as f64);
            }
        }
        Self { points, weights }
    }

    fn apply<const K: usize, F>(&self, r: f64, g: &F) -> [f64; K]
    where
        F: Fn(&[f64; 3]) -> [f64; K],
    {
        let mut acc = [0.0; K];
        for (u, w) in self.points.iter().zip(&self.weights) {
            let v = g(&[r * u[0], r * u[1], r * u[2]]);
            for k in 0..K {
                if v[k] != 0.0 {
                    acc[k] += w * v[k];
                }
            }
        }
        acc
    }
}

/// ∫_ℝ³ g dx in spherical coordinates: adaptive in the radius, a fixed
/// product rule of the given order on each sphere. The angular error is
/// estimated against a coarser sphere rule and integrated along r.
pub fn space3<const K: usize, F>(g: F, scale: f64, order: usize, cfg: &QuadConfig) -> QuadOutput<K>
where
    F: Fn(&[f64; 3]) -> [f64; K],
{
    assert!(K <= PLANE_MAX_K, "space3 supports at most {PLANE_MAX_K} components");
    let fine = SphereRule::new(order.max(2));
    let coarse = SphereRule::new((2 * order / 3).max(2));
    let outer = half_line_driven(
        |r: f64| {
            let a: [f64; K] = fine.apply(r, &g);
            let b: [f64; K] = coarse.apply(r, &g);
            let mut out = [0.0; 2 * PLANE_MAX_K];
            for k in 0..K {
                out[k] = r * r * a[k];
                out[PLANE_MAX_K + k] = r * r * (a[k] - b[k]).abs();
            }
            out
        },
        scale,
        cfg,
        K,
    );
    let mut value = [0.0; K];
    let mut err = [0.0; K];
    for k in 0..K {
        value[k] = outer.value[k];
        err[k] = outer.err[k] + outer.value[PLANE_MAX_K + k].abs();
    }
    QuadOutput {
        value,
        err,
        evals: outer.evals * (fine.points.len() + coarse.points.len()),
        converged: outer.converged,
        non_finite: outer.non_finite,
    }
}
