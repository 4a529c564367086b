//! Smooth test functions with analytic gradients (and Hessians where
//! available) used as probes for entropy/energy ratios and Γ₂ checks.

use std::fmt;
use std::sync::Arc;

use crate::error::{domain, Error, Result};

pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type MatrixFn = Arc<dyn Fn(&[f64]) -> Vec<Vec<f64>> + Send + Sync>;

#[derive(Clone)]
pub enum Family {
    /// f = ω^ε with ω = σ + |x|².
    PowerOmega { eps: f64, sigma: f64 },
    /// f = exp(−|x−c|²/(2w²)).
    GaussianBump { center: Vec<f64>, width: f64 },
    /// f = exp(a·x₁/2).
    ExponentialHalf { a: f64 },
    /// Radial cubic B-spline bump, equal to 1 at the centre and supported
    /// in the ball of radius `half_width`.
    SplineBump { center: Vec<f64>, half_width: f64 },
    /// f = c + ⟨g, x−x₀⟩ + ½(x−x₀)ᵀH(x−x₀), H symmetric.
    Quadratic { c: f64, origin: Vec<f64>, gradient: Vec<f64>, hessian: Vec<Vec<f64>> },
    /// Quadratic plus Σᵢ cubicᵢ·(xᵢ−x₀ᵢ)³.
    Polynomial {
        c: f64,
        origin: Vec<f64>,
        gradient: Vec<f64>,
        hessian: Vec<Vec<f64>>,
        cubic: Vec<f64>,
    },
    Constant(f64),
    Custom { name: String, value: ScalarFn, gradient: VectorFn, hessian: Option<MatrixFn> },
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::PowerOmega { eps, sigma } => write!(f, "PowerOmega(eps={eps}, sigma={sigma})"),
            Family::GaussianBump { center, width } => {
                write!(f, "GaussianBump(center={center:?}, width={width})")
            }
            Family::ExponentialHalf { a } => write!(f, "ExponentialHalf(a={a})"),
            Family::SplineBump { center, half_width } => {
                write!(f, "SplineBump(center={center:?}, half_width={half_width})")
            }
            Family::Quadratic { c, origin, gradient, hessian } => write!(
                f,
                "Quadratic(c={c}, origin={origin:?}, gradient={gradient:?}, hessian={hessian:?})"
            ),
            Family::Polynomial { c, origin, gradient, hessian, cubic } => write!(
                f,
                "Polynomial(c={c}, origin={origin:?}, gradient={gradient:?}, hessian={hessian:?}, cubic={cubic:?})"
            ),
            Family::Constant(c) => write!(f, "Constant({c})"),
            Family::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TestFunction {
    pub dim: usize,
    pub family: Family,
}

fn check_len(name: &str, v: &[f64], n: usize) -> Result<()> {
    if v.len() != n {
        return Err(domain(format!("{name} has length {} but dimension is {n}", v.len())));
    }
    Ok(())
}

fn check_matrix(h: &[Vec<f64>], n: usize) -> Result<()> {
    if h.len() != n || h.iter().any(|row| row.len() != n) {
        return Err(domain(format!("hessian must be {n}x{n}")));
    }
    for i in 0..n {
        for j in 0..i {
            if (h[i][j] - h[j][i]).abs() > 1e-12 * (1.0 + h[i][j].abs()) {
                return Err(domain("hessian must be symmetric"));
            }
        }
    }
    Ok(())
}

/// Cubic B-spline profile rescaled to b(0) = 1, supported on s ∈ [0, 1].
/// Returns (b, b′, b″) with respect to s.
fn spline_profile(s: f64) -> (f64, f64, f64) {
    let u = 2.0 * s;
    let (b, db, d2b) = if u < 1.0 {
        (2.0 / 3.0 - u * u + 0.5 * u * u * u, -2.0 * u + 1.5 * u * u, -2.0 + 3.0 * u)
    } else if u < 2.0 {
        let v = 2.0 - u;
        (v * v * v / 6.0, -0.5 * v * v, v)
    } else {
        (0.0, 0.0, 0.0)
    };
    // d/ds = 2 d/du
    (1.5 * b, 3.0 * db, 6.0 * d2b)
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn diff(x: &[f64], c: &[f64]) -> Vec<f64> {
    x.iter().zip(c).map(|(a, b)| a - b).collect()
}

/// Hessian of a radial profile φ(r) at offset d (r = |d|):
/// φ″ r̂r̂ᵀ + (φ′/r)(I − r̂r̂ᵀ), with the r → 0 limit φ″(0)·I.
fn radial_hessian(d: &[f64], dphi: f64, d2phi: f64) -> Vec<Vec<f64>> {
    let n = d.len();
    let r = norm2(d).sqrt();
    let mut h = vec![vec![0.0; n]; n];
    if r < 1e-300 {
        for (i, row) in h.iter_mut().enumerate() {
            row[i] = d2phi;
        }
        return h;
    }
    let t = dphi / r;
    for i in 0..n {
        for j in 0..n {
            let rr = d[i] * d[j] / (r * r);
            h[i][j] = d2phi * rr + t * (if i == j { 1.0 } else { 0.0 } - rr);
        }
    }
    h
}

impl TestFunction {
    pub fn new(dim: usize, family: Family) -> Result<Self> {
        if dim == 0 {
            return Err(domain("dimension must be at least 1"));
        }
        match &family {
            Family::PowerOmega { eps, sigma } => {
                if !eps.is_finite() || !(*sigma >= 1.0) {
                    return Err(domain("PowerOmega needs finite eps and sigma >= 1"));
                }
            }
            Family::GaussianBump { center, width } => {
                check_len("center", center, dim)?;
                if !(*width > 0.0) {
                    return Err(domain("GaussianBump width must be positive"));
                }
            }
            Family::ExponentialHalf { a } => {
                if !a.is_finite() {
                    return Err(domain("ExponentialHalf needs finite a"));
                }
            }
            Family::SplineBump { center, half_width } => {
                check_len("center", center, dim)?;
                if !(*half_width > 0.0) {
                    return Err(domain("SplineBump half_width must be positive"));
                }
            }
            Family::Quadratic { origin, gradient, hessian, .. } => {
                check_len("origin", origin, dim)?;
                check_len("gradient", gradient, dim)?;
                check_matrix(hessian, dim)?;
            }
            Family::Polynomial { origin, gradient, hessian, cubic, .. } => {
                check_len("origin", origin, dim)?;
                check_len("gradient", gradient, dim)?;
                check_len("cubic", cubic, dim)?;
                check_matrix(hessian, dim)?;
            }
            Family::Constant(c) => {
                if !c.is_finite() {
                    return Err(domain("constant must be finite"));
                }
            }
            Family::Custom { .. } => {}
        }
        Ok(Self { dim, family })
    }

    pub fn power_omega(dim: usize, eps: f64, sigma: f64) -> Result<Self> {
        Self::new(dim, Family::PowerOmega { eps, sigma })
    }

    pub fn gaussian_bump(center: Vec<f64>, width: f64) -> Result<Self> {
        Self::new(center.len(), Family::GaussianBump { center, width })
    }

    pub fn spline_bump(center: Vec<f64>, half_width: f64) -> Result<Self> {
        Self::new(center.len(), Family::SplineBump { center, half_width })
    }

    pub fn exponential_half(dim: usize, a: f64) -> Result<Self> {
        Self::new(dim, Family::ExponentialHalf { a })
    }

    pub fn constant(dim: usize, c: f64) -> Result<Self> {
        Self::new(dim, Family::Constant(c))
    }

    /// Short identifier used in reports.
    pub fn id(&self) -> String {
        let fmt_vec = |v: &[f64]| {
            v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",")
        };
        match &self.family {
            Family::PowerOmega { eps, .. } => format!("power_omega(eps={eps})"),
            Family::GaussianBump { center, width } => {
                format!("gaussian_bump(c=[{}],w={width})", fmt_vec(center))
            }
            Family::ExponentialHalf { a } => format!("exponential_half(a={a})"),
            Family::SplineBump { center, half_width } => {
                format!("spline_bump(c=[{}],h={half_width})", fmt_vec(center))
            }
            Family::Quadratic { .. } => "quadratic".into(),
            Family::Polynomial { .. } => "polynomial".into(),
            Family::Constant(c) => format!("constant({c})"),
            Family::Custom { name, .. } => format!("custom({name})"),
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match &self.family {
            Family::PowerOmega { eps, sigma } => (sigma + norm2(x)).powf(*eps),
            Family::GaussianBump { center, width } => {
                let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                (-d2 / (2.0 * width * width)).exp()
            }
            Family::ExponentialHalf { a } => (0.5 * a * x[0]).exp(),
            Family::SplineBump { center, half_width } => {
                let d2: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                spline_profile(d2.sqrt() / half_width).0
            }
            Family::Quadratic { c, origin, gradient, hessian } => {
                quadratic_value(*c, origin, gradient, hessian, x)
            }
            Family::Polynomial { c, origin, gradient, hessian, cubic } => {
                let mut v = quadratic_value(*c, origin, gradient, hessian, x);
                for i in 0..x.len() {
                    let d = x[i] - origin[i];
                    v += cubic[i] * d * d * d;
                }
                v
            }
            Family::Constant(c) => *c,
            Family::Custom { value, .. } => value(x),
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match &self.family {
            Family::PowerOmega { eps, sigma } => {
                let w = sigma + norm2(x);
                let k = 2.0 * eps * w.powf(eps - 1.0);
                x.iter().map(|v| k * v).collect()
            }
            Family::GaussianBump { center, width } => {
                let f = self.value(x);
                let s2 = width * width;
                x.iter().zip(center).map(|(a, b)| -(a - b) / s2 * f).collect()
            }
            Family::ExponentialHalf { a } => {
                let mut g = vec![0.0; x.len()];
                g[0] = 0.5 * a * self.value(x);
                g
            }
            Family::SplineBump { center, half_width } => {
                let d = diff(x, center);
                let r = norm2(&d).sqrt();
                if r < 1e-300 {
                    return vec![0.0; x.len()];
                }
                let dphi = spline_profile(r / half_width).1 / half_width;
                d.iter().map(|v| dphi * v / r).collect()
            }
            Family::Quadratic { origin, gradient, hessian, .. } => {
                quadratic_gradient(origin, gradient, hessian, x)
            }
            Family::Polynomial { origin, gradient, hessian, cubic, .. } => {
                let mut g = quadratic_gradient(origin, gradient, hessian, x);
                for i in 0..x.len() {
                    let d = x[i] - origin[i];
                    g[i] += 3.0 * cubic[i] * d * d;
                }
                g
            }
            Family::Constant(_) => vec![0.0; x.len()],
            Family::Custom { gradient, .. } => gradient(x),
        }
    }

    /// Exact Hessian when the family provides one.
    pub fn hessian(&self, x: &[f64]) -> Option<Vec<Vec<f64>>> {
        let n = x.len();
        match &self.family {
            Family::PowerOmega { eps, sigma } => {
                let w = sigma + norm2(x);
                let a = 2.0 * eps * w.powf(eps - 1.0);
                let b = 4.0 * eps * (eps - 1.0) * w.powf(eps - 2.0);
                Some(
                    (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| b * x[i] * x[j] + if i == j { a } else { 0.0 })
                                .collect()
                        })
                        .collect(),
                )
            }
            Family::GaussianBump { center, width } => {
                let f = self.value(x);
                let s2 = width * width;
                let d = diff(x, center);
                Some(
                    (0..n)
                        .map(|i| {
                            (0..n)
                                .map(|j| {
                                    f * (d[i] * d[j] / (s2 * s2)
                                        - if i == j { 1.0 / s2 } else { 0.0 })
                                })
                                .collect()
                        })
                        .collect(),
                )
            }
            Family::ExponentialHalf { a } => {
                let mut h = vec![vec![0.0; n]; n];
                h[0][0] = 0.25 * a * a * self.value(x);
                Some(h)
            }
            Family::SplineBump { center, half_width } => {
                let d = diff(x, center);
                let (_, db, d2b) = spline_profile(norm2(&d).sqrt() / half_width);
                Some(radial_hessian(&d, db / half_width, d2b / (half_width * half_width)))
            }
            Family::Quadratic { hessian, .. } => Some(hessian.clone()),
            Family::Polynomial { origin, hessian, cubic, .. } => {
                let mut h = hessian.clone();
                for i in 0..n {
                    h[i][i] += 6.0 * cubic[i] * (x[i] - origin[i]);
                }
                Some(h)
            }
            Family::Constant(_) => Some(vec![vec![0.0; n]; n]),
            Family::Custom { hessian, .. } => hessian.as_ref().map(|h| h(x)),
        }
    }

    /// Radial profile (φ(r), φ′(r)) when f(x) = φ(|x|); `None` otherwise.
    pub fn radial_profile(&self, r: f64) -> Option<(f64, f64)> {
        match &self.family {
            Family::PowerOmega { eps, sigma } => {
                let w = sigma + r * r;
                Some((w.powf(*eps), 2.0 * eps * r * w.powf(eps - 1.0)))
            }
            Family::GaussianBump { center, width } if center.iter().all(|c| *c == 0.0) => {
                let f = (-r * r / (2.0 * width * width)).exp();
                Some((f, -r / (width * width) * f))
            }
            Family::SplineBump { center, half_width } if center.iter().all(|c| *c == 0.0) => {
                let (b, db, _) = spline_profile(r / half_width);
                Some((b, db / half_width))
            }
            Family::Constant(c) => Some((*c, 0.0)),
            _ => None,
        }
    }

    pub fn is_radial(&self) -> bool {
        self.radial_profile(1.0).is_some()
    }

    /// Largest discrepancy between the analytic gradient and central finite
    /// differences at the probe points, relative to max(1, |∇f|∞).
    pub fn gradient_discrepancy(&self, probes: &[Vec<f64>]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for x in probes {
            check_len("probe", x, self.dim)?;
            let g = self.gradient(x);
            let scale = g.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
            let mut xp = x.clone();
            for i in 0..self.dim {
                let h = 1e-5 * (1.0 + x[i].abs());
                xp[i] = x[i] + h;
                let fp = self.value(&xp);
                xp[i] = x[i] - h;
                let fm = self.value(&xp);
                xp[i] = x[i];
                let fd = (fp - fm) / (2.0 * h);
                worst = worst.max((fd - g[i]).abs() / scale);
            }
        }
        Ok(worst)
    }

    /// Gradient self-test at 1e−6 relative tolerance.
    pub fn check_gradient(&self, probes: &[Vec<f64>]) -> Result<()> {
        let d = self.gradient_discrepancy(probes)?;
        if d > 1e-6 {
            return Err(Error::Precondition(format!(
                "{}: gradient disagrees with finite differences ({d:.3e})",
                self.id()
            )));
        }
        Ok(())
    }
}

fn quadratic_value(c: f64, o: &[f64], g: &[f64], h: &[Vec<f64>], x: &[f64]) -> f64 {
    let d = diff(x, o);
    let mut v = c;
    for i in 0..d.len() {
        v += g[i] * d[i];
        for j in 0..d.len() {
            v += 0.5 * d[i] * h[i][j] * d[j];
        }
    }
    v
}

fn quadratic_gradient(o: &[f64], g: &[f64], h: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let d = diff(x, o);
    (0..d.len())
        .map(|i| g[i] + (0..d.len()).map(|j| h[i][j] * d[j]).sum::<f64>())
        .collect()
}
