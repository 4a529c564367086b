//! Numerical verification of weighted logarithmic Sobolev inequalities for
//! generalised Cauchy measures μ_{β,σ}(dx) ∝ (σ + |x|²)^{-β} dx on ℝⁿ.

pub mod bounds;
pub mod cd;
pub mod concentration;
pub mod error;
pub mod functionals;
pub mod measure;
pub mod quadrature;
pub mod report;
pub mod special;
pub mod testfn;
pub mod weight;

pub use error::{Error, Result};
pub use functionals::{Estimate, EstimateMethod, IntegrationConfig, LsiEstimate, Method};
pub use measure::{Measure, MeasureParams};
pub use testfn::{Family, TestFunction};
pub use weight::{Weight, WeightKind};
pub use report::{CheckRecord, Status};
