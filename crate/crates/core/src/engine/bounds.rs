use std::f64::consts::E;

use super::family::CoefficientFamily;
use super::matrices::{build_ml, schatten_norm, sigma_max};
use crate::cumulants::{CumulantKind, CumulantSpec};
use crate::error::{Error, Result};

const FOUR_POW_FIVE: f64 = 1024.0;

/// `‖M_l‖_{2m}` for `l = 0..=d`.
pub fn ml_norms(a: &CoefficientFamily, m: usize) -> Result<Vec<f64>> {
    (0..=a.d()).map(|l| Ok(schatten_norm(&build_ml(a, l)?.matrix, m))).collect()
}

/// `σ_max(M_l)` by power iteration.
pub fn ml_operator_norms(a: &CoefficientFamily, tol: f64) -> Result<Vec<f64>> {
    (0..=a.d())
        .map(|l| Ok(sigma_max(&build_ml(a, l)?.matrix, tol, 100_000)))
        .collect()
}

fn sum_sq_root(xs: &[f64]) -> f64 {
    xs.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Holomorphic right-hand side at `p = 2m`: `4^5 ‖c‖_2^{d-2} ‖c‖_{2m}^2 e √(1+d/m) (Σ ‖M_l‖_{2m}^2)^{1/2}`,
/// without the constant and the norms of `c` for circular `c`.
pub fn holo_rhs_bound(a: &CoefficientFamily, spec: &CumulantSpec, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::Config("m must be at least 1".into()));
    }
    let d = a.d() as f64;
    let core = E * (1.0 + d / m as f64).sqrt() * sum_sq_root(&ml_norms(a, m)?);
    Ok(holo_prefactor(spec, a.d(), spec.norm_2m(m)?)? * core)
}

/// Operator-norm form: `4^5 ‖c‖_2^{d-2} ‖c‖^2 √e (Σ ‖M_l‖^2)^{1/2}`.
pub fn holo_rhs_bound_operator(a: &CoefficientFamily, spec: &CumulantSpec, tol: f64) -> Result<f64> {
    let norm = spec
        .operator_norm()
        .ok_or_else(|| Error::Config(format!("no operator norm known for {}", spec.name())))?;
    let core = E.sqrt() * sum_sq_root(&ml_operator_norms(a, tol)?);
    Ok(holo_prefactor(spec, a.d(), norm)? * core)
}

fn holo_prefactor(spec: &CumulantSpec, d: usize, norm_p: f64) -> Result<f64> {
    if !spec.is_rdiagonal() {
        return Err(Error::Config(format!("{} is not an R-diagonal spec", spec.name())));
    }
    if matches!(spec.kind, CumulantKind::Circular) {
        return Ok(1.0);
    }
    Ok(FOUR_POW_FIVE * spec.norm_2()?.powi(d as i32 - 2) * norm_p * norm_p)
}

/// Non-holomorphic right-hand side: `4^5 ‖c‖_{2m}^2 ‖c‖_2^{d-2} (d+1) max_l ‖M_l‖_{2m}`.
pub fn nonholo_rhs_bound(source: &CoefficientFamily, spec: &CumulantSpec, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::Config("m must be at least 1".into()));
    }
    let d = source.d();
    let max = ml_norms(source, m)?.into_iter().fold(0.0, f64::max);
    let c2m = spec.norm_2m(m)?;
    Ok(FOUR_POW_FIVE * c2m * c2m * spec.norm_2()?.powi(d as i32 - 2) * (d + 1) as f64 * max)
}
