use nalgebra::DVector;
use num_complex::Complex64;

use super::family::{CMat, CoefficientFamily};
use crate::error::{Error, Result};

/// Default cap on either side of `M_l`.
pub const DIMENSION_CAP: usize = 4096;

/// `M_l`: rows `{1..r}^l × {1..α}`, columns `{1..r}^{d-l} × {1..α}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrixView {
    pub l: usize,
    pub matrix: CMat,
}

pub fn build_ml(a: &CoefficientFamily, l: usize) -> Result<BlockMatrixView> {
    build_ml_capped(a, l, DIMENSION_CAP)
}

pub fn build_ml_capped(a: &CoefficientFamily, l: usize, cap: usize) -> Result<BlockMatrixView> {
    let (d, r, alpha) = (a.d(), a.r(), a.alpha());
    if l > d {
        return Err(Error::IndexRange(format!("split {l} not in 0..={d}")));
    }
    let rows = r.pow(l as u32) * alpha;
    let cols = r.pow((d - l) as u32) * alpha;
    if rows.max(cols) > cap {
        return Err(Error::Dimension {
            dim: rows.max(cols),
            cap,
        });
    }
    let right = r.pow((d - l) as u32);
    let mut m = CMat::zeros(rows, cols);
    for (k, block) in a.entries() {
        let code = a.code(k);
        let (s, t) = (code / right, code % right);
        m.view_mut((s * alpha, t * alpha), (alpha, alpha)).copy_from(block);
    }
    Ok(BlockMatrixView { l, matrix: m })
}

/// `Tr((M^* M)^m)` by repeated products of the smaller Gram matrix.
pub fn schatten_pow(m: &CMat, power: usize) -> f64 {
    assert!(power >= 1);
    let gram = if m.nrows() <= m.ncols() {
        m * m.adjoint()
    } else {
        m.adjoint() * m
    };
    let mut acc = gram.clone();
    for _ in 1..power {
        acc = &acc * &gram;
    }
    acc.trace().re
}

/// `‖M‖_{2m}`.
pub fn schatten_norm(m: &CMat, power: usize) -> f64 {
    schatten_pow(m, power).max(0.0).powf(1.0 / (2 * power) as f64)
}

/// Largest singular value by power iteration on `M M^*` (or `M^* M`).
pub fn sigma_max(m: &CMat, tol: f64, max_iter: usize) -> f64 {
    let gram = if m.nrows() <= m.ncols() {
        m * m.adjoint()
    } else {
        m.adjoint() * m
    };
    largest_eigenvalue_psd(&gram, tol, max_iter).max(0.0).sqrt()
}

/// Dominant eigenvalue of a Hermitian positive semidefinite matrix.
pub fn largest_eigenvalue_psd(h: &CMat, tol: f64, max_iter: usize) -> f64 {
    let n = h.nrows();
    if n == 0 {
        return 0.0;
    }
    // deterministic start with all coordinates excited
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 + 0.1 * (i as f64).sin(), 0.05 * i as f64));
    v /= Complex64::from(v.norm());
    let mut lambda = 0.0;
    for _ in 0..max_iter {
        let w = h * &v;
        let next = v.dotc(&w).re;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v = w / Complex64::from(norm);
        if (next - lambda).abs() <= tol * next.abs().max(1.0) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda
}
