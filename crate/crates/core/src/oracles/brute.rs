use rayon::prelude::*;

use crate::cumulants::{holomorphic_stars, kappa_pi_stars, CumulantSpec};
use crate::engine::family::{CoefficientFamily, StarCoefficientFamily};
use crate::engine::sums::{s_eval, s_eval_fixed_signs};
use crate::error::{Error, Result};
use crate::partition::enumerate_nc;
use crate::symmetrize::GridShape;

/// Largest `2dm` for the plain brute-force sum.
pub const BRUTE_CAP: usize = 12;
/// Largest `2dm` for the starred brute-force sum (all sign strings are visited).
pub const BRUTE_STAR_CAP: usize = 8;

fn check(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::CapExceeded { size: n, cap });
    }
    Ok(())
}

/// `(Tr ⊗ τ)((A A^*)^m)` by summing `κ_π S(a, π)` over every `π ∈ NC(2dm)`.
pub fn brute_moment(spec: &CumulantSpec, a: &CoefficientFamily, m: usize) -> Result<f64> {
    let g = GridShape::new(a.d(), m)?;
    let n = g.ground_size();
    check(n, BRUTE_CAP)?;
    let stars = holomorphic_stars(g);
    let parts = enumerate_nc(n)?;
    let terms: Vec<Result<f64>> = parts
        .par_iter()
        .map(|p| {
            let k = kappa_pi_stars(spec, p, &stars, None);
            if k == 0.0 {
                return Ok(0.0);
            }
            Ok(k * s_eval(a, p, g)?.re)
        })
        .collect();
    terms.into_iter().sum()
}

/// Same for `A = Σ a_{k,ε} ⊗ c_{k,ε}`, summing over every sign string of `[2dm]` as well.
pub fn brute_moment_star(spec: &CumulantSpec, a: &StarCoefficientFamily, m: usize) -> Result<f64> {
    let g = GridShape::new(a.d(), m)?;
    let n = g.ground_size();
    check(n, BRUTE_STAR_CAP)?;
    let parts = enumerate_nc(n)?;
    let terms: Vec<Result<f64>> = parts
        .par_iter()
        .map(|p| {
            let mut acc = 0.0;
            for bits in 0u32..(1 << n) {
                let stars: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
                let k = kappa_pi_stars(spec, p, &stars, None);
                if k != 0.0 {
                    acc += k * s_eval_fixed_signs(a, p, g, &stars)?.re;
                }
            }
            Ok(acc)
        })
        .collect();
    terms.into_iter().sum()
}
