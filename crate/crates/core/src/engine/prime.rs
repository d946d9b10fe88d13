use num_complex::Complex64;

use super::family::{is_prime, CMat};
use crate::error::{Error, Result};

/// Closed form of `M_l M_l^*` for the prime family, `1 ≤ l ≤ d-1`:
/// `(p^{d-l} - p(p-1)^{d-l-1}) J + p(p-1)^{d-l-1} [s_1⋯s_l ≡ t_1⋯t_l mod p]`.
pub fn prime_gram_closed_form(p: u64, d: usize, l: usize) -> Result<CMat> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if l == 0 || l >= d {
        return Err(Error::IndexRange(format!("split {l} not in 1..{d}")));
    }
    let q = p as i64;
    let e = (d - l) as u32;
    let indicator = q * (q - 1).pow(e - 1);
    let constant = q.pow(e) - indicator;
    let n = (p as usize).pow(l as u32);
    let residue = |code: usize| {
        let mut c = code;
        let mut prod = 1u64;
        for _ in 0..l {
            prod = prod * ((c % p as usize) as u64 + 1) % p;
            c /= p as usize;
        }
        prod
    };
    let residues: Vec<u64> = (0..n).map(residue).collect();
    Ok(CMat::from_fn(n, n, |i, j| {
        let v = constant + if residues[i] == residues[j] { indicator } else { 0 };
        Complex64::new(v as f64, 0.0)
    }))
}

/// Largest entrywise modulus of `x - y`.
pub fn max_entry_diff(x: &CMat, y: &CMat) -> f64 {
    x.iter().zip(y.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// `p^{d/2} √((d-1)/p)`, the operator-norm bound for `1 ≤ l ≤ d-1`.
pub fn prime_norm_bound(p: u64, d: usize) -> f64 {
    (((d - 1) as f64) * (p as f64).powi(d as i32 - 1)).sqrt()
}
