use std::collections::BTreeMap;

use crate::engine::family::{CMat, CoefficientFamily};
use crate::error::{Error, Result};

/// Cap on the support of intermediate group-algebra elements.
pub const SUPPORT_CAP: usize = 2_000_000;

/// Reduced word in `F_r`: `+j` is `g_j`, `-j` is `g_j^{-1}`.
pub type GroupWord = Vec<i8>;

/// Product of two reduced words, reduced.
pub fn multiply_words(x: &[i8], y: &[i8]) -> GroupWord {
    let mut out: GroupWord = x.to_vec();
    for &c in y {
        if out.last() == Some(&-c) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    out
}

pub fn inverse_word(x: &[i8]) -> GroupWord {
    x.iter().rev().map(|&c| -c).collect()
}

/// Finitely supported `F_r → M_α(ℂ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupAlgebraElement {
    pub alpha: usize,
    pub coeffs: BTreeMap<GroupWord, CMat>,
}

impl GroupAlgebraElement {
    pub fn zero(alpha: usize) -> Self {
        GroupAlgebraElement {
            alpha,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn identity(alpha: usize) -> Self {
        let mut e = Self::zero(alpha);
        e.coeffs.insert(Vec::new(), CMat::identity(alpha, alpha));
        e
    }

    /// `Σ_k a_k ⊗ λ(g_{k_1} ⋯ g_{k_d})`.
    pub fn from_family(a: &CoefficientFamily) -> Self {
        let mut e = Self::zero(a.alpha());
        for (k, m) in a.entries() {
            let w: GroupWord = k.iter().map(|&x| x as i8).collect();
            e.add(w, m.clone());
        }
        e
    }

    pub fn add(&mut self, w: GroupWord, m: CMat) {
        match self.coeffs.get_mut(&w) {
            Some(x) => *x += m,
            None => {
                self.coeffs.insert(w, m);
            }
        }
    }

    pub fn adjoint(&self) -> Self {
        GroupAlgebraElement {
            alpha: self.alpha,
            coeffs: self.coeffs.iter().map(|(w, m)| (inverse_word(w), m.adjoint())).collect(),
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.multiply_pruned(other, usize::MAX)
    }

    /// Product keeping only words of length `≤ max_len`.
    pub fn multiply_pruned(&self, other: &Self, max_len: usize) -> Result<Self> {
        let mut out = Self::zero(self.alpha);
        for (x, a) in &self.coeffs {
            for (y, b) in &other.coeffs {
                let w = multiply_words(x, y);
                if w.len() <= max_len {
                    out.add(w, a * b);
                }
            }
            if out.coeffs.len() > SUPPORT_CAP {
                return Err(Error::CapExceeded {
                    size: out.coeffs.len(),
                    cap: SUPPORT_CAP,
                });
            }
        }
        Ok(out)
    }

    /// `(Tr ⊗ τ)`: trace of the coefficient at the identity.
    pub fn trace(&self) -> f64 {
        self.coeffs.get(&Vec::new()).map_or(0.0, |m| m.trace().re)
    }
}

/// `(Tr ⊗ τ)((A A^*)^m)` for `A = Σ a_k ⊗ λ(g_{k_1} ⋯ g_{k_d})`.
pub fn free_group_moment(a: &CoefficientFamily, m: usize) -> Result<f64> {
    let x = GroupAlgebraElement::from_family(a);
    let y = x.adjoint();
    let d = a.d();
    let mut acc = GroupAlgebraElement::identity(a.alpha());
    for step in 0..2 * m {
        let remaining = (2 * m - step - 1) * d;
        let factor = if step % 2 == 0 { &x } else { &y };
        acc = acc.multiply_pruned(factor, remaining)?;
    }
    Ok(acc.trace())
}
