use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::family::{star_decode, CMat, CoefficientFamily, StarCoefficientFamily};
use crate::error::{Error, Result};

/// Cap on the number of basis words held at once.
pub const FOCK_DIMENSION_CAP: usize = 200_000;

/// Which generators realize `c_k` on the full Fock space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FockKind {
    /// `c_k = s_k + s̃_k^*` over two copies of the alphabet.
    Circular,
    /// `c_k = s_k + s_k^*`.
    Semicircular,
}

/// A finite-depth full Fock space over `r` colours; words are stored with
/// the most recently created letter last.
#[derive(Debug, Clone)]
pub struct FockSpace {
    pub kind: FockKind,
    pub num_colors: usize,
    pub depth: usize,
}

type Word = Vec<u8>;

/// `a ⊗ c_{k_1}^{ε_1} ⋯ c_{k_d}^{ε_d}` with 0-based letters.
#[derive(Debug, Clone)]
pub struct FockTerm {
    pub matrix: CMat,
    pub letters: Vec<(usize, bool)>,
}

impl FockTerm {
    fn adjoint(&self) -> FockTerm {
        FockTerm {
            matrix: self.matrix.adjoint(),
            letters: self.letters.iter().rev().map(|&(k, s)| (k, !s)).collect(),
        }
    }
}

pub fn holomorphic_terms(a: &CoefficientFamily) -> Vec<FockTerm> {
    a.entries()
        .map(|(k, m)| FockTerm {
            matrix: m.clone(),
            letters: k.iter().map(|&x| (x - 1, false)).collect(),
        })
        .collect()
}

pub fn star_terms(a: &StarCoefficientFamily) -> Vec<FockTerm> {
    a.as_doubled()
        .entries()
        .map(|(codes, m)| FockTerm {
            matrix: m.clone(),
            letters: codes
                .iter()
                .map(|&c| {
                    let (k, s) = star_decode(c);
                    (k - 1, s)
                })
                .collect(),
        })
        .collect()
}

impl FockSpace {
    pub fn new(kind: FockKind, num_colors: usize, depth: usize) -> Self {
        FockSpace { kind, num_colors, depth }
    }

    pub fn alphabet(&self) -> usize {
        match self.kind {
            FockKind::Circular => 2 * self.num_colors,
            FockKind::Semicircular => self.num_colors,
        }
    }

    /// `Σ_{j ≤ D} (alphabet)^j`.
    pub fn dimension(&self) -> usize {
        let q = self.alphabet();
        (0..=self.depth).map(|j| q.pow(j as u32)).sum()
    }

    pub fn basis(&self) -> Vec<Word> {
        let q = self.alphabet() as u8;
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..self.depth {
            let mut next = Vec::new();
            for w in &layer {
                for c in 0..q {
                    let mut x: Word = w.clone();
                    x.push(c);
                    next.push(x);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    fn create(&self, w: &Word, c: u8) -> Option<Word> {
        (w.len() < self.depth).then(|| {
            let mut x = w.clone();
            x.push(c);
            x
        })
    }

    fn annihilate(w: &Word, c: u8) -> Option<Word> {
        (w.last() == Some(&c)).then(|| w[..w.len() - 1].to_vec())
    }

    /// Images of a basis word under `c_k` (`star = false`) or `c_k^*`; all coefficients are one.
    pub fn apply_letter(&self, w: &Word, k: usize, star: bool) -> Vec<Word> {
        let (k, r) = (k as u8, self.num_colors as u8);
        let mut out = Vec::with_capacity(2);
        let (up, down) = match (self.kind, star) {
            (FockKind::Circular, false) => (k, k + r),
            (FockKind::Circular, true) => (k + r, k),
            (FockKind::Semicircular, _) => (k, k),
        };
        out.extend(self.create(w, up));
        out.extend(Self::annihilate(w, down));
        out
    }

    fn apply_word(&self, w: &Word, letters: &[(usize, bool)]) -> Vec<Word> {
        let mut current = vec![w.clone()];
        for &(k, s) in letters.iter().rev() {
            current = current.iter().flat_map(|x| self.apply_letter(x, k, s)).collect();
            if current.is_empty() {
                break;
            }
        }
        current
    }

    /// Creation matrix of generator `c` on the truncated basis.
    pub fn creation_matrix(&self, c: u8) -> DMatrix<f64> {
        let basis = self.basis();
        let index: BTreeMap<&Word, usize> = basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut m = DMatrix::zeros(basis.len(), basis.len());
        for (j, w) in basis.iter().enumerate() {
            if let Some(x) = self.create(w, c) {
                m[(index[&x], j)] = 1.0;
            }
        }
        m
    }

    /// Annihilation matrix of generator `c` on the truncated basis.
    pub fn annihilation_matrix(&self, c: u8) -> DMatrix<f64> {
        let basis = self.basis();
        let index: BTreeMap<&Word, usize> = basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut m = DMatrix::zeros(basis.len(), basis.len());
        for (j, w) in basis.iter().enumerate() {
            if let Some(x) = Self::annihilate(w, c) {
                m[(index[&x], j)] = 1.0;
            }
        }
        m
    }

    /// `Σ_t (a_t ⊗ T_t) v`, vectors being maps from words to `α × n` blocks.
    fn apply_sum(
        &self,
        terms: &[FockTerm],
        v: &BTreeMap<Word, CMat>,
        keep: impl Fn(&Word) -> bool,
    ) -> Result<BTreeMap<Word, CMat>> {
        let mut out: BTreeMap<Word, CMat> = BTreeMap::new();
        for (w, x) in v {
            for t in terms {
                let images = self.apply_word(w, &t.letters);
                if images.is_empty() {
                    continue;
                }
                let y = &t.matrix * x;
                for img in images {
                    if !keep(&img) {
                        continue;
                    }
                    match out.get_mut(&img) {
                        Some(z) => *z += &y,
                        None => {
                            out.insert(img, y.clone());
                        }
                    }
                }
            }
            if out.len() > FOCK_DIMENSION_CAP {
                return Err(Error::CapExceeded {
                    size: out.len(),
                    cap: FOCK_DIMENSION_CAP,
                });
            }
        }
        Ok(out)
    }
}

fn alpha_of(terms: &[FockTerm]) -> usize {
    terms.first().map_or(1, |t| t.matrix.nrows())
}

/// `(Tr ⊗ ⟨·Ω, Ω⟩)((A A^*)^m)` for `A = Σ_t a_t ⊗ T_t`, at Fock depth `dm`.
pub fn fock_moment_terms(terms: &[FockTerm], kind: FockKind, r: usize, d: usize, m: usize) -> Result<f64> {
    fock_moment_at_depth(terms, kind, r, d * m, m)
}

pub fn fock_moment_at_depth(terms: &[FockTerm], kind: FockKind, r: usize, depth: usize, m: usize) -> Result<f64> {
    if terms.is_empty() {
        return Ok(0.0);
    }
    let d = terms[0].letters.len();
    let space = FockSpace::new(kind, r, depth);
    let adjoints: Vec<FockTerm> = terms.iter().map(FockTerm::adjoint).collect();
    let mut v = BTreeMap::new();
    v.insert(Vec::new(), CMat::identity(alpha_of(terms), alpha_of(terms)));
    for step in 0..2 * m {
        let remaining = (2 * m - step - 1) * d;
        let ops = if step % 2 == 0 { &adjoints } else { terms };
        v = space.apply_sum(ops, &v, |w| w.len() <= remaining)?;
    }
    Ok(v.get(&Vec::new()).map_or(0.0, |x| x.trace().re))
}

/// `‖A‖_{2m}^{2m}` on the Fock space for a holomorphic family.
pub fn fock_moment(a: &CoefficientFamily, kind: FockKind, m: usize) -> Result<f64> {
    fock_moment_terms(&holomorphic_terms(a), kind, a.r(), a.d(), m)
}

/// Same for a starred family (circular only makes sense here).
pub fn fock_moment_star(a: &StarCoefficientFamily, kind: FockKind, m: usize) -> Result<f64> {
    fock_moment_terms(&star_terms(a), kind, a.r(), a.d(), m)
}

/// Power-iteration estimate of `‖P A P‖`, `P` projecting onto words of length `≤ depth`.
/// It is a Rayleigh quotient, hence never above `‖A‖`.
pub fn fock_operator_norm_estimate(
    a: &CoefficientFamily,
    kind: FockKind,
    depth: usize,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<f64> {
    let terms = holomorphic_terms(a);
    if terms.is_empty() {
        return Ok(0.0);
    }
    let basis = FockSpace::new(kind, a.r(), depth);
    if basis.dimension() * a.alpha() > FOCK_DIMENSION_CAP {
        return Err(Error::CapExceeded {
            size: basis.dimension() * a.alpha(),
            cap: FOCK_DIMENSION_CAP,
        });
    }
    // room for the intermediate letters of one term, projected afterwards
    let space = FockSpace::new(kind, a.r(), depth + a.d());
    let inside = |w: &Word| w.len() <= depth;
    let adjoints: Vec<FockTerm> = terms.iter().map(FockTerm::adjoint).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: BTreeMap<Word, CMat> = basis
        .basis()
        .into_iter()
        .map(|w| {
            let x = CMat::from_fn(a.alpha(), 1, |_, _| {
                Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            (w, x)
        })
        .collect();
    let norm_sq = |v: &BTreeMap<Word, CMat>| v.values().map(|x| x.norm_squared()).sum::<f64>();
    let scale = |v: &mut BTreeMap<Word, CMat>, s: f64| v.values_mut().for_each(|x| *x *= Complex64::new(s, 0.0));
    let n0 = norm_sq(&v).sqrt();
    scale(&mut v, 1.0 / n0);
    let mut best = 0.0f64;
    let mut last = 0.0f64;
    for _ in 0..max_iter {
        let av = space.apply_sum(&terms, &v, inside)?;
        let rayleigh = norm_sq(&av);
        best = best.max(rayleigh);
        let mut next = space.apply_sum(&adjoints, &av, inside)?;
        let n = norm_sq(&next).sqrt();
        if n == 0.0 {
            break;
        }
        scale(&mut next, 1.0 / n);
        v = next;
        if (rayleigh - last).abs() <= tol * rayleigh.max(1e-300) {
            break;
        }
        last = rayleigh;
    }
    Ok(best.sqrt())
}
