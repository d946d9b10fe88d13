//! Free cumulants of circular, Haar unitary, semicircular and general
//! R-diagonal operators, and the moment-cumulant formula in both directions.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::partition::{elements_of, visit_noncrossing, AnyBlock, EvenBlocks, Partition, DEFAULT_NC_CAP};
use crate::families::visit_ncstar;
use crate::symmetrize::GridShape;

/// Largest word length summed over all of `NC(n)`.
pub const FULL_MOMENT_CAP: usize = DEFAULT_NC_CAP;
/// Largest word length summed over even-block partitions.
pub const EVEN_MOMENT_CAP: usize = 24;

/// A letter `c_k` or `c_k^*` (0-based alphabet index).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub index: usize,
    pub star: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedWord(pub Vec<Letter>);

impl SignedWord {
    pub fn from_stars(stars: &[bool]) -> Self {
        SignedWord(stars.iter().map(|&star| Letter { index: 0, star }).collect())
    }

    /// `c, c*, c, c*, ...` of length `n`.
    pub fn alternating(n: usize) -> Self {
        Self::from_stars(&(0..n).map(|i| i % 2 == 1).collect::<Vec<_>>())
    }

    /// `2m` groups of `d` letters, plain in odd groups and starred in even ones.
    pub fn holomorphic(g: GridShape) -> Self {
        Self::from_stars(&holomorphic_stars(g))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn stars(&self) -> Vec<bool> {
        self.0.iter().map(|l| l.star).collect()
    }
}

pub fn holomorphic_stars(g: GridShape) -> Vec<bool> {
    (1..=g.ground_size()).map(|p| g.interval_of(p).is_multiple_of(2)).collect()
}

/// How alternation of `1`/`*` inside a block is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Alternation {
    #[default]
    Cyclic,
    Linear,
}

/// Block cumulant as a function of the star pattern of the block.
pub type StarTable = Arc<dyn Fn(&[bool]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum CumulantKind {
    Circular,
    HaarUnitary,
    Semicircular,
    /// Determining sequence `α_1, α_2, ...`; later entries are zero.
    RDiagonal(Vec<f64>),
    StarTable(StarTable),
}

#[derive(Clone)]
pub struct CumulantSpec {
    pub kind: CumulantKind,
    pub alternation: Alternation,
}

impl fmt::Debug for CumulantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CumulantSpec({}, {:?})", self.name(), self.alternation)
    }
}

impl CumulantSpec {
    pub fn new(kind: CumulantKind) -> Self {
        CumulantSpec {
            kind,
            alternation: Alternation::Cyclic,
        }
    }

    pub fn circular() -> Self {
        Self::new(CumulantKind::Circular)
    }

    pub fn haar() -> Self {
        Self::new(CumulantKind::HaarUnitary)
    }

    pub fn semicircular() -> Self {
        Self::new(CumulantKind::Semicircular)
    }

    pub fn rdiagonal(alpha: Vec<f64>) -> Self {
        Self::new(CumulantKind::RDiagonal(alpha))
    }

    pub fn with_alternation(mut self, alternation: Alternation) -> Self {
        self.alternation = alternation;
        self
    }

    /// Parses `circular`, `haar`, `semicircle` or `rdiag:a1,a2,...`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        match name {
            "circular" => Ok(Self::circular()),
            "haar" => Ok(Self::haar()),
            "semicircle" | "semicircular" => Ok(Self::semicircular()),
            _ => {
                if let Some(rest) = name.strip_prefix("rdiag:") {
                    let alpha = rest
                        .split(',')
                        .map(|t| {
                            t.trim()
                                .parse::<f64>()
                                .map_err(|_| Error::Config(format!("bad rdiag coefficient {t:?}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Self::rdiagonal(alpha))
                } else {
                    Err(Error::Config(format!("unknown cumulant spec {name:?}")))
                }
            }
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            CumulantKind::Circular => "circular".into(),
            CumulantKind::HaarUnitary => "haar".into(),
            CumulantKind::Semicircular => "semicircle".into(),
            CumulantKind::RDiagonal(a) => format!(
                "rdiag:{}",
                a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            ),
            CumulantKind::StarTable(_) => "table".into(),
        }
    }

    pub fn is_rdiagonal(&self) -> bool {
        matches!(
            self.kind,
            CumulantKind::Circular | CumulantKind::HaarUnitary | CumulantKind::RDiagonal(_)
        )
    }

    pub fn is_self_adjoint(&self) -> bool {
        matches!(self.kind, CumulantKind::Semicircular)
    }

    /// True when every block of odd length has zero cumulant.
    pub fn kills_odd_blocks(&self) -> bool {
        !matches!(self.kind, CumulantKind::StarTable(_))
    }

    /// `α_n`, for R-diagonal kinds.
    pub fn alpha(&self, n: usize) -> Option<f64> {
        match &self.kind {
            CumulantKind::Circular => Some(if n == 1 { 1.0 } else { 0.0 }),
            CumulantKind::HaarUnitary => Some(haar_alpha(n)),
            CumulantKind::RDiagonal(a) => Some(a.get(n - 1).copied().unwrap_or(0.0)),
            _ => None,
        }
    }

    /// Cumulant of a single block given its star pattern.
    pub fn block_cumulant(&self, stars: &[bool]) -> f64 {
        let len = stars.len();
        match &self.kind {
            CumulantKind::Semicircular => {
                if len == 2 {
                    1.0
                } else {
                    0.0
                }
            }
            CumulantKind::StarTable(f) => f(stars),
            _ => {
                if len == 0 || len % 2 == 1 || !alternates(stars, self.alternation) {
                    return 0.0;
                }
                self.alpha(len / 2).unwrap()
            }
        }
    }

    /// Known operator norms of the presets.
    pub fn operator_norm(&self) -> Option<f64> {
        match self.kind {
            CumulantKind::Circular => Some(2.0),
            CumulantKind::HaarUnitary => Some(1.0),
            CumulantKind::Semicircular => Some(2.0),
            _ => None,
        }
    }

    /// `‖c‖_2 = τ(cc*)^{1/2}`.
    pub fn norm_2(&self) -> Result<f64> {
        self.norm_2m(1)
    }

    /// `‖c‖_{2m} = τ((cc*)^m)^{1/(2m)}`.
    pub fn norm_2m(&self, m: usize) -> Result<f64> {
        let v = moment_from_cumulants(self, &SignedWord::alternating(2 * m))?;
        Ok(v.max(0.0).powf(1.0 / (2 * m) as f64))
    }
}

/// Alternation of `1` and `*` along the block; the cyclic reading also
/// compares the last letter with the first.
pub fn alternates(stars: &[bool], alternation: Alternation) -> bool {
    let linear = stars.windows(2).all(|w| w[0] != w[1]);
    match alternation {
        Alternation::Linear => linear,
        Alternation::Cyclic => linear && (stars.len() < 2 || stars[0] != stars[stars.len() - 1]),
    }
}

/// `κ_π[w]`, with blocks mixing different alphabet letters vanishing.
pub fn kappa_pi(spec: &CumulantSpec, p: &Partition, w: &SignedWord) -> Result<f64> {
    if w.len() != p.ground_size() {
        return Err(Error::GroundMismatch(w.len(), p.ground_size()));
    }
    Ok(kappa_pi_stars(spec, p, &w.stars(), Some(w)))
}

pub(crate) fn kappa_pi_stars(spec: &CumulantSpec, p: &Partition, stars: &[bool], w: Option<&SignedWord>) -> f64 {
    let mut acc = 1.0;
    let mut buf = Vec::with_capacity(p.ground_size());
    for &b in p.block_masks() {
        buf.clear();
        let mut index = None;
        for e in elements_of(b) {
            if let Some(w) = w {
                let k = w.0[e - 1].index;
                if *index.get_or_insert(k) != k {
                    return 0.0;
                }
            }
            buf.push(stars[e - 1]);
        }
        acc *= spec.block_cumulant(&buf);
        if acc == 0.0 {
            return 0.0;
        }
    }
    acc
}

/// `τ(w) = Σ_{π ∈ NC(n)} κ_π[w]`.
pub fn moment_from_cumulants(spec: &CumulantSpec, w: &SignedWord) -> Result<f64> {
    let n = w.len();
    if n == 0 {
        return Ok(1.0);
    }
    let mut total = 0.0;
    if spec.kills_odd_blocks() {
        if n % 2 == 1 {
            return Ok(0.0);
        }
        if n > EVEN_MOMENT_CAP {
            return Err(Error::CapExceeded { size: n, cap: EVEN_MOMENT_CAP });
        }
        visit_noncrossing(n, &EvenBlocks, |p| total += kappa_pi_stars(spec, p, &w.stars(), Some(w)));
    } else {
        if n > FULL_MOMENT_CAP {
            return Err(Error::CapExceeded { size: n, cap: FULL_MOMENT_CAP });
        }
        visit_noncrossing(n, &AnyBlock, |p| total += kappa_pi_stars(spec, p, &w.stars(), Some(w)));
    }
    Ok(total)
}

/// Partitions of `[2n]` into even blocks that alternate along `c c* c c* ...`.
fn visit_alternating<F: FnMut(&Partition)>(n: usize, f: F) {
    let g = GridShape::new(1, n).expect("alternating word fits the ground set");
    visit_ncstar(g, EVEN_MOMENT_CAP, f).expect("alternating word within cap");
}

/// Inverts the moment-cumulant formula on alternating words for an
/// R-diagonal element: `α_n = m_n - Σ_{π ≠ 1} Π α_{|V|/2}`.
pub fn determining_sequence_from_moments(moments: &dyn Fn(&SignedWord) -> f64, k: usize) -> Vec<f64> {
    let mut alpha: Vec<f64> = Vec::with_capacity(k);
    for n in 1..=k {
        let mut rest = 0.0;
        visit_alternating(n, |p| {
            if p.num_blocks() > 1 {
                rest += p.block_sizes().map(|s| alpha[s / 2 - 1]).product::<f64>();
            }
        });
        alpha.push(moments(&SignedWord::alternating(2 * n)) - rest);
    }
    alpha
}

/// Exact version of [`determining_sequence_from_moments`]; `moments(n)` is
/// the moment of `(cc*)^n`.
pub fn determining_sequence_exact(moments: &dyn Fn(usize) -> BigRational, k: usize) -> Vec<BigRational> {
    let mut alpha: Vec<BigRational> = Vec::with_capacity(k);
    extend_exact(moments, &mut alpha, k);
    alpha
}

fn extend_exact(moments: &dyn Fn(usize) -> BigRational, alpha: &mut Vec<BigRational>, k: usize) {
    for n in alpha.len() + 1..=k {
        let mut rest = BigRational::zero();
        visit_alternating(n, |p| {
            if p.num_blocks() > 1 {
                let term = p
                    .block_sizes()
                    .fold(BigRational::from_integer(BigInt::from(1)), |acc, s| acc * &alpha[s / 2 - 1]);
                rest += term;
            }
        });
        alpha.push(moments(n) - rest);
    }
}

fn unit_moment(_: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(1))
}

static HAAR_TABLE: Lazy<Mutex<Vec<BigRational>>> = Lazy::new(|| {
    let mut table = Vec::new();
    extend_exact(&unit_moment, &mut table, 8);
    Mutex::new(table)
});

/// Determining sequence of a Haar unitary, derived from `τ((uu*)^n) = 1`.
pub fn haar_alpha_exact(n: usize) -> BigRational {
    let mut table = HAAR_TABLE.lock().unwrap();
    if table.len() < n {
        extend_exact(&unit_moment, &mut table, n);
    }
    table[n - 1].clone()
}

pub fn haar_alpha(n: usize) -> f64 {
    haar_alpha_exact(n).to_f64().unwrap()
}

/// `m_2^{2K} (16 m_N)^{n - 2K}` with `K` the number of pair blocks of `p`.
pub fn cumulant_domination_bound(p: &Partition, m2: f64, mn: f64) -> f64 {
    let k = p.count_blocks_of_size(2) as i32;
    let n = p.ground_size() as i32;
    m2.powi(2 * k) * (16.0 * mn).powi(n - 2 * k)
}
