use num_complex::Complex64;
use rayon::prelude::*;

use super::family::{CMat, CoefficientFamily, StarCoefficientFamily};
use super::matrices::schatten_pow;
use crate::cumulants::{kappa_pi, CumulantKind, CumulantSpec, SignedWord};
use crate::error::{Error, Result};
use crate::families::{enumerate_interval_pairings, enumerate_ncdm, enumerate_ncstar, enumerate_ncstar2};
use crate::partition::{elements_of, Partition};
use crate::symmetrize::GridShape;

/// Default cap on the number of block assignments visited by one sum.
pub const TUPLE_CAP: u64 = 10_000_000;

/// A complex trace sum; the imaginary part is kept as a residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SValue {
    pub re: f64,
    pub im: f64,
}

impl SValue {
    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    fn from_complex(z: Complex64) -> Self {
        SValue { re: z.re, im: z.im }
    }
}

/// How the letter at a position is read from its block's choice.
#[derive(Debug, Clone)]
pub(crate) enum LetterRule {
    /// The choice is the letter.
    Plain,
    /// Choice `(k, ε)` for the first element; signs alternate along the block.
    Alternating,
    /// Choice `k`; the sign of each position is fixed.
    Fixed(Vec<bool>),
}

/// Lookup tables for odd groups (`a`) and even groups (the flipped adjoints).
pub(crate) struct Tables {
    radix: usize,
    odd: Vec<Option<CMat>>,
    even: Vec<Option<CMat>>,
}

impl Tables {
    fn holomorphic(a: &CoefficientFamily) -> Self {
        let odd = a.dense_table();
        let flipped = a.flip();
        let even = flipped
            .dense_table()
            .into_iter()
            .map(|m| m.map(|m| m.adjoint()))
            .collect();
        Tables { radix: a.r(), odd, even }
    }

    /// Even groups use `ă_{k,ε}^* = (a_{(k_d..k_1),(ε̄_d..ε̄_1)})^*`.
    fn starred(a: &StarCoefficientFamily) -> Self {
        let inner = a.as_doubled();
        let odd = inner.dense_table();
        let mut even = vec![None; odd.len()];
        for (k, eps, m) in a.entries() {
            let k_rev: Vec<usize> = k.iter().rev().copied().collect();
            let e_rev: Vec<bool> = eps.iter().rev().map(|&e| !e).collect();
            let codes: Vec<usize> = k_rev
                .iter()
                .zip(&e_rev)
                .map(|(&ki, &e)| super::family::star_code(ki, e))
                .collect();
            even[inner.code(&codes)] = Some(m.adjoint());
        }
        Tables {
            radix: inner.r(),
            odd,
            even,
        }
    }
}

struct Plan<'a> {
    d: usize,
    groups: usize,
    choices: usize,
    block_of: Vec<usize>,
    rank: Vec<usize>,
    new_blocks: Vec<Vec<usize>>,
    num_blocks: usize,
    rule: &'a LetterRule,
    tables: &'a Tables,
}

impl Plan<'_> {
    fn letter(&self, choice: usize, pos: usize) -> usize {
        match self.rule {
            LetterRule::Plain => choice,
            LetterRule::Alternating => {
                let (k, eps0) = (choice / 2, choice % 2);
                2 * k + (eps0 ^ (self.rank[pos] % 2))
            }
            LetterRule::Fixed(stars) => 2 * choice + usize::from(stars[pos]),
        }
    }

    fn matrix(&self, group: usize, assign: &[usize]) -> Option<&CMat> {
        let mut code = 0;
        for i in 0..self.d {
            let pos = group * self.d + i;
            code = code * self.tables.radix + self.letter(assign[self.block_of[pos]], pos);
        }
        let table = if group.is_multiple_of(2) { &self.tables.odd } else { &self.tables.even };
        table[code].as_ref()
    }

    fn dfs(&self, group: usize, assign: &mut [usize], prefix: &CMat) -> Complex64 {
        if group == self.groups {
            return prefix.trace();
        }
        let fresh = &self.new_blocks[group];
        let mut total = Complex64::new(0.0, 0.0);
        let mut counter = vec![0usize; fresh.len()];
        loop {
            for (slot, &b) in fresh.iter().enumerate() {
                assign[b] = counter[slot];
            }
            if let Some(m) = self.matrix(group, assign) {
                let next = prefix * m;
                total += self.dfs(group + 1, assign, &next);
            }
            if !advance(&mut counter, self.choices) {
                break;
            }
        }
        total
    }

    fn run(&self) -> Complex64 {
        let fresh = &self.new_blocks[0];
        let mut starts = Vec::new();
        let mut counter = vec![0usize; fresh.len()];
        loop {
            starts.push(counter.clone());
            if !advance(&mut counter, self.choices) {
                break;
            }
        }
        let partial: Vec<Complex64> = starts
            .par_iter()
            .map(|start| {
                let mut assign = vec![0usize; self.num_blocks];
                for (slot, &b) in fresh.iter().enumerate() {
                    assign[b] = start[slot];
                }
                match self.matrix(0, &assign) {
                    Some(m) => self.dfs(1, &mut assign, m),
                    None => Complex64::new(0.0, 0.0),
                }
            })
            .collect();
        partial.into_iter().fold(Complex64::new(0.0, 0.0), |a, b| a + b)
    }
}

fn advance(counter: &mut [usize], base: usize) -> bool {
    for c in counter.iter_mut().rev() {
        *c += 1;
        if *c < base {
            return true;
        }
        *c = 0;
    }
    false
}

pub(crate) fn run_sum(
    p: &Partition,
    g: GridShape,
    choices: usize,
    rule: &LetterRule,
    tables: &Tables,
    cap: u64,
) -> Result<SValue> {
    if p.ground_size() != g.ground_size() {
        return Err(Error::GroundMismatch(p.ground_size(), g.ground_size()));
    }
    let nb = p.num_blocks();
    let work = (choices as f64).powi(nb as i32);
    if work > cap as f64 {
        return Err(Error::CapExceeded {
            size: work.min(u64::MAX as f64) as usize,
            cap: cap as usize,
        });
    }
    let n = g.ground_size();
    let mut block_of = vec![0; n];
    let mut rank = vec![0; n];
    let mut new_blocks = vec![Vec::new(); 2 * g.m];
    for (bi, &b) in p.block_masks().iter().enumerate() {
        for (t, e) in elements_of(b).enumerate() {
            block_of[e - 1] = bi;
            rank[e - 1] = t;
            if t == 0 {
                new_blocks[(e - 1) / g.d].push(bi);
            }
        }
    }
    let plan = Plan {
        d: g.d,
        groups: 2 * g.m,
        choices,
        block_of,
        rank,
        new_blocks,
        num_blocks: nb,
        rule,
        tables,
    };
    Ok(SValue::from_complex(plan.run()))
}

fn grid_of(a_d: usize, m: usize) -> Result<GridShape> {
    GridShape::new(a_d, m)
}

/// `S(a, π, d, m) = Σ_{k ≺ π} Tr(a_{k_1} ã_{k_2}^* a_{k_3} ⋯ ã_{k_{2m}}^*)`.
pub fn s_eval(a: &CoefficientFamily, p: &Partition, g: GridShape) -> Result<SValue> {
    s_eval_capped(a, p, g, TUPLE_CAP)
}

pub fn s_eval_capped(a: &CoefficientFamily, p: &Partition, g: GridShape, cap: u64) -> Result<SValue> {
    if a.d() != g.d {
        return Err(Error::GroundMismatch(a.d(), g.d));
    }
    let tables = Tables::holomorphic(a);
    run_sum(p, g, a.r(), &LetterRule::Plain, &tables, cap)
}

/// `S̃(a, π, d, m)`: signs alternate inside each block.
pub fn s_eval_star(a: &StarCoefficientFamily, p: &Partition, g: GridShape) -> Result<SValue> {
    if a.d() != g.d {
        return Err(Error::GroundMismatch(a.d(), g.d));
    }
    if !p.all_blocks_even() {
        return Ok(SValue { re: 0.0, im: 0.0 });
    }
    let tables = Tables::starred(a);
    run_sum(p, g, 2 * a.r(), &LetterRule::Alternating, &tables, TUPLE_CAP)
}

/// Trace sum with a prescribed sign at every position (used by brute-force checks).
pub fn s_eval_fixed_signs(a: &StarCoefficientFamily, p: &Partition, g: GridShape, stars: &[bool]) -> Result<SValue> {
    let tables = Tables::starred(a);
    run_sum(p, g, a.r(), &LetterRule::Fixed(stars.to_vec()), &tables, TUPLE_CAP)
}

/// A `2m`-th moment and the norm it defines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub power: f64,
    pub norm: f64,
    pub imag: f64,
    pub partitions: usize,
}

fn finish(power: Complex64, m: usize, partitions: usize) -> Result<NormReport> {
    let tol = 1e-9 * power.norm().max(1e-300) + 1e-12;
    if power.re < -tol {
        return Err(Error::Numeric(format!("negative 2m-th moment {}", power.re)));
    }
    Ok(NormReport {
        power: power.re.max(0.0),
        norm: power.re.max(0.0).powf(1.0 / (2 * m) as f64),
        imag: power.im,
        partitions,
    })
}

fn weighted_sum<F>(parts: &[Partition], weight: F) -> Result<Complex64>
where
    F: Fn(&Partition) -> Result<Option<(f64, SValue)>> + Sync,
{
    let terms: Vec<Result<Option<(f64, SValue)>>> = parts.par_iter().map(&weight).collect();
    let mut total = Complex64::new(0.0, 0.0);
    for t in terms {
        if let Some((w, s)) = t? {
            total += Complex64::new(s.re, s.im) * w;
        }
    }
    Ok(total)
}

/// `‖Σ a_k ⊗ c_k‖_{2m}` for free copies of an R-diagonal `c`, as
/// `Σ_{π ∈ NC*(d,m)} κ_π[c_{d,m}] S(a, π)`.
pub fn holo_norm_2m(a: &CoefficientFamily, spec: &CumulantSpec, m: usize) -> Result<NormReport> {
    if !spec.is_rdiagonal() {
        return Err(Error::Config(format!("{} is not an R-diagonal spec", spec.name())));
    }
    let g = grid_of(a.d(), m)?;
    if m == 1 {
        let alpha1 = spec.alpha(1).unwrap();
        let power = alpha1.powi(a.d() as i32) * a.frobenius_sq();
        return finish(Complex64::new(power, 0.0), 1, 1);
    }
    let word = SignedWord::holomorphic(g);
    let parts = if matches!(spec.kind, CumulantKind::Circular) {
        enumerate_ncstar2(g)?
    } else {
        enumerate_ncstar(g)?
    };
    let total = weighted_sum(&parts, |p| {
        let k = kappa_pi(spec, p, &word)?;
        if k == 0.0 {
            return Ok(None);
        }
        Ok(Some((k, s_eval(a, p, g)?)))
    })?;
    finish(total, m, parts.len())
}

/// Input for the non-holomorphic norms.
#[derive(Debug, Clone, Copy)]
pub enum NonHoloFamily<'a> {
    Plain(&'a CoefficientFamily),
    Star(&'a StarCoefficientFamily),
}

impl NonHoloFamily<'_> {
    pub fn d(&self) -> usize {
        match self {
            NonHoloFamily::Plain(a) => a.d(),
            NonHoloFamily::Star(a) => a.d(),
        }
    }

    /// Family whose `M_l` enter the bounds.
    pub fn matrices_source(&self) -> &CoefficientFamily {
        match self {
            NonHoloFamily::Plain(a) => a,
            NonHoloFamily::Star(a) => a.as_doubled(),
        }
    }
}

/// Semicircular: `Σ_{π ∈ 𝒮(d,m)} S(a, π)` with `a_k = 0` whenever `k_i = k_{i+1}`.
/// R-diagonal: `Σ_{π ∈ NC(d,m)} Π α_{|V|/2} S̃(a, π)` for a starred family.
pub fn nonholo_norm_2m(a: NonHoloFamily<'_>, spec: &CumulantSpec, m: usize) -> Result<NormReport> {
    let g = grid_of(a.d(), m)?;
    match (a, &spec.kind) {
        (NonHoloFamily::Plain(f), CumulantKind::Semicircular) => {
            if f.has_adjacent_repeat() {
                return Err(Error::Support(
                    "semicircular coefficients must vanish when two adjacent indices agree".into(),
                ));
            }
            let parts = enumerate_interval_pairings(g)?;
            let total = weighted_sum(&parts, |p| Ok(Some((1.0, s_eval(f, p, g)?))))?;
            finish(total, m, parts.len())
        }
        (NonHoloFamily::Star(f), _) if spec.is_rdiagonal() => {
            let parts = enumerate_ncdm(g)?;
            let total = weighted_sum(&parts, |p| {
                let w: f64 = p.block_sizes().map(|s| spec.alpha(s / 2).unwrap()).product();
                if w == 0.0 {
                    return Ok(None);
                }
                Ok(Some((w, s_eval_star(f, p, g)?)))
            })?;
            finish(total, m, parts.len())
        }
        (NonHoloFamily::Plain(f), _) if spec.is_rdiagonal() => {
            let star = StarCoefficientFamily::embed(f);
            nonholo_norm_2m(NonHoloFamily::Star(&star), spec, m)
        }
        _ => Err(Error::Config(format!(
            "no non-holomorphic formula for {} with this family type",
            spec.name()
        ))),
    }
}

/// `‖M_l‖_{2m}^{2m}` for all `l`.
pub fn ml_powers(a: &CoefficientFamily, m: usize) -> Result<Vec<f64>> {
    (0..=a.d())
        .map(|l| Ok(schatten_pow(&super::matrices::build_ml(a, l)?.matrix, m)))
        .collect()
}
