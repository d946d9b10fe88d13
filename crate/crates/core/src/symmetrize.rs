//! Mirror symmetries `s_k`, the symmetrizations `P_k`, terminal
//! classification, the collapse invariant `B` and the exact absorption law
//! of the random symmetrization walk.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::families::is_ncstar;
use crate::partition::{
    elements_of, is_noncrossing, mask_of, phi_collapse, restrict, CyclicIndex, Partition,
    MAX_GROUND,
};

/// Default cap on the number of states explored by [`absorption_probabilities`].
pub const DEFAULT_STATE_CAP: usize = 100_000;

/// Layout of `[2dm]` as `2m` intervals `J_k` of length `d`, with labels
/// running `1..d` on odd intervals and `d..1` on even ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridShape {
    pub d: usize,
    pub m: usize,
}

impl GridShape {
    pub fn new(d: usize, m: usize) -> Result<Self> {
        if d == 0 || m == 0 {
            return Err(Error::Config(format!("d and m must be positive (d={d}, m={m})")));
        }
        if 2 * d * m > MAX_GROUND {
            return Err(Error::GroundSize {
                got: 2 * d * m,
                expected: format!("2dm <= {MAX_GROUND}"),
            });
        }
        Ok(GridShape { d, m })
    }

    pub fn ground_size(&self) -> usize {
        2 * self.d * self.m
    }

    /// Index `k` of the interval `J_k` holding `pos`.
    pub fn interval_of(&self, pos: usize) -> usize {
        (pos - 1) / self.d + 1
    }

    pub fn label(&self, pos: usize) -> usize {
        let k = self.interval_of(pos);
        let j = pos - (k - 1) * self.d;
        if k % 2 == 1 {
            j
        } else {
            self.d + 1 - j
        }
    }

    /// Position of label `i` inside `J_k`.
    pub fn position(&self, k: usize, i: usize) -> usize {
        if k % 2 == 1 {
            (k - 1) * self.d + i
        } else {
            (k - 1) * self.d + self.d + 1 - i
        }
    }

    /// The class `A_i`, ascending; its `j`-th element lies in `J_j`.
    pub fn class(&self, i: usize) -> Vec<usize> {
        (1..=2 * self.m).map(|k| self.position(k, i)).collect()
    }

    pub fn interval_mask(&self, k: usize) -> u64 {
        (1..=self.d).fold(0, |acc, j| acc | mask_of((k - 1) * self.d + j))
    }

    /// Assembles the partition whose restriction to each `A_i` is `parts[i-1]`
    /// and which links no two classes.
    pub fn from_class_restrictions(&self, parts: &[Partition]) -> Result<Partition> {
        if parts.len() != self.d {
            return Err(Error::IndexRange(format!(
                "expected {} class partitions, got {}",
                self.d,
                parts.len()
            )));
        }
        let mut blocks = Vec::new();
        for (idx, q) in parts.iter().enumerate() {
            if q.ground_size() != 2 * self.m {
                return Err(Error::GroundMismatch(q.ground_size(), 2 * self.m));
            }
            let class = self.class(idx + 1);
            for &b in q.block_masks() {
                blocks.push(elements_of(b).fold(0, |acc, e| acc | mask_of(class[e - 1])));
            }
        }
        Ok(Partition::from_masks(self.ground_size(), blocks))
    }
}

fn even_ground(p: &Partition) -> Result<usize> {
    let n = p.ground_size();
    if !n.is_multiple_of(2) {
        return Err(Error::GroundSize {
            got: n,
            expected: "an even ground size".into(),
        });
    }
    Ok(n)
}

/// `s_k(i) = 2k + 1 - i` on `Z/nZ`.
pub fn mirror_point(n: usize, k: usize, i: usize) -> usize {
    CyclicIndex::new(2 * k as i64 + 1 - i as i64, n).get()
}

fn mirror_mask(n: usize, k: usize, mask: u64) -> u64 {
    elements_of(mask).fold(0, |acc, e| acc | mask_of(mirror_point(n, k, e)))
}

/// `I_k`: the `n/2` consecutive positions ending at `k`.
pub fn half_interval_mask(n: usize, k: usize) -> u64 {
    let half = n / 2;
    (0..half).fold(0, |acc, t| {
        acc | mask_of(CyclicIndex::new(k as i64 - t as i64, n).get())
    })
}

/// The mirror image `s_k(p)`.
pub fn apply_symmetry(p: &Partition, k: i64) -> Result<Partition> {
    let n = even_ground(p)?;
    let k = CyclicIndex::new(k, n).get();
    let blocks = p.block_masks().iter().map(|&b| mirror_mask(n, k, b)).collect();
    Ok(Partition::from_masks(n, blocks))
}

/// `P_k(p)`: keep the half `I_k`, replace the other half by its mirror, and
/// join each block that crossed the cut to its own mirror image.
pub fn apply_p(p: &Partition, k: i64) -> Result<Partition> {
    let n = even_ground(p)?;
    let k = CyclicIndex::new(k, n).get();
    let inside = half_interval_mask(n, k);
    let mut blocks = Vec::with_capacity(2 * p.num_blocks());
    for &b in p.block_masks() {
        let kept = b & inside;
        if kept == 0 {
            continue;
        }
        let image = mirror_mask(n, k, kept);
        if b & !inside != 0 {
            blocks.push(kept | image);
        } else {
            blocks.push(kept);
            blocks.push(image);
        }
    }
    Ok(Partition::from_masks(n, blocks))
}

/// The four symmetric partitions of `[2m]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasicTerminal {
    Zero,
    C,
    R,
    One,
}

impl BasicTerminal {
    pub fn partition(self, m: usize) -> Partition {
        match self {
            BasicTerminal::Zero => Partition::singletons(2 * m),
            BasicTerminal::C => Partition::c_pairs(m),
            BasicTerminal::R => Partition::r_pairs(m),
            BasicTerminal::One => Partition::one_block(2 * m),
        }
    }
}

/// Terminal partitions of the cascade on `[2dm]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TerminalKind {
    Sigma(usize),
    SigmaTilde(usize),
}

impl TerminalKind {
    /// Split index `l` the terminal contributes to.
    pub fn level(self) -> usize {
        match self {
            TerminalKind::Sigma(l) | TerminalKind::SigmaTilde(l) => l,
        }
    }

    /// Names for `d = 1`: `σ_0 = r_m`, `σ_1 = c_m`, `σ̃_1 = 1_{2m}`.
    pub fn alias(self) -> Option<BasicTerminal> {
        match self {
            TerminalKind::Sigma(0) => Some(BasicTerminal::R),
            TerminalKind::Sigma(1) => Some(BasicTerminal::C),
            TerminalKind::SigmaTilde(1) => Some(BasicTerminal::One),
            _ => None,
        }
    }
}

impl fmt::Display for TerminalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TerminalKind::Sigma(l) => write!(f, "sigma_{l}"),
            TerminalKind::SigmaTilde(l) => write!(f, "sigma_tilde_{l}"),
        }
    }
}

/// `σ_l`: `c_m` on `A_1..A_l`, `r_m` on the remaining classes.
pub fn sigma(g: GridShape, l: usize) -> Result<Partition> {
    if l > g.d {
        return Err(Error::IndexRange(format!("sigma index {l} not in 0..={}", g.d)));
    }
    let parts: Vec<Partition> = (1..=g.d)
        .map(|i| {
            if i <= l {
                Partition::c_pairs(g.m)
            } else {
                Partition::r_pairs(g.m)
            }
        })
        .collect();
    g.from_class_restrictions(&parts)
}

/// `σ̃_l`: as `σ_l` but with the whole class `A_l` as one block.
pub fn sigma_tilde(g: GridShape, l: usize) -> Result<Partition> {
    if l == 0 || l > g.d {
        return Err(Error::IndexRange(format!("sigma_tilde index {l} not in 1..={}", g.d)));
    }
    let parts: Vec<Partition> = (1..=g.d)
        .map(|i| match i.cmp(&l) {
            std::cmp::Ordering::Less => Partition::c_pairs(g.m),
            std::cmp::Ordering::Equal => Partition::one_block(2 * g.m),
            std::cmp::Ordering::Greater => Partition::r_pairs(g.m),
        })
        .collect();
    g.from_class_restrictions(&parts)
}

/// All `2d + 1` terminals, `σ_0..σ_d` then `σ̃_1..σ̃_d`.
pub fn terminals(g: GridShape) -> Vec<(TerminalKind, Partition)> {
    let mut out: Vec<_> = (0..=g.d)
        .map(|l| (TerminalKind::Sigma(l), sigma(g, l).unwrap()))
        .collect();
    out.extend((1..=g.d).map(|l| (TerminalKind::SigmaTilde(l), sigma_tilde(g, l).unwrap())));
    out
}

/// First matching terminal; for `m = 1` all terminals coincide and `σ_0`
/// is reported.
pub fn classify_terminal(p: &Partition, g: GridShape) -> Option<TerminalKind> {
    terminals(g).into_iter().find(|(_, t)| t == p).map(|(k, _)| k)
}

/// Symmetrization centers `md, d, 2d, 4d, ..., 2^j d` with `2^j >= m`.
pub fn cascade_centers(g: GridShape) -> Vec<usize> {
    let mut out = vec![g.m * g.d];
    let mut step = 1;
    loop {
        out.push(step * g.d);
        if step >= g.m {
            break;
        }
        step *= 2;
    }
    out
}

fn run_cascade(p: &Partition, centers: &[usize]) -> Result<Partition> {
    centers
        .iter()
        .try_fold(p.clone(), |acc, &c| apply_p(&acc, c as i64))
}

/// Runs the cascade on `p` (in `NC*(d,m)` or `NC(d,m)`) and names the result.
pub fn symmetrize_terminal(p: &Partition, g: GridShape) -> Result<(TerminalKind, Partition)> {
    if p.ground_size() != g.ground_size() {
        return Err(Error::GroundMismatch(p.ground_size(), g.ground_size()));
    }
    if !p.all_blocks_even() || !is_noncrossing(p) {
        return Err(Error::NotInFamily(format!(
            "{p} needs even blocks and no crossings"
        )));
    }
    let out = run_cascade(p, &cascade_centers(g))?;
    match classify_terminal(&out, g) {
        Some(kind) => Ok((kind, out)),
        None => Err(Error::NotInFamily(format!(
            "cascade of {p} ended at {out}, which is not terminal"
        ))),
    }
}

/// The `d = 1` cascade `P_{2^j} ... P_2 P_1 P_m` for an arbitrary partition of `[2m]`.
pub fn symmetrize_basic(p: &Partition) -> Result<(BasicTerminal, Partition)> {
    let n = even_ground(p)?;
    let m = n / 2;
    let g = GridShape::new(1, m)?;
    let out = run_cascade(p, &cascade_centers(g))?;
    [BasicTerminal::Zero, BasicTerminal::C, BasicTerminal::R, BasicTerminal::One]
        .into_iter()
        .find(|t| t.partition(m) == out)
        .map(|t| (t, out.clone()))
        .ok_or_else(|| Error::NotInFamily(format!("cascade of {p} ended at {out}")))
}

/// Outcome predicted from the block of `1`: `A = I_m ∩ π(1) ∖ {1}` and
/// `B = π(1) ∖ I_m`.
pub fn predicted_basic(p: &Partition) -> Result<BasicTerminal> {
    let n = even_ground(p)?;
    let m = n / 2;
    let inside = half_interval_mask(n, m);
    let own = p.block_mask_of(1);
    let a = own & inside & !mask_of(1);
    let b = own & !inside;
    Ok(match (a != 0, b != 0) {
        (false, false) => BasicTerminal::Zero,
        (false, true) => BasicTerminal::C,
        (true, false) => BasicTerminal::R,
        (true, true) => BasicTerminal::One,
    })
}

fn require_ncstar1(p: &Partition) -> Result<usize> {
    let n = even_ground(p)?;
    if !p.all_blocks_even() || !is_noncrossing(p) {
        return Err(Error::NotInFamily(format!("{p} is not in NC*(1,{})", n / 2)));
    }
    Ok(n / 2)
}

/// `B(p)`: number of blocks of the collapse of `p`.
pub fn b_invariant(p: &Partition) -> Result<usize> {
    require_ncstar1(p)?;
    Ok(phi_collapse(p)?.num_blocks())
}

/// `B` at `p`, `P_k p` and `P_{k+m} p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MartingaleCheck {
    pub b: usize,
    pub b_k: usize,
    pub b_k_plus_m: usize,
}

impl MartingaleCheck {
    pub fn holds(&self) -> bool {
        2 * self.b == self.b_k + self.b_k_plus_m
    }
}

pub fn check_b_martingale(p: &Partition, k: i64) -> Result<MartingaleCheck> {
    let m = require_ncstar1(p)?;
    let b = phi_collapse(p)?.num_blocks();
    let pk = apply_p(p, k)?;
    let pkm = apply_p(p, k + m as i64)?;
    Ok(MartingaleCheck {
        b,
        b_k: b_invariant(&pk)?,
        b_k_plus_m: b_invariant(&pkm)?,
    })
}

fn require_ncstar(p: &Partition, g: GridShape) -> Result<()> {
    if !is_ncstar(p, g)? {
        return Err(Error::NotInFamily(format!("{p} is not in NC*({},{})", g.d, g.m)));
    }
    Ok(())
}

/// `B(p|A_0), ..., B(p|A_{d+1})` with the end conventions `1` and `m`.
pub fn class_b_profile(p: &Partition, g: GridShape) -> Result<Vec<usize>> {
    require_ncstar(p, g)?;
    let mut out = vec![1];
    for i in 1..=g.d {
        out.push(b_invariant(&restrict(p, &g.class(i))?)?);
    }
    out.push(g.m);
    Ok(out)
}

/// `μ_l = (B(p|A_{l+1}) - B(p|A_l)) / (m - 1)` for `l = 0..=d`.
pub fn mu_exponents(p: &Partition, g: GridShape) -> Result<Vec<BigRational>> {
    if g.m < 2 {
        return Err(Error::SingleMoment);
    }
    let prof = class_b_profile(p, g)?;
    let denom = BigInt::from(g.m - 1);
    Ok(prof
        .windows(2)
        .map(|w| BigRational::new(BigInt::from(w[1] as i64 - w[0] as i64), denom.clone()))
        .collect())
}

/// Exact absorption law of the walk `π ↦ P_{id}(π)`, `i` uniform on `[2m]`.
pub fn absorption_probabilities(
    p: &Partition,
    g: GridShape,
    state_cap: usize,
) -> Result<BTreeMap<TerminalKind, BigRational>> {
    if p.ground_size() != g.ground_size() {
        return Err(Error::GroundMismatch(p.ground_size(), g.ground_size()));
    }
    let terms = terminals(g);
    let kind_of = |q: &Partition| terms.iter().find(|(_, t)| t == q).map(|(k, _)| *k);

    let mut index: HashMap<Partition, usize> = HashMap::new();
    let mut states: Vec<Partition> = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(p.clone(), 0);
    states.push(p.clone());
    queue.push_back(0);
    let steps = 2 * g.m;
    let mut moves: Vec<Vec<usize>> = Vec::new();
    while let Some(s) = queue.pop_front() {
        let mut next = Vec::with_capacity(steps);
        if kind_of(&states[s]).is_none() {
            for i in 1..=steps {
                let q = apply_p(&states[s], (i * g.d) as i64)?;
                let id = match index.get(&q) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= state_cap {
                            return Err(Error::CapExceeded {
                                size: states.len() + 1,
                                cap: state_cap,
                            });
                        }
                        let id = states.len();
                        index.insert(q.clone(), id);
                        states.push(q);
                        queue.push_back(id);
                        id
                    }
                };
                next.push(id);
            }
        }
        if moves.len() <= s {
            moves.resize(s + 1, Vec::new());
        }
        moves[s] = next;
    }
    moves.resize(states.len(), Vec::new());

    let absorbing: Vec<Option<TerminalKind>> = states.iter().map(kind_of).collect();
    let transient: Vec<usize> = (0..states.len()).filter(|&s| absorbing[s].is_none()).collect();
    let mut kinds: Vec<TerminalKind> = absorbing.iter().flatten().copied().collect();
    kinds.sort();
    kinds.dedup();

    let mut out = BTreeMap::new();
    if let Some(kind) = absorbing[0] {
        out.insert(kind, BigRational::one());
        return Ok(out);
    }
    let pos: HashMap<usize, usize> = transient.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let t = transient.len();
    let w = BigRational::new(BigInt::one(), BigInt::from(steps));
    // augmented system (I - Q) h = R, one right-hand side per terminal kind
    let mut mat = vec![vec![BigRational::zero(); t + kinds.len()]; t];
    for (row, &s) in transient.iter().enumerate() {
        mat[row][row] += BigRational::one();
        for &q in &moves[s] {
            match absorbing[q] {
                Some(kind) => {
                    let col = t + kinds.binary_search(&kind).unwrap();
                    mat[row][col] += &w;
                }
                None => mat[row][pos[&q]] -= &w,
            }
        }
    }
    solve_in_place(&mut mat, t)?;
    for (c, kind) in kinds.iter().enumerate() {
        let v = mat[pos[&0]][t + c].clone();
        if !v.is_zero() {
            out.insert(*kind, v);
        }
    }
    Ok(out)
}

/// Gauss-Jordan elimination over the rationals on an `n × (n + r)` system.
fn solve_in_place(mat: &mut [Vec<BigRational>], n: usize) -> Result<()> {
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !mat[r][col].is_zero())
            .ok_or_else(|| Error::Numeric("singular absorption system".into()))?;
        mat.swap(col, pivot);
        let inv = mat[col][col].recip();
        for x in mat[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = mat[col].clone();
        for (r, row) in mat.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::enumerate_ncstar;
    use crate::partition::{enumerate_all, enumerate_nc};

    fn part(s: &str, n: usize) -> Partition {
        Partition::parse(s, n).unwrap()
    }

    #[test]
    fn grid_labels() {
        let g = GridShape::new(3, 2).unwrap();
        let labels: Vec<usize> = (1..=12).map(|p| g.label(p)).collect();
        assert_eq!(labels, vec![1, 2, 3, 3, 2, 1, 1, 2, 3, 3, 2, 1]);
        assert_eq!(g.class(1), vec![1, 6, 7, 12]);
        assert_eq!(g.class(3), vec![3, 4, 9, 10]);
        for i in 1..=3 {
            for (j, &pos) in g.class(i).iter().enumerate() {
                assert_eq!(g.interval_of(pos), j + 1);
                assert_eq!(g.label(pos), i);
            }
        }
    }

    #[test]
    fn symmetry_examples() {
        let p = part("1,3|2,4", 4);
        assert_eq!(apply_symmetry(&p, 1).unwrap(), p);
        for n2 in 1..=6 {
            let n = 2 * n2;
            for k in 1..=n {
                let inside = half_interval_mask(n, k);
                let image = mirror_mask(n, k, inside);
                assert_eq!(image, !inside & ((1u64 << n) - 1));
            }
        }
        assert!(apply_symmetry(&Partition::one_block(3), 1).is_err());
    }

    #[test]
    fn p1_of_the_twelve_point_example() {
        let p = part("1,3,12|2,4,8,10|5,7|6|9,11", 12);
        let q = apply_p(&p, 1).unwrap();
        assert_eq!(q, part("1,2,3,12|5,7,8,10|4,6|9,11", 12));
        assert_eq!(apply_symmetry(&q, 1).unwrap(), q);
    }

    #[test]
    fn p_on_six_points() {
        let p = part("1,2,3,4|5,6", 6);
        assert_eq!(apply_p(&p, 1).unwrap(), Partition::r_pairs(3));
        assert_eq!(apply_p(&p, 4).unwrap(), Partition::one_block(6));
        assert_eq!(apply_p(&p, 0).unwrap(), apply_p(&p, 6).unwrap());
    }

    #[test]
    fn basic_terminals_are_fixed() {
        for m in 1..=5 {
            for t in [BasicTerminal::C, BasicTerminal::R, BasicTerminal::One, BasicTerminal::Zero] {
                let p = t.partition(m);
                for i in 1..=2 * m {
                    assert_eq!(apply_p(&p, i as i64).unwrap(), p, "{t:?} m={m} i={i}");
                }
            }
        }
    }

    #[test]
    fn p_is_symmetric_and_idempotent() {
        for n in [2, 4, 6, 8] {
            for p in enumerate_nc(n).unwrap() {
                for k in 1..=n as i64 {
                    let q = apply_p(&p, k).unwrap();
                    assert_eq!(apply_symmetry(&q, k).unwrap(), q);
                    assert_eq!(apply_p(&q, k).unwrap(), q);
                    assert!(is_noncrossing(&q));
                }
            }
        }
    }

    #[test]
    fn p_matches_clause_definition() {
        for p in enumerate_all(8).unwrap() {
            let n = 8;
            for k in 1..=n {
                let q = apply_p(&p, k as i64).unwrap();
                let inside = half_interval_mask(n, k);
                let is_in = |i: usize| inside & mask_of(i) != 0;
                let s = |i: usize| mirror_point(n, k, i);
                for i in 1..=n {
                    for j in 1..=n {
                        let expected = match (is_in(i), is_in(j)) {
                            (true, true) => p.related(i, j),
                            (false, false) => p.related(s(i), s(j)),
                            (true, false) => {
                                p.related(i, s(j)) && p.block_mask_of(i) & !inside != 0
                            }
                            (false, true) => {
                                p.related(j, s(i)) && p.block_mask_of(j) & !inside != 0
                            }
                        };
                        assert_eq!(q.related(i, j), expected, "{p} k={k} ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn basic_cascade_matches_prediction() {
        for m in 1..=4 {
            for p in enumerate_all(2 * m).unwrap() {
                let (kind, _) = symmetrize_basic(&p).unwrap();
                assert_eq!(kind, predicted_basic(&p).unwrap(), "{p}");
            }
        }
    }

    #[test]
    fn sigma_examples() {
        let g = GridShape::new(1, 2).unwrap();
        assert_eq!(sigma(g, 0).unwrap(), part("1,2|3,4", 4));
        assert_eq!(sigma(g, 1).unwrap(), part("2,3|4,1", 4));
        assert!(sigma(g, 2).is_err());
        assert!(sigma_tilde(g, 0).is_err());
        for d in 1..=3 {
            for m in 1..=3 {
                let g = GridShape::new(d, m).unwrap();
                for l in 0..=d {
                    let s = sigma(g, l).unwrap();
                    for i in 1..=d {
                        let want = if i <= l { Partition::c_pairs(m) } else { Partition::r_pairs(m) };
                        assert_eq!(restrict(&s, &g.class(i)).unwrap(), want);
                    }
                }
            }
        }
    }

    #[test]
    fn terminals_fixed_by_all_centers() {
        for d in 1..=3 {
            for m in 1..=3 {
                let g = GridShape::new(d, m).unwrap();
                for (kind, t) in terminals(g) {
                    assert!(is_ncstar(&t, g).unwrap());
                    for i in 1..=2 * m {
                        assert_eq!(apply_p(&t, (i * d) as i64).unwrap(), t, "{kind}");
                    }
                    let (k2, _) = symmetrize_terminal(&t, g).unwrap();
                    if m > 1 {
                        assert_eq!(k2, kind);
                    }
                }
            }
        }
    }

    #[test]
    fn terminal_of_one_block() {
        let g = GridShape::new(1, 2).unwrap();
        let (kind, out) = symmetrize_terminal(&Partition::one_block(4), g).unwrap();
        assert_eq!(kind, TerminalKind::SigmaTilde(1));
        assert_eq!(kind.alias(), Some(BasicTerminal::One));
        assert_eq!(out, Partition::one_block(4));
    }

    #[test]
    fn cascade_center_lists() {
        assert_eq!(cascade_centers(GridShape::new(1, 1).unwrap()), vec![1, 1]);
        assert_eq!(cascade_centers(GridShape::new(2, 3).unwrap()), vec![6, 2, 4, 8]);
        assert_eq!(cascade_centers(GridShape::new(1, 4).unwrap()), vec![4, 1, 2, 4]);
    }

    #[test]
    fn b_examples() {
        for m in 1..=5 {
            assert_eq!(b_invariant(&Partition::r_pairs(m)).unwrap(), m);
            assert_eq!(b_invariant(&Partition::c_pairs(m)).unwrap(), 1);
            assert_eq!(b_invariant(&Partition::one_block(2 * m)).unwrap(), 1);
        }
        let p = part("1,2,3,4|5,6", 6);
        assert_eq!(b_invariant(&p).unwrap(), 2);
        let c = check_b_martingale(&p, 1).unwrap();
        assert_eq!(c, MartingaleCheck { b: 2, b_k: 3, b_k_plus_m: 1 });
        assert!(c.holds());
        assert!(b_invariant(&Partition::singletons(4)).is_err());
    }

    #[test]
    fn martingale_small() {
        for m in 1..=4 {
            for p in enumerate_nc(2 * m).unwrap().into_iter().filter(|p| p.all_blocks_even()) {
                for k in 1..=2 * m as i64 {
                    assert!(check_b_martingale(&p, k).unwrap().holds(), "{p} k={k}");
                }
            }
        }
    }

    #[test]
    fn mu_at_sigma() {
        let g = GridShape::new(3, 3).unwrap();
        for l in 0..=3 {
            let mu = mu_exponents(&sigma(g, l).unwrap(), g).unwrap();
            for (j, v) in mu.iter().enumerate() {
                let want = if j == l { BigRational::one() } else { BigRational::zero() };
                assert_eq!(*v, want);
            }
        }
        let g1 = GridShape::new(2, 1).unwrap();
        assert_eq!(mu_exponents(&sigma(g1, 0).unwrap(), g1), Err(Error::SingleMoment));
    }

    #[test]
    fn absorption_of_terminal_and_identity() {
        let g = GridShape::new(2, 2).unwrap();
        let t = sigma(g, 1).unwrap();
        let probs = absorption_probabilities(&t, g, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(probs.len(), 1);
        assert_eq!(probs[&TerminalKind::Sigma(1)], BigRational::one());
        for p in enumerate_ncstar(g).unwrap() {
            let probs = absorption_probabilities(&p, g, DEFAULT_STATE_CAP).unwrap();
            let total: BigRational = probs.values().cloned().sum();
            assert_eq!(total, BigRational::one());
            let prof = class_b_profile(&p, g).unwrap();
            for l in 0..=g.d {
                let lam: BigRational = probs
                    .iter()
                    .filter(|(k, _)| k.level() == l)
                    .map(|(_, v)| v.clone())
                    .sum();
                let lhs = lam * BigRational::from_integer(BigInt::from(g.m - 1));
                let rhs = BigRational::from_integer(BigInt::from(prof[l + 1] as i64 - prof[l] as i64));
                assert_eq!(lhs, rhs, "{p} l={l}");
            }
        }
    }

    #[test]
    fn absorption_cap() {
        let g = GridShape::new(1, 3).unwrap();
        let p = part("1,2,3,4|5,6", 6);
        assert!(matches!(
            absorption_probabilities(&p, g, 1),
            Err(Error::CapExceeded { .. })
        ));
    }
}
