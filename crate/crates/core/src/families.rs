//! The grid families `NC*(d,m)`, `NC*_2(d,m)`, `NC(d,m)` and the interval
//! pairings, the chain map, the pairing split `Q`, fibers and counts.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::{
    elements_of, enumerate_nc, is_noncrossing, is_refinement, phi_collapse, restrict, visit_noncrossing,
    BlockRule, Partition,
};
use crate::symmetrize::GridShape;

/// Default cap on `2dm` for the `NC*` enumerators.
pub const NCSTAR_CAP: usize = 24;
/// Default cap on `2dm` for the `NC(d,m)` enumerators.
pub const NCDM_CAP: usize = 20;

fn check_ground(p: &Partition, g: GridShape) -> Result<()> {
    if p.ground_size() != g.ground_size() {
        return Err(Error::GroundMismatch(p.ground_size(), g.ground_size()));
    }
    Ok(())
}

fn opposite_parity(g: GridShape, i: usize, j: usize) -> bool {
    (g.interval_of(i) + g.interval_of(j)) % 2 == 1
}

/// Even blocks, no crossing, and consecutive block elements in intervals
/// of opposite parity.
pub fn is_ncstar(p: &Partition, g: GridShape) -> Result<bool> {
    check_ground(p, g)?;
    if !p.all_blocks_even() || !is_noncrossing(p) {
        return Ok(false);
    }
    Ok(p.block_masks().iter().all(|&b| {
        let e: Vec<usize> = elements_of(b).collect();
        e.windows(2).all(|w| opposite_parity(g, w[0], w[1]))
    }))
}

/// Even blocks, no crossing, and every block inside one label class.
pub fn is_ncstar_by_labels(p: &Partition, g: GridShape) -> Result<bool> {
    check_ground(p, g)?;
    if !p.all_blocks_even() || !is_noncrossing(p) {
        return Ok(false);
    }
    Ok(p.block_masks().iter().all(|&b| {
        let mut it = elements_of(b);
        let first = g.label(it.next().unwrap());
        it.all(|e| g.label(e) == first)
    }))
}

pub fn is_ncstar2(p: &Partition, g: GridShape) -> Result<bool> {
    Ok(p.is_pairing() && is_ncstar(p, g)?)
}

/// Even blocks, no crossing, and no block meets an interval `J_k` twice.
pub fn is_ncdm(p: &Partition, g: GridShape) -> Result<bool> {
    check_ground(p, g)?;
    if !p.all_blocks_even() || !is_noncrossing(p) {
        return Ok(false);
    }
    Ok(p.block_masks().iter().all(|&b| {
        let e: Vec<usize> = elements_of(b).collect();
        e.windows(2).all(|w| g.interval_of(w[0]) != g.interval_of(w[1]))
    }))
}

pub fn is_interval_pairing(p: &Partition, g: GridShape) -> Result<bool> {
    Ok(p.is_pairing() && is_ncdm(p, g)?)
}

struct StarRule {
    g: GridShape,
    pairs_only: bool,
}

impl BlockRule for StarRule {
    fn can_extend(&self, block: &[usize], next: usize) -> bool {
        (!self.pairs_only || block.len() == 1) && opposite_parity(self.g, *block.last().unwrap(), next)
    }
    fn can_close(&self, block: &[usize]) -> bool {
        if self.pairs_only {
            block.len() == 2
        } else {
            block.len().is_multiple_of(2)
        }
    }
    fn even_gaps(&self) -> bool {
        true
    }
}

/// Blocks of even size never meeting an interval twice; intervals are
/// given as one id per position (`ids[i - 1]` for position `i`) and must be
/// contiguous.
struct IntervalRule<'a> {
    ids: &'a [usize],
    pairs_only: bool,
    even: bool,
}

impl BlockRule for IntervalRule<'_> {
    fn can_extend(&self, block: &[usize], next: usize) -> bool {
        (!self.pairs_only || block.len() == 1) && self.ids[block.last().unwrap() - 1] != self.ids[next - 1]
    }
    fn can_close(&self, block: &[usize]) -> bool {
        if self.pairs_only {
            block.len() == 2
        } else {
            !self.even || block.len().is_multiple_of(2)
        }
    }
    fn even_gaps(&self) -> bool {
        self.even
    }
}

fn check_cap(g: GridShape, cap: usize) -> Result<()> {
    if g.ground_size() > cap {
        return Err(Error::CapExceeded {
            size: g.ground_size(),
            cap,
        });
    }
    Ok(())
}

fn collect<R: BlockRule>(n: usize, rule: &R) -> Vec<Partition> {
    let mut out = Vec::new();
    visit_noncrossing(n, rule, |p| out.push(p.clone()));
    out
}

pub fn visit_ncstar<F: FnMut(&Partition)>(g: GridShape, cap: usize, f: F) -> Result<()> {
    check_cap(g, cap)?;
    visit_noncrossing(g.ground_size(), &StarRule { g, pairs_only: false }, f);
    Ok(())
}

pub fn enumerate_ncstar(g: GridShape) -> Result<Vec<Partition>> {
    enumerate_ncstar_capped(g, NCSTAR_CAP)
}

pub fn enumerate_ncstar_capped(g: GridShape, cap: usize) -> Result<Vec<Partition>> {
    check_cap(g, cap)?;
    Ok(collect(g.ground_size(), &StarRule { g, pairs_only: false }))
}

pub fn enumerate_ncstar2(g: GridShape) -> Result<Vec<Partition>> {
    check_cap(g, NCSTAR_CAP)?;
    Ok(collect(g.ground_size(), &StarRule { g, pairs_only: true }))
}

fn grid_ids(g: GridShape) -> Vec<usize> {
    (1..=g.ground_size()).map(|p| g.interval_of(p)).collect()
}

pub fn enumerate_ncdm(g: GridShape) -> Result<Vec<Partition>> {
    enumerate_ncdm_capped(g, NCDM_CAP)
}

pub fn enumerate_ncdm_capped(g: GridShape, cap: usize) -> Result<Vec<Partition>> {
    check_cap(g, cap)?;
    let ids = grid_ids(g);
    Ok(collect(g.ground_size(), &IntervalRule { ids: &ids, pairs_only: false, even: true }))
}

pub fn enumerate_interval_pairings(g: GridShape) -> Result<Vec<Partition>> {
    check_cap(g, NCDM_CAP)?;
    let ids = grid_ids(g);
    Ok(collect(g.ground_size(), &IntervalRule { ids: &ids, pairs_only: true, even: true }))
}

/// A chain `σ_1 ≥ ... ≥ σ_d` in `NC(m)`: each partition refines its predecessor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChainOfPartitions {
    pub m: usize,
    pub chain: Vec<Partition>,
}

impl ChainOfPartitions {
    pub fn is_nondecreasing(&self) -> bool {
        self.chain.iter().all(|s| s.ground_size() == self.m && is_noncrossing(s))
            && self
                .chain
                .windows(2)
                .all(|w| is_refinement(&w[1], &w[0]).unwrap_or(false))
    }

    /// `s_l = |σ_{l+1}| - |σ_l|` with `|σ_0| = 1`, `|σ_{d+1}| = m`.
    pub fn rank_vector(&self) -> RankVector {
        let mut sizes = vec![1usize];
        sizes.extend(self.chain.iter().map(|s| s.num_blocks()));
        sizes.push(self.m);
        RankVector(sizes.windows(2).map(|w| w[1] as i64 - w[0] as i64).collect())
    }
}

/// Rank increments `s_0, ..., s_d` of a chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankVector(pub Vec<i64>);

impl RankVector {
    pub fn validate(&self, m: usize) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::RankVector("empty".into()));
        }
        if self.0.iter().any(|&s| s < 0) {
            return Err(Error::RankVector(format!("negative entry in {:?}", self.0)));
        }
        let total: i64 = self.0.iter().sum();
        if total != m as i64 - 1 {
            return Err(Error::RankVector(format!(
                "entries of {:?} sum to {total}, expected {}",
                self.0,
                m as i64 - 1
            )));
        }
        Ok(())
    }
}

/// `𝒫(p) = (Φ(p|A_1), ..., Φ(p|A_d))`.
pub fn map_chain(p: &Partition, g: GridShape) -> Result<ChainOfPartitions> {
    if !is_ncstar(p, g)? {
        return Err(Error::NotInFamily(format!("{p} is not in NC*({},{})", g.d, g.m)));
    }
    let chain = (1..=g.d)
        .map(|i| phi_collapse(&restrict(p, &g.class(i))?))
        .collect::<Result<Vec<_>>>()?;
    Ok(ChainOfPartitions { m: g.m, chain })
}

/// Splits each block `k_1 < ... < k_{2p}` into `{k_1,k_2}, ..., {k_{2p-1},k_{2p}}`.
pub fn map_q(p: &Partition) -> Result<Partition> {
    if !p.all_blocks_even() {
        return Err(Error::NotInFamily(format!("{p} has an odd block")));
    }
    let mut blocks = Vec::new();
    for &b in p.block_masks() {
        let e: Vec<usize> = elements_of(b).collect();
        for pair in e.chunks(2) {
            blocks.push((1u64 << (pair[0] - 1)) | (1u64 << (pair[1] - 1)));
        }
    }
    Ok(Partition::from_masks(p.ground_size(), blocks))
}

/// Statistics of a chain fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainFiber {
    pub size: usize,
    pub min_pair_blocks: usize,
    pub max_block_size: usize,
    pub all_coarser: bool,
}

/// Groups `NC*(d,m)` by chain image.
pub fn chain_fibers(g: GridShape) -> Result<HashMap<ChainOfPartitions, Vec<Partition>>> {
    let mut out: HashMap<ChainOfPartitions, Vec<Partition>> = HashMap::new();
    for p in enumerate_ncstar(g)? {
        out.entry(map_chain(&p, g)?).or_default().push(p);
    }
    Ok(out)
}

fn fiber_stats(s: &Partition, members: &[Partition]) -> ChainFiber {
    ChainFiber {
        size: members.len(),
        min_pair_blocks: members.iter().map(|p| p.count_blocks_of_size(2)).min().unwrap_or(0),
        max_block_size: members.iter().map(|p| p.max_block_size()).max().unwrap_or(0),
        all_coarser: members.iter().all(|p| is_refinement(s, p).unwrap_or(false)),
    }
}

/// Fiber of `s ∈ NC*_2(d,m)` under the chain map.
pub fn fiber_size_chain(s: &Partition, g: GridShape) -> Result<ChainFiber> {
    let fibers = chain_fibers(g)?;
    fiber_size_chain_in(s, g, &fibers)
}

pub fn fiber_size_chain_in(
    s: &Partition,
    g: GridShape,
    fibers: &HashMap<ChainOfPartitions, Vec<Partition>>,
) -> Result<ChainFiber> {
    if !is_ncstar2(s, g)? {
        return Err(Error::NotInFamily(format!("{s} is not in NC*_2({},{})", g.d, g.m)));
    }
    let chain = map_chain(s, g)?;
    Ok(fiber_stats(s, fibers.get(&chain).map(|v| v.as_slice()).unwrap_or(&[])))
}

/// Statistics of a `Q` fiber.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QFiber {
    pub size: usize,
    pub max_non_pair_elements: usize,
}

/// Interval ids per position for contiguous intervals `[lo_j, hi_j]` covering `[n]`.
pub fn interval_ids(n: usize, intervals: &[(usize, usize)]) -> Result<Vec<usize>> {
    let mut ids = vec![0usize; n];
    let mut next = 1;
    for (j, &(lo, hi)) in intervals.iter().enumerate() {
        if lo != next || hi < lo || hi > n {
            return Err(Error::InvalidSubset(format!(
                "intervals must tile [1..{n}] in order; bad interval {j}: [{lo},{hi}]"
            )));
        }
        for id in ids.iter_mut().take(hi).skip(lo - 1) {
            *id = j + 1;
        }
        next = hi + 1;
    }
    if next != n + 1 {
        return Err(Error::InvalidSubset(format!("intervals do not cover [1..{n}]")));
    }
    Ok(ids)
}

/// Even-block non-crossing partitions never joining two points of the same
/// interval, for an arbitrary tiling of `[n]`.
pub fn enumerate_interval_avoiding(n: usize, intervals: &[(usize, usize)]) -> Result<Vec<Partition>> {
    let ids = interval_ids(n, intervals)?;
    Ok(collect(n, &IntervalRule { ids: &ids, pairs_only: false, even: true }))
}

/// Number of interval-avoiding even-block `π` with `Q(π) = s`.
pub fn fiber_size_q(s: &Partition, intervals: &[(usize, usize)]) -> Result<QFiber> {
    let n = s.ground_size();
    let ids = interval_ids(n, intervals)?;
    if !s.is_pairing() || !is_noncrossing(s) {
        return Err(Error::NotInFamily(format!("{s} is not a non-crossing pairing")));
    }
    if s.block_masks().iter().any(|&b| {
        let e: Vec<usize> = elements_of(b).collect();
        ids[e[0] - 1] == ids[e[1] - 1]
    }) {
        return Err(Error::NotInFamily(format!("{s} joins two points of one interval")));
    }
    let mut size = 0;
    let mut worst = 0;
    visit_noncrossing(n, &IntervalRule { ids: &ids, pairs_only: false, even: true }, |p| {
        if is_refinement(s, p).unwrap_or(false) && map_q(p).as_ref() == Ok(s) {
            size += 1;
            let non_pair: usize = p.block_sizes().filter(|&b| b != 2).sum();
            worst = worst.max(non_pair);
        }
    });
    Ok(QFiber {
        size,
        max_non_pair_elements: worst,
    })
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn catalan(n: u64) -> BigUint {
    binomial(2 * n, n) / BigUint::from(n + 1)
}

/// `(1/m) C(m(d+1), m-1)`.
pub fn fuss_catalan(d: usize, m: usize) -> BigUint {
    let (d, m) = (d as u64, m as u64);
    binomial(m * (d + 1), m - 1) / BigUint::from(m)
}

/// `(1/m) Π_l C(m, s_l)`.
pub fn chain_count_by_ranks(m: usize, s: &RankVector) -> Result<BigUint> {
    s.validate(m)?;
    let prod = s
        .0
        .iter()
        .fold(BigUint::one(), |acc, &sl| acc * binomial(m as u64, sl as u64));
    let (q, r) = prod.div_rem(&BigUint::from(m));
    if !r.is_zero() {
        return Err(Error::Numeric(format!("rank product not divisible by m={m}")));
    }
    Ok(q)
}

/// All rank vectors of length `d + 1` summing to `m - 1`.
pub fn rank_vectors(m: usize, d: usize) -> Vec<RankVector> {
    fn rec(left: i64, slots: usize, cur: &mut Vec<i64>, out: &mut Vec<RankVector>) {
        if slots == 1 {
            cur.push(left);
            out.push(RankVector(cur.clone()));
            cur.pop();
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(left - v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m as i64 - 1, d + 1, &mut Vec::new(), &mut out);
    out
}

/// Tally of chains of length `d` in `NC(m)` by rank vector, by direct
/// enumeration over the refinement order.
pub fn chains_by_rank_vector(m: usize, d: usize) -> Result<HashMap<RankVector, u64>> {
    let ncm = enumerate_nc(m)?;
    let below: Vec<Vec<usize>> = ncm
        .iter()
        .map(|coarse| {
            (0..ncm.len())
                .filter(|&j| is_refinement(&ncm[j], coarse).unwrap())
                .collect()
        })
        .collect();
    let mut out = HashMap::new();
    let mut path: Vec<usize> = Vec::new();
    fn rec(
        d: usize,
        m: usize,
        ncm: &[Partition],
        below: &[Vec<usize>],
        path: &mut Vec<usize>,
        out: &mut HashMap<RankVector, u64>,
    ) {
        if path.len() == d {
            let chain = ChainOfPartitions {
                m,
                chain: path.iter().map(|&i| ncm[i].clone()).collect(),
            };
            *out.entry(chain.rank_vector()).or_insert(0) += 1;
            return;
        }
        let choices: Vec<usize> = match path.last() {
            None => (0..ncm.len()).collect(),
            Some(&last) => below[last].clone(),
        };
        for c in choices {
            path.push(c);
            rec(d, m, ncm, below, path, out);
            path.pop();
        }
    }
    rec(d, m, &ncm, &below, &mut path, &mut out);
    Ok(out)
}

/// Coefficients of the Chebyshev polynomial `T_d`, `T_0 = 1`, `T_1 = x`,
/// `T_{d+1} = x T_d - T_{d-1}`.
pub fn chebyshev_coefficients(d: usize) -> Vec<BigInt> {
    let mut prev = vec![BigInt::one()];
    if d == 0 {
        return prev;
    }
    let mut cur = vec![BigInt::zero(), BigInt::one()];
    for _ in 1..d {
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `τ(T_d(s)^{2m})` for a standard semicircular `s`.
pub fn chebyshev_pair_count(d: usize, m: usize) -> BigUint {
    let t = chebyshev_coefficients(d);
    let mut pow = vec![BigInt::one()];
    for _ in 0..2 * m {
        pow = poly_mul(&pow, &t);
    }
    let total: BigInt = pow
        .iter()
        .enumerate()
        .filter(|(k, _)| k % 2 == 0)
        .map(|(k, c)| c * BigInt::from(catalan(k as u64 / 2)))
        .sum();
    total.to_biguint().expect("moment count is nonnegative")
}

/// `(4d + 4)^{2m}` as a big integer.
pub fn ncdm_size_bound(d: usize, m: usize) -> BigUint {
    BigUint::from(4 * d as u64 + 4).pow(2 * m as u32)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetrize::{sigma, sigma_tilde};

    fn g(d: usize, m: usize) -> GridShape {
        GridShape::new(d, m).unwrap()
    }

    #[test]
    fn membership_examples() {
        let gg = g(1, 2);
        assert!(is_ncstar(&Partition::parse("1,2|3,4", 4).unwrap(), gg).unwrap());
        assert!(is_ncstar(&Partition::c_pairs(2), gg).unwrap());
        assert!(!is_ncstar(&Partition::parse("1,3|2,4", 4).unwrap(), gg).unwrap());
        assert!(is_ncstar(&Partition::one_block(4), gg).unwrap());
        assert!(is_ncstar(&Partition::one_block(4), g(2, 1)).is_ok());
        assert!(!is_ncstar(&Partition::one_block(4), g(2, 1)).unwrap());
        assert!(is_ncstar(&Partition::one_block(4), g(1, 3)).is_err());
    }

    #[test]
    fn label_characterization() {
        for d in 1..=3 {
            for m in 1..=2 {
                let gg = g(d, m);
                if gg.ground_size() > 12 {
                    continue;
                }
                for p in enumerate_nc(gg.ground_size()).unwrap() {
                    assert_eq!(is_ncstar(&p, gg).unwrap(), is_ncstar_by_labels(&p, gg).unwrap(), "{p}");
                }
            }
        }
    }

    #[test]
    fn enumerators_match_filters() {
        for (d, m) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1), (3, 2), (2, 3), (1, 6)] {
            let gg = g(d, m);
            let all = enumerate_nc(gg.ground_size()).unwrap();
            let mut expect: Vec<_> = all.iter().filter(|p| is_ncstar(p, gg).unwrap()).cloned().collect();
            let mut got = enumerate_ncstar(gg).unwrap();
            expect.sort();
            got.sort();
            assert_eq!(got, expect, "NC* d={d} m={m}");
            let mut expect: Vec<_> = all.iter().filter(|p| is_ncdm(p, gg).unwrap()).cloned().collect();
            let mut got = enumerate_ncdm(gg).unwrap();
            expect.sort();
            got.sort();
            assert_eq!(got, expect, "NC(d,m) d={d} m={m}");
            let mut s2 = enumerate_ncstar2(gg).unwrap();
            let mut expect: Vec<_> = expect_pairs(&all, gg, true);
            s2.sort();
            expect.sort();
            assert_eq!(s2, expect);
            let mut ip = enumerate_interval_pairings(gg).unwrap();
            let mut expect = expect_pairs(&all, gg, false);
            ip.sort();
            expect.sort();
            assert_eq!(ip, expect);
        }
    }

    fn expect_pairs(all: &[Partition], gg: GridShape, star: bool) -> Vec<Partition> {
        all.iter()
            .filter(|p| {
                if star {
                    is_ncstar2(p, gg).unwrap()
                } else {
                    is_interval_pairing(p, gg).unwrap()
                }
            })
            .cloned()
            .collect()
    }

    #[test]
    fn fuss_catalan_counts() {
        assert_eq!(enumerate_ncstar2(g(2, 2)).unwrap().len(), 3);
        for d in 1..=3 {
            for m in 1..=3 {
                assert_eq!(
                    BigUint::from(enumerate_ncstar2(g(d, m)).unwrap().len()),
                    fuss_catalan(d, m)
                );
            }
        }
    }

    #[test]
    fn chebyshev_counts() {
        assert_eq!(chebyshev_pair_count(1, 2), BigUint::from(2u32));
        assert_eq!(chebyshev_pair_count(2, 1), BigUint::from(1u32));
        for m in 1..=6 {
            assert_eq!(chebyshev_pair_count(1, m), catalan(m as u64));
        }
        for d in 1..=3 {
            for m in 1..=3 {
                let c = chebyshev_pair_count(d, m);
                assert_eq!(BigUint::from(enumerate_interval_pairings(g(d, m)).unwrap().len()), c);
                assert!(c <= BigUint::from(d as u64 + 1).pow(2 * m as u32));
            }
        }
        assert_eq!(
            chebyshev_coefficients(3),
            vec![BigInt::zero(), BigInt::from(-2), BigInt::zero(), BigInt::one()]
        );
    }

    #[test]
    fn chain_examples() {
        for d in 1..=3 {
            for m in 1..=3 {
                let gg = g(d, m);
                for l in 0..=d {
                    let c = map_chain(&sigma(gg, l).unwrap(), gg).unwrap();
                    for (i, s) in c.chain.iter().enumerate() {
                        let want = if i < l { Partition::one_block(m) } else { Partition::singletons(m) };
                        assert_eq!(*s, want);
                    }
                }
                for p in enumerate_ncstar(gg).unwrap() {
                    assert!(map_chain(&p, gg).unwrap().is_nondecreasing());
                }
            }
        }
        assert!(map_chain(&Partition::one_block(4), g(2, 1)).is_err());
        let _ = sigma_tilde(g(1, 1), 1);
    }

    #[test]
    fn chain_bijection_on_pairings() {
        for d in 1..=3 {
            for m in 1..=3 {
                let gg = g(d, m);
                let mut images: Vec<_> = enumerate_ncstar2(gg)
                    .unwrap()
                    .iter()
                    .map(|s| map_chain(s, gg).unwrap())
                    .collect();
                let n = images.len();
                images.sort();
                images.dedup();
                assert_eq!(images.len(), n);
            }
        }
    }

    #[test]
    fn rank_counts() {
        assert_eq!(rank_vectors(1, 3), vec![RankVector(vec![0, 0, 0, 0])]);
        assert_eq!(chain_count_by_ranks(1, &RankVector(vec![0, 0])).unwrap(), BigUint::one());
        for d in 1..=4 {
            let total: BigUint = rank_vectors(2, d)
                .iter()
                .map(|s| chain_count_by_ranks(2, s).unwrap())
                .sum();
            assert_eq!(total, BigUint::from(d as u64 + 1));
        }
        for m in 1..=4 {
            for d in 1..=4 {
                let tally = chains_by_rank_vector(m, d).unwrap();
                let mut total = BigUint::zero();
                for s in rank_vectors(m, d) {
                    let c = chain_count_by_ranks(m, &s).unwrap();
                    assert_eq!(c, BigUint::from(*tally.get(&s).unwrap_or(&0)), "m={m} d={d} {s:?}");
                    total += c;
                }
                assert_eq!(total, fuss_catalan(d, m));
            }
        }
        assert!(chain_count_by_ranks(3, &RankVector(vec![1, 0])).is_err());
        assert!(chain_count_by_ranks(3, &RankVector(vec![3, -1])).is_err());
    }

    #[test]
    fn q_examples() {
        assert_eq!(map_q(&Partition::one_block(4)).unwrap(), Partition::r_pairs(2));
        let p = Partition::parse("1,4|2,3", 4).unwrap();
        assert_eq!(map_q(&p).unwrap(), p);
        assert!(map_q(&Partition::one_block(3)).is_err());
        for n in [2, 4, 6, 8] {
            for p in enumerate_nc(n).unwrap().into_iter().filter(|p| p.all_blocks_even()) {
                let q = map_q(&p).unwrap();
                assert!(q.is_pairing() && is_noncrossing(&q));
                assert!(is_refinement(&q, &p).unwrap());
            }
        }
    }

    #[test]
    fn chain_fiber_basics() {
        let gg = g(1, 1);
        let f = fiber_size_chain(&Partition::one_block(2), gg).unwrap();
        assert_eq!(f.size, 1);
        assert!(fiber_size_chain(&Partition::one_block(4), g(1, 2)).is_err());
    }

    #[test]
    fn q_fiber_basics() {
        let s = Partition::parse("1,4|2,3", 4).unwrap();
        assert_eq!(fiber_size_q(&s, &[(1, 2), (3, 4)]).unwrap().size, 1);
        let s = Partition::parse("1,2", 2).unwrap();
        assert_eq!(fiber_size_q(&s, &[(1, 1), (2, 2)]).unwrap().size, 1);
        assert!(fiber_size_q(&s, &[(1, 2)]).is_err());
        assert!(fiber_size_q(&s, &[(1, 1)]).is_err());
    }
}
