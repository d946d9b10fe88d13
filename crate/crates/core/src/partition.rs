//! Set partitions of a cyclic ground set `[n] = {1, ..., n}`.
//!
//! A [`Partition`] is stored canonically: one bitmask per block, blocks
//! ordered by their minimum element. Ground sets are limited to 64 elements.
//! Positions in the public API are 1-based; position `0` (and any other
//! out-of-range integer) is reduced cyclically through [`CyclicIndex`].

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 64;

/// Default cap for [`enumerate_nc`].
pub const DEFAULT_NC_CAP: usize = 14;

/// A position of the cyclic ground set `[n] ≅ Z/nZ`, kept in `1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicIndex {
    value: usize,
    n: usize,
}

impl CyclicIndex {
    pub fn new(value: i64, n: usize) -> Self {
        assert!(n > 0, "cyclic index over an empty ground set");
        let r = value.rem_euclid(n as i64) as usize;
        CyclicIndex {
            value: if r == 0 { n } else { r },
            n,
        }
    }

    pub fn get(self) -> usize {
        self.value
    }

    pub fn modulus(self) -> usize {
        self.n
    }

    pub fn offset(self, delta: i64) -> Self {
        CyclicIndex::new(self.value as i64 + delta, self.n)
    }
}

#[inline]
fn wrap(value: i64, n: usize) -> usize {
    CyclicIndex::new(value, n).get()
}

#[inline]
fn bit(i: usize) -> u64 {
    1u64 << (i - 1)
}

fn mask_elements(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let t = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(t + 1)
        }
    })
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A partition of `[n]` in canonical block form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<u64>,
    labels: Vec<u8>,
}

impl Partition {
    fn from_masks_unchecked(n: usize, mut blocks: Vec<u64>) -> Self {
        blocks.retain(|&b| b != 0);
        blocks.sort_unstable_by_key(|b| b.trailing_zeros());
        let mut labels = vec![0u8; n];
        for (idx, &b) in blocks.iter().enumerate() {
            for e in mask_elements(b) {
                labels[e - 1] = idx as u8;
            }
        }
        Partition { n, blocks, labels }
    }

    /// Builds a partition from arbitrary per-element labels; equal labels
    /// share a block. `labels[i]` is the label of element `i + 1`.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(labels: &[L]) -> Self {
        let n = labels.len();
        assert!(n > 0 && n <= MAX_GROUND, "ground size {n} unsupported");
        let mut seen: std::collections::HashMap<L, usize> = std::collections::HashMap::new();
        let mut blocks: Vec<u64> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            let idx = *seen.entry(*l).or_insert_with(|| {
                blocks.push(0);
                blocks.len() - 1
            });
            blocks[idx] |= bit(i + 1);
        }
        Self::from_masks_unchecked(n, blocks)
    }

    /// Builds a partition from explicit blocks of 1-based elements.
    pub fn from_blocks<B: AsRef<[usize]>>(n: usize, blocks: &[B]) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundSize {
                got: n,
                expected: format!("1..={MAX_GROUND}"),
            });
        }
        let mut seen = 0u64;
        let mut masks = Vec::with_capacity(blocks.len());
        for b in blocks {
            let b = b.as_ref();
            if b.is_empty() {
                return Err(Error::Parse("empty block".into()));
            }
            let mut mask = 0u64;
            for &e in b {
                if e == 0 || e > n {
                    return Err(Error::OutOfRange { element: e, n });
                }
                if seen & bit(e) != 0 {
                    return Err(Error::DuplicateElement { element: e });
                }
                seen |= bit(e);
                mask |= bit(e);
            }
            masks.push(mask);
        }
        if seen != full_mask(n) {
            let missing = (1..=n).find(|&e| seen & bit(e) == 0).unwrap();
            return Err(Error::MissingElement { element: missing, n });
        }
        Ok(Self::from_masks_unchecked(n, masks))
    }

    /// Smallest partition in which every listed pair is related.
    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(n: usize, pairs: I) -> Self {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        for (i, j) in pairs {
            let (a, b) = (find(&mut parent, i - 1), find(&mut parent, j - 1));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let labels: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        Self::from_labels(&labels)
    }

    /// `0_n`: all singletons.
    pub fn singletons(n: usize) -> Self {
        Self::from_masks_unchecked(n, (1..=n).map(bit).collect())
    }

    /// `1_n`: a single block.
    pub fn one_block(n: usize) -> Self {
        Self::from_masks_unchecked(n, vec![full_mask(n)])
    }

    /// `r_m = {{2j-1, 2j}}` on `[2m]`.
    pub fn r_pairs(m: usize) -> Self {
        Self::from_masks_unchecked(2 * m, (1..=m).map(|j| bit(2 * j - 1) | bit(2 * j)).collect())
    }

    /// `c_m = {{2j, 2j+1}}` on `[2m]`, with `2m + 1 ≡ 1`.
    pub fn c_pairs(m: usize) -> Self {
        let n = 2 * m;
        Self::from_masks_unchecked(
            n,
            (1..=m)
                .map(|j| bit(2 * j) | bit(wrap(2 * j as i64 + 1, n)))
                .collect(),
        )
    }

    /// Parses the block syntax `1,3,12|2,4,8,10|5,7|6|9,11`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut blocks = Vec::new();
        for chunk in text.trim().split('|') {
            let mut block = Vec::new();
            for tok in chunk.split(',') {
                let tok = tok.trim();
                let e: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad element {tok:?}")))?;
                block.push(e);
            }
            blocks.push(block);
        }
        Self::from_blocks(n, &blocks)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_masks(&self) -> &[u64] {
        &self.blocks
    }

    /// Blocks as ascending element lists, ordered by minimum element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        self.blocks
            .iter()
            .map(|&b| mask_elements(b).collect())
            .collect()
    }

    pub fn block_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().map(|b| b.count_ones() as usize)
    }

    /// 0-based index of the block holding element `i`.
    #[inline]
    pub fn block_index(&self, i: usize) -> usize {
        self.labels[i - 1] as usize
    }

    /// Block index per element; `labels()[i]` belongs to element `i + 1`.
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    #[inline]
    pub fn block_mask_of(&self, i: usize) -> u64 {
        self.blocks[self.block_index(i)]
    }

    #[inline]
    pub fn related(&self, i: usize, j: usize) -> bool {
        self.labels[i - 1] == self.labels[j - 1]
    }

    pub fn all_blocks_even(&self) -> bool {
        self.block_sizes().all(|s| s % 2 == 0)
    }

    pub fn is_pairing(&self) -> bool {
        self.block_sizes().all(|s| s == 2)
    }

    pub fn count_blocks_of_size(&self, size: usize) -> usize {
        self.block_sizes().filter(|&s| s == size).count()
    }

    pub fn max_block_size(&self) -> usize {
        self.block_sizes().max().unwrap_or(0)
    }

    pub(crate) fn from_masks(n: usize, blocks: Vec<u64>) -> Self {
        debug_assert_eq!(blocks.iter().fold(0, |acc, b| acc | b), full_mask(n));
        Self::from_masks_unchecked(n, blocks)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (bi, &b) in self.blocks.iter().enumerate() {
            if bi > 0 {
                f.write_str("|")?;
            }
            for (k, e) in mask_elements(b).enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition[{}]({})", self.n, self)
    }
}

/// True iff no `i < j < k < l` has `i ~ k`, `j ~ l` and `i ≁ j`.
pub fn is_noncrossing(p: &Partition) -> bool {
    for (bi, &b) in p.blocks.iter().enumerate() {
        let elems: Vec<usize> = mask_elements(b).collect();
        for w in elems.windows(2) {
            if w[1] == w[0] + 1 {
                continue;
            }
            let between = full_mask(w[1] - 1) & !full_mask(w[0]);
            for (ci, &c) in p.blocks.iter().enumerate() {
                if ci != bi && c & between != 0 && c & !between != 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// True iff every block of `fine` lies inside a block of `coarse`.
pub fn is_refinement(fine: &Partition, coarse: &Partition) -> Result<bool> {
    if fine.n != coarse.n {
        return Err(Error::GroundMismatch(fine.n, coarse.n));
    }
    Ok(fine.blocks.iter().all(|&b| {
        let first = b.trailing_zeros() as usize + 1;
        b & !coarse.block_mask_of(first) == 0
    }))
}

/// Restriction to an increasing list of positions, relabelled `1..=|subset|`.
pub fn restrict(p: &Partition, subset: &[usize]) -> Result<Partition> {
    if subset.is_empty() {
        return Err(Error::InvalidSubset("empty subset".into()));
    }
    for (k, &e) in subset.iter().enumerate() {
        if e == 0 || e > p.n {
            return Err(Error::OutOfRange { element: e, n: p.n });
        }
        if k > 0 && subset[k - 1] >= e {
            return Err(Error::InvalidSubset(format!(
                "positions must be strictly increasing ({} then {e})",
                subset[k - 1]
            )));
        }
    }
    let labels: Vec<u8> = subset.iter().map(|&e| p.labels[e - 1]).collect();
    Ok(Partition::from_labels(&labels))
}

/// The collapse map: identifies `2k-1` and `2k` into `k`.
pub fn phi_collapse(p: &Partition) -> Result<Partition> {
    if !p.n.is_multiple_of(2) {
        return Err(Error::GroundSize {
            got: p.n,
            expected: "an even ground size".into(),
        });
    }
    let m = p.n / 2;
    let pairs = p.blocks.iter().flat_map(|&b| {
        let elems: Vec<usize> = mask_elements(b).map(|e| e.div_ceil(2)).collect();
        let first = elems[0];
        elems.into_iter().map(move |k| (first, k))
    });
    let pairs: Vec<(usize, usize)> = pairs.chain((1..=m).map(|k| (k, k))).collect();
    Ok(Partition::from_pairs(m, pairs))
}

/// Number of `k` with `k ~ k+1`; the cyclic variant also counts `n ~ 1`.
pub fn count_adjacent_pairs(p: &Partition, cyclic: bool) -> usize {
    let n = p.n;
    let linear = (1..n).filter(|&k| p.related(k, k + 1)).count();
    if cyclic && n > 1 && p.related(n, 1) {
        linear + 1
    } else if cyclic && n == 1 {
        // the single element is its own cyclic successor
        1
    } else {
        linear
    }
}

/// Rule constraining which blocks the non-crossing generator may build.
///
/// Blocks are grown in increasing order of their elements, so `block` is
/// always sorted and `next` exceeds its last element.
pub trait BlockRule {
    fn can_extend(&self, block: &[usize], next: usize) -> bool;
    fn can_close(&self, block: &[usize]) -> bool;
    /// If set, only gaps of even length are left between block elements,
    /// which is necessary when every block must have even size.
    fn even_gaps(&self) -> bool {
        false
    }
}

/// Accepts every block.
pub struct AnyBlock;

impl BlockRule for AnyBlock {
    fn can_extend(&self, _: &[usize], _: usize) -> bool {
        true
    }
    fn can_close(&self, _: &[usize]) -> bool {
        true
    }
}

/// Even-sized blocks only.
pub struct EvenBlocks;

impl BlockRule for EvenBlocks {
    fn can_extend(&self, _: &[usize], _: usize) -> bool {
        true
    }
    fn can_close(&self, block: &[usize]) -> bool {
        block.len().is_multiple_of(2)
    }
    fn even_gaps(&self) -> bool {
        true
    }
}

struct Generator<'a, R: BlockRule, F: FnMut(&Partition)> {
    rule: &'a R,
    labels: Vec<u8>,
    next_label: u8,
    emit: F,
}

impl<R: BlockRule, F: FnMut(&Partition)> Generator<'_, R, F> {
    fn run(&mut self, pending: &mut Vec<(usize, usize)>) {
        let Some((lo, hi)) = pending.pop() else {
            let p = Partition::from_labels(&self.labels);
            (self.emit)(&p);
            return;
        };
        let label = self.next_label;
        self.next_label += 1;
        let mut block = vec![lo];
        self.grow(&mut block, hi, label, pending);
        self.next_label -= 1;
        pending.push((lo, hi));
    }

    fn grow(&mut self, block: &mut Vec<usize>, hi: usize, label: u8, pending: &mut Vec<(usize, usize)>) {
        let even = self.rule.even_gaps();
        let last = *block.last().unwrap();
        if self.rule.can_close(block) && (!even || (hi - last).is_multiple_of(2)) {
            for &b in block.iter() {
                self.labels[b - 1] = label;
            }
            let before = pending.len();
            if last < hi {
                pending.push((last + 1, hi));
            }
            for w in block.windows(2).rev() {
                if w[1] > w[0] + 1 {
                    pending.push((w[0] + 1, w[1] - 1));
                }
            }
            self.run(pending);
            pending.truncate(before);
        }
        for next in last + 1..=hi {
            if even && (next - last - 1) % 2 == 1 {
                continue;
            }
            if !self.rule.can_extend(block, next) {
                continue;
            }
            block.push(next);
            self.grow(block, hi, label, pending);
            block.pop();
        }
    }
}

/// Visits every non-crossing partition of `[n]` whose blocks satisfy `rule`,
/// each exactly once, in a deterministic order.
///
/// The block containing the smallest unassigned position of an interval is
/// chosen first; the gaps it leaves are filled independently.
pub fn visit_noncrossing<R: BlockRule, F: FnMut(&Partition)>(n: usize, rule: &R, emit: F) {
    assert!(n > 0 && n <= MAX_GROUND);
    let mut g = Generator {
        rule,
        labels: vec![0; n],
        next_label: 0,
        emit,
    };
    let mut pending = vec![(1, n)];
    g.run(&mut pending);
}

/// All non-crossing partitions of `[n]`, `1 <= n <= DEFAULT_NC_CAP`.
pub fn enumerate_nc(n: usize) -> Result<Vec<Partition>> {
    enumerate_nc_capped(n, DEFAULT_NC_CAP)
}

pub fn enumerate_nc_capped(n: usize, cap: usize) -> Result<Vec<Partition>> {
    if n == 0 {
        return Err(Error::GroundSize {
            got: 0,
            expected: "a positive ground size".into(),
        });
    }
    if n > cap {
        return Err(Error::CapExceeded { size: n, cap });
    }
    let mut out = Vec::new();
    visit_noncrossing(n, &AnyBlock, |p| out.push(p.clone()));
    Ok(out)
}

/// Every set partition of `[n]`, crossing or not (restricted growth strings).
pub fn enumerate_all(n: usize) -> Result<Vec<Partition>> {
    if n == 0 || n > 12 {
        return Err(Error::CapExceeded { size: n, cap: 12 });
    }
    let mut out = Vec::new();
    let mut rgs = vec![0u8; n];
    fn rec(i: usize, max: u8, rgs: &mut [u8], out: &mut Vec<Partition>) {
        if i == rgs.len() {
            out.push(Partition::from_labels(rgs));
            return;
        }
        for v in 0..=max + 1 {
            rgs[i] = v;
            rec(i + 1, max.max(v), rgs, out);
        }
    }
    if n == 1 {
        return Ok(vec![Partition::singletons(1)]);
    }
    rec(1, 0, &mut rgs, &mut out);
    Ok(out)
}

pub(crate) fn elements_of(mask: u64) -> impl Iterator<Item = usize> {
    mask_elements(mask)
}

pub(crate) fn mask_of(i: usize) -> u64 {
    bit(i)
}
