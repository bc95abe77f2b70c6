//! Pair partitions of `{1..2n}` (chord diagrams) and their statistics.
//!
//! A pair partition is stored in canonical form: blocks `(lo, hi)` with
//! `lo < hi`, sorted ascending by `lo`. Two blocks `(a, b)` and `(c, d)` with
//! `a < c` cross iff `a < c < b < d`. The crossing graph has the blocks as
//! vertices and crossing pairs as edges; singletons are its isolated vertices
//! and `cc` counts its connected components.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::SetPartition;

/// Largest `n` enumerated without an explicit override (`2n = 16`, 2 027 025 pairings).
pub const DEFAULT_MAX_N: usize = 8;
/// Largest `n` the extended cap admits (`2n = 18`).
pub const EXTENDED_MAX_N: usize = 9;

/// Upper bound on the block count of exhaustively enumerated pair partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationCap(usize);

impl EnumerationCap {
    pub fn new(max_n: usize) -> Self {
        EnumerationCap(max_n)
    }

    pub fn extended() -> Self {
        EnumerationCap(EXTENDED_MAX_N)
    }

    pub fn max_n(self) -> usize {
        self.0
    }

    pub fn check(self, n: usize) -> Result<()> {
        if n > self.0 {
            Err(Error::CapExceeded {
                requested: n,
                cap: self.0,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for EnumerationCap {
    fn default() -> Self {
        EnumerationCap(DEFAULT_MAX_N)
    }
}

/// A perfect matching of `{1..2n}` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairPartition {
    blocks: Vec<(u32, u32)>,
}

impl PairPartition {
    /// Builds a pair partition from arbitrary 1-based pairs, canonicalizing
    /// orientation and order. Fails unless the pairs cover `{1..2n}` exactly once.
    pub fn new(pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut blocks: Vec<(u32, u32)> = pairs
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        if blocks.is_empty() {
            return Err(Error::InvalidArgument(
                "a pair partition needs at least one block".into(),
            ));
        }
        blocks.sort_unstable();
        let size = 2 * blocks.len();
        let mut seen = vec![false; size + 1];
        for &(lo, hi) in &blocks {
            if lo == hi {
                return Err(Error::InvalidArgument(format!(
                    "block ({lo},{hi}) pairs a point with itself"
                )));
            }
            for p in [lo, hi] {
                let p = p as usize;
                if p == 0 || p > size {
                    return Err(Error::InvalidArgument(format!("index {p} outside 1..={size}")));
                }
                if seen[p] {
                    return Err(Error::InvalidArgument(format!("index {p} occurs twice")));
                }
                seen[p] = true;
            }
        }
        Ok(PairPartition { blocks })
    }

    /// Caller guarantees the blocks are already canonical.
    pub(crate) fn from_canonical(blocks: Vec<(u32, u32)>) -> Self {
        debug_assert!(blocks.windows(2).all(|w| w[0].0 < w[1].0));
        PairPartition { blocks }
    }

    /// The only pairing of two points.
    pub fn single_pair() -> Self {
        PairPartition { blocks: vec![(1, 2)] }
    }

    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[(u32, u32)] {
        &self.blocks
    }

    /// Whether two blocks cross, i.e. `a < c < b < d` after ordering.
    pub fn crosses(a: (u32, u32), b: (u32, u32)) -> bool {
        let (x, y) = if a.0 < b.0 { (a, b) } else { (b, a) };
        x.0 < y.0 && y.0 < x.1 && x.1 < y.1
    }

    /// Index pairs `(i, j)`, `i < j`, of crossing blocks.
    pub fn crossing_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let b = &self.blocks;
        (0..b.len())
            .flat_map(move |i| ((i + 1)..b.len()).filter_map(move |j| Self::crosses(b[i], b[j]).then_some((i, j))))
    }

    pub fn crossings(&self) -> usize {
        self.crossing_pairs().count()
    }

    /// Blocks that cross no other block.
    pub fn singleton_blocks(&self) -> Vec<(u32, u32)> {
        let mut crossed = vec![false; self.n()];
        for (i, j) in self.crossing_pairs() {
            crossed[i] = true;
            crossed[j] = true;
        }
        self.blocks
            .iter()
            .zip(crossed)
            .filter_map(|(&b, c)| (!c).then_some(b))
            .collect()
    }

    pub fn singletons(&self) -> usize {
        self.singleton_blocks().len()
    }

    /// Block indices grouped by connected component of the crossing graph,
    /// components ordered by their smallest point.
    fn component_indices(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut uf = UnionFind::new(n);
        for (i, j) in self.crossing_pairs() {
            uf.union(i, j);
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for i in 0..n {
            let r = uf.find(i);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(i);
        }
        groups
    }

    /// Connected components of the crossing graph, as lists of blocks.
    pub fn connected_components(&self) -> Vec<Vec<(u32, u32)>> {
        self.component_indices()
            .into_iter()
            .map(|g| g.into_iter().map(|i| self.blocks[i]).collect())
            .collect()
    }

    pub fn statistics(&self) -> ChordStatistics {
        let n = self.n();
        let mut uf = UnionFind::new(n);
        let mut crossed = vec![false; n];
        let mut cr = 0u32;
        for (i, j) in self.crossing_pairs() {
            cr += 1;
            crossed[i] = true;
            crossed[j] = true;
            uf.union(i, j);
        }
        let h = crossed.iter().filter(|c| !**c).count() as u32;
        ChordStatistics {
            cr,
            h,
            cc: uf.components() as u32,
            big_h: n as u32 - h,
        }
    }

    /// Collapses every crossing-graph component onto its point support.
    pub fn phi(&self) -> SetPartition {
        let blocks = self
            .component_indices()
            .into_iter()
            .map(|g| {
                let mut pts: Vec<u32> = g
                    .into_iter()
                    .flat_map(|i| [self.blocks[i].0, self.blocks[i].1])
                    .collect();
                pts.sort_unstable();
                pts
            })
            .collect();
        SetPartition::from_blocks(blocks)
    }

    /// Cyclic rotation `k -> 1 + (k mod 2n)`.
    pub fn rotate(&self) -> PairPartition {
        let size = 2 * self.n() as u32;
        let mut blocks: Vec<(u32, u32)> = self
            .blocks
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (1 + a % size, 1 + b % size);
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        blocks.sort_unstable();
        PairPartition { blocks }
    }

    /// Relabels a set of blocks onto `{1..2k}` preserving the order of points.
    pub fn standardize(blocks: &[(u32, u32)]) -> Result<PairPartition> {
        let mut pts: Vec<u32> = blocks.iter().flat_map(|&(a, b)| [a, b]).collect();
        pts.sort_unstable();
        let rank = |p: u32| pts.binary_search(&p).map(|i| i as u32 + 1).unwrap_or(0);
        PairPartition::new(blocks.iter().map(|&(a, b)| (rank(a), rank(b))))
    }
}

impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (a, b)) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "({a},{b})")?;
        }
        write!(f, "}}")
    }
}

struct UnionFind {
    parent: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            sets: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so group order follows first block
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
            self.sets -= 1;
        }
    }

    fn components(&self) -> usize {
        self.sets
    }
}

/// The chord statistics of one pair partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ChordStatistics {
    /// Number of crossing block pairs.
    pub cr: u32,
    /// Number of singleton blocks.
    pub h: u32,
    /// Number of connected components of the crossing graph.
    pub cc: u32,
    /// `n - h`.
    pub big_h: u32,
}

/// Deterministic stream over `P2(2n)`.
///
/// The order pairs the smallest unpaired point with each larger free point in
/// ascending order, recursively. Internally this is a mixed-radix counter with
/// digit `l` ranging over `0..2(n-l)-1`, most significant first, so every
/// pairing has a rank in `0..(2n-1)!!` and a stream can start at any rank.
#[derive(Clone, Debug)]
pub struct Pairings {
    digits: Vec<usize>,
    remaining: u64,
}

impl Pairings {
    pub fn new(n: usize, cap: EnumerationCap) -> Result<Self> {
        Self::from_rank(n, 0, cap)
    }

    /// Stream starting at the pairing of the given rank.
    pub fn from_rank(n: usize, rank: u64, cap: EnumerationCap) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("pair partitions need n >= 1".into()));
        }
        cap.check(n)?;
        let total = pairing_count_u64(n);
        if rank > total {
            return Err(Error::InvalidArgument(format!("rank {rank} beyond {total} pairings")));
        }
        let mut digits = vec![0usize; n];
        let mut r = rank;
        for l in (0..n).rev() {
            let radix = (2 * (n - l) - 1) as u64;
            digits[l] = (r % radix) as usize;
            r /= radix;
        }
        Ok(Pairings {
            digits,
            remaining: total - rank,
        })
    }

    fn decode(&self) -> PairPartition {
        let n = self.digits.len();
        let mut free: Vec<u32> = (1..=2 * n as u32).collect();
        let mut blocks = Vec::with_capacity(n);
        for &d in &self.digits {
            let b = free.remove(d + 1);
            let a = free.remove(0);
            blocks.push((a, b));
        }
        PairPartition::from_canonical(blocks)
    }

    fn advance(&mut self) {
        let n = self.digits.len();
        for l in (0..n).rev() {
            let radix = 2 * (n - l) - 1;
            self.digits[l] += 1;
            if self.digits[l] < radix {
                return;
            }
            self.digits[l] = 0;
        }
    }
}

impl Iterator for Pairings {
    type Item = PairPartition;

    fn next(&mut self) -> Option<PairPartition> {
        if self.remaining == 0 {
            return None;
        }
        let v = self.decode();
        self.remaining -= 1;
        if self.remaining > 0 {
            self.advance();
        }
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

impl ExactSizeIterator for Pairings {}

/// Every pairing of `{1..2n}` in the deterministic order of [`Pairings`].
pub fn enumerate_pairings(n: usize, cap: EnumerationCap) -> Result<Pairings> {
    Pairings::new(n, cap)
}

fn pairing_count_u64(n: usize) -> u64 {
    (1..=n as u64).map(|k| 2 * k - 1).product()
}

/// Range-partitioned parallel fold over `P2(2n)`.
///
/// Chunks are contiguous rank ranges; `merge` must be associative and the
/// chunk results are reduced in rank order, so the outcome does not depend on
/// the number of worker threads.
pub fn fold_pairings<A, I, F, M>(n: usize, cap: EnumerationCap, init: I, fold: F, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, &PairPartition) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    // validate before spawning work
    Pairings::new(n, cap)?;
    let total = pairing_count_u64(n);
    let chunk = (total / 256).max(1024);
    let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();
    let parts: Vec<A> = starts
        .into_par_iter()
        .map(|start| {
            let len = chunk.min(total - start) as usize;
            Pairings::from_rank(n, start, cap)
                .expect("rank within range")
                .take(len)
                .fold(init(), |acc, v| fold(acc, &v))
        })
        .collect();
    Ok(parts.into_iter().fold(init(), merge))
}

/// Key of a cell of the joint `(cr, h, cc)` distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StatKey {
    pub cr: u32,
    pub h: u32,
    pub cc: u32,
}

impl From<ChordStatistics> for StatKey {
    fn from(s: ChordStatistics) -> Self {
        StatKey {
            cr: s.cr,
            h: s.h,
            cc: s.cc,
        }
    }
}

/// Exact joint counts of `(cr, h, cc)` over `P2(2n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatisticDistribution {
    pub n: usize,
    pub counts: BTreeMap<StatKey, BigUint>,
}

impl StatisticDistribution {
    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// Number of non-crossing pairings (`cr = 0` cells).
    pub fn noncrossing(&self) -> BigUint {
        self.counts.iter().filter(|(k, _)| k.cr == 0).map(|(_, c)| c).sum()
    }

    /// Number of connected pairings (`cc = 1` cells).
    pub fn connected(&self) -> BigUint {
        self.counts.iter().filter(|(k, _)| k.cc == 1).map(|(_, c)| c).sum()
    }

    /// `sum_V h(V)`.
    pub fn total_singletons(&self) -> BigUint {
        self.counts.iter().map(|(k, c)| c * BigUint::from(k.h)).sum()
    }

    /// Distribution of a single statistic derived from the cell key.
    pub fn marginal(&self, stat: impl Fn(&StatKey) -> u32) -> BTreeMap<u32, BigUint> {
        let mut out: BTreeMap<u32, BigUint> = BTreeMap::new();
        for (k, c) in &self.counts {
            *out.entry(stat(k)).or_default() += c;
        }
        out
    }
}

pub fn statistic_distribution(n: usize, cap: EnumerationCap) -> Result<StatisticDistribution> {
    let counts = fold_pairings(
        n,
        cap,
        HashMap::<StatKey, u64>::new,
        |mut acc, v| {
            *acc.entry(v.statistics().into()).or_insert(0) += 1;
            acc
        },
        |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_insert(0) += c;
            }
            a
        },
    )?;
    Ok(StatisticDistribution {
        n,
        counts: counts.into_iter().map(|(k, c)| (k, BigUint::from(c))).collect(),
    })
}

/// `(2n-1)!!`, the number of pairings of `2n` points; `1` for `n = 0`.
pub fn pairing_count(n: usize) -> BigUint {
    (1..=n as u64).map(|k| BigUint::from(2 * k - 1)).product()
}

/// Catalan number `binom(2n, n) / (n + 1)`.
pub fn catalan(n: usize) -> BigUint {
    binomial(BigUint::from(2 * n), BigUint::from(n)) / BigUint::from(n + 1)
}

/// Number of non-crossing pairings of `2n` points.
pub fn count_nc_pairings(n: usize) -> BigUint {
    catalan(n)
}

/// Connected pairing counts `c_2, c_4, .., c_{2 nmax}` via
/// `c_2 = 1`, `c_{2(n+1)} = n * sum_{i=1..n} c_{2i} c_{2(n+1-i)}`.
pub fn riordan_connected(nmax: usize) -> Vec<BigUint> {
    let mut c: Vec<BigUint> = Vec::with_capacity(nmax);
    if nmax == 0 {
        return c;
    }
    c.push(BigUint::one());
    for n in 1..nmax {
        // c[k] holds c_{2(k+1)}
        let s: BigUint = (1..=n).map(|i| &c[i - 1] * &c[n - i]).sum();
        c.push(s * BigUint::from(n));
    }
    c
}

/// `T_{2n}` from `T_{2(m+1)} = (m+1) * sum_{k=0..m} p_{2k} p_{2(m-k)}` with `m = n - 1`.
pub fn total_singletons_closed_form(n: usize) -> BigUint {
    if n == 0 {
        return BigUint::zero();
    }
    let m = n - 1;
    let s: BigUint = (0..=m).map(|k| pairing_count(k) * pairing_count(m - k)).sum();
    s * BigUint::from(n)
}

/// `T_{2n} = sum_V h(V)` over `P2(2n)`.
///
/// Uses the closed form; when `n` is within `cap` the enumeration sum is also
/// computed and a disagreement is reported as [`Error::Mismatch`].
pub fn total_singletons(n: usize, cap: EnumerationCap) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("total_singletons needs n >= 1".into()));
    }
    let closed = total_singletons_closed_form(n);
    if n <= cap.max_n() {
        let enumerated = fold_pairings(n, cap, || 0u64, |a, v| a + v.singletons() as u64, |a, b| a + b)?;
        let enumerated = BigUint::from(enumerated);
        if enumerated != closed {
            return Err(Error::Mismatch {
                context: format!("T_{} closed form vs enumeration", 2 * n),
                left: closed.to_string(),
                right: enumerated.to_string(),
            });
        }
    }
    Ok(closed)
}
