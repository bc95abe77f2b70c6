//! Moment calculus for symmetric laws given by weights on pair partitions.
//!
//! Sequences carry only even orders: index `i` of a [`MomentSequence`] holds
//! `m_{2(i+1)}`, and likewise for [`CumulantSequence`]. Odd moments and
//! cumulants are identically zero for every law handled here.
//!
//! The free moment-cumulant relation is evaluated over non-crossing partitions
//! with all blocks of even size (`NC_e`), grouped by their multiset of block
//! sizes so each order needs one enumeration.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{psd_check, PsdReport};
use crate::pairings::{enumerate_pairings, statistic_distribution, EnumerationCap, StatisticDistribution};
use crate::scalar::{Scalar, FLOAT_TOL};
use crate::weights::{check_strong_multiplicativity, WeightSpec};

/// A partition of `{1..k}` in canonical form: sorted blocks, ordered by minimum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    blocks: Vec<Vec<u32>>,
}

impl SetPartition {
    pub fn from_blocks(mut blocks: Vec<Vec<u32>>) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort();
        SetPartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// Size of the ground set.
    pub fn size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Blocks are disjoint and cover `{1..size}`.
    pub fn is_valid(&self) -> bool {
        let k = self.size();
        let mut seen = vec![false; k + 1];
        for &p in self.blocks.iter().flatten() {
            let p = p as usize;
            if p == 0 || p > k || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        true
    }

    pub fn is_noncrossing(&self) -> bool {
        // a < c < b < d with a, b in one block and c, d in another
        for (i, x) in self.blocks.iter().enumerate() {
            for y in &self.blocks[i + 1..] {
                for &a in x {
                    for &b in x {
                        if a >= b {
                            continue;
                        }
                        for &c in y {
                            for &d in y {
                                if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
        true
    }

    pub fn all_even(&self) -> bool {
        self.blocks.iter().all(|b| b.len() % 2 == 0)
    }

    /// Block sizes sorted ascending.
    pub fn block_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }
}

/// All non-crossing partitions of `{1..k}` whose blocks all have even size.
pub fn enumerate_nc_even(k: usize, cap: EnumerationCap) -> Result<Vec<SetPartition>> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "NC_e(k) needs a positive even k, got {k}"
        )));
    }
    cap.check(k / 2)?;
    let points: Vec<u32> = (1..=k as u32).collect();
    Ok(nc_even_on(&points).into_iter().map(SetPartition::from_blocks).collect())
}

/// The block containing the first point is `{p_0 = i_0 < i_1 < .. < i_{2s-1}}`;
/// every gap between consecutive chosen points, and the tail, must itself carry
/// an even non-crossing partition.
fn nc_even_on(points: &[u32]) -> Vec<Vec<Vec<u32>>> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut chosen = vec![0usize];
    extend_first_block(points, &mut chosen, &mut out);
    out
}

fn extend_first_block(points: &[u32], chosen: &mut Vec<usize>, out: &mut Vec<Vec<Vec<u32>>>) {
    let last = *chosen.last().expect("first point always chosen");
    if chosen.len().is_multiple_of(2) && (points.len() - last - 1).is_multiple_of(2) {
        // close the block here: fill gaps and the tail independently
        let block: Vec<u32> = chosen.iter().map(|&i| points[i]).collect();
        let mut pieces: Vec<&[u32]> = chosen.windows(2).map(|w| &points[w[0] + 1..w[1]]).collect();
        pieces.push(&points[last + 1..]);
        let mut partial: Vec<Vec<Vec<u32>>> = vec![vec![block]];
        for piece in pieces {
            let sub = nc_even_on(piece);
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    sub.iter().map(move |s| {
                        let mut q = p.clone();
                        q.extend(s.iter().cloned());
                        q
                    })
                })
                .collect();
        }
        out.extend(partial);
    }
    // gaps between chosen points must have even length
    let mut next = last + 1;
    while next < points.len() {
        chosen.push(next);
        extend_first_block(points, chosen, out);
        chosen.pop();
        next += 2;
    }
}

/// Counts of `NC_e(2n)` partitions by block type, for `n = 1..=nmax`.
#[derive(Clone, Debug)]
pub struct NcEvenTable {
    /// `types[n-1]`: sorted block half-sizes -> number of partitions.
    types: Vec<BTreeMap<Vec<usize>, u64>>,
}

impl NcEvenTable {
    pub fn new(nmax: usize, cap: EnumerationCap) -> Result<Self> {
        let mut types = Vec::with_capacity(nmax);
        for n in 1..=nmax {
            let mut t: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
            for p in enumerate_nc_even(2 * n, cap)? {
                let halves = p.block_type().into_iter().map(|s| s / 2).collect();
                *t.entry(halves).or_insert(0) += 1;
            }
            types.push(t);
        }
        Ok(NcEvenTable { types })
    }

    pub fn nmax(&self) -> usize {
        self.types.len()
    }

    pub fn count(&self, n: usize) -> u64 {
        self.types[n - 1].values().sum()
    }

    /// `m_{2n} = sum_{pi in NC_e(2n)} prod_{B in pi} r_{|B|}`.
    pub fn moments_from_cumulants<T: Scalar>(&self, r: &CumulantSequence<T>) -> Result<MomentSequence<T>> {
        let nmax = r.order();
        self.ensure(nmax)?;
        let values = (1..=nmax)
            .map(|n| {
                self.types[n - 1].iter().fold(T::zero(), |acc, (halves, count)| {
                    acc + T::from_count(&BigUint::from(*count)) * product_of(halves, &r.values)
                })
            })
            .collect();
        Ok(MomentSequence::new(values))
    }

    /// Inverse of [`moments_from_cumulants`](Self::moments_from_cumulants) by
    /// recursive subtraction of the multi-block terms.
    pub fn cumulants_from_moments<T: Scalar>(&self, m: &MomentSequence<T>) -> Result<CumulantSequence<T>> {
        let nmax = m.order();
        self.ensure(nmax)?;
        let mut r: Vec<T> = Vec::with_capacity(nmax);
        for n in 1..=nmax {
            let lower = self.types[n - 1]
                .iter()
                .filter(|(halves, _)| halves.len() > 1)
                .fold(T::zero(), |acc, (halves, count)| {
                    acc + T::from_count(&BigUint::from(*count)) * product_of(halves, &r)
                });
            r.push(m.values[n - 1].clone() - lower);
        }
        Ok(CumulantSequence::new(r))
    }

    fn ensure(&self, nmax: usize) -> Result<()> {
        if nmax > self.nmax() {
            Err(Error::InvalidArgument(format!(
                "NC_e table built to order {} but order {} requested",
                2 * self.nmax(),
                2 * nmax
            )))
        } else {
            Ok(())
        }
    }
}

fn product_of<T: Scalar>(halves: &[usize], values: &[T]) -> T {
    halves.iter().fold(T::one(), |acc, &s| acc * values[s - 1].clone())
}

/// Even moments `m_2, m_4, .., m_{2N}` of a symmetric law.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentSequence<T> {
    pub values: Vec<T>,
}

/// Even free cumulants `r_2, r_4, .., r_{2N}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CumulantSequence<T> {
    pub values: Vec<T>,
}

macro_rules! even_sequence {
    ($t:ident) => {
        impl<T: Scalar> $t<T> {
            pub fn new(values: Vec<T>) -> Self {
                $t { values }
            }

            /// Largest half-order `N`.
            pub fn order(&self) -> usize {
                self.values.len()
            }

            /// Entry of order `2n`, `n >= 1`.
            pub fn get(&self, n: usize) -> &T {
                &self.values[n - 1]
            }

            pub fn truncate(&self, n: usize) -> Self {
                $t::new(self.values[..n.min(self.values.len())].to_vec())
            }

            pub fn close_to(&self, other: &Self, tol: f64) -> bool {
                self.order() == other.order()
                    && self
                        .values
                        .iter()
                        .zip(&other.values)
                        .all(|(a, b)| a.close_to(b, tol))
            }

            pub fn rendered(&self) -> Vec<String> {
                self.values.iter().map(Scalar::render).collect()
            }
        }
    };
}

even_sequence!(MomentSequence);
even_sequence!(CumulantSequence);

impl<T: Scalar> MomentSequence<T> {
    /// Semicircle law: Catalan numbers.
    pub fn semicircle(nmax: usize) -> Self {
        MomentSequence::new(
            (1..=nmax)
                .map(|n| T::from_count(&crate::pairings::catalan(n)))
                .collect(),
        )
    }

    /// Standard normal law: `(2n-1)!!`.
    pub fn gaussian(nmax: usize) -> Self {
        MomentSequence::new(
            (1..=nmax)
                .map(|n| T::from_count(&crate::pairings::pairing_count(n)))
                .collect(),
        )
    }

    /// Point mass at zero.
    pub fn zero(nmax: usize) -> Self {
        MomentSequence::new(vec![T::zero(); nmax])
    }
}

/// Symmetric Gram matrix `G[i][j] = <f_i | f_j>`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix<T> {
    k: usize,
    entries: Vec<T>,
}

impl<T: Scalar> GramMatrix<T> {
    /// Row-major `k x k` entries; must be symmetric.
    pub fn new(k: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != k * k {
            return Err(Error::InvalidArgument(format!(
                "{} entries for a {k}x{k} Gram matrix",
                entries.len()
            )));
        }
        for i in 0..k {
            for j in (i + 1)..k {
                if entries[i * k + j] != entries[j * k + i] {
                    return Err(Error::InvalidArgument(format!(
                        "Gram matrix not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(GramMatrix { k, entries })
    }

    /// Gram matrix of `k` copies of one unit vector.
    pub fn all_ones(k: usize) -> Self {
        GramMatrix {
            k,
            entries: vec![T::one(); k * k],
        }
    }

    pub fn size(&self) -> usize {
        self.k
    }

    /// Entry for 1-based indices.
    pub fn get(&self, i: u32, j: u32) -> &T {
        &self.entries[(i as usize - 1) * self.k + (j as usize - 1)]
    }
}

impl GramMatrix<f64> {
    pub fn from_vectors(vectors: &[Vec<f64>]) -> Result<Self> {
        let k = vectors.len();
        let mut entries = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                if vectors[i].len() != vectors[j].len() {
                    return Err(Error::InvalidArgument("vectors of different dimension".into()));
                }
                entries[i * k + j] = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a * b).sum();
            }
        }
        GramMatrix::new(k, entries)
    }
}

/// `sum_{V in P2(k)} t(V) prod_{(i,j) in V} G[i][j]`, zero for odd `k`.
pub fn mixed_moment<T: Scalar>(spec: &WeightSpec<T>, gram: &GramMatrix<T>, cap: EnumerationCap) -> Result<T> {
    let k = gram.size();
    if k == 0 {
        return Ok(T::one());
    }
    if k % 2 == 1 {
        return Ok(T::zero());
    }
    let mut total = T::zero();
    for v in enumerate_pairings(k / 2, cap)? {
        let inner = v
            .blocks()
            .iter()
            .fold(T::one(), |acc, &(i, j)| acc * gram.get(i, j).clone());
        total = total + spec.evaluate(&v) * inner;
    }
    Ok(total)
}

/// Joint statistic distributions of `P2(2n)` for `n = 1..=nmax`.
///
/// Every weight sum over pairings of any order up to `nmax` is read off these
/// tables, so one enumeration serves any number of weights.
#[derive(Clone, Debug)]
pub struct PairingTable {
    dists: Vec<StatisticDistribution>,
}

impl PairingTable {
    pub fn new(nmax: usize, cap: EnumerationCap) -> Result<Self> {
        cap.check(nmax)?;
        let dists = (1..=nmax)
            .map(|n| statistic_distribution(n, cap))
            .collect::<Result<Vec<_>>>()?;
        Ok(PairingTable { dists })
    }

    pub fn nmax(&self) -> usize {
        self.dists.len()
    }

    pub fn distribution(&self, n: usize) -> &StatisticDistribution {
        &self.dists[n - 1]
    }

    /// `m_{2n} = sum_{V in P2(2n)} t(V)`.
    pub fn moments<T: Scalar>(&self, spec: &WeightSpec<T>) -> MomentSequence<T> {
        MomentSequence::new(self.dists.iter().map(|d| spec.sum_over(d)).collect())
    }

    /// `r_{2n} = sum_{V in P2(2n), cc(V) = 1} t(V)`.
    pub fn connected_cumulants<T: Scalar>(&self, spec: &WeightSpec<T>) -> CumulantSequence<T> {
        CumulantSequence::new(
            self.dists
                .iter()
                .map(|d| spec.sum_over_cells(d, |k| k.cc == 1))
                .collect(),
        )
    }
}

pub fn moments_of_weight<T: Scalar>(
    spec: &WeightSpec<T>,
    nmax: usize,
    cap: EnumerationCap,
) -> Result<MomentSequence<T>> {
    Ok(PairingTable::new(nmax, cap)?.moments(spec))
}

pub fn cumulants_from_connected<T: Scalar>(
    spec: &WeightSpec<T>,
    nmax: usize,
    cap: EnumerationCap,
) -> Result<CumulantSequence<T>> {
    Ok(PairingTable::new(nmax, cap)?.connected_cumulants(spec))
}

pub fn moments_from_cumulants<T: Scalar>(r: &CumulantSequence<T>, cap: EnumerationCap) -> Result<MomentSequence<T>> {
    NcEvenTable::new(r.order(), cap)?.moments_from_cumulants(r)
}

pub fn cumulants_from_moments<T: Scalar>(m: &MomentSequence<T>, cap: EnumerationCap) -> Result<CumulantSequence<T>> {
    NcEvenTable::new(m.order(), cap)?.cumulants_from_moments(m)
}

/// Moments of `a ⊞ b` up to order `2 nmax`: free cumulants add.
pub fn free_convolve<T: Scalar>(
    a: &MomentSequence<T>,
    b: &MomentSequence<T>,
    nmax: usize,
    table: &NcEvenTable,
) -> Result<MomentSequence<T>> {
    if a.order() < nmax || b.order() < nmax {
        return Err(Error::InvalidArgument(format!(
            "free convolution to order {} needs both inputs to that order (have {} and {})",
            2 * nmax,
            2 * a.order(),
            2 * b.order()
        )));
    }
    let ra = table.cumulants_from_moments(&a.truncate(nmax))?;
    let rb = table.cumulants_from_moments(&b.truncate(nmax))?;
    let sum = CumulantSequence::new(ra.values.into_iter().zip(rb.values).map(|(x, y)| x + y).collect());
    table.moments_from_cumulants(&sum)
}

/// Moments of the dilation `D_lambda`, given `lambda^2`: `m_{2n} -> (lambda^2)^n m_{2n}`.
///
/// Only even moments exist here, so the square of the factor is all that is
/// needed and rational squares keep the computation exact.
pub fn dilate<T: Scalar>(m: &MomentSequence<T>, lambda_sq: &T) -> MomentSequence<T> {
    MomentSequence::new(
        m.values
            .iter()
            .enumerate()
            .map(|(i, x)| lambda_sq.powu(i as u32 + 1) * x.clone())
            .collect(),
    )
}

/// Float convenience taking `lambda > 0` itself.
pub fn dilate_by(m: &MomentSequence<f64>, lambda: f64) -> Result<MomentSequence<f64>> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "dilation factor must be positive, got {lambda}"
        )));
    }
    Ok(dilate(m, &(lambda * lambda)))
}

/// Both routes to the moments of `mu_b = D_sqrt(b) mu ⊞ D_sqrt(1-b) gamma_0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MuBMoments<T> {
    /// `sum_V b^H(V) t(V)`.
    pub path_a: MomentSequence<T>,
    /// Free convolution of the dilated laws.
    pub path_b: MomentSequence<T>,
}

fn check_unit_interval<T: Scalar>(name: &str, x: &T) -> Result<()> {
    let v = x.to_f64();
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidArgument(format!("{name} must lie in [0, 1], got {x}")));
    }
    Ok(())
}

/// Moments of `mu_b` computed by both routes; errors with [`Error::Mismatch`]
/// if they disagree (exactly for rationals, within `1e-9` relative otherwise).
pub fn mu_b_moments<T: Scalar>(spec: &WeightSpec<T>, b: &T, nmax: usize, cap: EnumerationCap) -> Result<MuBMoments<T>> {
    check_unit_interval("b", b)?;
    let report = check_strong_multiplicativity(spec, nmax.min(5), cap)?;
    if let Some(v) = report.counterexample {
        return Err(Error::InvalidArgument(format!(
            "weight {spec} is not strongly multiplicative (fails at {v})"
        )));
    }
    let pairings = PairingTable::new(nmax, cap)?;
    let nc = NcEvenTable::new(nmax, cap)?;
    mu_b_with_tables(spec, b, &pairings, &nc)
}

fn mu_b_with_tables<T: Scalar>(
    spec: &WeightSpec<T>,
    b: &T,
    pairings: &PairingTable,
    nc: &NcEvenTable,
) -> Result<MuBMoments<T>> {
    let nmax = pairings.nmax();
    let mixed = WeightSpec::Product(vec![WeightSpec::SingletonHPower(b.clone()), spec.clone()]);
    let path_a = pairings.moments(&mixed);
    let mu = pairings.moments(spec);
    let one_minus_b = T::one() - b.clone();
    let path_b = free_convolve(
        &dilate(&mu, b),
        &dilate(&MomentSequence::semicircle(nmax), &one_minus_b),
        nmax,
        nc,
    )?;
    if !path_a.close_to(&path_b, FLOAT_TOL) {
        return Err(Error::Mismatch {
            context: format!("mu_b moments for weight {spec} at b = {b}"),
            left: path_a.rendered().join(","),
            right: path_b.rendered().join(","),
        });
    }
    Ok(MuBMoments { path_a, path_b })
}

/// `rho_{bc}` against `D_sqrt(c) rho_b ⊞ D_sqrt(1-c) gamma_0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SemigroupReport<T> {
    pub direct: MomentSequence<T>,
    pub composed: MomentSequence<T>,
    pub passed: bool,
}

pub fn semigroup_check<T: Scalar>(b: &T, c: &T, nmax: usize, cap: EnumerationCap) -> Result<SemigroupReport<T>> {
    check_unit_interval("b", b)?;
    check_unit_interval("c", c)?;
    let pairings = PairingTable::new(nmax, cap)?;
    let nc = NcEvenTable::new(nmax, cap)?;
    let one = WeightSpec::Constant1;
    let rho_b = mu_b_with_tables(&one, b, &pairings, &nc)?.path_a;
    let bc = b.clone() * c.clone();
    let direct = mu_b_with_tables(&one, &bc, &pairings, &nc)?.path_a;
    let composed = free_convolve(
        &dilate(&rho_b, c),
        &dilate(&MomentSequence::semicircle(nmax), &(T::one() - c.clone())),
        nmax,
        &nc,
    )?;
    let passed = direct.close_to(&composed, FLOAT_TOL);
    Ok(SemigroupReport {
        direct,
        composed,
        passed,
    })
}

/// Positivity evidence for a candidate moment sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HankelReport {
    /// Dimension `N + 1` of the Hankel matrix `[m_{i+j}]_{0 <= i,j <= N}`.
    pub size: usize,
    #[serde(flatten)]
    pub psd: PsdReport,
    pub note: &'static str,
}

pub const HANKEL_NOTE: &str =
    "necessary condition only: a PSD Hankel matrix does not prove the sequence is a moment sequence";

/// Hankel matrix `[m_{i+j}]` with `m_0 = 1` and zero odd moments, `0 <= i, j <= N`,
/// where `N` is the order of `m`; reports whether its minimum eigenvalue is at
/// least `-tol * (1 + max|entry|)`.
pub fn hankel_psd<T: Scalar>(m: &MomentSequence<T>, tol: f64) -> Result<HankelReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let size = m.order() + 1;
    let moment = |k: usize| -> f64 {
        match k {
            0 => 1.0,
            k if k % 2 == 1 => 0.0,
            k => m.get(k / 2).to_f64(),
        }
    };
    let mut a = vec![0.0; size * size];
    for i in 0..size {
        for j in 0..size {
            a[i * size + j] = moment(i + j);
        }
    }
    Ok(HankelReport {
        size,
        psd: psd_check(&a, size, tol)?,
        note: HANKEL_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rational;
    use num_rational::BigRational;

    fn cap() -> EnumerationCap {
        EnumerationCap::default()
    }

    fn q(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rational(x, 1)).collect()
    }

    #[test]
    fn mixed_moment_examples() {
        let spec = WeightSpec::<f64>::Constant1;
        let g3 = GramMatrix::all_ones(3);
        assert_eq!(mixed_moment(&WeightSpec::CrossingPower(0.3), &g3, cap()).unwrap(), 0.0);
        assert_eq!(mixed_moment(&spec, &GramMatrix::all_ones(4), cap()).unwrap(), 3.0);
        let g = GramMatrix::from_vectors(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(mixed_moment(&WeightSpec::SingletonHPower(0.5), &g, cap()).unwrap(), 0.0);
        assert!(GramMatrix::new(2, vec![1.0, 2.0, 3.0, 1.0]).is_err());
    }

    #[test]
    fn mixed_moment_depends_on_pair_inner_products() {
        // f1 = f2 = e1, f3 = f4 = e2: only the pairing {(1,2),(3,4)} survives
        let g = GramMatrix::from_vectors(&[vec![1.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(mixed_moment(&WeightSpec::CrossingPower(0.25), &g, cap()).unwrap(), 1.0);
        // f1 = f3, f2 = f4 orthogonal: only the crossing pairing survives
        let g = GramMatrix::from_vectors(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(mixed_moment(&WeightSpec::CrossingPower(0.25), &g, cap()).unwrap(), 0.25);
    }

    #[test]
    fn nc_even_examples() {
        assert_eq!(enumerate_nc_even(2, cap()).unwrap().len(), 1);
        let four = enumerate_nc_even(4, cap()).unwrap();
        let expect: Vec<SetPartition> = [
            vec![vec![1, 2, 3, 4]],
            vec![vec![1, 2], vec![3, 4]],
            vec![vec![1, 4], vec![2, 3]],
        ]
        .into_iter()
        .map(SetPartition::from_blocks)
        .collect();
        let mut got = four.clone();
        got.sort();
        let mut exp = expect.clone();
        exp.sort();
        assert_eq!(got, exp);
        let six = enumerate_nc_even(6, cap()).unwrap();
        assert_eq!(six.len(), 12);
        let types: BTreeMap<Vec<usize>, usize> = six.iter().fold(BTreeMap::new(), |mut m, p| {
            *m.entry(p.block_type()).or_insert(0) += 1;
            m
        });
        assert_eq!(types[&vec![2, 2, 2]], 5);
        assert_eq!(types[&vec![2, 4]], 6);
        assert_eq!(types[&vec![6]], 1);
        assert!(enumerate_nc_even(3, cap()).is_err());
        assert!(enumerate_nc_even(0, cap()).is_err());
    }

    #[test]
    fn set_partition_predicates() {
        let p = SetPartition::from_blocks(vec![vec![3, 1], vec![2, 4]]);
        assert!(p.is_valid());
        assert!(!p.is_noncrossing());
        assert!(p.all_even());
        let p = SetPartition::from_blocks(vec![vec![1, 4], vec![2, 3], vec![5]]);
        assert!(p.is_noncrossing());
        assert!(!p.all_even());
        assert!(!SetPartition::from_blocks(vec![vec![1, 1]]).is_valid());
    }

    #[test]
    fn moments_from_cumulants_examples() {
        let m = moments_from_cumulants(&CumulantSequence::new(q(&[1, 0, 0, 0])), cap()).unwrap();
        assert_eq!(m.values, q(&[1, 2, 5, 14]));
        let m = moments_from_cumulants(&CumulantSequence::new(q(&[2, 1, 4])), cap()).unwrap();
        assert_eq!(m.values, q(&[2, 9, 56]));
        let m = moments_from_cumulants(&CumulantSequence::new(q(&[1, 1, 4, 27])), cap()).unwrap();
        assert_eq!(m.values, q(&[1, 3, 15, 105]));
    }

    #[test]
    fn cumulants_from_moments_examples() {
        let r = cumulants_from_moments(&MomentSequence::<BigRational>::semicircle(5), cap()).unwrap();
        assert_eq!(r.values, q(&[1, 0, 0, 0, 0]));
        let r = cumulants_from_moments(&MomentSequence::new(q(&[2, 9, 56])), cap()).unwrap();
        assert_eq!(r.values, q(&[2, 1, 4]));
    }

    #[test]
    fn moments_of_weight_examples() {
        let m = moments_of_weight(&WeightSpec::<BigRational>::Constant1, 4, cap()).unwrap();
        assert_eq!(m.values, q(&[1, 3, 15, 105]));
        let m = moments_of_weight(&WeightSpec::SingletonHPower(rational(0, 1)), 4, cap()).unwrap();
        assert_eq!(m.values, q(&[1, 2, 5, 14]));
        let m = moments_of_weight(&WeightSpec::SingletonCountPower(rational(2, 1)), 3, cap()).unwrap();
        assert_eq!(m.values, q(&[2, 9, 56]));
    }

    #[test]
    fn connected_cumulant_examples() {
        let r = cumulants_from_connected(&WeightSpec::<BigRational>::Constant1, 5, cap()).unwrap();
        assert_eq!(r.values, q(&[1, 1, 4, 27, 248]));
        let r = cumulants_from_connected(&WeightSpec::SingletonHPower(rational(0, 1)), 5, cap()).unwrap();
        assert_eq!(r.values, q(&[1, 0, 0, 0, 0]));
        let b = rational(2, 5);
        let r = cumulants_from_connected(&WeightSpec::SingletonHPower(b.clone()), 5, cap()).unwrap();
        let c = [1, 1, 4, 27, 248];
        for n in 2..=5 {
            assert_eq!(r.get(n), &(b.powu(n as u32) * rational(c[n - 1], 1)));
        }
        assert_eq!(r.get(1), &rational(1, 1));
    }

    #[test]
    fn convolution_examples() {
        let nc = NcEvenTable::new(6, cap()).unwrap();
        let g0 = MomentSequence::<BigRational>::semicircle(6);
        let g1 = MomentSequence::<BigRational>::gaussian(6);
        let gm = free_convolve(&g0, &g1, 3, &nc).unwrap();
        assert_eq!(gm.values, q(&[2, 9, 56]));
        let zero = MomentSequence::zero(6);
        assert_eq!(free_convolve(&g1, &zero, 6, &nc).unwrap(), g1);
        let g00 = free_convolve(&g0, &g0, 6, &nc).unwrap();
        assert_eq!(g00, dilate(&g0, &rational(2, 1)));
        for n in 1..=6 {
            assert_eq!(g00.get(n), &(rational(2, 1).powu(n as u32) * g0.get(n).clone()));
        }
        assert!(free_convolve(&g0.truncate(2), &g1, 3, &nc).is_err());
    }

    #[test]
    fn dilation_examples() {
        let g0 = MomentSequence::<BigRational>::semicircle(4);
        assert_eq!(dilate(&g0, &rational(1, 1)), g0);
        assert_eq!(dilate(&g0, &rational(2, 1)).get(2), &rational(8, 1));
        let f = dilate_by(&MomentSequence::<f64>::semicircle(4), 2f64.sqrt()).unwrap();
        assert!((f.get(2) - 8.0).abs() < 1e-12);
        assert!(dilate_by(&MomentSequence::<f64>::semicircle(2), 0.0).is_err());
    }

    #[test]
    fn mu_b_examples() {
        let r = mu_b_moments(&WeightSpec::Constant1, &rational(1, 1), 4, cap()).unwrap();
        assert_eq!(r.path_a.values, q(&[1, 3, 15, 105]));
        let r = mu_b_moments(&WeightSpec::Constant1, &rational(0, 1), 4, cap()).unwrap();
        assert_eq!(r.path_a.values, q(&[1, 2, 5, 14]));
        let r = mu_b_moments(&WeightSpec::Constant1, &rational(1, 2), 2, cap()).unwrap();
        assert_eq!(r.path_a.values, vec![rational(1, 1), rational(9, 4)]);
        assert!(mu_b_moments(&WeightSpec::Constant1, &rational(3, 2), 2, cap()).is_err());
    }

    #[test]
    fn mu_b_float_path() {
        let r = mu_b_moments(&WeightSpec::CrossingPower(0.3), &0.7, 5, cap()).unwrap();
        assert!(r.path_a.close_to(&r.path_b, 1e-12));
    }

    #[test]
    fn semigroup_examples() {
        let r = semigroup_check(&rational(1, 2), &rational(1, 2), 6, cap()).unwrap();
        assert!(r.passed);
        let expect = mu_b_moments(&WeightSpec::Constant1, &rational(1, 4), 6, cap()).unwrap();
        assert_eq!(r.direct, expect.path_a);
        let r = semigroup_check(&rational(0, 1), &rational(1, 3), 5, cap()).unwrap();
        assert!(r.passed);
        assert_eq!(r.direct, MomentSequence::semicircle(5));
        let r = semigroup_check(&rational(1, 1), &rational(2, 7), 5, cap()).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn hankel_examples() {
        let r = hankel_psd(&MomentSequence::<f64>::semicircle(4), 1e-10).unwrap();
        assert!(r.psd.psd);
        assert_eq!(r.size, 5);
        let r = hankel_psd(&MomentSequence::new(vec![2.0, 9.0, 56.0]), 1e-10).unwrap();
        assert!(r.psd.psd);
        // m_2 = 1, m_4 = 0.5 violates m_4 >= m_2^2
        let r = hankel_psd(&MomentSequence::new(vec![1.0, 0.5]), 1e-10).unwrap();
        assert!(!r.psd.psd);
        assert!(r.note.contains("necessary"));
    }
}
