//! Permutation groups embedded in pair partitions.
//!
//! `j(sigma) = {(k, 2n+1-sigma(k))}` sends `S(n)` into `P2(2n)`. Two blocks
//! `k < l` of `j(sigma)` cross iff `sigma(l) < sigma(k)`, so singletons of the
//! image are the isolated fixed points of `sigma`: fixed points `k` with
//! `sigma({1..k-1}) = {1..k-1}`.
//!
//! Conventions: `(sigma * tau)(i) = sigma(tau(i))`; the Gram kernel of a
//! function `f` is `f(sigma_a^-1 sigma_b)` with group elements in
//! lexicographic order of their one-line notation.

use std::fmt;

use itertools::Itertools;
use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{psd_check, PsdReport};
use crate::pairings::PairPartition;

/// Largest degree for Gram-matrix tests (order 120).
pub const MAX_KERNEL_DEGREE: usize = 5;
/// Eigenvalue tolerance for Gram-matrix tests.
pub const DEFAULT_PSD_TOL: f64 = 1e-8;
/// Exponents used by the Schoenberg check of conditional negative definiteness.
pub const SCHOENBERG_EXPONENTS: [f64; 4] = [0.1, 0.5, 1.0, 2.0];

/// A permutation of `{1..n}` in one-line notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &x in &images {
            let x = x as usize;
            if x == 0 || x > n || seen[x] {
                return Err(Error::InvalidArgument(format!(
                    "{images:?} is not a permutation of 1..={n}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n as u32).collect(),
        }
    }

    /// Transposition of `a` and `b` in `S(n)`.
    pub fn transposition(n: usize, a: u32, b: u32) -> Result<Self> {
        let mut images: Vec<u32> = (1..=n as u32).collect();
        if a == 0 || b == 0 || a as usize > n || b as usize > n {
            return Err(Error::InvalidArgument(format!(
                "transposition ({a} {b}) outside 1..={n}"
            )));
        }
        images.swap(a as usize - 1, b as usize - 1);
        Ok(Permutation { images })
    }

    /// The cycle `1 -> 2 -> .. -> n -> 1`.
    pub fn full_cycle(n: usize) -> Self {
        Permutation {
            images: (1..=n as u32).map(|k| k % n as u32 + 1).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `sigma(k)` for 1-based `k`.
    pub fn apply(&self, k: u32) -> u32 {
        self.images[k as usize - 1]
    }

    /// `self * other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: other.images.iter().map(|&i| self.apply(i)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (k, &s) in self.images.iter().enumerate() {
            inv[s as usize - 1] = k as u32 + 1;
        }
        Permutation { images: inv }
    }

    /// The same permutation in `S(n+1)`, fixing `n+1`.
    pub fn extend(&self) -> Permutation {
        let mut images = self.images.clone();
        images.push(self.degree() as u32 + 1);
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &s)| s as usize == k + 1)
    }

    /// `sigma({1..k}) = {1..k}`.
    pub fn preserves_prefix(&self, k: usize) -> bool {
        self.images[..k].iter().all(|&s| s as usize <= k)
    }

    /// `sigma({k..n}) = {k..n}` (1-based `k`).
    pub fn preserves_suffix(&self, k: usize) -> bool {
        k > self.degree() || self.images[k - 1..].iter().all(|&s| s as usize >= k)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.images.iter().join(" "))
    }
}

/// All of `S(n)` in lexicographic order of one-line notation.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    (1..=n as u32)
        .permutations(n)
        .map(|images| Permutation { images })
        .collect()
}

/// `j(sigma) = {(k, 2n+1-sigma(k)) : k = 1..n}`.
pub fn embed(sigma: &Permutation) -> PairPartition {
    let n = sigma.degree() as u32;
    PairPartition::new((1..=n).map(|k| (k, 2 * n + 1 - sigma.apply(k))))
        .expect("embedding of a permutation is a pairing")
}

/// `h_n(sigma)`: fixed points `k` with `sigma({1..k-1}) = {1..k-1}`.
pub fn isolated_fixed_points(sigma: &Permutation) -> usize {
    // running maximum of the prefix equals its length iff the prefix is preserved
    let mut max_prefix = 0u32;
    let mut count = 0;
    for (idx, &s) in sigma.images.iter().enumerate() {
        let k = idx as u32 + 1;
        if s == k && max_prefix == k - 1 {
            count += 1;
        }
        max_prefix = max_prefix.max(s);
    }
    count
}

/// `H(sigma) = n - h_n(sigma)`.
pub fn big_h(sigma: &Permutation) -> usize {
    sigma.degree() - isolated_fixed_points(sigma)
}

/// `Delta_k(sigma) = 0` if `sigma` lies in `S_k x {k+1} x S~_{n-1-k}`, else 1,
/// for `k = 0..n-1`; `H = sum_k Delta_k`.
pub fn delta_k(sigma: &Permutation, k: usize) -> usize {
    let inside = sigma.preserves_prefix(k) && sigma.apply(k as u32 + 1) as usize == k + 1;
    usize::from(!inside)
}

/// Outcome of an exhaustive group check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupCheck {
    pub name: String,
    pub checked: u64,
    /// First violating element(s), rendered.
    pub witness: Option<String>,
}

impl GroupCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// `h_{n+1}(sigma)` equals the number of `k` such that `sigma` preserves
/// `{1..k-1}` and `{k+1..n+1}` setwise, for every `sigma in S(n+1)`.
pub fn theorem5_identity(degree: usize) -> Result<GroupCheck> {
    if degree == 0 || degree > 7 {
        return Err(Error::SizeLimit {
            what: "group degree",
            requested: degree,
            limit: 7,
        });
    }
    let mut checked = 0;
    for sigma in all_permutations(degree) {
        checked += 1;
        let by_subgroups = (1..=degree)
            .filter(|&k| sigma.preserves_prefix(k - 1) && sigma.preserves_suffix(k + 1))
            .count();
        let h = isolated_fixed_points(&sigma);
        let via_embedding = embed(&sigma).singletons();
        if h != by_subgroups || h != via_embedding {
            return Ok(GroupCheck {
                name: format!("h_{degree} decomposition"),
                checked,
                witness: Some(format!(
                    "{sigma}: h={h}, subgroups={by_subgroups}, embedding={via_embedding}"
                )),
            });
        }
    }
    Ok(GroupCheck {
        name: format!("h_{degree} decomposition"),
        checked,
        witness: None,
    })
}

/// Gram matrix `[f(sigma_a^-1 sigma_b)]` over `S(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelMatrix {
    pub order: usize,
    pub entries: Vec<f64>,
}

impl KernelMatrix {
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.entries[a * self.order + b]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.get(a, b) == self.get(b, a)))
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n == 0 || n > MAX_KERNEL_DEGREE {
        return Err(Error::SizeLimit {
            what: "group degree",
            requested: n,
            limit: MAX_KERNEL_DEGREE,
        });
    }
    Ok(())
}

pub fn kernel_matrix(n: usize, f: impl Fn(&Permutation) -> f64) -> Result<KernelMatrix> {
    check_degree(n)?;
    let elems = all_permutations(n);
    let inverses: Vec<Permutation> = elems.iter().map(Permutation::inverse).collect();
    let order = elems.len();
    let mut entries = Vec::with_capacity(order * order);
    for inv in &inverses {
        for b in &elems {
            entries.push(f(&inv.compose(b)));
        }
    }
    Ok(KernelMatrix { order, entries })
}

pub fn check_positive_definite(n: usize, f: impl Fn(&Permutation) -> f64, tol: f64) -> Result<PsdReport> {
    let k = kernel_matrix(n, f)?;
    psd_check(&k.entries, k.order, tol)
}

/// Two certificates that `H` is conditionally negative definite on `S(n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CndReport {
    /// `-P K P` with `P` the projector onto zero-sum vectors.
    pub centered: PsdReport,
    /// `exp(-x K)` entrywise, for each `x` in [`SCHOENBERG_EXPONENTS`].
    pub schoenberg: Vec<(f64, PsdReport)>,
}

impl CndReport {
    pub fn passed(&self) -> bool {
        self.centered.psd && self.schoenberg.iter().all(|(_, r)| r.psd)
    }

    /// First failing certificate, if any.
    pub fn witness(&self) -> Option<String> {
        if !self.centered.psd {
            return Some(format!(
                "centered kernel min eigenvalue {}",
                self.centered.min_eigenvalue
            ));
        }
        self.schoenberg
            .iter()
            .find(|(_, r)| !r.psd)
            .map(|(x, r)| format!("exp(-{x} H) min eigenvalue {}", r.min_eigenvalue))
    }
}

pub fn check_cnd(n: usize, tol: f64) -> Result<CndReport> {
    let k = kernel_matrix(n, |s| big_h(s) as f64)?;
    let m = k.order;
    // -P K P with P = I - J/m
    let row_means: Vec<f64> = (0..m)
        .map(|a| (0..m).map(|b| k.get(a, b)).sum::<f64>() / m as f64)
        .collect();
    let col_means: Vec<f64> = (0..m)
        .map(|b| (0..m).map(|a| k.get(a, b)).sum::<f64>() / m as f64)
        .collect();
    let grand = row_means.iter().sum::<f64>() / m as f64;
    let mut centered = vec![0.0; m * m];
    for a in 0..m {
        for b in 0..m {
            centered[a * m + b] = -(k.get(a, b) - row_means[a] - col_means[b] + grand);
        }
    }
    let centered = psd_check(&centered, m, tol)?;
    let schoenberg = SCHOENBERG_EXPONENTS
        .iter()
        .map(|&x| {
            let e: Vec<f64> = k.entries.iter().map(|v| (-x * v).exp()).collect();
            psd_check(&e, m, tol).map(|r| (x, r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CndReport { centered, schoenberg })
}

/// How `metric_checks` covers triples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

/// Largest degree for exhaustive metric checks.
pub const MAX_EXHAUSTIVE_METRIC_DEGREE: usize = 5;
/// Largest degree for sampled metric checks.
pub const MAX_SAMPLED_METRIC_DEGREE: usize = 7;

/// Norm and metric axioms of `H` and `d(sigma, tau) = H(sigma^-1 tau)`:
/// `H(e) = 0`, symmetry `H(sigma) = H(sigma^-1)`, `H(sigma^-1 tau) <= H(sigma) + H(tau)`,
/// `d = 0` only on the diagonal, the triangle inequality and left invariance.
pub fn metric_checks(n: usize, sampling: Sampling) -> Result<GroupCheck> {
    let limit = match sampling {
        Sampling::Exhaustive => MAX_EXHAUSTIVE_METRIC_DEGREE,
        Sampling::Random { .. } => MAX_SAMPLED_METRIC_DEGREE,
    };
    if n == 0 || n > limit {
        return Err(Error::SizeLimit {
            what: "metric check degree",
            requested: n,
            limit,
        });
    }
    let name = format!("metric axioms on S({n})");
    let fail = |checked, w: String| {
        Ok(GroupCheck {
            name: name.clone(),
            checked,
            witness: Some(w),
        })
    };
    let e = Permutation::identity(n);
    if big_h(&e) != 0 {
        return fail(0, "H(e) != 0".into());
    }
    let d = |s: &Permutation, t: &Permutation| big_h(&s.inverse().compose(t));
    let check_triple = |s: &Permutation, t: &Permutation, r: &Permutation| -> Option<String> {
        let hs = big_h(s);
        if hs != big_h(&s.inverse()) {
            return Some(format!("H({s}) != H({s}^-1)"));
        }
        if d(s, t) > hs + big_h(t) {
            return Some(format!("H({s}^-1 {t}) > H({s}) + H({t})"));
        }
        if (d(s, t) == 0) != (s == t) {
            return Some(format!("d({s},{t}) = 0 does not match equality"));
        }
        if d(s, t) > d(s, r) + d(r, t) {
            return Some(format!("triangle inequality fails for ({s},{r},{t})"));
        }
        if d(&r.compose(s), &r.compose(t)) != d(s, t) {
            return Some(format!("left invariance fails for rho={r}, ({s},{t})"));
        }
        None
    };
    let mut checked = 0u64;
    match sampling {
        Sampling::Exhaustive => {
            let g = all_permutations(n);
            for s in &g {
                for t in &g {
                    for r in &g {
                        checked += 1;
                        if let Some(w) = check_triple(s, t, r) {
                            return fail(checked, w);
                        }
                    }
                }
            }
        }
        Sampling::Random { samples, seed } => {
            let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
            for _ in 0..samples {
                let s = random_permutation(n, &mut rng);
                let t = random_permutation(n, &mut rng);
                let r = random_permutation(n, &mut rng);
                checked += 1;
                if let Some(w) = check_triple(&s, &t, &r) {
                    return fail(checked, w);
                }
            }
        }
    }
    Ok(GroupCheck {
        name,
        checked,
        witness: None,
    })
}

/// Uniform permutation by Fisher-Yates.
pub fn random_permutation(n: usize, rng: &mut Xoshiro256PlusPlus) -> Permutation {
    let mut images: Vec<u32> = (1..=n as u32).collect();
    for i in (1..n).rev() {
        // bias of u64 % (i+1) is negligible for n <= 7
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        images.swap(i, j);
    }
    Permutation { images }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn permutation_basics() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        let s = p(&[2, 3, 1]);
        let t = p(&[1, 3, 2]);
        // (s t)(1) = s(t(1)) = s(1) = 2
        assert_eq!(s.compose(&t), p(&[2, 1, 3]));
        assert!(s.compose(&s.inverse()).is_identity());
        assert_eq!(Permutation::full_cycle(3), p(&[2, 3, 1]));
        assert_eq!(s.extend(), p(&[2, 3, 1, 4]));
        let all = all_permutations(3);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn embedding_examples() {
        let pp = |b: &[(u32, u32)]| PairPartition::new(b.iter().copied()).unwrap();
        assert_eq!(embed(&Permutation::identity(2)), pp(&[(1, 4), (2, 3)]));
        assert_eq!(
            embed(&Permutation::transposition(2, 1, 2).unwrap()),
            pp(&[(1, 3), (2, 4)])
        );
        let id = embed(&Permutation::identity(5));
        assert_eq!(id.singletons(), 5);
        assert_eq!(id.crossings(), 0);
    }

    #[test]
    fn isolated_fixed_point_examples() {
        for n in 1..=6 {
            assert_eq!(isolated_fixed_points(&Permutation::identity(n)), n);
        }
        for n in 2..=6 {
            for k in 1..n as u32 {
                let t = Permutation::transposition(n, k, k + 1).unwrap();
                assert_eq!(isolated_fixed_points(&t), n - 2);
                assert_eq!(big_h(&t), 2);
            }
            assert_eq!(isolated_fixed_points(&Permutation::full_cycle(n)), 0);
            assert_eq!(big_h(&Permutation::full_cycle(n)), n);
        }
        // 2 is fixed but not isolated: {1} maps to {3}
        assert_eq!(isolated_fixed_points(&p(&[3, 2, 1])), 0);
        assert_eq!(big_h(&p(&[2, 3, 1])), 3);
    }

    #[test]
    fn h_is_stable_under_extension() {
        for n in 1..=5 {
            for s in all_permutations(n) {
                assert_eq!(big_h(&s), big_h(&s.extend()));
            }
        }
    }

    #[test]
    fn delta_decomposition() {
        for n in 1..=5 {
            for s in all_permutations(n) {
                let total: usize = (0..n).map(|k| delta_k(&s, k)).sum();
                assert_eq!(total, big_h(&s));
            }
        }
    }

    #[test]
    fn theorem5_small() {
        let r = theorem5_identity(2).unwrap();
        assert!(r.passed());
        assert_eq!(r.checked, 2);
        assert!(theorem5_identity(4).unwrap().passed());
        assert!(theorem5_identity(8).is_err());
    }

    #[test]
    fn kernel_examples() {
        let ones = kernel_matrix(3, |_| 1.0).unwrap();
        assert!(ones.entries.iter().all(|&x| x == 1.0));
        let r = check_positive_definite(3, |_| 1.0, DEFAULT_PSD_TOL).unwrap();
        assert!(r.psd);
        let delta = kernel_matrix(3, |s| if s.is_identity() { 1.0 } else { 0.0 }).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(delta.get(a, b), if a == b { 1.0 } else { 0.0 });
            }
        }
        let h = kernel_matrix(3, |s| isolated_fixed_points(s) as f64).unwrap();
        assert!((0..6).all(|a| h.get(a, a) == 3.0));
        assert!(h.is_symmetric());
        assert!(kernel_matrix(6, |_| 1.0).is_err());
    }

    #[test]
    fn all_ones_spectrum() {
        let k = kernel_matrix(3, |_| 1.0).unwrap();
        let eig = crate::linalg::symmetric_eigenvalues(&k.entries, 6).unwrap();
        assert!((eig[5] - 6.0).abs() < 1e-12);
        assert!(eig[..5].iter().all(|l| l.abs() < 1e-12));
    }

    #[test]
    fn cnd_small() {
        let r = check_cnd(3, DEFAULT_PSD_TOL).unwrap();
        assert!(r.passed(), "{:?}", r.witness());
        assert_eq!(r.schoenberg.len(), 4);
    }

    #[test]
    fn non_cnd_kernel_is_detected() {
        // a positive definite function is not conditionally negative definite:
        // the centered form of -K for K = h_3 fails
        let k = kernel_matrix(3, |s| -(isolated_fixed_points(s) as f64)).unwrap();
        let m = k.order;
        let r = crate::linalg::psd_check(&k.entries, m, DEFAULT_PSD_TOL).unwrap();
        assert!(!r.psd);
    }

    #[test]
    fn metric_small() {
        let r = metric_checks(3, Sampling::Exhaustive).unwrap();
        assert!(r.passed(), "{:?}", r.witness);
        assert_eq!(r.checked, 216);
        let r = metric_checks(6, Sampling::Random { samples: 2000, seed: 1 }).unwrap();
        assert!(r.passed());
        assert!(metric_checks(6, Sampling::Exhaustive).is_err());
        assert!(metric_checks(8, Sampling::Random { samples: 1, seed: 1 }).is_err());
    }
}
