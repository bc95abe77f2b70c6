//! Monte Carlo spectra of Markov random matrices.
//!
//! `M = X - diag(row sums of X)` for a symmetric `X` with i.i.d. entries on and
//! above the diagonal. The empirical spectral moments of `M / sqrt(n)` are
//! compared with the moments of the semicircle law freely convolved with the
//! standard normal, `m_{2n} = sum_V 2^h(V)`.
//!
//! Random numbers come from xoshiro256++ seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`). Trial `t` of a run with seed `s` uses
//! the seed [`trial_seed`]`(s, t)`, so every trial matrix can be regenerated on
//! its own with [`sample_markov`].

use std::io::Write;

use num_rational::BigRational;
use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigenvalues;
use crate::moments::moments_of_weight;
use crate::pairings::EnumerationCap;
use crate::scalar::{rational, Scalar};
use crate::weights::WeightSpec;

/// Entry law of `X`; both have mean 0 and variance 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryDistribution {
    /// `+1` or `-1` with probability 1/2.
    Rademacher,
    /// Standard normal by the Box-Muller transform.
    Gaussian,
}

/// Dense symmetric matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("matrix rows must all have length n".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, other) in rows.iter().enumerate().skip(i + 1) {
                if row[j] != other[i] {
                    return Err(Error::InvalidArgument(format!("matrix not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(SymMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.data.chunks(self.n.max(1)).map(|r| r.iter().sum()).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }
}

/// Per-trial seed: SplitMix64 finalizer applied to `seed + (trial + 1) * golden gamma`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed.wrapping_add(trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct EntrySampler {
    rng: Xoshiro256PlusPlus,
    dist: EntryDistribution,
    spare: Option<f64>,
}

impl EntrySampler {
    fn new(dist: EntryDistribution, seed: u64) -> Self {
        EntrySampler {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
            dist,
            spare: None,
        }
    }

    /// Uniform on `(0, 1]`.
    fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 1.0) * (1.0 / (1u64 << 53) as f64)
    }

    fn sample(&mut self) -> f64 {
        match self.dist {
            EntryDistribution::Rademacher => {
                if self.rng.next_u64() >> 63 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            EntryDistribution::Gaussian => {
                if let Some(z) = self.spare.take() {
                    return z;
                }
                let r = (-2.0 * self.uniform().ln()).sqrt();
                let theta = std::f64::consts::TAU * self.uniform();
                self.spare = Some(r * theta.sin());
                r * theta.cos()
            }
        }
    }
}

/// Samples `M = X - diag(row sums of X)`; entries of `X` are drawn row by row
/// over `j >= i`.
pub fn sample_markov(n: usize, dist: EntryDistribution, seed: u64) -> Result<SymMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("Markov matrices need n >= 2, got {n}")));
    }
    let mut sampler = EntrySampler::new(dist, seed);
    let mut x = SymMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            x.set_sym(i, j, sampler.sample());
        }
    }
    let sums = x.row_sums();
    for (i, s) in sums.into_iter().enumerate() {
        x.data[i * n + i] -= s;
    }
    Ok(x)
}

fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    // SAFETY: all three buffers are n x n row-major and c does not alias a or b.
    unsafe {
        matrixmultiply::dgemm(
            n,
            n,
            n,
            1.0,
            a.as_ptr(),
            n as isize,
            1,
            b.as_ptr(),
            n as isize,
            1,
            0.0,
            c.as_mut_ptr(),
            n as isize,
            1,
        );
    }
    c
}

/// `m_k = (1/n) trace((M / sqrt n)^k)` for `k = 1..=kmax` (index `k - 1`).
///
/// Powers `A^j` are formed by repeated products up to `j = ceil(kmax / 2)`;
/// `trace(A^(i+j)) = sum_ab (A^i)_ab (A^j)_ab` since the powers are symmetric.
pub fn empirical_moments(m: &SymMatrix, kmax: usize) -> Vec<f64> {
    let n = m.dim();
    if kmax == 0 || n == 0 {
        return Vec::new();
    }
    let scale = 1.0 / (n as f64).sqrt();
    let a: Vec<f64> = m.data.iter().map(|x| x * scale).collect();
    let half = kmax.div_ceil(2);
    let mut powers: Vec<Vec<f64>> = vec![a];
    while powers.len() < half {
        let next = matmul(powers.last().expect("nonempty"), &powers[0], n);
        powers.push(next);
    }
    let nf = n as f64;
    (1..=kmax)
        .map(|k| {
            if k == 1 {
                let t: f64 = (0..n).map(|i| powers[0][i * n + i]).sum();
                return t / nf;
            }
            let j = k / 2;
            let i = k - j;
            let t: f64 = powers[i - 1].iter().zip(&powers[j - 1]).map(|(x, y)| x * y).sum();
            t / nf
        })
        .collect()
}

/// Eigenvalues of `M` ascending, by cyclic Jacobi.
pub fn spectrum(m: &SymMatrix) -> Result<Vec<f64>> {
    symmetric_eigenvalues(&m.data, m.n)
}

/// `(1/n) sum_i (lambda_i / sqrt n)^k` for `k = 1..=kmax`.
pub fn eigen_moments(eigenvalues: &[f64], kmax: usize) -> Vec<f64> {
    let n = eigenvalues.len() as f64;
    let s = n.sqrt();
    (1..=kmax as i32)
        .map(|k| eigenvalues.iter().map(|l| (l / s).powi(k)).sum::<f64>() / n)
        .collect()
}

/// Histogram of values over `bins` equal-width bins spanning `[min, max]`.
pub fn histogram(values: &[f64], bins: usize) -> Result<Vec<(f64, f64, u64)>> {
    if bins == 0 || values.is_empty() {
        return Err(Error::InvalidArgument(
            "histogram needs values and at least one bin".into(),
        ));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = if hi > lo { (hi - lo) / bins as f64 } else { 1.0 };
    let mut counts = vec![0u64; bins];
    for &v in values {
        let idx = (((v - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| (lo + i as f64 * width, lo + (i + 1) as f64 * width, c))
        .collect())
}

/// Writes `bin_left,bin_right,count` CSV.
pub fn write_histogram_csv<W: Write>(mut out: W, bins: &[(f64, f64, u64)]) -> std::io::Result<()> {
    writeln!(out, "bin_left,bin_right,count")?;
    for (l, r, c) in bins {
        writeln!(
            out,
            "{},{},{}",
            crate::scalar::format_float(*l),
            crate::scalar::format_float(*r),
            c
        )?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McConfig {
    pub n: usize,
    pub trials: usize,
    pub kmax: usize,
    pub dist: EntryDistribution,
    pub seed: u64,
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidArgument("n must be at least 2".into()));
        }
        if self.trials < 1 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.kmax < 2 {
            return Err(Error::InvalidArgument("kmax must be at least 2".into()));
        }
        Ok(())
    }
}

/// One row of a Monte Carlo report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub k: usize,
    pub mean: f64,
    /// Sample standard deviation over trials divided by `sqrt(trials)`; 0 for a single trial.
    pub stderr: f64,
    /// Limit moment: `sum_V 2^h(V)` for even `k`, 0 for odd `k`.
    pub target: f64,
    /// Exact target as `p/q`.
    pub target_exact: String,
    /// `|mean - target| / stderr`; absent when `stderr = 0`.
    pub z: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McReport {
    pub config: McConfig,
    pub moments: Vec<MomentEstimate>,
}

impl McReport {
    /// Every even moment has a z-score no larger than `zmax`.
    pub fn even_pass(&self, zmax: f64) -> bool {
        self.moments
            .iter()
            .filter(|e| e.k % 2 == 0)
            .all(|e| e.z.is_some_and(|z| z <= zmax))
    }

    /// Every odd moment satisfies `|mean| <= mult * stderr`.
    pub fn odd_pass(&self, mult: f64) -> bool {
        self.moments
            .iter()
            .filter(|e| e.k % 2 == 1)
            .all(|e| e.mean.abs() <= mult * e.stderr)
    }

    pub fn estimate(&self, k: usize) -> Option<&MomentEstimate> {
        self.moments.iter().find(|e| e.k == k)
    }
}

/// Exact moments of the Markov limit law up to order `kmax` (odd ones zero).
pub fn limit_moments(kmax: usize, cap: EnumerationCap) -> Result<Vec<BigRational>> {
    let even = moments_of_weight(&WeightSpec::SingletonCountPower(rational(2, 1)), kmax / 2, cap)?;
    Ok((1..=kmax)
        .map(|k| {
            if k % 2 == 1 {
                rational(0, 1)
            } else {
                even.get(k / 2).clone()
            }
        })
        .collect())
}

pub fn run_mc(cfg: &McConfig, cap: EnumerationCap) -> Result<McReport> {
    cfg.validate()?;
    let targets = limit_moments(cfg.kmax, cap)?;
    let per_trial: Vec<Vec<f64>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let m = sample_markov(cfg.n, cfg.dist, trial_seed(cfg.seed, t)).expect("config validated");
            empirical_moments(&m, cfg.kmax)
        })
        .collect();
    let trials = cfg.trials as f64;
    let moments = (0..cfg.kmax)
        .map(|idx| {
            let mean = per_trial.iter().map(|v| v[idx]).sum::<f64>() / trials;
            let stderr = if cfg.trials > 1 {
                let var = per_trial.iter().map(|v| (v[idx] - mean).powi(2)).sum::<f64>() / (trials - 1.0);
                (var / trials).sqrt()
            } else {
                0.0
            };
            let target = targets[idx].to_f64();
            MomentEstimate {
                k: idx + 1,
                mean,
                stderr,
                target,
                target_exact: targets[idx].render(),
                z: (stderr > 0.0).then(|| (mean - target).abs() / stderr),
            }
        })
        .collect();
    Ok(McReport {
        config: cfg.clone(),
        moments,
    })
}
