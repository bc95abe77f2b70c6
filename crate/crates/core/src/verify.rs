//! Bundled verification suite.
//!
//! `quick` runs every check at reduced size (well under a minute); `full` runs
//! the desk-scale sizes, including the `2n = 16` pairing count and the
//! `n = 1000` Markov matrix Monte Carlo.

use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::Result;
use crate::moments::{
    cumulants_from_moments, free_convolve, moments_from_cumulants, mu_b_moments, semigroup_check, CumulantSequence,
    MomentSequence, NcEvenTable, PairingTable,
};
use crate::pairings::{
    enumerate_pairings, riordan_connected, statistic_distribution, total_singletons, EnumerationCap,
};
use crate::permgroup::{
    all_permutations, big_h, check_cnd, check_positive_definite, embed, isolated_fixed_points, metric_checks,
    theorem5_identity, Sampling, DEFAULT_PSD_TOL,
};
use crate::randmat::{run_mc, EntryDistribution, McConfig};
use crate::scalar::rational;
use crate::weights::{check_strong_multiplicativity, check_traceability, ChordStatistic, WeightSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// `(2n-1)!!` for `n = 1..=8`.
pub const PAIRING_COUNTS: [u64; 8] = [1, 3, 15, 105, 945, 10395, 135135, 2027025];
/// Connected pairings `c_2 .. c_12`.
pub const CONNECTED_COUNTS: [u64; 6] = [1, 1, 4, 27, 248, 2830];
/// `T_2 .. T_14`.
pub const SINGLETON_TOTALS: [u64; 7] = [1, 4, 21, 144, 1245, 13140, 164745];
/// `sum_V 2^h(V)` for `2n = 2, 4, 6`.
pub const MARKOV_LIMIT_MOMENTS: [u64; 3] = [2, 9, 56];

type Check = (&'static str, fn(Level, EnumerationCap) -> Result<(bool, String)>);

fn checks() -> Vec<Check> {
    vec![
        ("pairing-counts", pairing_counts),
        ("connected-counts", connected_counts),
        ("singleton-totals", singleton_totals),
        ("main-lemma", main_lemma),
        ("mu-b-dual-path", mu_b_dual_path),
        ("cumulant-scaling", cumulant_scaling),
        ("semigroup", semigroup),
        ("markov-limit-moments", markov_limit_moments),
        ("markov-monte-carlo", markov_monte_carlo),
        ("permutation-suite", permutation_suite),
        ("property-suite", property_suite),
    ]
}

pub fn check_ids() -> Vec<&'static str> {
    checks().into_iter().map(|(id, _)| id).collect()
}

pub fn run(level: Level, cap: EnumerationCap) -> Vec<CheckOutcome> {
    checks()
        .into_iter()
        .map(|(id, f)| {
            let start = Instant::now();
            let (passed, detail) = match f(level, cap) {
                Ok(r) => r,
                Err(e) => (false, format!("error: {e}")),
            };
            CheckOutcome {
                id,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

fn pairing_counts(level: Level, cap: EnumerationCap) -> Result<(bool, String)> {
    let nmax = if level == Level::Full { 8 } else { 7 };
    let counts: Vec<u64> = (1..=nmax)
        .map(|n| enumerate_pairings(n, cap).map(|s| s.count() as u64))
        .collect::<Result<_>>()?;
    Ok((counts == PAIRING_COUNTS[..nmax], format!("{counts:?}")))
}

fn connected_counts(_: Level, cap: EnumerationCap) -> Result<(bool, String)> {
    let brute: Vec<BigUint> = (1..=6)
        .map(|n| statistic_distribution(n, cap).map(|d| d.connected()))
        .collect::<Result<_>>()?;
    let rec = riordan_connected(6);
    let expect: Vec<BigUint> = CONNECTED_COUNTS.iter().map(|&c| BigUint::from(c)).collect();
    Ok((brute == rec && rec == expect, join(&brute)))
}

fn singleton_totals(_: Level, cap: EnumerationCap) -> Result<(bool, String)> {
    // total_singletons runs the closed form and the enumeration and errors on mismatch
    let t: Vec<BigUint> = (1..=7).map(|n| total_singletons(n, cap)).collect::<Result<_>>()?;
    let expect: Vec<BigUint> = SINGLETON_TOTALS.iter().map(|&c| BigUint::from(c)).collect();
    Ok((t == expect, join(&t)))
}

fn lemma_specs() -> Vec<WeightSpec<BigRational>> {
    vec![
        WeightSpec::Constant1,
        WeightSpec::SingletonHPower(rational(1, 2)),
        WeightSpec::CrossingPower(rational(1, 3)),
        WeightSpec::ComponentPower(rational(2, 3)),
    ]
}

fn main_lemma(_: Level, cap: EnumerationCap) -> Result<(bool, String)> {
    let table = PairingTable::new(5, cap)?;
    let nc = NcEvenTable::new(5, cap)?;
    let mut ok = true;
    for spec in lemma_specs() {
        let via_cumulants = nc.moments_from_cumulants(&table.connected_cumulants(&spec))?;
        ok &= via_cumulants == table.moments(&spec);
    }
    Ok((
        ok,
        "moments_from_cumulants(connected sums) = moments, N <= 5, 4 weights".into(),
    ))
}

fn mu_b_dual_path(_: Level, cap: EnumerationCap) -> Result<(bool, String)> {
    let mut ok = true;
    for (p, q) in [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)] {
        let r = mu_b_moments(&WeightSpec::Constant1, &rational(p, q), 5, cap)?;
        ok &= r.path_a == r.path_b;
    }
    let b0 = mu_b_moments(&WeightSpec::Constant1, &rational(0, 1), 5, cap)?;
    let b1 = mu_b_moments(&WeightSpec::Constant1, &rational(1, 1), 5, cap)?;
    ok &= b0.path_a == MomentSequence::semicircle(5) && b1.path_a == MomentSequence::gaussian(5);
    Ok((ok, "b in {0, 1/4, 1/2, 3/4, 1}, N <= 5".into()))
}

fn cumulant_scaling(_: Level, cap: EnumerationCap) -> Result<(bool, String)> {
    let mut ok = true;
    let c = riordan_connected(5);
    for (p, q) in [(1, 4), (1, 2), (3, 4), (2, 3)] {
        let b = rational(p, q);
        let m = mu_b_moments(&WeightSpec::Constant1, &b, 5, cap)?.path_a;
        let r = cumulants_from_moments(&m, cap)?;
        ok &= r.get(1) == &rational(1, 1);
        for n in 2..=5 {
            let expect = num_traits::pow::pow(b.clone(), n) * BigRational::from_integer(c[n - 1].clone().into());
            ok &= r.get(n) == &expect;
        }
    }
    Ok((ok, "r_2 = 1, r_2n = b^n c_2n for 2 <= n <= 5".into()))
}

fn semigroup(_: Level, cap: EnumerationCap) -> Result<(bool, String)> {
    let mut ok = true;
    for b in [rational(1, 2), rational(1, 3)] {
        for c in [rational(1, 2), rational(2, 3)] {
            ok &= semigroup_check(&b, &c, 6, cap)?.passed;
        }
    }
    Ok((ok, "(b, c) in {1/2, 1/3} x {1/2, 2/3}, N <= 6".into()))
}

fn markov_limit_moments(_: Level, cap: EnumerationCap) -> Result<(bool, String)> {
    let table = PairingTable::new(3, cap)?;
    let by_weight = table.moments(&WeightSpec::SingletonCountPower(rational(2, 1)));
    let nc = NcEvenTable::new(3, cap)?;
    let by_convolution = free_convolve(&MomentSequence::semicircle(3), &MomentSequence::gaussian(3), 3, &nc)?;
    let expect = MomentSequence::new(MARKOV_LIMIT_MOMENTS.iter().map(|&x| rational(x as i64, 1)).collect());
    Ok((
        by_weight == expect && by_convolution == expect,
        by_weight.rendered().join(","),
    ))
}

fn markov_monte_carlo(level: Level, cap: EnumerationCap) -> Result<(bool, String)> {
    let cfg = match level {
        Level::Full => McConfig {
            n: 1000,
            trials: 20,
            kmax: 6,
            dist: EntryDistribution::Rademacher,
            seed: 42,
        },
        Level::Quick => McConfig {
            n: 300,
            trials: 10,
            kmax: 6,
            dist: EntryDistribution::Rademacher,
            seed: 42,
        },
    };
    let report = run_mc(&cfg, cap)?;
    let summary = report
        .moments
        .iter()
        .map(|e| format!("m{}={:.4}", e.k, e.mean))
        .collect::<Vec<_>>()
        .join(" ");
    Ok((report.even_pass(4.0) && report.odd_pass(3.0), summary))
}

fn permutation_suite(level: Level, _: EnumerationCap) -> Result<(bool, String)> {
    let mut ok = true;
    let emax = if level == Level::Full { 6 } else { 5 };
    for n in 1..=emax {
        for s in all_permutations(n) {
            ok &= isolated_fixed_points(&s) == embed(&s).singletons();
        }
    }
    for d in 2..=emax {
        ok &= theorem5_identity(d)?.passed();
    }
    let tol = DEFAULT_PSD_TOL;
    ok &= check_positive_definite(4, |s| isolated_fixed_points(s) as f64, tol)?.psd;
    ok &= check_positive_definite(4, |s| 2f64.powi(isolated_fixed_points(s) as i32), tol)?.psd;
    ok &= check_positive_definite(4, |s| (-0.5 * big_h(s) as f64).exp(), tol)?.psd;
    ok &= check_cnd(4, tol)?.passed();
    ok &= metric_checks(4, Sampling::Exhaustive)?.passed();
    let samples = if level == Level::Full { 100_000 } else { 10_000 };
    ok &= metric_checks(6, Sampling::Random { samples, seed: 6 })?.passed();
    Ok((
        ok,
        format!("embedding n <= {emax}, PSD/CND on S(4), metric S(4) + {samples} samples on S(6)"),
    ))
}

fn property_suite(_: Level, cap: EnumerationCap) -> Result<(bool, String)> {
    let mut ok = true;
    for stat in [
        ChordStatistic::Crossings,
        ChordStatistic::Singletons,
        ChordStatistic::Components,
    ] {
        ok &= check_traceability(stat, 6, cap)?.passed();
    }
    for spec in lemma_specs() {
        ok &= check_strong_multiplicativity(&spec, 5, cap)?.passed();
    }
    // fixed pseudo-random rational round trip
    let r = CumulantSequence::new(
        (1..=6)
            .map(|k| rational((k * 7 % 11) as i64 - 5, (k % 4 + 1) as i64))
            .collect(),
    );
    let back = cumulants_from_moments(&moments_from_cumulants(&r, cap)?, cap)?;
    ok &= back == r;
    Ok((
        ok,
        "rotation invariance n <= 6, factorization n <= 5, cumulant round trip N = 6".into(),
    ))
}

fn join(v: &[BigUint]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}
