//! Weight functions `t` on pair partitions.
//!
//! Every weight here depends on a pairing only through `(n, cr, h, cc)`, so sums
//! over `P2(2n)` reduce to sums over the cells of a [`StatisticDistribution`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;

use crate::error::Result;
use crate::pairings::{
    enumerate_pairings, statistic_distribution, EnumerationCap, PairPartition, StatKey, StatisticDistribution,
};
use crate::scalar::{Scalar, FLOAT_TOL};

/// A chord statistic, as a function of `n` and the `(cr, h, cc)` cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChordStatistic {
    /// `cr(V)`
    Crossings,
    /// `h(V)`
    Singletons,
    /// `cc(V)`
    Components,
    /// `H(V) = n - h(V)`
    NonSingletons,
    /// `n - cc(V)`
    ComponentDeficit,
}

impl ChordStatistic {
    pub fn value(self, n: usize, key: &StatKey) -> u32 {
        match self {
            ChordStatistic::Crossings => key.cr,
            ChordStatistic::Singletons => key.h,
            ChordStatistic::Components => key.cc,
            ChordStatistic::NonSingletons => n as u32 - key.h,
            ChordStatistic::ComponentDeficit => n as u32 - key.cc,
        }
    }

    pub fn of(self, v: &PairPartition) -> u32 {
        self.value(v.n(), &v.statistics().into())
    }

    pub fn name(self) -> &'static str {
        match self {
            ChordStatistic::Crossings => "cr",
            ChordStatistic::Singletons => "h",
            ChordStatistic::Components => "cc",
            ChordStatistic::NonSingletons => "H",
            ChordStatistic::ComponentDeficit => "n-cc",
        }
    }
}

/// Declarative weight function on pair partitions.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightSpec<T> {
    /// `t = 1`, the classical Gaussian weight.
    Constant1,
    /// `q^cr(V)`
    CrossingPower(T),
    /// `s^(n - cc(V))`
    ComponentPower(T),
    /// `b^H(V)`; with `0^0 = 1`, `b = 0` is the indicator of non-crossing pairings.
    SingletonHPower(T),
    /// `beta^h(V)`; not normalized unless `beta = 1`.
    SingletonCountPower(T),
    Product(Vec<WeightSpec<T>>),
}

impl<T: Scalar> WeightSpec<T> {
    pub fn evaluate(&self, v: &PairPartition) -> T {
        self.evaluate_cell(v.n(), &v.statistics().into())
    }

    /// Weight of any pairing with `n` blocks falling in cell `key`.
    pub fn evaluate_cell(&self, n: usize, key: &StatKey) -> T {
        match self {
            WeightSpec::Constant1 => T::one(),
            WeightSpec::Product(parts) => parts.iter().fold(T::one(), |acc, p| acc * p.evaluate_cell(n, key)),
            primitive => {
                let (stat, param) = primitive.primitive().expect("non-primitive handled above");
                param.powu(stat.value(n, key))
            }
        }
    }

    /// The `(statistic, parameter)` of a single power weight.
    pub fn primitive(&self) -> Option<(ChordStatistic, &T)> {
        match self {
            WeightSpec::CrossingPower(q) => Some((ChordStatistic::Crossings, q)),
            WeightSpec::ComponentPower(s) => Some((ChordStatistic::ComponentDeficit, s)),
            WeightSpec::SingletonHPower(b) => Some((ChordStatistic::NonSingletons, b)),
            WeightSpec::SingletonCountPower(beta) => Some((ChordStatistic::Singletons, beta)),
            WeightSpec::Constant1 | WeightSpec::Product(_) => None,
        }
    }

    pub fn map<U, F: Fn(&T) -> U + Copy>(&self, f: F) -> WeightSpec<U> {
        match self {
            WeightSpec::Constant1 => WeightSpec::Constant1,
            WeightSpec::CrossingPower(q) => WeightSpec::CrossingPower(f(q)),
            WeightSpec::ComponentPower(s) => WeightSpec::ComponentPower(f(s)),
            WeightSpec::SingletonHPower(b) => WeightSpec::SingletonHPower(f(b)),
            WeightSpec::SingletonCountPower(b) => WeightSpec::SingletonCountPower(f(b)),
            WeightSpec::Product(p) => WeightSpec::Product(p.iter().map(|w| w.map(f)).collect()),
        }
    }

    /// `sum_V t(V)` over the pairings summarized by `dist`.
    pub fn sum_over(&self, dist: &StatisticDistribution) -> T {
        self.sum_over_cells(dist, |_| true)
    }

    pub fn sum_over_cells(&self, dist: &StatisticDistribution, keep: impl Fn(&StatKey) -> bool) -> T {
        dist.counts
            .iter()
            .filter(|(k, _)| keep(k))
            .fold(T::zero(), |acc, (k, c)| {
                acc + T::from_count(c) * self.evaluate_cell(dist.n, k)
            })
    }
}

impl WeightSpec<BigRational> {
    pub fn to_f64(&self) -> WeightSpec<f64> {
        self.map(|x| x.to_f64())
    }
}

impl<T: fmt::Display> fmt::Display for WeightSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Constant1 => write!(f, "1"),
            WeightSpec::CrossingPower(q) => write!(f, "({q})^cr"),
            WeightSpec::ComponentPower(s) => write!(f, "({s})^(n-cc)"),
            WeightSpec::SingletonHPower(b) => write!(f, "({b})^H"),
            WeightSpec::SingletonCountPower(b) => write!(f, "({b})^h"),
            WeightSpec::Product(p) => {
                for (i, w) in p.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{w}")?;
                }
                Ok(())
            }
        }
    }
}

/// Distribution of one statistic over `P2(2n)`: exponent -> number of pairings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatisticPolynomial {
    pub n: usize,
    pub statistic: ChordStatistic,
    pub coefficients: BTreeMap<u32, BigUint>,
}

impl StatisticPolynomial {
    pub fn from_distribution(dist: &StatisticDistribution, statistic: ChordStatistic) -> Self {
        StatisticPolynomial {
            n: dist.n,
            statistic,
            coefficients: dist.marginal(|k| statistic.value(dist.n, k)),
        }
    }

    /// `sum_k coeff_k * x^k` with `0^0 = 1`.
    pub fn evaluate<T: Scalar>(&self, x: &T) -> T {
        self.coefficients
            .iter()
            .fold(T::zero(), |acc, (k, c)| acc + T::from_count(c) * x.powu(*k))
    }

    pub fn coefficient_sum(&self) -> BigUint {
        self.coefficients.values().sum()
    }
}

pub fn statistic_polynomial(statistic: ChordStatistic, n: usize, cap: EnumerationCap) -> Result<StatisticPolynomial> {
    Ok(StatisticPolynomial::from_distribution(
        &statistic_distribution(n, cap)?,
        statistic,
    ))
}

/// Outcome of an exhaustive property check over pair partitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub property: String,
    pub checked: u64,
    pub counterexample: Option<PairPartition>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks `t(V) = prod_C t(standardize(C))` over crossing-graph components `C`
/// for every pairing with at most `nmax` blocks.
pub fn check_strong_multiplicativity<T: Scalar>(
    spec: &WeightSpec<T>,
    nmax: usize,
    cap: EnumerationCap,
) -> Result<PropertyReport> {
    check_component_factorization(
        &format!("strong multiplicativity of {spec}"),
        |v| spec.evaluate(v),
        nmax,
        cap,
    )
}

/// Component factorization check for an arbitrary function on pairings.
pub fn check_component_factorization<T: Scalar>(
    property: &str,
    weight: impl Fn(&PairPartition) -> T,
    nmax: usize,
    cap: EnumerationCap,
) -> Result<PropertyReport> {
    let mut checked = 0u64;
    for n in 1..=nmax {
        for v in enumerate_pairings(n, cap)? {
            checked += 1;
            let whole = weight(&v);
            let factored = v.connected_components().iter().fold(T::one(), |acc, c| {
                let part = PairPartition::standardize(c).expect("component is a pairing of its support");
                acc * weight(&part)
            });
            if !whole.close_to(&factored, FLOAT_TOL) {
                return Ok(PropertyReport {
                    property: property.to_string(),
                    checked,
                    counterexample: Some(v),
                });
            }
        }
    }
    Ok(PropertyReport {
        property: property.to_string(),
        checked,
        counterexample: None,
    })
}

/// Checks `stat(V) = stat(rotate(V))` for every pairing with at most `nmax` blocks.
pub fn check_traceability(stat: ChordStatistic, nmax: usize, cap: EnumerationCap) -> Result<PropertyReport> {
    let mut checked = 0u64;
    let property = format!("rotation invariance of {}", stat.name());
    for n in 1..=nmax {
        for v in enumerate_pairings(n, cap)? {
            checked += 1;
            if stat.of(&v) != stat.of(&v.rotate()) {
                return Ok(PropertyReport {
                    property,
                    checked,
                    counterexample: Some(v),
                });
            }
        }
    }
    Ok(PropertyReport {
        property,
        checked,
        counterexample: None,
    })
}
