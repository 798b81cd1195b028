//! Cycle-count moments of uniform random permutations.
//!
//! The moments `(1/n!) Σ_k k^s c(n,k)` of the unsigned Stirling numbers of
//! the first kind are checked exactly against closed forms in the harmonic
//! numbers `H_n`, `H_n^(2)`, `H_n^(3)`. The third moment bounds the expected
//! cost of the iterated congruence solver on reduction output; the
//! measurement half of this module samples that cost directly.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::congruence::{solve_system, CostCounter};
use crate::orbit::{reduce_counted, Reduction};
use crate::permutation::{Configuration, Permutation};

/// Largest `n` the Stirling table is built for.
pub const STIRLING_MAX_N: usize = 500;
/// Largest `n` the identity checker accepts.
pub const IDENTITY_MAX_N: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("n = {n} exceeds the supported maximum {max}")]
    TooLarge { n: usize, max: usize },
    #[error("n_max = {0} is below the minimum 10")]
    TooSmall(usize),
}

/// Unsigned Stirling numbers of the first kind `c(n, k)` for `n <= n_max`.
#[derive(Debug, Clone)]
pub struct StirlingTable {
    rows: Vec<Vec<BigUint>>,
}

impl StirlingTable {
    /// Builds the table from `c(n+1, k) = n·c(n, k) + c(n, k-1)`.
    pub fn new(n_max: usize) -> Result<Self, AnalysisError> {
        if n_max > STIRLING_MAX_N {
            return Err(AnalysisError::TooLarge { n: n_max, max: STIRLING_MAX_N });
        }
        let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for n in 0..n_max {
            let prev = &rows[n];
            let mut next = vec![BigUint::zero(); n + 2];
            for k in 1..=n + 1 {
                let mut val = prev[k - 1].clone();
                if k <= n {
                    val += &prev[k] * n;
                }
                next[k] = val;
            }
            rows.push(next);
        }
        Ok(StirlingTable { rows })
    }

    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// `c(n, k)`; zero for `k > n`. Panics if `n > n_max`.
    pub fn get(&self, n: usize, k: usize) -> BigUint {
        self.rows[n].get(k).cloned().unwrap_or_default()
    }

    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.rows[n]
    }

    /// `Σ_k k^power · c(n, k)`.
    pub fn weighted_sum(&self, n: usize, power: u32) -> BigUint {
        self.rows[n].iter().enumerate().map(|(k, c)| c * BigUint::from(k).pow(power)).sum()
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Exact `H_n^(s)` for `s = 1, 2, 3` and `n <= n_max`.
#[derive(Debug, Clone)]
pub struct HarmonicValues {
    orders: [Vec<BigRational>; 3],
}

impl HarmonicValues {
    pub fn new(n_max: usize) -> Self {
        let orders = [1u32, 2, 3].map(|s| {
            let mut acc = BigRational::zero();
            let mut out = Vec::with_capacity(n_max + 1);
            out.push(acc.clone());
            for k in 1..=n_max {
                acc += BigRational::new(BigInt::one(), BigInt::from(k).pow(s));
                out.push(acc.clone());
            }
            out
        });
        HarmonicValues { orders }
    }

    /// `H_n^(order)` for `order` in `1..=3`.
    pub fn get(&self, n: usize, order: u32) -> &BigRational {
        &self.orders[order as usize - 1][n]
    }

    pub fn h(&self, n: usize) -> &BigRational {
        self.get(n, 1)
    }
}

/// The closed forms checked by [`verify_moment_identities`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `(1/n!) Σ k c(n,k) = H_n`
    MeanCycles,
    /// `f(n) = (2/n!) c(n+1,3) + H_n`
    SecondMoment,
    /// `g(n) = (6/n!) c(n+1,4) + (6/n!) c(n+1,3) + H_n`
    ThirdMoment,
    /// `(1/n!) c(n+1,3) = (H_n² − H_n^(2)) / 2`
    StirlingThree,
    /// `(1/n!) c(n+1,4) = (H_n³ − 3 H_n H_n^(2) + 2 H_n^(3)) / 6`
    StirlingFour,
}

impl Identity {
    pub const ALL: [Identity; 5] = [
        Identity::MeanCycles,
        Identity::SecondMoment,
        Identity::ThirdMoment,
        Identity::StirlingThree,
        Identity::StirlingFour,
    ];
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Identity::MeanCycles => "(1/n!) sum k c(n,k) = H_n",
            Identity::SecondMoment => "f(n) = (2/n!) c(n+1,3) + H_n",
            Identity::ThirdMoment => "g(n) = (6/n!) c(n+1,4) + (6/n!) c(n+1,3) + H_n",
            Identity::StirlingThree => "(1/n!) c(n+1,3) = (H_n^2 - H_n^(2)) / 2",
            Identity::StirlingFour => "(1/n!) c(n+1,4) = (H_n^3 - 3 H_n H_n^(2) + 2 H_n^(3)) / 6",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub n_max: usize,
    /// Number of (identity, n) pairs evaluated.
    pub checked: usize,
    pub failures: Vec<(usize, Identity)>,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exact moments `f(n)` and `g(n)` plus the table entries the identities
/// need, for `1 <= n < table.n_max()`.
struct Moments {
    first: BigRational,
    second: BigRational,
    third: BigRational,
    c3: BigRational,
    c4: BigRational,
}

fn moments(table: &StirlingTable, n: usize) -> Moments {
    let fact = BigInt::from(factorial(n));
    let over_fact = |x: BigUint| BigRational::new(BigInt::from(x), fact.clone());
    Moments {
        first: over_fact(table.weighted_sum(n, 1)),
        second: over_fact(table.weighted_sum(n, 2)),
        third: over_fact(table.weighted_sum(n, 3)),
        c3: over_fact(table.get(n + 1, 3)),
        c4: over_fact(table.get(n + 1, 4)),
    }
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Checks every [`Identity`] exactly for each `n` in `1..=n_max`.
pub fn verify_moment_identities(n_max: usize) -> Result<IdentityReport, AnalysisError> {
    if n_max > IDENTITY_MAX_N {
        return Err(AnalysisError::TooLarge { n: n_max, max: IDENTITY_MAX_N });
    }
    let table = StirlingTable::new(n_max + 1)?;
    let harmonic = HarmonicValues::new(n_max);
    let results: Vec<Vec<(usize, Identity)>> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let m = moments(&table, n);
            let (h, h2, h3) = (harmonic.h(n), harmonic.get(n, 2), harmonic.get(n, 3));
            Identity::ALL
                .into_iter()
                .filter(|id| {
                    let holds = match id {
                        Identity::MeanCycles => &m.first == h,
                        Identity::SecondMoment => m.second == rat(2) * &m.c3 + h,
                        Identity::ThirdMoment => m.third == rat(6) * &m.c4 + rat(6) * &m.c3 + h,
                        Identity::StirlingThree => m.c3 == (h * h - h2) / rat(2),
                        Identity::StirlingFour => m.c4 == (h * h * h - rat(3) * h * h2 + rat(2) * h3) / rat(6),
                    };
                    !holds
                })
                .map(|id| (n, id))
                .collect()
        })
        .collect();
    Ok(IdentityReport {
        n_max,
        checked: n_max * Identity::ALL.len(),
        failures: results.into_iter().flatten().collect(),
    })
}

/// Whether `f(n) = H_n² − H_n^(order) + H_n` holds exactly.
pub fn second_moment_closed_form_holds(n: usize, order: u32) -> Result<bool, AnalysisError> {
    let table = StirlingTable::new(n + 1)?;
    let f = moments(&table, n).second;
    let mut higher = BigRational::zero();
    for k in 1..=n {
        higher += BigRational::new(BigInt::one(), BigInt::from(k).pow(order));
    }
    let h = HarmonicValues::new(n).h(n).clone();
    Ok(f == &h * &h - higher + h)
}

/// `g(n)` exactly.
pub fn third_moment(table: &StirlingTable, n: usize) -> BigRational {
    BigRational::new(BigInt::from(table.weighted_sum(n, 3)), BigInt::from(factorial(n)))
}

/// `(n, g(n) / ln³ n)` for `n` in `2..=n_max`.
pub fn asymptotic_ratio_report(n_max: usize) -> Result<Vec<(usize, f64)>, AnalysisError> {
    if n_max < 10 {
        return Err(AnalysisError::TooSmall(n_max));
    }
    let table = StirlingTable::new(n_max)?;
    Ok((2..=n_max)
        .into_par_iter()
        .map(|n| {
            let g = third_moment(&table, n).to_f64().expect("finite moment");
            (n, g / (n as f64).ln().powi(3))
        })
        .collect())
}

/// One sampled instance of [`measure_average_cost`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialSample {
    pub trial: u64,
    /// Cycle count including fixed points.
    pub k_cycles: usize,
    /// Word operations of the congruence solver on the reduced system.
    pub word_ops: u64,
    /// Widest value the congruence solver stored.
    pub max_bits: u64,
    /// Word operations of the reduction itself.
    pub reduce_ops: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AverageCostStats {
    pub n: usize,
    pub seed: u64,
    pub samples: Vec<TrialSample>,
    pub mean_cycles: f64,
    /// Standard error of `mean_cycles`.
    pub cycles_stderr: f64,
    pub mean_word_ops: f64,
    pub word_ops_p50: u64,
    pub word_ops_p90: u64,
    pub word_ops_p99: u64,
    pub mean_max_bits: f64,
    pub mean_reduce_ops: f64,
}

/// Deterministic generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform random permutation of `[n]` (Fisher-Yates).
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_mapping(&images)
}

pub fn random_binary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Configuration {
    Configuration::new((0..n).map(|_| if rng.random_bool(0.5) { '1' } else { '0' }).collect())
}

fn sample_trial(n: usize, seed: u64, trial: u64) -> TrialSample {
    let mut rng = trial_rng(seed, trial);
    let g = random_permutation(n, &mut rng);
    let v = random_binary(n, &mut rng);
    // w is drawn from the orbit of v so that every cycle contributes an
    // equation to the solved system.
    let r = BigUint::from(rng.random::<u64>());
    let w = g.apply_power(&r, &v).expect("degree matches");
    let mut reduce_cost = CostCounter::new();
    let mut solve_cost = CostCounter::new();
    match reduce_counted(&g, &v, &w, &mut reduce_cost).expect("degree matches") {
        Reduction::System(sys) => {
            let solutions = solve_system(&sys, &mut solve_cost);
            debug_assert!(!solutions.is_empty());
        }
        Reduction::NotInOrbit => unreachable!("w lies in the orbit of v"),
    }
    TrialSample {
        trial,
        k_cycles: g.cycles().len() + g.fixed_points().len(),
        word_ops: solve_cost.word_ops(),
        max_bits: solve_cost.max_bits(),
        reduce_ops: reduce_cost.word_ops(),
    }
}

fn percentile(sorted: &[u64], q: f64) -> u64 {
    let idx = ((sorted.len() as f64 - 1.0) * q).round() as usize;
    sorted[idx]
}

/// Samples `trials` uniform permutations of `[n]` with a random binary `v`
/// and `w = g^r v`, runs reduction and solving, and summarises the costs.
/// Results do not depend on thread scheduling.
pub fn measure_average_cost(n: usize, trials: u64, rng_seed: u64) -> AverageCostStats {
    assert!(n >= 1 && trials >= 1, "need n >= 1 and trials >= 1");
    let samples: Vec<TrialSample> = (0..trials).into_par_iter().map(|t| sample_trial(n, rng_seed, t)).collect();
    let count = samples.len() as f64;
    let mean = |f: &dyn Fn(&TrialSample) -> f64| samples.iter().map(f).sum::<f64>() / count;
    let mean_cycles = mean(&|s| s.k_cycles as f64);
    let variance = if samples.len() > 1 {
        samples.iter().map(|s| (s.k_cycles as f64 - mean_cycles).powi(2)).sum::<f64>() / (count - 1.0)
    } else {
        0.0
    };
    let mut ops: Vec<u64> = samples.iter().map(|s| s.word_ops).collect();
    ops.sort_unstable();
    AverageCostStats {
        n,
        seed: rng_seed,
        mean_cycles,
        cycles_stderr: (variance / count).sqrt(),
        mean_word_ops: mean(&|s| s.word_ops as f64),
        word_ops_p50: percentile(&ops, 0.5),
        word_ops_p90: percentile(&ops, 0.9),
        word_ops_p99: percentile(&ops, 0.99),
        mean_max_bits: mean(&|s| s.max_bits as f64),
        mean_reduce_ops: mean(&|s| s.reduce_ops as f64),
        samples,
    }
}

/// Least-squares exponent `c` in `cost ≈ C · (ln n)^c`.
pub fn fit_polylog_exponent(points: &[(usize, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|&(n, _)| (n as f64).ln().ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, c)| c.ln()).collect();
    let len = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / len, ys.iter().sum::<f64>() / len);
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}
