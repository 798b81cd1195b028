//! Scaling runs on adversarial instances: the primorial family, whose order
//! is exponential in its size, and large uniform random permutations.

use std::path::Path;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::analysis::{random_binary, random_permutation};
use crate::congruence::{solve_system, ArithmeticProgression, CostCounter};
use crate::orbit::{reduce_counted, Reduction};
use crate::permutation::{primorial_permutation, Configuration, Permutation};

pub const PRIMORIAL_MAX_I: usize = 25;
const TIMING_REPS: usize = 5;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("i_max = {0} outside [1, {PRIMORIAL_MAX_I}]")]
    OutOfRange(usize),
    #[error("instance {label}: solver missed the planted exponent {r_star}")]
    WrongAnswer { label: usize, r_star: BigUint },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    /// Family index `i` for primorial rows, degree for random rows.
    pub label: usize,
    pub degree: usize,
    pub input_size_bits: u64,
    pub order: BigUint,
    pub r_star: BigUint,
    /// Median over repeated runs of reduction plus solving.
    pub wall_time: Duration,
    pub word_ops: u64,
    /// Steps a naive enumeration of the group would take.
    pub naive_steps: BigUint,
    pub solutions: ArithmeticProgression,
}

impl ScalingRow {
    pub fn ops_per_bit(&self) -> f64 {
        self.word_ops as f64 / self.input_size_bits as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub seed: u64,
    pub rows: Vec<ScalingRow>,
}

impl ScalingReport {
    /// `max / min` of `word_ops / input_size_bits` over rows whose input size
    /// is within a factor ten of the largest.
    pub fn top_decade_ratio_spread(&self) -> f64 {
        let top = self.rows.iter().map(|r| r.input_size_bits).max().unwrap_or(0);
        let ratios: Vec<f64> =
            self.rows.iter().filter(|r| r.input_size_bits * 10 >= top).map(ScalingRow::ops_per_bit).collect();
        let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
        let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
        max / min
    }

    /// Writes one CSV line per row. Timings are left out so the file depends
    /// only on the inputs and the seed.
    pub fn write_csv(&self, path: &Path) -> Result<(), BenchError> {
        let mut out = csv::Writer::from_path(path)?;
        out.write_record([
            "label",
            "degree",
            "input_size_bits",
            "order",
            "r_star",
            "word_ops",
            "naive_steps",
            "solutions",
        ])?;
        for r in &self.rows {
            out.write_record([
                r.label.to_string(),
                r.degree.to_string(),
                r.input_size_bits.to_string(),
                r.order.to_string(),
                r.r_star.to_string(),
                r.word_ops.to_string(),
                r.naive_steps.to_string(),
                r.solutions.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Size of an instance in bits: the cycle notation plus both configurations
/// at `ceil(log2 |alphabet|)` bits per symbol (at least one).
pub fn input_size_bits(g: &Permutation, alphabet_size: usize) -> u64 {
    let per_symbol = (usize::BITS - alphabet_size.saturating_sub(1).leading_zeros()).max(1) as u64;
    g.size_bits() + 2 * per_symbol * g.degree() as u64
}

/// Uniform-ish value in `[0, bound)`; the bias from reducing 64 extra random
/// bits is negligible.
pub fn random_below<R: RngCore + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    let bytes = (bound.bits() as usize).div_ceil(8) + 8;
    let mut buf = vec![0u8; bytes];
    rng.fill_bytes(&mut buf);
    BigUint::from_bytes_le(&buf) % bound
}

/// `v` with a `1` at the first listed index of every cycle and `0`
/// elsewhere. Every cycle then has trivial stabiliser on `v`.
pub fn marked_configuration(g: &Permutation) -> Configuration {
    let mut symbols = vec!['0'; g.degree()];
    for c in g.cycles() {
        symbols[c.elements()[0]] = '1';
    }
    Configuration::new(symbols)
}

fn solve_once(g: &Permutation, v: &Configuration, w: &Configuration) -> (ArithmeticProgression, CostCounter) {
    let mut cost = CostCounter::new();
    let solutions = match reduce_counted(g, v, w, &mut cost).expect("degree matches") {
        Reduction::NotInOrbit => ArithmeticProgression::Empty,
        Reduction::System(sys) => solve_system(&sys, &mut cost),
    };
    (solutions, cost)
}

fn measure(
    label: usize,
    g: &Permutation,
    v: Configuration,
    r_star: BigUint,
    timed: bool,
) -> Result<ScalingRow, BenchError> {
    let w = g.apply_power(&r_star, &v).expect("degree matches");
    let (solutions, cost) = solve_once(g, &v, &w);
    if !solutions.contains(&BigInt::from(r_star.clone())) {
        return Err(BenchError::WrongAnswer { label, r_star });
    }
    let witness = solutions.offset().expect("nonempty");
    if g.apply_power(witness, &v).expect("degree matches") != w {
        return Err(BenchError::WrongAnswer { label, r_star });
    }
    let wall_time = if timed {
        let mut times: Vec<Duration> = (0..TIMING_REPS)
            .map(|_| {
                let start = Instant::now();
                std::hint::black_box(solve_once(g, &v, &w));
                start.elapsed()
            })
            .collect();
        times.sort();
        times[TIMING_REPS / 2]
    } else {
        Duration::ZERO
    };
    let order = g.order();
    Ok(ScalingRow {
        label,
        degree: g.degree(),
        input_size_bits: input_size_bits(g, 2),
        naive_steps: order.clone(),
        order,
        r_star,
        wall_time,
        word_ops: cost.word_ops(),
        solutions,
    })
}

fn primorial_row(i: usize, seed: u64, timed: bool) -> Result<ScalingRow, BenchError> {
    let g = primorial_permutation(i);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    let r_star = random_below(&g.order(), &mut rng);
    let v = marked_configuration(&g);
    measure(i, &g, v, r_star, timed)
}

/// For `i = 1..=i_max`, plants a random exponent `r* < ord(g_i)` in a
/// primorial instance, solves it, checks that `r*` is recovered and records
/// sizes, costs and timings.
pub fn run_primorial_scaling(i_max: usize, seed: u64) -> Result<ScalingReport, BenchError> {
    if !(1..=PRIMORIAL_MAX_I).contains(&i_max) {
        return Err(BenchError::OutOfRange(i_max));
    }
    let rows = (1..=i_max).map(|i| primorial_row(i, seed, true)).collect::<Result<_, _>>()?;
    Ok(ScalingReport { seed, rows })
}

/// The correctness part of [`run_primorial_scaling`] only, with the sizes
/// processed in parallel.
pub fn verify_primorial_parallel(i_max: usize, seed: u64) -> Result<ScalingReport, BenchError> {
    if !(1..=PRIMORIAL_MAX_I).contains(&i_max) {
        return Err(BenchError::OutOfRange(i_max));
    }
    let rows = (1..=i_max).into_par_iter().map(|i| primorial_row(i, seed, false)).collect::<Result<_, _>>()?;
    Ok(ScalingReport { seed, rows })
}

/// Uniform random permutations of each degree in `sizes` with a random
/// binary `v` and `w = g^r v` for a random 64-bit `r`.
pub fn run_random_scaling(sizes: &[usize], seed: u64, timed: bool) -> Result<ScalingReport, BenchError> {
    let rows = sizes
        .iter()
        .map(|&n| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(n as u64);
            let g = random_permutation(n, &mut rng);
            let v = random_binary(n, &mut rng);
            let r_star = BigUint::from(rng.random::<u64>());
            measure(n, &g, v, r_star, timed)
        })
        .collect::<Result<_, _>>()?;
    Ok(ScalingReport { seed, rows })
}
