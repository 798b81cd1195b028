//! Deciding `∃r. g^r v = w` for a single generator `g` by reducing it to a
//! system of congruences, one per cycle.

use num_bigint::BigUint;
use thiserror::Error;

use crate::congruence::{solve_system, ArithmeticProgression, Congruence, CongruenceSystem, CostCounter};
use crate::permutation::{project, Configuration, Permutation};
use crate::strmatch::rotation_exponents_counted;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("configuration {which} has length {found}, permutation has degree {expected}")]
    LengthMismatch { which: &'static str, expected: usize, found: usize },
}

/// Outcome of an orbit query.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrbitAnswer {
    NotInOrbit,
    /// `solutions` is the full set of exponents `r` with `g^r v = w`;
    /// `witness` is its least nonnegative member.
    InOrbit {
        solutions: ArithmeticProgression,
        witness: BigUint,
    },
}

impl OrbitAnswer {
    pub(crate) fn from_solutions(solutions: ArithmeticProgression) -> Self {
        match solutions.offset() {
            None => OrbitAnswer::NotInOrbit,
            Some(offset) => OrbitAnswer::InOrbit { witness: offset.clone(), solutions },
        }
    }

    pub fn is_in_orbit(&self) -> bool {
        matches!(self, OrbitAnswer::InOrbit { .. })
    }

    pub fn witness(&self) -> Option<&BigUint> {
        match self {
            OrbitAnswer::NotInOrbit => None,
            OrbitAnswer::InOrbit { witness, .. } => Some(witness),
        }
    }

    /// The stable one-line rendering used by the command line:
    /// `YES r=<witness> solutions=<a>+<b>Z` or `NO`.
    pub fn summary_line(&self) -> String {
        match self {
            OrbitAnswer::NotInOrbit => "NO".to_string(),
            OrbitAnswer::InOrbit { solutions, witness } => {
                let (a, b) = (solutions.offset().unwrap(), solutions.period().unwrap());
                format!("YES r={witness} solutions={a}+{b}Z")
            }
        }
    }
}

/// Result of the reduction step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    /// One equation per cycle, in cycle order.
    System(CongruenceSystem),
    /// Some cycle (or fixed point) already rules out every exponent.
    NotInOrbit,
}

/// The congruence describing `{ r : rotate_right(vc, r) = wc }`, or `None`
/// when that set is empty. The modulus always divides `|vc|`.
pub fn cycle_equation(vc: &[char], wc: &[char], cost: &mut CostCounter) -> Option<Congruence> {
    let k = vc.len();
    let mut comparisons = 0;
    let exponents = rotation_exponents_counted(vc, wc, &mut comparisons).expect("projections have equal length");
    cost.tick(comparisons);
    debug_assert!(is_progression(&exponents), "rotation exponents {exponents:?} not a progression");
    let (residue, modulus) = match exponents.as_slice() {
        [] => return None,
        [only] => (*only, k),
        [first, second, ..] => (*first, second - first),
    };
    cost.tick(2);
    Some(Congruence::new(residue as u64, modulus as u64).expect("residue below modulus"))
}

fn is_progression(xs: &[usize]) -> bool {
    xs.windows(3).all(|w| w[2] - w[1] == w[1] - w[0])
}

fn check_lengths(g: &Permutation, v: &Configuration, w: &Configuration) -> Result<(), OrbitError> {
    for (which, c) in [("v", v), ("w", w)] {
        if c.len() != g.degree() {
            return Err(OrbitError::LengthMismatch { which, expected: g.degree(), found: c.len() });
        }
    }
    Ok(())
}

pub fn reduce(g: &Permutation, v: &Configuration, w: &Configuration) -> Result<Reduction, OrbitError> {
    reduce_counted(g, v, w, &mut CostCounter::new())
}

/// Builds the per-cycle congruence system. Fixed points are checked first:
/// no power of `g` can repair a mismatch there.
pub fn reduce_counted(
    g: &Permutation,
    v: &Configuration,
    w: &Configuration,
    cost: &mut CostCounter,
) -> Result<Reduction, OrbitError> {
    check_lengths(g, v, w)?;
    let (vs, ws) = (v.symbols(), w.symbols());
    let fixed = g.fixed_points();
    cost.tick(g.degree() as u64 + fixed.len() as u64);
    if fixed.iter().any(|&j| vs[j] != ws[j]) {
        return Ok(Reduction::NotInOrbit);
    }
    let mut equations = Vec::with_capacity(g.cycles().len());
    for c in g.cycles() {
        cost.tick(3 * c.len() as u64);
        match cycle_equation(&project(v, c), &project(w, c), cost) {
            Some(eq) => equations.push(eq),
            None => return Ok(Reduction::NotInOrbit),
        }
    }
    Ok(Reduction::System(CongruenceSystem::new(equations)))
}

pub fn decide_orbit(g: &Permutation, v: &Configuration, w: &Configuration) -> Result<OrbitAnswer, OrbitError> {
    decide_orbit_counted(g, v, w, &mut CostCounter::new())
}

/// Reduction followed by the iterated congruence solver. `cost` accumulates
/// both stages.
pub fn decide_orbit_counted(
    g: &Permutation,
    v: &Configuration,
    w: &Configuration,
    cost: &mut CostCounter,
) -> Result<OrbitAnswer, OrbitError> {
    let answer = match reduce_counted(g, v, w, cost)? {
        Reduction::NotInOrbit => OrbitAnswer::NotInOrbit,
        Reduction::System(sys) => OrbitAnswer::from_solutions(solve_system(&sys, cost)),
    };
    #[cfg(debug_assertions)]
    if let Some(r) = answer.witness() {
        assert_eq!(&g.apply_power(r, v).expect("lengths checked"), w, "witness {r} does not map v to w");
    }
    Ok(answer)
}
