//! Brute-force ground truth for orbit queries: walk `v, gv, g²v, ...` through
//! one full period of `g` and record every hit.
//!
//! Nothing here goes through `Permutation::apply_power`, the string matcher
//! or the congruence solvers.

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::congruence::ArithmeticProgression;
use crate::orbit::OrbitAnswer;
use crate::permutation::{Configuration, Cycle, Permutation};

pub const DEFAULT_ORDER_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("order {order} exceeds enumeration bound {bound}")]
    OrderTooLarge { order: BigUint, bound: u64 },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Exact `{ r in [0, ord g) : g^r v = w }` as an orbit answer.
pub fn brute_force_orbit(
    g: &Permutation,
    v: &Configuration,
    w: &Configuration,
    bound: u64,
) -> Result<OrbitAnswer, OracleError> {
    let n = g.degree();
    for c in [v, w] {
        if c.len() != n {
            return Err(OracleError::LengthMismatch { expected: n, found: c.len() });
        }
    }
    let order = g.order();
    let steps = match order.to_u64() {
        Some(o) if o <= bound => o,
        _ => return Err(OracleError::OrderTooLarge { order, bound }),
    };
    let hits = orbit_hits(g, v.symbols(), w.symbols(), steps);
    Ok(progression_from_hits(&hits, steps))
}

/// Exponents `r < steps` with `g^r v = w`, stepping one application at a time.
pub fn orbit_hits(g: &Permutation, v: &[char], w: &[char], steps: u64) -> Vec<u64> {
    // next[j]: where position j's symbol moves under one application
    let mut next: Vec<usize> = (0..v.len()).collect();
    for c in g.cycles() {
        let e = c.elements();
        for t in 0..e.len() {
            next[e[t]] = e[(t + 1) % e.len()];
        }
    }
    let mut cur = v.to_vec();
    let mut scratch = cur.clone();
    let mut hits = Vec::new();
    for r in 0..steps {
        if cur == w {
            hits.push(r);
        }
        for (j, &to) in next.iter().enumerate() {
            scratch[to] = cur[j];
        }
        std::mem::swap(&mut cur, &mut scratch);
    }
    hits
}

/// Turns the hits within one period into `a + bZ`. Panics if the hits are
/// not an arithmetic progression whose step divides `order`.
pub fn progression_from_hits(hits: &[u64], order: u64) -> OrbitAnswer {
    let Some(&first) = hits.first() else {
        return OrbitAnswer::NotInOrbit;
    };
    let period = hits.get(1).map_or(order, |s| s - first);
    assert_eq!(order % period, 0, "hit spacing {period} does not divide order {order}");
    for (i, &h) in hits.iter().enumerate() {
        assert_eq!(h, first + i as u64 * period, "hits {hits:?} are not an arithmetic progression");
    }
    assert!(first < period && hits.len() as u64 == order / period);
    OrbitAnswer::InOrbit {
        solutions: ArithmeticProgression::new(&BigInt::from(first), BigUint::from(period)),
        witness: BigUint::from(first),
    }
}

/// `{ h in [0, k) : rotate_right(vc, h) = wc }` by rotating one step at a
/// time.
pub fn brute_force_cycle_solutions(c: &Cycle, vc: &[char], wc: &[char]) -> Result<Vec<usize>, OracleError> {
    let k = c.len();
    for s in [vc, wc] {
        if s.len() != k {
            return Err(OracleError::LengthMismatch { expected: k, found: s.len() });
        }
    }
    let mut cur = vc.to_vec();
    let mut out = Vec::new();
    for h in 0..k {
        if cur == wc {
            out.push(h);
        }
        cur.rotate_right(1);
    }
    Ok(out)
}
