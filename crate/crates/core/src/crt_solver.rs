//! Solvability of congruence systems by splitting every modulus into prime
//! powers and scanning for conflicts between equations over the same prime.
//!
//! Costs are tallied in bit operations under schoolbook arithmetic: `x mod y`
//! costs `(|x| + |y|)^2`, a comparison reads the bits of the smaller operand,
//! a table access is one step. Inputs are treated as unary, so the size of
//! `x ≡ a (mod b)` is `a + b`.

use std::collections::HashMap;

use thiserror::Error;

use crate::congruence::CongruenceSystem;
use crate::permutation::bit_length;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrtError {
    #[error("cannot factorize zero")]
    Zero,
    #[error("residue {residue} not below modulus {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },
}

/// `x ≡ residue (mod prime^exponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePowerEquation {
    pub prime: u64,
    pub exponent: u32,
    pub residue: u64,
}

impl PrimePowerEquation {
    pub fn modulus(&self) -> u64 {
        self.prime.pow(self.exponent)
    }
}

fn mod_cost(x: u64, y: u64) -> u64 {
    let b = bit_length(x) + bit_length(y);
    b * b
}

/// Prime factorization by trial division, primes ascending.
pub fn factorize(b: u64) -> Result<Vec<(u64, u32)>, CrtError> {
    factorize_counted(b, &mut 0)
}

fn factorize_counted(mut b: u64, ops: &mut u64) -> Result<Vec<(u64, u32)>, CrtError> {
    if b == 0 {
        return Err(CrtError::Zero);
    }
    let mut factors = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= b {
        *ops += mod_cost(b, d);
        if b.is_multiple_of(d) {
            let mut e = 0;
            while b.is_multiple_of(d) {
                *ops += mod_cost(b, d);
                b /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if b > 1 {
        factors.push((b, 1));
    }
    Ok(factors)
}

/// Splits `x ≡ a (mod b)` into one equation per prime-power factor of `b`.
pub fn split_equation(a: u64, b: u64) -> Result<Vec<PrimePowerEquation>, CrtError> {
    split_counted(a, b, &mut 0)
}

fn split_counted(a: u64, b: u64, ops: &mut u64) -> Result<Vec<PrimePowerEquation>, CrtError> {
    if a >= b {
        return Err(CrtError::ResidueOutOfRange { residue: a, modulus: b });
    }
    let factors = factorize_counted(b, ops)?;
    Ok(factors
        .into_iter()
        .map(|(prime, exponent)| {
            let modulus = prime.pow(exponent);
            *ops += exponent as u64 * mod_cost(modulus, prime) + mod_cost(a, modulus);
            PrimePowerEquation { prime, exponent, residue: a % modulus }
        })
        .collect())
}

/// Per-prime state of the conflict scan.
///
/// `first[p] = (z, e)` records the strongest equation `x ≡ z (mod p^e)` seen
/// so far; `levels[p][l - 1] = z mod p^l` for every `l` in `1..=e`.
#[derive(Debug, Clone, Default)]
pub struct ConflictTables {
    first: HashMap<u64, (u64, u32)>,
    levels: HashMap<u64, Vec<u64>>,
}

impl ConflictTables {
    pub fn get(&self, prime: u64) -> Option<(u64, u32)> {
        self.first.get(&prime).copied()
    }

    /// `z mod prime^level` for the recorded equation over `prime`.
    pub fn level(&self, prime: u64, level: u32) -> Option<u64> {
        self.levels.get(&prime)?.get(level as usize - 1).copied()
    }

    /// Records `x ≡ z (mod p^e)` and refreshes every level up to `e`.
    fn store(&mut self, eq: &PrimePowerEquation, ops: &mut u64) {
        self.first.insert(eq.prime, (eq.residue, eq.exponent));
        let mut levels = Vec::with_capacity(eq.exponent as usize);
        let mut pl = 1u64;
        for _ in 0..eq.exponent {
            pl *= eq.prime;
            *ops += mod_cost(eq.residue, pl);
            levels.push(eq.residue % pl);
        }
        self.levels.insert(eq.prime, levels);
        debug_assert!(self.is_coherent(eq.prime));
    }

    pub fn is_coherent(&self, prime: u64) -> bool {
        match (self.first.get(&prime), self.levels.get(&prime)) {
            (None, None) => true,
            (Some(&(z, e)), Some(levels)) => {
                levels.len() == e as usize && levels.iter().enumerate().all(|(l, &r)| r == z % prime.pow(l as u32 + 1))
            }
            _ => false,
        }
    }
}

/// Cost of one input equation, split by phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquationCost {
    /// Unary size `a + b`.
    pub size: u64,
    pub factor_ops: u64,
    pub scan_ops: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtReport {
    pub solvable: bool,
    pub p_max: u64,
    pub e_max: u32,
    /// Bit operations spent on the maximum computations.
    pub max_ops: u64,
    pub equations: Vec<EquationCost>,
}

impl CrtReport {
    pub fn total_ops(&self) -> u64 {
        self.max_ops + self.equations.iter().map(|c| c.factor_ops + c.scan_ops).sum::<u64>()
    }
}

/// Whether `sys` has a solution.
pub fn decide_solvable(sys: &CongruenceSystem) -> bool {
    check(sys).solvable
}

/// Decides solvability and reports the table bounds and costs.
pub fn check(sys: &CongruenceSystem) -> CrtReport {
    let mut costs: Vec<EquationCost> = Vec::with_capacity(sys.len());
    let mut split = Vec::with_capacity(sys.len());
    for eq in &sys.equations {
        let mut ops = 0;
        let parts = split_counted(eq.residue(), eq.modulus(), &mut ops).expect("congruence invariant");
        costs.push(EquationCost { size: eq.residue() + eq.modulus(), factor_ops: ops, scan_ops: 0 });
        split.push(parts);
    }

    // Only the candidate's bits are read from the running maximum.
    let mut max_ops = 0;
    let (mut p_max, mut e_max) = (0u64, 0u32);
    for pe in split.iter().flatten() {
        max_ops += bit_length(pe.prime) + bit_length(pe.exponent as u64);
        p_max = p_max.max(pe.prime);
        e_max = e_max.max(pe.exponent);
    }

    let mut tables = ConflictTables::default();
    let mut solvable = true;
    'scan: for (parts, cost) in split.iter().zip(costs.iter_mut()) {
        for pe in parts {
            let ops = &mut cost.scan_ops;
            *ops += 1;
            let Some((z, e)) = tables.get(pe.prime) else {
                tables.store(pe, ops);
                continue;
            };
            *ops += bit_length(pe.exponent as u64);
            let consistent = if e == pe.exponent {
                *ops += bit_length(pe.residue);
                z == pe.residue
            } else if e < pe.exponent {
                let pe_low = pe.prime.pow(e);
                *ops += mod_cost(pe.residue, pe_low) + bit_length(pe.residue);
                let ok = pe.residue % pe_low == z;
                if ok {
                    tables.store(pe, ops);
                }
                ok
            } else {
                *ops += 1 + bit_length(pe.residue);
                tables.level(pe.prime, pe.exponent) == Some(pe.residue)
            };
            if !consistent {
                solvable = false;
                break 'scan;
            }
        }
    }
    CrtReport { solvable, p_max, e_max, max_ops, equations: costs }
}
