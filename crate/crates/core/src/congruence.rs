//! Arithmetic progressions, single linear congruences and iterated solving of
//! congruence systems, with word-operation accounting.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("residue {residue} not below modulus {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },
    #[error("scan of {steps} candidates exceeds bound {bound}")]
    ScanBoundExceeded { steps: u64, bound: u64 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// The set `a + bZ`, or the empty set.
///
/// Nonempty values are kept canonical: `0 <= offset < period`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ArithmeticProgression {
    Empty,
    Class { offset: BigUint, period: BigUint },
}

impl ArithmeticProgression {
    /// `offset + period Z` reduced to canonical form. Panics on a zero period.
    pub fn new(offset: &BigInt, period: BigUint) -> Self {
        assert!(!period.is_zero(), "period must be positive");
        let p = BigInt::from_biguint(Sign::Plus, period.clone());
        let offset = offset.mod_floor(&p).to_biguint().expect("nonnegative after mod_floor");
        ArithmeticProgression::Class { offset, period }
    }

    /// `Z` itself.
    pub fn everything() -> Self {
        ArithmeticProgression::Class { offset: BigUint::zero(), period: BigUint::one() }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ArithmeticProgression::Empty)
    }

    pub fn offset(&self) -> Option<&BigUint> {
        match self {
            ArithmeticProgression::Empty => None,
            ArithmeticProgression::Class { offset, .. } => Some(offset),
        }
    }

    pub fn period(&self) -> Option<&BigUint> {
        match self {
            ArithmeticProgression::Empty => None,
            ArithmeticProgression::Class { period, .. } => Some(period),
        }
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        match self {
            ArithmeticProgression::Empty => false,
            ArithmeticProgression::Class { offset, period } => {
                let p = BigInt::from(period.clone());
                x.mod_floor(&p) == BigInt::from(offset.clone())
            }
        }
    }
}

impl fmt::Display for ArithmeticProgression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithmeticProgression::Empty => f.write_str("EMPTY"),
            ArithmeticProgression::Class { offset, period } => write!(f, "{offset} + {period} Z"),
        }
    }
}

/// One equation `x ≡ residue (mod modulus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Congruence {
    residue: u64,
    modulus: u64,
}

impl Congruence {
    pub fn new(residue: u64, modulus: u64) -> Result<Self, CongruenceError> {
        if modulus == 0 {
            return Err(CongruenceError::ZeroModulus);
        }
        if residue >= modulus {
            return Err(CongruenceError::ResidueOutOfRange { residue, modulus });
        }
        Ok(Congruence { residue, modulus })
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn holds(&self, x: &BigInt) -> bool {
        x.mod_floor(&BigInt::from(self.modulus)) == BigInt::from(self.residue)
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

/// A conjunction of congruences in one unknown.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct CongruenceSystem {
    pub equations: Vec<Congruence>,
}

impl CongruenceSystem {
    pub fn new(equations: Vec<Congruence>) -> Self {
        CongruenceSystem { equations }
    }

    /// Builds a system from `(residue, modulus)` pairs.
    pub fn from_pairs(pairs: &[(u64, u64)]) -> Result<Self, CongruenceError> {
        pairs.iter().map(|&(a, b)| Congruence::new(a, b)).collect::<Result<Vec<_>, _>>().map(CongruenceSystem::new)
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Lcm of all moduli (1 for the empty system).
    pub fn modulus_lcm(&self) -> BigUint {
        self.equations.iter().fold(BigUint::one(), |acc, e| acc.lcm(&BigUint::from(e.modulus)))
    }

    pub fn is_satisfied_by(&self, x: &BigInt) -> bool {
        self.equations.iter().all(|e| e.holds(x))
    }
}

/// Line format: one `a mod b` per line. Blank lines and `#` comments are
/// ignored.
impl FromStr for CongruenceSystem {
    type Err = CongruenceError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut equations = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let parse_err = |message: String| CongruenceError::Parse { line, message };
            let tokens: Vec<&str> = body.split_whitespace().collect();
            if tokens.len() != 3 || tokens[1] != "mod" {
                return Err(parse_err(format!("expected `a mod b`, found `{body}`")));
            }
            let a: u64 = tokens[0].parse().map_err(|_| parse_err(format!("bad residue `{}`", tokens[0])))?;
            let b: u64 = tokens[2].parse().map_err(|_| parse_err(format!("bad modulus `{}`", tokens[2])))?;
            equations.push(Congruence::new(a, b).map_err(|e| parse_err(e.to_string()))?);
        }
        Ok(CongruenceSystem { equations })
    }
}

impl fmt::Display for CongruenceSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.equations.iter().try_for_each(|e| writeln!(f, "{e}"))
    }
}

/// Word-operation and storage accounting for a solve.
///
/// A big-integer primitive on operands of at most `b` bits costs
/// `ceil(b / 64)` word operations; a symbol-level step costs one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CostCounter {
    word_ops: u64,
    max_bits: u64,
}

impl CostCounter {
    pub const WORD_BITS: u64 = 64;

    pub fn new() -> Self {
        Self::default()
    }

    pub fn word_ops(&self) -> u64 {
        self.word_ops
    }

    /// Widest value observed, in bits.
    pub fn max_bits(&self) -> u64 {
        self.max_bits
    }

    /// Adds `units` unit-cost steps.
    pub fn tick(&mut self, units: u64) {
        self.word_ops += units;
    }

    /// Charges one big-integer primitive over `operands`.
    pub fn charge(&mut self, operands: &[&BigInt]) {
        let bits = operands.iter().map(|x| x.bits()).max().unwrap_or(0).max(1);
        self.word_ops += bits.div_ceil(Self::WORD_BITS);
    }

    /// Records the width of a stored value.
    pub fn observe(&mut self, x: &BigInt) {
        self.max_bits = self.max_bits.max(x.bits());
    }

    pub fn merge(&mut self, other: &CostCounter) {
        self.word_ops += other.word_ops;
        self.max_bits = self.max_bits.max(other.max_bits);
    }
}

/// Returns `(d, s)` with `d = gcd(a, n)` and `s·a ≡ d (mod n)`, for
/// `0 <= a < n`.
fn extended_gcd(a: &BigInt, n: &BigInt, cost: &mut CostCounter) -> (BigInt, BigInt) {
    let (mut old_r, mut r) = (n.clone(), a.clone());
    let (mut old_s, mut s) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        cost.charge(&[&old_r, &r]);
        let (q, rem) = old_r.div_rem(&r);
        cost.charge(&[&q, &s, &old_s]);
        let next_s = &old_s - &q * &s;
        old_r = std::mem::replace(&mut r, rem);
        old_s = std::mem::replace(&mut s, next_s);
        cost.observe(&old_s);
    }
    (old_r, old_s)
}

/// Solution set of `a·x ≡ b (mod n)`.
pub fn solve_linear_congruence(a: &BigInt, b: &BigInt, n: &BigUint) -> Result<ArithmeticProgression, CongruenceError> {
    solve_linear_congruence_counted(a, b, n, &mut CostCounter::new())
}

pub fn solve_linear_congruence_counted(
    a: &BigInt,
    b: &BigInt,
    n: &BigUint,
    cost: &mut CostCounter,
) -> Result<ArithmeticProgression, CongruenceError> {
    if n.is_zero() {
        return Err(CongruenceError::ZeroModulus);
    }
    let n = BigInt::from(n.clone());
    cost.charge(&[a, &n]);
    let a = a.mod_floor(&n);
    cost.charge(&[b, &n]);
    let b = b.mod_floor(&n);
    let (d, s) = extended_gcd(&a, &n, cost);
    cost.charge(&[&b, &d]);
    let (b_over_d, rem) = b.div_rem(&d);
    if !rem.is_zero() {
        return Ok(ArithmeticProgression::Empty);
    }
    cost.charge(&[&n, &d]);
    let period = &n / &d;
    cost.charge(&[&s, &b_over_d, &period]);
    let x0 = (s * b_over_d).mod_floor(&period);
    cost.observe(&x0);
    cost.observe(&period);
    Ok(ArithmeticProgression::new(&x0, period.to_biguint().expect("positive")))
}

/// Intersection of all `a_i + b_i Z`, built incrementally: with the
/// solutions so far being `a + bZ`, each equation restricts `x = a + b·y`
/// via `b·y ≡ a_i − a (mod b_i)`.
pub fn solve_system(sys: &CongruenceSystem, cost: &mut CostCounter) -> ArithmeticProgression {
    let mut a = BigInt::zero();
    let mut b = BigInt::one();
    for eq in &sys.equations {
        let ai = BigInt::from(eq.residue);
        cost.charge(&[&ai, &a]);
        let rhs = &ai - &a;
        let step = solve_linear_congruence_counted(&b, &rhs, &BigUint::from(eq.modulus), cost)
            .expect("moduli are positive by construction");
        let ArithmeticProgression::Class { offset, period } = step else {
            return ArithmeticProgression::Empty;
        };
        let a_step = BigInt::from(offset);
        let b_step = BigInt::from(period);
        cost.charge(&[&a_step, &b, &a]);
        a += &a_step * &b;
        cost.charge(&[&b, &b_step]);
        b *= &b_step;
        cost.observe(&a);
        cost.observe(&b);
    }
    cost.charge(&[&a, &b]);
    ArithmeticProgression::new(&a, b.to_biguint().expect("positive"))
}

pub const DEFAULT_SCAN_BOUND: u64 = 1_000_000;

/// Reference solver by sieving. The running solution set `a + bZ` is
/// walked through `a, a + b, ..., a + (b_i - 1) b` for each equation
/// `x ≡ a_i (mod b_i)`: the first hit is the new offset, the distance to the
/// second hit (or `b_i` steps when there is none) the new period factor.
/// Only comparisons and multiplications are used, never a gcd. `bound` caps
/// the total number of candidates `Σ b_i`.
pub fn naive_intersection(sys: &CongruenceSystem, bound: u64) -> Result<ArithmeticProgression, CongruenceError> {
    let steps = sys.equations.iter().map(|e| e.modulus).fold(0u64, u64::saturating_add);
    if steps > bound {
        return Err(CongruenceError::ScanBoundExceeded { steps, bound });
    }
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for eq in &sys.equations {
        let bi = BigUint::from(eq.modulus);
        let mut hits = (0..eq.modulus).filter(|&t| (&a + &b * t) % &bi == BigUint::from(eq.residue));
        let (first, step) = match (hits.next(), hits.next()) {
            (None, _) => return Ok(ArithmeticProgression::Empty),
            (Some(first), None) => (first, eq.modulus),
            (Some(first), Some(second)) => (first, second - first),
        };
        a += &b * first;
        b *= step;
    }
    Ok(ArithmeticProgression::new(&BigInt::from(a), b))
}
