//! Permutations in disjoint-cycle notation and their action on configurations.
//!
//! Indices are 1-based in text and in [`Permutation::from_cycles`], matching
//! the usual cycle notation `(6,5,7,3,2,1)(4,8)`. Internally every index is
//! 0-based. The stored element order of a cycle is significant: the
//! projection `v[c]` reads `v` in exactly that order.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutationError {
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("empty cycle")]
    EmptyCycle,
    #[error("index {index} appears more than once")]
    DuplicateIndex { index: usize },
    #[error("index {index} outside [1, {n}]")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("configuration has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Failure to parse cycle notation. `position` is the 1-based character
/// column where the problem was detected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("column {position}: {kind}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("duplicate index {0}")]
    DuplicateIndex(usize),
    #[error("index {index} outside [1, {n}]")]
    IndexOutOfRange { index: u64, n: usize },
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("{0}")]
    Malformed(&'static str),
}

/// A single cycle `(j_1, ..., j_k)`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle(Vec<usize>);

impl Cycle {
    /// A standalone cycle over 0-based `elements`. Panics if empty.
    pub fn new(elements: Vec<usize>) -> Self {
        assert!(!elements.is_empty(), "empty cycle");
        Cycle(elements)
    }

    /// 0-based elements in stored order.
    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (t, j) in self.0.iter().enumerate() {
            if t > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", j + 1)?;
        }
        f.write_str(")")
    }
}

/// A permutation of `[n]` written as a product of pairwise-disjoint cycles.
///
/// Cycles of length one are dropped on construction; indices not covered by
/// any cycle are fixed points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    n: usize,
    cycles: Vec<Cycle>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { n, cycles: Vec::new() }
    }

    /// Builds a permutation from 1-based cycles, preserving element order.
    pub fn from_cycles(n: usize, cycles: Vec<Vec<usize>>) -> Result<Self, PermutationError> {
        if n == 0 {
            return Err(PermutationError::ZeroDegree);
        }
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(cycles.len());
        for cycle in cycles {
            if cycle.is_empty() {
                return Err(PermutationError::EmptyCycle);
            }
            let mut elems = Vec::with_capacity(cycle.len());
            for index in cycle {
                if index == 0 || index > n {
                    return Err(PermutationError::IndexOutOfRange { index, n });
                }
                if std::mem::replace(&mut seen[index - 1], true) {
                    return Err(PermutationError::DuplicateIndex { index });
                }
                elems.push(index - 1);
            }
            if elems.len() > 1 {
                out.push(Cycle(elems));
            }
        }
        Ok(Permutation { n, cycles: out })
    }

    /// Builds the permutation `j -> images[j]` (0-based function form).
    /// Each cycle starts at its smallest element.
    ///
    /// Panics if `images` is not a bijection on `0..images.len()`.
    pub fn from_mapping(images: &[usize]) -> Self {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut elems = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                elems.push(j);
                j = images[j];
                assert!(j < n, "image out of range");
            }
            assert_eq!(j, start, "mapping is not a bijection");
            if elems.len() > 1 {
                cycles.push(Cycle(elems));
            }
        }
        Permutation { n, cycles }
    }

    /// The 0-based function form: position `j` is sent to `mapping()[j]`.
    pub fn mapping(&self) -> Vec<usize> {
        let mut images: Vec<usize> = (0..self.n).collect();
        for c in &self.cycles {
            let k = c.len();
            for t in 0..k {
                images[c.0[t]] = c.0[(t + 1) % k];
            }
        }
        images
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn is_identity(&self) -> bool {
        self.cycles.is_empty()
    }

    /// 0-based indices not moved by the permutation, ascending.
    pub fn fixed_points(&self) -> Vec<usize> {
        let mut moved = vec![false; self.n];
        for c in &self.cycles {
            for &j in &c.0 {
                moved[j] = true;
            }
        }
        (0..self.n).filter(|&j| !moved[j]).collect()
    }

    /// Size of the cycle notation in bits: the sum of the binary lengths of
    /// every listed index.
    pub fn size_bits(&self) -> u64 {
        self.cycles.iter().flat_map(|c| c.0.iter()).map(|&j| bit_length((j + 1) as u64)).sum()
    }

    /// Order of the permutation: lcm of the cycle lengths.
    pub fn order(&self) -> BigUint {
        self.cycles.iter().fold(BigUint::one(), |acc, c| acc.lcm(&BigUint::from(c.len())))
    }

    /// `g v`: position `g(j)` of the result holds `v_j`.
    pub fn apply(&self, v: &Configuration) -> Result<Configuration, PermutationError> {
        self.check_len(v)?;
        let mut out = v.0.clone();
        for c in &self.cycles {
            let k = c.len();
            for t in 0..k {
                out[c.0[(t + 1) % k]] = v.0[c.0[t]];
            }
        }
        Ok(Configuration(out))
    }

    /// `g^r v`, computed per cycle as a rotation by `r mod |c|`.
    pub fn apply_power(&self, r: &BigUint, v: &Configuration) -> Result<Configuration, PermutationError> {
        self.check_len(v)?;
        let mut out = v.0.clone();
        for c in &self.cycles {
            let k = c.len();
            let shift = (r % k).to_usize().expect("residue below cycle length");
            if shift == 0 {
                continue;
            }
            for t in 0..k {
                let dst = if t + shift >= k { t + shift - k } else { t + shift };
                out[c.0[dst]] = v.0[c.0[t]];
            }
        }
        Ok(Configuration(out))
    }

    fn check_len(&self, v: &Configuration) -> Result<(), PermutationError> {
        if v.len() != self.n {
            return Err(PermutationError::LengthMismatch { expected: self.n, found: v.len() });
        }
        Ok(())
    }

    /// Parses cycle notation such as `"(6,5,7,3,2,1)(4,8)"` over `[n]`.
    pub fn parse(text: &str, n: usize) -> Result<Self, ParseError> {
        parse_permutation(text, n)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cycles {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub(crate) fn bit_length(x: u64) -> u64 {
    (64 - x.leading_zeros()).max(1) as u64
}

/// Parses `text` as a concatenation of parenthesised, comma-separated index
/// lists. Whitespace is allowed between tokens. The empty string is the
/// identity.
pub fn parse_permutation(text: &str, n: usize) -> Result<Permutation, ParseError> {
    if n == 0 {
        return Err(ParseError { position: 1, kind: ParseErrorKind::ZeroDegree });
    }
    let chars: Vec<char> = text.chars().collect();
    let err = |position: usize, kind| ParseError { position: position + 1, kind };
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    let mut i = 0;

    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };

    loop {
        skip_ws(&mut i);
        if i == chars.len() {
            break;
        }
        if chars[i] != '(' {
            return Err(err(i, ParseErrorKind::Malformed("expected '('")));
        }
        i += 1;
        let mut elems = Vec::new();
        loop {
            skip_ws(&mut i);
            let start = i;
            let mut value: u64 = 0;
            while i < chars.len() && chars[i].is_ascii_digit() {
                let d = chars[i].to_digit(10).unwrap() as u64;
                value = value.saturating_mul(10).saturating_add(d);
                i += 1;
            }
            if i == start {
                return Err(err(i, ParseErrorKind::Malformed("expected index")));
            }
            if value == 0 || value > n as u64 {
                return Err(err(start, ParseErrorKind::IndexOutOfRange { index: value, n }));
            }
            let index = value as usize;
            if std::mem::replace(&mut seen[index - 1], true) {
                return Err(err(start, ParseErrorKind::DuplicateIndex(index)));
            }
            elems.push(index - 1);
            skip_ws(&mut i);
            match chars.get(i) {
                Some(',') => i += 1,
                Some(')') => {
                    i += 1;
                    break;
                }
                Some(_) => return Err(err(i, ParseErrorKind::Malformed("expected ',' or ')'"))),
                None => return Err(err(i, ParseErrorKind::Malformed("unclosed cycle"))),
            }
        }
        if elems.len() > 1 {
            cycles.push(Cycle(elems));
        }
    }
    Ok(Permutation { n, cycles })
}

/// A word over a finite alphabet of single characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration(Vec<char>);

impl Configuration {
    pub fn new(symbols: Vec<char>) -> Self {
        Configuration(symbols)
    }

    pub fn symbols(&self) -> &[char] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&str> for Configuration {
    fn from(s: &str) -> Self {
        Configuration(s.chars().collect())
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|c| write!(f, "{c}"))
    }
}

/// `v[c]`: the symbols of `v` read at the cycle's indices in stored order.
pub fn project(v: &Configuration, c: &Cycle) -> Vec<char> {
    c.0.iter().map(|&j| v.0[j]).collect()
}

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while primes.len() < count {
        if primes.iter().take_while(|&&p| p * p <= candidate).all(|&p| !candidate.is_multiple_of(p)) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// The product of `i` disjoint consecutive-index cycles whose lengths are the
/// first `i` primes: `(1,2)(3,4,5)(6,7,8,9,10)...`. Its order is the `i`-th
/// primorial.
///
/// Panics if `i == 0`.
pub fn primorial_permutation(i: usize) -> Permutation {
    assert!(i >= 1, "primorial family starts at i = 1");
    let mut next = 0usize;
    let cycles = first_primes(i)
        .into_iter()
        .map(|p| {
            let c = Cycle((next..next + p as usize).collect());
            next += p as usize;
            c
        })
        .collect();
    Permutation { n: next, cycles }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str, n: usize) -> Permutation {
        Permutation::parse(s, n).unwrap()
    }

    #[test]
    fn parses_running_example() {
        let g = perm("(6,5,7,3,2,1)(4,8)", 9);
        let cycles: Vec<Vec<usize>> = g.cycles().iter().map(|c| c.elements().iter().map(|j| j + 1).collect()).collect();
        assert_eq!(cycles, vec![vec![6, 5, 7, 3, 2, 1], vec![4, 8]]);
        assert_eq!(g.to_string(), "(6,5,7,3,2,1)(4,8)");
    }

    #[test]
    fn parse_identity_and_whitespace() {
        assert!(perm("", 5).is_identity());
        assert!(perm("  ", 5).is_identity());
        assert_eq!(perm(" (1, 2) (3,4)\t(5)", 5).to_string(), "(1,2)(3,4)");
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = Permutation::parse("(1,1)", 2).unwrap_err();
        assert_eq!(e, ParseError { position: 4, kind: ParseErrorKind::DuplicateIndex(1) });
        let e = Permutation::parse("(1,2)(2,3)", 3).unwrap_err();
        assert_eq!(e.position, 7);
        let e = Permutation::parse("(1,4)", 3).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::IndexOutOfRange { index: 4, n: 3 });
        assert_eq!(e.position, 4);
        for bad in ["(", "()", "(1,", "(1 2)", "1,2", "(1,2", "(1,2)x", "(0)", "(-1)"] {
            assert!(Permutation::parse(bad, 3).is_err(), "{bad:?} should fail");
        }
        let e = Permutation::parse("(99999999999999999999999)", 3).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::IndexOutOfRange { .. }));
    }

    #[test]
    fn apply_matches_definition() {
        let g = perm("(4,8,9)", 9);
        assert_eq!(g.apply(&"010001111".into()).unwrap().to_string(), "010101101");
        assert_eq!(Permutation::identity(3).apply(&"abc".into()).unwrap().to_string(), "abc");
        assert_eq!(perm("(1,2)", 2).apply(&"ab".into()).unwrap().to_string(), "ba");
        assert_eq!(g.apply(&"01".into()), Err(PermutationError::LengthMismatch { expected: 9, found: 2 }));
    }

    #[test]
    fn apply_power_rotates_projection() {
        let g = perm("(6,5,7,3,2,1)(4,8)", 9);
        let v: Configuration = "010001111".into();
        let gv = g.apply_power(&BigUint::from(1u32), &v).unwrap();
        assert_eq!(project(&gv, &g.cycles()[0]).iter().collect::<String>(), "010101");
        assert_eq!(g.apply_power(&BigUint::from(0u32), &v).unwrap(), v);
        let t = perm("(1,2)", 2);
        assert_eq!(t.apply_power(&BigUint::from(2u32), &"ab".into()).unwrap().to_string(), "ab");
    }

    #[test]
    fn projections() {
        let c = &perm("(1,4,2)", 4).cycles()[0].clone();
        assert_eq!(project(&"1110".into(), c), vec!['1', '0', '1']);
        let g = perm("(6,5,7,3,2,1)", 9);
        assert_eq!(project(&"010001111".into(), &g.cycles()[0]).iter().collect::<String>(), "101010");
        let single = Cycle(vec![2]);
        assert_eq!(project(&"xyz".into(), &single), vec!['z']);
    }

    #[test]
    fn orders() {
        assert_eq!(perm("(1,2)(3,4,5)(6,7,8,9,10)", 10).order(), BigUint::from(30u32));
        assert_eq!(Permutation::identity(4).order(), BigUint::from(1u32));
        assert_eq!(perm("(6,5,7,3,2,1)(4,8,9)", 9).order(), BigUint::from(6u32));
    }

    #[test]
    fn primorial_family() {
        assert_eq!(primorial_permutation(1).to_string(), "(1,2)");
        assert_eq!(primorial_permutation(3).to_string(), "(1,2)(3,4,5)(6,7,8,9,10)");
        let g4 = primorial_permutation(4);
        assert_eq!(g4.degree(), 17);
        assert_eq!(g4.order(), BigUint::from(210u32));
    }

    #[test]
    fn from_cycles_validates() {
        assert_eq!(Permutation::from_cycles(0, vec![]), Err(PermutationError::ZeroDegree));
        assert_eq!(
            Permutation::from_cycles(3, vec![vec![1, 2], vec![2]]),
            Err(PermutationError::DuplicateIndex { index: 2 })
        );
        assert_eq!(Permutation::from_cycles(3, vec![vec![]]), Err(PermutationError::EmptyCycle));
        let g = Permutation::from_cycles(4, vec![vec![3], vec![4, 1]]).unwrap();
        assert_eq!(g.to_string(), "(4,1)");
        assert_eq!(g.fixed_points(), vec![1, 2]);
    }

    #[test]
    fn mapping_round_trip() {
        let g = perm("(3,1,2)(5,4)", 6);
        let m = g.mapping();
        assert_eq!(m, vec![1, 2, 0, 4, 3, 5]);
        assert_eq!(Permutation::from_mapping(&m).to_string(), "(1,2,3)(4,5)");
    }
}
