//! Knuth-Morris-Pratt matching and the rotation exponents of a cycle
//! projection.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrMatchError {
    #[error("pattern must be nonempty")]
    EmptyPattern,
    #[error("strings have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
}

/// All occurrences of a pattern in a text.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatchResult {
    /// 1-based, strictly ascending start positions.
    pub positions: Vec<usize>,
    /// Symbol comparisons performed, including building the failure table.
    pub comparisons: u64,
}

/// `fail[i]` is the length of the longest proper border of `pattern[..=i]`.
fn failure_table<T: PartialEq>(pattern: &[T], comparisons: &mut u64) -> Vec<usize> {
    let mut fail = vec![0; pattern.len()];
    let mut k = 0;
    for i in 1..pattern.len() {
        loop {
            *comparisons += 1;
            if pattern[i] == pattern[k] {
                k += 1;
                break;
            }
            if k == 0 {
                break;
            }
            k = fail[k - 1];
        }
        fail[i] = k;
    }
    fail
}

/// Every position where `pattern` occurs in `text`, overlapping occurrences
/// included. Runs in `O(|text| + |pattern|)` comparisons.
pub fn kmp_find_all<T: PartialEq>(text: &[T], pattern: &[T]) -> Result<MatchResult, StrMatchError> {
    if pattern.is_empty() {
        return Err(StrMatchError::EmptyPattern);
    }
    let mut comparisons = 0;
    let fail = failure_table(pattern, &mut comparisons);
    let mut positions = Vec::new();
    let mut q = 0;
    for (i, sym) in text.iter().enumerate() {
        loop {
            comparisons += 1;
            if *sym == pattern[q] {
                q += 1;
                break;
            }
            if q == 0 {
                break;
            }
            q = fail[q - 1];
        }
        if q == pattern.len() {
            positions.push(i + 2 - q);
            q = fail[q - 1];
        }
    }
    Ok(MatchResult { positions, comparisons })
}

/// Cyclic right shift by `r`: `a_1..a_k` becomes `a_{k-r+1}..a_k a_1..a_{k-r}`.
pub fn rotate_right<T: Clone>(s: &[T], r: usize) -> Vec<T> {
    if s.is_empty() {
        return Vec::new();
    }
    let r = r % s.len();
    let mut out = Vec::with_capacity(s.len());
    out.extend_from_slice(&s[s.len() - r..]);
    out.extend_from_slice(&s[..s.len() - r]);
    out
}

/// `{ r in [0, k) : rotate_right(vc, r) = wc }`, ascending.
pub fn rotation_exponents<T: PartialEq + Clone>(vc: &[T], wc: &[T]) -> Result<Vec<usize>, StrMatchError> {
    let mut comparisons = 0;
    rotation_exponents_counted(vc, wc, &mut comparisons)
}

/// [`rotation_exponents`], adding the comparisons performed to `comparisons`.
///
/// `rotate_right(vc, r) = wc` holds iff `vc` occurs at 0-based offset `r` of
/// `wc wc`, so the pattern is `vc` and the text is the doubled `wc`. The
/// last symbol of the doubled text is dropped: an occurrence starting at
/// offset `k` would only repeat offset 0.
pub fn rotation_exponents_counted<T: PartialEq + Clone>(
    vc: &[T],
    wc: &[T],
    comparisons: &mut u64,
) -> Result<Vec<usize>, StrMatchError> {
    if vc.len() != wc.len() {
        return Err(StrMatchError::LengthMismatch { left: vc.len(), right: wc.len() });
    }
    let k = vc.len();
    if k == 0 {
        return Err(StrMatchError::EmptyPattern);
    }
    if k == 1 {
        *comparisons += 1;
        return Ok(if vc[0] == wc[0] { vec![0] } else { Vec::new() });
    }
    let mut text = Vec::with_capacity(2 * k - 1);
    text.extend_from_slice(wc);
    text.extend_from_slice(&wc[..k - 1]);
    let found = kmp_find_all(&text, vc)?;
    *comparisons += found.comparisons;
    Ok(found.positions.into_iter().map(|p| p - 1).collect())
}
